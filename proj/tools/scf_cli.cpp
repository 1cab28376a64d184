// Command-line front end: DBN learning/evaluation, classifier cross-
// validation and penalty sweeps, synthetic data generation, DOT export.
// Exit codes: 0 success, 2 usage/validation problems, 3 data/model errors.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "scf/classify.hpp"
#include "scf/dataset.hpp"
#include "scf/dbn.hpp"
#include "scf/discretize.hpp"
#include "scf/model_io.hpp"
#include "scf/parallel.hpp"
#include "scf/rng.hpp"
#include "scf/synth.hpp"

using json = nlohmann::ordered_json;
using namespace scf;

namespace {

// Input problems the user can fix from the command line (bad path, empty
// file) count as validation; malformed content is a data error.
void check_input_file(const std::string& path) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::exists(path, ec)) throw ValidationError("input file does not exist: " + path);
    if (fs::file_size(path, ec) == 0) throw ValidationError("input file is empty: " + path);
}

SequenceDataset load_sequences_checked(const std::string& path) {
    check_input_file(path);
    SequenceDataset seqs = load_sequences_csv(path);
    if (seqs.sequences.empty()) throw ValidationError("no sequences in " + path);
    return seqs;
}

MixedTable load_table_checked(const std::string& path) {
    check_input_file(path);
    return load_csv(path, CsvOptions{});
}

uint64_t effective_seed(uint64_t flag_seed) {
    if (const char* env = std::getenv("SCF_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw ValidationError("SCF_SEED is not an unsigned integer: " + std::string(env));
        }
    }
    return flag_seed;
}

std::vector<double> parse_grid(const std::string& spec) {
    // "a:b:step" inclusive grid, or a single value.
    std::vector<double> grid;
    const auto c1 = spec.find(':');
    if (c1 == std::string::npos) {
        grid.push_back(std::stod(spec));
        return grid;
    }
    const auto c2 = spec.find(':', c1 + 1);
    if (c2 == std::string::npos) throw ValidationError("grid must be start:stop:step");
    const double start = std::stod(spec.substr(0, c1));
    const double stop = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
    const double step = std::stod(spec.substr(c2 + 1));
    if (step <= 0 || stop < start) throw ValidationError("grid must be start:stop:step with step > 0");
    for (int i = 0;; ++i) {
        const double a = start + i * step;
        if (a > stop + 1e-12) break;
        grid.push_back(a);
    }
    return grid;
}

json report_to_json(const EvalReport& rep) {
    json js;
    js["model"] = rep.model_name;
    js["average_log_prob"] = rep.average;
    js["transitions"] = rep.count;
    js["total_log_prob"] = rep.total;
    if (!rep.per_variable.empty()) js["per_variable_total"] = rep.per_variable;
    return js;
}

json accuracy_to_json(const AccuracyReport& rep) {
    json js;
    js["mean_accuracy"] = rep.mean;
    js["sd"] = rep.sd;
    js["fold_accuracy"] = rep.fold_accuracy;
    js["degenerate_folds"] = rep.degenerate_folds;
    js["confusion"] = rep.confusion;
    return js;
}

void emit(const json& js, const std::string& out_path) {
    const std::string text = js.dump(2) + "\n";
    std::cout << text;
    if (!out_path.empty()) atomic_write_text(out_path, text);
}

std::string structure_summary(const ScfStructure& s, const std::vector<Variable>& vars,
                              int next_offset) {
    // next_offset > 0 renders combined-table ids: prev 0..m-1, next m..2m-1.
    auto name = [&](int id) {
        if (next_offset > 0 && id >= next_offset)
            return vars[id - next_offset].name + "[t]";
        return next_offset > 0 ? vars[id].name + "[t-1]" : vars[id].name;
    };
    std::ostringstream os;
    for (int i = 0; i < s.n(); ++i) {
        os << "  " << name(s.targets[i]) << " <-";
        if (!s.parents[i].has_intra() && s.parents[i].inter.empty()) os << " (root)";
        if (s.parents[i].has_intra()) os << ' ' << name(s.parents[i].intra);
        for (int p : s.parents[i].inter) os << ' ' << name(p);
        os << '\n';
    }
    return os.str();
}

// --- subcommands -------------------------------------------------------

int cmd_learn_dbn(const std::string& in, const std::string& cls_tag, int k, double ess,
                  const std::string& out) {
    const SequenceDataset train = load_sequences_checked(in);
    ScoreConfig config;
    config.ess = ess;
    config.k = k;
    const DbnModel model = learn_dbn(train, parse_dbn_class(cls_tag), k, config);
    save_dbn_model(model, out);
    std::cout << "model " << dbn_class_name(model.cls, model.k) << ", "
              << train.n_transitions() << " training transitions\n"
              << "transition structure:\n"
              << structure_summary(model.gplus, model.variables, model.m())
              << "training score " << model.train_score << '\n'
              << "wrote " << out << '\n';
    return 0;
}

int cmd_eval_dbn(const std::string& model_path, const std::string& test_path, bool compare,
                 const std::string& train_path, const std::vector<int>& k_list, double ess,
                 bool sequential, const std::string& out) {
    const SequenceDataset test = load_sequences_checked(test_path);
    if (compare) {
        const SequenceDataset train = load_sequences_checked(train_path);
        ScoreConfig config;
        config.ess = ess;
        const std::vector<EvalReport> reports =
            compare_model_classes(train, test, k_list, config);
        json js;
        js["reports"] = json::array();
        std::cout << "model            avg-logprob   transitions\n";
        for (const auto& rep : reports) {
            std::ostringstream row;
            row.setf(std::ios::fixed);
            row.precision(6);
            row << rep.model_name;
            for (size_t p = rep.model_name.size(); p < 17; ++p) row << ' ';
            row << rep.average << "     " << rep.count;
            std::cout << row.str() << '\n';
            js["reports"].push_back(report_to_json(rep));
        }
        if (!out.empty()) atomic_write_text(out, js.dump(2) + "\n");
        return 0;
    }
    const DbnModel model = load_dbn_model(model_path);
    const EvalReport rep = eval_log_predictive(
        model, test, sequential ? EvalMode::SequentialPredictive : EvalMode::PosteriorMean);
    emit(report_to_json(rep), out);
    return 0;
}

int cmd_classify(const std::string& in, const std::string& class_col, const std::string& variant,
                 double alpha, int folds, double ess, uint64_t seed, int noise, bool noise_set,
                 bool synth_weak, int relevant, double p, long long rows, long long test_rows,
                 int repeats, const std::string& sweep_spec, const std::string& save_model,
                 const std::string& out) {
    ScoreConfig config;
    config.ess = ess;
    config.k = 1;

    if (!sweep_spec.empty()) {
        const std::vector<double> grid = parse_grid(sweep_spec);
        std::vector<SweepPoint> points;
        json js;
        if (synth_weak) {
            SweepProtocol proto;
            proto.n_relevant = relevant;
            proto.n_noise = noise_set ? noise : 20;
            proto.p = p;
            proto.n_train = rows;
            proto.n_test = test_rows;
            proto.repeats = repeats;
            proto.seed = seed;
            points = penalty_sweep_synthetic(proto, grid, config);
            js["protocol"] = {{"relevant", proto.n_relevant}, {"noise", proto.n_noise},
                              {"p", proto.p},                 {"train_rows", proto.n_train},
                              {"test_rows", proto.n_test},    {"repeats", proto.repeats},
                              {"seed", proto.seed}};
        } else {
            MixedTable table = load_table_checked(in);
            const DropMissingResult dropped = drop_missing(table);
            const DiscretizeResult disc = discretize_entropy_mdl(dropped.table, class_col);
            const int class_id = disc.data.var_index(class_col);
            CategoricalDataset data = disc.data;
            if (noise > 0) data = add_noise_features(data, noise, mix_seed(seed, 0xaddf));
            points = penalty_sweep(data, class_id, grid, folds, seed, config);
        }
        js["points"] = json::array();
        std::cout << "alpha   mean-accuracy   sd        se\n";
        for (const auto& pt : points) {
            std::ostringstream row;
            row.setf(std::ios::fixed);
            row.precision(4);
            row << pt.alpha << "  " << pt.mean_accuracy << "          " << pt.sd << "    " << pt.se;
            std::cout << row.str() << '\n';
            js["points"].push_back({{"alpha", pt.alpha},
                                    {"mean_accuracy", pt.mean_accuracy},
                                    {"sd", pt.sd},
                                    {"se", pt.se}});
        }
        if (!out.empty()) atomic_write_text(out, js.dump(2) + "\n");
        return 0;
    }

    const NbVariant var = parse_variant(variant);
    CategoricalDataset data;
    int class_id;
    if (synth_weak) {
        data = synth_weak_features(relevant, 0, p, rows, seed);
        class_id = 0;
    } else {
        MixedTable table = load_table_checked(in);
        const DropMissingResult dropped = drop_missing(table);
        if (dropped.removed > 0)
            std::cout << "dropped " << dropped.removed << " rows with missing values\n";
        const DiscretizeResult disc = discretize_entropy_mdl(dropped.table, class_col);
        data = disc.data;
        class_id = data.var_index(class_col);
    }
    if (noise > 0) data = add_noise_features(data, noise, mix_seed(seed, 0xaddf));

    const AccuracyReport rep = crossval_accuracy(data, class_id, var, alpha, folds, seed, config);
    json js;
    js["variant"] = variant;
    js["alpha"] = std::isinf(alpha) ? json("inf") : json(alpha);
    js["folds"] = folds;
    js["seed"] = seed;
    const json acc = accuracy_to_json(rep);
    for (auto it = acc.begin(); it != acc.end(); ++it) js[it.key()] = it.value();
    emit(js, out);

    if (!save_model.empty()) {
        const ClassifierModel model = learn_classifier(data, class_id, var, alpha, config);
        save_classifier_model(model, save_model);
        std::cout << "wrote " << save_model << '\n';
    }
    return 0;
}

int cmd_export_dot(const std::string& model_path, const std::string& out) {
    check_input_file(model_path);
    std::ostringstream dot;
    const std::string kind = peek_model_kind(model_path);
    if (kind == "scf-dbn-model") {
        const DbnModel model = load_dbn_model(model_path);
        const int m = model.m();
        dot << "digraph dbn {\n  rankdir=LR;\n";
        dot << "  subgraph cluster_prev {\n    label=\"t-1\";\n";
        for (const auto& v : model.variables) dot << "    prev_" << v.name << " [label=\"" << v.name << "\"];\n";
        dot << "  }\n  subgraph cluster_next {\n    label=\"t\";\n";
        for (const auto& v : model.variables) dot << "    next_" << v.name << " [label=\"" << v.name << "\"];\n";
        dot << "  }\n";
        for (int i = 0; i < model.gplus.n(); ++i) {
            const std::string child = "next_" + model.variables[i].name;
            const ParentSet& ps = model.gplus.parents[i];
            if (ps.has_intra())
                dot << "  next_" << model.variables[ps.intra - m].name << " -> " << child << ";\n";
            for (int pr : ps.inter)
                dot << "  prev_" << model.variables[pr].name << " -> " << child << ";\n";
        }
        dot << "}\n";
    } else {
        const ClassifierModel model = load_classifier_model(model_path);
        dot << "digraph classifier {\n";
        dot << "  " << model.variables[model.class_id].name << " [shape=doublecircle];\n";
        for (int i = 0; i < model.structure.n(); ++i)
            dot << "  " << model.variables[model.structure.targets[i]].name << ";\n";
        for (int i = 0; i < model.structure.n(); ++i) {
            const std::string child = model.variables[model.structure.targets[i]].name;
            const ParentSet& ps = model.structure.parents[i];
            if (ps.has_intra()) dot << "  " << model.variables[ps.intra].name << " -> " << child << ";\n";
            for (int pr : ps.inter) dot << "  " << model.variables[pr].name << " -> " << child << ";\n";
        }
        dot << "}\n";
    }
    atomic_write_text(out, dot.str());
    std::cout << "wrote " << out << '\n';
    return 0;
}

int cmd_synth(const std::string& kind, const std::string& out, int relevant, int noise, double p,
              long long rows, uint64_t seed, int vars, double strength, long long timesteps,
              int sequences) {
    if (kind == "weak") {
        const CategoricalDataset data = synth_weak_features(relevant, noise, p, rows, seed);
        save_csv(data, out);
        std::cout << "wrote " << out << " (" << data.n_rows() << " rows, " << data.n_vars()
                  << " columns)\n";
        return 0;
    }
    if (kind == "dbn") {
        const GroundTruthDbn truth = random_scf1_truth(vars, strength, seed);
        const SequenceDataset seqs =
            synth_dbn_sequences(truth, timesteps, mix_seed(seed, 0x5eq_ignore), sequences);
        save_sequences_csv(seqs, out);
        std::cout << "wrote " << out << " (" << sequences << " sequences, " << seqs.n_transitions()
                  << " transitions)\n";
        return 0;
    }
    throw ValidationError("unknown synth kind '" + kind + "' (expected weak or dbn)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Selectively conditioned forests: exact MAP learning and Bayesian model "
                 "averaging for DBN transition models and augmented naive Bayes classifiers"};
    app.require_subcommand(1);

    uint64_t seed = 0;
    int threads = 0;
    app.add_option("--seed", seed, "RNG seed (env SCF_SEED overrides)")->capture_default_str();
    app.add_option("--threads", threads, "worker thread cap (0 = all cores)")
        ->capture_default_str();

    // learn-dbn
    auto* learn = app.add_subcommand("learn-dbn", "learn a two-slice DBN from sequence CSV");
    std::string ld_in, ld_cls = "scf", ld_out;
    int ld_k = 1;
    double ld_ess = 20.0;
    learn->add_option("--in", ld_in, "sequence CSV (leading seq_id column)")->required();
    learn->add_option("--class", ld_cls, "model class: none, intra, inter, scf, bma-scf")
        ->capture_default_str();
    learn->add_option("--k", ld_k, "max previous-slice parents per variable")
        ->check(CLI::Range(0, 64))->capture_default_str();
    learn->add_option("--ess", ld_ess, "BDeu equivalent sample size")
        ->check(CLI::PositiveNumber)->capture_default_str();
    learn->add_option("--out", ld_out, "model file to write")->required();

    // eval-dbn
    auto* eval = app.add_subcommand("eval-dbn", "average log P(next|prev) on withheld sequences");
    std::string ev_model, ev_test, ev_train, ev_out;
    bool ev_compare = false, ev_sequential = false;
    std::vector<int> ev_klist{1};
    double ev_ess = 20.0;
    eval->add_option("--model", ev_model, "model file from learn-dbn");
    eval->add_option("--test", ev_test, "test sequence CSV")->required();
    eval->add_flag("--compare", ev_compare, "learn and evaluate every model class");
    eval->add_option("--train", ev_train, "training sequence CSV (with --compare)");
    eval->add_option("--k-list", ev_klist, "k values for --compare")->delimiter(',');
    eval->add_option("--ess", ev_ess, "BDeu equivalent sample size (with --compare)")
        ->check(CLI::PositiveNumber)->capture_default_str();
    eval->add_flag("--sequential", ev_sequential,
                   "update the posterior across test transitions (structural classes)");
    eval->add_option("--out", ev_out, "report file to write");

    // classify
    auto* cls = app.add_subcommand("classify", "cross-validated augmented naive Bayes");
    std::string cl_in, cl_class = "class", cl_variant = "sfan", cl_sweep, cl_save, cl_out;
    double cl_alpha = 0.0, cl_p = 0.6, cl_ess = 10.0;
    int cl_folds = 10, cl_noise = 0, cl_relevant = 10, cl_repeats = 100;
    long long cl_rows = 100, cl_test_rows = 100;
    bool cl_synth = false;
    cls->add_option("--in", cl_in, "CSV with a class column");
    cls->add_option("--class-col", cl_class, "class column name")->capture_default_str();
    cls->add_option("--variant", cl_variant, "nb, tan, fan, stan, sfan")->capture_default_str();
    cls->add_option("--alpha", cl_alpha, "exclusion penalty (stan/sfan)")
        ->check(CLI::NonNegativeNumber)->capture_default_str();
    cls->add_option("--folds", cl_folds, "cross-validation folds")
        ->check(CLI::Range(2, 1000))->capture_default_str();
    cls->add_option("--ess", cl_ess, "BDeu equivalent sample size")
        ->check(CLI::PositiveNumber)->capture_default_str();
    auto* noise_opt = cls->add_option("--noise", cl_noise, "append this many uniform noise features")
        ->check(CLI::NonNegativeNumber)->capture_default_str();
    cls->add_flag("--synth-weak", cl_synth, "use the synthetic weak-feature generator");
    cls->add_option("--relevant", cl_relevant, "synthetic: weakly relevant features")
        ->capture_default_str();
    cls->add_option("--p", cl_p, "synthetic: P(feature = class)")->capture_default_str();
    cls->add_option("--rows", cl_rows, "synthetic: training rows")->capture_default_str();
    cls->add_option("--test-rows", cl_test_rows, "synthetic sweep: test rows per repeat")
        ->capture_default_str();
    cls->add_option("--repeats", cl_repeats, "synthetic sweep: repeats")->capture_default_str();
    cls->add_option("--sweep-alpha", cl_sweep, "alpha grid start:stop:step (sweep mode)");
    cls->add_option("--save-model", cl_save, "also fit on all rows and save the model");
    cls->add_option("--out", cl_out, "report file to write");

    // export-dot
    auto* dot = app.add_subcommand("export-dot", "render a model file as DOT graph text");
    std::string xd_model, xd_out;
    dot->add_option("--model", xd_model, "model file")->required();
    dot->add_option("--out", xd_out, "DOT file to write")->required();

    // synth
    auto* synth = app.add_subcommand("synth", "generate synthetic datasets");
    std::string sy_kind = "weak", sy_out;
    int sy_relevant = 10, sy_noise = 20, sy_vars = 8, sy_sequences = 1;
    double sy_p = 0.6, sy_strength = 0.85;
    long long sy_rows = 100, sy_timesteps = 500;
    synth->add_option("--kind", sy_kind, "weak (classification) or dbn (sequences)")
        ->capture_default_str();
    synth->add_option("--out", sy_out, "CSV to write")->required();
    synth->add_option("--relevant", sy_relevant, "weak: relevant features")->capture_default_str();
    synth->add_option("--noise", sy_noise, "weak: noise features")->capture_default_str();
    synth->add_option("--p", sy_p, "weak: P(feature = class)")->capture_default_str();
    synth->add_option("--rows", sy_rows, "weak: rows")->capture_default_str();
    synth->add_option("--vars", sy_vars, "dbn: variables per slice")->capture_default_str();
    synth->add_option("--strength", sy_strength, "dbn: CPT pull toward the favored value")
        ->capture_default_str();
    synth->add_option("--timesteps", sy_timesteps, "dbn: slices per sequence")
        ->capture_default_str();
    synth->add_option("--sequences", sy_sequences, "dbn: sequence count")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        seed = effective_seed(seed);
        par::set_threads(threads);
        if (learn->parsed()) return cmd_learn_dbn(ld_in, ld_cls, ld_k, ld_ess, ld_out);
        if (eval->parsed()) {
            if (ev_compare && ev_train.empty())
                throw ValidationError("--compare requires --train");
            if (!ev_compare && ev_model.empty())
                throw ValidationError("provide --model, or --compare with --train");
            return cmd_eval_dbn(ev_model, ev_test, ev_compare, ev_train, ev_klist, ev_ess,
                                ev_sequential, ev_out);
        }
        if (cls->parsed()) {
            if (!cl_synth && cl_in.empty())
                throw ValidationError("provide --in, or --synth-weak");
            return cmd_classify(cl_in, cl_class, cl_variant, cl_alpha, cl_folds, cl_ess, seed,
                                cl_noise, noise_opt->count() > 0, cl_synth, cl_relevant, cl_p,
                                cl_rows, cl_test_rows, cl_repeats, cl_sweep, cl_save, cl_out);
        }
        if (dot->parsed()) return cmd_export_dot(xd_model, xd_out);
        if (synth->parsed())
            return cmd_synth(sy_kind, sy_out, sy_relevant, sy_noise, sy_p, sy_rows, seed, sy_vars,
                             sy_strength, sy_timesteps, sy_sequences);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
