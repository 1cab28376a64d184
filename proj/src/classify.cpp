#include "scf/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "scf/discretize.hpp"
#include "scf/parallel.hpp"
#include "scf/rng.hpp"
#include "scf/synth.hpp"

namespace scf {

std::string variant_name(NbVariant v) {
    switch (v) {
        case NbVariant::Nb: return "nb";
        case NbVariant::Tan: return "tan";
        case NbVariant::Fan: return "fan";
        case NbVariant::Stan: return "stan";
        case NbVariant::Sfan: return "sfan";
    }
    return "?";
}

NbVariant parse_variant(const std::string& tag) {
    if (tag == "nb") return NbVariant::Nb;
    if (tag == "tan") return NbVariant::Tan;
    if (tag == "fan") return NbVariant::Fan;
    if (tag == "stan") return NbVariant::Stan;
    if (tag == "sfan") return NbVariant::Sfan;
    throw ValidationError("unknown variant '" + tag + "' (expected nb, tan, fan, stan, sfan)");
}

namespace {

std::vector<int> feature_ids(int n_vars, int class_id) {
    std::vector<int> ids;
    ids.reserve(n_vars - 1);
    for (int i = 0; i < n_vars; ++i)
        if (i != class_id) ids.push_back(i);
    return ids;
}

std::vector<int> flat_parents(const ParentSet& ps) {
    std::vector<int> parents = ps.inter;
    if (ps.has_intra()) parents.push_back(ps.intra);
    std::sort(parents.begin(), parents.end());
    return parents;
}

std::vector<int> cardinalities(const std::vector<Variable>& vars) {
    std::vector<int> cards;
    cards.reserve(vars.size());
    for (const auto& v : vars) cards.push_back(v.cardinality);
    return cards;
}

// Smoothed class prior: (N_y + ess/r) / (N + ess).
std::vector<double> log_class_prior(const SufficientStats& class_counts, double ess) {
    std::vector<double> out(class_counts.r);
    for (int y = 0; y < class_counts.r; ++y)
        out[y] = std::log((static_cast<double>(class_counts.counts[0][y]) + ess / class_counts.r) /
                          (static_cast<double>(class_counts.total) + ess));
    return out;
}

ClassDistribution normalize_logs(std::vector<double> logp) {
    ClassDistribution dist;
    const double lse = log_sum_exp(logp);
    dist.probs.resize(logp.size());
    for (size_t y = 0; y < logp.size(); ++y) dist.probs[y] = std::exp(logp[y] - lse);
    dist.argmax = 0;
    for (size_t y = 1; y < logp.size(); ++y)
        if (logp[y] > logp[dist.argmax]) dist.argmax = static_cast<int>(y);
    return dist;
}

}  // namespace

void validate_classifier(const ClassifierModel& model) {
    const ScfStructure& s = model.structure;
    validate_structure(s, {model.class_id}, 1);
    const bool needs_class =
        model.variant == NbVariant::Nb || model.variant == NbVariant::Tan ||
        model.variant == NbVariant::Fan;
    const bool needs_tree = model.variant == NbVariant::Tan || model.variant == NbVariant::Stan;

    int roots = 0;
    for (int i = 0; i < s.n(); ++i) {
        const ParentSet& ps = s.parents[i];
        if (needs_class && ps.inter != std::vector<int>{model.class_id})
            throw DataError(variant_name(model.variant) + " structure dropped the class edge on '" +
                            model.variables[s.targets[i]].name + "'");
        if (model.variant == NbVariant::Nb && ps.has_intra())
            throw DataError("nb structure has a feature-to-feature edge");
        if (!ps.has_intra()) ++roots;
    }
    if (needs_tree && s.n() > 1 && roots != 1)
        throw DataError(variant_name(model.variant) + " structure has " + std::to_string(roots) +
                        " intra roots, expected a single tree");
}

ClassifierModel learn_classifier(const CategoricalDataset& train, int class_id, NbVariant variant,
                                 double alpha, const ScoreConfig& config) {
    if (class_id < 0 || class_id >= train.n_vars()) throw ValidationError("class id out of range");
    if (train.variables[class_id].cardinality < 2)
        throw DataError("class variable '" + train.variables[class_id].name +
                        "' has fewer than 2 values");

    ClassifierModel model;
    model.variables = train.variables;
    model.class_id = class_id;
    model.variant = variant;
    model.ess = config.ess;

    const std::vector<int> features = feature_ids(train.n_vars(), class_id);
    ScoreConfig cfg = config;
    cfg.k = 1;  // the condition set is the single class variable
    StructureConstraints constraints;
    switch (variant) {
        case NbVariant::Nb:
            cfg.alpha = ScoreConfig::inf;
            break;
        case NbVariant::Tan:
            cfg.alpha = ScoreConfig::inf;
            constraints.single_tree = true;
            break;
        case NbVariant::Fan:
            cfg.alpha = ScoreConfig::inf;
            break;
        case NbVariant::Stan:
            cfg.alpha = alpha;
            constraints.single_tree = true;
            break;
        case NbVariant::Sfan:
            cfg.alpha = alpha;
            break;
    }
    model.alpha = cfg.alpha;

    if (variant == NbVariant::Nb) {
        model.structure.targets = features;
        model.structure.parents.assign(features.size(), ParentSet{-1, {class_id}});
        model.structure.total_score =
            score_structure(model.structure, {class_id}, train, cfg);
    } else {
        model.structure = learn_cmap_scf(features, {class_id}, train, cfg, constraints);
    }

    model.feature_counts.reserve(features.size());
    for (int i = 0; i < model.structure.n(); ++i)
        model.feature_counts.push_back(
            count_stats(train, model.structure.targets[i], flat_parents(model.structure.parents[i])));
    model.class_counts = count_stats(train, class_id, {});
    validate_classifier(model);
    return model;
}

ClassDistribution predict(const ClassifierModel& model, const std::vector<int>& row) {
    if (row.size() != model.variables.size()) throw DataError("row width does not match the model");
    const std::vector<int> cards = cardinalities(model.variables);
    const std::vector<double> prior = log_class_prior(model.class_counts, model.ess);

    std::vector<double> logp(model.n_classes());
    std::vector<int> clamped = row;
    for (int y = 0; y < model.n_classes(); ++y) {
        clamped[model.class_id] = y;
        double lp = prior[y];
        for (int i = 0; i < model.structure.n(); ++i)
            lp += posterior_mean_log_prob(model.feature_counts[i],
                                          flat_parents(model.structure.parents[i]),
                                          model.structure.targets[i], clamped, cards, model.ess);
        logp[y] = lp;
    }
    return normalize_logs(std::move(logp));
}

BmaClassifier::BmaClassifier(const CategoricalDataset& train, int class_id, double alpha,
                             const ScoreConfig& config)
    : class_id_(class_id), n_classes_(train.variables[class_id].cardinality) {
    ScoreConfig cfg = config;
    cfg.k = 1;
    cfg.alpha = alpha;
    log_class_prior_ = log_class_prior(count_stats(train, class_id, {}), cfg.ess);
    features_ = std::make_unique<WeightModel>(feature_ids(train.n_vars(), class_id),
                                              std::vector<int>{class_id}, train, cfg);
    map_model_ = learn_classifier(train, class_id, NbVariant::Sfan, alpha, config);
}

ClassDistribution BmaClassifier::predict_row(const std::vector<int>& row) const {
    std::vector<double> logp(n_classes_);
    std::vector<int> clamped = row;
    try {
        for (int y = 0; y < n_classes_; ++y) {
            clamped[class_id_] = y;
            logp[y] = log_class_prior_[y] + features_->log_predictive_row(clamped);
        }
    } catch (const SingularMatrixError&) {
        ClassDistribution dist = predict(map_model_, row);
        dist.map_fallback = true;
        return dist;
    }
    return normalize_logs(std::move(logp));
}

ClassDistribution bma_predict(const CategoricalDataset& train, int class_id,
                              const std::vector<int>& row, double alpha,
                              const ScoreConfig& config) {
    return BmaClassifier(train, class_id, alpha, config).predict_row(row);
}

namespace {

struct FoldOutcome {
    long long hits = 0;
    long long tries = 0;
    bool degenerate = false;
    std::vector<std::vector<long long>> confusion;
};

AccuracyReport merge_folds(const std::vector<FoldOutcome>& outcomes, int n_classes) {
    AccuracyReport report;
    report.confusion.assign(n_classes, std::vector<long long>(n_classes, 0));
    for (const auto& fo : outcomes) {
        if (fo.degenerate) {
            ++report.degenerate_folds;
            continue;
        }
        report.fold_accuracy.push_back(static_cast<double>(fo.hits) /
                                       static_cast<double>(fo.tries));
        for (int a = 0; a < n_classes; ++a)
            for (int b = 0; b < n_classes; ++b) report.confusion[a][b] += fo.confusion[a][b];
    }
    const size_t f = report.fold_accuracy.size();
    if (f == 0) throw DataError("every fold was degenerate (single class value in training)");
    report.mean = std::accumulate(report.fold_accuracy.begin(), report.fold_accuracy.end(), 0.0) /
                  static_cast<double>(f);
    if (f > 1) {
        double ss = 0.0;
        for (double a : report.fold_accuracy) ss += (a - report.mean) * (a - report.mean);
        report.sd = std::sqrt(ss / static_cast<double>(f - 1));
    }
    return report;
}

// One fold on already-categorical data.
FoldOutcome run_fold(const CategoricalDataset& data, int class_id, NbVariant variant, double alpha,
                     const FoldSplit& split, int fold, const ScoreConfig& config) {
    std::vector<long long> train_rows, test_rows;
    for (long long r = 0; r < data.n_rows(); ++r)
        (split.assignment[r] == fold ? test_rows : train_rows).push_back(r);

    const CategoricalDataset train = filter_rows(data, train_rows);
    const int n_classes = data.variables[class_id].cardinality;

    FoldOutcome fo;
    fo.confusion.assign(n_classes, std::vector<long long>(n_classes, 0));
    std::vector<char> present(n_classes, 0);
    for (const auto& row : train.rows) present[row[class_id]] = 1;
    if (std::count(present.begin(), present.end(), 1) < 2) {
        fo.degenerate = true;
        return fo;
    }

    const ClassifierModel model = learn_classifier(train, class_id, variant, alpha, config);
    for (long long r : test_rows) {
        const ClassDistribution dist = predict(model, data.rows[r]);
        const int truth = data.rows[r][class_id];
        ++fo.confusion[truth][dist.argmax];
        fo.hits += dist.argmax == truth;
        ++fo.tries;
    }
    return fo;
}

}  // namespace

AccuracyReport crossval_accuracy(const CategoricalDataset& data, int class_id, NbVariant variant,
                                 double alpha, int folds, uint64_t seed,
                                 const ScoreConfig& config) {
    const FoldSplit split = kfold_split(data.n_rows(), folds, seed);
    std::vector<FoldOutcome> outcomes(folds);
    par::parallel_for(folds, [&](int f) {
        outcomes[f] = run_fold(data, class_id, variant, alpha, split, f, config);
    });
    return merge_folds(outcomes, data.variables[class_id].cardinality);
}

AccuracyReport crossval_accuracy(const MixedTable& data, const std::string& class_column,
                                 NbVariant variant, double alpha, int folds, uint64_t seed,
                                 const ScoreConfig& config) {
    const int class_col = data.column_index(class_column);
    if (class_col < 0) throw DataError("class column '" + class_column + "' not found");
    if (data.all_categorical())
        return crossval_accuracy(data.to_categorical(), class_col, variant, alpha, folds, seed,
                                 config);

    const FoldSplit split = kfold_split(data.n_rows, folds, seed);
    const int n_classes = static_cast<int>(data.columns[class_col].categories.size());
    std::vector<FoldOutcome> outcomes(folds);
    par::parallel_for(folds, [&](int f) {
        std::vector<long long> train_rows;
        for (long long r = 0; r < data.n_rows; ++r)
            if (split.assignment[r] != f) train_rows.push_back(r);
        // Cut points fitted on this fold's training rows only, then applied
        // to the whole table so test rows land in the same bins.
        const DiscretizeResult disc = discretize_entropy_mdl(data, class_column, train_rows);
        outcomes[f] = run_fold(disc.data, class_col, variant, alpha, split, f, config);
    });
    return merge_folds(outcomes, n_classes);
}

std::vector<SweepPoint> penalty_sweep(const CategoricalDataset& data, int class_id,
                                      const std::vector<double>& alpha_grid, int folds,
                                      uint64_t seed, const ScoreConfig& config) {
    if (alpha_grid.empty()) throw ValidationError("alpha grid is empty");
    if (!std::is_sorted(alpha_grid.begin(), alpha_grid.end()))
        throw ValidationError("alpha grid must be sorted ascending");
    std::vector<SweepPoint> points(alpha_grid.size());
    for (size_t a = 0; a < alpha_grid.size(); ++a) {
        const AccuracyReport rep = crossval_accuracy(data, class_id, NbVariant::Sfan,
                                                     alpha_grid[a], folds, seed, config);
        points[a].alpha = alpha_grid[a];
        points[a].mean_accuracy = rep.mean;
        points[a].sd = rep.sd;
        points[a].se = rep.sd / std::sqrt(static_cast<double>(rep.fold_accuracy.size()));
    }
    return points;
}

std::vector<SweepPoint> penalty_sweep_synthetic(const SweepProtocol& protocol,
                                                const std::vector<double>& alpha_grid,
                                                const ScoreConfig& config) {
    if (alpha_grid.empty()) throw ValidationError("alpha grid is empty");
    if (!std::is_sorted(alpha_grid.begin(), alpha_grid.end()))
        throw ValidationError("alpha grid must be sorted ascending");
    if (protocol.repeats < 1) throw ValidationError("need at least one repeat");

    const int n_alpha = static_cast<int>(alpha_grid.size());
    // accuracy[repeat][alpha]; each repeat draws one train/test pair shared
    // across the grid so points are compared on identical data.
    std::vector<std::vector<double>> accuracy(protocol.repeats, std::vector<double>(n_alpha));
    par::parallel_for(protocol.repeats, [&](int rep) {
        const CategoricalDataset train =
            synth_weak_features(protocol.n_relevant, protocol.n_noise, protocol.p,
                                protocol.n_train, mix_seed(protocol.seed, rep, 0));
        const CategoricalDataset test =
            synth_weak_features(protocol.n_relevant, protocol.n_noise, protocol.p, protocol.n_test,
                                mix_seed(protocol.seed, rep, 1));
        for (int a = 0; a < n_alpha; ++a) {
            const ClassifierModel model =
                learn_classifier(train, 0, NbVariant::Sfan, alpha_grid[a], config);
            long long hits = 0;
            for (const auto& row : test.rows) hits += predict(model, row).argmax == row[0];
            accuracy[rep][a] = static_cast<double>(hits) / static_cast<double>(test.n_rows());
        }
    });

    std::vector<SweepPoint> points(n_alpha);
    for (int a = 0; a < n_alpha; ++a) {
        points[a].alpha = alpha_grid[a];
        double sum = 0.0;
        for (int rep = 0; rep < protocol.repeats; ++rep) sum += accuracy[rep][a];
        points[a].mean_accuracy = sum / protocol.repeats;
        double ss = 0.0;
        for (int rep = 0; rep < protocol.repeats; ++rep) {
            const double d = accuracy[rep][a] - points[a].mean_accuracy;
            ss += d * d;
        }
        points[a].sd = protocol.repeats > 1 ? std::sqrt(ss / (protocol.repeats - 1)) : 0.0;
        points[a].se = points[a].sd / std::sqrt(static_cast<double>(protocol.repeats));
    }
    return points;
}

}  // namespace scf
