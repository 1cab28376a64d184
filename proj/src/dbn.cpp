#include "scf/dbn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "scf/parallel.hpp"

namespace scf {

std::string dbn_class_name(DbnClass cls, int k) {
    switch (cls) {
        case DbnClass::None: return "none";
        case DbnClass::Intra: return "intra";
        case DbnClass::Inter: return "inter(" + std::to_string(k) + ")";
        case DbnClass::Scf: return "scf(" + std::to_string(k) + ")";
        case DbnClass::BmaScf: return "bma-scf(" + std::to_string(k) + ")";
    }
    return "?";
}

DbnClass parse_dbn_class(const std::string& tag) {
    if (tag == "none") return DbnClass::None;
    if (tag == "intra") return DbnClass::Intra;
    if (tag == "inter") return DbnClass::Inter;
    if (tag == "scf") return DbnClass::Scf;
    if (tag == "bma-scf") return DbnClass::BmaScf;
    throw ValidationError("unknown model class '" + tag +
                          "' (expected none, intra, inter, scf, bma-scf)");
}

namespace {

std::vector<int> iota_ids(int from, int count) {
    std::vector<int> ids(count);
    std::iota(ids.begin(), ids.end(), from);
    return ids;
}

// Sorted raw parent ids of one child, for count_stats.
std::vector<int> flat_parents(const ParentSet& ps) {
    std::vector<int> parents = ps.inter;
    if (ps.has_intra()) parents.push_back(ps.intra);
    std::sort(parents.begin(), parents.end());
    return parents;
}

CategoricalDataset first_slices(const SequenceDataset& seqs) {
    CategoricalDataset out;
    out.variables = seqs.variables;
    for (const auto& seq : seqs.sequences) out.rows.push_back(seq.front());
    return out;
}

}  // namespace

const WeightModel& DbnModel::weight_model() const {
    if (cls != DbnClass::BmaScf) throw DataError("model class has no averaging state");
    if (!wm_) {
        const int n = m();
        ScoreConfig cfg;
        cfg.ess = ess;
        cfg.k = k;
        wm_ = std::make_shared<WeightModel>(iota_ids(n, n), iota_ids(0, n), transitions, cfg);
    }
    return *wm_;
}

DbnModel learn_dbn(const SequenceDataset& train, DbnClass cls, int k, const ScoreConfig& config) {
    if (train.n_transitions() < 1) throw DataError("training data has no transitions");
    DbnModel model;
    model.variables = train.variables;
    model.cls = cls;
    model.k = cls == DbnClass::None || cls == DbnClass::Intra ? 0 : k;
    model.ess = config.ess;
    const int m = model.m();

    const TransitionPair pair = to_transitions(train);
    const CategoricalDataset combined = hstack_pair(pair.prev, pair.next, "_prev", "_next");
    const std::vector<int> prev_ids = iota_ids(0, m);
    const std::vector<int> next_ids = iota_ids(m, m);

    ScoreConfig cfg = config;
    cfg.k = model.k;
    StructureConstraints constraints;

    switch (cls) {
        case DbnClass::None: {
            cfg.k = 0;
            constraints.no_intra = true;
            model.gplus = learn_cmap_scf(next_ids, {}, combined, cfg, constraints);
            break;
        }
        case DbnClass::Intra: {
            cfg.k = 0;
            model.gplus = learn_cmap_scf(next_ids, {}, combined, cfg, constraints);
            break;
        }
        case DbnClass::Inter: {
            constraints.no_intra = true;
            model.gplus = learn_cmap_scf(next_ids, prev_ids, combined, cfg, constraints);
            break;
        }
        case DbnClass::Scf: {
            model.gplus = learn_cmap_scf(next_ids, prev_ids, combined, cfg, constraints);
            break;
        }
        case DbnClass::BmaScf: {
            model.transitions = combined;
            model.gplus = model.weight_model().map_structure();
            break;
        }
    }
    model.train_score = model.gplus.total_score;

    if (cls != DbnClass::BmaScf) {
        model.gplus_counts.reserve(m);
        for (int i = 0; i < m; ++i)
            model.gplus_counts.push_back(
                count_stats(combined, next_ids[i], flat_parents(model.gplus.parents[i])));
    }

    // Initial-slice structure: plain MAP forest over first observations.
    const CategoricalDataset firsts = first_slices(train);
    ScoreConfig g0_cfg = config;
    g0_cfg.k = 0;
    model.g0 = learn_cmap_scf(prev_ids, {}, firsts, g0_cfg);
    model.g0_counts.reserve(m);
    for (int i = 0; i < m; ++i)
        model.g0_counts.push_back(count_stats(firsts, i, flat_parents(model.g0.parents[i])));

    return model;
}

namespace {

EvalReport eval_structural(const DbnModel& model, const CategoricalDataset& combined,
                           EvalMode mode) {
    const int m = model.m();
    const long long n_rows = combined.n_rows();
    std::vector<int> cards;
    for (const auto& v : combined.variables) cards.push_back(v.cardinality);

    std::vector<std::vector<int>> parents(m);
    for (int i = 0; i < m; ++i) parents[i] = flat_parents(model.gplus.parents[i]);

    EvalReport report;
    report.model_name = dbn_class_name(model.cls, model.k);
    report.count = n_rows;
    report.per_variable.assign(m, 0.0);

    if (mode == EvalMode::SequentialPredictive) {
        // Posterior updated row by row; the summed total telescopes to the
        // batch posterior predictive score. Inherently serial.
        std::vector<SufficientStats> st = model.gplus_counts;
        for (long long r = 0; r < n_rows; ++r) {
            const auto& row = combined.rows[r];
            for (int i = 0; i < m; ++i) {
                const int child = m + i;
                const double lp =
                    posterior_mean_log_prob(st[i], parents[i], child, row, cards, model.ess);
                report.per_variable[i] += lp;
                long long j = 0;
                for (int p : parents[i]) j = j * cards[p] + row[p];
                ++st[i].counts[j][row[child]];
                ++st[i].row_sums[j];
                ++st[i].total;
            }
        }
    } else {
        // Per-transition scores into per-index slots, then a serial sum, so
        // the parallel and serial paths produce bit-identical totals.
        std::vector<std::vector<double>> slot(n_rows, std::vector<double>(m));
        par::parallel_for(static_cast<int>(n_rows), [&](int r) {
            const auto& row = combined.rows[r];
            for (int i = 0; i < m; ++i)
                slot[r][i] = posterior_mean_log_prob(model.gplus_counts[i], parents[i], m + i, row,
                                                     cards, model.ess);
        });
        for (long long r = 0; r < n_rows; ++r)
            for (int i = 0; i < m; ++i) report.per_variable[i] += slot[r][i];
    }

    for (int i = 0; i < m; ++i) report.total += report.per_variable[i];
    report.average = report.total / static_cast<double>(report.count);
    return report;
}

EvalReport eval_bma(const DbnModel& model, const CategoricalDataset& combined) {
    const WeightModel& wm = model.weight_model();
    const long long n_rows = combined.n_rows();

    EvalReport report;
    report.model_name = dbn_class_name(model.cls, model.k);
    report.count = n_rows;

    std::vector<double> slot(n_rows);
    par::parallel_for(static_cast<int>(n_rows),
                      [&](int r) { slot[r] = wm.log_predictive_row(combined.rows[r]); });
    for (long long r = 0; r < n_rows; ++r) report.total += slot[r];
    report.average = report.total / static_cast<double>(report.count);
    return report;
}

}  // namespace

EvalReport eval_log_predictive(const DbnModel& model, const SequenceDataset& test, EvalMode mode) {
    if (test.variables.size() != model.variables.size())
        throw DataError("test schema does not match the model");
    for (size_t i = 0; i < test.variables.size(); ++i)
        if (test.variables[i].cardinality != model.variables[i].cardinality)
            throw DataError("cardinality mismatch for variable '" + test.variables[i].name + "'");

    const TransitionPair pair = to_transitions(test);
    const CategoricalDataset combined = hstack_pair(pair.prev, pair.next, "_prev", "_next");
    if (model.cls == DbnClass::BmaScf) {
        if (mode == EvalMode::SequentialPredictive)
            throw ValidationError("sequential-predictive mode applies to structural classes only");
        return eval_bma(model, combined);
    }
    return eval_structural(model, combined, mode);
}

std::vector<EvalReport> compare_model_classes(const SequenceDataset& train,
                                              const SequenceDataset& test,
                                              const std::vector<int>& k_list,
                                              const ScoreConfig& config) {
    std::vector<EvalReport> reports;
    auto run = [&](DbnClass cls, int k) {
        const DbnModel model = learn_dbn(train, cls, k, config);
        EvalReport rep = eval_log_predictive(model, test);
        rep.model_name = dbn_class_name(cls, k);
        reports.push_back(std::move(rep));
    };
    run(DbnClass::None, 0);
    run(DbnClass::Intra, 0);
    for (int k : k_list) run(DbnClass::Inter, k);
    for (int k : k_list) run(DbnClass::Scf, k);
    for (int k : k_list) run(DbnClass::BmaScf, k);
    return reports;
}

}  // namespace scf
