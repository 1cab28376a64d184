#include "scf/bma.hpp"

#include <algorithm>
#include <cmath>

#include "scf/parallel.hpp"

namespace scf {

double log_sum_exp(const std::vector<double>& logs) {
    double mx = kNegInf;
    for (double v : logs) mx = std::max(mx, v);
    if (std::isinf(mx) && mx < 0) return kNegInf;
    double s = 0.0;
    for (double v : logs) s += std::exp(v - mx);
    return mx + std::log(s);
}

LogWeightMatrix LogWeightMatrix::make(int n) {
    LogWeightMatrix w;
    w.n = n;
    w.targets.resize(n);
    for (int i = 0; i < n; ++i) w.targets[i] = i;
    w.w.assign(n, std::vector<double>(n, kNegInf));
    w.w0.assign(n, kNegInf);
    return w;
}

void LogWeightMatrix::normalize() {
    if (normalized()) return;
    m.assign(n, 0.0);
    for (int j = 0; j < n; ++j) {
        double mx = w0[j];
        for (int i = 0; i < n; ++i)
            if (i != j) mx = std::max(mx, w[i][j]);
        if (std::isinf(mx) && mx < 0)
            throw DataError("weight column " + std::to_string(j) + " has no finite option");
        m[j] = mx;
        w0[j] -= mx;
        for (int i = 0; i < n; ++i)
            if (i != j) w[i][j] -= mx;
    }
}

BmaResult forest_partition(const LogWeightMatrix& logW) {
    if (logW.n == 0) return BmaResult{0.0};
    LogWeightMatrix scaled = logW;
    scaled.normalize();
    const int n = scaled.n;

    // Reduced augmented Laplacian: a_jj = column in-weight sum (root included),
    // a_ij = -w_ij. Its determinant is the sum over rooted forests.
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (int j = 0; j < n; ++j) {
        double diag = std::exp(scaled.w0[j]);
        for (int i = 0; i < n; ++i) {
            if (i == j) continue;
            const double wij = std::exp(scaled.w[i][j]);
            diag += wij;
            a[i][j] = -wij;
        }
        a[j][j] = diag;
    }

    // LU with partial pivoting; log|det| from the pivots.
    double log_det = 0.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-12) throw SingularMatrixError(col, a[piv][col]);
        if (piv != col) std::swap(a[piv], a[col]);
        log_det += std::log(std::abs(a[col][col]));
        for (int r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
        }
    }

    double total = log_det;
    for (double mj : scaled.m) total += mj;
    return BmaResult{total};
}

namespace {

struct CandidateTerms {
    // terms[child][intra option][subset]; option n = no intra parent.
    std::vector<std::vector<std::vector<double>>> terms;
};

LogWeightMatrix assemble_matrix(const std::vector<int>& targets,
                                const CandidateTerms& ct) {
    const int n = static_cast<int>(targets.size());
    LogWeightMatrix w = LogWeightMatrix::make(n);
    w.targets = targets;
    for (int i = 0; i < n; ++i) {
        for (int o = 0; o <= n; ++o) {
            if (o == i) continue;
            const double v = log_sum_exp(ct.terms[i][o]);
            if (o == n) w.w0[i] = v;
            else w.w[o][i] = v;
        }
    }
    return w;
}

template <typename ForLoop>
LogWeightMatrix build_matrix(const std::vector<int>& targets, const std::vector<int>& condition,
                             const CategoricalDataset& train, const CategoricalDataset* query,
                             const ScoreConfig& config, ForLoop&& for_loop) {
    const int n = static_cast<int>(targets.size());
    const auto subsets = inter_subsets(condition, config.k);
    CandidateTerms ct;
    ct.terms.assign(n, std::vector<std::vector<double>>(n + 1));

    for_loop(n, [&](int i) {  // one column per child
        const int child = targets[i];
        for (int o = 0; o <= n; ++o) {
            if (o == i) continue;
            auto& cell = ct.terms[i][o];
            cell.reserve(subsets.size());
            for (const auto& subset : subsets) {
                ParentSet ps;
                ps.intra = o == n ? -1 : targets[o];
                ps.inter = subset;
                const double prior = structure_log_prior(ps, condition, config);
                if (std::isinf(prior) && prior < 0) {
                    cell.push_back(kNegInf);
                    continue;
                }
                std::vector<int> parents = subset;
                if (ps.has_intra()) {
                    parents.push_back(ps.intra);
                    std::sort(parents.begin(), parents.end());
                }
                SufficientStats st = count_stats(train, child, parents);
                if (query) st = combine_stats(st, count_stats(*query, child, parents));
                cell.push_back(local_score_bdeu(st, config.ess) + prior);
            }
        }
    });
    return assemble_matrix(targets, ct);
}

}  // namespace

LogWeightMatrix build_weight_matrix(const std::vector<int>& targets,
                                    const std::vector<int>& condition,
                                    const CategoricalDataset& train,
                                    const CategoricalDataset* query, const ScoreConfig& config) {
    return build_matrix(targets, condition, train, query, config,
                        [](int n, auto&& body) { par::parallel_for(n, body); });
}

LogWeightMatrix build_weight_matrix_serial(const std::vector<int>& targets,
                                           const std::vector<int>& condition,
                                           const CategoricalDataset& train,
                                           const CategoricalDataset* query,
                                           const ScoreConfig& config) {
    return build_matrix(targets, condition, train, query, config,
                        [](int n, auto&& body) { par::serial_for(n, body); });
}

LogWeightMatrix resolve_direction_conditioning(const LogWeightMatrix& logW,
                                               const ScfStructure& map_structure) {
    LogWeightMatrix out = logW;
    // Fold extracted scales back so opposite directions compare in one frame.
    if (out.normalized()) {
        for (int j = 0; j < out.n; ++j) {
            out.w0[j] += out.m[j];
            for (int i = 0; i < out.n; ++i)
                if (i != j) out.w[i][j] += out.m[j];
        }
        out.m.clear();
    }
    if (map_structure.targets != out.targets)
        throw DataError("MAP structure targets do not match the weight matrix");

    for (int i = 0; i < out.n; ++i) {
        for (int j = i + 1; j < out.n; ++j) {
            const double wij = out.w[i][j], wji = out.w[j][i];
            if (std::isinf(wij) || std::isinf(wji)) continue;
            if (std::abs(wij - wji) >= 1e-9) continue;
            const bool map_ij = map_structure.parents[j].intra == out.targets[i];
            const bool map_ji = map_structure.parents[i].intra == out.targets[j];
            if (map_ji && !map_ij) out.w[i][j] = kNegInf;   // keep j -> i
            else out.w[j][i] = kNegInf;                     // keep i -> j (MAP or index order)
        }
    }
    return out;
}

WeightModel::WeightModel(std::vector<int> targets, std::vector<int> condition,
                         const CategoricalDataset& train, const ScoreConfig& config)
    : targets_(std::move(targets)), condition_(std::move(condition)), config_(config) {
    cards_.reserve(train.n_vars());
    for (const auto& v : train.variables) cards_.push_back(v.cardinality);
    const int n = static_cast<int>(targets_.size());
    const auto subsets = inter_subsets(condition_, config_.k);
    cands_.assign(n, std::vector<std::vector<Candidate>>(n + 1));

    par::parallel_for(n, [&](int i) {
        const int child = targets_[i];
        for (int o = 0; o <= n; ++o) {
            if (o == i) continue;
            auto& cell = cands_[i][o];
            for (const auto& subset : subsets) {
                Candidate cand;
                cand.ps.intra = o == n ? -1 : targets_[o];
                cand.ps.inter = subset;
                cand.prior = structure_log_prior(cand.ps, condition_, config_);
                if (std::isinf(cand.prior) && cand.prior < 0) continue;  // forbidden
                cand.parents = subset;
                if (cand.ps.has_intra()) {
                    cand.parents.push_back(cand.ps.intra);
                    std::sort(cand.parents.begin(), cand.parents.end());
                }
                cand.stats = count_stats(train, child, cand.parents);
                cand.ls_train = local_score_bdeu(cand.stats, config_.ess);
                cell.push_back(std::move(cand));
            }
        }
    });

    CandidateTerms ct;
    ct.terms.assign(n, std::vector<std::vector<double>>(n + 1));
    for (int i = 0; i < n; ++i)
        for (int o = 0; o <= n; ++o)
            for (const auto& cand : cands_[i][o])
                ct.terms[i][o].push_back(cand.ls_train + cand.prior);
    train_w_ = assemble_matrix(targets_, ct);

    map_structure_ = map_from_candidates();
    try {
        train_part_exact_ = forest_partition(train_w_).log_partition;
    } catch (const SingularMatrixError& e) {
        train_error_ = e;
    }
    try {
        train_part_cond_ =
            forest_partition(resolve_direction_conditioning(train_w_, map_structure_))
                .log_partition;
    } catch (const SingularMatrixError& e) {
        if (!train_error_) train_error_ = e;
    }
}

LogWeightMatrix WeightModel::assemble(
    const std::vector<std::vector<std::vector<double>>>& terms) const {
    CandidateTerms ct;
    ct.terms = terms;
    return assemble_matrix(targets_, ct);
}

double WeightModel::train_partition() const {
    if (!train_part_exact_) throw *train_error_;
    return *train_part_exact_;
}

LogWeightMatrix WeightModel::query_weights(const CategoricalDataset& query) const {
    const int n = static_cast<int>(targets_.size());
    std::vector<std::vector<std::vector<double>>> terms(n,
                                                        std::vector<std::vector<double>>(n + 1));
    for (int i = 0; i < n; ++i) {
        for (int o = 0; o <= n; ++o) {
            for (const auto& cand : cands_[i][o]) {
                const SufficientStats combined =
                    combine_stats(cand.stats, count_stats(query, targets_[i], cand.parents));
                terms[i][o].push_back(local_score_bdeu(combined, config_.ess) + cand.prior);
            }
        }
    }
    return assemble(terms);
}

LogWeightMatrix WeightModel::query_weights_row(const std::vector<int>& row) const {
    const int n = static_cast<int>(targets_.size());
    std::vector<std::vector<std::vector<double>>> terms(n,
                                                        std::vector<std::vector<double>>(n + 1));
    for (int i = 0; i < n; ++i) {
        const int child = targets_[i];
        for (int o = 0; o <= n; ++o) {
            for (const auto& cand : cands_[i][o]) {
                // One extra row under the Dirichlet posterior of the training
                // counts; adding its log predictive to ls_train equals the
                // batch score of train plus this row.
                const double pred = posterior_mean_log_prob(cand.stats, cand.parents, child, row,
                                                            cards_, config_.ess);
                terms[i][o].push_back(cand.ls_train + pred + cand.prior);
            }
        }
    }
    return assemble(terms);
}

ScfStructure WeightModel::map_from_candidates() const {
    const int n = static_cast<int>(targets_.size());
    RootedDigraph g = RootedDigraph::make(n);
    std::vector<std::vector<const Candidate*>> best(n, std::vector<const Candidate*>(n + 1, nullptr));
    for (int i = 0; i < n; ++i) {
        for (int o = 0; o <= n; ++o) {
            double bw = kNegInf;
            for (const auto& cand : cands_[i][o]) {
                const double v = cand.ls_train + cand.prior;
                if (v > bw) {
                    bw = v;
                    best[i][o] = &cand;
                }
            }
            if (o == n) g.rho[i] = bw;
            else if (o != i) g.lambda[o][i] = bw;
        }
    }
    const Forest forest = max_directed_spanning_forest(g);
    ScfStructure s;
    s.targets = targets_;
    s.parents.resize(n);
    for (int i = 0; i < n; ++i) {
        const int o = forest.parent[i] < 0 ? n : forest.parent[i];
        s.parents[i] = best[i][o]->ps;
    }
    s.total_score = forest.total_score;
    return s;
}

double WeightModel::log_predictive(const LogWeightMatrix& query_w) const {
    if (train_part_exact_) {
        try {
            return forest_partition(query_w).log_partition - *train_part_exact_;
        } catch (const SingularMatrixError&) {
            // fall through to the conditioned pair
        }
    }
    if (!train_part_cond_) throw *train_error_;
    const double qp =
        forest_partition(resolve_direction_conditioning(query_w, map_structure_)).log_partition;
    return qp - *train_part_cond_;
}

double WeightModel::log_predictive_row(const std::vector<int>& row) const {
    return log_predictive(query_weights_row(row));
}

double bma_log_predictive(const std::vector<int>& targets, const std::vector<int>& condition,
                          const CategoricalDataset& train, const CategoricalDataset& query,
                          const ScoreConfig& config) {
    WeightModel model(targets, condition, train, config);
    return model.log_predictive(model.query_weights(query));
}

}  // namespace scf
