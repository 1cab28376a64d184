#include "scf/scf.hpp"

#include <algorithm>
#include <cmath>

#include "scf/parallel.hpp"

namespace scf {

std::vector<std::vector<int>> inter_subsets(const std::vector<int>& condition, int k) {
    if (k < 0) throw ValidationError("k must be nonnegative");
    std::vector<int> sorted = condition;
    std::sort(sorted.begin(), sorted.end());
    const int n = static_cast<int>(sorted.size());

    std::vector<std::vector<int>> out;
    out.push_back({});  // empty set first: fewest-parents tie-break
    std::vector<int> pick;
    // Size-ordered enumeration, lexicographic within each size.
    for (int size = 1; size <= std::min(k, n); ++size) {
        std::vector<int> idx(size);
        for (int i = 0; i < size; ++i) idx[i] = i;
        while (true) {
            pick.clear();
            for (int i : idx) pick.push_back(sorted[i]);
            out.push_back(pick);
            int i = size - 1;
            while (i >= 0 && idx[i] == n - size + i) --i;
            if (i < 0) break;
            ++idx[i];
            for (int j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    return out;
}

namespace {

CandidateCell best_completion(const CategoricalDataset& data, int child, int intra,
                              const std::vector<std::vector<int>>& subsets,
                              const std::vector<int>& condition, const ScoreConfig& config) {
    CandidateCell best;
    for (const auto& subset : subsets) {
        ParentSet ps;
        ps.intra = intra;
        ps.inter = subset;
        const double prior = structure_log_prior(ps, condition, config);
        if (std::isinf(prior)) continue;  // forbidden under alpha = inf
        std::vector<int> parents = subset;
        if (intra >= 0) {
            parents.push_back(intra);
            std::sort(parents.begin(), parents.end());
        }
        const double score = local_score_bdeu(count_stats(data, child, parents), config.ess) + prior;
        if (score > best.score) {
            best.score = score;
            best.inter = subset;
        }
    }
    return best;
}

template <typename ForLoop>
CandidateTable build_table(const std::vector<int>& targets, const std::vector<int>& condition,
                           const CategoricalDataset& data, const ScoreConfig& config,
                           ForLoop&& for_loop) {
    for (int t : targets)
        for (int c : condition)
            if (t == c) throw DataError("target and condition sets overlap at " + std::to_string(t));

    CandidateTable table;
    table.targets = targets;
    table.condition = condition;
    const int n = static_cast<int>(targets.size());
    table.cells.assign(n, std::vector<CandidateCell>(n));
    table.root_cells.assign(n, CandidateCell{});
    const auto subsets = inter_subsets(condition, config.k);

    // One work item per (child, intra-or-none) cell; cells are independent.
    for_loop(n * (n + 1), [&](int item) {
        const int i = item / (n + 1);
        const int j = item % (n + 1);
        if (j == n) {
            table.root_cells[i] = best_completion(data, targets[i], -1, subsets, condition, config);
        } else if (j != i) {
            table.cells[j][i] =
                best_completion(data, targets[i], targets[j], subsets, condition, config);
        }
    });
    return table;
}

}  // namespace

CandidateTable build_candidate_table(const std::vector<int>& targets,
                                     const std::vector<int>& condition,
                                     const CategoricalDataset& data, const ScoreConfig& config) {
    return build_table(targets, condition, data, config,
                       [](int n, auto&& body) { par::parallel_for(n, body); });
}

CandidateTable build_candidate_table_serial(const std::vector<int>& targets,
                                            const std::vector<int>& condition,
                                            const CategoricalDataset& data,
                                            const ScoreConfig& config) {
    return build_table(targets, condition, data, config,
                       [](int n, auto&& body) { par::serial_for(n, body); });
}

ScfStructure learn_cmap_scf(const std::vector<int>& targets, const std::vector<int>& condition,
                            const CategoricalDataset& data, const ScoreConfig& config,
                            const StructureConstraints& constraints) {
    const CandidateTable table = build_candidate_table(targets, condition, data, config);
    const int n = static_cast<int>(targets.size());

    RootedDigraph g = RootedDigraph::make(n);
    for (int i = 0; i < n; ++i) {
        g.rho[i] = table.root_cells[i].score;
        if (constraints.no_intra) continue;
        for (int j = 0; j < n; ++j)
            if (j != i) g.lambda[j][i] = table.cells[j][i].score;
    }
    const Forest forest = constraints.single_tree && n > 1 ? max_directed_spanning_tree(g)
                                                           : max_directed_spanning_forest(g);

    ScfStructure s;
    s.targets = targets;
    s.parents.resize(n);
    for (int i = 0; i < n; ++i) {
        const int p = forest.parent[i];
        if (p < 0) {
            s.parents[i].inter = table.root_cells[i].inter;
        } else {
            s.parents[i].intra = targets[p];
            s.parents[i].inter = table.cells[p][i].inter;
        }
    }
    s.total_score = forest.total_score;
    validate_structure(s, condition, config.k);
    return s;
}

ScfPair learn_map_scf_pair(const CategoricalDataset& prev, const CategoricalDataset& next,
                           const ScoreConfig& config, const StructureConstraints& constraints) {
    const int m = prev.n_vars();
    if (next.n_vars() != m) throw DataError("slice schemas differ");

    std::vector<int> prev_ids(m), next_ids(m);
    for (int i = 0; i < m; ++i) {
        prev_ids[i] = i;
        next_ids[i] = m + i;
    }

    ScfPair pair;
    pair.prev = learn_cmap_scf(prev_ids, {}, prev, config, constraints);
    const CategoricalDataset combined = hstack_pair(prev, next, "_prev", "_next");
    pair.next = learn_cmap_scf(next_ids, prev_ids, combined, config, constraints);
    return pair;
}

double score_structure(const ScfStructure& s, const std::vector<int>& condition,
                       const CategoricalDataset& data, const ScoreConfig& config) {
    double total = 0.0;
    for (int i = 0; i < s.n(); ++i) {
        const ParentSet& ps = s.parents[i];
        std::vector<int> parents = ps.inter;
        if (ps.has_intra()) {
            parents.push_back(ps.intra);
            std::sort(parents.begin(), parents.end());
        }
        total += local_score_bdeu(count_stats(data, s.targets[i], parents), config.ess) +
                 structure_log_prior(ps, condition, config);
    }
    return total;
}

}  // namespace scf
