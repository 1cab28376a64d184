#ifndef SCF_BMA_HPP
#define SCF_BMA_HPP

#include <optional>
#include <vector>

#include "scf/dataset.hpp"
#include "scf/mdsf.hpp"
#include "scf/scf.hpp"
#include "scf/scoring.hpp"
#include "scf/structure.hpp"

namespace scf {

// Per-edge aggregated log weights over all inter-set completions:
//   w[i][j] = logsumexp over inter subsets of [score term + log prior]
// for i the intra parent of j, and w0[j] the same with no intra parent.
// normalize() pulls the per-column max into m[j], leaving each column's
// largest residual weight exactly 1 so determinant arithmetic stays tame.
struct LogWeightMatrix {
    int n = 0;
    std::vector<int> targets;
    std::vector<std::vector<double>> w;  // w[i][j], i != j
    std::vector<double> w0;
    std::vector<double> m;               // per-column scales; empty until normalized

    static LogWeightMatrix make(int n);
    void normalize();
    bool normalized() const { return !m.empty(); }
};

struct BmaResult {
    double log_partition = 0.0;  // log sum over all SCF structures of structure weight
};

// Sum over every rooted spanning forest of the product of chosen weights,
// computed as a determinant: augmented in-degree Laplacian with the root
// row/column removed (a_jj = column in-weight sum, a_ij = -w_ij), pivoted
// LU in the scaled domain, plus the extracted column scales.
// Throws SingularMatrixError when a pivot falls below 1e-12 after scaling.
BmaResult forest_partition(const LogWeightMatrix& logW);

// Builds the matrix from data. With a query dataset the score term is
// local_score_bdeu(train plus query); without, local_score_bdeu(train).
LogWeightMatrix build_weight_matrix(const std::vector<int>& targets,
                                    const std::vector<int>& condition,
                                    const CategoricalDataset& train,
                                    const CategoricalDataset* query, const ScoreConfig& config);
LogWeightMatrix build_weight_matrix_serial(const std::vector<int>& targets,
                                           const std::vector<int>& condition,
                                           const CategoricalDataset& train,
                                           const CategoricalDataset* query,
                                           const ScoreConfig& config);

// Ill-conditioning fallback: for near-symmetric weight pairs
// (|w[i][j] - w[j][i]| < 1e-9) keep only the direction the MAP structure
// uses; when the MAP structure uses neither, keep lower -> higher index.
// Applied by callers only after forest_partition reports singularity.
LogWeightMatrix resolve_direction_conditioning(const LogWeightMatrix& logW,
                                               const ScfStructure& map_structure);

// log P(query | train) averaged over all SCF structures: the partition built
// from train plus query, minus the partition built from train alone. Falls
// back to the direction-conditioning heuristic if either determinant is
// singular; rethrows if the conditioned matrix is still singular.
double bma_log_predictive(const std::vector<int>& targets, const std::vector<int>& condition,
                          const CategoricalDataset& train, const CategoricalDataset& query,
                          const ScoreConfig& config);

// Precomputed per-candidate training statistics for repeated queries against
// a fixed training set. query_weights_row scores a single combined row in
// O(1) per candidate parent set via the Dirichlet posterior predictive.
// Construction precomputes the MAP structure and both train partitions
// (exact and direction-conditioned), so every const method afterwards is
// safe to call concurrently.
class WeightModel {
  public:
    WeightModel(std::vector<int> targets, std::vector<int> condition,
                const CategoricalDataset& train, const ScoreConfig& config);

    const LogWeightMatrix& train_weights() const { return train_w_; }
    const ScfStructure& map_structure() const { return map_structure_; }
    double train_partition() const;  // exact; throws if it was singular

    LogWeightMatrix query_weights(const CategoricalDataset& query) const;
    LogWeightMatrix query_weights_row(const std::vector<int>& row) const;

    // partition(train plus query) - partition(train). Exact when both
    // determinants are stable; otherwise both sides switch to the
    // direction-conditioned matrices. Throws SingularMatrixError when even
    // the conditioned pair is singular.
    double log_predictive(const LogWeightMatrix& query_w) const;
    double log_predictive_row(const std::vector<int>& row) const;

    const std::vector<int>& targets() const { return targets_; }
    const std::vector<int>& condition() const { return condition_; }
    const ScoreConfig& config() const { return config_; }

  private:
    struct Candidate {
        ParentSet ps;
        std::vector<int> parents;  // sorted ids fed to count_stats
        SufficientStats stats;     // training counts
        double ls_train = 0.0;
        double prior = 0.0;
    };

    LogWeightMatrix assemble(const std::vector<std::vector<std::vector<double>>>& terms) const;
    ScfStructure map_from_candidates() const;

    std::vector<int> targets_;
    std::vector<int> condition_;
    ScoreConfig config_;
    std::vector<int> cards_;  // cardinality per variable id, for row indexing
    std::vector<std::vector<std::vector<Candidate>>> cands_;  // [child][intra option][subset]
    LogWeightMatrix train_w_;
    ScfStructure map_structure_;
    std::optional<double> train_part_exact_;
    std::optional<double> train_part_cond_;
    std::optional<SingularMatrixError> train_error_;
};

double log_sum_exp(const std::vector<double>& logs);

}  // namespace scf
#endif
