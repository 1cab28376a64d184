#ifndef SCF_SCORING_HPP
#define SCF_SCORING_HPP

#include <cstdint>
#include <limits>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "scf/dataset.hpp"
#include "scf/structure.hpp"

namespace scf {

// Counts N[j][k] for parent configuration j and child value k, plus row sums.
struct SufficientStats {
    int r = 0;                                  // child cardinality
    long long q = 0;                            // parent configuration count
    std::vector<std::vector<long long>> counts; // q rows of r cells
    std::vector<long long> row_sums;            // N[j]
    long long total = 0;

    void validate() const;
};

struct ScoreConfig {
    double ess = 20.0;                                       // BDeu equivalent sample size
    double alpha = 0.0;                                      // exclusion penalty; inf allowed
    int k = 1;                                               // max inter-set parents
    static constexpr double inf = std::numeric_limits<double>::infinity();
};

// Tallies rows into parent-configuration x child-value counts. Parent
// configurations use mixed-radix order over parent cardinalities with the
// first-listed parent most significant.
SufficientStats count_stats(const CategoricalDataset& data, int child,
                            const std::vector<int>& parents);

// BDeu log marginal likelihood: per configuration j,
//   lnG(a_j) - lnG(a_j + N_j) + sum_k [lnG(a_jk + N_jk) - lnG(a_jk)]
// with a_jk = ess/(q*r), a_j = ess/q.
double local_score_bdeu(const SufficientStats& stats, double ess);

// Log predictive of the test rows under the Dirichlet posterior from train:
// local_score_bdeu(train + test) - local_score_bdeu(train).
double posterior_predictive_score(const SufficientStats& train, const SufficientStats& test,
                                  double ess);

SufficientStats combine_stats(const SufficientStats& a, const SufficientStats& b);

// log P(row[child] | row[parents]) under the posterior-mean CPT implied by
// the counts plus BDeu pseudocounts: (N_jk + a_jk) / (N_j + a_j). `parents`
// must be the id list the stats were counted with, `cards` the per-variable
// cardinalities of the row's schema.
double posterior_mean_log_prob(const SufficientStats& stats, const std::vector<int>& parents,
                               int child, const std::vector<int>& row,
                               const std::vector<int>& cards, double ess);

// Log prior weight of one parent set. Uniform base contributes 0; a finite
// exclusion penalty subtracts alpha when no condition variable appears among
// the inter parents; alpha = inf forbids such sets (-inf).
double structure_log_prior(const ParentSet& parents, const std::vector<int>& condition,
                           const ScoreConfig& config);

// Concurrent memo table from (child, canonical parent set) to local score.
// Keys canonicalize inter parents sorted ascending; intra membership is part
// of the key. Lookups of the same key always return bit-identical values.
class ScoreCache {
  public:
    bool lookup(const std::string& key, double& out) const {
        std::shared_lock lock(mutex_);
        auto it = map_.find(key);
        if (it == map_.end()) return false;
        out = it->second;
        return true;
    }
    void store(const std::string& key, double value) {
        std::unique_lock lock(mutex_);
        map_.emplace(key, value);
    }
    static std::string key(int child, const ParentSet& parents);

  private:
    mutable std::shared_mutex mutex_;
    std::unordered_map<std::string, double> map_;
};

}  // namespace scf
#endif
