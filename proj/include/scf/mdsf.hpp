#ifndef SCF_MDSF_HPP
#define SCF_MDSF_HPP

#include <limits>
#include <vector>

#include "scf/errors.hpp"

namespace scf {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct InfeasibleStructureError : DataError {
    explicit InfeasibleStructureError(const std::string& what) : DataError(what) {}
};

// Complete digraph over n vertices with log-domain edge weights lambda[j][i]
// (j chosen as i's parent) and root weights rho[i]. -inf marks a forbidden
// choice; every vertex needs at least one finite option.
struct RootedDigraph {
    int n = 0;
    std::vector<std::vector<double>> lambda;  // lambda[j][i], j != i
    std::vector<double> rho;

    static RootedDigraph make(int n, double fill = kNegInf);
};

// parent[i] = -1 when i is a root, else the parent vertex. total_score is
// always recomputed from the parent vector via forest_score.
struct Forest {
    std::vector<int> parent;
    double total_score = 0.0;
};

// Sums rho/lambda along parent pointers in vertex order; both solvers report
// their totals through this one routine so equal structures compare exactly.
double forest_score(const RootedDigraph& g, const std::vector<int>& parent);

// Throws DataError if parent pointers contain a cycle or an out-of-range id.
void check_forest(const std::vector<int>& parent);

// Maximum directed spanning forest via augmented-root reduction: a super-root
// vertex gets edge weight rho[i] to each i, then maximum arborescence by
// greedy best-in-edge selection with cycle contraction. Tie-break among equal
// weights: prefer the augmented root, then the lowest source index.
Forest max_directed_spanning_forest(const RootedDigraph& g);

// As above but every vertex must hang off a single real root: solved as the
// best of n runs, each forcing one vertex to be the only root.
Forest max_directed_spanning_tree(const RootedDigraph& g);

// Enumeration oracle for n <= 8: all parent-pointer assignments, cyclic ones
// rejected, same tie-break as the solver (all-roots enumerated first, so ties
// at equal score keep the earliest = most-root-preferring assignment).
// acyclic_count, when given, receives the number of valid forests seen.
Forest brute_force_msf(const RootedDigraph& g, long long* acyclic_count = nullptr);

}  // namespace scf
#endif
