#ifndef SCF_STRUCTURE_HPP
#define SCF_STRUCTURE_HPP

#include <string>
#include <vector>

#include "scf/errors.hpp"

namespace scf {

// One child's parents: at most one intra-set parent (a target id, -1 = none)
// plus at most k inter-set parents (condition-set ids, kept sorted ascending).
struct ParentSet {
    int intra = -1;
    std::vector<int> inter;

    bool has_intra() const { return intra >= 0; }
    bool operator==(const ParentSet& o) const { return intra == o.intra && inter == o.inter; }
};

// Full parent assignment for an ordered target set. Intra edges must form a
// forest over the targets; total_score caches the decomposable objective.
struct ScfStructure {
    std::vector<int> targets;           // variable ids, defines child order
    std::vector<ParentSet> parents;     // parallel to targets
    double total_score = 0.0;

    int n() const { return static_cast<int>(targets.size()); }
};

struct StructureConstraints {
    bool no_intra = false;     // forbid all intra-set edges
    bool single_tree = false;  // intra edges must form one spanning tree (one root)
};

// Throws DataError when intra pointers contain a cycle or any id is malformed.
// `intra` values here are positions into `targets`, not raw variable ids.
void validate_forest(const std::vector<int>& intra_positions);

// Checks the ScfStructure invariants (forest over intra edges, inter parents
// within the condition set, |inter| <= k). Throws DataError on violation.
void validate_structure(const ScfStructure& s, const std::vector<int>& condition, int k);

}  // namespace scf
#endif
