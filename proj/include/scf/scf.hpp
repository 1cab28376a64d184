#ifndef SCF_SCF_HPP
#define SCF_SCF_HPP

#include <vector>

#include "scf/dataset.hpp"
#include "scf/mdsf.hpp"
#include "scf/scoring.hpp"
#include "scf/structure.hpp"

namespace scf {

// Best inter-set completion for one (child, hypothetical intra parent) pair.
struct CandidateCell {
    double score = kNegInf;    // local score + log prior of the best completion
    std::vector<int> inter;    // the argmax inter subset, sorted ascending
};

// cells[i][j] = best completion for child i with intra parent targets[j];
// root_cells[i] = best completion with no intra parent.
struct CandidateTable {
    std::vector<int> targets;
    std::vector<int> condition;
    std::vector<std::vector<CandidateCell>> cells;
    std::vector<CandidateCell> root_cells;
};

// All condition-set subsets of size <= k, smallest first, ids ascending
// within each subset; the empty set leads, matching the fewest-parents
// tie-break used throughout.
std::vector<std::vector<int>> inter_subsets(const std::vector<int>& condition, int k);

// Evaluates every inter subset per (child, intra-or-none) cell and keeps the
// argmax; ties prefer fewer parents, then the lexicographically smallest id
// set (the enumeration order, with strictly-greater replacement). Cells are
// filled in parallel; the _serial variant is the reference implementation.
CandidateTable build_candidate_table(const std::vector<int>& targets,
                                     const std::vector<int>& condition,
                                     const CategoricalDataset& data, const ScoreConfig& config);
CandidateTable build_candidate_table_serial(const std::vector<int>& targets,
                                            const std::vector<int>& condition,
                                            const CategoricalDataset& data,
                                            const ScoreConfig& config);

// Conditional MAP structure: candidate table -> rooted digraph (edge weights
// from cells, root weights from root_cells) -> maximum directed spanning
// forest -> parent sets read back from the table.
ScfStructure learn_cmap_scf(const std::vector<int>& targets, const std::vector<int>& condition,
                            const CategoricalDataset& data, const ScoreConfig& config,
                            const StructureConstraints& constraints = {});

// MAP over a slice pair: the previous slice gets a plain MAP forest (empty
// condition set), the next slice a CMAP conditioned on the previous slice.
// The two optimizations are independent.
struct ScfPair {
    ScfStructure prev;  // over prev.variables ids
    ScfStructure next;  // over combined-table ids: prev 0..m-1, next m..2m-1
};
ScfPair learn_map_scf_pair(const CategoricalDataset& prev, const CategoricalDataset& next,
                           const ScoreConfig& config,
                           const StructureConstraints& constraints = {});

// Re-scores a structure from its parent sets: sum of local score + log prior
// per child. Used to confirm cached totals and by the enumeration oracle.
double score_structure(const ScfStructure& s, const std::vector<int>& condition,
                       const CategoricalDataset& data, const ScoreConfig& config);

}  // namespace scf
#endif
