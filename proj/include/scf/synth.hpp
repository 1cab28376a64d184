#ifndef SCF_SYNTH_HPP
#define SCF_SYNTH_HPP

#include <cstdint>
#include <vector>

#include "scf/dataset.hpp"
#include "scf/structure.hpp"

namespace scf {

// Binary class + features weakly correlated with it: each relevant feature
// equals the class value with probability p; noise features are uniform and
// independent. Column 0 is the class.
CategoricalDataset synth_weak_features(int n_relevant, int n_noise, double p, long long n_rows,
                                       uint64_t seed);

// Appends `count` independent uniform binary columns named noise_0.. .
CategoricalDataset add_noise_features(const CategoricalDataset& data, int count, uint64_t seed);

// Ground-truth two-slice model for sequence synthesis. Variables are binary
// unless cardinalities says otherwise. Transition CPTs index the previous
// slice and already-sampled current-slice parents; intra edges must form a
// forest so ancestral sampling within a slice is well defined.
struct GroundTruthDbn {
    std::vector<Variable> variables;
    ScfStructure transition;                        // targets = 0..m-1 within the slice
    std::vector<std::vector<std::vector<double>>> cpt;  // [child][parent config][value]
    std::vector<std::vector<double>> initial;           // [child][value] for slice 0

    void validate() const;
};

// Random SCF(1) truth over m binary variables: intra forest + one previous-
// slice parent per child, with CPT rows pulling probability mass toward
// `strength` for the favored value so structure is recoverable from data.
GroundTruthDbn random_scf1_truth(int m, double strength, uint64_t seed);

// Ancestral sampling: slice 0 from `initial`, each later slice in intra
// topological order from the transition CPTs. Produces n_sequences sequences
// of n_timesteps slices each, each sequence on its own derived stream.
SequenceDataset synth_dbn_sequences(const GroundTruthDbn& truth, long long n_timesteps,
                                    uint64_t seed, int n_sequences = 1);

}  // namespace scf
#endif
