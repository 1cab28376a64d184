#ifndef SCF_DBN_HPP
#define SCF_DBN_HPP

#include <memory>
#include <string>
#include <vector>

#include "scf/bma.hpp"
#include "scf/dataset.hpp"
#include "scf/scf.hpp"
#include "scf/scoring.hpp"
#include "scf/structure.hpp"

namespace scf {

enum class DbnClass { None, Intra, Inter, Scf, BmaScf };

std::string dbn_class_name(DbnClass cls, int k);
DbnClass parse_dbn_class(const std::string& tag);  // "none"|"intra"|"inter"|"scf"|"bma-scf"

// Two-slice model. G_0 covers slice ids 0..m-1; G_+ lives in the combined
// transition table where previous-slice ids are 0..m-1 and next-slice ids
// m..2m-1. Structural classes carry posterior counts per child; bma-scf
// instead retains the combined transition table (the sufficient statistics
// for every candidate parent set) plus the MAP structure for reporting.
struct DbnModel {
    std::vector<Variable> variables;  // one slice's schema
    DbnClass cls = DbnClass::None;
    int k = 0;
    double ess = 20.0;

    ScfStructure g0;
    std::vector<SufficientStats> g0_counts;

    ScfStructure gplus;
    std::vector<SufficientStats> gplus_counts;  // structural classes only
    CategoricalDataset transitions;             // bma-scf only

    double train_score = 0.0;  // MAP objective of gplus on the training transitions

    int m() const { return static_cast<int>(variables.size()); }
    // Rebuilds (and caches) the averaging model from `transitions`.
    const WeightModel& weight_model() const;

  private:
    mutable std::shared_ptr<WeightModel> wm_;
};

// Figure-of-merit report: average log P(next slice | previous slice) over
// withheld transitions.
struct EvalReport {
    std::string model_name;
    double total = 0.0;
    long long count = 0;
    double average = 0.0;                // total / count
    std::vector<double> per_variable;    // per-child totals; empty for bma-scf
};

enum class EvalMode {
    PosteriorMean,         // fixed posterior-mean CPTs from training counts
    SequentialPredictive,  // posterior updated across test rows (testing aid)
};

DbnModel learn_dbn(const SequenceDataset& train, DbnClass cls, int k, const ScoreConfig& config);

EvalReport eval_log_predictive(const DbnModel& model, const SequenceDataset& test,
                               EvalMode mode = EvalMode::PosteriorMean);

// Learns and evaluates none, intra, then inter(k)/scf(k)/bma-scf(k) for every
// k in k_list; one report per model in that order.
std::vector<EvalReport> compare_model_classes(const SequenceDataset& train,
                                              const SequenceDataset& test,
                                              const std::vector<int>& k_list,
                                              const ScoreConfig& config);

}  // namespace scf
#endif
