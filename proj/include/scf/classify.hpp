#ifndef SCF_CLASSIFY_HPP
#define SCF_CLASSIFY_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "scf/bma.hpp"
#include "scf/dataset.hpp"
#include "scf/scf.hpp"
#include "scf/scoring.hpp"

namespace scf {

// Naive Bayes and its augmented variants. The selective ones (stan, sfan) may
// drop the class edge per feature under a finite exclusion penalty alpha; tan
// and fan force it (alpha = inf); tan and stan additionally require the
// feature-to-feature edges to form one spanning tree instead of a forest.
enum class NbVariant { Nb, Tan, Fan, Stan, Sfan };

std::string variant_name(NbVariant v);
NbVariant parse_variant(const std::string& tag);

struct ClassifierModel {
    std::vector<Variable> variables;  // full schema including the class column
    int class_id = 0;
    NbVariant variant = NbVariant::Nb;
    double alpha = 0.0;
    double ess = 10.0;

    ScfStructure structure;                      // targets = feature ids, condition = {class}
    std::vector<SufficientStats> feature_counts; // parallel to structure.targets
    SufficientStats class_counts;                // class marginal

    int n_classes() const { return variables[class_id].cardinality; }
};

// Throws DataError when the learned structure violates its variant's shape
// (class-edge requirements, tree vs forest).
void validate_classifier(const ClassifierModel& model);

struct ClassDistribution {
    std::vector<double> probs;  // proper distribution over class values
    int argmax = 0;             // lowest index wins ties
    bool map_fallback = false;  // bma_predict only: averaging was singular
};

struct AccuracyReport {
    std::vector<double> fold_accuracy;            // non-degenerate folds only
    double mean = 0.0;
    double sd = 0.0;                              // sample SD across folds
    std::vector<std::vector<long long>> confusion;  // [true class][predicted]
    int degenerate_folds = 0;                     // excluded from the mean
};

ClassifierModel learn_classifier(const CategoricalDataset& train, int class_id, NbVariant variant,
                                 double alpha, const ScoreConfig& config);

// `row` is a full-width row; the class cell is ignored.
ClassDistribution predict(const ClassifierModel& model, const std::vector<int>& row);

// Averages over every selective-forest structure per class value: the class
// column of the query row is clamped to y, the determinant-ratio predictive
// of the features is combined with the smoothed class prior, then normalized
// across y. Precomputes per-class weight models once; cheap per row.
class BmaClassifier {
  public:
    BmaClassifier(const CategoricalDataset& train, int class_id, double alpha,
                  const ScoreConfig& config);
    ClassDistribution predict_row(const std::vector<int>& row) const;

  private:
    int class_id_;
    int n_classes_;
    std::vector<double> log_class_prior_;
    std::unique_ptr<WeightModel> features_;
    ClassifierModel map_model_;  // fallback when averaging is singular
};

ClassDistribution bma_predict(const CategoricalDataset& train, int class_id,
                              const std::vector<int>& row, double alpha,
                              const ScoreConfig& config);

// Per fold: learn on the other folds, predict argmax on the held-out rows.
// The MixedTable overload discretizes continuous columns per fold on the
// training rows only. Folds whose training part has a single class value are
// excluded from the mean and counted as degenerate.
AccuracyReport crossval_accuracy(const CategoricalDataset& data, int class_id, NbVariant variant,
                                 double alpha, int folds, uint64_t seed,
                                 const ScoreConfig& config);
AccuracyReport crossval_accuracy(const MixedTable& data, const std::string& class_column,
                                 NbVariant variant, double alpha, int folds, uint64_t seed,
                                 const ScoreConfig& config);

struct SweepPoint {
    double alpha = 0.0;
    double mean_accuracy = 0.0;
    double sd = 0.0;  // across repeats (or folds)
    double se = 0.0;  // sd / sqrt(repeats)
};

// Accuracy-vs-alpha curve by cross-validation on a fixed dataset.
std::vector<SweepPoint> penalty_sweep(const CategoricalDataset& data, int class_id,
                                      const std::vector<double>& alpha_grid, int folds,
                                      uint64_t seed, const ScoreConfig& config);

// Accuracy-vs-alpha curve on freshly generated weak-feature data: per repeat
// a new train/test pair (shared across the grid, so comparisons are paired),
// SFAN trained at each alpha, accuracy on the test half.
struct SweepProtocol {
    int n_relevant = 10;
    int n_noise = 20;
    double p = 0.6;
    long long n_train = 100;
    long long n_test = 100;
    int repeats = 100;
    uint64_t seed = 0;
};

std::vector<SweepPoint> penalty_sweep_synthetic(const SweepProtocol& protocol,
                                                const std::vector<double>& alpha_grid,
                                                const ScoreConfig& config);

}  // namespace scf
#endif
