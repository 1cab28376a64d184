#ifndef SCF_DISCRETIZE_HPP
#define SCF_DISCRETIZE_HPP

#include <string>
#include <vector>

#include "scf/dataset.hpp"

namespace scf {

// Entropy/MDL discretization of one continuous column against class labels.
// Cut points are midpoints between adjacent distinct values; a split is kept
// only when its information gain clears the MDL acceptance threshold, applied
// recursively to both halves. Fit on training rows, then apply anywhere.
struct Discretizer {
    std::string column;
    std::vector<double> cuts;  // ascending; produces cuts.size()+1 bins

    int bin(double value) const;
    int n_bins() const { return static_cast<int>(cuts.size()) + 1; }
};

Discretizer fit_mdl_cuts(const std::vector<double>& values, const std::vector<int>& labels,
                         int n_labels);

// Discretizes every continuous column of `table` against the named class
// column (which must be categorical), fitting cuts on rows listed in
// `fit_rows` (all rows when empty). Columns that end up with zero cuts become
// single-category constants, which downstream scoring treats as uninformative.
struct DiscretizeResult {
    CategoricalDataset data;
    std::vector<Discretizer> discretizers;  // one per continuous input column
};

DiscretizeResult discretize_entropy_mdl(const MixedTable& table, const std::string& class_column,
                                        const std::vector<long long>& fit_rows = {});

// Applies previously fitted cuts to another table with the same layout.
CategoricalDataset apply_discretizers(const MixedTable& table,
                                      const std::vector<Discretizer>& discretizers);

double entropy_bits(const std::vector<long long>& counts);

}  // namespace scf
#endif
