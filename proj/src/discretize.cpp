#include "scf/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "scf/errors.hpp"

namespace scf {

double entropy_bits(const std::vector<long long>& counts) {
    long long total = std::accumulate(counts.begin(), counts.end(), 0LL);
    if (total == 0) return 0.0;
    double h = 0.0;
    for (long long c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

int Discretizer::bin(double value) const {
    // First cut with value <= cut bounds the bin; cuts are ascending.
    return static_cast<int>(std::upper_bound(cuts.begin(), cuts.end(), value) - cuts.begin());
}

namespace {

struct Span {  // half-open index range into the sorted arrays
    long long lo, hi;
};

// Class histogram over sorted_labels[lo, hi).
std::vector<long long> histogram(const std::vector<int>& labels, long long lo, long long hi,
                                 int n_labels) {
    std::vector<long long> h(n_labels, 0);
    for (long long i = lo; i < hi; ++i) ++h[labels[i]];
    return h;
}

int n_present(const std::vector<long long>& h) {
    int k = 0;
    for (long long c : h) k += (c > 0);
    return k;
}

// Recursive MDL cut search over one sorted span. Appends accepted cuts.
void split_span(const std::vector<double>& vals, const std::vector<int>& labels, int n_labels,
                Span span, std::vector<double>& cuts) {
    const long long n = span.hi - span.lo;
    if (n < 2) return;

    const std::vector<long long> total_hist = histogram(labels, span.lo, span.hi, n_labels);
    const double h_total = entropy_bits(total_hist);
    if (n_present(total_hist) <= 1) return;  // pure span

    // Scan boundary positions: value changes AND the labels differ across it
    // (cuts inside a same-class run can never be optimal).
    double best_gain = -1.0;
    long long best_pos = -1;            // split before index best_pos
    double best_h1 = 0.0, best_h2 = 0.0;
    int best_k1 = 0, best_k2 = 0;

    std::vector<long long> left(n_labels, 0);
    std::vector<long long> right = total_hist;
    for (long long i = span.lo + 1; i < span.hi; ++i) {
        ++left[labels[i - 1]];
        --right[labels[i - 1]];
        if (vals[i - 1] == vals[i]) continue;
        // A boundary is worth checking only when some class count differs side to side.
        const double h1 = entropy_bits(left);
        const double h2 = entropy_bits(right);
        const long long n1 = i - span.lo;
        const double gain =
            h_total - (static_cast<double>(n1) / n) * h1 - (static_cast<double>(n - n1) / n) * h2;
        if (gain > best_gain + 1e-12) {
            best_gain = gain;
            best_pos = i;
            best_h1 = h1;
            best_h2 = h2;
            best_k1 = n_present(left);
            best_k2 = n_present(right);
        }
    }
    if (best_pos < 0) return;

    const int k = n_present(total_hist);
    const double delta = std::log2(std::pow(3.0, k) - 2.0) -
                         (k * h_total - best_k1 * best_h1 - best_k2 * best_h2);
    const double threshold = (std::log2(static_cast<double>(n - 1)) + delta) / static_cast<double>(n);
    if (best_gain <= threshold) return;

    cuts.push_back(0.5 * (vals[best_pos - 1] + vals[best_pos]));
    split_span(vals, labels, n_labels, {span.lo, best_pos}, cuts);
    split_span(vals, labels, n_labels, {best_pos, span.hi}, cuts);
}

}  // namespace

Discretizer fit_mdl_cuts(const std::vector<double>& values, const std::vector<int>& labels,
                         int n_labels) {
    if (values.size() != labels.size()) throw DataError("values/labels size mismatch");
    std::vector<long long> order(values.size());
    std::iota(order.begin(), order.end(), 0LL);
    std::stable_sort(order.begin(), order.end(),
                     [&](long long a, long long b) { return values[a] < values[b]; });
    std::vector<double> vals(values.size());
    std::vector<int> labs(values.size());
    for (size_t i = 0; i < order.size(); ++i) {
        vals[i] = values[order[i]];
        labs[i] = labels[order[i]];
    }
    Discretizer d;
    split_span(vals, labs, n_labels, {0, static_cast<long long>(vals.size())}, d.cuts);
    std::sort(d.cuts.begin(), d.cuts.end());
    return d;
}

namespace {

Variable binned_variable(const Discretizer& d) {
    Variable v;
    v.name = d.column;
    v.cardinality = d.n_bins();
    v.categories.reserve(v.cardinality);
    for (int b = 0; b < v.cardinality; ++b) v.categories.push_back("bin" + std::to_string(b));
    return v;
}

}  // namespace

DiscretizeResult discretize_entropy_mdl(const MixedTable& table, const std::string& class_column,
                                        const std::vector<long long>& fit_rows) {
    const int class_idx = table.column_index(class_column);
    if (class_idx < 0) throw DataError("class column '" + class_column + "' not found");
    const MixedColumn& cls = table.columns[class_idx];
    if (cls.kind != ColumnKind::Categorical)
        throw DataError("class column '" + class_column + "' must be categorical");
    for (int code : cls.codes)
        if (code < 0) throw DataError("class column has missing values; drop them first");
    const int n_labels = static_cast<int>(cls.categories.size());

    std::vector<long long> rows = fit_rows;
    if (rows.empty()) {
        rows.resize(table.n_rows);
        std::iota(rows.begin(), rows.end(), 0LL);
    }

    DiscretizeResult res;
    for (const auto& col : table.columns) {
        if (col.kind == ColumnKind::Categorical) {
            Variable v;
            v.name = col.name;
            v.categories = col.categories;
            v.cardinality = static_cast<int>(col.categories.size());
            res.data.variables.push_back(std::move(v));
            continue;
        }
        std::vector<double> vals;
        std::vector<int> labs;
        vals.reserve(rows.size());
        labs.reserve(rows.size());
        for (long long r : rows) {
            if (std::isnan(col.values[r])) throw DataError("column '" + col.name + "' has missing values; drop them first");
            vals.push_back(col.values[r]);
            labs.push_back(cls.codes[r]);
        }
        Discretizer d = fit_mdl_cuts(vals, labs, n_labels);
        d.column = col.name;
        res.data.variables.push_back(binned_variable(d));
        res.discretizers.push_back(std::move(d));
    }

    res.data.rows.assign(table.n_rows, std::vector<int>(table.columns.size(), 0));
    size_t d_idx = 0;
    for (size_t c = 0; c < table.columns.size(); ++c) {
        const auto& col = table.columns[c];
        if (col.kind == ColumnKind::Categorical) {
            for (long long r = 0; r < table.n_rows; ++r) {
                if (col.codes[r] < 0)
                    throw DataError("column '" + col.name + "' has missing values; drop them first");
                res.data.rows[r][c] = col.codes[r];
            }
        } else {
            const Discretizer& d = res.discretizers[d_idx++];
            for (long long r = 0; r < table.n_rows; ++r)
                res.data.rows[r][c] = d.bin(col.values[r]);
        }
    }
    return res;
}

CategoricalDataset apply_discretizers(const MixedTable& table,
                                      const std::vector<Discretizer>& discretizers) {
    CategoricalDataset out;
    size_t d_idx = 0;
    for (const auto& col : table.columns) {
        if (col.kind == ColumnKind::Categorical) {
            Variable v;
            v.name = col.name;
            v.categories = col.categories;
            v.cardinality = static_cast<int>(col.categories.size());
            out.variables.push_back(std::move(v));
        } else {
            if (d_idx >= discretizers.size() || discretizers[d_idx].column != col.name)
                throw DataError("no fitted cuts for column '" + col.name + "'");
            out.variables.push_back(binned_variable(discretizers[d_idx]));
            ++d_idx;
        }
    }
    out.rows.assign(table.n_rows, std::vector<int>(table.columns.size(), 0));
    d_idx = 0;
    for (size_t c = 0; c < table.columns.size(); ++c) {
        const auto& col = table.columns[c];
        if (col.kind == ColumnKind::Categorical) {
            for (long long r = 0; r < table.n_rows; ++r) {
                if (col.codes[r] < 0)
                    throw DataError("column '" + col.name + "' has missing values; drop them first");
                out.rows[r][c] = col.codes[r];
            }
        } else {
            const Discretizer& d = discretizers[d_idx++];
            for (long long r = 0; r < table.n_rows; ++r)
                out.rows[r][c] = d.bin(col.values[r]);
        }
    }
    return out;
}

}  // namespace scf
