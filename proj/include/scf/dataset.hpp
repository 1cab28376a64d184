#ifndef SCF_DATASET_HPP
#define SCF_DATASET_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "scf/errors.hpp"

namespace scf {

struct Variable {
    std::string name;
    int cardinality = 0;
    std::vector<std::string> categories;  // index -> label; size == cardinality

    static Variable binary(std::string name) { return Variable{std::move(name), 2, {"0", "1"}}; }
    static Variable categorical(std::string name, int cardinality);
};

// Complete discrete data: one category index per cell.
struct CategoricalDataset {
    std::vector<Variable> variables;
    std::vector<std::vector<int>> rows;

    int n_vars() const { return static_cast<int>(variables.size()); }
    long long n_rows() const { return static_cast<long long>(rows.size()); }
    int var_index(const std::string& name) const;  // -1 if absent
    void validate() const;                         // throws DataError on invariant breach
};

// Slices of the same variable schema observed over consecutive timesteps.
struct SequenceDataset {
    std::vector<Variable> variables;
    std::vector<std::vector<std::vector<int>>> sequences;  // sequence -> timestep -> row

    long long n_transitions() const;
};

struct FoldSplit {
    int fold_count = 0;
    std::vector<int> assignment;  // per-row fold index in [0, fold_count)
};

// --- CSV ingestion -------------------------------------------------------
//
// Columns load as categorical (distinct strings, sorted lexicographically)
// unless every non-missing cell parses as a number, in which case the column
// is flagged continuous and waits for supervised discretization. Cells equal
// to the missing sentinel are marked missing and never become categories.

enum class ColumnKind { Categorical, Continuous };

struct MixedColumn {
    std::string name;
    ColumnKind kind = ColumnKind::Categorical;
    std::vector<std::string> categories;  // categorical: index -> label
    std::vector<int> codes;               // categorical: per-row index, -1 = missing
    std::vector<double> values;           // continuous: per-row value, NaN = missing
};

struct MixedTable {
    std::vector<MixedColumn> columns;
    long long n_rows = 0;

    int column_index(const std::string& name) const;
    bool all_categorical() const;
    bool has_missing() const;
    // Requires all columns categorical and no missing cells.
    CategoricalDataset to_categorical() const;
};

struct CsvOptions {
    std::string missing_sentinel = "?";
    // Per-column kind override; wins over numeric sniffing.
    std::unordered_map<std::string, ColumnKind> schema_hints;
};

MixedTable load_csv(const std::string& path, const CsvOptions& options = {});

struct DropMissingResult {
    MixedTable table;
    long long removed = 0;
};

// Removes every row with a missing cell in any column. Throws DataError when
// nothing survives.
DropMissingResult drop_missing(const MixedTable& table);

void save_csv(const CategoricalDataset& data, const std::string& path);

// Sequence CSV carries a leading seq_id column; rows of one seq_id are in
// temporal order. All value columns are treated as categorical.
SequenceDataset load_sequences_csv(const std::string& path);
void save_sequences_csv(const SequenceDataset& seqs, const std::string& path);

// --- Splits and temporal pairing ----------------------------------------

// Seeded shuffle then round-robin: fold sizes balanced within 1,
// deterministic given (row count, fold count, seed).
FoldSplit kfold_split(long long n_rows, int fold_count, uint64_t seed);

// Every sequence of length L contributes L-1 row pairs; pairs never span two
// sequences. Both returned datasets share the slice schema.
struct TransitionPair {
    CategoricalDataset prev;
    CategoricalDataset next;
};
TransitionPair to_transitions(const SequenceDataset& seqs);

// Side-by-side join of row-paired datasets: left columns first. Variable
// names get the given suffixes to stay distinct.
CategoricalDataset hstack_pair(const CategoricalDataset& left, const CategoricalDataset& right,
                               const std::string& left_suffix, const std::string& right_suffix);

CategoricalDataset filter_rows(const CategoricalDataset& data, const std::vector<long long>& keep);

}  // namespace scf

#endif
