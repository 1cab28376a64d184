#include "scf/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "scf/rng.hpp"

namespace scf {

Variable Variable::categorical(std::string name, int cardinality) {
    Variable v;
    v.name = std::move(name);
    v.cardinality = cardinality;
    v.categories.reserve(cardinality);
    for (int i = 0; i < cardinality; ++i) v.categories.push_back(std::to_string(i));
    return v;
}

int CategoricalDataset::var_index(const std::string& name) const {
    for (size_t i = 0; i < variables.size(); ++i)
        if (variables[i].name == name) return static_cast<int>(i);
    return -1;
}

void CategoricalDataset::validate() const {
    for (const auto& v : variables) {
        if (v.cardinality < 1) throw DataError("variable '" + v.name + "' has cardinality < 1");
        if (!v.categories.empty() && static_cast<int>(v.categories.size()) != v.cardinality)
            throw DataError("variable '" + v.name + "' category list does not match its cardinality");
    }
    for (size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != variables.size())
            throw DataError("row " + std::to_string(r + 1) + " has " + std::to_string(rows[r].size()) +
                            " cells, expected " + std::to_string(variables.size()));
        for (size_t c = 0; c < variables.size(); ++c) {
            const int x = rows[r][c];
            if (x < 0 || x >= variables[c].cardinality)
                throw DataError("row " + std::to_string(r + 1) + ", variable '" + variables[c].name +
                                "': index " + std::to_string(x) + " out of range");
        }
    }
}

long long SequenceDataset::n_transitions() const {
    long long total = 0;
    for (const auto& seq : sequences) total += static_cast<long long>(seq.size()) - 1;
    return total;
}

int MixedTable::column_index(const std::string& name) const {
    for (size_t i = 0; i < columns.size(); ++i)
        if (columns[i].name == name) return static_cast<int>(i);
    return -1;
}

bool MixedTable::all_categorical() const {
    return std::all_of(columns.begin(), columns.end(),
                       [](const MixedColumn& c) { return c.kind == ColumnKind::Categorical; });
}

bool MixedTable::has_missing() const {
    for (const auto& c : columns) {
        if (c.kind == ColumnKind::Categorical) {
            for (int code : c.codes)
                if (code < 0) return true;
        } else {
            for (double v : c.values)
                if (std::isnan(v)) return true;
        }
    }
    return false;
}

CategoricalDataset MixedTable::to_categorical() const {
    CategoricalDataset out;
    for (const auto& c : columns) {
        if (c.kind != ColumnKind::Categorical)
            throw DataError("column '" + c.name + "' is continuous; discretize it first");
        Variable v;
        v.name = c.name;
        v.categories = c.categories;
        v.cardinality = static_cast<int>(c.categories.size());
        out.variables.push_back(std::move(v));
    }
    out.rows.assign(n_rows, std::vector<int>(columns.size(), 0));
    for (size_t c = 0; c < columns.size(); ++c) {
        for (long long r = 0; r < n_rows; ++r) {
            const int code = columns[c].codes[r];
            if (code < 0)
                throw DataError("column '" + columns[c].name + "', row " + std::to_string(r + 1) +
                                " is missing; drop or impute before use");
            out.rows[r][c] = code;
        }
    }
    return out;
}

// --- CSV -------------------------------------------------------------------

namespace {

std::vector<std::string> split_csv_line(const std::string& line, long long line_no) {
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    for (size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (in_quotes) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(ch);
            }
        } else if (ch == '"') {
            in_quotes = true;
        } else if (ch == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field.push_back(ch);
        }
    }
    if (in_quotes) throw DataError("line " + std::to_string(line_no) + ": unterminated quote");
    fields.push_back(std::move(field));
    return fields;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += "\"\"";
        else out.push_back(ch);
    }
    out += "\"";
    return out;
}

bool parse_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

struct RawTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

RawTable read_raw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);
    RawTable raw;
    std::string line;
    long long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1 && line.empty()) throw DataError(path + ": empty header row");
        if (line.empty()) continue;  // skip blank lines
        auto fields = split_csv_line(line, line_no);
        if (line_no == 1) {
            raw.header = std::move(fields);
        } else {
            if (fields.size() != raw.header.size())
                throw DataError(path + ": line " + std::to_string(line_no) + " has " +
                                std::to_string(fields.size()) + " fields, expected " +
                                std::to_string(raw.header.size()));
            raw.rows.push_back(std::move(fields));
        }
    }
    if (raw.header.empty()) throw DataError(path + ": empty file");
    if (raw.rows.empty()) throw DataError(path + ": no data rows");
    return raw;
}

MixedColumn encode_column(const std::string& name, const RawTable& raw, size_t col,
                          const CsvOptions& options) {
    MixedColumn out;
    out.name = name;
    const long long n = static_cast<long long>(raw.rows.size());

    bool numeric = true;
    double tmp;
    for (long long r = 0; r < n; ++r) {
        const std::string& cell = raw.rows[r][col];
        if (cell == options.missing_sentinel) continue;
        if (!parse_number(cell, tmp)) {
            numeric = false;
            break;
        }
    }
    auto hint = options.schema_hints.find(name);
    if (hint != options.schema_hints.end()) numeric = (hint->second == ColumnKind::Continuous);

    if (numeric) {
        out.kind = ColumnKind::Continuous;
        out.values.resize(n);
        for (long long r = 0; r < n; ++r) {
            const std::string& cell = raw.rows[r][col];
            if (cell == options.missing_sentinel) {
                out.values[r] = std::numeric_limits<double>::quiet_NaN();
            } else if (!parse_number(cell, out.values[r])) {
                throw DataError("column '" + name + "', row " + std::to_string(r + 1) +
                                ": non-numeric cell in continuous column");
            }
        }
        return out;
    }

    out.kind = ColumnKind::Categorical;
    std::set<std::string> distinct;
    for (long long r = 0; r < n; ++r) {
        const std::string& cell = raw.rows[r][col];
        if (cell != options.missing_sentinel) distinct.insert(cell);
    }
    out.categories.assign(distinct.begin(), distinct.end());  // lexicographic
    std::map<std::string, int> index;
    for (size_t i = 0; i < out.categories.size(); ++i) index[out.categories[i]] = static_cast<int>(i);
    out.codes.resize(n);
    for (long long r = 0; r < n; ++r) {
        const std::string& cell = raw.rows[r][col];
        out.codes[r] = (cell == options.missing_sentinel) ? -1 : index[cell];
    }
    return out;
}

}  // namespace

MixedTable load_csv(const std::string& path, const CsvOptions& options) {
    RawTable raw = read_raw(path);
    MixedTable table;
    table.n_rows = static_cast<long long>(raw.rows.size());
    for (size_t c = 0; c < raw.header.size(); ++c)
        table.columns.push_back(encode_column(raw.header[c], raw, c, options));
    return table;
}

DropMissingResult drop_missing(const MixedTable& table) {
    std::vector<char> drop(table.n_rows, 0);
    for (const auto& c : table.columns) {
        for (long long r = 0; r < table.n_rows; ++r) {
            const bool miss = (c.kind == ColumnKind::Categorical) ? c.codes[r] < 0 : std::isnan(c.values[r]);
            if (miss) drop[r] = 1;
        }
    }
    DropMissingResult res;
    res.removed = std::count(drop.begin(), drop.end(), 1);
    if (res.removed == table.n_rows) throw DataError("every row has missing cells; nothing left");

    res.table.n_rows = table.n_rows - res.removed;
    for (const auto& c : table.columns) {
        MixedColumn out;
        out.name = c.name;
        out.kind = c.kind;
        out.categories = c.categories;
        for (long long r = 0; r < table.n_rows; ++r) {
            if (drop[r]) continue;
            if (c.kind == ColumnKind::Categorical) out.codes.push_back(c.codes[r]);
            else out.values.push_back(c.values[r]);
        }
        res.table.columns.push_back(std::move(out));
    }
    return res;
}

void save_csv(const CategoricalDataset& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    for (size_t c = 0; c < data.variables.size(); ++c) {
        if (c) out << ',';
        out << csv_escape(data.variables[c].name);
    }
    out << '\n';
    for (const auto& row : data.rows) {
        for (size_t c = 0; c < row.size(); ++c) {
            if (c) out << ',';
            const auto& var = data.variables[c];
            if (!var.categories.empty()) out << csv_escape(var.categories[row[c]]);
            else out << row[c];
        }
        out << '\n';
    }
}

SequenceDataset load_sequences_csv(const std::string& path) {
    RawTable raw = read_raw(path);
    if (raw.header.empty() || raw.header[0] != "seq_id")
        throw DataError(path + ": first column must be seq_id");

    SequenceDataset seqs;
    const size_t n_cols = raw.header.size() - 1;
    // Lexicographic categories per value column, like load_csv.
    std::vector<std::map<std::string, int>> index(n_cols);
    for (size_t c = 0; c < n_cols; ++c) {
        std::set<std::string> distinct;
        for (const auto& row : raw.rows) distinct.insert(row[c + 1]);
        Variable v;
        v.name = raw.header[c + 1];
        v.categories.assign(distinct.begin(), distinct.end());
        v.cardinality = static_cast<int>(v.categories.size());
        for (size_t i = 0; i < v.categories.size(); ++i) index[c][v.categories[i]] = static_cast<int>(i);
        seqs.variables.push_back(std::move(v));
    }

    std::map<std::string, size_t> seq_pos;  // seq_id -> index into sequences
    for (const auto& rrow : raw.rows) {
        auto it = seq_pos.find(rrow[0]);
        if (it == seq_pos.end()) {
            it = seq_pos.emplace(rrow[0], seqs.sequences.size()).first;
            seqs.sequences.emplace_back();
        }
        std::vector<int> row(n_cols);
        for (size_t c = 0; c < n_cols; ++c) row[c] = index[c][rrow[c + 1]];
        seqs.sequences[it->second].push_back(std::move(row));
    }
    return seqs;
}

void save_sequences_csv(const SequenceDataset& seqs, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    out << "seq_id";
    for (const auto& v : seqs.variables) out << ',' << csv_escape(v.name);
    out << '\n';
    for (size_t s = 0; s < seqs.sequences.size(); ++s) {
        for (const auto& row : seqs.sequences[s]) {
            out << "s" << s;
            for (size_t c = 0; c < row.size(); ++c) {
                const auto& var = seqs.variables[c];
                out << ',';
                if (!var.categories.empty()) out << csv_escape(var.categories[row[c]]);
                else out << row[c];
            }
            out << '\n';
        }
    }
}

FoldSplit kfold_split(long long n_rows, int fold_count, uint64_t seed) {
    if (fold_count < 2) throw ValidationError("fold count must be at least 2");
    if (n_rows < fold_count)
        throw ValidationError("fold count " + std::to_string(fold_count) + " exceeds row count " +
                              std::to_string(n_rows));
    std::vector<long long> order(n_rows);
    for (long long i = 0; i < n_rows; ++i) order[i] = i;
    Rng rng(mix_seed(seed, 0xf01d5, static_cast<uint64_t>(n_rows)));
    for (long long i = n_rows - 1; i > 0; --i) {
        const long long j = static_cast<long long>(rng.next_below(static_cast<uint64_t>(i + 1)));
        std::swap(order[i], order[j]);
    }
    FoldSplit split;
    split.fold_count = fold_count;
    split.assignment.resize(n_rows);
    for (long long i = 0; i < n_rows; ++i)
        split.assignment[order[i]] = static_cast<int>(i % fold_count);
    return split;
}

TransitionPair to_transitions(const SequenceDataset& seqs) {
    if (seqs.sequences.empty()) throw DataError("no sequences");
    TransitionPair pair;
    pair.prev.variables = seqs.variables;
    pair.next.variables = seqs.variables;
    for (size_t s = 0; s < seqs.sequences.size(); ++s) {
        const auto& seq = seqs.sequences[s];
        if (seq.size() < 2)
            throw DataError("sequence " + std::to_string(s) + " has fewer than 2 timesteps");
        for (size_t t = 1; t < seq.size(); ++t) {
            pair.prev.rows.push_back(seq[t - 1]);
            pair.next.rows.push_back(seq[t]);
        }
    }
    return pair;
}

CategoricalDataset hstack_pair(const CategoricalDataset& left, const CategoricalDataset& right,
                               const std::string& left_suffix, const std::string& right_suffix) {
    if (left.rows.size() != right.rows.size())
        throw DataError("hstack: row counts differ");
    CategoricalDataset out;
    for (const auto& v : left.variables) {
        Variable w = v;
        w.name += left_suffix;
        out.variables.push_back(std::move(w));
    }
    for (const auto& v : right.variables) {
        Variable w = v;
        w.name += right_suffix;
        out.variables.push_back(std::move(w));
    }
    out.rows.reserve(left.rows.size());
    for (size_t r = 0; r < left.rows.size(); ++r) {
        std::vector<int> row = left.rows[r];
        row.insert(row.end(), right.rows[r].begin(), right.rows[r].end());
        out.rows.push_back(std::move(row));
    }
    return out;
}

CategoricalDataset filter_rows(const CategoricalDataset& data, const std::vector<long long>& keep) {
    CategoricalDataset out;
    out.variables = data.variables;
    out.rows.reserve(keep.size());
    for (long long r : keep) out.rows.push_back(data.rows[r]);
    return out;
}

}  // namespace scf
