#include "scf/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace scf {

namespace {

// lgamma(3) is not thread-safe everywhere; lgamma_r is on glibc.
double log_gamma(double x) {
    int sign = 0;
    return lgamma_r(x, &sign);
}

}  // namespace

void SufficientStats::validate() const {
    if (r < 1 || q < 1) throw DataError("stats with r < 1 or q < 1");
    if (static_cast<long long>(counts.size()) != q || static_cast<long long>(row_sums.size()) != q)
        throw DataError("stats shape mismatch");
    long long grand = 0;
    for (long long j = 0; j < q; ++j) {
        if (static_cast<int>(counts[j].size()) != r) throw DataError("stats row width mismatch");
        long long s = 0;
        for (int k = 0; k < r; ++k) {
            if (counts[j][k] < 0) throw DataError("negative count");
            s += counts[j][k];
        }
        if (s != row_sums[j]) throw DataError("row sum mismatch");
        grand += s;
    }
    if (grand != total) throw DataError("total count mismatch");
}

SufficientStats count_stats(const CategoricalDataset& data, int child,
                            const std::vector<int>& parents) {
    const int n_vars = data.n_vars();
    if (child < 0 || child >= n_vars) throw DataError("child id out of range");
    std::unordered_set<int> seen;
    for (int p : parents) {
        if (p < 0 || p >= n_vars) throw DataError("parent id out of range");
        if (p == child) throw DataError("child listed as its own parent");
        if (!seen.insert(p).second) throw DataError("duplicate parent id " + std::to_string(p));
    }

    SufficientStats st;
    st.r = data.variables[child].cardinality;
    st.q = 1;
    for (int p : parents) st.q *= data.variables[p].cardinality;
    st.counts.assign(st.q, std::vector<long long>(st.r, 0));
    st.row_sums.assign(st.q, 0);

    for (const auto& row : data.rows) {
        long long j = 0;
        for (int p : parents) j = j * data.variables[p].cardinality + row[p];
        ++st.counts[j][row[child]];
        ++st.row_sums[j];
        ++st.total;
    }
    return st;
}

double local_score_bdeu(const SufficientStats& stats, double ess) {
    if (ess <= 0.0) throw ValidationError("ess must be positive");
    const double a_j = ess / static_cast<double>(stats.q);
    const double a_jk = a_j / static_cast<double>(stats.r);
    const double lg_a_j = log_gamma(a_j);
    const double lg_a_jk = log_gamma(a_jk);

    double score = 0.0;
    for (long long j = 0; j < stats.q; ++j) {
        if (stats.row_sums[j] == 0) continue;  // empty configuration contributes 0
        score += lg_a_j - log_gamma(a_j + static_cast<double>(stats.row_sums[j]));
        for (int k = 0; k < stats.r; ++k) {
            if (stats.counts[j][k] == 0) continue;
            score += log_gamma(a_jk + static_cast<double>(stats.counts[j][k])) - lg_a_jk;
        }
    }
    return score;
}

SufficientStats combine_stats(const SufficientStats& a, const SufficientStats& b) {
    if (a.r != b.r || a.q != b.q) throw DataError("stats schema mismatch");
    SufficientStats out = a;
    for (long long j = 0; j < out.q; ++j) {
        for (int k = 0; k < out.r; ++k) out.counts[j][k] += b.counts[j][k];
        out.row_sums[j] += b.row_sums[j];
    }
    out.total += b.total;
    return out;
}

double posterior_predictive_score(const SufficientStats& train, const SufficientStats& test,
                                  double ess) {
    return local_score_bdeu(combine_stats(train, test), ess) - local_score_bdeu(train, ess);
}

double posterior_mean_log_prob(const SufficientStats& stats, const std::vector<int>& parents,
                               int child, const std::vector<int>& row,
                               const std::vector<int>& cards, double ess) {
    long long j = 0;
    for (int p : parents) j = j * cards[p] + row[p];
    const double a_j = ess / static_cast<double>(stats.q);
    const double a_jk = a_j / static_cast<double>(stats.r);
    return std::log((static_cast<double>(stats.counts[j][row[child]]) + a_jk) /
                    (static_cast<double>(stats.row_sums[j]) + a_j));
}

double structure_log_prior(const ParentSet& parents, const std::vector<int>& condition,
                           const ScoreConfig& config) {
    if (static_cast<int>(parents.inter.size()) > config.k)
        throw DataError("parent set exceeds inter limit k=" + std::to_string(config.k));
    if (config.alpha == 0.0 || condition.empty()) return 0.0;
    bool includes_condition = false;
    for (int p : parents.inter) {
        if (std::find(condition.begin(), condition.end(), p) != condition.end()) {
            includes_condition = true;
            break;
        }
    }
    if (includes_condition) return 0.0;
    return std::isinf(config.alpha) ? -ScoreConfig::inf : -config.alpha;
}

std::string ScoreCache::key(int child, const ParentSet& parents) {
    std::string k = std::to_string(child);
    k += "|i";
    k += std::to_string(parents.intra);
    k += "|e";
    for (int p : parents.inter) {
        k += std::to_string(p);
        k += ',';
    }
    return k;
}

}  // namespace scf
