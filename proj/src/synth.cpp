#include "scf/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "scf/rng.hpp"

namespace scf {

CategoricalDataset synth_weak_features(int n_relevant, int n_noise, double p, long long n_rows,
                                       uint64_t seed) {
    if (p < 0.0 || p > 1.0) throw ValidationError("p must lie in [0,1]");
    if (n_relevant < 0 || n_noise < 0 || n_rows < 0) throw ValidationError("negative count");

    CategoricalDataset out;
    out.variables.push_back(Variable::binary("class"));
    for (int i = 0; i < n_relevant; ++i)
        out.variables.push_back(Variable::binary("feat_" + std::to_string(i)));
    for (int i = 0; i < n_noise; ++i)
        out.variables.push_back(Variable::binary("noise_" + std::to_string(i)));

    Rng rng(mix_seed(seed, 0x5e1f));
    out.rows.reserve(n_rows);
    for (long long r = 0; r < n_rows; ++r) {
        std::vector<int> row(out.variables.size());
        const int cls = rng.next_bool(0.5) ? 1 : 0;
        row[0] = cls;
        for (int i = 0; i < n_relevant; ++i) row[1 + i] = rng.next_bool(p) ? cls : 1 - cls;
        for (int i = 0; i < n_noise; ++i) row[1 + n_relevant + i] = rng.next_bool(0.5) ? 1 : 0;
        out.rows.push_back(std::move(row));
    }
    return out;
}

CategoricalDataset add_noise_features(const CategoricalDataset& data, int count, uint64_t seed) {
    if (count < 0) throw ValidationError("negative noise count");
    CategoricalDataset out = data;
    Rng rng(mix_seed(seed, 0x1701e));
    for (int i = 0; i < count; ++i)
        out.variables.push_back(Variable::binary("noise_" + std::to_string(i)));
    for (auto& row : out.rows)
        for (int i = 0; i < count; ++i) row.push_back(rng.next_bool(0.5) ? 1 : 0);
    return out;
}

void GroundTruthDbn::validate() const {
    const int m = static_cast<int>(variables.size());
    if (transition.n() != m) throw DataError("transition structure size mismatch");
    std::vector<int> cond(m);
    std::iota(cond.begin(), cond.end(), 0);
    validate_structure(transition, cond, m);
    if (static_cast<int>(cpt.size()) != m || static_cast<int>(initial.size()) != m)
        throw DataError("CPT table size mismatch");
    for (int i = 0; i < m; ++i) {
        const int r = variables[i].cardinality;
        long long q = 1;
        for (int p : transition.parents[i].inter) q *= variables[p].cardinality;
        if (transition.parents[i].has_intra()) q *= variables[transition.parents[i].intra].cardinality;
        if (static_cast<long long>(cpt[i].size()) != q)
            throw DataError("CPT rows for child " + std::to_string(i) + " do not match parents");
        for (const auto& dist : cpt[i]) {
            if (static_cast<int>(dist.size()) != r) throw DataError("CPT row width mismatch");
            double s = 0.0;
            for (double v : dist) {
                if (v < 0.0) throw DataError("negative CPT probability");
                s += v;
            }
            if (std::abs(s - 1.0) > 1e-9) throw DataError("CPT row does not sum to 1");
        }
        if (static_cast<int>(initial[i].size()) != r) throw DataError("initial row width mismatch");
        double s = std::accumulate(initial[i].begin(), initial[i].end(), 0.0);
        if (std::abs(s - 1.0) > 1e-9) throw DataError("initial row does not sum to 1");
    }
}

GroundTruthDbn random_scf1_truth(int m, double strength, uint64_t seed) {
    if (m < 1) throw ValidationError("need at least one variable");
    if (strength < 0.0 || strength > 1.0) throw ValidationError("strength must lie in [0,1]");
    Rng rng(mix_seed(seed, 0x0b17));

    GroundTruthDbn truth;
    for (int i = 0; i < m; ++i) truth.variables.push_back(Variable::binary("v" + std::to_string(i)));
    truth.transition.targets.resize(m);
    std::iota(truth.transition.targets.begin(), truth.transition.targets.end(), 0);
    truth.transition.parents.resize(m);
    for (int i = 0; i < m; ++i) {
        ParentSet& ps = truth.transition.parents[i];
        // Parents among lower indices keep the intra graph acyclic; roughly
        // half the vertices get an intra parent.
        if (i > 0 && rng.next_bool(0.5)) ps.intra = rng.next_int(i);
        ps.inter = {rng.next_int(m)};
    }

    // Favored child value = XOR of parent values; it gets `strength` mass.
    // XOR ties the child to the joint parent state, so single-parent model
    // classes cannot explain children that have both parents.
    for (int i = 0; i < m; ++i) {
        const ParentSet& ps = truth.transition.parents[i];
        const long long q = ps.has_intra() ? 4 : 2;
        std::vector<std::vector<double>> rows;
        for (long long j = 0; j < q; ++j) {
            int bits = 0;
            long long rem = j;
            for (long long d = q / 2; d >= 1; d /= 2) {
                bits ^= static_cast<int>(rem / d);
                rem %= d;
            }
            std::vector<double> dist(2, 1.0 - strength);
            dist[bits] = strength;
            rows.push_back(std::move(dist));
        }
        truth.cpt.push_back(std::move(rows));
        truth.initial.push_back({0.5, 0.5});
    }
    truth.validate();
    return truth;
}

namespace {

// Topological order of the intra forest: parents before children.
std::vector<int> intra_topo_order(const ScfStructure& s) {
    const int m = s.n();
    std::vector<int> order;
    std::vector<char> placed(m, 0);
    while (static_cast<int>(order.size()) < m) {
        for (int i = 0; i < m; ++i) {
            if (placed[i]) continue;
            const int p = s.parents[i].intra;
            if (p < 0 || placed[p]) {
                placed[i] = 1;
                order.push_back(i);
            }
        }
    }
    return order;
}

int sample_from(const std::vector<double>& dist, Rng& rng) {
    const double u = rng.next_double();
    double acc = 0.0;
    for (size_t v = 0; v < dist.size(); ++v) {
        acc += dist[v];
        if (u < acc) return static_cast<int>(v);
    }
    return static_cast<int>(dist.size()) - 1;
}

}  // namespace

SequenceDataset synth_dbn_sequences(const GroundTruthDbn& truth, long long n_timesteps,
                                    uint64_t seed, int n_sequences) {
    truth.validate();
    if (n_timesteps < 1) throw ValidationError("need at least one timestep");
    if (n_sequences < 1) throw ValidationError("need at least one sequence");
    const int m = static_cast<int>(truth.variables.size());
    const std::vector<int> order = intra_topo_order(truth.transition);

    SequenceDataset out;
    out.variables = truth.variables;
    for (int s = 0; s < n_sequences; ++s) {
        Rng rng(mix_seed(seed, 0xd6a, static_cast<uint64_t>(s)));
        std::vector<std::vector<int>> seq;
        std::vector<int> slice(m);
        for (int i = 0; i < m; ++i) slice[i] = sample_from(truth.initial[i], rng);
        seq.push_back(slice);
        for (long long t = 1; t < n_timesteps; ++t) {
            const std::vector<int>& prev = seq.back();
            std::vector<int> cur(m, -1);
            for (int i : order) {
                const ParentSet& ps = truth.transition.parents[i];
                long long j = 0;
                for (int p : ps.inter) j = j * truth.variables[p].cardinality + prev[p];
                if (ps.has_intra())
                    j = j * truth.variables[ps.intra].cardinality + cur[ps.intra];
                cur[i] = sample_from(truth.cpt[i][j], rng);
            }
            seq.push_back(std::move(cur));
        }
        out.sequences.push_back(std::move(seq));
    }
    return out;
}

}  // namespace scf
