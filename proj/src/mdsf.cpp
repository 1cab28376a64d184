#include "scf/mdsf.hpp"

#include <cmath>
#include <string>

namespace scf {

RootedDigraph RootedDigraph::make(int n, double fill) {
    RootedDigraph g;
    g.n = n;
    g.lambda.assign(n, std::vector<double>(n, fill));
    for (int i = 0; i < n; ++i) g.lambda[i][i] = kNegInf;
    g.rho.assign(n, fill);
    return g;
}

double forest_score(const RootedDigraph& g, const std::vector<int>& parent) {
    double total = 0.0;
    for (int i = 0; i < g.n; ++i)
        total += parent[i] < 0 ? g.rho[i] : g.lambda[parent[i]][i];
    return total;
}

void check_forest(const std::vector<int>& parent) {
    const int n = static_cast<int>(parent.size());
    for (int i = 0; i < n; ++i) {
        if (parent[i] == i || parent[i] >= n)
            throw DataError("bad parent pointer at vertex " + std::to_string(i));
    }
    std::vector<int> state(n, 0);
    for (int start = 0; start < n; ++start) {
        int v = start;
        std::vector<int> walk;
        while (v >= 0 && state[v] == 0) {
            state[v] = 1;
            walk.push_back(v);
            v = parent[v];
        }
        if (v >= 0 && state[v] == 1) throw DataError("parent pointers contain a cycle");
        for (int w : walk) state[w] = 2;
    }
}

namespace {

// Maximum arborescence rooted at vertex 0 on a dense weight matrix, by greedy
// best-in-edge selection and recursive cycle contraction. Returns parent ids
// in the matrix's own index space (parent of 0 is undefined / -1).
std::vector<int> arborescence(const std::vector<std::vector<double>>& w) {
    const int N = static_cast<int>(w.size());
    std::vector<int> best(N, -1);
    std::vector<double> best_w(N, kNegInf);
    for (int v = 1; v < N; ++v) {
        for (int u = 0; u < N; ++u) {  // ascending u: prefers root 0, then lowest source
            if (u == v) continue;
            if (w[u][v] > best_w[v]) {
                best_w[v] = w[u][v];
                best[v] = u;
            }
        }
        if (best[v] < 0 || std::isinf(best_w[v]))
            throw InfeasibleStructureError("vertex has no feasible parent or root option");
    }

    // Cycle detection over the chosen edges (vertex 0 has no in-edge).
    std::vector<int> state(N, 0);
    std::vector<int> cycle;
    state[0] = 2;
    for (int start = 1; start < N && cycle.empty(); ++start) {
        if (state[start]) continue;
        int v = start;
        std::vector<int> walk;
        while (state[v] == 0) {
            state[v] = 1;
            walk.push_back(v);
            v = best[v];
        }
        if (state[v] == 1) {  // found a cycle; collect it
            int u = v;
            do {
                cycle.push_back(u);
                u = best[u];
            } while (u != v);
        }
        for (int x : walk) state[x] = 2;
    }
    if (cycle.empty()) {
        best[0] = -1;
        return best;
    }

    // Contract the cycle into one vertex and recurse.
    std::vector<char> in_cycle(N, 0);
    for (int v : cycle) in_cycle[v] = 1;
    std::vector<int> old_of;            // contracted index -> original index (cycle rep = last)
    std::vector<int> new_of(N, -1);
    for (int v = 0; v < N; ++v)
        if (!in_cycle[v]) {
            new_of[v] = static_cast<int>(old_of.size());
            old_of.push_back(v);
        }
    const int c = static_cast<int>(old_of.size());  // contracted cycle vertex
    const int M = c + 1;

    std::vector<std::vector<double>> cw(M, std::vector<double>(M, kNegInf));
    std::vector<int> enter_v(M, -1);  // per outside source: which cycle vertex its edge enters
    std::vector<int> leave_u(M, -1);  // per outside sink: which cycle vertex supplies the edge
    for (int u = 0; u < N; ++u) {
        if (in_cycle[u]) continue;
        const int nu = new_of[u];
        for (int v = 0; v < N; ++v) {
            if (v == u) continue;
            if (!in_cycle[v]) {
                cw[nu][new_of[v]] = w[u][v];
            } else {
                // In-edge to the cycle: charge the displaced internal edge.
                const double adj = w[u][v] - best_w[v];
                if (adj > cw[nu][c]) {
                    cw[nu][c] = adj;
                    enter_v[nu] = v;
                }
            }
        }
    }
    for (int v = 0; v < N; ++v) {
        if (in_cycle[v]) continue;
        const int nv = new_of[v];
        for (int u : cycle) {
            if (w[u][v] > cw[c][nv]) {
                cw[c][nv] = w[u][v];
                leave_u[nv] = u;
            }
        }
    }

    std::vector<int> sub = arborescence(cw);

    std::vector<int> parent(N, -1);
    for (int v = 0; v < N; ++v) {
        if (v == 0) continue;
        if (in_cycle[v]) {
            parent[v] = best[v];  // internal cycle edge, one overwritten below
        } else {
            const int p = sub[new_of[v]];
            parent[v] = (p == c) ? leave_u[new_of[v]] : old_of[p];
        }
    }
    const int into_c = sub[c];
    const int entered = enter_v[into_c];
    parent[entered] = old_of[into_c];
    return parent;
}

Forest solve_with_roots(const RootedDigraph& g, const std::vector<double>& rho) {
    const int N = g.n + 1;
    std::vector<std::vector<double>> w(N, std::vector<double>(N, kNegInf));
    for (int i = 0; i < g.n; ++i) {
        w[0][i + 1] = rho[i];
        for (int j = 0; j < g.n; ++j)
            if (j != i) w[j + 1][i + 1] = g.lambda[j][i];
    }
    std::vector<int> aug = arborescence(w);
    Forest f;
    f.parent.resize(g.n);
    for (int i = 0; i < g.n; ++i) f.parent[i] = aug[i + 1] - 1;  // super-root becomes -1
    check_forest(f.parent);
    f.total_score = forest_score(g, f.parent);
    return f;
}

}  // namespace

Forest max_directed_spanning_forest(const RootedDigraph& g) {
    if (g.n == 0) return Forest{};
    return solve_with_roots(g, g.rho);
}

Forest max_directed_spanning_tree(const RootedDigraph& g) {
    if (g.n == 0) return Forest{};
    Forest best;
    bool found = false;
    for (int root = 0; root < g.n; ++root) {
        if (std::isinf(g.rho[root]) && g.rho[root] < 0) continue;
        std::vector<double> rho(g.n, kNegInf);
        rho[root] = g.rho[root];
        try {
            Forest f = solve_with_roots(g, rho);
            if (!found || f.total_score > best.total_score) {
                best = std::move(f);
                found = true;
            }
        } catch (const InfeasibleStructureError&) {
            continue;  // this root cannot reach every vertex
        }
    }
    if (!found) throw InfeasibleStructureError("no single-root spanning tree is feasible");
    return best;
}

Forest brute_force_msf(const RootedDigraph& g, long long* acyclic_count) {
    if (g.n > 8) throw ValidationError("brute force limited to n <= 8");
    if (acyclic_count) *acyclic_count = 0;
    if (g.n == 0) return Forest{};

    // Per-vertex options in tie-break order: root first, then sources ascending.
    std::vector<std::vector<int>> options(g.n);
    for (int i = 0; i < g.n; ++i) {
        options[i].push_back(-1);
        for (int j = 0; j < g.n; ++j)
            if (j != i) options[i].push_back(j);
    }

    std::vector<int> choice(g.n, 0);
    std::vector<int> parent(g.n);
    Forest best;
    bool found = false;
    while (true) {
        bool feasible = true;
        for (int i = 0; i < g.n; ++i) {
            parent[i] = options[i][choice[i]];
            const double wgt = parent[i] < 0 ? g.rho[i] : g.lambda[parent[i]][i];
            if (std::isinf(wgt) && wgt < 0) feasible = false;
        }
        if (feasible) {
            bool acyclic = true;
            try {
                check_forest(parent);
            } catch (const DataError&) {
                acyclic = false;
            }
            if (acyclic) {
                if (acyclic_count) ++*acyclic_count;
                const double score = forest_score(g, parent);
                if (!found || score > best.total_score) {
                    best.parent = parent;
                    best.total_score = score;
                    found = true;
                }
            }
        }
        int d = g.n - 1;  // advance mixed-radix counter, last vertex least significant
        while (d >= 0 && ++choice[d] == static_cast<int>(options[d].size())) choice[d--] = 0;
        if (d < 0) break;
    }
    if (!found) throw InfeasibleStructureError("no feasible forest exists");
    return best;
}

}  // namespace scf
