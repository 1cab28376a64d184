#include "scf/structure.hpp"

#include <algorithm>
#include <unordered_set>

namespace scf {

void validate_forest(const std::vector<int>& intra_positions) {
    const int n = static_cast<int>(intra_positions.size());
    for (int i = 0; i < n; ++i) {
        const int p = intra_positions[i];
        if (p == i) throw DataError("vertex " + std::to_string(i) + " is its own intra parent");
        if (p >= n) throw DataError("intra parent position out of range");
    }
    // Follow parent pointers; a walk longer than n vertices means a cycle.
    std::vector<int> state(n, 0);  // 0 unseen, 1 on current walk, 2 done
    for (int start = 0; start < n; ++start) {
        int v = start;
        std::vector<int> walk;
        while (v >= 0 && state[v] == 0) {
            state[v] = 1;
            walk.push_back(v);
            v = intra_positions[v];
        }
        if (v >= 0 && state[v] == 1)
            throw DataError("intra edges contain a cycle through vertex " + std::to_string(v));
        for (int w : walk) state[w] = 2;
    }
}

void validate_structure(const ScfStructure& s, const std::vector<int>& condition, int k) {
    if (s.parents.size() != s.targets.size())
        throw DataError("structure has " + std::to_string(s.parents.size()) + " parent sets for " +
                        std::to_string(s.targets.size()) + " targets");
    std::unordered_set<int> target_set(s.targets.begin(), s.targets.end());
    std::unordered_set<int> cond_set(condition.begin(), condition.end());

    std::vector<int> intra_pos(s.n(), -1);
    for (int i = 0; i < s.n(); ++i) {
        const ParentSet& ps = s.parents[i];
        if (static_cast<int>(ps.inter.size()) > k)
            throw DataError("child " + std::to_string(s.targets[i]) + " has " +
                            std::to_string(ps.inter.size()) + " inter parents, limit " +
                            std::to_string(k));
        if (!std::is_sorted(ps.inter.begin(), ps.inter.end()))
            throw DataError("inter parents must be sorted ascending");
        for (int p : ps.inter)
            if (!cond_set.count(p))
                throw DataError("inter parent " + std::to_string(p) + " not in the condition set");
        if (ps.has_intra()) {
            if (ps.intra == s.targets[i]) throw DataError("child is its own intra parent");
            auto it = std::find(s.targets.begin(), s.targets.end(), ps.intra);
            if (it == s.targets.end())
                throw DataError("intra parent " + std::to_string(ps.intra) + " not in the target set");
            intra_pos[i] = static_cast<int>(it - s.targets.begin());
        }
    }
    validate_forest(intra_pos);
}

}  // namespace scf
