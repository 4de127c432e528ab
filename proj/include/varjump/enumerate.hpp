#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "varjump/errors.hpp"
#include "varjump/game.hpp"

namespace varjump {

constexpr std::uint64_t kDefaultStateBudget = 10'000'000;

// Number of distinct type-labelings: multinomial(|V|; n_1..n_k, |V|-n).
// Saturates instead of overflowing.
inline std::uint64_t state_count(const Instance& inst) {
    const int V = inst.graph.node_count();
    std::uint64_t result = 1;
    int used = 0;
    auto choose = [&](int slots) {
        // result *= C(V - used, slots), computed factor by factor
        std::uint64_t c = 1;
        for (int i = 1; i <= slots; ++i) {
            std::uint64_t next = c * static_cast<std::uint64_t>(V - used - slots + i);
            if (c != 0 && next / c != static_cast<std::uint64_t>(V - used - slots + i))
                { result = UINT64_MAX; return; }
            c = next / i;
        }
        if (result > UINT64_MAX / (c == 0 ? 1 : c)) { result = UINT64_MAX; return; }
        result *= c;
        used += slots;
    };
    for (int cnt : inst.profile.counts) {
        choose(cnt);
        if (result == UINT64_MAX) return result;
    }
    return result;
}

inline void check_budget(const Instance& inst, std::uint64_t budget) {
    const std::uint64_t states = state_count(inst);
    if (states > budget) throw budget_exceeded(states, budget);
}

// First labeling in lexicographic occupancy order: smallest values first,
// with kEmpty (= -1) < 0 < 1 < ...
inline Assignment first_assignment(const Instance& inst) {
    Assignment a;
    a.occupancy.assign(inst.graph.node_count(), kEmpty);
    int pos = inst.empty_count();
    for (int t = 0; t < inst.profile.k(); ++t)
        for (int i = 0; i < inst.profile.counts[t]; ++i)
            a.occupancy[pos++] = static_cast<std::int8_t>(t);
    return a;
}

// Calls fn for every type-labeling exactly once, in lexicographic order of
// the occupancy vector. fn may return false to stop early.
inline void for_each_assignment(const Instance& inst,
                                const std::function<bool(const Assignment&)>& fn,
                                std::uint64_t budget = kDefaultStateBudget) {
    check_budget(inst, budget);
    Assignment a = first_assignment(inst);
    do {
        if (!fn(a)) return;
    } while (std::next_permutation(a.occupancy.begin(), a.occupancy.end()));
}

inline std::vector<Assignment> enumerate_assignments(const Instance& inst,
                                                     std::uint64_t budget = kDefaultStateBudget) {
    std::vector<Assignment> out;
    for_each_assignment(inst, [&](const Assignment& a) {
        out.push_back(a);
        return true;
    }, budget);
    return out;
}

// Packs an occupancy vector into a radix-(k+1) code for hashing / visited
// sets. Requires (k+1)^|V| to fit in 64 bits, which check_code_width audits.
inline std::uint64_t pack_state(const Assignment& a, int k) {
    std::uint64_t code = 0;
    const std::uint64_t radix = static_cast<std::uint64_t>(k) + 1;
    for (std::int8_t t : a.occupancy) code = code * radix + static_cast<std::uint64_t>(t + 1);
    return code;
}

inline bool state_code_fits(const Instance& inst) {
    const long double bits =
        inst.graph.node_count() * std::log2l(static_cast<long double>(inst.profile.k()) + 1);
    return bits < 63.5L;
}

}  // namespace varjump
