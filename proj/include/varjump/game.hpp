#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "varjump/errors.hpp"
#include "varjump/graph.hpp"

namespace varjump {

constexpr std::int8_t kEmpty = -1;

// Number of agents of each type; type id = index.
struct TypeProfile {
    std::vector<int> counts;

    int k() const { return static_cast<int>(counts.size()); }
    int n() const { return std::accumulate(counts.begin(), counts.end(), 0); }
    bool symmetric() const {
        return std::all_of(counts.begin(), counts.end(),
                           [&](int c) { return c == counts[0]; });
    }
    int max_count() const { return *std::max_element(counts.begin(), counts.end()); }

    void validate() const {
        if (k() < 2) throw invalid_parameter("need k >= 2 types");
        for (int c : counts)
            if (c < 1) throw invalid_parameter("every type needs >= 1 agent");
    }
};

struct Instance {
    Graph graph;
    TypeProfile profile;

    int empty_count() const { return graph.node_count() - profile.n(); }

    void validate() const {
        profile.validate();
        if (profile.n() >= graph.node_count())
            throw invalid_parameter("need n < |V| (at least one empty node)");
    }
};

// Game state as a type-labeling of the nodes: occupancy[v] is a type id or
// kEmpty. Agents of the same type are interchangeable, so this quotient loses
// nothing the model cares about.
struct Assignment {
    std::vector<std::int8_t> occupancy;

    bool occupied(int v) const { return occupancy[v] != kEmpty; }

    void validate(const Instance& inst) const {
        if (static_cast<int>(occupancy.size()) != inst.graph.node_count())
            throw invalid_parameter("occupancy length != node count");
        std::vector<int> counts(inst.profile.k(), 0);
        int empties = 0;
        for (std::int8_t t : occupancy) {
            if (t == kEmpty) { ++empties; continue; }
            if (t < 0 || t >= inst.profile.k()) throw invalid_parameter("bad type id");
            ++counts[t];
        }
        if (counts != inst.profile.counts) throw invalid_parameter("type counts mismatch");
        if (empties != inst.empty_count()) throw invalid_parameter("empty count mismatch");
    }

    friend bool operator==(const Assignment& a, const Assignment& b) {
        return a.occupancy == b.occupancy;
    }
};

struct Jump {
    int from;
    int to;
    int type;

    friend bool operator==(const Jump& a, const Jump& b) {
        return a.from == b.from && a.to == b.to && a.type == b.type;
    }
};

// Distinct types adjacent to v (v itself may be occupied or empty).
inline int type_count(const Instance& inst, const Assignment& a, int v) {
    std::uint32_t mask = 0;
    for (int w : inst.graph.neighbors(v))
        if (a.occupied(w)) mask |= 1u << a.occupancy[w];
    return std::popcount(mask);
}

// Distinct foreign types adjacent to the agent at v.
inline int utility(const Instance& inst, const Assignment& a, int v) {
    if (!a.occupied(v)) throw invalid_parameter("utility of an empty node");
    std::uint32_t mask = 0;
    for (int w : inst.graph.neighbors(v))
        if (a.occupied(w)) mask |= 1u << a.occupancy[w];
    mask &= ~(1u << a.occupancy[v]);
    return std::popcount(mask);
}

// Utility the agent of `type` would get at node `to` after vacating `from`
// (its own former node no longer contributes).
inline int utility_after_jump(const Instance& inst, const Assignment& a,
                              int from, int to, int type) {
    std::uint32_t mask = 0;
    for (int w : inst.graph.neighbors(to))
        if (w != from && a.occupied(w)) mask |= 1u << a.occupancy[w];
    mask &= ~(1u << type);
    return std::popcount(mask);
}

inline int social_welfare(const Instance& inst, const Assignment& a) {
    int sw = 0;
    for (int v = 0; v < inst.graph.node_count(); ++v)
        if (a.occupied(v)) sw += utility(inst, a, v);
    return sw;
}

inline int colorful_edges(const Instance& inst, const Assignment& a) {
    int ce = 0;
    for (int u = 0; u < inst.graph.node_count(); ++u)
        for (int v : inst.graph.neighbors(u))
            if (u < v && a.occupied(u) && a.occupied(v) &&
                a.occupancy[u] != a.occupancy[v])
                ++ce;
    return ce;
}

struct Metrics {
    int sw = 0;
    int ce = 0;
    int mono = 0;                 // monochromatic edges M
    int c_count = 0;              // empty nodes with type-count <= 1
    std::optional<int> te;        // total type-count of the empties (2-empty only)
    std::optional<int> b;         // 1 iff the two empty nodes are adjacent
};

inline Metrics metrics(const Instance& inst, const Assignment& a) {
    Metrics m;
    m.sw = social_welfare(inst, a);
    std::vector<int> empties;
    for (int v = 0; v < inst.graph.node_count(); ++v) {
        if (!a.occupied(v)) {
            empties.push_back(v);
            if (type_count(inst, a, v) <= 1) ++m.c_count;
        }
    }
    for (int u = 0; u < inst.graph.node_count(); ++u)
        for (int v : inst.graph.neighbors(u))
            if (u < v && a.occupied(u) && a.occupied(v)) {
                if (a.occupancy[u] != a.occupancy[v]) ++m.ce;
                else ++m.mono;
            }
    if (empties.size() == 2) {
        m.te = type_count(inst, a, empties[0]) + type_count(inst, a, empties[1]);
        m.b = inst.graph.has_edge(empties[0], empties[1]) ? 1 : 0;
    }
    return m;
}

struct ImprovingJump {
    Jump jump;
    int old_utility;
    int new_utility;
};

// All strictly improving jumps, ascending by (from, to).
inline std::vector<ImprovingJump> improving_jumps(const Instance& inst, const Assignment& a) {
    std::vector<int> empties;
    for (int v = 0; v < inst.graph.node_count(); ++v)
        if (!a.occupied(v)) empties.push_back(v);
    std::vector<ImprovingJump> out;
    for (int from = 0; from < inst.graph.node_count(); ++from) {
        if (!a.occupied(from)) continue;
        const int type = a.occupancy[from];
        const int u_old = utility(inst, a, from);
        for (int to : empties) {
            const int u_new = utility_after_jump(inst, a, from, to, type);
            if (u_new > u_old) out.push_back({{from, to, type}, u_old, u_new});
        }
    }
    return out;
}

inline std::optional<Jump> first_improving_jump(const Instance& inst, const Assignment& a) {
    std::vector<int> empties;
    for (int v = 0; v < inst.graph.node_count(); ++v)
        if (!a.occupied(v)) empties.push_back(v);
    for (int from = 0; from < inst.graph.node_count(); ++from) {
        if (!a.occupied(from)) continue;
        const int type = a.occupancy[from];
        const int u_old = utility(inst, a, from);
        for (int to : empties)
            if (utility_after_jump(inst, a, from, to, type) > u_old)
                return Jump{from, to, type};
    }
    return std::nullopt;
}

inline bool is_equilibrium(const Instance& inst, const Assignment& a,
                           Jump* witness = nullptr) {
    auto j = first_improving_jump(inst, a);
    if (j && witness) *witness = *j;
    return !j.has_value();
}

inline Assignment apply_jump(const Assignment& a, const Jump& j) {
    if (j.from == j.to || a.occupancy[j.from] != j.type || a.occupancy[j.to] != kEmpty)
        throw invalid_parameter("invalid jump");
    Assignment b = a;
    b.occupancy[j.from] = kEmpty;
    b.occupancy[j.to] = static_cast<std::int8_t>(j.type);
    return b;
}

}  // namespace varjump
