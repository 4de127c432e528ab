#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "varjump/errors.hpp"
#include "varjump/graph.hpp"
#include "varjump/rng.hpp"

namespace varjump {

inline Graph make_line(int n) {
    if (n < 2) throw invalid_parameter("line needs n >= 2");
    Graph g(n);
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    g.validate();
    return g;
}

inline Graph make_cycle(int n) {
    if (n < 3) throw invalid_parameter("cycle needs n >= 3");
    Graph g(n);
    for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
    g.validate();
    return g;
}

// 2 x m cylinder: two m-cycles joined by rung edges, 3-regular.
// Row-major layout: node (r, c) = r*m + c for r in {0,1}.
inline Graph make_cylinder(int m) {
    if (m < 3) throw invalid_parameter("cylinder needs m >= 3");
    Graph g(2 * m);
    for (int c = 0; c < m; ++c) {
        g.add_edge(c, m + c);  // rung
        g.add_edge(c, (c + 1) % m);
        g.add_edge(m + c, m + (c + 1) % m);
    }
    g.validate();
    if (!g.is_regular(3)) throw construction_error("cylinder not 3-regular");
    return g;
}

// m1 x m2 torus, 4-regular. Row-major: node (r, c) = r*m2 + c.
inline Graph make_torus(int m1, int m2) {
    if (m2 < 3 || m1 < m2) throw invalid_parameter("torus needs m1 >= m2 >= 3");
    Graph g(m1 * m2);
    auto id = [m2](int r, int c) { return r * m2 + c; };
    for (int r = 0; r < m1; ++r)
        for (int c = 0; c < m2; ++c) {
            g.add_edge(id(r, c), id(r, (c + 1) % m2));
            g.add_edge(id(r, c), id((r + 1) % m1, c));
        }
    g.validate();
    if (!g.is_regular(4)) throw construction_error("torus not 4-regular");
    return g;
}

inline Graph make_clique(int n) {
    if (n < 1) throw invalid_parameter("clique needs n >= 1");
    Graph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
    if (n > 1) g.validate();
    return g;
}

// Clique K_n plus one line l_T per type, ordered by descending type size so
// T_1 = R is the largest. One clique node attaches to the first node of l_R;
// for 2 <= t <= k-1, all but the last node of l_{T_t} attach to the last node
// of l_{T_{t-1}}; every node of l_{T_k} attaches to the last node of
// l_{T_{k-1}}. Roles: "clique", "line_0".."line_{k-1}" (line_t = l_{T_{t+1}}).
inline RoledGraph make_clique_lines(std::vector<int> profile) {
    if (profile.size() < 2) throw invalid_parameter("clique-lines needs k >= 2");
    for (int c : profile)
        if (c < 1) throw invalid_parameter("type sizes must be positive");
    std::sort(profile.begin(), profile.end(), std::greater<int>());
    const int k = static_cast<int>(profile.size());
    for (int t = 1; t + 1 < k; ++t)
        if (profile[t] < 2)
            throw invalid_parameter("middle line of size 1 would disconnect the graph");
    const int n = std::accumulate(profile.begin(), profile.end(), 0);

    RoledGraph out;
    out.graph = Graph(2 * n);
    RoleMap& roles = out.roles;
    std::vector<int> clique(n);
    std::iota(clique.begin(), clique.end(), 0);
    roles["clique"] = clique;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) out.graph.add_edge(u, v);

    int next = n;
    std::vector<std::vector<int>> lines(k);
    for (int t = 0; t < k; ++t) {
        for (int i = 0; i < profile[t]; ++i) {
            lines[t].push_back(next++);
            if (i > 0) out.graph.add_edge(lines[t][i - 1], lines[t][i]);
        }
        roles["line_" + std::to_string(t)] = lines[t];
    }
    out.graph.add_edge(0, lines[0].front());
    for (int t = 1; t < k; ++t) {
        const int anchor = lines[t - 1].back();
        const int stop = (t == k - 1) ? profile[t] : profile[t] - 1;
        for (int i = 0; i < stop; ++i) out.graph.add_edge(lines[t][i], anchor);
    }
    out.graph.validate();
    validate_roles(out.graph, roles);
    return out;
}

// Clique K_n and cycle c_n joined by a single edge. Roles: "clique",
// "cycle" (cycle nodes listed in cyclic order).
inline RoledGraph make_clique_cycle(int n, int k) {
    if (k < 2 || n < 2 || n % k != 0) throw invalid_parameter("need k >= 2 and k | n");
    if ((n / k) % 2 != 0) throw invalid_parameter("n/k must be even");
    RoledGraph out;
    out.graph = Graph(2 * n);
    std::vector<int> clique(n), cycle(n);
    std::iota(clique.begin(), clique.end(), 0);
    std::iota(cycle.begin(), cycle.end(), n);
    out.roles["clique"] = clique;
    out.roles["cycle"] = cycle;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) out.graph.add_edge(u, v);
    for (int i = 0; i < n; ++i) out.graph.add_edge(cycle[i], cycle[(i + 1) % n]);
    out.graph.add_edge(0, cycle[0]);
    out.graph.validate();
    validate_roles(out.graph, out.roles);
    return out;
}

// delta-regular ring of cliques (delta = n/k + 1): a cycle of k hub nodes,
// k cliques of size delta; hub v_l attaches to all but two nodes of clique
// (l+1) mod k; the 2k detached clique nodes are stitched into a second cycle
// that alternates existing in-clique edges with new cross-clique edges, so
// every node ends with degree exactly delta. For k = 2 the hub "cycle"
// degenerates to a single edge and each hub skips one clique node instead of
// two; the two detached nodes are joined by one edge.
// Roles: "cycle" (hubs), "clique_0".."clique_{k-1}".
inline RoledGraph make_regular_ring_of_cliques(int n, int k) {
    if (k < 2 || n % k != 0) throw invalid_parameter("need k >= 2 and k | n");
    const int delta = n / k + 1;
    if (delta < 3) throw invalid_parameter("need n/k + 1 >= 3");

    RoledGraph out;
    out.graph = Graph(k + k * delta);
    Graph& g = out.graph;
    std::vector<int> hubs(k);
    std::iota(hubs.begin(), hubs.end(), 0);
    out.roles["cycle"] = hubs;
    std::vector<std::vector<int>> cliques(k);
    int next = k;
    for (int l = 0; l < k; ++l) {
        for (int i = 0; i < delta; ++i) cliques[l].push_back(next++);
        for (int i = 0; i < delta; ++i)
            for (int j = i + 1; j < delta; ++j) g.add_edge(cliques[l][i], cliques[l][j]);
        out.roles["clique_" + std::to_string(l)] = cliques[l];
    }
    const int skip = (k == 2) ? 1 : 2;  // detached nodes per clique
    if (k > 2)
        for (int l = 0; l < k; ++l) g.add_edge(hubs[l], hubs[(l + 1) % k]);
    else
        g.add_edge(hubs[0], hubs[1]);
    for (int l = 0; l < k; ++l) {
        const auto& target = cliques[(l + 1) % k];
        for (int i = 0; i < delta - skip; ++i) g.add_edge(hubs[l], target[i]);
    }
    if (k == 2) {
        g.add_edge(cliques[0].back(), cliques[1].back());
    } else {
        // second cycle: ... a_l - b_l (existing clique edge) - a_{l+1} ...
        for (int l = 0; l < k; ++l)
            g.add_edge(cliques[l][delta - 1], cliques[(l + 1) % k][delta - 2]);
    }
    g.validate();
    if (!g.is_regular(delta)) throw construction_error("ring of cliques not regular");
    validate_roles(g, out.roles);
    return out;
}

// Gadget with nodes p_1..p_x, q, r, s, t: each p_i adjacent to q, s, t;
// triangle r-s-t; edge q-r. Roles: "p", "q", "r", "s", "t".
inline RoledGraph make_pos_gadget(int x) {
    if (x < 1) throw invalid_parameter("gadget needs x >= 1");
    RoledGraph out;
    out.graph = Graph(x + 4);
    const int q = x, r = x + 1, s = x + 2, t = x + 3;
    std::vector<int> ps(x);
    std::iota(ps.begin(), ps.end(), 0);
    out.roles["p"] = ps;
    out.roles["q"] = {q};
    out.roles["r"] = {r};
    out.roles["s"] = {s};
    out.roles["t"] = {t};
    for (int i = 0; i < x; ++i) {
        out.graph.add_edge(i, q);
        out.graph.add_edge(i, s);
        out.graph.add_edge(i, t);
    }
    out.graph.add_edge(r, s);
    out.graph.add_edge(r, t);
    out.graph.add_edge(s, t);
    out.graph.add_edge(q, r);
    out.graph.validate();
    validate_roles(out.graph, out.roles);
    return out;
}

// Erdos-Renyi G(n, p) conditioned on connectivity by rejection. Deterministic
// given the seed; the rng stream advances across rejected samples.
inline Graph make_random_connected(int num_nodes, double edge_prob, std::uint64_t seed) {
    if (num_nodes < 2) throw invalid_parameter("need num_nodes >= 2");
    if (!(edge_prob > 0.0 && edge_prob <= 1.0)) throw invalid_parameter("need 0 < edge_prob <= 1");
    Rng rng = make_rng(seed);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        Graph g(num_nodes);
        for (int u = 0; u < num_nodes; ++u)
            for (int v = u + 1; v < num_nodes; ++v)
                if (rng_chance(rng, edge_prob)) g.add_edge(u, v);
        if (g.is_connected()) {
            g.validate();
            return g;
        }
    }
    throw invalid_parameter("no connected sample in 1000 attempts; increase edge_prob");
}

// Uniform random labeled tree via Prufer-sequence decoding; deterministic
// given the seed.
inline Graph make_random_tree(int n, std::uint64_t seed) {
    if (n < 2) throw invalid_parameter("tree needs n >= 2");
    Graph g(n);
    if (n == 2) {
        g.add_edge(0, 1);
        g.validate();
        return g;
    }
    Rng rng = make_rng(seed);
    std::vector<int> prufer(n - 2);
    for (int& x : prufer) x = static_cast<int>(rng_below(rng, n));
    std::vector<int> deg(n, 1);
    for (int x : prufer) ++deg[x];
    std::vector<int> leaves;
    for (int v = 0; v < n; ++v)
        if (deg[v] == 1) leaves.push_back(v);
    std::make_heap(leaves.begin(), leaves.end(), std::greater<int>());
    for (int x : prufer) {
        std::pop_heap(leaves.begin(), leaves.end(), std::greater<int>());
        int leaf = leaves.back();
        leaves.pop_back();
        g.add_edge(leaf, x);
        if (--deg[x] == 1) {
            leaves.push_back(x);
            std::push_heap(leaves.begin(), leaves.end(), std::greater<int>());
        }
    }
    std::pop_heap(leaves.begin(), leaves.end(), std::greater<int>());
    int a = leaves.back();
    leaves.pop_back();
    g.add_edge(a, leaves.front());
    g.validate();
    if (g.edge_count() != n - 1) throw construction_error("tree edge count wrong");
    return g;
}

}  // namespace varjump
