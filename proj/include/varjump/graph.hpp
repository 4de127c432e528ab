#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "varjump/errors.hpp"

namespace varjump {

// Undirected simple connected graph over 0-based dense node ids.
// Adjacency lists are kept sorted.
class Graph {
public:
    Graph() : node_count_(0) {}
    explicit Graph(int node_count) : node_count_(node_count), adjacency_(node_count) {
        if (node_count < 1) throw invalid_parameter("graph needs at least one node");
    }

    int node_count() const { return node_count_; }

    const std::vector<int>& neighbors(int v) const { return adjacency_.at(v); }

    int degree(int v) const { return static_cast<int>(adjacency_.at(v).size()); }

    void add_edge(int u, int v) {
        if (u == v) throw invalid_parameter("self-loop rejected");
        if (u < 0 || v < 0 || u >= node_count_ || v >= node_count_)
            throw invalid_parameter("edge endpoint out of range");
        if (has_edge(u, v)) throw invalid_parameter("duplicate edge rejected");
        insert_sorted(adjacency_[u], v);
        insert_sorted(adjacency_[v], u);
    }

    bool has_edge(int u, int v) const {
        const auto& a = adjacency_.at(u);
        return std::binary_search(a.begin(), a.end(), v);
    }

    int edge_count() const {
        int total = 0;
        for (const auto& a : adjacency_) total += static_cast<int>(a.size());
        return total / 2;
    }

    // Edges as ordered pairs (u < v), ascending.
    std::vector<std::pair<int, int>> edges() const {
        std::vector<std::pair<int, int>> out;
        for (int u = 0; u < node_count_; ++u)
            for (int v : adjacency_[u])
                if (u < v) out.emplace_back(u, v);
        return out;
    }

    int max_degree() const {
        int d = 0;
        for (int v = 0; v < node_count_; ++v) d = std::max(d, degree(v));
        return d;
    }

    bool is_regular(int d) const {
        for (int v = 0; v < node_count_; ++v)
            if (degree(v) != d) return false;
        return true;
    }

    bool is_connected() const {
        if (node_count_ == 0) return false;
        std::vector<char> seen(node_count_, 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        int visited = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : adjacency_[v])
                if (!seen[w]) {
                    seen[w] = 1;
                    ++visited;
                    stack.push_back(w);
                }
        }
        return visited == node_count_;
    }

    // Structural audit every generator runs before returning.
    void validate() const {
        for (int v = 0; v < node_count_; ++v) {
            const auto& a = adjacency_[v];
            if (!std::is_sorted(a.begin(), a.end()))
                throw construction_error("adjacency list not sorted");
            if (std::adjacent_find(a.begin(), a.end()) != a.end())
                throw construction_error("duplicate neighbor");
            for (int w : a) {
                if (w == v) throw construction_error("self-loop");
                if (!has_edge(w, v)) throw construction_error("asymmetric adjacency");
            }
        }
        if (!is_connected()) throw construction_error("graph not connected");
    }

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.node_count_ == b.node_count_ && a.adjacency_ == b.adjacency_;
    }

private:
    static void insert_sorted(std::vector<int>& a, int v) {
        a.insert(std::upper_bound(a.begin(), a.end(), v), v);
    }

    int node_count_;
    std::vector<std::vector<int>> adjacency_;
};

// Named node groups attached to a generated graph (clique vs. line nodes,
// gadget node names, ...). Groups partition the node set.
using RoleMap = std::map<std::string, std::vector<int>>;

struct RoledGraph {
    Graph graph;
    RoleMap roles;
};

inline void validate_roles(const Graph& g, const RoleMap& roles) {
    std::vector<char> seen(g.node_count(), 0);
    for (const auto& [name, nodes] : roles)
        for (int v : nodes) {
            if (v < 0 || v >= g.node_count())
                throw construction_error("role node out of range: " + name);
            if (seen[v]) throw construction_error("role overlap at node " + std::to_string(v));
            seen[v] = 1;
        }
    for (int v = 0; v < g.node_count(); ++v)
        if (!seen[v]) throw construction_error("node missing from roles: " + std::to_string(v));
}

}  // namespace varjump
