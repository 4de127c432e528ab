#pragma once

#include <cctype>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "varjump/errors.hpp"
#include "varjump/game.hpp"
#include "varjump/graph.hpp"

namespace varjump {

// Plain-text key-value documents.
//
// Instance file:
//   node_count: 5
//   edges: [(0, 1), (0, 2), (1, 2)]
//   profile: [2, 1]
//   roles: {clique: [0, 1, 2], line_0: [3, 4]}   # optional
//
// Assignment file:
//   occupancy: [0, E, 1, E, 0]

namespace detail {

struct Token {
    enum Kind { Ident, Number, Punct, End } kind = End;
    std::string text;
    long long value = 0;
};

class Lexer {
public:
    explicit Lexer(std::string src) : src_(std::move(src)) { advance(); }

    const Token& peek() const { return cur_; }

    Token next() {
        Token t = cur_;
        advance();
        return t;
    }

    void expect_punct(char c) {
        if (cur_.kind != Token::Punct || cur_.text[0] != c)
            throw invalid_input("expected '" + std::string(1, c) + "' near '" + cur_.text + "'");
        advance();
    }

private:
    void advance() {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) { ++pos_; continue; }
            if (c == '#') {  // comment to end of line
                while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
                continue;
            }
            break;
        }
        if (pos_ >= src_.size()) { cur_ = {Token::End, "<eof>", 0}; return; }
        const char c = src_[pos_];
        if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_++;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                ++pos_;
            cur_.kind = Token::Number;
            cur_.text = src_.substr(start, pos_ - start);
            cur_.value = std::stoll(cur_.text);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_++;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            cur_ = {Token::Ident, src_.substr(start, pos_ - start), 0};
            return;
        }
        if (std::string(":,[](){}").find(c) != std::string::npos) {
            cur_ = {Token::Punct, std::string(1, c), 0};
            ++pos_;
            return;
        }
        throw invalid_input("unexpected character '" + std::string(1, c) + "'");
    }

    std::string src_;
    std::size_t pos_ = 0;
    Token cur_;
};

inline long long parse_number(Lexer& lx) {
    Token t = lx.next();
    if (t.kind != Token::Number) throw invalid_input("expected a number, got '" + t.text + "'");
    return t.value;
}

inline std::vector<int> parse_int_list(Lexer& lx) {
    std::vector<int> out;
    lx.expect_punct('[');
    while (!(lx.peek().kind == Token::Punct && lx.peek().text == "]")) {
        out.push_back(static_cast<int>(parse_number(lx)));
        if (lx.peek().kind == Token::Punct && lx.peek().text == ",") lx.next();
    }
    lx.expect_punct(']');
    return out;
}

inline std::vector<std::pair<int, int>> parse_edge_list(Lexer& lx) {
    std::vector<std::pair<int, int>> out;
    lx.expect_punct('[');
    while (!(lx.peek().kind == Token::Punct && lx.peek().text == "]")) {
        lx.expect_punct('(');
        const int u = static_cast<int>(parse_number(lx));
        lx.expect_punct(',');
        const int v = static_cast<int>(parse_number(lx));
        lx.expect_punct(')');
        out.emplace_back(u, v);
        if (lx.peek().kind == Token::Punct && lx.peek().text == ",") lx.next();
    }
    lx.expect_punct(']');
    return out;
}

inline RoleMap parse_roles(Lexer& lx) {
    RoleMap roles;
    lx.expect_punct('{');
    while (!(lx.peek().kind == Token::Punct && lx.peek().text == "}")) {
        Token name = lx.next();
        if (name.kind != Token::Ident) throw invalid_input("expected a role name");
        lx.expect_punct(':');
        roles[name.text] = parse_int_list(lx);
        if (lx.peek().kind == Token::Punct && lx.peek().text == ",") lx.next();
    }
    lx.expect_punct('}');
    return roles;
}

}  // namespace detail

struct RoledInstance {
    Instance instance;
    RoleMap roles;
};

inline RoledInstance parse_instance(const std::string& text) {
    detail::Lexer lx(text);
    int node_count = -1;
    std::vector<std::pair<int, int>> edges;
    std::vector<int> profile;
    RoleMap roles;
    bool have_edges = false, have_profile = false;
    while (lx.peek().kind != detail::Token::End) {
        detail::Token key = lx.next();
        if (key.kind != detail::Token::Ident) throw invalid_input("expected a key");
        lx.expect_punct(':');
        if (key.text == "node_count") {
            node_count = static_cast<int>(detail::parse_number(lx));
        } else if (key.text == "edges") {
            edges = detail::parse_edge_list(lx);
            have_edges = true;
        } else if (key.text == "profile") {
            profile = detail::parse_int_list(lx);
            have_profile = true;
        } else if (key.text == "roles") {
            roles = detail::parse_roles(lx);
        } else {
            throw invalid_input("unknown key '" + key.text + "'");
        }
    }
    if (node_count <= 0) throw invalid_input("missing or non-positive node_count");
    if (!have_edges) throw invalid_input("missing edges");
    if (!have_profile) throw invalid_input("missing profile");
    RoledInstance out;
    out.instance.graph = Graph(node_count);
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= node_count || v >= node_count)
            throw invalid_input("edge endpoint out of range");
        if (u == v) throw invalid_input("self-loop in edge list");
        if (out.instance.graph.has_edge(u, v)) throw invalid_input("duplicate edge");
        out.instance.graph.add_edge(u, v);
    }
    out.instance.profile.counts = profile;
    try {
        out.instance.validate();
        if (!roles.empty()) validate_roles(out.instance.graph, roles);
    } catch (const invalid_parameter& e) {
        throw invalid_input(e.what());
    }
    out.roles = roles;
    return out;
}

inline std::string serialize_instance(const Instance& inst, const RoleMap& roles = {}) {
    std::ostringstream os;
    os << "node_count: " << inst.graph.node_count() << "\n";
    os << "edges: [";
    bool first = true;
    for (auto [u, v] : inst.graph.edges()) {
        if (!first) os << ", ";
        os << "(" << u << ", " << v << ")";
        first = false;
    }
    os << "]\n";
    os << "profile: [";
    for (int t = 0; t < inst.profile.k(); ++t)
        os << (t ? ", " : "") << inst.profile.counts[t];
    os << "]\n";
    if (!roles.empty()) {
        os << "roles: {";
        first = true;
        for (const auto& [name, nodes] : roles) {
            if (!first) os << ", ";
            os << name << ": [";
            for (std::size_t i = 0; i < nodes.size(); ++i) os << (i ? ", " : "") << nodes[i];
            os << "]";
            first = false;
        }
        os << "}\n";
    }
    return os.str();
}

inline Assignment parse_assignment(const std::string& text, const Instance& inst) {
    detail::Lexer lx(text);
    detail::Token key = lx.next();
    if (key.kind != detail::Token::Ident || key.text != "occupancy")
        throw invalid_input("expected occupancy key");
    lx.expect_punct(':');
    Assignment a;
    lx.expect_punct('[');
    while (!(lx.peek().kind == detail::Token::Punct && lx.peek().text == "]")) {
        if (lx.peek().kind == detail::Token::Ident && lx.peek().text == "E") {
            lx.next();
            a.occupancy.push_back(kEmpty);
        } else {
            a.occupancy.push_back(static_cast<std::int8_t>(detail::parse_number(lx)));
        }
        if (lx.peek().kind == detail::Token::Punct && lx.peek().text == ",") lx.next();
    }
    lx.expect_punct(']');
    if (lx.peek().kind != detail::Token::End) throw invalid_input("trailing content");
    try {
        a.validate(inst);
    } catch (const invalid_parameter& e) {
        throw invalid_input(e.what());
    }
    return a;
}

inline std::string serialize_assignment(const Assignment& a) {
    std::ostringstream os;
    os << "occupancy: [";
    for (std::size_t i = 0; i < a.occupancy.size(); ++i) {
        if (i) os << ", ";
        if (a.occupancy[i] == kEmpty) os << "E";
        else os << static_cast<int>(a.occupancy[i]);
    }
    os << "]\n";
    return os.str();
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_input("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw invalid_input("cannot write " + path);
    out << content;
}

// GraphViz export: nodes colored by type id, empties gray and dashed.
inline std::string export_dot(const Instance& inst, const Assignment* a = nullptr) {
    static const char* palette[] = {"#d0021b", "#4a90d9", "#417505", "#f5a623",
                                    "#9013fe", "#50e3c2", "#8b572a", "#000000"};
    constexpr int palette_size = 8;
    std::ostringstream os;
    os << "graph instance {\n  node [style=filled];\n";
    for (int v = 0; v < inst.graph.node_count(); ++v) {
        os << "  " << v << " [label=\"" << v << "\"";
        if (a) {
            if (a->occupancy[v] == kEmpty)
                os << ", fillcolor=\"#cccccc\", style=\"filled,dashed\"";
            else
                os << ", fillcolor=\"" << palette[a->occupancy[v] % palette_size]
                   << "\", fontcolor=white";
        } else {
            os << ", fillcolor=white";
        }
        os << "];\n";
    }
    for (auto [u, v] : inst.graph.edges()) os << "  " << u << " -- " << v << ";\n";
    os << "}\n";
    return os.str();
}

}  // namespace varjump
