#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "varjump/enumerate.hpp"
#include "varjump/errors.hpp"
#include "varjump/game.hpp"
#include "varjump/rng.hpp"

namespace varjump {

struct ResponsePolicy {
    enum class Tag { FirstImproving, BestResponse, RandomImproving };
    Tag tag = Tag::FirstImproving;
    std::uint64_t seed = 0;  // RandomImproving only

    static ResponsePolicy first_improving() { return {Tag::FirstImproving, 0}; }
    static ResponsePolicy best_response() { return {Tag::BestResponse, 0}; }
    static ResponsePolicy random_improving(std::uint64_t seed) {
        return {Tag::RandomImproving, seed};
    }
};

struct DynamicsOutcome {
    enum class Status { Equilibrium, StateRevisited, StepLimit };
    Status status = Status::Equilibrium;
    std::vector<Jump> trace;
    // Index into the state sequence (state i = before trace[i]) of the first
    // occurrence of the repeated state; meaningful for StateRevisited.
    int revisit_index = -1;
    Assignment final;
};

inline DynamicsOutcome run_dynamics(const Instance& inst, const Assignment& initial,
                                    const ResponsePolicy& policy, std::uint64_t step_limit,
                                    bool track_visited = true) {
    if (step_limit == 0) throw invalid_parameter("step_limit must be positive");
    initial.validate(inst);

    Rng rng = make_rng(policy.seed);
    const bool codes_fit = state_code_fits(inst);
    std::unordered_map<std::uint64_t, int> seen;
    DynamicsOutcome out;
    Assignment cur = initial;
    if (track_visited && codes_fit) seen.emplace(pack_state(cur, inst.profile.k()), 0);

    for (std::uint64_t step = 0; step < step_limit; ++step) {
        auto moves = improving_jumps(inst, cur);
        if (moves.empty()) {
            out.status = DynamicsOutcome::Status::Equilibrium;
            out.final = cur;
            return out;
        }
        const ImprovingJump* pick = &moves.front();
        switch (policy.tag) {
            case ResponsePolicy::Tag::FirstImproving:
                break;
            case ResponsePolicy::Tag::BestResponse: {
                int best = -1;
                for (const auto& m : moves)
                    if (m.new_utility > best) { best = m.new_utility; pick = &m; }
                break;
            }
            case ResponsePolicy::Tag::RandomImproving:
                pick = &moves[rng_below(rng, moves.size())];
                break;
        }
        cur = apply_jump(cur, pick->jump);
        out.trace.push_back(pick->jump);
        if (track_visited && codes_fit) {
            auto [it, inserted] =
                seen.emplace(pack_state(cur, inst.profile.k()), static_cast<int>(out.trace.size()));
            if (!inserted) {
                out.status = DynamicsOutcome::Status::StateRevisited;
                out.revisit_index = it->second;
                out.final = cur;
                return out;
            }
        }
    }
    out.status = DynamicsOutcome::Status::StepLimit;
    out.final = cur;
    return out;
}

// A closed improving walk: applying jumps in order, starting from `start`,
// returns to `start`.
struct IrcCycle {
    Assignment start;
    std::vector<Jump> jumps;
};

namespace detail {

inline Assignment unpack_state(std::uint64_t code, int nodes, int k) {
    Assignment a;
    a.occupancy.assign(nodes, kEmpty);
    const std::uint64_t radix = static_cast<std::uint64_t>(k) + 1;
    for (int v = nodes - 1; v >= 0; --v) {
        a.occupancy[v] = static_cast<std::int8_t>(static_cast<int>(code % radix) - 1);
        code /= radix;
    }
    return a;
}

struct StateGraph {
    std::vector<std::uint64_t> codes;
    std::unordered_map<std::uint64_t, int> index;
    int nodes;
    int k;

    Assignment state(int i) const { return unpack_state(codes[i], nodes, k); }
};

inline StateGraph build_state_index(const Instance& inst, std::uint64_t budget) {
    if (!state_code_fits(inst))
        throw invalid_parameter("state space too wide to pack into 64-bit codes");
    StateGraph sg;
    sg.nodes = inst.graph.node_count();
    sg.k = inst.profile.k();
    for_each_assignment(inst, [&](const Assignment& a) {
        const std::uint64_t code = pack_state(a, sg.k);
        sg.index.emplace(code, static_cast<int>(sg.codes.size()));
        sg.codes.push_back(code);
        return true;
    }, budget);
    return sg;
}

}  // namespace detail

// Exhaustive cycle search over the improving-response state graph. Returns a
// directed cycle if one exists, else nullopt (which proves the instance has
// no improving-response cycle at all).
inline std::optional<IrcCycle> find_irc(const Instance& inst,
                                        std::uint64_t budget = kDefaultStateBudget) {
    inst.validate();
    detail::StateGraph sg = detail::build_state_index(inst, budget);
    const int N = static_cast<int>(sg.codes.size());
    std::vector<std::uint8_t> color(N, 0);  // 0 white, 1 gray, 2 black

    struct Frame {
        int state;
        std::vector<ImprovingJump> moves;
        std::size_t next = 0;
    };

    for (int root = 0; root < N; ++root) {
        if (color[root] != 0) continue;
        std::vector<Frame> stack;
        std::vector<Jump> path;  // jumps along the gray chain
        color[root] = 1;
        stack.push_back({root, improving_jumps(inst, sg.state(root))});
        while (!stack.empty()) {
            Frame& f = stack.back();
            if (f.next >= f.moves.size()) {
                color[f.state] = 2;
                stack.pop_back();
                if (!path.empty()) path.pop_back();
                continue;
            }
            const Jump j = f.moves[f.next++].jump;
            Assignment succ = apply_jump(sg.state(f.state), j);
            const int si = sg.index.at(pack_state(succ, sg.k));
            if (color[si] == 1) {
                // found a cycle: the gray chain from si back to f.state, plus j
                IrcCycle cyc;
                cyc.start = sg.state(si);
                std::size_t at = 0;
                while (at < stack.size() && stack[at].state != si) ++at;
                for (std::size_t d = at; d < path.size(); ++d) cyc.jumps.push_back(path[d]);
                cyc.jumps.push_back(j);
                return cyc;
            }
            if (color[si] == 0) {
                color[si] = 1;
                path.push_back(j);
                stack.push_back({si, improving_jumps(inst, succ)});
            }
        }
    }
    return std::nullopt;
}

// Searches for a cycle of exactly `length` jumps in which exactly three
// distinct types appear, each jumping twice. Used to rediscover the known
// 6-jump cycle on 3-regular instances with three empty nodes. Any directed
// cycle lies inside a strongly connected component, so the bounded DFS is
// restricted to nontrivial SCCs of the state graph.
inline std::optional<IrcCycle> find_irc_shaped(const Instance& inst, int length = 6,
                                               std::uint64_t budget = kDefaultStateBudget) {
    inst.validate();
    detail::StateGraph sg = detail::build_state_index(inst, budget);
    const int N = static_cast<int>(sg.codes.size());

    std::vector<std::vector<int>> succ(N);
    std::vector<std::vector<Jump>> succ_jump(N);
    for (int i = 0; i < N; ++i) {
        Assignment a = sg.state(i);
        for (const auto& m : improving_jumps(inst, a)) {
            succ[i].push_back(sg.index.at(pack_state(apply_jump(a, m.jump), sg.k)));
            succ_jump[i].push_back(m.jump);
        }
    }

    // iterative Tarjan
    std::vector<int> comp(N, -1), low(N), num(N, -1), scc_size;
    {
        std::vector<int> stk, call_state, call_iter;
        std::vector<char> on_stack(N, 0);
        int counter = 0;
        for (int root = 0; root < N; ++root) {
            if (num[root] != -1) continue;
            call_state.assign(1, root);
            call_iter.assign(1, 0);
            while (!call_state.empty()) {
                const int v = call_state.back();
                int& it = call_iter.back();
                if (it == 0) {
                    num[v] = low[v] = counter++;
                    stk.push_back(v);
                    on_stack[v] = 1;
                }
                if (it < static_cast<int>(succ[v].size())) {
                    const int w = succ[v][it++];
                    if (num[w] == -1) {
                        call_state.push_back(w);
                        call_iter.push_back(0);
                    } else if (on_stack[w]) {
                        low[v] = std::min(low[v], num[w]);
                    }
                } else {
                    if (low[v] == num[v]) {
                        const int id = static_cast<int>(scc_size.size());
                        int size = 0, w;
                        do {
                            w = stk.back();
                            stk.pop_back();
                            on_stack[w] = 0;
                            comp[w] = id;
                            ++size;
                        } while (w != v);
                        scc_size.push_back(size);
                    }
                    call_state.pop_back();
                    call_iter.pop_back();
                    if (!call_state.empty()) {
                        const int parent = call_state.back();
                        low[parent] = std::min(low[parent], low[v]);
                    }
                }
            }
        }
    }

    auto shape_ok = [&](const std::vector<Jump>& jumps) {
        std::vector<int> per_type(sg.k, 0);
        for (const Jump& j : jumps) ++per_type[j.type];
        int types_used = 0;
        for (int c : per_type) {
            if (c != 0 && c != 2) return false;
            if (c == 2) ++types_used;
        }
        return types_used == 3;
    };

    std::vector<Jump> path;
    std::function<bool(int, int, int)> dfs = [&](int origin, int state, int depth) -> bool {
        if (depth == length)
            return state == origin && shape_ok(path);
        for (std::size_t e = 0; e < succ[state].size(); ++e) {
            const int si = succ[state][e];
            if (comp[si] != comp[origin]) continue;
            path.push_back(succ_jump[state][e]);
            if (dfs(origin, si, depth + 1)) return true;
            path.pop_back();
        }
        return false;
    };

    for (int root = 0; root < N; ++root) {
        if (scc_size[comp[root]] < 2) continue;
        path.clear();
        if (dfs(root, root, 0)) {
            IrcCycle cyc;
            cyc.start = sg.state(root);
            cyc.jumps = path;
            return cyc;
        }
    }
    return std::nullopt;
}

struct PotentialKind {
    enum class Tag { SwPotential, Deg2Potential, ThreeRegTwoEmptyPotential };
    Tag tag;

    bool increasing() const { return tag != Tag::ThreeRegTwoEmptyPotential; }

    static PotentialKind sw() { return {Tag::SwPotential}; }
    static PotentialKind deg2() { return {Tag::Deg2Potential}; }
    static PotentialKind three_reg_two_empty() { return {Tag::ThreeRegTwoEmptyPotential}; }
};

inline void check_potential_applicable(const Instance& inst, PotentialKind kind) {
    switch (kind.tag) {
        case PotentialKind::Tag::SwPotential:
            break;
        case PotentialKind::Tag::Deg2Potential:
            if (inst.graph.max_degree() > 2)
                throw inapplicable("Deg2Potential needs max degree <= 2");
            break;
        case PotentialKind::Tag::ThreeRegTwoEmptyPotential:
            if (!inst.graph.is_regular(3) || inst.empty_count() != 2)
                throw inapplicable("ThreeRegTwoEmptyPotential needs a 3-regular graph with 2 empties");
            break;
    }
}

inline int potential_value(const Instance& inst, const Assignment& a, PotentialKind kind) {
    check_potential_applicable(inst, kind);
    const Metrics m = metrics(inst, a);
    switch (kind.tag) {
        case PotentialKind::Tag::SwPotential:
            return m.sw;
        case PotentialKind::Tag::Deg2Potential:
            return 2 * m.ce + m.c_count;
        case PotentialKind::Tag::ThreeRegTwoEmptyPotential:
            return 2 * (*m.te + m.mono) + *m.b;
    }
    return 0;  // unreachable
}

struct AuditCounterexample {
    Assignment assignment;
    Jump jump;
    long long value_before;
    long long value_after;
};

struct AuditReport {
    bool pass = true;
    std::uint64_t checks = 0;
    std::string detail;
    std::optional<AuditCounterexample> counterexample;
};

// For every assignment and every improving jump from it, checks that the
// potential moves strictly in its direction with |delta| >= 1.
inline AuditReport audit_potential(const Instance& inst, PotentialKind kind,
                                   std::uint64_t budget = kDefaultStateBudget) {
    inst.validate();
    check_potential_applicable(inst, kind);
    AuditReport report;
    for_each_assignment(inst, [&](const Assignment& a) {
        const int before = potential_value(inst, a, kind);
        for (const auto& m : improving_jumps(inst, a)) {
            const int after = potential_value(inst, apply_jump(a, m.jump), kind);
            const int delta = after - before;
            const bool ok = kind.increasing() ? delta >= 1 : delta <= -1;
            ++report.checks;
            if (!ok) {
                report.pass = false;
                report.detail = "potential not strictly monotone on an improving jump";
                report.counterexample = {a, m.jump, before, after};
                return false;
            }
        }
        return true;
    }, budget);
    return report;
}

// For every assignment and improving jump s -> d, checks the type-count
// inequality tau_d(v) >= tau_s(v') and its equality consequences: utility
// gain exactly 1, monochromatic edge count strictly decreasing, and no
// monochromatic edge incident to d in the new state.
inline AuditReport audit_lemma_jump(const Instance& inst,
                                    std::uint64_t budget = kDefaultStateBudget) {
    inst.validate();
    AuditReport report;
    for_each_assignment(inst, [&](const Assignment& a) {
        std::optional<int> mono_before;
        for (const auto& m : improving_jumps(inst, a)) {
            const Assignment b = apply_jump(a, m.jump);
            const int tau_d_before = type_count(inst, a, m.jump.to);
            const int tau_s_after = type_count(inst, b, m.jump.from);
            ++report.checks;
            auto fail = [&](const std::string& why, int x, int y) {
                report.pass = false;
                report.detail = why;
                report.counterexample = {a, m.jump, x, y};
            };
            if (tau_d_before < tau_s_after) {
                fail("tau_d(v) < tau_s(v')", tau_d_before, tau_s_after);
                return false;
            }
            if (tau_d_before == tau_s_after) {
                if (m.new_utility - m.old_utility != 1) {
                    fail("equality case: utility gain != 1", m.old_utility, m.new_utility);
                    return false;
                }
                if (!mono_before) mono_before = metrics(inst, a).mono;
                const int mono_after = metrics(inst, b).mono;
                if (mono_after >= *mono_before) {
                    fail("equality case: monochromatic edges did not decrease",
                         *mono_before, mono_after);
                    return false;
                }
                for (int w : inst.graph.neighbors(m.jump.to))
                    if (b.occupied(w) && b.occupancy[w] == m.jump.type) {
                        fail("equality case: new monochromatic edge at destination",
                             m.jump.to, w);
                        return false;
                    }
            }
        }
        return true;
    }, budget);
    return report;
}

}  // namespace varjump
