#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "varjump/dynamics.hpp"
#include "varjump/enumerate.hpp"
#include "varjump/errors.hpp"
#include "varjump/game.hpp"
#include "varjump/generators.hpp"
#include "varjump/rational.hpp"

namespace varjump {

enum class Objective { SW, CE };

inline const char* objective_name(Objective o) {
    return o == Objective::SW ? "sw" : "ce";
}

inline Objective parse_objective(const std::string& s) {
    if (s == "sw") return Objective::SW;
    if (s == "ce") return Objective::CE;
    throw invalid_parameter("objective must be sw or ce");
}

inline int objective_value(const Instance& inst, const Assignment& a, Objective o) {
    return o == Objective::SW ? social_welfare(inst, a) : colorful_edges(inst, a);
}

// Exact maximum over all assignments; witness = first maximizer in
// enumeration order.
inline std::pair<int, Assignment> brute_force_optimum(const Instance& inst, Objective obj,
                                                      std::uint64_t budget = kDefaultStateBudget) {
    int best = -1;
    Assignment witness;
    for_each_assignment(inst, [&](const Assignment& a) {
        const int v = objective_value(inst, a, obj);
        if (v > best) { best = v; witness = a; }
        return true;
    }, budget);
    return {best, witness};
}

inline std::vector<Assignment> enumerate_equilibria(const Instance& inst,
                                                    std::uint64_t budget = kDefaultStateBudget) {
    std::vector<Assignment> out;
    for_each_assignment(inst, [&](const Assignment& a) {
        if (is_equilibrium(inst, a)) out.push_back(a);
        return true;
    }, budget);
    return out;
}

struct InstanceAnalysis {
    Objective objective = Objective::SW;
    int optimum_value = 0;
    Assignment optimum_witness;
    std::uint64_t equilibria_count = 0;
    int min_eq_value = 0;  // worst equilibrium
    int max_eq_value = 0;  // best equilibrium
    bool equilibrium_exists = false;
    bool poa_infinite = false;  // min_eq_value == 0
    std::optional<Rational> poa;  // optimum / min_eq_value
    std::optional<Rational> pos;  // optimum / max_eq_value
};

// One pass over all assignments: optimum plus equilibrium statistics.
inline InstanceAnalysis analyze(const Instance& inst, Objective obj,
                                std::uint64_t budget = kDefaultStateBudget) {
    InstanceAnalysis r;
    r.objective = obj;
    r.optimum_value = -1;
    for_each_assignment(inst, [&](const Assignment& a) {
        const int v = objective_value(inst, a, obj);
        if (v > r.optimum_value) { r.optimum_value = v; r.optimum_witness = a; }
        if (is_equilibrium(inst, a)) {
            if (!r.equilibrium_exists) {
                r.equilibrium_exists = true;
                r.min_eq_value = r.max_eq_value = v;
            } else {
                r.min_eq_value = std::min(r.min_eq_value, v);
                r.max_eq_value = std::max(r.max_eq_value, v);
            }
            ++r.equilibria_count;
        }
        return true;
    }, budget);
    if (r.equilibrium_exists) {
        if (r.min_eq_value == 0) r.poa_infinite = true;
        else r.poa = Rational(r.optimum_value, r.min_eq_value);
        if (r.max_eq_value > 0) r.pos = Rational(r.optimum_value, r.max_eq_value);
    }
    return r;
}

struct BoundCheck {
    std::string name;
    bool holds = false;
    std::string detail;
};

struct BoundReport {
    bool pass = true;
    std::vector<BoundCheck> checks;

    void add(const std::string& name, bool holds, const std::string& detail) {
        checks.push_back({name, holds, detail});
        pass = pass && holds;
    }
};

// Checks the published per-instance guarantees against brute-force analyses
// of both objectives:
//   - every equilibrium has SW >= n - max_T n_T + 1,
//   - every equilibrium has CE >= ceil((n - max_T n_T) / 2),
//   - PoA_SW <= n(k-1) / (n - max_T n_T + 1),
//   - symmetric types on a graph of max degree <= 2:
//       PoA_SW <= 4/3 (k=2) or 2k/(k-1) (k>=3),
//       PoA_CE <= 2 (k=2) or 2k/(k-1) (k>=3),
//   - symmetric types on a delta-regular graph: PoA_CE <= 2*delta.
inline BoundReport check_bounds(const Instance& inst, const InstanceAnalysis& sw,
                                const InstanceAnalysis& ce) {
    BoundReport rep;
    const int n = inst.profile.n();
    const int k = inst.profile.k();
    const int max_t = inst.profile.max_count();
    if (!sw.equilibrium_exists) {
        rep.add("equilibrium-exists", true, "no equilibrium; value bounds vacuous");
        return rep;
    }

    const int sw_floor = n - max_t + 1;
    rep.add("eq-sw-floor", sw.min_eq_value >= sw_floor,
            "min eq SW " + std::to_string(sw.min_eq_value) + " vs floor " +
                std::to_string(sw_floor));
    const int ce_floor = (n - max_t + 1) / 2;  // ceil((n - max_t)/2)
    rep.add("eq-ce-floor", ce.min_eq_value >= ce_floor,
            "min eq CE " + std::to_string(ce.min_eq_value) + " vs floor " +
                std::to_string(ce_floor));

    const Rational poa_sw_cap(static_cast<long long>(n) * (k - 1), sw_floor);
    const bool poa_sw_ok = !sw.poa_infinite && sw.poa && *sw.poa <= poa_sw_cap;
    rep.add("poa-sw-cap", poa_sw_ok,
            "PoA_SW " + (sw.poa ? sw.poa->str() : std::string("inf")) + " vs cap " +
                poa_sw_cap.str());

    if (inst.profile.symmetric() && inst.graph.max_degree() <= 2) {
        const Rational cap_sw = (k == 2) ? Rational(4, 3) : Rational(2 * k, k - 1);
        const Rational cap_ce = (k == 2) ? Rational(2) : Rational(2 * k, k - 1);
        rep.add("deg2-poa-sw", !sw.poa_infinite && sw.poa && *sw.poa <= cap_sw,
                "PoA_SW " + (sw.poa ? sw.poa->str() : std::string("inf")) + " vs cap " +
                    cap_sw.str());
        rep.add("deg2-poa-ce", !ce.poa_infinite && ce.poa && *ce.poa <= cap_ce,
                "PoA_CE " + (ce.poa ? ce.poa->str() : std::string("inf")) + " vs cap " +
                    cap_ce.str());
    }
    if (inst.profile.symmetric() && inst.graph.max_degree() > 0) {
        const int delta = inst.graph.max_degree();
        if (inst.graph.is_regular(delta)) {
            rep.add("regular-poa-ce",
                    !ce.poa_infinite && ce.poa && *ce.poa <= Rational(2 * delta),
                    "PoA_CE " + (ce.poa ? ce.poa->str() : std::string("inf")) + " vs cap " +
                        std::to_string(2 * delta));
        }
    }
    return rep;
}

inline BoundReport check_bounds(const Instance& inst,
                                std::uint64_t budget = kDefaultStateBudget) {
    return check_bounds(inst, analyze(inst, Objective::SW, budget),
                        analyze(inst, Objective::CE, budget));
}

enum class WitnessScenario {
    CliqueLines,        // type t on line_t, clique empty
    CliqueCycle,        // same-type pairs around the cycle, clique empty
    RingOfCliques,      // type l on hub v_l, attached clique nodes matching
    PosGadgetTriangle,  // reds on p-nodes, the other three types on r, s, t
    CycleSw,            // low-welfare cycle pattern (one extra node)
};

namespace detail {

inline void require_witness_equilibrium(const Instance& inst, const Assignment& a,
                                        const char* what) {
    a.validate(inst);
    if (!is_equilibrium(inst, a))
        throw construction_error(std::string("witness not an equilibrium: ") + what);
}

inline const std::vector<int>& role(const RoleMap& roles, const std::string& name) {
    auto it = roles.find(name);
    if (it == roles.end()) throw invalid_parameter("missing role: " + name);
    return it->second;
}

inline Assignment witness_clique_lines(const RoledGraph& rg, const Instance& inst) {
    std::vector<int> sorted = inst.profile.counts;
    std::sort(sorted.begin(), sorted.end(), std::greater<int>());
    if (sorted != inst.profile.counts)
        throw invalid_parameter("clique-lines witness expects a descending profile");
    Assignment a;
    a.occupancy.assign(inst.graph.node_count(), kEmpty);
    for (int t = 0; t < inst.profile.k(); ++t) {
        const auto& line = role(rg.roles, "line_" + std::to_string(t));
        if (static_cast<int>(line.size()) != inst.profile.counts[t])
            throw invalid_parameter("line size != type count");
        for (int v : line) a.occupancy[v] = static_cast<std::int8_t>(t);
    }
    require_witness_equilibrium(inst, a, "clique-lines");
    return a;
}

inline Assignment witness_clique_cycle(const RoledGraph& rg, const Instance& inst) {
    const int n = inst.profile.n();
    const int k = inst.profile.k();
    if (!inst.profile.symmetric() || (n / k) % 2 != 0)
        throw invalid_parameter("clique-cycle witness needs symmetric types, n/k even");
    const auto& cycle = role(rg.roles, "cycle");
    if (static_cast<int>(cycle.size()) != n) throw invalid_parameter("cycle size != n");
    Assignment a;
    a.occupancy.assign(inst.graph.node_count(), kEmpty);
    // same-type pairs around the cycle: each agent gets one like neighbor and
    // one unlike neighbor, so every utility is exactly 1
    for (int i = 0; i < n; ++i)
        a.occupancy[cycle[i]] = static_cast<std::int8_t>((i / 2) % k);
    require_witness_equilibrium(inst, a, "clique-cycle");
    return a;
}

inline Assignment witness_ring_of_cliques(const RoledGraph& rg, const Instance& inst) {
    const int k = inst.profile.k();
    if (k < 3 || !inst.profile.symmetric())
        throw inapplicable("ring-of-cliques witness needs symmetric types, k >= 3");
    const auto& hubs = role(rg.roles, "cycle");
    Assignment a;
    a.occupancy.assign(inst.graph.node_count(), kEmpty);
    for (int l = 0; l < k; ++l) {
        a.occupancy[hubs[l]] = static_cast<std::int8_t>(l);
        // hub v_l is attached to all but the last two nodes of clique l+1
        const auto& clique = role(rg.roles, "clique_" + std::to_string((l + 1) % k));
        for (int i = 0; i + 2 < static_cast<int>(clique.size()); ++i)
            a.occupancy[clique[i]] = static_cast<std::int8_t>((l + 1) % k);
    }
    require_witness_equilibrium(inst, a, "ring-of-cliques");
    return a;
}

inline Assignment witness_pos_gadget(const RoledGraph& rg, const Instance& inst) {
    if (inst.profile.k() != 4) throw invalid_parameter("gadget witness needs 4 types");
    const auto& ps = role(rg.roles, "p");
    if (inst.profile.counts[0] != static_cast<int>(ps.size()) ||
        inst.profile.counts[1] != 1 || inst.profile.counts[2] != 1 ||
        inst.profile.counts[3] != 1)
        throw invalid_parameter("gadget witness needs profile (x,1,1,1)");
    Assignment a;
    a.occupancy.assign(inst.graph.node_count(), kEmpty);
    for (int v : ps) a.occupancy[v] = 0;
    a.occupancy[role(rg.roles, "r")[0]] = 1;
    a.occupancy[role(rg.roles, "s")[0]] = 2;
    a.occupancy[role(rg.roles, "t")[0]] = 3;
    require_witness_equilibrium(inst, a, "gadget-triangle");
    return a;
}

// Minimum-welfare equilibrium on a cycle with one spare node. k=2: repeated
// (red, blue, blue) triplets, then the remaining reds. k>=3: one red, then
// the non-red types in pairs round-robin, then the remaining reds.
inline Assignment witness_cycle_sw(const Instance& inst) {
    const int V = inst.graph.node_count();
    const int n = inst.profile.n();
    const int k = inst.profile.k();
    if (V != n + 1 || !inst.profile.symmetric())
        throw invalid_parameter("cycle witness needs symmetric types, one empty node");
    std::vector<std::int8_t> seq;
    if (k == 2) {
        if (n % 4 != 0) throw invalid_parameter("k=2 cycle witness needs 4 | n");
        for (int i = 0; i < n / 4; ++i) { seq.push_back(0); seq.push_back(1); seq.push_back(1); }
        for (int i = 0; i < n / 4; ++i) seq.push_back(0);
    } else {
        std::vector<int> left(inst.profile.counts);
        seq.push_back(0);
        --left[0];
        int t = 1;
        int remaining = n - inst.profile.counts[0];
        while (remaining > 0) {
            const int take = std::min(2, left[t]);
            for (int i = 0; i < take; ++i) seq.push_back(static_cast<std::int8_t>(t));
            left[t] -= take;
            remaining -= take;
            t = 1 + (t % (k - 1));
        }
        for (int i = 0; i < left[0]; ++i) seq.push_back(0);
    }
    Assignment a;
    a.occupancy.assign(V, kEmpty);
    for (int i = 0; i < n; ++i) a.occupancy[i] = seq[i];
    require_witness_equilibrium(inst, a, "cycle-sw");
    return a;
}

}  // namespace detail

// The explicit low-value equilibria used in the lower-bound arguments,
// rebuilt from the generator's role map and post-verified.
inline Assignment build_witness_assignment(const RoledGraph& rg, const Instance& inst,
                                           WitnessScenario scenario) {
    inst.validate();
    switch (scenario) {
        case WitnessScenario::CliqueLines: return detail::witness_clique_lines(rg, inst);
        case WitnessScenario::CliqueCycle: return detail::witness_clique_cycle(rg, inst);
        case WitnessScenario::RingOfCliques: return detail::witness_ring_of_cliques(rg, inst);
        case WitnessScenario::PosGadgetTriangle: return detail::witness_pos_gadget(rg, inst);
        case WitnessScenario::CycleSw: return detail::witness_cycle_sw(inst);
    }
    throw invalid_parameter("unknown scenario");
}

struct ExperimentConfig {
    std::string family = "er";  // "er" or "cylinder"
    double edge_prob = 0.5;     // er only
    std::vector<int> node_counts;
    std::vector<std::vector<int>> profiles;
    std::vector<std::uint64_t> seeds;
    std::uint64_t budget = kDefaultStateBudget;
};

struct ExperimentRow {
    int num_nodes = 0;
    int n = 0;
    int k = 0;
    int empty_count = 0;
    std::uint64_t seed = 0;
    bool irc_found = false;
    std::uint64_t states_explored = 0;
};

struct ExperimentTally {
    int samples = 0;
    int irc_count = 0;
};

struct ExperimentReport {
    std::vector<ExperimentRow> rows;
    std::map<int, ExperimentTally> by_empty_count;
};

// For each (node count, profile, seed): sample a graph, exhaustively search
// the improving-response state graph for a directed cycle, record the
// outcome. Deterministic given the config.
inline ExperimentReport random_irc_experiment(const ExperimentConfig& cfg) {
    if (cfg.family != "er" && cfg.family != "cylinder")
        throw invalid_parameter("family must be er or cylinder");
    ExperimentReport rep;
    for (int num_nodes : cfg.node_counts) {
        for (const auto& counts : cfg.profiles) {
            Instance inst;
            inst.profile.counts = counts;
            const int n = inst.profile.n();
            if (n >= num_nodes) continue;
            for (std::uint64_t seed : cfg.seeds) {
                if (cfg.family == "er") {
                    inst.graph = make_random_connected(num_nodes, cfg.edge_prob, seed);
                } else {
                    if (num_nodes % 2 != 0 || num_nodes < 6)
                        throw invalid_parameter("cylinder family needs even node count >= 6");
                    inst.graph = make_cylinder(num_nodes / 2);
                }
                inst.validate();
                ExperimentRow row;
                row.num_nodes = num_nodes;
                row.n = n;
                row.k = inst.profile.k();
                row.empty_count = inst.empty_count();
                row.seed = seed;
                row.states_explored = state_count(inst);
                row.irc_found = find_irc(inst, cfg.budget).has_value();
                rep.rows.push_back(row);
                auto& tally = rep.by_empty_count[row.empty_count];
                ++tally.samples;
                tally.irc_count += row.irc_found ? 1 : 0;
            }
        }
    }
    return rep;
}

}  // namespace varjump
