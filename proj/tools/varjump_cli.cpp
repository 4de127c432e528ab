// varjump: variety-seeking jump games on graphs.
//
// One binary with subcommands sharing the instance/assignment file formats:
//   gen, check, dynamics, irc-search, construct, analyze, bounds,
//   experiment, export-dot.
//
// Exit codes: 0 ok, 2 invalid input, 3 state budget exceeded, 4 failed
// bound, 5 algorithm inapplicable, 6 internal construction error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "varjump/construct.hpp"
#include "varjump/dynamics.hpp"
#include "varjump/enumerate.hpp"
#include "varjump/errors.hpp"
#include "varjump/game.hpp"
#include "varjump/generators.hpp"
#include "varjump/io.hpp"
#include "varjump/oracle.hpp"

namespace {

using namespace varjump;

constexpr int kExitOk = 0;
constexpr int kExitInvalidInput = 2;
constexpr int kExitBudgetExceeded = 3;
constexpr int kExitFailedBound = 4;
constexpr int kExitInapplicable = 5;
constexpr int kExitConstructionError = 6;

struct FailedBound : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shared instance-source options: either --file or --family plus parameters.
struct InstanceOptions {
    std::string file;
    std::string family;
    int nodes = 0;
    int m = 0;
    int m1 = 0, m2 = 0;
    int x = 1;
    double edge_prob = 0.5;
    std::uint64_t seed = 0;
    std::vector<int> profile;

    void attach(CLI::App* cmd, bool need_profile = true) {
        cmd->add_option("--file", file, "instance file to load");
        cmd->add_option("--family", family,
                        "graph family: line|cycle|cylinder|torus|clique|clique-lines|"
                        "clique-cycle|ring-of-cliques|pos-gadget|random|random-tree");
        cmd->add_option("--nodes", nodes, "node count (line/cycle/clique/random/random-tree)");
        cmd->add_option("--m", m, "cylinder column count");
        cmd->add_option("--m1", m1, "torus row count");
        cmd->add_option("--m2", m2, "torus column count");
        cmd->add_option("--x", x, "gadget parameter x (pos-gadget)");
        cmd->add_option("--edge-prob", edge_prob, "edge probability (random)");
        cmd->add_option("--seed", seed, "rng seed (random/random-tree)");
        auto* p = cmd->add_option("--profile", profile, "type counts, e.g. 3,2,1");
        p->delimiter(',');
        (void)need_profile;
    }

    RoledInstance build() const {
        RoledInstance out;
        if (!file.empty()) {
            out = parse_instance(read_file(file));
            return out;
        }
        if (family.empty()) throw invalid_input("need --file or --family");
        if (family == "line") {
            out.instance.graph = make_line(nodes);
        } else if (family == "cycle") {
            out.instance.graph = make_cycle(nodes);
        } else if (family == "cylinder") {
            out.instance.graph = make_cylinder(m);
        } else if (family == "torus") {
            out.instance.graph = make_torus(m1, m2);
        } else if (family == "clique") {
            out.instance.graph = make_clique(nodes);
        } else if (family == "clique-lines") {
            if (profile.empty()) throw invalid_input("clique-lines needs --profile");
            RoledGraph rg = make_clique_lines(profile);
            out.instance.graph = rg.graph;
            out.roles = rg.roles;
        } else if (family == "clique-cycle") {
            if (profile.empty()) throw invalid_input("clique-cycle needs --profile");
            TypeProfile p{profile};
            RoledGraph rg = make_clique_cycle(p.n(), p.k());
            out.instance.graph = rg.graph;
            out.roles = rg.roles;
        } else if (family == "ring-of-cliques") {
            if (profile.empty()) throw invalid_input("ring-of-cliques needs --profile");
            TypeProfile p{profile};
            RoledGraph rg = make_regular_ring_of_cliques(p.n(), p.k());
            out.instance.graph = rg.graph;
            out.roles = rg.roles;
        } else if (family == "pos-gadget") {
            RoledGraph rg = make_pos_gadget(x);
            out.instance.graph = rg.graph;
            out.roles = rg.roles;
        } else if (family == "random") {
            out.instance.graph = make_random_connected(nodes, edge_prob, seed);
        } else if (family == "random-tree") {
            out.instance.graph = make_random_tree(nodes, seed);
        } else {
            throw invalid_input("unknown family: " + family);
        }
        if (!profile.empty()) {
            out.instance.profile.counts = profile;
        } else if (family == "pos-gadget") {
            out.instance.profile.counts = {x, 1, 1, 1};
        } else {
            throw invalid_input("need --profile");
        }
        out.instance.validate();
        return out;
    }
};

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) std::cout << text;
    else write_file(out_path, text);
}

std::string format_jump(const Jump& j) {
    return std::to_string(j.from) + "->" + std::to_string(j.to) + " (type " +
           std::to_string(j.type) + ")";
}

std::string format_analysis(const InstanceAnalysis& r) {
    std::ostringstream os;
    os << "objective: " << objective_name(r.objective) << "\n";
    os << "optimum: " << r.optimum_value << "\n";
    os << "optimum_witness: " << serialize_assignment(r.optimum_witness);
    os << "equilibria: " << r.equilibria_count << "\n";
    os << "equilibrium_exists: " << (r.equilibrium_exists ? "true" : "false") << "\n";
    if (r.equilibrium_exists) {
        os << "min_eq: " << r.min_eq_value << "\n";
        os << "max_eq: " << r.max_eq_value << "\n";
        os << "poa: " << (r.poa_infinite ? std::string("inf") : r.poa->str()) << "\n";
        if (r.pos) os << "pos: " << r.pos->str() << "\n";
    }
    return os.str();
}

std::string format_bound_report(const std::string& name, const BoundReport& rep) {
    std::ostringstream os;
    for (const auto& c : rep.checks)
        os << name << " " << c.name << ": " << (c.holds ? "ok" : "FAILED") << " (" << c.detail
           << ")\n";
    return os.str();
}

// ---- subcommand runners ---------------------------------------------------

int run_gen(const InstanceOptions& src, const std::string& out_path) {
    RoledInstance ri = src.build();
    emit(serialize_instance(ri.instance, ri.roles), out_path);
    return kExitOk;
}

int run_export_dot(const InstanceOptions& src, const std::string& assignment_file,
                   const std::string& out_path) {
    RoledInstance ri = src.build();
    std::optional<Assignment> a;
    if (!assignment_file.empty())
        a = parse_assignment(read_file(assignment_file), ri.instance);
    emit(export_dot(ri.instance, a ? &*a : nullptr), out_path);
    return kExitOk;
}

int run_check(const InstanceOptions& src, const std::string& assignment_file,
              const std::string& out_path) {
    RoledInstance ri = src.build();
    if (assignment_file.empty()) throw invalid_input("check needs --assignment");
    Assignment a = parse_assignment(read_file(assignment_file), ri.instance);
    const Metrics m = metrics(ri.instance, a);
    std::ostringstream os;
    os << "sw: " << m.sw << "\nce: " << m.ce << "\nmono: " << m.mono
       << "\nc_count: " << m.c_count << "\n";
    if (m.te) os << "te: " << *m.te << "\nb: " << *m.b << "\n";
    Jump w{};
    if (is_equilibrium(ri.instance, a, &w)) {
        os << "equilibrium: true\n";
    } else {
        os << "equilibrium: false\nwitness_jump: " << format_jump(w) << "\n";
    }
    emit(os.str(), out_path);
    return kExitOk;
}

int run_dynamics(const InstanceOptions& src, const std::string& assignment_file,
                 const std::string& policy_name, std::uint64_t steps, std::uint64_t policy_seed,
                 const std::string& out_path) {
    RoledInstance ri = src.build();
    Assignment init = assignment_file.empty()
                          ? first_assignment(ri.instance)
                          : parse_assignment(read_file(assignment_file), ri.instance);
    ResponsePolicy policy = ResponsePolicy::first_improving();
    if (policy_name == "best") policy = ResponsePolicy::best_response();
    else if (policy_name == "random") policy = ResponsePolicy::random_improving(policy_seed);
    else if (policy_name != "first") throw invalid_input("policy must be first|best|random");

    DynamicsOutcome out = run_dynamics(ri.instance, init, policy, steps);
    std::ostringstream os;
    switch (out.status) {
        case DynamicsOutcome::Status::Equilibrium: os << "status: equilibrium\n"; break;
        case DynamicsOutcome::Status::StateRevisited:
            os << "status: state-revisited\nrevisit_index: " << out.revisit_index << "\n";
            break;
        case DynamicsOutcome::Status::StepLimit: os << "status: step-limit\n"; break;
    }
    os << "steps: " << out.trace.size() << "\n";
    for (const Jump& j : out.trace) os << "jump: " << format_jump(j) << "\n";
    os << "final_sw: " << social_welfare(ri.instance, out.final) << "\n";
    os << "final_ce: " << colorful_edges(ri.instance, out.final) << "\n";
    os << serialize_assignment(out.final);
    emit(os.str(), out_path);
    return kExitOk;
}

int run_irc_search(const InstanceOptions& src, std::uint64_t budget, int shaped_length,
                   const std::string& out_path) {
    RoledInstance ri = src.build();
    std::optional<IrcCycle> cyc = shaped_length > 0
                                      ? find_irc_shaped(ri.instance, shaped_length, budget)
                                      : find_irc(ri.instance, budget);
    std::ostringstream os;
    os << "states: " << state_count(ri.instance) << "\n";
    if (!cyc) {
        os << "irc: none\n";
    } else {
        os << "irc: found\ncycle_length: " << cyc->jumps.size() << "\n";
        os << "start_" << serialize_assignment(cyc->start);
        for (const Jump& j : cyc->jumps) os << "jump: " << format_jump(j) << "\n";
    }
    emit(os.str(), out_path);
    return kExitOk;
}

int run_construct(const InstanceOptions& src, bool explain, const std::string& out_path) {
    RoledInstance ri = src.build();
    const Instance& inst = ri.instance;
    const int V = inst.graph.node_count();

    std::optional<ConstructResult> res;
    if (inst.graph.edge_count() == V - 1) {
        res = construct_tree_equilibrium(inst);
    } else if (V % 2 == 0 && V >= 6 && inst.graph == make_cylinder(V / 2)) {
        res = construct_cylinder_equilibrium(inst);
    } else {
        // try torus factorizations m1 x m2 with m1 >= m2 >= 3
        for (int m2 = 3; m2 * m2 <= V && !res; ++m2) {
            if (V % m2 != 0) continue;
            const int m1 = V / m2;
            bool match = false;
            try {
                match = inst.graph == make_torus(m1, m2);
            } catch (const invalid_parameter&) {
            }
            if (match) res = construct_torus_equilibrium(inst, m1, m2);
        }
        if (!res) throw inapplicable("no constructor applies: graph is not a tree, "
                                     "cylinder, or supported torus");
    }

    std::ostringstream os;
    if (explain) {
        os << "case: " << res->case_label << "\n";
        if (res->certificate) {
            os << "certificate: "
               << (res->certificate->property == StabilityCertificate::Property::P1 ? "P1"
                                                                                    : "P0");
            if (res->certificate->property == StabilityCertificate::Property::P0)
                os << " (designated type " << res->certificate->designated_type << ")";
            os << "\n";
        } else {
            os << "certificate: none (verified by the equilibrium predicate)\n";
        }
        os << "sw: " << social_welfare(inst, res->assignment) << "\n";
        os << "ce: " << colorful_edges(inst, res->assignment) << "\n";
    }
    os << serialize_assignment(res->assignment);
    emit(os.str(), out_path);
    return kExitOk;
}

int run_analyze(const InstanceOptions& src, const std::string& objective, std::uint64_t budget,
                const std::string& out_path) {
    RoledInstance ri = src.build();
    const InstanceAnalysis r = analyze(ri.instance, parse_objective(objective), budget);
    const std::string text = format_analysis(r);
    std::cout << text;
    if (!out_path.empty()) write_file(out_path, text);
    return kExitOk;
}

int run_bounds(const InstanceOptions& src, const std::string& sweep, std::uint64_t budget,
               const std::string& out_path) {
    std::ostringstream os;
    bool all_pass = true;
    auto run_one = [&](const std::string& name, const Instance& inst) {
        const BoundReport rep = check_bounds(inst, budget);
        all_pass = all_pass && rep.pass;
        os << format_bound_report(name, rep);
    };

    if (sweep.empty()) {
        RoledInstance ri = src.build();
        run_one("instance", ri.instance);
    } else if (sweep == "small") {
        // small curated sweep across the graph families with closed-form caps
        for (int n : {4, 8}) {
            Instance inst{make_cycle(n + 1), TypeProfile{{n / 2, n / 2}}};
            run_one("cycle-k2-n" + std::to_string(n), inst);
        }
        for (int n : {6, 9}) {
            Instance inst{make_cycle(n + 1), TypeProfile{{n / 3, n / 3, n / 3}}};
            run_one("cycle-k3-n" + std::to_string(n), inst);
        }
        {
            Instance inst{make_line(6), TypeProfile{{2, 2}}};
            run_one("line-k2-n4", inst);
        }
        for (const std::vector<int>& prof :
             {std::vector<int>{2, 1}, std::vector<int>{2, 2}, std::vector<int>{3, 2, 1}}) {
            RoledGraph rg = make_clique_lines(prof);
            Instance inst{rg.graph, TypeProfile{prof}};
            std::string name = "clique-lines";
            for (int c : prof) name += "-" + std::to_string(c);
            run_one(name, inst);
        }
        {
            RoledGraph rg = make_clique_cycle(4, 2);
            run_one("clique-cycle-n4-k2", Instance{rg.graph, TypeProfile{{2, 2}}});
        }
        {
            RoledGraph rg = make_regular_ring_of_cliques(6, 3);
            run_one("ring-of-cliques-n6-k3", Instance{rg.graph, TypeProfile{{2, 2, 2}}});
        }
        for (int x : {2, 3}) {
            RoledGraph rg = make_pos_gadget(x);
            run_one("pos-gadget-x" + std::to_string(x),
                    Instance{rg.graph, TypeProfile{{x, 1, 1, 1}}});
        }
    } else {
        throw invalid_input("unknown sweep: " + sweep);
    }

    os << "result: " << (all_pass ? "all bounds hold" : "BOUND FAILURE") << "\n";
    emit(os.str(), out_path);
    if (!all_pass) throw FailedBound("at least one bound check failed");
    return kExitOk;
}

ExperimentConfig parse_experiment_config(const std::string& text) {
    detail::Lexer lx(text);
    ExperimentConfig cfg;
    while (lx.peek().kind != detail::Token::End) {
        detail::Token key = lx.next();
        if (key.kind != detail::Token::Ident) throw invalid_input("expected a config key");
        lx.expect_punct(':');
        if (key.text == "family") {
            detail::Token v = lx.next();
            if (v.kind != detail::Token::Ident) throw invalid_input("family must be a word");
            cfg.family = v.text;
        } else if (key.text == "edge_prob_pct") {
            cfg.edge_prob = static_cast<double>(detail::parse_number(lx)) / 100.0;
        } else if (key.text == "node_counts") {
            cfg.node_counts = detail::parse_int_list(lx);
        } else if (key.text == "profiles") {
            lx.expect_punct('[');
            while (!(lx.peek().kind == detail::Token::Punct && lx.peek().text == "]")) {
                cfg.profiles.push_back(detail::parse_int_list(lx));
                if (lx.peek().kind == detail::Token::Punct && lx.peek().text == ",") lx.next();
            }
            lx.expect_punct(']');
        } else if (key.text == "seeds") {
            for (int s : detail::parse_int_list(lx))
                cfg.seeds.push_back(static_cast<std::uint64_t>(s));
        } else if (key.text == "budget") {
            cfg.budget = static_cast<std::uint64_t>(detail::parse_number(lx));
        } else {
            throw invalid_input("unknown config key '" + key.text + "'");
        }
    }
    if (cfg.node_counts.empty() || cfg.profiles.empty() || cfg.seeds.empty())
        throw invalid_input("config needs node_counts, profiles, and seeds");
    return cfg;
}

std::string format_experiment_report(const ExperimentReport& rep) {
    std::ostringstream os;
    os << "num_nodes\tn\tk\tempty_count\tseed\tirc_found\tstates\n";
    for (const auto& r : rep.rows)
        os << r.num_nodes << "\t" << r.n << "\t" << r.k << "\t" << r.empty_count << "\t"
           << r.seed << "\t" << (r.irc_found ? 1 : 0) << "\t" << r.states_explored << "\n";
    os << "\nby_empty_count:\n";
    for (const auto& [empties, tally] : rep.by_empty_count)
        os << "empty=" << empties << " samples=" << tally.samples
           << " irc=" << tally.irc_count << "\n";
    return os.str();
}

int run_experiment(const std::string& config_file, const std::string& out_path) {
    if (config_file.empty()) throw invalid_input("experiment needs --config");
    const ExperimentConfig cfg = parse_experiment_config(read_file(config_file));
    const ExperimentReport rep = random_irc_experiment(cfg);
    emit(format_experiment_report(rep), out_path);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"variety-seeking jump games: generators, dynamics, constructive "
                 "equilibria, and a brute-force analysis oracle"};
    app.require_subcommand(1);
    int jobs = 1;
    app.add_option("--jobs", jobs, "worker count (results are identical regardless)");

    InstanceOptions src;
    std::string out_path, assignment_file, objective = "sw", policy = "first", sweep,
                config_file;
    std::uint64_t budget = kDefaultStateBudget, steps = 100000, policy_seed = 0;
    int shaped_length = 0;
    bool explain = false;

    auto* gen = app.add_subcommand("gen", "generate an instance file");
    src.attach(gen);
    gen->add_option("-o,--output", out_path, "output path (default stdout)");

    auto* check = app.add_subcommand("check", "metrics and equilibrium verdict");
    src.attach(check);
    check->add_option("--assignment", assignment_file, "assignment file");
    check->add_option("-o,--output", out_path, "output path");

    auto* dyn = app.add_subcommand("dynamics", "run improving-response dynamics");
    src.attach(dyn);
    dyn->add_option("--assignment", assignment_file, "initial assignment (default: packed)");
    dyn->add_option("--policy", policy, "first|best|random");
    dyn->add_option("--steps", steps, "step limit");
    dyn->add_option("--policy-seed", policy_seed, "seed for the random policy");
    dyn->add_option("-o,--output", out_path, "output path");

    auto* irc = app.add_subcommand("irc-search", "exhaustive improving-response cycle search");
    src.attach(irc);
    irc->add_option("--budget", budget, "state budget");
    irc->add_option("--length", shaped_length,
                    "search only for cycles of this length with three types jumping twice");
    irc->add_option("-o,--output", out_path, "output path");

    auto* con = app.add_subcommand("construct", "construct an equilibrium "
                                                "(trees, cylinders, tori)");
    src.attach(con);
    con->add_flag("--explain", explain, "print the case label and certificate");
    con->add_option("-o,--output", out_path, "output path");

    auto* ana = app.add_subcommand("analyze", "brute-force optimum, equilibria, PoA/PoS");
    src.attach(ana);
    ana->add_option("--objective", objective, "sw|ce");
    ana->add_option("--budget", budget, "state budget");
    ana->add_option("-o,--output", out_path, "also write the report here");

    auto* bnd = app.add_subcommand("bounds", "check the closed-form guarantees by brute force");
    src.attach(bnd);
    bnd->add_option("--sweep", sweep, "named sweep (small)");
    bnd->add_option("--budget", budget, "state budget");
    bnd->add_option("-o,--output", out_path, "output path");

    auto* exp = app.add_subcommand("experiment", "random-graph IRC experiment");
    exp->add_option("--config", config_file, "experiment config file")->required();
    exp->add_option("-o,--output", out_path, "output path");

    auto* dot = app.add_subcommand("export-dot", "GraphViz export");
    src.attach(dot);
    dot->add_option("--assignment", assignment_file, "color nodes by this assignment");
    dot->add_option("-o,--output", out_path, "output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalidInput;
    }

    try {
        if (gen->parsed()) return run_gen(src, out_path);
        if (check->parsed()) return run_check(src, assignment_file, out_path);
        if (dyn->parsed())
            return run_dynamics(src, assignment_file, policy, steps, policy_seed, out_path);
        if (irc->parsed()) return run_irc_search(src, budget, shaped_length, out_path);
        if (con->parsed()) return run_construct(src, explain, out_path);
        if (ana->parsed()) return run_analyze(src, objective, budget, out_path);
        if (bnd->parsed()) return run_bounds(src, sweep, budget, out_path);
        if (exp->parsed()) return run_experiment(config_file, out_path);
        if (dot->parsed()) return run_export_dot(src, assignment_file, out_path);
    } catch (const budget_exceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBudgetExceeded;
    } catch (const FailedBound& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailedBound;
    } catch (const inapplicable& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInapplicable;
    } catch (const construction_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConstructionError;
    } catch (const invalid_parameter& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const invalid_input& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    }
    return kExitOk;
}
