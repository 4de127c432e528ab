#include <gtest/gtest.h>

#include "varjump/dynamics.hpp"
#include "varjump/generators.hpp"

using namespace varjump;

namespace {

Assignment assign(std::vector<int> occ) {
    Assignment a;
    for (int t : occ) a.occupancy.push_back(static_cast<std::int8_t>(t));
    return a;
}

Instance cylinder_instance(int m, std::vector<int> counts) {
    Instance inst;
    inst.graph = make_cylinder(m);
    inst.profile.counts = std::move(counts);
    return inst;
}

// Replays the cycle and checks that every jump strictly improves the jumper.
void expect_valid_cycle(const Instance& inst, const IrcCycle& cyc) {
    Assignment cur = cyc.start;
    cur.validate(inst);
    for (const Jump& j : cyc.jumps) {
        EXPECT_GT(utility_after_jump(inst, cur, j.from, j.to, j.type),
                  utility(inst, cur, j.from));
        cur = apply_jump(cur, j);
    }
    EXPECT_EQ(cur, cyc.start);
}

}  // namespace

TEST(Potential, FrozenValues) {
    Instance cyl = cylinder_instance(3, {2, 1, 1});
    const Assignment a = assign({0, 0, 1, 2, -1, -1});
    EXPECT_EQ(potential_value(cyl, a, PotentialKind::three_reg_two_empty()), 11);

    Instance path;
    path.graph = make_line(3);
    path.profile.counts = {1, 1};
    EXPECT_EQ(potential_value(path, assign({0, 1, -1}), PotentialKind::deg2()), 3);
    EXPECT_EQ(potential_value(path, assign({0, 1, -1}), PotentialKind::sw()), 2);
}

TEST(Potential, Applicability) {
    Instance k4;
    k4.graph = make_clique(4);
    k4.profile.counts = {1, 1};
    EXPECT_THROW(check_potential_applicable(k4, PotentialKind::deg2()), inapplicable);
    EXPECT_NO_THROW(check_potential_applicable(k4, PotentialKind::three_reg_two_empty()));

    Instance cyl = cylinder_instance(3, {2, 2, 1});  // one empty node
    EXPECT_THROW(check_potential_applicable(cyl, PotentialKind::three_reg_two_empty()),
                 inapplicable);
    EXPECT_NO_THROW(check_potential_applicable(cyl, PotentialKind::sw()));
}

TEST(Potential, AuditsPassOnSmallInstances) {
    Instance line;
    line.graph = make_line(5);
    line.profile.counts = {2, 1};
    EXPECT_TRUE(audit_potential(line, PotentialKind::sw()).pass);
    EXPECT_TRUE(audit_potential(line, PotentialKind::deg2()).pass);

    Instance cycle;
    cycle.graph = make_cycle(6);
    cycle.profile.counts = {2, 2, 1};
    AuditReport rep = audit_potential(cycle, PotentialKind::deg2());
    EXPECT_TRUE(rep.pass);
    EXPECT_GT(rep.checks, 0u);

    Instance cyl = cylinder_instance(3, {1, 1, 2});
    EXPECT_TRUE(audit_potential(cyl, PotentialKind::three_reg_two_empty()).pass);
    EXPECT_TRUE(audit_lemma_jump(cyl).pass);
}

TEST(Dynamics, ConvergesOnPath) {
    Instance path;
    path.graph = make_line(3);
    path.profile.counts = {1, 1};
    const Assignment start = assign({0, -1, 1});

    DynamicsOutcome out =
        run_dynamics(path, start, ResponsePolicy::first_improving(), 100);
    EXPECT_EQ(out.status, DynamicsOutcome::Status::Equilibrium);
    ASSERT_EQ(out.trace.size(), 1u);
    EXPECT_EQ(out.trace[0], (Jump{0, 1, 0}));
    EXPECT_TRUE(is_equilibrium(path, out.final));

    // with step_limit 1 the post-jump equilibrium check never runs
    DynamicsOutcome cut =
        run_dynamics(path, start, ResponsePolicy::first_improving(), 1);
    EXPECT_EQ(cut.status, DynamicsOutcome::Status::StepLimit);
    EXPECT_EQ(cut.trace.size(), 1u);

    EXPECT_THROW(run_dynamics(path, start, ResponsePolicy::first_improving(), 0),
                 invalid_parameter);
}

TEST(Dynamics, PoliciesDeterministic) {
    Instance cyl = cylinder_instance(4, {2, 2, 1});
    const Assignment start = first_assignment(cyl);

    DynamicsOutcome first =
        run_dynamics(cyl, start, ResponsePolicy::first_improving(), 10000);
    EXPECT_EQ(first.status, DynamicsOutcome::Status::Equilibrium);
    EXPECT_TRUE(is_equilibrium(cyl, first.final));

    DynamicsOutcome best =
        run_dynamics(cyl, start, ResponsePolicy::best_response(), 10000);
    EXPECT_EQ(best.status, DynamicsOutcome::Status::Equilibrium);

    DynamicsOutcome r1 =
        run_dynamics(cyl, start, ResponsePolicy::random_improving(7), 10000);
    DynamicsOutcome r2 =
        run_dynamics(cyl, start, ResponsePolicy::random_improving(7), 10000);
    EXPECT_EQ(r1.status, DynamicsOutcome::Status::Equilibrium);
    ASSERT_EQ(r1.trace.size(), r2.trace.size());
    for (std::size_t i = 0; i < r1.trace.size(); ++i) EXPECT_EQ(r1.trace[i], r2.trace[i]);
}

TEST(Irc, NoneWithOneEmpty) {
    Instance cycle;
    cycle.graph = make_cycle(5);
    cycle.profile.counts = {2, 2};
    EXPECT_FALSE(find_irc(cycle).has_value());

    Instance cyl = cylinder_instance(3, {2, 2, 1});
    EXPECT_FALSE(find_irc(cyl).has_value());
}

TEST(Irc, FoundOnSixColumnCylinder) {
    Instance inst = cylinder_instance(6, {3, 3, 3});
    auto cyc = find_irc(inst);
    ASSERT_TRUE(cyc.has_value());
    EXPECT_GE(cyc->jumps.size(), 2u);
    expect_valid_cycle(inst, *cyc);
}

TEST(Irc, BudgetRespected) {
    Instance inst = cylinder_instance(6, {3, 3, 3});
    EXPECT_THROW(find_irc(inst, 1000), budget_exceeded);
}
