#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <sstream>

#include "mmdp/auxmdp.hpp"
#include "mmdp/solver.hpp"

using namespace mmdp;

namespace {

std::map<AuxState, Rational> kernel_map(AuxState s, AuxAction a, int L) {
    std::map<AuxState, Rational> m;
    for (const auto& [t, p] : aux_kernel(s, a, L)) m[t] = p;
    return m;
}

}  // namespace

TEST_CASE("state space size and membership") {
    auto states = aux_states(6);
    CHECK(states.size() == 16);  // coordinates {2,3,4,6} per axis
    for (const AuxState& s : states) {
        CHECK(s.i != 5);
        CHECK(s.j != 5);
    }
    CHECK(aux_states(10).size() == 64);
}

TEST_CASE("action sets follow the boundary rules") {
    const int L = 10;
    CHECK(aux_action_set({L, L}, L) == std::vector<AuxAction>{AuxAction::Stay});
    CHECK(aux_action_set({L, 4}, L) == std::vector<AuxAction>{AuxAction::B1});
    CHECK(aux_action_set({4, L}, L) == std::vector<AuxAction>{AuxAction::B2});
    CHECK(aux_action_set({2, 2}, L) ==
          std::vector<AuxAction>{AuxAction::B1C, AuxAction::B2C});
    CHECK(aux_action_set({2, 5}, L) ==
          std::vector<AuxAction>{AuxAction::B2, AuxAction::B1C, AuxAction::B2C});
    CHECK(aux_action_set({5, 2}, L) ==
          std::vector<AuxAction>{AuxAction::B1, AuxAction::B1C, AuxAction::B2C});
    CHECK(aux_action_set({5, 4}, L).size() == 4);
}

TEST_CASE("kernel rows sum to one exactly") {
    for (int L : {6, 8, 10}) {
        for (const AuxState& s : aux_states(L)) {
            for (AuxAction a : aux_action_set(s, L)) {
                Rational total(0);
                for (const auto& [t, p] : aux_kernel(s, a, L)) {
                    total += p;
                    CHECK(p.num > 0);
                }
                CHECK(total == Rational(1));
            }
        }
    }
}

TEST_CASE("kernel example rows") {
    auto m1 = kernel_map({6, 8}, AuxAction::B1C, 10);
    CHECK(m1[AuxState{6, 8}] == Rational(1, 3));
    CHECK(m1[AuxState{6, 10}] == Rational(2, 3));

    auto m2 = kernel_map({3, 5}, AuxAction::B2C, 10);
    CHECK(m2[AuxState{3, 5}] == Rational(1, 2));
    CHECK(m2[AuxState{4, 5}] == Rational(1, 3));
    CHECK(m2[AuxState{4, 4}] == Rational(1, 6));

    auto m3 = kernel_map({4, 8}, AuxAction::B1, 10);
    CHECK(m3[AuxState{4, 8}] == Rational(1, 7));
    CHECK(m3[AuxState{4, 10}] == Rational(6, 7));

    auto m4 = kernel_map({5, 4}, AuxAction::B1, 10);
    CHECK(m4[AuxState{5, 4}] == Rational(2, 7));
    CHECK(m4[AuxState{5, 5}] == Rational(5, 7));
}

TEST_CASE("kernel transposition symmetry") {
    const int L = 8;
    for (const AuxState& s : aux_states(L)) {
        for (AuxAction a : aux_action_set(s, L)) {
            AuxAction at = a == AuxAction::B1    ? AuxAction::B2
                           : a == AuxAction::B2  ? AuxAction::B1
                           : a == AuxAction::B1C ? AuxAction::B2C
                           : a == AuxAction::B2C ? AuxAction::B1C
                                                 : AuxAction::Stay;
            auto m = kernel_map(s, a, L);
            auto mt = kernel_map({s.j, s.i}, at, L);
            CHECK(m.size() == mt.size());
            for (const auto& [t, p] : m) CHECK(mt[AuxState{t.j, t.i}] == p);
        }
    }
}

TEST_CASE("rewards match the energy cost of the detachment") {
    const int L = 8;
    const double U = 1.0;
    ModelParams params;
    params.L = L;
    for (const AuxState& s : aux_states(L)) {
        if (s.i == L && s.j == L) continue;
        SiteConfig rect = post_decision_config(s, AuxAction::Stay, L);
        for (AuxAction a : aux_action_set(s, L)) {
            SiteConfig post = post_decision_config(s, a, L);
            const double dH =
                post.hamiltonian().value(params) - rect.hamiltonian().value(params);
            CHECK(aux_reward(s, a, RewardKind::R2, U) == doctest::Approx(-dH).epsilon(1e-12));
        }
    }
}

TEST_CASE("solved values at reference points") {
    const int L = 8;
    const double lambda = 0.9;
    AuxMdp m1 = build_aux_mdp(L, RewardKind::R1, lambda, 1.0);
    SolveResult r1 = value_iteration(m1.mdp, 1e-10);
    CHECK(r1.values[m1.index_of({2, 2})] == doctest::Approx(2.330461136452).epsilon(1e-9));
    CHECK(r1.values[m1.index_of({2, 6})] == doctest::Approx(4.395057185450).epsilon(1e-9));
    CHECK(r1.values[m1.index_of({8, 6})] == doctest::Approx(8.852459016393).epsilon(1e-9));
    CHECK(r1.values[m1.index_of({8, 8})] == doctest::Approx(10.0).epsilon(1e-9));

    AuxMdp m2 = build_aux_mdp(L, RewardKind::R2, lambda, 1.0);
    SolveResult r2 = value_iteration(m2.mdp, 1e-10);
    CHECK(r2.values[m2.index_of({2, 2})] == doctest::Approx(-17.735885396861).epsilon(1e-9));
    CHECK(r2.values[m2.index_of({2, 6})] == doctest::Approx(-14.947583919440).epsilon(1e-9));
    CHECK(r2.values[m2.index_of({8, 6})] == doctest::Approx(-3.442622950820).epsilon(1e-9));
    CHECK(r2.values[m2.index_of({8, 8})] == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("kernel csv export is stable and sums to one per row") {
    std::ostringstream a, b;
    export_kernel_csv(a, 6);
    export_kernel_csv(b, 6);
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("# metastable-mdp v1\n", 0) == 0);
}

TEST_CASE("simulation agrees with the solver on a short run") {
    const int L = 8;
    const double lambda = 0.9;
    AuxMdp aux = build_aux_mdp(L, RewardKind::R1, lambda, 1.0);
    SolveResult sol = value_iteration(aux.mdp, 1e-10);
    auto policy = [&](AuxState s) {
        int idx = aux.index_of(s);
        return aux.actions[idx][sol.policy[idx]];
    };
    ModelParams params;
    params.L = L;
    SimulationStats st =
        simulate_controlled(L, RewardKind::R1, lambda, 1.0, policy, {L, L - 2},
                            DynamicsMode::ZeroTemperature, params, 777, 4000);
    const double target = sol.values[aux.index_of({L, L - 2})];
    CHECK(std::abs(st.mean - target) < 4.0 * st.std_error + 1e-9);
}
