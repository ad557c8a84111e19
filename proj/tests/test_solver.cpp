#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mmdp/solver.hpp"
#include "random_mdp.hpp"

using namespace mmdp;

namespace {

// Two-state chain with a known closed-form optimum: state 0 chooses between
// a safe self-loop (reward 0.5) and a jump to the absorbing state 1 (reward
// 0, value 1/(1-lambda) afterwards).
Mdp two_state(double lambda) {
    Mdp m;
    m.lambda = lambda;
    m.rows.resize(2);
    m.rows[0].push_back({0, 0.5, {{0, 1.0}}});
    m.rows[0].push_back({1, 0.0, {{1, 1.0}}});
    m.rows[1].push_back({0, 1.0, {{1, 1.0}}});
    return m;
}

}  // namespace

TEST_CASE("value iteration solves a two-state chain") {
    const double lambda = 0.9;
    Mdp m = two_state(lambda);
    SolveResult r = value_iteration(m, 1e-10);
    // Jumping dominates: 0 + lambda/(1-lambda) > 0.5/(1-lambda) iff lambda > 0.5.
    CHECK(r.values[1] == doctest::Approx(1.0 / (1 - lambda)).epsilon(1e-9));
    CHECK(r.values[0] == doctest::Approx(lambda / (1 - lambda)).epsilon(1e-9));
    CHECK(r.policy[0] == 1);
    CHECK(bellman_residual(m, r.values) < 1e-9);
}

TEST_CASE("policy evaluation is exact on a deterministic cycle") {
    Mdp m;
    m.lambda = 0.5;
    m.rows.resize(2);
    m.rows[0].push_back({0, 1.0, {{1, 1.0}}});
    m.rows[1].push_back({0, 0.0, {{0, 1.0}}});
    auto v = policy_evaluation(m, {0, 0});
    // v0 = 1 + 0.5 v1, v1 = 0.5 v0 -> v0 = 4/3, v1 = 2/3.
    CHECK(v[0] == doctest::Approx(4.0 / 3).epsilon(1e-12));
    CHECK(v[1] == doctest::Approx(2.0 / 3).epsilon(1e-12));
}

TEST_CASE("greedy tie detection is relative") {
    Mdp m;
    m.lambda = 0.9;
    m.rows.resize(1);
    m.rows[0].push_back({0, 1.0, {{0, 0.0}}});  // dangling transition avoided: self loop prob 0
    m.rows[0].back().transitions = {{0, 1.0}};
    m.rows[0].push_back({1, 1.0 + 1e-13, {{0, 1.0}}});
    m.rows[0].push_back({2, 0.5, {{0, 1.0}}});
    SolveResult r = value_iteration(m, 1e-10);
    auto g = greedy_actions(m, 0, r.values, 1e-9);
    CHECK(g.size() == 2);  // the 1e-13 difference is below the relative tie threshold
}

TEST_CASE("value iteration, policy iteration and enumeration agree") {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        Mdp m = testutil::random_mdp(seed);
        SolveResult vi = value_iteration(m, 1e-10);
        SolveResult pi = policy_iteration(m);
        SolveResult en = solve_by_enumeration(m);
        for (int s = 0; s < m.num_states(); ++s) {
            CHECK(std::abs(vi.values[s] - pi.values[s]) < 1e-8);
            CHECK(std::abs(vi.values[s] - en.values[s]) < 1e-8);
        }
        CHECK(bellman_residual(m, pi.values) < 1e-9);
    }
}
