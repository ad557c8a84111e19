#include "mmdp/verify.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

namespace mmdp {

bool VerificationReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

int VerificationReport::failures() const {
    return static_cast<int>(std::count_if(checks.begin(), checks.end(),
                                          [](const Check& c) { return !c.pass; }));
}

void VerificationReport::merge(const VerificationReport& other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string state_name(AuxState s) {
    return "(" + std::to_string(s.i) + "," + std::to_string(s.j) + ")";
}

std::string set_name(const std::vector<AuxAction>& acts) {
    std::string out = "{";
    for (size_t k = 0; k < acts.size(); ++k) out += (k ? "," : "") + to_string(acts[k]);
    return out + "}";
}

Check make_check(std::string name, double measured, double expected, double tol,
                 std::string detail = "") {
    Check c;
    c.name = std::move(name);
    c.measured = measured;
    c.expected = expected;
    c.tolerance = tol;
    c.pass = std::abs(measured - expected) <= tol;
    c.detail = std::move(detail);
    return c;
}

Check make_strict_positive(std::string name, double margin, double scale) {
    Check c;
    c.name = std::move(name);
    c.measured = margin;
    c.expected = 0.0;
    c.tolerance = 1e-10 * std::max(1.0, scale);
    c.pass = margin > c.tolerance;
    return c;
}

// Evaluates the canonical claimed-optimal policy exactly.
std::vector<double> canonical_values(const AuxMdp& aux, RewardKind kind, int L) {
    std::vector<int> policy(aux.states.size(), 0);
    for (size_t s = 0; s < aux.states.size(); ++s) {
        AuxAction a = kind == RewardKind::R1 ? analytic_policy_r1(aux.states[s], L)
                                             : analytic_policy_r2(aux.states[s], L);
        auto it = std::find(aux.actions[s].begin(), aux.actions[s].end(), a);
        if (it == aux.actions[s].end()) throw std::logic_error("canonical action infeasible");
        policy[s] = static_cast<int>(it - aux.actions[s].begin());
    }
    return policy_evaluation(aux.mdp, policy);
}

// Shared greedy-set comparison for both theorem checks.
VerificationReport check_theorem(const AuxMdp& aux, int L, double tie_tol, RewardKind kind,
                                 const std::string& tag) {
    VerificationReport rep;
    SolveResult sol = value_iteration(aux.mdp, 1e-10);
    const double gap_tol = 1e-6;
    for (size_t s = 0; s < aux.states.size(); ++s) {
        const AuxState st = aux.states[s];
        std::vector<AuxAction> claimed_raw = kind == RewardKind::R1 ? analytic_optimal_r1(st, L)
                                                                    : analytic_optimal_r2(st, L);
        // Restrict the claimed set to feasible actions.
        std::vector<AuxAction> claimed;
        for (AuxAction a : claimed_raw)
            if (std::find(aux.actions[s].begin(), aux.actions[s].end(), a) != aux.actions[s].end())
                claimed.push_back(a);
        std::vector<int> gidx = greedy_actions(aux.mdp, static_cast<int>(s), sol.values, tie_tol);
        std::vector<AuxAction> greedy;
        for (int g : gidx) greedy.push_back(aux.actions[s][g]);
        std::sort(greedy.begin(), greedy.end());
        std::sort(claimed.begin(), claimed.end());

        Check c;
        c.name = tag + "_greedy" + state_name(st);
        c.expected = 1.0;
        c.tolerance = 0.0;
        if (claimed.empty()) {
            // No claimed action is feasible here; report what the solver
            // does without asserting anything.
            c.pass = true;
            c.measured = 1.0;
            c.detail = "claimed set infeasible here; greedy=" + set_name(greedy) +
                       " (report only)";
            rep.checks.push_back(std::move(c));
            continue;
        }
        const bool either_ok =
            kind == RewardKind::R2 && st.i == L - 2 && st.j == L - 2;  // overlap state
        bool ok;
        if (either_ok) {
            ok = !greedy.empty() && std::includes(claimed.begin(), claimed.end(), greedy.begin(),
                                                  greedy.end());
        } else {
            // Every claimed action must be greedy.
            ok = std::includes(greedy.begin(), greedy.end(), claimed.begin(), claimed.end());
        }
        // Excluded actions must trail by a clear margin; tiny gaps are
        // reported as numerical ties, not failed.
        const double maxq = q_value(aux.mdp, static_cast<int>(s), gidx[0], sol.values);
        std::string tie_note;
        if (ok) {
            for (size_t a = 0; a < aux.actions[s].size(); ++a) {
                if (std::find(claimed.begin(), claimed.end(), aux.actions[s][a]) != claimed.end())
                    continue;
                double gap = maxq - q_value(aux.mdp, static_cast<int>(s), static_cast<int>(a),
                                            sol.values);
                if (gap <= gap_tol * std::abs(maxq))
                    tie_note += (tie_note.empty() ? "near-tie: " : ", ") +
                                to_string(aux.actions[s][a]) + " gap=" + fmt(gap);
            }
        }
        c.pass = ok;
        c.measured = ok ? 1.0 : 0.0;
        c.detail = "claimed=" + set_name(claimed) + " greedy=" + set_name(greedy);
        if (!tie_note.empty()) c.detail += "; " + tie_note;
        rep.checks.push_back(std::move(c));
    }
    return rep;
}

}  // namespace

VerificationReport check_theorem_r1(int L, double lambda, double tie_tol) {
    AuxMdp aux = build_aux_mdp(L, RewardKind::R1, lambda, 1.0);
    return check_theorem(aux, L, tie_tol, RewardKind::R1, "r1");
}

VerificationReport check_theorem_r2(int L, double lambda, double U, double tie_tol) {
    AuxMdp aux = build_aux_mdp(L, RewardKind::R2, lambda, U);
    return check_theorem(aux, L, tie_tol, RewardKind::R2, "r2");
}

VerificationReport check_closed_forms(int L, double lambda, double U) {
    VerificationReport rep;
    AuxMdp m1 = build_aux_mdp(L, RewardKind::R1, lambda, U);
    AuxMdp m2 = build_aux_mdp(L, RewardKind::R2, lambda, U);
    std::vector<double> v1 = canonical_values(m1, RewardKind::R1, L);
    std::vector<double> v2 = canonical_values(m2, RewardKind::R2, L);
    const double l = lambda;
    auto rel = [](double expected) { return 1e-8 * std::max(1.0, std::abs(expected)); };
    auto add = [&](const std::string& name, const std::vector<double>& v, const AuxMdp& m,
                   AuxState s, double expected) {
        rep.checks.push_back(
            make_check(name + state_name(s), v[m.index_of(s)], expected, rel(expected)));
    };
    add("r1_value", v1, m1, {L, L - 2}, 6 * l / ((1 - l) * (7 - l)));
    add("r1_value", v1, m1, {L - 2, L - 2}, 36 * l * l / ((1 - l) * (7 - l) * (7 - l)));
    add("r1_value", v1, m1, {L - 2, L - 3},
        180 * l * l * l / ((7 - 2 * l) * (1 - l) * (7 - l) * (7 - l)));
    add("r1_value", v1, m1, {L, L - 3}, 30 * l * l / ((7 - 2 * l) * (1 - l) * (7 - l)));
    add("r1_value", v1, m1, {L - 3, L - 3},
        900 * std::pow(l, 4) / (std::pow(7 - 2 * l, 2) * (1 - l) * std::pow(7 - l, 2)));
    add("r1_value", v1, m1, {L - 3, L - 4},
        4500 * std::pow(l, 5) / (std::pow(7 - 2 * l, 3) * (1 - l) * std::pow(7 - l, 2)));
    add("r2_value", v2, m2, {L, L - 2}, -21 * U / (7 - l));
    add("r2_value", v2, m2, {L - 2, L - 2}, -6 * (7 + 6 * l) * U / ((7 - l) * (3 - l)));
    add("r2_value", v2, m2, {L - 2, L - 3},
        -(20 * l * l + l + 42) * U / ((7 - l) * (3 - l) * (2 - l)));
    add("r2_value", v2, m2, {L, L - 3}, -21 * (7 + 4 * l) * U / ((7 - l) * (7 - 2 * l)));
    return rep;
}

VerificationReport check_recursions(int L, double lambda, double U) {
    VerificationReport rep;
    AuxMdp m1 = build_aux_mdp(L, RewardKind::R1, lambda, U);
    AuxMdp m2 = build_aux_mdp(L, RewardKind::R2, lambda, U);
    std::vector<double> v1 = canonical_values(m1, RewardKind::R1, L);
    std::vector<double> v2 = canonical_values(m2, RewardKind::R2, L);
    const double l = lambda;
    auto V1 = [&](int i, int j) { return v1[m1.index_of({i, j})]; };
    auto V2 = [&](int i, int j) { return v2[m2.index_of({i, j})]; };
    auto tol = [](double a, double b) { return 1e-10 * std::max({1.0, std::abs(a), std::abs(b)}); };
    auto add = [&](const std::string& name, double lhs, double rhs) {
        rep.checks.push_back(make_check(name, lhs, rhs, tol(lhs, rhs)));
    };

    add("r1_rec_absorb(L,L)", V1(L, L), 1.0 / (1 - l));
    add("r1_rec_boundary(L,L-2)", V1(L, L - 2), 6 * l / (7 - l) * V1(L, L));
    add("r1_rec_corner(L-2,L-2)", V1(L - 2, L - 2), 6 * l / (7 - l) * V1(L, L - 2));
    for (int i = 3; i <= L; ++i) {
        if (i == L - 1) continue;
        for (int j = 3; j <= std::min(i, L - 3); ++j)
            add("r1_rec_grow" + state_name({i, j}), V1(i, j), 5 * l / (7 - 2 * l) * V1(i, j + 1));
    }

    add("r2_rec_absorb(L,L)", V2(L, L), 0.0);
    add("r2_rec_boundary(L,L-2)", V2(L, L - 2), -21 * U / (7 - l) + 6 * l / (7 - l) * V2(L, L));
    for (int j = 3; j <= L - 3; ++j)
        add("r2_rec_row" + state_name({L, j}), V2(L, j),
            -21 * U / (7 - 2 * l) + 5 * l / (7 - 2 * l) * V2(L, j + 1));
    add("r2_rec_corner(L-2,L-2)", V2(L - 2, L - 2),
        -6 * U / (3 - l) + 2 * l / (3 - l) * V2(L, L - 2));
    for (int j = 3; j <= L - 3; ++j)
        add("r2_rec_edge" + state_name({L - 2, j}), V2(L - 2, j),
            -4 * U / (2 - l) + l / (2 - l) * V2(L - 2, j + 1));
    for (int i = 3; i <= L - 3; ++i)
        for (int j = 3; j <= std::min(i, L - 3); ++j)
            add("r2_rec_interior" + state_name({i, j}), V2(i, j),
                -4 * U / (2 - l) + l / (2 - l) * V2(i, j + 1));

    for (int j = 2; j <= L - 3; ++j)
        add("r1_identity_balance(j=" + std::to_string(j) + ")",
            V1(L - 2, j) + 5 * V1(L - 2, j + 1), 6 * V1(L, j));
    for (int i = 3; i <= L - 3; ++i)
        for (int j = 2; j < i; ++j)
            add("r1_identity_steps" + state_name({i, j}), V1(i + 1, j), V1(i, j + 1));
    for (int i = 3; i <= L - 3; ++i)
        for (int j = 3; j <= i; ++j)
            add("r2_identity_steps" + state_name({i, j}), V2(i, j + 1), V2(i + 1, j));

    double worst1 = 0.0, worst2 = 0.0;
    for (const AuxState& s : aux_states(L)) {
        worst1 = std::max(worst1, std::abs(V1(s.i, s.j) - V1(s.j, s.i)));
        worst2 = std::max(worst2, std::abs(V2(s.i, s.j) - V2(s.j, s.i)));
    }
    rep.checks.push_back(make_check("r1_symmetry", worst1, 0.0, 1e-12));
    rep.checks.push_back(make_check("r2_symmetry", worst2, 0.0, 1e-12));
    return rep;
}

VerificationReport check_inequalities(int L, double lambda, double U) {
    VerificationReport rep;
    AuxMdp m1 = build_aux_mdp(L, RewardKind::R1, lambda, U);
    AuxMdp m2 = build_aux_mdp(L, RewardKind::R2, lambda, U);
    std::vector<double> v1 = canonical_values(m1, RewardKind::R1, L);
    std::vector<double> v2 = canonical_values(m2, RewardKind::R2, L);
    const double l = lambda;
    auto V1 = [&](int i, int j) { return v1[m1.index_of({i, j})]; };
    auto V2 = [&](int i, int j) { return v2[m2.index_of({i, j})]; };
    auto scale2 = [](double a, double b) { return std::max(std::abs(a), std::abs(b)); };

    rep.checks.push_back(make_strict_positive("r1_gap_band_vs_corner", V1(L, L - 2) - V1(L - 2, L - 2),
                                              scale2(V1(L, L - 2), V1(L - 2, L - 2))));
    for (int j = 2; j <= L - 3; ++j) {
        rep.checks.push_back(make_strict_positive("r1_monotone_edge(j=" + std::to_string(j) + ")",
                                                  V1(L - 2, j + 1) - V1(L - 2, j),
                                                  scale2(V1(L - 2, j + 1), V1(L - 2, j))));
        rep.checks.push_back(make_strict_positive("r1_band_dominates(j=" + std::to_string(j) + ")",
                                                  V1(L, j) - V1(L - 2, j),
                                                  scale2(V1(L, j), V1(L - 2, j))));
    }
    for (int i = 2; i <= L - 3; ++i)
        rep.checks.push_back(make_strict_positive("r1_monotone_diag(i=" + std::to_string(i) + ")",
                                                  V1(i, i + 1) - V1(i, i),
                                                  scale2(V1(i, i + 1), V1(i, i))));
    for (int i = 3; i <= L - 3; ++i)
        for (int j = 2; j < i; ++j) {
            rep.checks.push_back(make_strict_positive(
                "r1_combination" + state_name({i, j}),
                -9 * V1(i, j) + 16 * V1(i, j + 1) - 7 * V1(i - 1, j + 1),
                16 * std::abs(V1(i, j + 1))));
            rep.checks.push_back(make_strict_positive("r1_monotone_width" + state_name({i, j}),
                                                      V1(i + 1, j) - V1(i, j),
                                                      scale2(V1(i + 1, j), V1(i, j))));
        }

    rep.checks.push_back(make_strict_positive(
        "r2_corner_premium", 21 * U + 4 * l * V2(L - 2, L - 2) - 4 * l * V2(L, L - 2),
        21 * U + 4 * std::abs(V2(L - 2, L - 2))));
    for (int j = 3; j <= L - 3; ++j) {
        rep.checks.push_back(make_strict_positive(
            "r2_edge_step(j=" + std::to_string(j) + ")",
            14 * U + 3 * l * V2(L - 2, j) - 3 * l * V2(L - 2, j + 1), 14 * U));
        rep.checks.push_back(make_strict_positive(
            "r2_edge_combination(j=" + std::to_string(j) + ")",
            14 * U + 5 * l * V2(L - 2, j) + 7 * l * V2(L - 2, j + 1) - 12 * l * V2(L, j),
            14 * U + 12 * std::abs(V2(L, j))));
        rep.checks.push_back(make_strict_positive(
            "r2_balance(j=" + std::to_string(j) + ")",
            V2(L - 2, j) + 3 * V2(L - 2, j + 1) - 4 * V2(L, j), 4 * std::abs(V2(L, j))));
    }
    for (int i = 3; i <= L - 3; ++i)
        for (int j = 3; j <= i; ++j)
            rep.checks.push_back(make_strict_positive(
                "r2_interior_step" + state_name({i, j}),
                14 * U + 3 * l * V2(i, j) - 3 * l * V2(i, j + 1), 14 * U));
    return rep;
}

VerificationReport check_kernel_oracle(int L) {
    VerificationReport rep;
    for (const AuxState& s : aux_states(L)) {
        for (AuxAction a : aux_action_set(s, L)) {
            auto expected = aux_kernel(s, a, L);
            std::vector<std::pair<AuxState, Rational>> derived;
            std::string derive_error;
            try {
                derived = derive_kernel_geometric(s, a, L);
            } catch (const std::exception& ex) {
                derive_error = ex.what();
                if (auto nl = derive_error.find('\n'); nl != std::string::npos)
                    derive_error.resize(nl);
            }
            auto key = [](const std::pair<AuxState, Rational>& p) { return p.first; };
            std::sort(expected.begin(), expected.end(),
                      [&](auto& x, auto& y) { return key(x) < key(y); });
            std::sort(derived.begin(), derived.end(),
                      [&](auto& x, auto& y) { return key(x) < key(y); });
            Check c;
            const bool boundary = s.i == L || s.j == L;
            c.name = std::string("kernel(") + std::to_string(s.i) + "," + std::to_string(s.j) +
                     "," + to_string(a) + ")";
            c.pass = derive_error.empty() && expected == derived;
            c.measured = c.pass ? 1.0 : 0.0;
            c.expected = 1.0;
            c.tolerance = 0.0;
            c.detail = boundary ? "boundary row" : "interior";
            if (!derive_error.empty()) {
                c.detail += "; derivation failed: " + derive_error;
            } else if (!c.pass) {
                c.detail += "; expected:";
                for (auto& [t, p] : expected) c.detail += " " + state_name(t) + ":" + p.str();
                c.detail += " derived:";
                for (auto& [t, p] : derived) c.detail += " " + state_name(t) + ":" + p.str();
            }
            rep.checks.push_back(std::move(c));
        }
    }
    return rep;
}

VerificationReport check_mc_consistency(int L, double lambda, RewardKind kind, double U,
                                         const std::vector<AuxState>& starts, long long episodes,
                                         std::uint64_t seed) {
    VerificationReport rep;
    AuxMdp aux = build_aux_mdp(L, kind, lambda, U);
    SolveResult sol = value_iteration(aux.mdp, 1e-10);
    ModelParams params;
    params.L = L;
    params.U = U;
    params.lambda = lambda;
    auto policy = [&](AuxState s) {
        int idx = aux.index_of(s);
        return aux.actions[idx][sol.policy[idx]];
    };
    for (const AuxState& start : starts) {
        const double target = sol.values[aux.index_of(start)];
        SimulationStats st;
        try {
            st = simulate_controlled(L, kind, lambda, U, policy, start,
                                     DynamicsMode::ZeroTemperature, params, seed, episodes);
        } catch (const std::exception& ex) {
            Check c;
            c.name = "mc_return" + state_name(start);
            c.pass = false;
            c.measured = std::numeric_limits<double>::quiet_NaN();
            c.expected = target;
            c.tolerance = 0.0;
            c.detail = std::string("simulation aborted: ") + ex.what();
            if (auto nl = c.detail.find('\n'); nl != std::string::npos) c.detail.resize(nl);
            rep.checks.push_back(std::move(c));
            continue;
        }
        Check c = make_check("mc_return" + state_name(start), st.mean, target,
                             3.0 * st.std_error + 1e-9);
        c.detail = "episodes=" + std::to_string(st.episodes) +
                   " std_error=" + fmt(st.std_error) + " mean_epochs=" + fmt(st.mean_epochs);
        rep.checks.push_back(std::move(c));
    }
    return rep;
}

std::string VerificationReport::to_table() const {
    std::ostringstream os;
    size_t w = 4;
    for (const Check& c : checks) w = std::max(w, c.name.size());
    for (const Check& c : checks) {
        os << (c.pass ? "PASS " : "FAIL ") << c.name << std::string(w - c.name.size() + 2, ' ')
           << "measured=" << fmt(c.measured) << " expected=" << fmt(c.expected)
           << " tol=" << fmt(c.tolerance);
        if (!c.detail.empty()) os << "  [" << c.detail << "]";
        os << "\n";
    }
    os << (all_passed() ? "ALL PASSED" : std::to_string(failures()) + " FAILED") << " ("
       << checks.size() << " checks)\n";
    return os.str();
}

std::string VerificationReport::to_json() const {
    nlohmann::json j;
    j["all_passed"] = all_passed();
    j["checks"] = nlohmann::json::array();
    for (const Check& c : checks) {
        j["checks"].push_back({{"name", c.name},
                               {"status", c.pass ? "pass" : "fail"},
                               {"measured", c.measured},
                               {"expected", c.expected},
                               {"tolerance", c.tolerance},
                               {"detail", c.detail}});
    }
    return j.dump(2);
}

}  // namespace mmdp
