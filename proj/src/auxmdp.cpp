#include "mmdp/auxmdp.hpp"

#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

namespace mmdp {

namespace {

// Coordinate values in state order: 2, 3, ..., L-2, L.
std::vector<int> coord_values(int L) {
    std::vector<int> v;
    for (int c = 2; c <= L - 2; ++c) v.push_back(c);
    v.push_back(L);
    return v;
}

int coord_index(int c, int L) {
    if (c == L) return L - 3;
    if (c >= 2 && c <= L - 2) return c - 2;
    throw std::invalid_argument("coordinate outside the reduced state space");
}

AuxState transpose(AuxState s) { return {s.j, s.i}; }

AuxAction transpose(AuxAction a) {
    switch (a) {
        case AuxAction::B1: return AuxAction::B2;
        case AuxAction::B2: return AuxAction::B1;
        case AuxAction::B1C: return AuxAction::B2C;
        case AuxAction::B2C: return AuxAction::B1C;
        case AuxAction::Stay: return AuxAction::Stay;
    }
    throw std::logic_error("bad action");
}

// Dihedral index of the transpose reflection (x, y) -> (y, x).
constexpr int kTransposeTransform = 5;

}  // namespace

std::string to_string(AuxAction a) {
    switch (a) {
        case AuxAction::B1: return "b1";
        case AuxAction::B2: return "b2";
        case AuxAction::B1C: return "b1c";
        case AuxAction::B2C: return "b2c";
        case AuxAction::Stay: return "stay";
    }
    throw std::logic_error("bad action");
}

AuxAction aux_action_from_string(const std::string& name) {
    if (name == "b1") return AuxAction::B1;
    if (name == "b2") return AuxAction::B2;
    if (name == "b1c") return AuxAction::B1C;
    if (name == "b2c") return AuxAction::B2C;
    if (name == "stay") return AuxAction::Stay;
    throw std::invalid_argument("unknown action name: " + name);
}

std::vector<AuxState> aux_states(int L) {
    std::vector<AuxState> out;
    for (int i : coord_values(L))
        for (int j : coord_values(L)) out.push_back({i, j});
    return out;
}

std::vector<AuxAction> aux_action_set(AuxState s, int L) {
    using A = AuxAction;
    if (s.i == L && s.j == L) return {A::Stay};
    if (s.i == L) return {A::B1};
    if (s.j == L) return {A::B2};
    if (s.i == 2 && s.j == 2) return {A::B1C, A::B2C};
    if (s.i == 2) return {A::B2, A::B1C, A::B2C};
    if (s.j == 2) return {A::B1, A::B1C, A::B2C};
    return {A::B1, A::B2, A::B1C, A::B2C};
}

std::vector<std::pair<AuxState, Rational>> aux_kernel(AuxState s, AuxAction a, int L) {
    using P = std::pair<AuxState, Rational>;
    const int i = s.i, j = s.j;
    switch (a) {
        case AuxAction::Stay:
            return {P{s, Rational(1)}};
        case AuxAction::B1:
            if (j == L - 2) return {P{s, Rational(1, 7)}, P{{i, L}, Rational(6, 7)}};
            return {P{s, Rational(2, 7)}, P{{i, j + 1}, Rational(5, 7)}};
        case AuxAction::B1C:
            if (j == L - 2) return {P{s, Rational(1, 3)}, P{{i, L}, Rational(2, 3)}};
            if (j >= i) return {P{s, Rational(1, 2)}, P{{i, j + 1}, Rational(1, 2)}};
            return {P{s, Rational(1, 2)}, P{{i, j + 1}, Rational(1, 3)},
                    P{{i - 1, j + 1}, Rational(1, 6)}};
        case AuxAction::B2:
        case AuxAction::B2C: {
            auto rows = aux_kernel(transpose(s), transpose(a), L);
            for (auto& [t, p] : rows) t = transpose(t);
            return rows;
        }
    }
    throw std::logic_error("bad action");
}

double aux_reward(AuxState /*s*/, AuxAction a, RewardKind kind, double U) {
    // Stay is admissible only at the full box, where R1 pays 1 per epoch.
    if (kind == RewardKind::R1) return a == AuxAction::Stay ? 1.0 : 0.0;
    switch (a) {
        case AuxAction::B1:
        case AuxAction::B2: return -3.0 * U;
        case AuxAction::B1C:
        case AuxAction::B2C: return -2.0 * U;
        case AuxAction::Stay: return 0.0;
    }
    throw std::logic_error("bad action");
}

SiteConfig post_decision_config(AuxState s, AuxAction a, int L) {
    if (a == AuxAction::B2 || a == AuxAction::B2C) {
        SiteConfig c = post_decision_config(transpose(s), transpose(a), L);
        return c.transformed(kTransposeTransform);
    }
    if (a == AuxAction::Stay) return make_rectangle(L, Boundary::Periodic, 0, 0, s.i, s.j);
    // B1 / B1C: embed with the lower-left corner at (1, 1) so the detached
    // particle lands inside the box except when the side already spans the
    // torus; then lift one top-row particle one step up.
    const int x0 = (s.i == L) ? 0 : 1;
    const int y0 = 1;
    SiteConfig c = make_rectangle(L, Boundary::Periodic, x0, y0, s.i, s.j);
    const int ytop = y0 + s.j - 1;
    int x;
    if (a == AuxAction::B1C) {
        x = x0;  // north-west corner
    } else {
        x = x0 + (s.i + 1) / 2 - 1;  // middle column, never a corner for i >= 3
    }
    c.apply({MoveKind::Exchange, {x, ytop}, {x, (ytop + 1) % L}});
    return c;
}

std::vector<std::pair<AuxState, Rational>> derive_kernel_geometric(AuxState s, AuxAction a,
                                                                   int L) {
    if (a == AuxAction::Stay) return {{s, Rational(1)}};
    SiteConfig cfg = post_decision_config(s, a, L);
    std::vector<Move> moves = cfg.susceptible_moves();
    if (moves.empty()) throw std::runtime_error("post-decision configuration has no moves");
    std::map<AuxState, long long> counts;
    for (const Move& m : moves) {
        SiteConfig c = cfg;
        c.apply(m);
        auto [w, h] = relax_to_robust(c);
        ++counts[AuxState{w, h}];
    }
    std::vector<std::pair<AuxState, Rational>> out;
    for (const auto& [t, n] : counts)
        out.emplace_back(t, Rational(n, static_cast<long long>(moves.size())));
    return out;
}

std::vector<AuxAction> analytic_optimal_r1(AuxState s, int L) {
    using A = AuxAction;
    if (s.i == L && s.j == L) return {A::Stay};
    if (s.i == L) return {A::B1};
    if (s.j == L) return {A::B2};
    return {A::B1, A::B2};
}

std::vector<AuxAction> analytic_optimal_r2(AuxState s, int L) {
    using A = AuxAction;
    if (s.i == L && s.j == L) return {A::Stay};
    if (s.i == L) return {A::B1};
    if (s.j == L) return {A::B2};
    if (s.i == L - 2 && s.j == L - 2) return {A::B1C, A::B2C};
    if (s.i == L - 2) return {A::B1C};
    if (s.j == L - 2) return {A::B2C};
    return {A::B1C, A::B2C};
}

AuxAction analytic_policy_r1(AuxState s, int L) {
    using A = AuxAction;
    if (s.i == L && s.j == L) return A::Stay;
    if (s.i == L) return A::B1;
    if (s.j == L) return A::B2;
    if (s.i == 2 && s.j == 2) return A::B1C;
    if (s.i == 2) return A::B2;
    if (s.j == 2) return A::B1;
    return s.i >= s.j ? A::B1 : A::B2;
}

AuxAction analytic_policy_r2(AuxState s, int L) {
    using A = AuxAction;
    if (s.i == L && s.j == L) return A::Stay;
    if (s.i == L) return A::B1;
    if (s.j == L) return A::B2;
    if (s.i == L - 2) return A::B1C;
    if (s.j == L - 2) return A::B2C;
    return s.i >= s.j ? A::B2C : A::B1C;
}

int AuxMdp::index_of(AuxState s) const {
    const int L = states.back().i;  // last state is (L, L)
    const int n = L - 2;            // coordinates per axis
    return coord_index(s.i, L) * n + coord_index(s.j, L);
}

AuxMdp build_aux_mdp(int L, RewardKind kind, double lambda, double U) {
    AuxMdp out;
    out.mdp.lambda = lambda;
    out.states = aux_states(L);
    out.actions.reserve(out.states.size());
    out.mdp.rows.reserve(out.states.size());
    for (const AuxState& s : out.states) {
        std::vector<AuxAction> acts = aux_action_set(s, L);
        std::vector<ActionRow> rows;
        for (AuxAction a : acts) {
            ActionRow row;
            row.id = static_cast<int>(a);
            row.reward = aux_reward(s, a, kind, U);
            for (const auto& [t, p] : aux_kernel(s, a, L))
                row.transitions.push_back({out.index_of(t), p.to_double()});
            rows.push_back(std::move(row));
        }
        out.actions.push_back(std::move(acts));
        out.mdp.rows.push_back(std::move(rows));
    }
    return out;
}

void export_kernel_csv(std::ostream& os, int L) {
    os << "# metastable-mdp v1\n";
    os << "i,j,action,i2,j2,num,den\n";
    for (const AuxState& s : aux_states(L)) {
        for (AuxAction a : aux_action_set(s, L)) {
            for (const auto& [t, p] : aux_kernel(s, a, L)) {
                os << s.i << ',' << s.j << ',' << to_string(a) << ',' << t.i << ',' << t.j << ','
                   << p.num << ',' << p.den << '\n';
            }
        }
    }
}

SimulationStats simulate_controlled(int L, RewardKind kind, double lambda, double U,
                                    const std::function<AuxAction(AuxState)>& policy,
                                    AuxState start, DynamicsMode mode, const ModelParams& params,
                                    std::uint64_t seed, long long episodes,
                                    std::ostream* trajectory_log) {
    const AuxState full{L, L};
    // In the zero-temperature dynamics the interchange is a uniform draw
    // over the post-decision susceptible moves, so the outcome distribution
    // depends only on (state, action); cache the relaxed outcome lists.
    std::map<std::pair<AuxState, int>, std::vector<AuxState>> cache;
    auto zero_t_outcomes = [&](AuxState s, AuxAction a) -> const std::vector<AuxState>& {
        auto key = std::make_pair(s, static_cast<int>(a));
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        SiteConfig cfg = post_decision_config(s, a, L);
        std::vector<AuxState> outcomes;
        for (const Move& m : cfg.susceptible_moves()) {
            SiteConfig c = cfg;
            c.apply(m);
            auto [w, h] = relax_to_robust(c);
            outcomes.push_back({w, h});
        }
        return cache.emplace(key, std::move(outcomes)).first->second;
    };

    double sum = 0.0, sumsq = 0.0;
    long long total_epochs = 0;
    const long long max_epochs = 100000000;
    for (long long ep = 0; ep < episodes; ++ep) {
        RngStream rng(seed, static_cast<std::uint64_t>(ep));
        AuxState s = start;
        double ret = 0.0;
        double disc = 1.0;
        long long t = 0;
        while (!(s == full)) {
            AuxAction a = policy(s);
            double r = aux_reward(s, a, kind, U);
            ret += disc * r;
            if (trajectory_log && ep == 0)
                *trajectory_log << t << " (" << s.i << "," << s.j << ") " << to_string(a) << " "
                                << r << "\n";
            AuxState next;
            if (mode == DynamicsMode::ZeroTemperature) {
                const std::vector<AuxState>& outs = zero_t_outcomes(s, a);
                next = outs[rng.uniform_int(outs.size())];
            } else {
                SiteConfig cfg = post_decision_config(s, a, L);
                first_interchange(cfg, mode, params, rng);
                auto [w, h] = relax_to_robust(cfg);
                next = {w, h};
            }
            s = next;
            disc *= lambda;
            if (++t > max_epochs) throw std::runtime_error("episode failed to absorb");
        }
        if (kind == RewardKind::R1) ret += disc / (1.0 - lambda);  // absorbing full box pays 1
        if (trajectory_log && ep == 0)
            *trajectory_log << t << " (" << s.i << "," << s.j << ") stay absorbed return=" << ret
                            << "\n";
        sum += ret;
        sumsq += ret * ret;
        total_epochs += t;
    }
    SimulationStats st;
    st.episodes = episodes;
    st.mean = sum / static_cast<double>(episodes);
    st.mean_epochs = static_cast<double>(total_epochs) / static_cast<double>(episodes);
    double var = (sumsq - sum * st.mean) / std::max<double>(1.0, static_cast<double>(episodes - 1));
    st.std_error = std::sqrt(std::max(0.0, var) / static_cast<double>(episodes));
    return st;
}

}  // namespace mmdp
