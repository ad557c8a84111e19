#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "mmdp/kawasaki.hpp"
#include "mmdp/lattice.hpp"
#include "mmdp/rational.hpp"
#include "mmdp/rng.hpp"
#include "mmdp/solver.hpp"

namespace mmdp {

/// State of the reduced MDP: the dimensions of the current rectangular
/// cluster. Coordinates range over {2, ..., L-2} ∪ {L}; L-1 is unreachable
/// because filling the last-but-one row/column immediately completes the
/// torus circumference.
struct AuxState {
    int i = 0;  ///< rectangle width
    int j = 0;  ///< rectangle height
    friend bool operator==(AuxState, AuxState) = default;
    friend auto operator<=>(AuxState, AuxState) = default;
};

/// Controller actions: detach a particle from a horizontal side at a
/// non-corner bond (B1) or at a corner bond (B1C), same for a vertical side
/// (B2 / B2C), or do nothing (Stay, available only at the full box).
enum class AuxAction { B1, B2, B1C, B2C, Stay };

std::string to_string(AuxAction a);
AuxAction aux_action_from_string(const std::string& name);

/// Reward regimes: R1 pays 1 per epoch while at the full box; R2 charges
/// the energy cost of the chosen interchange (3U non-corner, 2U corner).
enum class RewardKind { R1, R2 };

/// All states in row-major order: i and j over {2,...,L-2, L}.
std::vector<AuxState> aux_states(int L);

/// Feasible actions; encodes which detachments exist geometrically
/// (non-corner bonds need side length >= 3, a full side has no corners, the
/// full box admits only Stay).
std::vector<AuxAction> aux_action_set(AuxState s, int L);

/// Exact transition kernel, hard-coded case by case.
std::vector<std::pair<AuxState, Rational>> aux_kernel(AuxState s, AuxAction a, int L);

/// Immediate reward.
double aux_reward(AuxState s, AuxAction a, RewardKind kind, double U);

/// The configuration obtained by applying the action's particle detachment
/// to the canonical embedding of the (i, j) rectangle on the periodic
/// lattice. Non-corner detachments use the middle column/row.
SiteConfig post_decision_config(AuxState s, AuxAction a, int L);

/// Independent geometric derivation of the kernel: enumerates the
/// susceptible moves of the post-decision configuration, relaxes each
/// outcome to its robust rectangle, and returns the exact uniform mixture.
std::vector<std::pair<AuxState, Rational>> derive_kernel_geometric(AuxState s, AuxAction a, int L);

/// Optimal action sets claimed analytically for each reward; used by the
/// verification suite. The intersection with aux_action_set may be empty at
/// (2,2) for R1, which callers must treat as report-only.
std::vector<AuxAction> analytic_optimal_r1(AuxState s, int L);
std::vector<AuxAction> analytic_optimal_r2(AuxState s, int L);

/// Canonical deterministic selection from the analytic optimal sets,
/// restricted to feasible actions; used for policy evaluation.
AuxAction analytic_policy_r1(AuxState s, int L);
AuxAction analytic_policy_r2(AuxState s, int L);

/// The reduced MDP laid out for the generic solver, with index mapping.
struct AuxMdp {
    Mdp mdp;
    std::vector<AuxState> states;                  ///< index -> state
    std::vector<std::vector<AuxAction>> actions;   ///< index -> feasible actions
    int index_of(AuxState s) const;
};
AuxMdp build_aux_mdp(int L, RewardKind kind, double lambda, double U);

/// CSV export of the exact kernel (one row per transition).
void export_kernel_csv(std::ostream& os, int L);

/// Result of a batch of controlled simulations.
struct SimulationStats {
    double mean = 0.0;
    double std_error = 0.0;
    long long episodes = 0;
    double mean_epochs = 0.0;
};

/// Simulates the controlled chain at the lattice level: each epoch applies
/// the policy's detachment, runs the dynamics to the first interchange, and
/// relaxes to the next robust rectangle. Returns discounted-return
/// statistics; absorption at the full box is summed analytically. Outcomes
/// per (state, action) are cached in ZeroTemperature mode, where the
/// uniform susceptible-move draw depends only on the equivalence class.
SimulationStats simulate_controlled(int L, RewardKind kind, double lambda, double U,
                                    const std::function<AuxAction(AuxState)>& policy,
                                    AuxState start, DynamicsMode mode, const ModelParams& params,
                                    std::uint64_t seed, long long episodes,
                                    std::ostream* trajectory_log = nullptr);

}  // namespace mmdp
