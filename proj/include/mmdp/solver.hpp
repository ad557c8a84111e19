#pragma once

#include <cstdint>
#include <vector>

namespace mmdp {

/// A sparse transition entry.
struct Transition {
    int state = 0;
    double prob = 0.0;
};

/// One admissible action at a state.
struct ActionRow {
    int id = 0;  ///< caller-defined action label
    double reward = 0.0;
    std::vector<Transition> transitions;
};

/// A finite discounted MDP in sparse tabular form.
struct Mdp {
    std::vector<std::vector<ActionRow>> rows;  ///< rows[s] = actions at s
    double lambda = 0.9;                       ///< discount factor in (0, 1)

    int num_states() const { return static_cast<int>(rows.size()); }
};

struct SolveResult {
    std::vector<double> values;
    std::vector<int> policy;  ///< index into rows[s] (argmax, lowest index on ties)
    int iterations = 0;
};

/// Value iteration to sup-norm tolerance `tol` on the value function
/// (stopping when the Bellman update moves less than tol*(1-lambda)/(2*lambda)).
SolveResult value_iteration(const Mdp& mdp, double tol = 1e-10, int max_iter = 1000000);

/// Exact policy evaluation: solves (I - lambda P_pi) v = r_pi by LU.
std::vector<double> policy_evaluation(const Mdp& mdp, const std::vector<int>& policy);

/// Howard policy iteration with exact evaluation.
SolveResult policy_iteration(const Mdp& mdp);

/// Sup-norm Bellman residual of a value vector.
double bellman_residual(const Mdp& mdp, const std::vector<double>& values);

/// Q-value of one action row under a value vector.
double q_value(const Mdp& mdp, int state, int action_index, const std::vector<double>& values);

/// Indices of actions whose Q-value is within rel_tol * max(|maxQ|, floor)
/// of the best; rel_tol is relative so near-zero value scales stay sane.
std::vector<int> greedy_actions(const Mdp& mdp, int state, const std::vector<double>& values,
                                double rel_tol = 1e-9);

/// Brute-force optimum by enumerating every deterministic stationary policy.
/// Only feasible for tiny MDPs; used to cross-check the iterative solvers.
SolveResult solve_by_enumeration(const Mdp& mdp);

}  // namespace mmdp
