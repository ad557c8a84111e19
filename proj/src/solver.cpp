#include "mmdp/solver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mmdp {

double q_value(const Mdp& mdp, int state, int action_index, const std::vector<double>& values) {
    const ActionRow& row = mdp.rows[state][action_index];
    double q = row.reward;
    for (const Transition& t : row.transitions) q += mdp.lambda * t.prob * values[t.state];
    return q;
}

namespace {

// One Bellman sweep; returns the sup-norm change and fills greedy indices.
double bellman_sweep(const Mdp& mdp, std::vector<double>& values, std::vector<int>& policy) {
    double delta = 0.0;
    for (int s = 0; s < mdp.num_states(); ++s) {
        if (mdp.rows[s].empty()) throw std::invalid_argument("state with no actions");
        double best = -std::numeric_limits<double>::infinity();
        int arg = 0;
        for (int a = 0; a < static_cast<int>(mdp.rows[s].size()); ++a) {
            double q = q_value(mdp, s, a, values);
            if (q > best) {
                best = q;
                arg = a;
            }
        }
        delta = std::max(delta, std::abs(best - values[s]));
        values[s] = best;
        policy[s] = arg;
    }
    return delta;
}

}  // namespace

SolveResult value_iteration(const Mdp& mdp, double tol, int max_iter) {
    SolveResult r;
    r.values.assign(mdp.num_states(), 0.0);
    r.policy.assign(mdp.num_states(), 0);
    const double stop = tol * (1.0 - mdp.lambda) / (2.0 * mdp.lambda);
    for (r.iterations = 0; r.iterations < max_iter; ++r.iterations) {
        double delta = bellman_sweep(mdp, r.values, r.policy);
        if (delta <= stop) {
            ++r.iterations;
            return r;
        }
    }
    throw std::runtime_error("value iteration failed to converge");
}

std::vector<double> policy_evaluation(const Mdp& mdp, const std::vector<int>& policy) {
    const int n = mdp.num_states();
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd b(n);
    for (int s = 0; s < n; ++s) {
        const ActionRow& row = mdp.rows[s][policy[s]];
        b(s) = row.reward;
        for (const Transition& t : row.transitions) A(s, t.state) -= mdp.lambda * t.prob;
    }
    Eigen::VectorXd v = A.partialPivLu().solve(b);
    return std::vector<double>(v.data(), v.data() + n);
}

SolveResult policy_iteration(const Mdp& mdp) {
    SolveResult r;
    r.policy.assign(mdp.num_states(), 0);
    for (r.iterations = 1;; ++r.iterations) {
        r.values = policy_evaluation(mdp, r.policy);
        bool stable = true;
        for (int s = 0; s < mdp.num_states(); ++s) {
            double best = q_value(mdp, s, r.policy[s], r.values);
            int arg = r.policy[s];
            for (int a = 0; a < static_cast<int>(mdp.rows[s].size()); ++a) {
                double q = q_value(mdp, s, a, r.values);
                if (q > best + 1e-12 * (1.0 + std::abs(best))) {
                    best = q;
                    arg = a;
                }
            }
            if (arg != r.policy[s]) {
                r.policy[s] = arg;
                stable = false;
            }
        }
        if (stable) return r;
        if (r.iterations > 10000) throw std::runtime_error("policy iteration failed to converge");
    }
}

double bellman_residual(const Mdp& mdp, const std::vector<double>& values) {
    double res = 0.0;
    for (int s = 0; s < mdp.num_states(); ++s) {
        double best = -std::numeric_limits<double>::infinity();
        for (int a = 0; a < static_cast<int>(mdp.rows[s].size()); ++a)
            best = std::max(best, q_value(mdp, s, a, values));
        res = std::max(res, std::abs(best - values[s]));
    }
    return res;
}

std::vector<int> greedy_actions(const Mdp& mdp, int state, const std::vector<double>& values,
                                double rel_tol) {
    double best = -std::numeric_limits<double>::infinity();
    std::vector<double> qs(mdp.rows[state].size());
    for (int a = 0; a < static_cast<int>(mdp.rows[state].size()); ++a) {
        qs[a] = q_value(mdp, state, a, values);
        best = std::max(best, qs[a]);
    }
    const double tol = rel_tol * std::abs(best);
    std::vector<int> out;
    for (int a = 0; a < static_cast<int>(qs.size()); ++a)
        if (qs[a] >= best - tol) out.push_back(a);
    return out;
}

SolveResult solve_by_enumeration(const Mdp& mdp) {
    // The optimal value function dominates every policy's value pointwise
    // and is attained by some deterministic stationary policy, so the
    // componentwise max over all policies equals v*.
    const int n = mdp.num_states();
    std::vector<int> policy(n, 0);
    SolveResult best;
    best.values.assign(n, -std::numeric_limits<double>::infinity());
    best.policy.assign(n, 0);
    while (true) {
        std::vector<double> v = policy_evaluation(mdp, policy);
        for (int s = 0; s < n; ++s) {
            if (v[s] > best.values[s]) {
                best.values[s] = v[s];
                best.policy[s] = policy[s];
            }
        }
        ++best.iterations;
        int s = 0;
        while (s < n) {
            if (++policy[s] < static_cast<int>(mdp.rows[s].size())) break;
            policy[s] = 0;
            ++s;
        }
        if (s == n) break;
    }
    return best;
}

}  // namespace mmdp
