#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "mmdp/auxmdp.hpp"
#include "mmdp/kawasaki.hpp"
#include "mmdp/landscape.hpp"
#include "mmdp/lattice.hpp"
#include "mmdp/solver.hpp"
#include "mmdp/verify.hpp"

namespace {

using namespace mmdp;

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

struct RunConfig {
    ModelParams params;
    std::string reward = "r1";
    std::uint64_t seed = 12345;
    double tol = 1e-10;
    std::string format = "table";
    std::string output;
    int threads = 0;  // 0 = automatic; results never depend on this
};

RewardKind reward_kind(const RunConfig& cfg) {
    if (cfg.reward == "r1") return RewardKind::R1;
    if (cfg.reward == "r2") return RewardKind::R2;
    throw CLI::ValidationError("--reward", "reward must be r1 or r2");
}

void add_common_flags(CLI::App* cmd, RunConfig& cfg, bool with_reward = true) {
    cmd->add_option("--L", cfg.params.L, "lattice side length")->capture_default_str();
    cmd->add_option("--lambda", cfg.params.lambda, "discount factor in (0,1)")
        ->capture_default_str();
    cmd->add_option("--U", cfg.params.U, "pair binding energy")->capture_default_str();
    cmd->add_option("--delta", cfg.params.delta, "chemical-potential cost per particle")
        ->capture_default_str();
    cmd->add_option("--beta", cfg.params.beta, "inverse temperature")->capture_default_str();
    cmd->add_option("--seed", cfg.seed,
                    "random seed (METASTABLE_MDP_SEED environment variable overrides)")
        ->capture_default_str();
    cmd->add_option("--tol", cfg.tol, "value-iteration tolerance")->capture_default_str();
    cmd->add_option("--format", cfg.format, "output format: table, csv or json")
        ->check(CLI::IsMember({"table", "csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--output", cfg.output, "write output to this file instead of stdout");
    cmd->add_option("--threads", cfg.threads, "worker-thread cap (never affects results)")
        ->capture_default_str();
    if (with_reward)
        cmd->add_option("--reward", cfg.reward, "reward specification: r1 or r2")
            ->check(CLI::IsMember({"r1", "r2"}))
            ->capture_default_str();
}

void apply_seed_env(RunConfig& cfg) {
    if (const char* env = std::getenv("METASTABLE_MDP_SEED")) cfg.seed = std::strtoull(env, nullptr, 10);
}

// Writes to --output when given, else stdout.
void emit(const RunConfig& cfg, const std::string& text) {
    if (cfg.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream os(cfg.output, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file: " + cfg.output);
    os << text;
}

std::string solve_output(const RunConfig& cfg, const AuxMdp& aux, const SolveResult& sol) {
    std::ostringstream os;
    auto action_name = [&](size_t s) { return to_string(aux.actions[s][sol.policy[s]]); };
    if (cfg.format == "json") {
        os << "{\n  \"states\": [\n";
        for (size_t s = 0; s < aux.states.size(); ++s) {
            os << "    {\"i\": " << aux.states[s].i << ", \"j\": " << aux.states[s].j
               << ", \"value\": " << fmt(sol.values[s]) << ", \"action\": \"" << action_name(s)
               << "\"}" << (s + 1 < aux.states.size() ? "," : "") << "\n";
        }
        os << "  ],\n  \"iterations\": " << sol.iterations << "\n}\n";
    } else if (cfg.format == "csv") {
        os << "# metastable-mdp v1\ni,j,value,action\n";
        for (size_t s = 0; s < aux.states.size(); ++s)
            os << aux.states[s].i << ',' << aux.states[s].j << ',' << fmt(sol.values[s]) << ','
               << action_name(s) << '\n';
    } else {
        os << "state\tvalue\taction\n";
        for (size_t s = 0; s < aux.states.size(); ++s)
            os << "(" << aux.states[s].i << "," << aux.states[s].j << ")\t" << fmt(sol.values[s])
               << "\t" << action_name(s) << "\n";
        os << "iterations: " << sol.iterations << "\n";
    }
    return os.str();
}

int cmd_solve(const RunConfig& cfg) {
    AuxMdp aux = build_aux_mdp(cfg.params.L, reward_kind(cfg), cfg.params.lambda, cfg.params.U);
    SolveResult sol = value_iteration(aux.mdp, cfg.tol);
    emit(cfg, solve_output(cfg, aux, sol));
    return 0;
}

int cmd_verify(const RunConfig& cfg, const std::string& suite, long long episodes) {
    const int L = cfg.params.L;
    const double lambda = cfg.params.lambda, U = cfg.params.U;
    VerificationReport rep;
    if (suite == "theorems" || suite == "all") {
        rep.merge(check_theorem_r1(L, lambda));
        rep.merge(check_theorem_r2(L, lambda, U));
    }
    if (suite == "closed-forms" || suite == "all") rep.merge(check_closed_forms(L, lambda, U));
    if (suite == "recursions" || suite == "all") rep.merge(check_recursions(L, lambda, U));
    if (suite == "inequalities" || suite == "all") rep.merge(check_inequalities(L, lambda, U));
    if (suite == "kernel" || suite == "all") rep.merge(check_kernel_oracle(L));
    if (suite == "mc" || suite == "all") {
        std::cout << "seed: " << cfg.seed << "\n";
        std::vector<AuxState> starts{{2, 2}, {2, L - 2}, {L, L - 2}};
        rep.merge(check_mc_consistency(L, lambda, reward_kind(cfg), U, starts, episodes,
                                       cfg.seed));
    }
    emit(cfg, cfg.format == "json" ? rep.to_json() + "\n" : rep.to_table());
    return rep.all_passed() ? 0 : 1;
}

int cmd_simulate(const RunConfig& cfg, int start_i, int start_j, long long episodes,
                 const std::string& mode_name, bool log_trajectory) {
    const int L = cfg.params.L;
    AuxMdp aux = build_aux_mdp(L, reward_kind(cfg), cfg.params.lambda, cfg.params.U);
    SolveResult sol = value_iteration(aux.mdp, cfg.tol);
    auto policy = [&](AuxState s) {
        int idx = aux.index_of(s);
        return aux.actions[idx][sol.policy[idx]];
    };
    DynamicsMode mode =
        mode_name == "finite-beta" ? DynamicsMode::FiniteBeta : DynamicsMode::ZeroTemperature;
    std::cout << "seed: " << cfg.seed << "\n";
    std::ostringstream log;
    SimulationStats st =
        simulate_controlled(L, reward_kind(cfg), cfg.params.lambda, cfg.params.U, policy,
                            {start_i, start_j}, mode, cfg.params, cfg.seed, episodes,
                            log_trajectory ? &log : nullptr);
    std::ostringstream os;
    if (log_trajectory) os << log.str();
    os << "episodes: " << st.episodes << "\nmean_return: " << fmt(st.mean)
       << "\nstd_error: " << fmt(st.std_error) << "\nmean_epochs: " << fmt(st.mean_epochs)
       << "\nsolver_value: " << fmt(sol.values[aux.index_of({start_i, start_j})]) << "\n";
    emit(cfg, os.str());
    return 0;
}

int cmd_derive_kernel(const RunConfig& cfg, bool check) {
    const int L = cfg.params.L;
    std::ostringstream os;
    os << "# metastable-mdp v1\ni,j,action,i2,j2,num,den\n";
    bool all_equal = true;
    for (const AuxState& s : aux_states(L)) {
        for (AuxAction a : aux_action_set(s, L)) {
            std::vector<std::pair<AuxState, Rational>> derived;
            try {
                derived = derive_kernel_geometric(s, a, L);
            } catch (const std::exception&) {
                os << s.i << ',' << s.j << ',' << to_string(a) << ",,,,\n";
                if (check) all_equal = false;
                continue;
            }
            for (const auto& [t, p] : derived)
                os << s.i << ',' << s.j << ',' << to_string(a) << ',' << t.i << ',' << t.j << ','
                   << p.num << ',' << p.den << '\n';
            if (check) {
                auto expected = aux_kernel(s, a, L);
                auto by_state = [](const auto& x, const auto& y) { return x.first < y.first; };
                std::sort(expected.begin(), expected.end(), by_state);
                std::sort(derived.begin(), derived.end(), by_state);
                if (expected != derived) all_equal = false;
            }
        }
    }
    emit(cfg, os.str());
    if (check && !all_equal) {
        std::cerr << "derived kernel differs from the hard-coded kernel\n";
        return 1;
    }
    return 0;
}

int cmd_stability(const RunConfig& cfg, const std::string& input, int max_particles,
                  double max_energy, long long max_states) {
    std::ifstream is(input);
    if (!is) throw std::runtime_error("cannot open configuration file: " + input);
    std::stringstream buf;
    buf << is.rdbuf();
    SiteConfig eta = SiteConfig::from_text(buf.str());
    SearchBounds bounds{max_particles, max_energy, max_states};
    std::optional<StabilityResult> res = stability_level(eta, bounds, cfg.params);
    std::ostringstream os;
    if (!res) {
        os << "stability_level: unreached within bounds\n";
    } else {
        os << "stability_level: " << fmt(res->level) << "\npath_length: " << res->path_length
           << "\nstates_explored: " << res->states_explored << "\nbottleneck:\n"
           << res->bottleneck.to_text();
    }
    emit(cfg, os.str());
    return 0;
}

int cmd_export(const RunConfig& cfg, const std::string& kind, long long episodes, int start_i,
               int start_j) {
    const int L = cfg.params.L;
    if (kind == "kernel") {
        std::ostringstream os;
        export_kernel_csv(os, L);
        emit(cfg, os.str());
        return 0;
    }
    AuxMdp aux = build_aux_mdp(L, reward_kind(cfg), cfg.params.lambda, cfg.params.U);
    SolveResult sol = value_iteration(aux.mdp, cfg.tol);
    std::ostringstream os;
    if (kind == "values") {
        os << "# metastable-mdp v1\ni,j,value\n";
        for (size_t s = 0; s < aux.states.size(); ++s)
            os << aux.states[s].i << ',' << aux.states[s].j << ',' << fmt(sol.values[s]) << '\n';
    } else if (kind == "policy") {
        os << "# metastable-mdp v1\ni,j,action\n";
        for (size_t s = 0; s < aux.states.size(); ++s)
            os << aux.states[s].i << ',' << aux.states[s].j << ','
               << to_string(aux.actions[s][sol.policy[s]]) << '\n';
    } else {  // trajectories
        auto policy = [&](AuxState s) {
            int idx = aux.index_of(s);
            return aux.actions[idx][sol.policy[idx]];
        };
        std::cout << "seed: " << cfg.seed << "\n";
        std::ostringstream log;
        simulate_controlled(L, reward_kind(cfg), cfg.params.lambda, cfg.params.U, policy,
                            {start_i, start_j}, DynamicsMode::ZeroTemperature, cfg.params,
                            cfg.seed, episodes, &log);
        os << "# metastable-mdp v1\n" << log.str();
    }
    emit(cfg, os.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"metastable-mdp: controlled lattice-gas dynamics as a reduced MDP"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string suite = "all", mode_name = "zero-t", kind = "kernel", input;
    long long episodes = 10000;
    int start_i = 2, start_j = 2;
    bool check = false, log_trajectory = false;
    int max_particles = 14;
    double max_energy = 3.0;
    long long max_states = 10000000;

    CLI::App* solve = app.add_subcommand("solve", "solve the reduced MDP by value iteration");
    add_common_flags(solve, cfg);

    CLI::App* verify = app.add_subcommand("verify", "run verification suites");
    add_common_flags(verify, cfg);
    verify->add_option("--suite", suite,
                       "theorems, closed-forms, recursions, inequalities, kernel, mc or all")
        ->check(CLI::IsMember({"theorems", "closed-forms", "recursions", "inequalities", "kernel",
                               "mc", "all"}))
        ->capture_default_str();
    verify->add_option("--episodes", episodes, "Monte Carlo episodes for the mc suite")
        ->capture_default_str();

    CLI::App* simulate = app.add_subcommand("simulate", "controlled lattice-level simulation");
    add_common_flags(simulate, cfg);
    simulate->add_option("--episodes", episodes, "number of episodes")->capture_default_str();
    simulate->add_option("--start-i", start_i, "start state width")->capture_default_str();
    simulate->add_option("--start-j", start_j, "start state height")->capture_default_str();
    simulate->add_option("--mode", mode_name, "dynamics mode: zero-t or finite-beta")
        ->check(CLI::IsMember({"zero-t", "finite-beta"}))
        ->capture_default_str();
    simulate->add_flag("--log-trajectory", log_trajectory, "print the first episode move by move");

    CLI::App* derive = app.add_subcommand(
        "derive-kernel", "derive the transition kernel from lattice geometry");
    add_common_flags(derive, cfg, false);
    derive->add_flag("--check", check, "exit 1 if the derived kernel differs from the model");

    CLI::App* stability = app.add_subcommand("stability", "energy-barrier search");
    add_common_flags(stability, cfg, false);
    stability->add_option("config", input, "configuration file (plain-text grid)")->required();
    stability->add_option("--max-particles", max_particles, "particle cap")->capture_default_str();
    stability->add_option("--max-energy", max_energy, "energy ceiling above the start")
        ->capture_default_str();
    stability->add_option("--max-states", max_states, "explored-state cap")->capture_default_str();

    CLI::App* exp = app.add_subcommand("export", "write kernel/values/policy/trajectory files");
    add_common_flags(exp, cfg);
    exp->add_option("--kind", kind, "kernel, values, policy or trajectories")
        ->check(CLI::IsMember({"kernel", "values", "policy", "trajectories"}))
        ->capture_default_str();
    exp->add_option("--episodes", episodes, "episodes for trajectory export")
        ->capture_default_str();
    exp->add_option("--start-i", start_i, "start state width")->capture_default_str();
    exp->add_option("--start-j", start_j, "start state height")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // 0 for --help, 2 for usage errors
    }
    apply_seed_env(cfg);

    try {
        cfg.params.validate();
        if (solve->parsed()) return cmd_solve(cfg);
        if (verify->parsed()) return cmd_verify(cfg, suite, episodes);
        if (simulate->parsed())
            return cmd_simulate(cfg, start_i, start_j, episodes, mode_name, log_trajectory);
        if (derive->parsed()) return cmd_derive_kernel(cfg, check);
        if (stability->parsed())
            return cmd_stability(cfg, input, max_particles, max_energy, max_states);
        if (exp->parsed()) return cmd_export(cfg, kind, episodes, start_i, start_j);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
