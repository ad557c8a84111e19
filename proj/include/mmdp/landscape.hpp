#pragma once

#include <optional>
#include <vector>

#include "mmdp/lattice.hpp"
#include "mmdp/params.hpp"
#include "mmdp/verify.hpp"

namespace mmdp {

/// Caps on the configuration-graph searches; the move graph is far too
/// large to build, so only a bounded low-energy shell is explored.
struct SearchBounds {
    int max_particles = 14;
    double max_energy_above_start = 3.0;
    long long max_states_explored = 10000000;
};

struct StabilityResult {
    double level = 0.0;        ///< bottleneck energy minus the start energy
    SiteConfig bottleneck;     ///< a maximal-energy configuration on the path
    SiteConfig final_config;   ///< the first configuration found below the start energy
    int path_length = 0;       ///< number of moves on the optimal path
    long long states_explored = 0;
};

/// Minimax path energy between two configurations over the move graph
/// (exchanges, plus particle creation at isolated empty sites and removal of
/// free particles). Best-first bottleneck search; nullopt when b is not
/// reachable within the bounds. Throws std::runtime_error when the state cap
/// is exceeded.
std::optional<double> communication_height(const SiteConfig& a, const SiteConfig& b,
                                           const SearchBounds& bounds, const ModelParams& params);

/// Stability level V of a configuration: the bottleneck energy, relative to
/// the start, of the easiest path to any configuration of strictly lower
/// energy. nullopt when no such configuration is reachable within bounds.
std::optional<StabilityResult> stability_level(const SiteConfig& eta, const SearchBounds& bounds,
                                               const ModelParams& params);

/// All connected particle shapes with cell count in [1, max_particles] that
/// fit on the L x L periodic lattice, deduplicated up to translation.
std::vector<SiteConfig> enumerate_single_clusters(int L, int max_particles);

/// Desk-scale check of the robustness characterization: for every
/// single-cluster shape with at most bounds.max_particles particles,
/// the stability-level dichotomy (V > 2U, or V = 2U with a 2-wide
/// circumscribing rectangle) must coincide with the shape being a rectangle
/// of minimal side >= 2.
VerificationReport verify_lemma_small(int L_small, const SearchBounds& bounds,
                                      const ModelParams& params);

}  // namespace mmdp
