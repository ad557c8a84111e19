#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "mmdp/lattice.hpp"
#include "mmdp/rng.hpp"

namespace mmdp {

enum class DynamicsMode { ZeroTemperature, FiniteBeta };

/// One Metropolis proposal: a bond chosen uniformly from the oriented bond
/// set; a proposal between equal occupancies is an idle step. Accepted
/// exchanges are applied in place and returned; rejected or idle proposals
/// return nullopt.
std::optional<Move> metropolis_step(SiteConfig& cfg, const ModelParams& params, RngStream& rng);

/// Runs the dynamics until the first particle interchange occurs and applies
/// it. In the zero-temperature limit every non-susceptible move has
/// vanishing acceptance probability, so ZeroTemperature samples uniformly
/// from the susceptible moves; FiniteBeta iterates Metropolis proposals at
/// the given beta until one is accepted.
Move first_interchange(SiteConfig& cfg, DynamicsMode mode, const ModelParams& params,
                       RngStream& rng);

/// Deterministic relaxation of a post-interchange configuration to the next
/// robust configuration:
///  1. particles detached from the (largest) cluster are removed;
///  2. if a bar at the cluster edge can slide around a corner at zero cost
///     (its particle count fits along the receiving side), it does so once;
///  3. particles are inserted wherever attachment gains at least two bonds,
///     until no such site remains.
/// Returns the rectangle dimensions (width, height) of the resulting robust
/// configuration and leaves cfg relaxed.
std::pair<int, int> relax_to_robust(SiteConfig& cfg);

}  // namespace mmdp
