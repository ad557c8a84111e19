#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mmdp/params.hpp"

namespace mmdp {

enum class Boundary { Open, Periodic };

struct Site {
    int x = 0;
    int y = 0;
    friend bool operator==(Site a, Site b) { return a.x == b.x && a.y == b.y; }
    friend auto operator<=>(Site a, Site b) = default;
};

/// A single elementary move of the dynamics.
///
/// Exchange moves a particle from an occupied site to an empty neighbour.
/// Create / Annihilate exchange a particle with the reservoir: under OPEN
/// boundary conditions these live on the border of the box; under PERIODIC
/// they model bulk injection/removal and are used by the relaxation rules
/// and the landscape searches, not by the kinetic bond-selection step.
enum class MoveKind { Exchange, Create, Annihilate };

struct Move {
    MoveKind kind = MoveKind::Exchange;
    Site from;  ///< occupied site (Exchange, Annihilate) or target site (Create)
    Site to;    ///< empty destination (Exchange only)
    friend bool operator==(const Move&, const Move&) = default;
};

/// Occupancy configuration on a W x H lattice with open or periodic
/// boundary conditions.
class SiteConfig {
public:
    SiteConfig() = default;
    SiteConfig(int width, int height, Boundary boundary);

    int width() const { return w_; }
    int height() const { return h_; }
    Boundary boundary() const { return boundary_; }
    int particle_count() const;

    bool occupied(int x, int y) const { return occ_[idx(x, y)] != 0; }
    bool occupied(Site s) const { return occupied(s.x, s.y); }
    void set(int x, int y, bool value) { occ_[idx(x, y)] = value ? 1 : 0; }
    void set(Site s, bool value) { set(s.x, s.y, value); }

    /// Neighbour in direction d (0=+x, 1=+y, 2=-x, 3=-y); nullopt when the
    /// step leaves an open box.
    std::optional<Site> neighbor(Site s, int d) const;
    /// Number of occupied neighbours of a site.
    int occupied_neighbors(Site s) const;

    /// Total energy: -U per occupied nearest-neighbour pair plus Delta per
    /// particle, returned as an exact integer pair.
    Energy hamiltonian() const;

    /// Exact energy change of applying a move, computed incrementally.
    Energy energy_delta(const Move& m) const;
    void apply(const Move& m);

    /// Kinetic bond set driving the Metropolis dynamics: all particle
    /// exchanges (enumerated with the particle-movement orientation,
    /// occupied -> empty), plus reservoir moves on the border for OPEN
    /// boundary conditions. Deterministic row-major order.
    std::vector<Move> kinetic_moves() const;

    /// Kinetic moves that do not increase the energy. These are the only
    /// moves that survive the zero-temperature limit.
    std::vector<Move> susceptible_moves() const;

    /// Connected clusters of particles (4-neighbour adjacency, respecting
    /// the boundary mode), each as a sorted site list.
    std::vector<std::vector<Site>> clusters() const;

    /// If the configuration consists of exactly one rectangular cluster with
    /// both sides >= 2, returns (width, height) of that rectangle. Under
    /// PERIODIC boundary conditions wrap-around rectangles (bands and the
    /// full torus) are recognized, with a full-circumference side reported
    /// as the lattice side length.
    std::optional<std::pair<int, int>> classify_robust() const;

    /// Dihedral transform of a square configuration: k in [0,8), low two
    /// bits = number of 90-degree rotations, bit 2 = horizontal mirror.
    SiteConfig transformed(int k) const;

    /// Plain-text grid format: header "L=<n> boundary=<open|periodic>"
    /// followed by h rows of '.'/'#', top row first.
    std::string to_text() const;
    static SiteConfig from_text(const std::string& text);
    std::string to_json() const;
    static SiteConfig from_json(const std::string& text);

    friend bool operator==(const SiteConfig&, const SiteConfig&) = default;

private:
    int idx(int x, int y) const;
    int w_ = 0;
    int h_ = 0;
    Boundary boundary_ = Boundary::Periodic;
    std::vector<std::uint8_t> occ_;
};

/// Builds a w x h rectangle of particles with its lower-left corner at
/// (x0, y0) on an L x L lattice.
SiteConfig make_rectangle(int L, Boundary boundary, int x0, int y0, int w, int h);

}  // namespace mmdp
