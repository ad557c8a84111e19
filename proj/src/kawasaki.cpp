#include "mmdp/kawasaki.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

namespace mmdp {

namespace {

/// Largest cluster survives; everything else is returned to the reservoir.
void prune_to_largest_cluster(SiteConfig& cfg) {
    auto cl = cfg.clusters();
    if (cl.empty()) throw std::runtime_error("relaxation reached the empty configuration");
    size_t keep = 0;
    for (size_t i = 1; i < cl.size(); ++i)
        if (cl[i].size() > cl[keep].size()) keep = i;
    for (size_t i = 0; i < cl.size(); ++i) {
        if (i == keep) continue;
        for (const Site& s : cl[i]) cfg.set(s, false);
    }
}

/// Cyclic bounding run of the flagged axis indices; nullopt when flagged
/// indices are not contiguous or cover the whole axis.
std::optional<std::pair<int, int>> bounding_run(const std::vector<char>& used, int n) {
    int count = 0;
    for (char c : used) count += c;
    if (count == 0 || count == n) return std::nullopt;
    int shift = 0;
    while (used[(shift + n - 1) % n]) ++shift;
    int first = -1, last = -1;
    for (int k = 0; k < n; ++k) {
        if (used[(k + shift) % n]) {
            if (first < 0) first = k;
            last = k;
        }
    }
    if (last - first + 1 != count) return std::nullopt;
    return std::make_pair((first + shift) % n, count);
}

/// Attempts the corner slide in the canonical orientation: an edge column
/// at the left of the bounding box whose top cell protrudes one row above a
/// completely full body rectangle. If the column's particles fit along the
/// protruding row (bar strictly shorter than the receiving side), they are
/// relocated around the corner and the caller's fill pass completes the row.
bool try_slide_canonical(SiteConfig& cfg) {
    const int n = cfg.width();
    std::vector<char> colUsed(n, 0), rowUsed(n, 0);
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x)
            if (cfg.occupied(x, y)) { colUsed[x] = 1; rowUsed[y] = 1; }
    auto cols = bounding_run(colUsed, n);
    auto rows = bounding_run(rowUsed, n);
    if (!cols || !rows) return false;  // wraps a full axis: no corner exists
    const auto [cx, cw] = *cols;
    const auto [cy, ch] = *rows;
    if (cw < 2 || ch < 3) return false;
    auto occ = [&](int u, int v) { return cfg.occupied((cx + u) % n, (cy + v) % n); };
    if (!occ(0, ch - 1)) return false;  // no protruding corner cell
    for (int u = 1; u < cw; ++u)
        if (occ(u, ch - 1)) return false;  // top row must protrude only at the edge
    for (int v = 0; v < ch - 1; ++v)
        for (int u = 1; u < cw; ++u)
            if (!occ(u, v)) return false;  // body must be a full rectangle
    int bar = 0;
    for (int v = 0; v < ch - 1; ++v) bar += occ(0, v) ? 1 : 0;
    ++bar;  // the protruding cell itself
    if (bar > cw - 1) return false;  // bar does not fit along the receiving side
    for (int v = 0; v < ch; ++v) cfg.set((cx + 0) % n, (cy + v) % n, false);
    for (int u = 1; u <= bar; ++u) cfg.set((cx + u) % n, (cy + ch - 1) % n, true);
    return true;
}

/// The canonical slide pattern checked in all eight dihedral orientations.
/// Elements with the mirror bit are involutions; pure rotations invert as
/// 4 - r.
void try_slide(SiteConfig& cfg) {
    for (int k = 0; k < 8; ++k) {
        SiteConfig c = cfg.transformed(k);
        if (try_slide_canonical(c)) {
            const int inverse = (k & 4) ? k : ((4 - (k & 3)) & 3);
            cfg = c.transformed(inverse);
            return;
        }
    }
}

/// Inserts particles at every site whose attachment gains at least two
/// bonds, cascading until exhaustion.
void fill_two_bond_sites(SiteConfig& cfg) {
    std::deque<Site> queue;
    for (int y = 0; y < cfg.height(); ++y)
        for (int x = 0; x < cfg.width(); ++x)
            if (!cfg.occupied(x, y)) queue.push_back({x, y});
    // Each site re-enters the queue at most once per newly filled neighbour,
    // so the scan terminates.
    while (!queue.empty()) {
        Site s = queue.front();
        queue.pop_front();
        if (cfg.occupied(s) || cfg.occupied_neighbors(s) < 2) continue;
        cfg.set(s, true);
        for (int d = 0; d < 4; ++d) {
            auto t = cfg.neighbor(s, d);
            if (t && !cfg.occupied(*t)) queue.push_back(*t);
        }
    }
}

}  // namespace

std::optional<Move> metropolis_step(SiteConfig& cfg, const ModelParams& params, RngStream& rng) {
    Move m;
    if (cfg.boundary() == Boundary::Periodic) {
        // A uniform (site, direction) draw is a uniform draw from the
        // oriented torus bond set; a bond between equal occupancies is an
        // idle proposal.
        const int W = cfg.width(), H = cfg.height();
        const Site s{static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(W))),
                     static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(H)))};
        const Site t = *cfg.neighbor(s, static_cast<int>(rng.uniform_int(4)));
        if (cfg.occupied(s) == cfg.occupied(t)) return std::nullopt;
        m = {MoveKind::Exchange, cfg.occupied(s) ? s : t, cfg.occupied(s) ? t : s};
    } else {
        const auto moves = cfg.kinetic_moves();
        if (moves.empty()) return std::nullopt;
        m = moves[rng.uniform_int(moves.size())];
    }
    const double dH = cfg.energy_delta(m).value(params);
    if (dH > 0 && rng.next_double() >= std::exp(-params.beta * dH)) return std::nullopt;
    cfg.apply(m);
    return m;
}

Move first_interchange(SiteConfig& cfg, DynamicsMode mode, const ModelParams& params,
                       RngStream& rng) {
    if (mode == DynamicsMode::ZeroTemperature) {
        const auto moves = cfg.susceptible_moves();
        if (moves.empty()) throw std::runtime_error("no susceptible move available");
        const Move m = moves[rng.uniform_int(moves.size())];
        cfg.apply(m);
        return m;
    }
    for (long long attempt = 0; attempt < 100'000'000LL; ++attempt) {
        if (auto m = metropolis_step(cfg, params, rng)) return *m;
    }
    throw std::runtime_error("no interchange accepted within the attempt budget");
}

std::pair<int, int> relax_to_robust(SiteConfig& cfg) {
    prune_to_largest_cluster(cfg);
    try_slide(cfg);
    fill_two_bond_sites(cfg);
    auto rect = cfg.classify_robust();
    if (!rect)
        throw std::runtime_error("relaxation did not reach a robust configuration:\n" + cfg.to_text());
    return *rect;
}

}  // namespace mmdp
