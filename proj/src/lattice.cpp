#include "mmdp/lattice.hpp"

#include <algorithm>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace mmdp {

namespace {
constexpr int kDx[4] = {1, 0, -1, 0};
constexpr int kDy[4] = {0, 1, 0, -1};

/// Finds the (start, length) of the contiguous run covering all flagged
/// indices, cyclically when wrap is set. Returns (0, n) when all indices are
/// flagged, nullopt when the flagged set is not a single run.
std::optional<std::pair<int, int>> contiguous_run(const std::vector<char>& used, bool wrap) {
    const int n = static_cast<int>(used.size());
    int count = std::count(used.begin(), used.end(), 1);
    if (count == 0) return std::nullopt;
    if (count == n) return std::make_pair(0, n);
    // Rotate so that an empty index sits at the end, then the run must be a
    // single block. Without wrap the block must not cross the boundary.
    int shift = 0;
    if (wrap) {
        while (used[(shift + n - 1) % n]) ++shift;
    }
    int first = -1, last = -1;
    for (int k = 0; k < n; ++k) {
        const int i = (k + shift) % n;
        if (used[i]) {
            if (first < 0) first = k;
            last = k;
        }
    }
    if (last - first + 1 != count) return std::nullopt;
    return std::make_pair((first + shift) % n, count);
}
}  // namespace

SiteConfig::SiteConfig(int width, int height, Boundary boundary)
    : w_(width), h_(height), boundary_(boundary), occ_(static_cast<size_t>(width) * height, 0) {
    if (width <= 0 || height <= 0) throw std::invalid_argument("lattice dimensions must be positive");
}

int SiteConfig::idx(int x, int y) const {
    if (x < 0 || x >= w_ || y < 0 || y >= h_) throw std::out_of_range("site outside lattice");
    return y * w_ + x;
}

int SiteConfig::particle_count() const {
    return static_cast<int>(std::count(occ_.begin(), occ_.end(), 1));
}

std::optional<Site> SiteConfig::neighbor(Site s, int d) const {
    int x = s.x + kDx[d];
    int y = s.y + kDy[d];
    if (boundary_ == Boundary::Periodic) {
        x = (x + w_) % w_;
        y = (y + h_) % h_;
        return Site{x, y};
    }
    if (x < 0 || x >= w_ || y < 0 || y >= h_) return std::nullopt;
    return Site{x, y};
}

int SiteConfig::occupied_neighbors(Site s) const {
    int n = 0;
    for (int d = 0; d < 4; ++d) {
        auto t = neighbor(s, d);
        if (t && occupied(*t)) ++n;
    }
    return n;
}

Energy SiteConfig::hamiltonian() const {
    long long pairs = 0, particles = 0;
    for (int y = 0; y < h_; ++y) {
        for (int x = 0; x < w_; ++x) {
            if (!occupied(x, y)) continue;
            ++particles;
            // Count each pair once via the +x and +y directions.
            for (int d = 0; d < 2; ++d) {
                auto t = neighbor({x, y}, d);
                if (t && occupied(*t)) ++pairs;
            }
        }
    }
    return {-pairs, particles};
}

Energy SiteConfig::energy_delta(const Move& m) const {
    switch (m.kind) {
        case MoveKind::Exchange: {
            if (!occupied(m.from) || occupied(m.to))
                throw std::invalid_argument("exchange requires occupied->empty");
            int broken = occupied_neighbors(m.from);
            int formed = 0;
            for (int d = 0; d < 4; ++d) {
                auto t = neighbor(m.to, d);
                if (t && *t != m.from && occupied(*t)) ++formed;
            }
            return {broken - formed, 0};
        }
        case MoveKind::Create:
            if (occupied(m.from)) throw std::invalid_argument("create requires an empty site");
            return {-occupied_neighbors(m.from), 1};
        case MoveKind::Annihilate:
            if (!occupied(m.from)) throw std::invalid_argument("annihilate requires a particle");
            return {occupied_neighbors(m.from), -1};
    }
    throw std::logic_error("unreachable");
}

void SiteConfig::apply(const Move& m) {
    switch (m.kind) {
        case MoveKind::Exchange:
            if (!occupied(m.from) || occupied(m.to))
                throw std::invalid_argument("exchange requires occupied->empty");
            set(m.from, false);
            set(m.to, true);
            break;
        case MoveKind::Create:
            if (occupied(m.from)) throw std::invalid_argument("create requires an empty site");
            set(m.from, true);
            break;
        case MoveKind::Annihilate:
            if (!occupied(m.from)) throw std::invalid_argument("annihilate requires a particle");
            set(m.from, false);
            break;
    }
}

std::vector<Move> SiteConfig::kinetic_moves() const {
    std::vector<Move> out;
    for (int y = 0; y < h_; ++y) {
        for (int x = 0; x < w_; ++x) {
            const Site s{x, y};
            if (occupied(s)) {
                for (int d = 0; d < 4; ++d) {
                    auto t = neighbor(s, d);
                    if (t && !occupied(*t)) out.push_back({MoveKind::Exchange, s, *t});
                }
            }
            if (boundary_ == Boundary::Open &&
                (x == 0 || y == 0 || x == w_ - 1 || y == h_ - 1)) {
                if (occupied(s)) out.push_back({MoveKind::Annihilate, s, s});
                else out.push_back({MoveKind::Create, s, s});
            }
        }
    }
    return out;
}

std::vector<Move> SiteConfig::susceptible_moves() const {
    std::vector<Move> out;
    for (const Move& m : kinetic_moves()) {
        const Energy de = energy_delta(m);
        // A move changes the particle count by at most one, so de = a*U + b*D
        // with b in {-1,0,1}. Over the whole metastable regime D in (1.5U, 2U)
        // the sign of de is then constant and decided by the two endpoints:
        // de <= 0 throughout iff 2a+3b <= 0 and a+2b <= 0 (exact integers).
        if (2 * de.u + 3 * de.d <= 0 && de.u + 2 * de.d <= 0) out.push_back(m);
    }
    return out;
}

std::vector<std::vector<Site>> SiteConfig::clusters() const {
    std::vector<std::vector<Site>> out;
    std::vector<char> seen(occ_.size(), 0);
    for (int y = 0; y < h_; ++y) {
        for (int x = 0; x < w_; ++x) {
            if (!occupied(x, y) || seen[idx(x, y)]) continue;
            std::vector<Site> cluster;
            std::queue<Site> q;
            q.push({x, y});
            seen[idx(x, y)] = 1;
            while (!q.empty()) {
                Site s = q.front();
                q.pop();
                cluster.push_back(s);
                for (int d = 0; d < 4; ++d) {
                    auto t = neighbor(s, d);
                    if (t && occupied(*t) && !seen[idx(t->x, t->y)]) {
                        seen[idx(t->x, t->y)] = 1;
                        q.push(*t);
                    }
                }
            }
            std::sort(cluster.begin(), cluster.end());
            out.push_back(std::move(cluster));
        }
    }
    return out;
}

std::optional<std::pair<int, int>> SiteConfig::classify_robust() const {
    auto cl = clusters();
    if (cl.size() != 1) return std::nullopt;
    std::vector<char> colUsed(w_, 0), rowUsed(h_, 0);
    for (const Site& s : cl[0]) {
        colUsed[s.x] = 1;
        rowUsed[s.y] = 1;
    }
    const bool wrap = boundary_ == Boundary::Periodic;
    auto cols = contiguous_run(colUsed, wrap);
    auto rows = contiguous_run(rowUsed, wrap);
    if (!cols || !rows) return std::nullopt;
    const auto [cx, cw] = *cols;
    const auto [cy, ch] = *rows;
    if (static_cast<long long>(cw) * ch != static_cast<long long>(cl[0].size()))
        return std::nullopt;
    // Every cell of the circumscribing rectangle must be occupied.
    for (int dy = 0; dy < ch; ++dy) {
        for (int dx = 0; dx < cw; ++dx) {
            if (!occupied((cx + dx) % w_, (cy + dy) % h_)) return std::nullopt;
        }
    }
    if (std::min(cw, ch) < 2) return std::nullopt;
    return std::make_pair(cw, ch);
}

SiteConfig SiteConfig::transformed(int k) const {
    if (w_ != h_) throw std::logic_error("transforms require a square lattice");
    const int n = w_;
    const int rot = k & 3;
    const bool mirror = (k & 4) != 0;
    SiteConfig out(n, n, boundary_);
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            if (!occupied(x, y)) continue;
            int px = x, py = y;
            for (int r = 0; r < rot; ++r) {
                const int nx = n - 1 - py;
                py = px;
                px = nx;
            }
            if (mirror) px = n - 1 - px;
            out.set(px, py, true);
        }
    }
    return out;
}

std::string SiteConfig::to_text() const {
    if (w_ != h_) throw std::logic_error("text format requires a square lattice");
    std::ostringstream os;
    os << "L=" << w_ << " boundary=" << (boundary_ == Boundary::Open ? "open" : "periodic") << "\n";
    for (int y = h_ - 1; y >= 0; --y) {
        for (int x = 0; x < w_; ++x) os << (occupied(x, y) ? '#' : '.');
        os << "\n";
    }
    return os.str();
}

SiteConfig SiteConfig::from_text(const std::string& text) {
    std::istringstream is(text);
    std::string header;
    if (!std::getline(is, header)) throw std::invalid_argument("empty configuration text");
    int L = 0;
    std::string btag;
    {
        std::istringstream hs(header);
        std::string tok;
        while (hs >> tok) {
            if (tok.rfind("L=", 0) == 0) L = std::stoi(tok.substr(2));
            else if (tok.rfind("boundary=", 0) == 0) btag = tok.substr(9);
        }
    }
    if (L <= 0) throw std::invalid_argument("missing or invalid L= header");
    Boundary b;
    if (btag == "open") b = Boundary::Open;
    else if (btag == "periodic") b = Boundary::Periodic;
    else throw std::invalid_argument("boundary must be open or periodic");
    SiteConfig cfg(L, L, b);
    for (int y = L - 1; y >= 0; --y) {
        std::string row;
        if (!std::getline(is, row)) throw std::invalid_argument("truncated configuration grid");
        if (static_cast<int>(row.size()) < L) throw std::invalid_argument("short configuration row");
        for (int x = 0; x < L; ++x) {
            if (row[x] == '#') cfg.set(x, y, true);
            else if (row[x] != '.') throw std::invalid_argument("rows must consist of '.' and '#'");
        }
    }
    return cfg;
}

std::string SiteConfig::to_json() const {
    nlohmann::json j;
    j["L"] = w_;
    j["boundary"] = boundary_ == Boundary::Open ? "open" : "periodic";
    std::vector<std::string> rowsTopFirst;
    for (int y = h_ - 1; y >= 0; --y) {
        std::string row;
        for (int x = 0; x < w_; ++x) row.push_back(occupied(x, y) ? '#' : '.');
        rowsTopFirst.push_back(row);
    }
    j["rows"] = rowsTopFirst;
    return j.dump(2);
}

SiteConfig SiteConfig::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    std::ostringstream os;
    os << "L=" << j.at("L").get<int>() << " boundary=" << j.at("boundary").get<std::string>() << "\n";
    for (const auto& row : j.at("rows")) os << row.get<std::string>() << "\n";
    return from_text(os.str());
}

SiteConfig make_rectangle(int L, Boundary boundary, int x0, int y0, int w, int h) {
    SiteConfig cfg(L, L, boundary);
    for (int dy = 0; dy < h; ++dy)
        for (int dx = 0; dx < w; ++dx)
            cfg.set((x0 + dx) % L, (y0 + dy) % L, true);
    return cfg;
}

}  // namespace mmdp
