#pragma once

#include <stdexcept>
#include <string>

namespace mmdp {

/// Physical and control parameters of the lattice-gas model.
///
/// The metastable regime requires U > 0 and Delta strictly between 1.5U and
/// 2U, so that attaching a particle with two neighbours lowers the energy
/// (Delta - 2U < 0) while a single bond does not pay for a particle
/// (Delta - U > 0).
struct ModelParams {
    int L = 10;           ///< lattice side (torus is L x L)
    double U = 1.0;       ///< pair binding energy
    double delta = 1.75;  ///< chemical-potential cost per particle
    double beta = 8.0;    ///< inverse temperature
    double lambda = 0.9;  ///< discount factor

    void validate() const {
        if (L < 6) throw std::invalid_argument("L must be at least 6");
        if (U <= 0) throw std::invalid_argument("U must be positive");
        if (!(delta > 1.5 * U && delta < 2.0 * U))
            throw std::invalid_argument("delta must lie in (1.5U, 2U)");
        if (beta <= 0) throw std::invalid_argument("beta must be positive");
        if (!(lambda > 0.0 && lambda < 1.0))
            throw std::invalid_argument("lambda must lie in (0,1)");
    }
};

/// Exact lattice energy of the form a*U + b*Delta with integer coefficients.
/// All Hamiltonian values and energy differences in this model are of this
/// shape; keeping the integer pair avoids accumulating rounding error and
/// makes susceptibility tests exact.
struct Energy {
    long long u = 0;  ///< coefficient of U (negative for bound pairs)
    long long d = 0;  ///< coefficient of Delta (particle count)

    friend Energy operator+(Energy a, Energy b) { return {a.u + b.u, a.d + b.d}; }
    friend Energy operator-(Energy a, Energy b) { return {a.u - b.u, a.d - b.d}; }
    friend bool operator==(Energy a, Energy b) { return a.u == b.u && a.d == b.d; }

    double value(const ModelParams& p) const {
        return static_cast<double>(u) * p.U + static_cast<double>(d) * p.delta;
    }
};

}  // namespace mmdp
