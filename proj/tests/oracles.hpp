// Test-only oracles, independent of the library paths they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "entropy_bounds/afw.hpp"
#include "entropy_bounds/hermitian.hpp"

namespace oracles {

using entropy_bounds::AfwCoupling;
using entropy_bounds::HermitianMatrix;
using entropy_bounds::complexd;

// ---------------------------------------------------------------------------
// Closed forms for the gap-1 harmonic oscillator (geometric Gibbs weights).
// Mean energy E fixes q = E/(1+E); beta = -ln q; entropy has the closed form
// (1+E)log2(1+E) - E log2 E.
inline double oscillator_beta(double mean_energy) {
    return std::log((1.0 + mean_energy) / mean_energy);
}

inline double oscillator_entropy_bits(double mean_energy) {
    if (mean_energy <= 0.0) return 0.0;
    return (1.0 + mean_energy) * std::log2(1.0 + mean_energy) -
           mean_energy * std::log2(mean_energy);
}

// Smallest x with oscillator_entropy_bits(x) > target, by doubling+bisection
// on the closed form only.
inline double oscillator_entropy_threshold(double target) {
    double lo = 1e-9, hi = 1.0;
    while (oscillator_entropy_bits(hi) <= target) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (oscillator_entropy_bits(mid) > target)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

inline double shannon_bits(const std::vector<double>& weights) {
    double s = 0.0;
    for (double w : weights)
        if (w > 0.0) s -= w * std::log2(w);
    return s;
}

// ---------------------------------------------------------------------------
// Characteristic-polynomial eigenvalue oracle for small Hermitian matrices.
// Coefficients by Faddeev-LeVerrier; roots by the classic real-rooted
// recursion (critical points of p interlace its roots, so bisection between
// consecutive critical points finds every root).

inline std::vector<double> charpoly_coefficients(const HermitianMatrix& a) {
    const std::size_t n = a.dim();
    std::vector<complexd> m(n * n, complexd(0.0));
    std::vector<double> coeff(n + 1, 0.0);
    coeff[n] = 1.0;

    auto mat_at = [&](std::vector<complexd>& v, std::size_t i, std::size_t j) -> complexd& {
        return v[i * n + j];
    };

    // M_1 = A
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) mat_at(m, i, j) = a.at(i, j);
    complexd tr = 0.0;
    for (std::size_t i = 0; i < n; ++i) tr += mat_at(m, i, i);
    coeff[n - 1] = -tr.real();

    for (std::size_t k = 2; k <= n; ++k) {
        // M_k = A * (M_{k-1} + c_{n-k+1} I)
        std::vector<complexd> shifted = m;
        for (std::size_t i = 0; i < n; ++i) mat_at(shifted, i, i) += coeff[n - k + 1];
        std::vector<complexd> next(n * n, complexd(0.0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                complexd acc = 0.0;
                for (std::size_t l = 0; l < n; ++l) acc += a.at(i, l) * mat_at(shifted, l, j);
                mat_at(next, i, j) = acc;
            }
        m = std::move(next);
        tr = 0.0;
        for (std::size_t i = 0; i < n; ++i) tr += mat_at(m, i, i);
        coeff[n - k] = -tr.real() / double(k);
    }
    return coeff;  // p(x) = sum coeff[k] x^k, monic
}

inline double poly_eval(const std::vector<double>& coeff, double x) {
    double v = 0.0;
    for (std::size_t k = coeff.size(); k-- > 0;) v = v * x + coeff[k];
    return v;
}

inline std::vector<double> poly_derivative(const std::vector<double>& coeff) {
    std::vector<double> d(coeff.size() - 1);
    for (std::size_t k = 1; k < coeff.size(); ++k) d[k - 1] = coeff[k] * double(k);
    return d;
}

inline double bisect_root(const std::vector<double>& coeff, double lo, double hi) {
    double flo = poly_eval(coeff, lo);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = poly_eval(coeff, mid);
        if ((flo <= 0.0) == (fmid <= 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

inline std::vector<double> real_rooted_roots(const std::vector<double>& coeff, double bound) {
    const std::size_t degree = coeff.size() - 1;
    if (degree == 0) return {};
    if (degree == 1) return {-coeff[0] / coeff[1]};

    std::vector<double> crit = real_rooted_roots(poly_derivative(coeff), bound);
    std::sort(crit.begin(), crit.end());

    std::vector<double> cuts;
    cuts.push_back(-bound);
    for (double c : crit) cuts.push_back(c);
    cuts.push_back(bound);

    std::vector<double> roots;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        const double fa = poly_eval(coeff, a), fb = poly_eval(coeff, b);
        if (fa == 0.0) {
            roots.push_back(a);
            continue;
        }
        if ((fa < 0.0) != (fb < 0.0) || fb == 0.0) roots.push_back(bisect_root(coeff, a, b));
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double x, double y) { return std::abs(x - y) < 1e-13; }),
                roots.end());
    return roots;
}

// Eigenvalues (nonincreasing) through the characteristic polynomial alone.
// Intended for d <= 6 with simple spectra; throws if roots are lost.
inline std::vector<double> charpoly_eigenvalues(const HermitianMatrix& a) {
    const std::vector<double> coeff = charpoly_coefficients(a);
    double bound = 1.0;
    for (double c : coeff) bound = std::max(bound, 1.0 + std::abs(c));
    std::vector<double> roots = real_rooted_roots(coeff, bound);
    if (roots.size() != a.dim())
        throw std::runtime_error("characteristic-polynomial oracle lost a root");
    std::sort(roots.begin(), roots.end(), std::greater<>());
    return roots;
}

// ---------------------------------------------------------------------------
// Brute-force coupling assembly in the full product basis: basis vector
// (i,j) -> row i*d + j. Valid up to d = 8 (64-dimensional matrix).
inline HermitianMatrix assemble_omega_dense(const AfwCoupling& c) {
    const std::size_t d = c.dim();
    const auto& phi = c.phi_weights();
    const auto& d1 = c.delta1_aligned();
    const auto& d2 = c.delta2_aligned();
    HermitianMatrix omega(d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            omega.at(i * d + i, j * d + j) += std::sqrt(phi[i] * phi[j]);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            omega.at(i * d + j, i * d + j) += c.epsilon() * d1[i] * d2[j];
    return omega;
}

inline double entropy_bits_of_eigs(std::vector<double> eigs) {
    double s = 0.0;
    for (double lam : eigs) {
        lam = std::clamp(lam, 0.0, 1.0);
        if (lam > 0.0) s -= lam * std::log2(lam);
    }
    return s;
}

}  // namespace oracles
