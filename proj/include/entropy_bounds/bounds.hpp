#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "entropy_bounds/afw.hpp"
#include "entropy_bounds/errors.hpp"
#include "entropy_bounds/maxent.hpp"
#include "entropy_bounds/spectra.hpp"
#include "entropy_bounds/states.hpp"

namespace entropy_bounds {

// Finite-dimensional continuity bound: eps*log2(d-1) + g(eps).
inline double audenaert_bound(double eps, std::size_t d) {
    if (d < 2) throw std::invalid_argument("Audenaert bound needs dimension >= 2");
    return eps * std::log2(double(d - 1)) + binary_entropy(eps);
}

// Energy-constrained bound 2*eps*S(gamma(E/eps)) + g(eps).
inline double winter_bound(double eps, double energy_cap, const Spectrum& spec, double tol) {
    if (!(eps > 0.0 && eps <= 1.0))
        throw std::invalid_argument("Winter bound needs eps in (0,1]");
    if (!(energy_cap > 0.0)) throw std::invalid_argument("energy cap must be positive");
    const ThermalSolve gamma = thermal_for_energy(spec, energy_cap / eps, tol);
    return 2.0 * eps * gamma.entropy_bits + binary_entropy(eps);
}

// Bounded-mixture bound 2*eps*S(gamma(E)) + g(eps): the thermal entropy is
// evaluated at the fixed cap E rather than E/eps.
inline double mixture_bound(double eps, double energy_cap, const Spectrum& spec, double tol) {
    if (!(eps >= 0.0 && eps <= 1.0))
        throw std::invalid_argument("mixture bound needs eps in [0,1]");
    if (!(energy_cap > 0.0)) throw std::invalid_argument("energy cap must be positive");
    const ThermalSolve gamma = thermal_for_energy(spec, energy_cap, tol);
    return 2.0 * eps * gamma.entropy_bits + binary_entropy(eps);
}

// Numerical uncertainty carried by a thermal-entropy evaluation at
// tolerance tol: 2*tol*|dS/dE|, slope estimated by central differencing.
inline double thermal_bound_uncertainty(const Spectrum& spec, double energy_cap, double tol) {
    const double h = std::max(1e-4 * energy_cap, 100.0 * tol);
    const double lo = std::max(energy_cap - h, 0.5 * energy_cap);
    const double hi = energy_cap + h;
    const double s_lo = thermal_for_energy(spec, lo, tol).entropy_bits;
    const double s_hi = thermal_for_energy(spec, hi, tol).entropy_bits;
    return 2.0 * tol * std::abs((s_hi - s_lo) / (hi - lo));
}

enum class BoundTag { mixture, winter, audenaert, none };

inline const char* to_string(BoundTag t) {
    switch (t) {
        case BoundTag::mixture: return "mixture";
        case BoundTag::winter: return "winter";
        case BoundTag::audenaert: return "audenaert";
        default: return "none";
    }
}

// One evaluation record. A bound whose hypotheses fail for the generating
// states is reported absent with a reason, never silently evaluated.
struct BoundReport {
    double epsilon = 0.0;
    double energy_cap = 0.0;
    double actual_diff = 0.0;
    std::optional<double> audenaert;
    std::string audenaert_reason;
    std::optional<double> winter;
    std::string winter_reason;
    std::optional<double> mixture;
    std::string mixture_reason;
    double winter_uncertainty = 0.0;
    double mixture_uncertainty = 0.0;
    BoundTag tightest = BoundTag::none;
    std::size_t finite_dim = 2;
    // hypothesis flags: the mean-energy form as printed, and the stronger
    // bounded-label form the mixture bound is actually gated on
    bool mean_energy_hypothesis = false;
    bool bounded_label_hypothesis = false;
};

namespace detail {

inline void pick_tightest(BoundReport& report) {
    report.tightest = BoundTag::none;
    double best = std::numeric_limits<double>::infinity();
    auto consider = [&](const std::optional<double>& v, BoundTag tag) {
        if (v && *v < best) {
            best = *v;
            report.tightest = tag;
        }
    };
    consider(report.mixture, BoundTag::mixture);
    consider(report.winter, BoundTag::winter);
    consider(report.audenaert, BoundTag::audenaert);
}

}  // namespace detail

// Evaluates every applicable bound against the actual entropy difference.
// eps is the spectral half-l1 distance of the ordered weights throughout.
inline BoundReport compare_bounds(const SpectralState& rho, const SpectralState& sigma,
                                  const Spectrum& spec, double energy_cap, double tol) {
    if (!(energy_cap > 0.0)) throw std::invalid_argument("energy cap must be positive");
    BoundReport report;
    report.energy_cap = energy_cap;
    report.epsilon = trace_distance(rho, sigma);
    report.actual_diff = std::abs(von_neumann_entropy(rho) - von_neumann_entropy(sigma));
    report.finite_dim = std::max<std::size_t>(
        2, std::max(rho.support_size(), sigma.support_size()));

    report.mean_energy_hypothesis = energy(rho, spec) <= energy_cap + 1e-12 &&
                                    energy(sigma, spec) <= energy_cap + 1e-12;
    report.bounded_label_hypothesis =
        !first_label_exceeding(rho, spec, energy_cap).has_value() &&
        !first_label_exceeding(sigma, spec, energy_cap).has_value();

    // Audenaert needs the containing Hilbert space to be finite; a spectrum
    // with an extendable tail models an infinite-dimensional Hamiltonian.
    if (spec.extendable()) {
        report.audenaert_reason = "spectrum models an infinite-dimensional Hamiltonian";
    } else {
        report.finite_dim = std::max<std::size_t>(2, spec.dim());
        report.audenaert = audenaert_bound(report.epsilon, report.finite_dim);
    }

    if (report.epsilon <= 0.0) {
        report.winter_reason = "eps=0: E/eps undefined";
    } else {
        try {
            report.winter = winter_bound(report.epsilon, energy_cap, spec, tol);
            report.winter_uncertainty =
                thermal_bound_uncertainty(spec, energy_cap / report.epsilon, tol);
        } catch (const energy_out_of_range&) {
            report.winter_reason = "E/eps unreachable on truncation";
        } catch (const truncation_cap_error&) {
            report.winter_reason = "truncation cap hit at E/eps";
        }
    }

    if (!report.bounded_label_hypothesis) {
        report.mixture_reason = report.mean_energy_hypothesis
                                    ? "mean energy within cap but a basis label exceeds it "
                                      "(bound gated on the stronger mixture hypothesis)"
                                    : "states are not bounded-label mixtures for this cap";
    } else {
        try {
            report.mixture = mixture_bound(report.epsilon, energy_cap, spec, tol);
            report.mixture_uncertainty = thermal_bound_uncertainty(spec, energy_cap, tol);
        } catch (const energy_out_of_range&) {
            report.mixture_reason = "E unreachable on truncation";
        } catch (const truncation_cap_error&) {
            report.mixture_reason = "truncation cap hit at E";
        }
    }

    detail::pick_tightest(report);
    return report;
}

// Basis-substitution form: rebuilds both states on a caller-provided
// orthonormal family whose levels all sit below the cap. Entropies and the
// spectral eps are untouched by the relabeling, so the mixture bound applies
// to arbitrary input spectra once such a basis exists.
inline BoundReport mixture_bound_via_basis(const SpectralState& rho, const SpectralState& sigma,
                                           const Spectrum& spec, double energy_cap,
                                           const std::vector<std::size_t>& basis_labels,
                                           double tol) {
    const std::size_t need = std::max(rho.support_size(), sigma.support_size());
    if (basis_labels.size() < need)
        throw std::invalid_argument("substitution basis smaller than the state support");
    std::vector<std::size_t> sorted = basis_labels;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("substitution basis labels must be distinct");
    for (std::size_t label : basis_labels) {
        if (label >= spec.dim())
            throw std::invalid_argument("substitution basis label outside spectrum");
        if (spec.level(label) > energy_cap)
            throw hypothesis_violation("substitution basis label above the energy cap", label);
    }

    auto remap = [&](const SpectralState& state) {
        std::vector<std::size_t> labels(state.support_size());
        for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = basis_labels[i];
        return SpectralState(state.weights(), std::move(labels));
    };
    return compare_bounds(remap(rho), remap(sigma), spec, energy_cap, tol);
}

}  // namespace entropy_bounds
