#pragma once

#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "entropy_bounds/errors.hpp"
#include "entropy_bounds/spectra.hpp"
#include "entropy_bounds/states.hpp"

namespace entropy_bounds {

// Hard cap on truncation auto-extension; ENTROPY_BOUNDS_MAX_DIM overrides.
inline std::size_t truncation_hard_cap() {
    static const std::size_t cap = [] {
        if (const char* env = std::getenv("ENTROPY_BOUNDS_MAX_DIM")) {
            const unsigned long long v = std::strtoull(env, nullptr, 10);
            if (v >= 2) return std::size_t(v);
        }
        return std::size_t(1) << 20;
    }();
    return cap;
}

struct ThermalSolve {
    double beta = 0.0;
    double partition = 0.0;  // Z on the truncation actually used
    SpectralState state;     // Gibbs weights over all truncation levels
    double mean_energy = 0.0;
    double entropy_bits = 0.0;
    std::optional<double> tail_bound;  // certified mass beyond truncation
    std::size_t truncation_dim = 0;    // dimension after any auto-extension
};

namespace detail {

struct GibbsEval {
    std::vector<double> weights;
    double partition = 0.0;
    double mean_energy = 0.0;
    double entropy_bits = 0.0;
};

// Gibbs weights exp(-beta*level)/Z with a max-exponent shift so both signs
// of beta stay in range.
inline GibbsEval gibbs_eval(const std::vector<double>& levels, double beta) {
    GibbsEval out;
    const std::size_t n = levels.size();
    out.weights.resize(n);
    double max_exp = -std::numeric_limits<double>::infinity();
    for (double e : levels) max_exp = std::max(max_exp, -beta * e);
    for (std::size_t i = 0; i < n; ++i)
        out.weights[i] = std::exp(-beta * levels[i] - max_exp);
    // compensated normalizer: deep truncations must still pass the state
    // sum check
    const double z_shift = entropy_bounds::detail::compensated_sum(out.weights);
    out.partition = z_shift * std::exp(max_exp);
    double mean = 0.0;
    double entropy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = out.weights[i] / z_shift;
        out.weights[i] = w;
        mean += w * levels[i];
        if (w > 0.0) entropy -= w * std::log2(w);
    }
    out.mean_energy = mean;
    out.entropy_bits = entropy;
    return out;
}

inline double mean_energy_at(const std::vector<double>& levels, double beta) {
    const std::size_t n = levels.size();
    double max_exp = -std::numeric_limits<double>::infinity();
    for (double e : levels) max_exp = std::max(max_exp, -beta * e);
    double z = 0.0, num = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = std::exp(-beta * levels[i] - max_exp);
        z += t;
        num += t * levels[i];
    }
    return num / z;
}

inline ThermalSolve make_solve(const Spectrum& spec, double beta) {
    GibbsEval ev = gibbs_eval(spec.levels(), beta);
    std::vector<std::size_t> labels(spec.dim());
    std::iota(labels.begin(), labels.end(), 0);
    ThermalSolve solve{beta,
                       ev.partition,
                       SpectralState(std::move(ev.weights), std::move(labels)),
                       ev.mean_energy,
                       ev.entropy_bits,
                       std::nullopt,
                       spec.dim()};
    if (auto tail = spec.tail_sum_bound(beta)) {
        double z_trunc = 0.0;
        for (double e : spec.levels()) z_trunc += std::exp(-beta * e);
        solve.tail_bound = *tail / z_trunc;
    }
    return solve;
}

}  // namespace detail

// Thermal state exp(-beta*H)/Z on the given truncation. beta <= 0 is only
// meaningful for finite spectra; with an extendable tail it is rejected as
// non-normalizable.
inline ThermalSolve gibbs_state(const Spectrum& spec, double beta) {
    if (beta <= 0.0 && spec.extendable())
        throw std::invalid_argument(
            "beta <= 0 is non-normalizable for a spectrum with an infinite tail");
    return detail::make_solve(spec, beta);
}

// Solves for the thermal state with mean energy target_E by bisection on
// beta (mean energy is strictly decreasing in beta). Spectra with a tail
// model are auto-extended until the certified tail mass is <= tol.
inline ThermalSolve thermal_for_energy(const Spectrum& spec, double target_E, double tol) {
    if (!(target_E > 0.0)) throw std::invalid_argument("target energy must be positive");
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");

    Spectrum working = spec;
    const bool tail = spec.extendable();
    const std::size_t cap = truncation_hard_cap();

    if (!tail && target_E >= working.max_level())
        throw energy_out_of_range("target energy unreachable on this truncation", 0.0,
                                  working.max_level());

    for (;;) {
        if (tail) {
            // keep the infinite-temperature ceiling comfortably above target
            while (working.mean_level() <= 2.0 * target_E) {
                if (working.dim() * 2 > cap)
                    throw truncation_cap_error(
                        "truncation cap hit while chasing target energy", cap);
                working = working.extended(working.dim() * 2);
            }
        }
        const std::vector<double>& levels = working.levels();

        const double gap_min = working.min_positive_gap();
        if (gap_min == 0.0)
            throw energy_out_of_range("spectrum has a single level value", 0.0, 0.0);

        double lo = tol / (1.0 + levels.back());           // small beta: high energy
        double hi = std::log(1.0 / std::min(tol, 0.5)) / gap_min;  // large beta: low energy

        int guard = 0;
        while (detail::mean_energy_at(levels, lo) <= target_E) {
            if (tail) {
                lo *= 0.25;  // mean -> average of levels as beta -> 0+
                if (lo < 1e-300) break;
            } else {
                lo = (lo > 0.0) ? -1.0 : lo * 2.0;  // finite spectra admit beta <= 0
            }
            if (!std::isfinite(lo) || ++guard > 4096)
                throw numeric_failure("failed to bracket beta from below");
        }
        guard = 0;
        while (detail::mean_energy_at(levels, hi) >= target_E) {
            hi *= 2.0;
            if (!std::isfinite(hi) || ++guard > 4096)
                throw numeric_failure("failed to bracket beta from above");
        }

        if (detail::mean_energy_at(levels, lo) <= target_E) {
            if (tail) {
                // truncation ceiling too low after all; extend and retry
                if (working.dim() * 2 > cap)
                    throw truncation_cap_error(
                        "truncation cap hit while chasing target energy", cap);
                working = working.extended(working.dim() * 2);
                continue;
            }
            throw energy_out_of_range("target energy unreachable on this truncation", 0.0,
                                      working.max_level());
        }

        double beta = 0.5 * (lo + hi);
        double mean = detail::mean_energy_at(levels, beta);
        for (int it = 0; std::abs(mean - target_E) > tol; ++it) {
            if (it > 500)
                throw numeric_failure("beta bisection did not reach tolerance");
            if (mean > target_E)
                lo = beta;
            else
                hi = beta;
            const double next = 0.5 * (lo + hi);
            if (next == beta) break;  // bracket exhausted at double resolution
            beta = next;
            mean = detail::mean_energy_at(levels, beta);
        }
        if (std::abs(mean - target_E) > tol)
            throw numeric_failure("beta bisection stalled before tolerance");

        ThermalSolve solve = detail::make_solve(working, beta);
        if (tail && solve.tail_bound && *solve.tail_bound > tol) {
            if (working.dim() * 2 > cap)
                throw truncation_cap_error("truncation cap hit while certifying tail", cap);
            working = working.extended(working.dim() * 2);
            continue;
        }
        return solve;
    }
}

struct CurvePoint {
    double energy = 0.0;
    ThermalSolve solve;
};

struct EntropyCurve {
    std::vector<CurvePoint> points;
    bool strictly_increasing = true;
    // midpoint test S((E1+E2)/2) >= (S1+S2)/2 - 1e-8 on consecutive pairs
    bool midpoint_concave = true;
};

inline EntropyCurve gamma_entropy_curve(const Spectrum& spec,
                                        const std::vector<double>& energies, double tol) {
    for (std::size_t i = 1; i < energies.size(); ++i)
        if (!(energies[i] > energies[i - 1]))
            throw std::invalid_argument("curve energies must be strictly increasing");
    EntropyCurve curve;
    curve.points.reserve(energies.size());
    for (double e : energies) curve.points.push_back({e, thermal_for_energy(spec, e, tol)});
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        const double s0 = curve.points[i - 1].solve.entropy_bits;
        const double s1 = curve.points[i].solve.entropy_bits;
        if (!(s1 > s0)) curve.strictly_increasing = false;
        const double mid = 0.5 * (curve.points[i - 1].energy + curve.points[i].energy);
        const ThermalSolve mid_solve = thermal_for_energy(spec, mid, tol);
        if (mid_solve.entropy_bits < 0.5 * (s0 + s1) - 1e-8) curve.midpoint_concave = false;
    }
    return curve;
}

}  // namespace entropy_bounds
