#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "entropy_bounds/errors.hpp"
#include "entropy_bounds/maxent.hpp"
#include "entropy_bounds/spectra.hpp"
#include "entropy_bounds/states.hpp"

namespace entropy_bounds {

// Witness that the thermal entropy curve eventually clears s_rho plus the
// slack 2*S(gamma(E)) + 1 bit. Once it does, no orthonormal basis with all
// level expectations below E can reproduce a state of entropy s_rho, because
// the sandwich S(gamma(Etilde)) - 2*S(gamma(E)) - h(eps) <= S(rho) fails.
struct ContradictionCertificate {
    double energy_cap = 0.0;  // hypothesized basis energy cap E
    double s_rho = 0.0;
    double slack = 0.0;  // 2*S(gamma(E)) + 1, the h(eps) supremum baked in
    double threshold_energy = 0.0;
    double entropy_at_threshold = 0.0;
    double previous_energy = 0.0;  // bracketing witness: does not exceed target
    double entropy_at_previous = 0.0;
    std::string truncation_note;
};

// Doubling-then-bisection on Etilde over the strictly increasing entropy
// curve. A spectrum without an extendable tail caps the curve at log2(dim),
// in which case the search reports threshold-not-reached with partial data.
inline ContradictionCertificate find_contradiction_energy(const Spectrum& spec,
                                                          double energy_cap, double s_rho,
                                                          double tol) {
    if (!(energy_cap > 0.0)) throw std::invalid_argument("energy cap must be positive");
    if (!(s_rho >= 0.0)) throw std::invalid_argument("entropy must be nonnegative");
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");

    ContradictionCertificate cert;
    cert.energy_cap = energy_cap;
    cert.s_rho = s_rho;
    const ThermalSolve base = thermal_for_energy(spec, energy_cap, tol);
    cert.slack = 2.0 * base.entropy_bits + 1.0;
    const double target = s_rho + cert.slack;

    // Without a tail model the curve peaks at the uniform state: entropy
    // ceiling log2(dim), reached at the mean level (beta = 0). Keep the
    // search on the increasing branch.
    double energy_limit = std::numeric_limits<double>::infinity();
    if (!spec.extendable()) {
        const double ceiling = std::log2(double(spec.dim()));
        if (target >= ceiling)
            throw threshold_not_reached(
                "entropy ceiling log2(dim) = " + std::to_string(ceiling) +
                    " cannot exceed target " + std::to_string(target) +
                    " on a spectrum without a tail model",
                ceiling, spec.max_level());
        energy_limit = spec.mean_level();
    }

    double lo = energy_cap;
    double s_lo = base.entropy_bits;
    double hi = std::min(std::max(2.0 * energy_cap, energy_cap + 1.0), energy_limit);
    double s_hi = 0.0;
    for (;;) {
        try {
            s_hi = thermal_for_energy(spec, hi, tol).entropy_bits;
        } catch (const energy_out_of_range& e) {
            throw threshold_not_reached(
                "target energy became unreachable before the entropy target; best "
                "entropy " + std::to_string(s_lo) + " at " + std::to_string(lo),
                s_lo, e.reachable_max());
        } catch (const truncation_cap_error&) {
            throw threshold_not_reached(
                "truncation cap hit before the entropy target; best entropy " +
                    std::to_string(s_lo) + " at " + std::to_string(lo),
                s_lo, hi);
        }
        if (s_hi > target) break;
        if (hi >= energy_limit)
            throw threshold_not_reached(
                "entropy peaked at " + std::to_string(s_hi) + " below target " +
                    std::to_string(target),
                s_hi, hi);
        lo = hi;
        s_lo = s_hi;
        hi = std::min(hi * 2.0, energy_limit);
        if (!std::isfinite(hi))
            throw numeric_failure("threshold search diverged");
    }

    // bisect the bracket: s(lo) <= target < s(hi)
    while (hi - lo > 1e-6 * hi && hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double s_mid = thermal_for_energy(spec, mid, tol).entropy_bits;
        if (s_mid > target) {
            hi = mid;
            s_hi = s_mid;
        } else {
            lo = mid;
            s_lo = s_mid;
        }
    }

    cert.threshold_energy = hi;
    cert.entropy_at_threshold = s_hi;
    cert.previous_energy = lo;
    cert.entropy_at_previous = s_lo;
    cert.truncation_note = spec.extendable()
                               ? "certified within the extendable truncation"
                               : "finite spectrum; threshold found below the entropy ceiling";
    return cert;
}

struct StateContradiction {
    std::size_t index = 0;
    double state_energy = 0.0;
    double state_entropy = 0.0;
    std::string status;  // "ok", "precondition-violation", "threshold-not-reached"
    std::optional<ContradictionCertificate> certificate;
    double achieved_entropy = 0.0;  // partial data when not reached
    double max_energy_probed = 0.0;
};

// Per-state certificates: every fixed state of finite entropy yields a
// finite threshold energy on a Gibbs-summable spectrum.
inline std::vector<StateContradiction> theorem4_report(const Spectrum& spec, double energy_cap,
                                                       const std::vector<SpectralState>& samples,
                                                       double tol) {
    std::vector<StateContradiction> report;
    report.reserve(samples.size());
    for (std::size_t k = 0; k < samples.size(); ++k) {
        StateContradiction entry;
        entry.index = k;
        entry.state_energy = energy(samples[k], spec);
        entry.state_entropy = von_neumann_entropy(samples[k]);
        if (entry.state_energy < energy_cap) {
            entry.status = "precondition-violation";
            report.push_back(std::move(entry));
            continue;
        }
        try {
            entry.certificate =
                find_contradiction_energy(spec, energy_cap, entry.state_entropy, tol);
            entry.status = "ok";
        } catch (const threshold_not_reached& e) {
            entry.status = "threshold-not-reached";
            entry.achieved_entropy = e.achieved_entropy_bits();
            entry.max_energy_probed = e.max_energy_probed();
        }
        report.push_back(std::move(entry));
    }
    return report;
}

}  // namespace entropy_bounds
