#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "entropy_bounds/afw.hpp"
#include "entropy_bounds/bounds.hpp"
#include "entropy_bounds/contradiction.hpp"
#include "entropy_bounds/maxent.hpp"
#include "entropy_bounds/sampling.hpp"
#include "entropy_bounds/states.hpp"

namespace entropy_bounds {

struct PropertyResult {
    std::string name;
    std::size_t trials = 0;
    std::size_t violations = 0;
    // largest observed lhs - rhs across trials; <= 0 means the inequality
    // held with that much room to spare
    double worst_margin = -1e300;

    void record(double lhs, double rhs, double tolerance) {
        ++trials;
        const double margin = lhs - rhs;
        worst_margin = std::max(worst_margin, margin);
        if (margin > tolerance) ++violations;
    }
};

// Deterministic property battery over the module invariants. Same seed,
// same spectrum, same results.
inline std::vector<PropertyResult> run_property_suite(const Spectrum& spec,
                                                      std::uint64_t seed, double tol,
                                                      std::size_t samples) {
    std::vector<PropertyResult> results;

    {
        PropertyResult r{"afw-identities"};
        Rng rng(seed + 1);
        for (std::size_t d : {2ul, 5ul, 20ul}) {
            std::vector<std::size_t> labels(d);
            std::iota(labels.begin(), labels.end(), 0);
            for (std::size_t t = 0; t < samples; ++t) {
                const SpectralState rho = random_state(rng, labels);
                const SpectralState sigma = random_state(rng, labels);
                const AfwCoupling c(rho, sigma);
                if (c.degenerate()) continue;
                double worst = 0.0;
                double phi_sum = 0.0, d1_sum = 0.0, d2_sum = 0.0;
                for (std::size_t i = 0; i < c.dim(); ++i) {
                    worst = std::max(worst,
                                     std::abs(c.rho_weights()[i] - c.phi_weights()[i] -
                                              c.epsilon() * c.delta1_aligned()[i]));
                    worst = std::max(worst,
                                     std::abs(c.sigma_weights()[i] - c.phi_weights()[i] -
                                              c.epsilon() * c.delta2_aligned()[i]));
                    phi_sum += c.phi_weights()[i];
                    d1_sum += c.delta1_aligned()[i];
                    d2_sum += c.delta2_aligned()[i];
                }
                worst = std::max(worst, std::abs(phi_sum - (1.0 - c.epsilon())));
                worst = std::max(worst, std::abs(d1_sum - 1.0));
                worst = std::max(worst, std::abs(d2_sum - 1.0));
                r.record(worst, 0.0, 1e-12);
            }
        }
        results.push_back(r);
    }

    {
        PropertyResult r{"central-inequality"};
        Rng rng(seed + 2);
        std::vector<std::size_t> labels(12);
        std::iota(labels.begin(), labels.end(), 0);
        for (std::size_t t = 0; t < samples; ++t) {
            const SpectralState rho = random_state(rng, labels);
            const SpectralState sigma = random_state(rng, labels);
            const AfwCoupling c(rho, sigma);
            if (c.degenerate()) continue;
            const double s_omega = omega_entropy(omega_structure(c));
            const double lhs = std::abs(von_neumann_entropy(rho) - von_neumann_entropy(sigma));
            r.record(lhs, s_omega, 1e-9);
            const double rhs = c.epsilon() * (von_neumann_entropy(c.delta1()) +
                                              von_neumann_entropy(c.delta2())) +
                               binary_entropy(c.epsilon());
            r.record(s_omega, rhs, 1e-9);
        }
        results.push_back(r);
    }

    {
        PropertyResult r{"defect-energy-budget"};
        Rng rng(seed + 3);
        const double cap = std::max(spec.level(std::min<std::size_t>(3, spec.dim() - 1)),
                                    spec.min_positive_gap());
        const auto labels = labels_with_level_at_most(spec, cap);
        if (cap > 0.0 && labels.size() >= 2) {
            for (std::size_t t = 0; t < samples; ++t) {
                const SpectralState rho = random_state(rng, labels);
                const SpectralState sigma = random_state(rng, labels);
                const Prop1Report report = check_prop1(rho, sigma, spec, cap);
                if (report.degenerate) continue;
                r.record(report.energy_sum, report.energy_budget, 1e-9);
            }
        }
        results.push_back(r);
    }

    {
        PropertyResult r{"mirsky-inequality"};
        Rng rng(seed + 4);
        for (std::size_t t = 0; t < samples; ++t) {
            const std::size_t d = 2 + rng.index(15);
            const DenseState a = random_dense_state(rng, d);
            const DenseState b = random_dense_state(rng, d);
            std::vector<std::size_t> labels(d);
            std::iota(labels.begin(), labels.end(), 0);
            auto to_weights = [](std::vector<double> v) {
                double sum = 0.0;
                for (double& x : v) {
                    x = std::max(x, 0.0);
                    sum += x;
                }
                for (double& x : v) x /= sum;
                return v;
            };
            const SpectralState sa(to_weights(a.eigenvalues()), labels);
            const SpectralState sb(to_weights(b.eigenvalues()), labels);
            r.record(trace_distance(sa, sb), trace_distance(a, b), 1e-10);
        }
        results.push_back(r);
    }

    {
        PropertyResult r{"mixing-entropy"};
        Rng rng(seed + 5);
        for (std::size_t t = 0; t < samples; ++t) {
            const std::size_t d = 2 + rng.index(7);
            const DenseState a = random_dense_state(rng, d);
            const DenseState b = random_dense_state(rng, d);
            const double lambda = 0.1 + 0.8 * rng.uniform01();
            HermitianMatrix m(d);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j)
                    m.at(i, j) = lambda * a.matrix().at(i, j) +
                                 (1.0 - lambda) * b.matrix().at(i, j);
            const double lhs = von_neumann_entropy(DenseState(std::move(m)));
            const double rhs = lambda * von_neumann_entropy(a) +
                               (1.0 - lambda) * von_neumann_entropy(b) +
                               binary_entropy(lambda);
            r.record(lhs, rhs, 1e-9);
        }
        results.push_back(r);
    }

    {
        PropertyResult r{"maxent-dominance"};
        Rng rng(seed + 6);
        const double cap = spec.extendable() ? std::max(1.0, spec.mean_level() / 4.0)
                                             : 0.5 * spec.mean_level();
        try {
            const ThermalSolve gamma = thermal_for_energy(spec, cap, tol);
            const auto labels = labels_with_level_at_most(spec, 2.0 * cap);
            std::size_t accepted = 0, guard = 0;
            while (accepted < samples && ++guard < samples * 64) {
                const SpectralState state = random_state(rng, labels);
                if (energy(state, spec) > cap) continue;
                ++accepted;
                r.record(von_neumann_entropy(state), gamma.entropy_bits, 1e-9);
            }
        } catch (const energy_out_of_range&) {
        } catch (const truncation_cap_error&) {
        }
        results.push_back(r);
    }

    {
        PropertyResult r{"curve-monotone-concave"};
        const double base = spec.extendable() ? std::max(0.25, spec.mean_level() / 16.0)
                                              : spec.mean_level() / 8.0;
        try {
            const EntropyCurve curve =
                gamma_entropy_curve(spec, {base, 2.0 * base, 4.0 * base}, tol);
            r.record(curve.strictly_increasing ? 0.0 : 1.0, 0.0, 0.5);
            r.record(curve.midpoint_concave ? 0.0 : 1.0, 0.0, 0.5);
        } catch (const energy_out_of_range&) {
        } catch (const truncation_cap_error&) {
        }
        results.push_back(r);
    }

    {
        PropertyResult r{"bound-validity"};
        Rng rng(seed + 7);
        const double cap = std::max(spec.level(std::min<std::size_t>(2, spec.dim() - 1)),
                                    spec.min_positive_gap());
        const auto labels = labels_with_level_at_most(spec, cap);
        if (cap > 0.0 && labels.size() >= 2) {
            for (std::size_t t = 0; t < samples; ++t) {
                const SpectralState rho = random_state(rng, labels);
                const SpectralState sigma = random_state(rng, labels);
                const BoundReport report = compare_bounds(rho, sigma, spec, cap, tol);
                if (report.mixture) r.record(report.actual_diff, *report.mixture, 1e-9);
            }
        }
        results.push_back(r);
    }

    {
        PropertyResult r{"bound-dominance"};
        const double cap = spec.extendable() ? std::max(spec.min_positive_gap(), 0.5)
                                             : 0.25 * spec.mean_level();
        for (int k = 1; k <= 9; ++k) {
            const double eps = double(k) / 10.0;
            try {
                r.record(mixture_bound(eps, cap, spec, tol),
                         winter_bound(eps, cap, spec, tol), 1e-9);
            } catch (const energy_out_of_range&) {
            } catch (const truncation_cap_error&) {
            }
        }
        results.push_back(r);
    }

    {
        PropertyResult r{"triangle-inequality"};
        Rng rng(seed + 8);
        for (std::size_t t = 0; t < samples; ++t) {
            const std::size_t d = 2 + rng.index(15);
            const DenseState a = random_dense_state(rng, d);
            const DenseState b = random_dense_state(rng, d);
            const DenseState c = random_dense_state(rng, d);
            r.record(trace_distance(a, c), trace_distance(a, b) + trace_distance(b, c),
                     1e-10);
        }
        results.push_back(r);
    }

    {
        PropertyResult r{"binary-entropy-symmetry"};
        for (int k = 0; k <= 64; ++k) {
            const double eps = double(k) / 64.0;
            r.record(std::abs(binary_entropy(eps) - binary_entropy(1.0 - eps)), 0.0, 0.0);
        }
        results.push_back(r);
    }

    return results;
}

}  // namespace entropy_bounds
