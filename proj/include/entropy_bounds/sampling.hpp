#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "entropy_bounds/hermitian.hpp"
#include "entropy_bounds/spectra.hpp"
#include "entropy_bounds/states.hpp"

namespace entropy_bounds {

// Seeded generator with hand-rolled uniform mapping, so identical seeds give
// identical streams independent of the standard library's distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform in (0,1), never 0 or 1
    double uniform01() {
        return (double(engine_() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    std::size_t index(std::size_t n) { return std::size_t(engine_() % n); }

    double exponential() { return -std::log(uniform01()); }

private:
    std::mt19937_64 engine_;
};

// Normalized exponential weights over the given labels: a flat Dirichlet
// sample with full support.
inline SpectralState random_state(Rng& rng, const std::vector<std::size_t>& labels) {
    std::vector<double> w(labels.size());
    double sum = 0.0;
    for (double& x : w) {
        x = rng.exponential();
        sum += x;
    }
    for (double& x : w) x /= sum;
    return SpectralState(std::move(w), labels);
}

inline std::vector<std::size_t> labels_with_level_at_most(const Spectrum& spec,
                                                          double energy_cap) {
    std::vector<std::size_t> labels;
    for (std::size_t i = 0; i < spec.dim(); ++i)
        if (spec.level(i) <= energy_cap) labels.push_back(i);
    return labels;
}

// Random pair (rho, sigma) on the given labels with spectral trace distance
// steered toward target_eps by bisecting the mixing weight toward a pure
// state. Returns the achieved distance, which falls short of the target when
// the label set is too small to realize it.
struct SteeredPair {
    SpectralState rho;
    SpectralState sigma;
    double achieved_eps = 0.0;
};

inline SteeredPair steered_pair(Rng& rng, const std::vector<std::size_t>& labels,
                                double target_eps) {
    if (labels.empty()) throw std::invalid_argument("steered_pair needs at least one label");
    if (labels.size() < 2) {
        SpectralState pure = SpectralState::pure(labels.front());
        return SteeredPair{pure, pure, 0.0};
    }
    SpectralState rho = random_state(rng, labels);

    auto mix_toward_pure = [&](const SpectralState& from, double t) {
        std::vector<double> w(from.support_size());
        std::vector<std::size_t> l = from.labels();
        bool has_first = false;
        for (std::size_t i = 0; i < w.size(); ++i) {
            w[i] = (1.0 - t) * from.weights()[i];
            if (l[i] == labels.front()) {
                w[i] += t;
                has_first = true;
            }
        }
        if (!has_first) {
            w.push_back(t);
            l.push_back(labels.front());
        }
        return SpectralState(std::move(w), std::move(l));
    };

    double full = trace_distance(rho, mix_toward_pure(rho, 1.0));
    if (full < target_eps) {
        // a near-uniform base maximizes the reachable distance on this set
        std::vector<double> uniform(labels.size(), 1.0 / double(labels.size()));
        rho = SpectralState(std::move(uniform), labels);
        full = trace_distance(rho, mix_toward_pure(rho, 1.0));
    }
    if (full <= target_eps)
        return SteeredPair{rho, mix_toward_pure(rho, 1.0), full};

    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (trace_distance(rho, mix_toward_pure(rho, mid)) < target_eps)
            lo = mid;
        else
            hi = mid;
    }
    SpectralState sigma = mix_toward_pure(rho, hi);
    return SteeredPair{rho, sigma, trace_distance(rho, sigma)};
}

// Random density matrix via a Gram construction: G G* normalized is
// Hermitian, positive semidefinite, trace one.
inline DenseState random_dense_state(Rng& rng, std::size_t dim) {
    std::vector<complexd> g(dim * dim);
    for (complexd& v : g) v = complexd(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    HermitianMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
            complexd acc = 0.0;
            for (std::size_t k = 0; k < dim; ++k)
                acc += g[i * dim + k] * std::conj(g[j * dim + k]);
            m.at(i, j) = acc;
        }
    const double tr = m.trace().real();
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) m.at(i, j) /= tr;
    // kill representational round-off so the constructor's checks see an
    // exactly Hermitian, trace-one matrix
    for (std::size_t i = 0; i < dim; ++i) {
        m.at(i, i) = complexd(m.at(i, i).real(), 0.0);
        for (std::size_t j = i + 1; j < dim; ++j) {
            const complexd avg = 0.5 * (m.at(i, j) + std::conj(m.at(j, i)));
            m.at(i, j) = avg;
            m.at(j, i) = std::conj(avg);
        }
    }
    double diag_sum = 0.0;
    for (std::size_t i = 0; i + 1 < dim; ++i) diag_sum += m.at(i, i).real();
    m.at(dim - 1, dim - 1) = 1.0 - diag_sum;
    return DenseState(std::move(m));
}

// Random Hermitian matrix with entries in the unit box, not a state.
inline HermitianMatrix random_hermitian(Rng& rng, std::size_t dim) {
    HermitianMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        m.at(i, i) = rng.uniform(-1.0, 1.0);
        for (std::size_t j = i + 1; j < dim; ++j) {
            const complexd v(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
            m.at(i, j) = v;
            m.at(j, i) = std::conj(v);
        }
    }
    return m;
}

}  // namespace entropy_bounds
