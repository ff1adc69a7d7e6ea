#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "entropy_bounds/errors.hpp"
#include "entropy_bounds/hermitian.hpp"
#include "entropy_bounds/spectra.hpp"

namespace entropy_bounds {

inline constexpr double kStateSumTolerance = 1e-12;
inline constexpr double kEigenvalueClampTolerance = 1e-10;
inline constexpr std::size_t kDenseDimCap = 64;

namespace detail {

// Kahan-compensated sum; keeps the normalization check meaningful for
// auto-extended truncations with ~1e6 levels, where naive accumulation
// alone would eat the 1e-12 budget.
inline double compensated_sum(const std::vector<double>& values) {
    double sum = 0.0, carry = 0.0;
    for (double v : values) {
        const double y = v - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return sum;
}

}  // namespace detail

// Binary (Shannon) entropy in bits, with the 0*log(0) := 0 convention.
inline double binary_entropy(double eps) {
    if (!(eps >= 0.0 && eps <= 1.0))
        throw std::invalid_argument("binary_entropy argument must lie in [0,1]");
    double s = 0.0;
    if (eps > 0.0) s -= eps * std::log2(eps);
    if (eps < 1.0) s -= (1.0 - eps) * std::log2(1.0 - eps);
    return s;
}

namespace detail {

inline double entropy_of_clamped(std::vector<double> eigs) {
    double s = 0.0;
    for (double lam : eigs) {
        if (lam < -kEigenvalueClampTolerance || lam > 1.0 + kEigenvalueClampTolerance)
            throw numeric_failure("eigenvalue " + std::to_string(lam) +
                                  " outside [0,1] beyond clamp tolerance");
        lam = std::clamp(lam, 0.0, 1.0);
        if (lam > 0.0) s -= lam * std::log2(lam);
    }
    return s;
}

}  // namespace detail

// A state given by its spectral decomposition: probability weights attached
// to distinct orthonormal basis labels. Canonical form: weights sorted
// nonincreasing (ties broken by label), exact zeros dropped.
class SpectralState {
public:
    SpectralState(std::vector<double> weights, std::vector<std::size_t> labels) {
        if (weights.size() != labels.size())
            throw invariant_violation("weights/labels length mismatch");
        if (weights.empty())
            throw invariant_violation("state must have at least one weight");
        for (double w : weights)
            if (!(w >= 0.0))
                throw invariant_violation("weights must be nonnegative");
        const double sum = detail::compensated_sum(weights);
        if (std::abs(sum - 1.0) > kStateSumTolerance)
            throw invariant_violation("weights must sum to 1, got " + std::to_string(sum));

        std::vector<std::size_t> order(weights.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (weights[a] != weights[b]) return weights[a] > weights[b];
            return labels[a] < labels[b];
        });
        weights_.reserve(weights.size());
        labels_.reserve(labels.size());
        for (std::size_t k : order) {
            if (weights[k] == 0.0) continue;
            weights_.push_back(weights[k]);
            labels_.push_back(labels[k]);
        }
        std::vector<std::size_t> sorted_labels = labels;
        std::sort(sorted_labels.begin(), sorted_labels.end());
        if (std::adjacent_find(sorted_labels.begin(), sorted_labels.end()) != sorted_labels.end())
            throw invariant_violation("basis labels must be distinct");
    }

    static SpectralState pure(std::size_t label) {
        return SpectralState({1.0}, {label});
    }

    const std::vector<double>& weights() const noexcept { return weights_; }
    const std::vector<std::size_t>& labels() const noexcept { return labels_; }
    std::size_t support_size() const noexcept { return weights_.size(); }

private:
    std::vector<double> weights_;
    std::vector<std::size_t> labels_;
};

inline SpectralState spectral_state_on_default_labels(std::vector<double> weights) {
    std::vector<std::size_t> labels(weights.size());
    std::iota(labels.begin(), labels.end(), 0);
    return SpectralState(std::move(weights), std::move(labels));
}

// A state as an explicit Hermitian matrix, for cross-basis tests at small
// dimension.
class DenseState {
public:
    explicit DenseState(HermitianMatrix m) : matrix_(std::move(m)) {
        const std::size_t d = matrix_.dim();
        if (d == 0 || d > kDenseDimCap)
            throw invariant_violation("dense state dimension must be in [1, " +
                                      std::to_string(kDenseDimCap) + "]");
        if (matrix_.hermiticity_error() > 1e-12)
            throw invariant_violation("dense state matrix is not Hermitian within 1e-12");
        if (std::abs(matrix_.trace().real() - 1.0) > 1e-12 ||
            std::abs(matrix_.trace().imag()) > 1e-12)
            throw invariant_violation("dense state trace must equal 1 within 1e-12");
        eigenvalues_ = hermitian_eigenvalues(matrix_);
        for (double lam : eigenvalues_)
            if (lam < -kEigenvalueClampTolerance)
                throw invariant_violation("dense state has eigenvalue below -1e-10");
    }

    static DenseState maximally_mixed(std::size_t d) {
        HermitianMatrix m(d);
        for (std::size_t i = 0; i < d; ++i) m.at(i, i) = 1.0 / double(d);
        return DenseState(std::move(m));
    }

    static DenseState diagonal(const std::vector<double>& weights) {
        HermitianMatrix m(weights.size());
        for (std::size_t i = 0; i < weights.size(); ++i) m.at(i, i) = weights[i];
        return DenseState(std::move(m));
    }

    static DenseState pure(std::vector<complexd> amplitudes) {
        double norm2 = 0.0;
        for (const complexd& a : amplitudes) norm2 += std::norm(a);
        if (!(norm2 > 0.0)) throw std::invalid_argument("zero amplitude vector");
        const double inv = 1.0 / norm2;
        HermitianMatrix m(amplitudes.size());
        for (std::size_t i = 0; i < amplitudes.size(); ++i)
            for (std::size_t j = 0; j < amplitudes.size(); ++j)
                m.at(i, j) = amplitudes[i] * std::conj(amplitudes[j]) * inv;
        return DenseState(std::move(m));
    }

    const HermitianMatrix& matrix() const noexcept { return matrix_; }
    const std::vector<double>& eigenvalues() const noexcept { return eigenvalues_; }
    std::size_t dim() const noexcept { return matrix_.dim(); }

private:
    HermitianMatrix matrix_;
    std::vector<double> eigenvalues_;
};

inline double von_neumann_entropy(const SpectralState& state) {
    double s = 0.0;
    for (double w : state.weights())
        if (w > 0.0) s -= w * std::log2(w);
    return s;
}

inline double von_neumann_entropy(const DenseState& state) {
    return detail::entropy_of_clamped(state.eigenvalues());
}

// Half the l1 distance of the ordered weight sequences, zero-padded to a
// common length. This is the spectral epsilon used by every bound here.
inline double trace_distance(const SpectralState& a, const SpectralState& b) {
    const auto& r = a.weights();
    const auto& s = b.weights();
    const std::size_t n = std::max(r.size(), s.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ri = i < r.size() ? r[i] : 0.0;
        const double si = i < s.size() ? s[i] : 0.0;
        sum += std::abs(ri - si);
    }
    return 0.5 * sum;
}

inline double trace_distance(const DenseState& a, const DenseState& b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("dense states must have equal dimension");
    const std::vector<double> eigs = hermitian_eigenvalues(a.matrix() - b.matrix());
    double sum = 0.0;
    for (double mu : eigs) sum += std::abs(mu);
    return 0.5 * sum;
}

inline double energy(const SpectralState& state, const Spectrum& spec) {
    double e = 0.0;
    for (std::size_t i = 0; i < state.support_size(); ++i) {
        const std::size_t label = state.labels()[i];
        if (label >= spec.dim())
            throw std::invalid_argument("basis label " + std::to_string(label) +
                                        " outside spectrum truncation " +
                                        std::to_string(spec.dim()));
        e += state.weights()[i] * spec.level(label);
    }
    return e;
}

// First label whose energy level exceeds the cap, if any. The bounded-mixture
// hypothesis holds exactly when this is empty for both states.
inline std::optional<std::size_t> first_label_exceeding(const SpectralState& state,
                                                        const Spectrum& spec, double energy_cap) {
    for (std::size_t label : state.labels()) {
        if (label >= spec.dim())
            throw std::invalid_argument("basis label " + std::to_string(label) +
                                        " outside spectrum truncation");
        if (spec.level(label) > energy_cap) return label;
    }
    return std::nullopt;
}

}  // namespace entropy_bounds
