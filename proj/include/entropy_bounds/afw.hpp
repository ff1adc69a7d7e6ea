#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "entropy_bounds/errors.hpp"
#include "entropy_bounds/hermitian.hpp"
#include "entropy_bounds/spectra.hpp"
#include "entropy_bounds/states.hpp"

namespace entropy_bounds {

// Alicki-Fannes-Winter coupling of two spectral states. The i-th largest
// weight of rho pairs with the i-th largest of sigma; phi carries the
// overlap min(r_i, s_i), and the residuals normalized by epsilon give the
// defect states Delta1, Delta2. All arrays are aligned to the common padded
// length, so r_i = phi_i + eps * d1_i holds index-by-index.
class AfwCoupling {
public:
    AfwCoupling(const SpectralState& rho, const SpectralState& sigma) {
        const auto& r = rho.weights();
        const auto& s = sigma.weights();
        const std::size_t d = std::max(r.size(), s.size());

        // fresh labels for padded slots; they only ever carry zero weight
        std::size_t fresh = 0;
        for (std::size_t l : rho.labels()) fresh = std::max(fresh, l + 1);
        for (std::size_t l : sigma.labels()) fresh = std::max(fresh, l + 1);

        r_.resize(d);
        s_.resize(d);
        e_labels_.resize(d);
        f_labels_.resize(d);
        for (std::size_t i = 0; i < d; ++i) {
            r_[i] = i < r.size() ? r[i] : 0.0;
            s_[i] = i < s.size() ? s[i] : 0.0;
            e_labels_[i] = i < r.size() ? rho.labels()[i] : fresh++;
            f_labels_[i] = i < s.size() ? sigma.labels()[i] : fresh++;
        }

        phi_.resize(d);
        double l1 = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            phi_[i] = std::min(r_[i], s_[i]);
            l1 += std::abs(r_[i] - s_[i]);
        }
        epsilon_ = 0.5 * l1;

        if (epsilon_ == 0.0) return;  // degenerate: identical spectra, no defects

        d1_.resize(d);
        d2_.resize(d);
        const double inv = 1.0 / epsilon_;
        for (std::size_t i = 0; i < d; ++i) {
            d1_[i] = (r_[i] - phi_[i]) * inv;
            d2_[i] = (s_[i] - phi_[i]) * inv;
        }
    }

    double epsilon() const noexcept { return epsilon_; }
    bool degenerate() const noexcept { return epsilon_ == 0.0; }
    std::size_t dim() const noexcept { return phi_.size(); }

    const std::vector<double>& phi_weights() const noexcept { return phi_; }
    const std::vector<double>& rho_weights() const noexcept { return r_; }
    const std::vector<double>& sigma_weights() const noexcept { return s_; }

    const std::vector<double>& delta1_aligned() const { return checked(d1_); }
    const std::vector<double>& delta2_aligned() const { return checked(d2_); }

    std::vector<std::pair<std::size_t, std::size_t>> paired_labels() const {
        std::vector<std::pair<std::size_t, std::size_t>> pairs(dim());
        for (std::size_t i = 0; i < dim(); ++i) pairs[i] = {e_labels_[i], f_labels_[i]};
        return pairs;
    }

    SpectralState delta1() const { return to_state(checked(d1_), e_labels_); }
    SpectralState delta2() const { return to_state(checked(d2_), f_labels_); }

private:
    const std::vector<double>& checked(const std::vector<double>& v) const {
        if (degenerate())
            throw std::invalid_argument("degenerate coupling has no defect states");
        return v;
    }

    static SpectralState to_state(const std::vector<double>& weights,
                                  const std::vector<std::size_t>& labels) {
        std::vector<double> w;
        std::vector<std::size_t> l;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (weights[i] <= 0.0) continue;
            w.push_back(weights[i]);
            l.push_back(labels[i]);
        }
        return SpectralState(std::move(w), std::move(l));
    }

    std::vector<double> r_, s_, phi_, d1_, d2_;
    std::vector<std::size_t> e_labels_, f_labels_;
    double epsilon_ = 0.0;
};

inline AfwCoupling build_coupling(const SpectralState& rho, const SpectralState& sigma) {
    return AfwCoupling(rho, sigma);
}

// Exact spectral structure of omega = |phi><phi| + eps * Delta1 x Delta2.
// The pure part lives on the paired subspace span{|e_i f_i>}, where omega
// acts as the rank-one sqrt(phi) outer product plus the diagonal part of the
// product state; every unpaired product vector |e_i f_j>, i != j, is already
// an eigenvector with eigenvalue eps * d1_i * d2_j.
class OmegaStructure {
public:
    explicit OmegaStructure(const AfwCoupling& coupling)
        : epsilon_(coupling.epsilon()),
          phi_(coupling.phi_weights()),
          d1_(coupling.delta1_aligned()),
          d2_(coupling.delta2_aligned()) {}

    std::size_t dim() const noexcept { return phi_.size(); }
    double epsilon() const noexcept { return epsilon_; }

    // paired-block entry: sqrt(phi_i phi_j) + eps*d1_i*d2_i on the diagonal
    double diag_block_entry(std::size_t i, std::size_t j) const {
        double v = std::sqrt(phi_[i] * phi_[j]);
        if (i == j) v += epsilon_ * d1_[i] * d2_[i];
        return v;
    }

    HermitianMatrix diag_block() const {
        HermitianMatrix m(dim());
        for (std::size_t i = 0; i < dim(); ++i)
            for (std::size_t j = 0; j < dim(); ++j) m.at(i, j) = diag_block_entry(i, j);
        return m;
    }

    // row-major (i,j), i != j
    std::vector<double> offdiag_eigenvalues() const {
        std::vector<double> eigs;
        eigs.reserve(dim() * dim() - dim());
        for (std::size_t i = 0; i < dim(); ++i)
            for (std::size_t j = 0; j < dim(); ++j)
                if (i != j) eigs.push_back(epsilon_ * d1_[i] * d2_[j]);
        return eigs;
    }

    std::vector<double> paired_block_eigenvalues() const {
        if (dim() <= kDenseDimCap) return hermitian_eigenvalues(diag_block());
        std::vector<double> m(dim()), z(dim());
        for (std::size_t i = 0; i < dim(); ++i) {
            m[i] = epsilon_ * d1_[i] * d2_[i];
            z[i] = std::sqrt(phi_[i]);
        }
        return diag_plus_rank_one_eigenvalues(m, z);
    }

    double trace() const {
        double t = 0.0;
        for (std::size_t i = 0; i < dim(); ++i) t += diag_block_entry(i, i);
        for (std::size_t i = 0; i < dim(); ++i)
            for (std::size_t j = 0; j < dim(); ++j)
                if (i != j) t += epsilon_ * d1_[i] * d2_[j];
        return t;
    }

    const std::vector<double>& phi_weights() const noexcept { return phi_; }
    const std::vector<double>& delta1_aligned() const noexcept { return d1_; }
    const std::vector<double>& delta2_aligned() const noexcept { return d2_; }

private:
    double epsilon_;
    std::vector<double> phi_, d1_, d2_;
};

inline OmegaStructure omega_structure(const AfwCoupling& coupling) {
    if (coupling.degenerate())
        throw std::invalid_argument("omega structure undefined for a degenerate coupling");
    return OmegaStructure(coupling);
}

// S(omega) in bits from the paired-block spectrum plus the analytic sum over
// the unpaired product eigenvalues. The unpaired part never materializes:
// sum_{i!=j} h(eps d1_i d2_j) decomposes through sum(d1)=sum(d2)=1.
inline double omega_entropy(const OmegaStructure& omega) {
    std::vector<double> block = omega.paired_block_eigenvalues();
    double s = 0.0;
    for (double lam : block) {
        if (lam < -kEigenvalueClampTolerance || lam > 1.0 + kEigenvalueClampTolerance)
            throw numeric_failure("paired-block eigenvalue outside [0,1] beyond tolerance");
        lam = std::clamp(lam, 0.0, 1.0);
        if (lam > 0.0) s -= lam * std::log2(lam);
    }

    const double eps = omega.epsilon();
    const auto& d1 = omega.delta1_aligned();
    const auto& d2 = omega.delta2_aligned();
    double s_d1 = 0.0, s_d2 = 0.0;
    for (double w : d1)
        if (w > 0.0) s_d1 -= w * std::log2(w);
    for (double w : d2)
        if (w > 0.0) s_d2 -= w * std::log2(w);
    // full product sum over all (i,j), in bits
    double full = eps * (s_d1 + s_d2 - std::log2(eps));
    // remove the diagonal (i,i) terms, which live in the paired block
    for (std::size_t i = 0; i < d1.size(); ++i) {
        const double lam = eps * d1[i] * d2[i];
        if (lam > 0.0) full += lam * std::log2(lam);
    }
    return s + full;
}

struct Prop1Report {
    bool degenerate = false;
    bool bound_holds = true;
    double delta1_energy = 0.0;
    double delta2_energy = 0.0;
    double energy_sum = 0.0;
    double energy_budget = 0.0;  // 2E
    double margin = 0.0;         // 2E - (e1 + e2)
};

inline std::pair<double, double> delta_energy(const AfwCoupling& coupling,
                                              const Spectrum& spec) {
    return {energy(coupling.delta1(), spec), energy(coupling.delta2(), spec)};
}

// Checks the defect-energy budget Tr(H D1) + Tr(H D2) <= 2E, which holds
// whenever both states are mixtures of basis states with level <= E.
inline Prop1Report check_prop1(const SpectralState& rho, const SpectralState& sigma,
                               const Spectrum& spec, double energy_cap) {
    if (!(energy_cap > 0.0)) throw std::invalid_argument("energy cap must be positive");
    if (auto bad = first_label_exceeding(rho, spec, energy_cap))
        throw hypothesis_violation("rho has a basis label above the energy cap", *bad);
    if (auto bad = first_label_exceeding(sigma, spec, energy_cap))
        throw hypothesis_violation("sigma has a basis label above the energy cap", *bad);

    Prop1Report report;
    report.energy_budget = 2.0 * energy_cap;
    const AfwCoupling coupling(rho, sigma);
    if (coupling.degenerate()) {
        report.degenerate = true;
        report.margin = report.energy_budget;
        return report;
    }
    const auto [e1, e2] = delta_energy(coupling, spec);
    report.delta1_energy = e1;
    report.delta2_energy = e2;
    report.energy_sum = e1 + e2;
    report.margin = report.energy_budget - report.energy_sum;
    report.bound_holds = report.energy_sum <= report.energy_budget + 1e-9;
    return report;
}

}  // namespace entropy_bounds
