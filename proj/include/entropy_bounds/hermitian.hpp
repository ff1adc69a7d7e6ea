#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <vector>

#include "entropy_bounds/errors.hpp"

namespace entropy_bounds {

using complexd = std::complex<double>;

// Dense complex matrix, row-major. Only Hermitian use is supported; the
// eigensolver below rejects inputs that are not Hermitian within tolerance.
class HermitianMatrix {
public:
    explicit HermitianMatrix(std::size_t dim)
        : dim_(dim), data_(dim * dim, complexd(0.0, 0.0)) {}

    static HermitianMatrix from_rows(std::initializer_list<std::initializer_list<complexd>> rows) {
        HermitianMatrix m(rows.size());
        std::size_t i = 0;
        for (const auto& row : rows) {
            if (row.size() != m.dim_)
                throw std::invalid_argument("matrix rows must have equal length");
            std::size_t j = 0;
            for (const complexd& v : row) m.at(i, j++) = v;
            ++i;
        }
        return m;
    }

    static HermitianMatrix diagonal(const std::vector<double>& d) {
        HermitianMatrix m(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m.at(i, i) = d[i];
        return m;
    }

    std::size_t dim() const noexcept { return dim_; }

    complexd& at(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
    const complexd& at(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }

    double max_abs() const {
        double m = 0.0;
        for (const complexd& v : data_) m = std::max(m, std::abs(v));
        return m;
    }

    double hermiticity_error() const {
        double e = 0.0;
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = i; j < dim_; ++j)
                e = std::max(e, std::abs(at(i, j) - std::conj(at(j, i))));
        return e;
    }

    complexd trace() const {
        complexd t = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) t += at(i, i);
        return t;
    }

    HermitianMatrix operator-(const HermitianMatrix& other) const {
        if (other.dim_ != dim_)
            throw std::invalid_argument("matrix dimension mismatch");
        HermitianMatrix r(dim_);
        for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = data_[k] - other.data_[k];
        return r;
    }

private:
    std::size_t dim_;
    std::vector<complexd> data_;
};

struct EigenSystem {
    std::vector<double> values;     // nonincreasing
    std::vector<complexd> vectors;  // row-major dim x dim, column k pairs with values[k]
    std::size_t dim = 0;

    complexd vector_entry(std::size_t row, std::size_t col) const {
        return vectors[row * dim + col];
    }
};

namespace detail {

// One cyclic-Jacobi pass state: annihilates entry (p,q) of a Hermitian
// matrix by a complex rotation and accumulates the transform in vecs.
inline void jacobi_rotate(HermitianMatrix& a, std::vector<complexd>* vecs,
                          std::size_t p, std::size_t q) {
    const complexd apq = a.at(p, q);
    const double mag = std::abs(apq);
    if (mag == 0.0) return;
    const double app = a.at(p, p).real();
    const double aqq = a.at(q, q).real();
    const complexd phase = apq / mag;

    const double theta = (aqq - app) / (2.0 * mag);
    const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                     (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;

    const std::size_t n = a.dim();
    // columns p and q: A <- A R with R_pp = c, R_pq = s*phase,
    // R_qp = -s*conj(phase), R_qq = c
    for (std::size_t i = 0; i < n; ++i) {
        const complexd aip = a.at(i, p);
        const complexd aiq = a.at(i, q);
        a.at(i, p) = c * aip - s * std::conj(phase) * aiq;
        a.at(i, q) = s * phase * aip + c * aiq;
    }
    // rows p and q: A <- R^* A
    for (std::size_t j = 0; j < n; ++j) {
        const complexd apj = a.at(p, j);
        const complexd aqj = a.at(q, j);
        a.at(p, j) = c * apj - s * phase * aqj;
        a.at(q, j) = s * std::conj(phase) * apj + c * aqj;
    }
    // clean the annihilated pair and enforce real diagonal
    a.at(p, q) = 0.0;
    a.at(q, p) = 0.0;
    a.at(p, p) = complexd(a.at(p, p).real(), 0.0);
    a.at(q, q) = complexd(a.at(q, q).real(), 0.0);

    if (vecs) {
        for (std::size_t i = 0; i < n; ++i) {
            const complexd vip = (*vecs)[i * n + p];
            const complexd viq = (*vecs)[i * n + q];
            (*vecs)[i * n + p] = c * vip - s * std::conj(phase) * viq;
            (*vecs)[i * n + q] = s * phase * vip + c * viq;
        }
    }
}

inline double off_diagonal_max(const HermitianMatrix& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = i + 1; j < a.dim(); ++j)
            m = std::max(m, std::abs(a.at(i, j)));
    return m;
}

inline EigenSystem jacobi_eigensystem(HermitianMatrix a, bool want_vectors) {
    const std::size_t n = a.dim();
    const double scale = std::max(1.0, a.max_abs());
    if (a.hermiticity_error() > 1e-12 * scale)
        throw std::invalid_argument("matrix is not Hermitian within tolerance");
    // symmetrize to kill representational drift before iterating
    for (std::size_t i = 0; i < n; ++i) {
        a.at(i, i) = complexd(a.at(i, i).real(), 0.0);
        for (std::size_t j = i + 1; j < n; ++j) {
            const complexd avg = 0.5 * (a.at(i, j) + std::conj(a.at(j, i)));
            a.at(i, j) = avg;
            a.at(j, i) = std::conj(avg);
        }
    }

    EigenSystem sys;
    sys.dim = n;
    if (want_vectors) {
        sys.vectors.assign(n * n, complexd(0.0, 0.0));
        for (std::size_t i = 0; i < n; ++i) sys.vectors[i * n + i] = 1.0;
    }

    const double stop = 1e-15 * scale;
    const int max_sweeps = 100;
    int sweep = 0;
    while (off_diagonal_max(a) > stop) {
        if (++sweep > max_sweeps)
            throw numeric_failure("Jacobi eigensolver exceeded sweep cap");
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                if (std::abs(a.at(p, q)) > stop)
                    jacobi_rotate(a, want_vectors ? &sys.vectors : nullptr, p, q);
    }

    sys.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) sys.values[i] = a.at(i, i).real();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return sys.values[x] > sys.values[y];
    });
    std::vector<double> sorted(n);
    for (std::size_t k = 0; k < n; ++k) sorted[k] = sys.values[order[k]];
    if (want_vectors) {
        std::vector<complexd> perm(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) perm[i * n + k] = sys.vectors[i * n + order[k]];
        sys.vectors = std::move(perm);
    }
    sys.values = std::move(sorted);
    return sys;
}

}  // namespace detail

// Full real spectrum of a Hermitian matrix, sorted nonincreasing.
inline std::vector<double> hermitian_eigenvalues(const HermitianMatrix& a) {
    return detail::jacobi_eigensystem(a, false).values;
}

inline EigenSystem hermitian_eigensystem(const HermitianMatrix& a) {
    return detail::jacobi_eigensystem(a, true);
}

// Eigenvalues of diag(d) + z z^T for real d, z, via the secular equation.
// Deterministic bisection per root; no dimension cap. Used for the coupling's
// paired block when it outgrows the dense-solver cap.
inline std::vector<double> diag_plus_rank_one_eigenvalues(const std::vector<double>& diag,
                                                          const std::vector<double>& z) {
    if (diag.size() != z.size())
        throw std::invalid_argument("diag/z length mismatch");
    std::vector<double> eigs;
    eigs.reserve(diag.size());

    // deflate zero components, group exactly equal diagonal entries
    std::vector<std::pair<double, double>> groups;  // (value, summed z^2)
    {
        std::vector<std::size_t> order(diag.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return diag[a] < diag[b]; });
        for (std::size_t k : order) {
            const double w = z[k] * z[k];
            if (w == 0.0) {
                eigs.push_back(diag[k]);
                continue;
            }
            if (!groups.empty() && groups.back().first == diag[k])
                groups.back().second += w;
            else
                groups.emplace_back(diag[k], w);
        }
    }
    // each equal-value group of size m contributes (m-1) untouched copies;
    // grouping above already folded them into one secular term, so recover
    // the copies by counting multiplicities in the sorted input
    {
        std::vector<double> sorted_d;
        for (std::size_t i = 0; i < diag.size(); ++i)
            if (z[i] * z[i] != 0.0) sorted_d.push_back(diag[i]);
        std::sort(sorted_d.begin(), sorted_d.end());
        for (std::size_t i = 1; i < sorted_d.size(); ++i)
            if (sorted_d[i] == sorted_d[i - 1]) eigs.push_back(sorted_d[i]);
    }

    const std::size_t k = groups.size();
    if (k == 0) {
        std::sort(eigs.begin(), eigs.end(), std::greater<>());
        return eigs;
    }

    double weight_total = 0.0;
    for (const auto& g : groups) weight_total += g.second;

    auto secular = [&](double lambda) {
        double f = 1.0;
        for (const auto& g : groups) f += g.second / (g.first - lambda);
        return f;
    };

    // one root strictly inside each gap, one above the top entry
    for (std::size_t j = 0; j < k; ++j) {
        double lo = groups[j].first;
        double hi = (j + 1 < k) ? groups[j + 1].first : groups[j].first + weight_total;
        if (!(hi > lo)) {
            eigs.push_back(lo);
            continue;
        }
        // f -> -inf at lo+, f > 0 near hi- (interior) or f(hi) >= 0 (top)
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            if (secular(mid) >= 0.0)
                hi = mid;
            else
                lo = mid;
        }
        eigs.push_back(hi);
    }

    std::sort(eigs.begin(), eigs.end(), std::greater<>());
    return eigs;
}

}  // namespace entropy_bounds
