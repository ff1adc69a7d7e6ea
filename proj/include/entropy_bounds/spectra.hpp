#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "entropy_bounds/errors.hpp"

namespace entropy_bounds {

// Analytic model for the spectrum beyond the retained truncation. Used to
// certify partition-function tails and to extend the truncation on demand.
enum class TailModel { none, linear_gap, power_law };

struct TailDescriptor {
    TailModel model = TailModel::none;
    // linear_gap: constant gap g appended beyond the last level (g = 0 models
    //             a bounded tail and certifies nothing).
    // power_law : exponent p >= 1; levels extrapolate as scale * n^p.
    double param = 0.0;
    double scale = 0.0;  // power_law extrapolation coefficient, 0 = underived
};

enum class Summability { certified, heuristic, unknown };

inline const char* to_string(Summability s) {
    switch (s) {
        case Summability::certified: return "certified";
        case Summability::heuristic: return "heuristic";
        default: return "unknown";
    }
}

// Ordered energy levels of a Hamiltonian, ground state pinned at 0.
// Immutable after construction.
class Spectrum {
public:
    Spectrum(std::vector<double> levels, TailDescriptor tail = {})
        : levels_(std::move(levels)), tail_(tail) {
        if (levels_.empty())
            throw invariant_violation("spectrum must contain at least one level");
        for (std::size_t i = 0; i < levels_.size(); ++i) {
            if (!std::isfinite(levels_[i]))
                throw invariant_violation("spectrum level " + std::to_string(i) +
                                          " is not finite");
            if (i > 0 && levels_[i] < levels_[i - 1])
                throw invariant_violation("spectrum levels must be nondecreasing (index " +
                                          std::to_string(i) + ")");
        }
        if (levels_.front() != 0.0) {
            ground_shift_ = levels_.front();
            for (double& e : levels_) e -= ground_shift_;
        }
        if (tail_.model == TailModel::power_law) {
            if (tail_.param < 1.0)
                throw invariant_violation("power-law tail exponent must be >= 1");
            if (tail_.scale == 0.0 && levels_.size() >= 2 && levels_.back() > 0.0)
                tail_.scale = levels_.back() /
                              std::pow(double(levels_.size() - 1), tail_.param);
        }
        if (tail_.model == TailModel::linear_gap && tail_.param < 0.0)
            throw invariant_violation("linear-gap tail gap must be >= 0");
    }

    static Spectrum harmonic_oscillator(double gap, std::size_t dim) {
        if (!(gap > 0.0))
            throw std::invalid_argument("oscillator gap must be positive");
        if (dim < 2)
            throw std::invalid_argument("oscillator dimension must be at least 2");
        std::vector<double> levels(dim);
        for (std::size_t n = 0; n < dim; ++n) levels[n] = double(n) * gap;
        return Spectrum(std::move(levels), TailDescriptor{TailModel::linear_gap, gap, 0.0});
    }

    static Spectrum power_law(double scale, double exponent, std::size_t dim) {
        if (!(scale > 0.0))
            throw std::invalid_argument("power-law scale must be positive");
        if (exponent < 1.0)
            throw std::invalid_argument("power-law exponent must be >= 1");
        if (dim < 2)
            throw std::invalid_argument("power-law dimension must be at least 2");
        std::vector<double> levels(dim);
        for (std::size_t n = 0; n < dim; ++n)
            levels[n] = scale * std::pow(double(n), exponent);
        return Spectrum(std::move(levels),
                        TailDescriptor{TailModel::power_law, exponent, scale});
    }

    // Text format: one decimal energy per line, '#' comment lines ignored.
    // Optional header "#tail: linear-gap <g>" or "#tail: power <p>".
    // A nonzero ground level is shifted to 0 and the shift recorded.
    static Spectrum load(std::istream& in) {
        std::vector<double> levels;
        TailDescriptor tail;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            std::string trimmed = trim(line);
            if (trimmed.empty()) continue;
            if (trimmed.front() == '#') {
                parse_tail_header(trimmed, lineno, tail);
                continue;
            }
            std::size_t pos = 0;
            double value = 0.0;
            try {
                value = std::stod(trimmed, &pos);
            } catch (const std::exception&) {
                throw parse_error("non-numeric spectrum line '" + trimmed + "'", lineno);
            }
            if (trim(trimmed.substr(pos)) != "")
                throw parse_error("trailing characters after energy value", lineno);
            if (!std::isfinite(value))
                throw parse_error("non-finite energy value", lineno);
            if (!levels.empty() && value < levels.back())
                throw invariant_violation("decreasing level at line " +
                                          std::to_string(lineno));
            levels.push_back(value);
        }
        if (levels.empty()) throw parse_error("spectrum file contains no levels");
        return Spectrum(std::move(levels), tail);
    }

    static Spectrum load(const std::string& text) {
        std::istringstream in(text);
        return load(in);
    }

    void serialize(std::ostream& out) const {
        out.precision(17);
        if (tail_.model == TailModel::linear_gap)
            out << "#tail: linear-gap " << tail_.param << "\n";
        else if (tail_.model == TailModel::power_law)
            out << "#tail: power " << tail_.param << "\n";
        for (double e : levels_) out << e << "\n";
    }

    const std::vector<double>& levels() const noexcept { return levels_; }
    double level(std::size_t i) const { return levels_.at(i); }
    std::size_t dim() const noexcept { return levels_.size(); }
    const TailDescriptor& tail() const noexcept { return tail_; }
    double ground_shift() const noexcept { return ground_shift_; }
    double max_level() const noexcept { return levels_.back(); }

    double mean_level() const {
        double s = 0.0;
        for (double e : levels_) s += e;
        return s / double(levels_.size());
    }

    // Smallest strictly positive gap between consecutive levels; 0 if none.
    double min_positive_gap() const {
        double g = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < levels_.size(); ++i) {
            double d = levels_[i] - levels_[i - 1];
            if (d > 0.0 && d < g) g = d;
        }
        return std::isfinite(g) ? g : 0.0;
    }

    bool extendable() const noexcept {
        if (tail_.model == TailModel::linear_gap) return tail_.param > 0.0;
        if (tail_.model == TailModel::power_law) return tail_.scale > 0.0;
        return false;
    }

    // Grows the truncation to new_dim by appending model levels. The tail
    // model itself is preserved so extensions compose consistently.
    Spectrum extended(std::size_t new_dim) const {
        if (new_dim <= dim()) return *this;
        if (!extendable())
            throw invariant_violation("spectrum has no extendable tail model");
        std::vector<double> levels = levels_;
        levels.reserve(new_dim);
        if (tail_.model == TailModel::linear_gap) {
            double last = levels.back();
            for (std::size_t n = dim(); n < new_dim; ++n)
                levels.push_back(last + tail_.param * double(n - dim() + 1));
        } else {
            for (std::size_t n = dim(); n < new_dim; ++n) {
                double e = tail_.scale * std::pow(double(n), tail_.param);
                levels.push_back(std::max(e, levels.back()));
            }
        }
        return Spectrum(std::move(levels), tail_);
    }

    // Certified upper bound on sum_{n >= dim} exp(-beta * level_n) under the
    // tail model; nullopt when the model certifies nothing.
    std::optional<double> tail_sum_bound(double beta) const {
        if (!(beta > 0.0)) return std::nullopt;
        if (tail_.model == TailModel::linear_gap && tail_.param > 0.0) {
            // levels beyond the truncation are last + g*k, k >= 1
            double r = std::exp(-beta * tail_.param);
            return std::exp(-beta * levels_.back()) * r / (1.0 - r);
        }
        if (tail_.model == TailModel::power_law && tail_.scale > 0.0) {
            // n^p >= n * d^(p-1) for n >= d, p >= 1 turns the tail geometric
            double d = double(dim());
            double rate = beta * tail_.scale * std::pow(d, tail_.param - 1.0);
            double r = std::exp(-rate);
            if (r >= 1.0) return std::nullopt;
            return std::pow(r, d) / (1.0 - r);
        }
        return std::nullopt;
    }

private:
    static std::string trim(const std::string& s) {
        auto b = s.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) return "";
        auto e = s.find_last_not_of(" \t\r\n");
        return s.substr(b, e - b + 1);
    }

    static void parse_tail_header(const std::string& comment, std::size_t lineno,
                                  TailDescriptor& tail) {
        const std::string key = "#tail:";
        if (comment.compare(0, key.size(), key) != 0) return;
        std::istringstream rest(comment.substr(key.size()));
        std::string kind;
        double param = 0.0;
        if (!(rest >> kind >> param))
            throw parse_error("malformed tail header", lineno);
        if (kind == "linear-gap")
            tail = TailDescriptor{TailModel::linear_gap, param, 0.0};
        else if (kind == "power")
            tail = TailDescriptor{TailModel::power_law, param, 0.0};
        else
            throw parse_error("unknown tail model '" + kind + "'", lineno);
    }

    std::vector<double> levels_;
    TailDescriptor tail_;
    double ground_shift_ = 0.0;
};

// Verdict on whether Tr(exp(-beta * H)) converges for the modelled spectrum.
// certified: the tail model yields a computable convergent tail bound.
// heuristic: only the finite truncation is available but the observed level
//            growth is super-logarithmic, so convergence is plausible.
// unknown:   a bounded tail, or too little data to judge growth.
inline Summability check_gibbs_summable(const Spectrum& spec, double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
    const TailDescriptor& tail = spec.tail();
    if (tail.model == TailModel::linear_gap)
        return tail.param > 0.0 ? Summability::certified : Summability::unknown;
    if (tail.model == TailModel::power_law)
        return tail.scale > 0.0 ? Summability::certified : Summability::unknown;
    const std::size_t d = spec.dim();
    if (d < 3) return Summability::unknown;
    const double lo = spec.level(d / 2);
    const double hi = spec.level(d - 1);
    const double log_growth = std::log(double(d - 1)) - std::log(double(d / 2));
    if (hi > lo && hi - lo > log_growth) return Summability::heuristic;
    return Summability::unknown;
}

}  // namespace entropy_bounds
