#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace entropy_bounds {

// Malformed input text (spectrum file, state file, config). line is 1-based,
// 0 when the failure is not tied to a specific line.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& msg, std::size_t line = 0)
        : std::runtime_error(line ? msg + " (line " + std::to_string(line) + ")" : msg),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// A domain-type invariant failed to hold on construction.
class invariant_violation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An iterative routine did not converge within its cap, or a value left
// the numerically admissible range by more than the clamp tolerance.
class numeric_failure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Requested mean energy lies outside what the truncated spectrum can reach.
// Carries the reachable open interval for diagnostics.
class energy_out_of_range : public std::runtime_error {
public:
    energy_out_of_range(const std::string& msg, double reachable_min, double reachable_max)
        : std::runtime_error(msg + " [reachable interval (" + std::to_string(reachable_min) +
                             ", " + std::to_string(reachable_max) + ")]"),
          reachable_min_(reachable_min),
          reachable_max_(reachable_max) {}

    double reachable_min() const noexcept { return reachable_min_; }
    double reachable_max() const noexcept { return reachable_max_; }

private:
    double reachable_min_;
    double reachable_max_;
};

// Truncation auto-extension hit the hard dimension cap before the requested
// certificate could be produced.
class truncation_cap_error : public std::runtime_error {
public:
    truncation_cap_error(const std::string& msg, std::size_t cap)
        : std::runtime_error(msg + " [cap " + std::to_string(cap) + "]"), cap_(cap) {}

    std::size_t cap() const noexcept { return cap_; }

private:
    std::size_t cap_;
};

// A bound's hypothesis does not hold for the given states; carries the
// first offending basis label.
class hypothesis_violation : public std::runtime_error {
public:
    hypothesis_violation(const std::string& msg, std::size_t offending_label)
        : std::runtime_error(msg + " [label " + std::to_string(offending_label) + "]"),
          label_(offending_label) {}

    std::size_t offending_label() const noexcept { return label_; }

private:
    std::size_t label_;
};

// The entropy threshold search exhausted the spectrum (no tail model, or the
// truncation cap) before the target was exceeded. Carries the partial data.
class threshold_not_reached : public std::runtime_error {
public:
    threshold_not_reached(const std::string& msg, double achieved_entropy_bits,
                          double max_energy_probed)
        : std::runtime_error(msg),
          achieved_entropy_bits_(achieved_entropy_bits),
          max_energy_probed_(max_energy_probed) {}

    double achieved_entropy_bits() const noexcept { return achieved_entropy_bits_; }
    double max_energy_probed() const noexcept { return max_energy_probed_; }

private:
    double achieved_entropy_bits_;
    double max_energy_probed_;
};

}  // namespace entropy_bounds
