#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "entropy_bounds/errors.hpp"
#include "entropy_bounds/io.hpp"
#include "entropy_bounds/spectra.hpp"

namespace entropy_bounds {

// Inclusive numeric grid: single value, "lo:hi:step", or "a,b,c".
struct Grid {
    std::vector<double> values;
};

inline Grid parse_grid(const std::string& text, std::size_t lineno = 0) {
    Grid grid;
    if (text.find(':') != std::string::npos) {
        std::istringstream in(text);
        std::string lo_s, hi_s, step_s;
        if (!std::getline(in, lo_s, ':') || !std::getline(in, hi_s, ':') ||
            !std::getline(in, step_s))
            throw parse_error("grid must be lo:hi:step", lineno);
        double lo, hi, step;
        try {
            lo = std::stod(lo_s);
            hi = std::stod(hi_s);
            step = std::stod(step_s);
        } catch (const std::exception&) {
            throw parse_error("non-numeric grid bound in '" + text + "'", lineno);
        }
        if (!(step > 0.0) || hi < lo)
            throw parse_error("grid needs step > 0 and hi >= lo", lineno);
        for (double v = lo; v <= hi + 1e-12 * step; v += step)
            grid.values.push_back(std::min(v, hi));
    } else {
        grid.values = parse_double_list(text);
    }
    if (grid.values.empty()) throw parse_error("empty grid", lineno);
    return grid;
}

enum class OutputFormat { csv, json };

struct ExperimentConfig {
    enum class Source { oscillator, file };
    Source source = Source::oscillator;
    double gap = 1.0;
    std::string spectrum_file;
    std::size_t truncation_dim = 64;
    double tol = 1e-10;
    std::uint64_t seed = 1;
    std::optional<Grid> epsilon_grid;
    std::optional<Grid> energy_grid;
    std::optional<double> s_rho;  // direct single-state contradiction mode
    std::size_t sample_count = 50;
    std::string out_path;
    OutputFormat format = OutputFormat::csv;
};

// Flat key-value text: one "key = value" per line, '#' comments.
inline ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            bool blank = line.find_first_not_of(" \t\r") == std::string::npos;
            if (!blank) throw parse_error("expected 'key = value'", lineno);
            continue;
        }
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos) return std::string();
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw parse_error("expected 'key = value'", lineno);

        try {
            if (key == "spectrum") {
                if (value == "oscillator")
                    cfg.source = ExperimentConfig::Source::oscillator;
                else
                    throw parse_error("unknown spectrum '" + value +
                                          "' (use 'oscillator' or spectrum_file)",
                                      lineno);
            } else if (key == "spectrum_file") {
                cfg.source = ExperimentConfig::Source::file;
                cfg.spectrum_file = value;
            } else if (key == "gap") {
                cfg.gap = std::stod(value);
            } else if (key == "truncation_dim") {
                cfg.truncation_dim = std::stoul(value);
            } else if (key == "tol") {
                cfg.tol = std::stod(value);
            } else if (key == "seed") {
                cfg.seed = std::stoull(value);
            } else if (key == "epsilon") {
                cfg.epsilon_grid = parse_grid(value, lineno);
            } else if (key == "energy") {
                cfg.energy_grid = parse_grid(value, lineno);
            } else if (key == "s_rho") {
                cfg.s_rho = std::stod(value);
            } else if (key == "sample_count") {
                cfg.sample_count = std::stoul(value);
            } else if (key == "out") {
                cfg.out_path = value;
            } else if (key == "format") {
                if (value == "csv")
                    cfg.format = OutputFormat::csv;
                else if (value == "json")
                    cfg.format = OutputFormat::json;
                else
                    throw parse_error("format must be csv or json", lineno);
            } else {
                throw parse_error("unknown config key '" + key + "'", lineno);
            }
        } catch (const parse_error&) {
            throw;
        } catch (const std::exception&) {
            throw parse_error("invalid value for '" + key + "'", lineno);
        }
    }
    if (!(cfg.tol > 0.0)) throw parse_error("tol must be positive");
    if (cfg.truncation_dim < 2) throw parse_error("truncation_dim must be >= 2");
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open config file '" + path + "'");
    return parse_config(in);
}

inline Spectrum make_spectrum(const ExperimentConfig& cfg) {
    if (cfg.source == ExperimentConfig::Source::oscillator)
        return Spectrum::harmonic_oscillator(cfg.gap, cfg.truncation_dim);
    std::ifstream in(cfg.spectrum_file);
    if (!in) throw parse_error("cannot open spectrum file '" + cfg.spectrum_file + "'");
    return Spectrum::load(in);
}

}  // namespace entropy_bounds
