#pragma once

#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "entropy_bounds/afw.hpp"
#include "entropy_bounds/bounds.hpp"
#include "entropy_bounds/check.hpp"
#include "entropy_bounds/config.hpp"
#include "entropy_bounds/contradiction.hpp"
#include "entropy_bounds/io.hpp"
#include "entropy_bounds/maxent.hpp"
#include "entropy_bounds/sampling.hpp"
#include "entropy_bounds/spectra.hpp"

namespace entropy_bounds {
namespace cli {

// exit codes: 0 success, 1 numeric failure, 2 config/parse error,
// 3 entropy threshold not reached
inline constexpr int kExitOk = 0;
inline constexpr int kExitNumeric = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitThreshold = 3;

namespace detail {

inline int with_output(const ExperimentConfig& cfg, std::ostream& console, std::ostream& err,
                       const std::function<int(std::ostream&)>& body) {
    if (cfg.out_path.empty()) return body(console);
    std::ofstream file(cfg.out_path, std::ios::binary);
    if (!file) {
        err << "error: cannot open output file '" << cfg.out_path << "'\n";
        return kExitConfig;
    }
    return body(file);
}

inline SpectralState resolve_state(const std::string& file, const std::string& weights,
                                   const std::string& labels) {
    if (!file.empty()) {
        std::ifstream in(file);
        if (!in) throw parse_error("cannot open state file '" + file + "'");
        return load_state(in);
    }
    std::vector<double> w = parse_double_list(weights);
    std::vector<std::size_t> l;
    if (!labels.empty()) {
        l = parse_index_list(labels);
    } else {
        l.resize(w.size());
        for (std::size_t i = 0; i < l.size(); ++i) l[i] = i;
    }
    return SpectralState(std::move(w), std::move(l));
}

}  // namespace detail

// --- gibbs: thermal solves over an energy grid -----------------------------

inline int run_gibbs(const ExperimentConfig& cfg, std::ostream& dest, std::ostream& err) {
    if (!cfg.energy_grid || cfg.energy_grid->values.empty()) {
        err << "error: gibbs needs an energy grid (config key 'energy')\n";
        return kExitConfig;
    }
    const Spectrum spec = make_spectrum(cfg);
    bool had_error = false;

    struct Row {
        double energy;
        std::optional<ThermalSolve> solve;
        std::string status;
    };
    std::vector<Row> rows;
    for (double e : cfg.energy_grid->values) {
        Row row{e, std::nullopt, "ok"};
        try {
            row.solve = thermal_for_energy(spec, e, cfg.tol);
        } catch (const energy_out_of_range&) {
            row.status = "energy-out-of-range";
            had_error = true;
        } catch (const truncation_cap_error&) {
            row.status = "truncation-cap";
            had_error = true;
        }
        rows.push_back(std::move(row));
    }

    if (cfg.format == OutputFormat::csv) {
        dest << "E,beta,entropy_bits,tail_bound,status\n";
        for (const Row& row : rows) {
            dest << format_double(row.energy) << ',';
            if (row.solve) {
                dest << format_double(row.solve->beta) << ','
                     << format_double(row.solve->entropy_bits) << ','
                     << format_optional(row.solve->tail_bound);
            } else {
                dest << ",,";
            }
            dest << ',' << row.status << '\n';
        }
    } else {
        nlohmann::json out = nlohmann::json::array();
        for (const Row& row : rows) {
            nlohmann::json j{{"E", row.energy}, {"status", row.status}};
            if (row.solve) {
                j["beta"] = row.solve->beta;
                j["entropy_bits"] = row.solve->entropy_bits;
                j["truncation_dim"] = row.solve->truncation_dim;
                if (row.solve->tail_bound) j["tail_bound"] = *row.solve->tail_bound;
            }
            out.push_back(std::move(j));
        }
        dest << out.dump(2) << '\n';
    }
    return had_error ? kExitConfig : kExitOk;
}

// --- afw: one coupling report ----------------------------------------------

struct AfwArgs {
    std::string rho_file, sigma_file;
    std::string rho_weights, sigma_weights;
    std::string rho_labels, sigma_labels;
};

inline int run_afw(const ExperimentConfig& cfg, const AfwArgs& args, std::ostream& dest,
                   std::ostream& err) {
    const Spectrum spec = make_spectrum(cfg);

    SpectralState rho = SpectralState::pure(0);
    SpectralState sigma = SpectralState::pure(0);
    const bool rho_given = !args.rho_file.empty() || !args.rho_weights.empty();
    const bool sigma_given = !args.sigma_file.empty() || !args.sigma_weights.empty();
    if (rho_given != sigma_given) {
        err << "error: afw needs both states (or neither, for a seeded random pair)\n";
        return kExitConfig;
    }
    if (rho_given) {
        rho = detail::resolve_state(args.rho_file, args.rho_weights, args.rho_labels);
        sigma = detail::resolve_state(args.sigma_file, args.sigma_weights, args.sigma_labels);
    } else {
        Rng rng(cfg.seed);
        std::vector<std::size_t> labels(std::min<std::size_t>(spec.dim(), 16));
        for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = i;
        rho = random_state(rng, labels);
        sigma = random_state(rng, labels);
    }

    const double s_rho = von_neumann_entropy(rho);
    const double s_sigma = von_neumann_entropy(sigma);
    const AfwCoupling coupling(rho, sigma);

    nlohmann::json report{{"epsilon", coupling.epsilon()},
                          {"s_rho", s_rho},
                          {"s_sigma", s_sigma}};
    if (coupling.degenerate()) {
        report["status"] = "degenerate";
        report["phi_trace"] = 1.0;
    } else {
        double phi_trace = 0.0;
        for (double p : coupling.phi_weights()) phi_trace += p;
        const auto [e1, e2] = delta_energy(coupling, spec);
        const double s_omega = omega_entropy(omega_structure(coupling));
        const double bound_rhs =
            coupling.epsilon() * (von_neumann_entropy(coupling.delta1()) +
                                  von_neumann_entropy(coupling.delta2())) +
            binary_entropy(coupling.epsilon());
        report["status"] = "ok";
        report["phi_trace"] = phi_trace;
        report["delta1_energy"] = e1;
        report["delta2_energy"] = e2;
        report["s_omega"] = s_omega;
        report["bound_rhs"] = bound_rhs;
        report["holds"] = std::abs(s_rho - s_sigma) <= s_omega + 1e-9 &&
                          s_omega <= bound_rhs + 1e-9;
    }
    dest << report.dump(2) << '\n';
    return kExitOk;
}

// --- bounds: sweep over (epsilon, E) grids ----------------------------------

inline int run_bounds(const ExperimentConfig& cfg, std::ostream& dest, std::ostream& err) {
    if (!cfg.epsilon_grid || !cfg.energy_grid) {
        err << "error: bounds needs both 'epsilon' and 'energy' grids\n";
        return kExitConfig;
    }
    const Spectrum spec = make_spectrum(cfg);
    Rng rng(cfg.seed);

    std::size_t validity_violations = 0;
    std::size_t dominance_violations = 0;

    auto flags_of = [](const BoundReport& r) {
        std::string f = r.mean_energy_hypothesis ? "mean" : "-";
        f += r.bounded_label_hypothesis ? "+labels" : "";
        return f;
    };

    std::vector<BoundReport> rows;
    rows.reserve(cfg.epsilon_grid->values.size() * cfg.energy_grid->values.size() *
                 cfg.sample_count);
    for (double energy_cap : cfg.energy_grid->values) {
        const auto labels = labels_with_level_at_most(spec, energy_cap);
        for (double eps : cfg.epsilon_grid->values) {
            // grid-level dominance: a pure function comparison at (eps, E)
            try {
                const double m = mixture_bound(eps, energy_cap, spec, cfg.tol);
                const double w = winter_bound(eps, energy_cap, spec, cfg.tol);
                if (m > w + 1e-9) ++dominance_violations;
            } catch (const energy_out_of_range&) {
            } catch (const truncation_cap_error&) {
            }
            for (std::size_t k = 0; k < cfg.sample_count; ++k) {
                const SteeredPair pair = steered_pair(rng, labels, eps);
                const BoundReport report =
                    compare_bounds(pair.rho, pair.sigma, spec, energy_cap, cfg.tol);
                if (report.mixture && report.actual_diff > *report.mixture + 1e-9)
                    ++validity_violations;
                if (report.mixture && report.winter && *report.mixture > *report.winter + 1e-9)
                    ++dominance_violations;
                rows.push_back(report);
            }
        }
    }

    if (cfg.format == OutputFormat::csv) {
        dest << "epsilon,E,actual_diff,audenaert,winter,mixture,tightest,hypothesis_flags\n";
        for (const BoundReport& r : rows) {
            dest << format_double(r.epsilon) << ',' << format_double(r.energy_cap) << ','
                 << format_double(r.actual_diff) << ',' << format_optional(r.audenaert) << ','
                 << format_optional(r.winter) << ',' << format_optional(r.mixture) << ','
                 << to_string(r.tightest) << ',' << flags_of(r) << '\n';
        }
        dest << "# validity_violations=" << validity_violations << '\n';
        dest << "# dominance_violations=" << dominance_violations << '\n';
    } else {
        nlohmann::json out;
        out["rows"] = nlohmann::json::array();
        for (const BoundReport& r : rows) {
            nlohmann::json j{{"epsilon", r.epsilon},
                             {"E", r.energy_cap},
                             {"actual_diff", r.actual_diff},
                             {"tightest", to_string(r.tightest)},
                             {"hypothesis_flags", flags_of(r)}};
            if (r.audenaert) j["audenaert"] = *r.audenaert;
            if (r.winter) {
                j["winter"] = *r.winter;
                j["winter_uncertainty"] = r.winter_uncertainty;
            }
            if (r.mixture) {
                j["mixture"] = *r.mixture;
                j["mixture_uncertainty"] = r.mixture_uncertainty;
            }
            out["rows"].push_back(std::move(j));
        }
        out["validity_violations"] = validity_violations;
        out["dominance_violations"] = dominance_violations;
        dest << out.dump(2) << '\n';
    }
    return kExitOk;
}

// --- contradiction: entropy threshold certificates ---------------------------

inline int run_contradiction(const ExperimentConfig& cfg, std::ostream& dest,
                             std::ostream& console, std::ostream& err) {
    if (!cfg.energy_grid || cfg.energy_grid->values.empty()) {
        err << "error: contradiction needs the energy cap E (config key 'energy')\n";
        return kExitConfig;
    }
    const double energy_cap = cfg.energy_grid->values.front();
    const Spectrum spec = make_spectrum(cfg);

    std::vector<StateContradiction> entries;
    if (cfg.s_rho) {
        StateContradiction entry;
        entry.index = 0;
        entry.state_entropy = *cfg.s_rho;
        entry.state_energy = energy_cap;
        try {
            entry.certificate =
                find_contradiction_energy(spec, energy_cap, *cfg.s_rho, cfg.tol);
            entry.status = "ok";
        } catch (const threshold_not_reached& e) {
            entry.status = "threshold-not-reached";
            entry.achieved_entropy = e.achieved_entropy_bits();
            entry.max_energy_probed = e.max_energy_probed();
        }
        entries.push_back(std::move(entry));
    } else {
        // seeded thermal-like sample states with energies in [E, 10E],
        // solved on the fixed truncation so labels stay in range
        Rng rng(cfg.seed);
        const Spectrum fixed(spec.levels(), TailDescriptor{});
        std::vector<SpectralState> samples;
        for (std::size_t k = 0; k < cfg.sample_count; ++k) {
            const double target = energy_cap * (1.0 + 9.0 * rng.uniform01());
            samples.push_back(thermal_for_energy(fixed, target, cfg.tol).state);
        }
        entries = theorem4_report(spec, energy_cap, samples, cfg.tol);
    }

    bool any_not_reached = false;
    std::size_t reached = 0;
    for (const StateContradiction& entry : entries) {
        if (entry.status == "ok") {
            ++reached;
            console << "state " << entry.index << ": S=" << format_double(entry.state_entropy)
                    << " bits -> threshold E~=" << format_double(entry.certificate->threshold_energy)
                    << " (S(gamma)=" << format_double(entry.certificate->entropy_at_threshold)
                    << " > S+slack=" << format_double(entry.state_entropy + entry.certificate->slack)
                    << ")\n";
        } else {
            any_not_reached = any_not_reached || entry.status == "threshold-not-reached";
            console << "state " << entry.index << ": " << entry.status << '\n';
        }
    }
    if (entries.size() > 1 && reached == entries.size())
        console << "every sampled state reached a finite threshold: numerical witness that "
                   "no basis with level expectations <= E can carry these states\n";

    if (cfg.format == OutputFormat::csv) {
        dest << "E,s_rho,slack,threshold,gamma_entropy_at_threshold,status\n";
        for (const StateContradiction& entry : entries) {
            dest << format_double(energy_cap) << ',' << format_double(entry.state_entropy)
                 << ',';
            if (entry.certificate) {
                dest << format_double(entry.certificate->slack) << ','
                     << format_double(entry.certificate->threshold_energy) << ','
                     << format_double(entry.certificate->entropy_at_threshold);
            } else {
                dest << ",,";
            }
            dest << ',' << entry.status << '\n';
        }
    } else {
        nlohmann::json out = nlohmann::json::array();
        for (const StateContradiction& entry : entries) {
            nlohmann::json j{{"index", entry.index},
                             {"E", energy_cap},
                             {"s_rho", entry.state_entropy},
                             {"state_energy", entry.state_energy},
                             {"status", entry.status}};
            if (entry.certificate) {
                j["slack"] = entry.certificate->slack;
                j["threshold"] = entry.certificate->threshold_energy;
                j["gamma_entropy_at_threshold"] = entry.certificate->entropy_at_threshold;
                j["bracket_energy"] = entry.certificate->previous_energy;
                j["truncation_note"] = entry.certificate->truncation_note;
            } else {
                j["achieved_entropy"] = entry.achieved_entropy;
                j["max_energy_probed"] = entry.max_energy_probed;
            }
            out.push_back(std::move(j));
        }
        dest << out.dump(2) << '\n';
    }
    return any_not_reached ? kExitThreshold : kExitOk;
}

// --- check: the property suite ------------------------------------------------

inline int run_check(const ExperimentConfig& cfg, std::ostream& dest) {
    const Spectrum spec = make_spectrum(cfg);
    const std::vector<PropertyResult> suite =
        run_property_suite(spec, cfg.seed, cfg.tol, cfg.sample_count);

    std::size_t total_violations = 0;
    if (cfg.format == OutputFormat::csv) {
        dest << "property,trials,violations,worst_margin\n";
        for (const PropertyResult& r : suite) {
            dest << r.name << ',' << r.trials << ',' << r.violations << ','
                 << (r.trials ? format_double(r.worst_margin) : std::string()) << '\n';
            total_violations += r.violations;
        }
    } else {
        nlohmann::json out = nlohmann::json::array();
        for (const PropertyResult& r : suite) {
            nlohmann::json j{{"property", r.name},
                             {"trials", r.trials},
                             {"violations", r.violations}};
            j["worst_margin"] = r.trials ? nlohmann::json(r.worst_margin)
                                         : nlohmann::json(nullptr);
            out.push_back(std::move(j));
            total_violations += r.violations;
        }
        dest << out.dump(2) << '\n';
    }
    return total_violations == 0 ? kExitOk : kExitNumeric;
}

// --- front end ---------------------------------------------------------------

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"numerical toolkit for energy-constrained entropy continuity bounds"};
    app.require_subcommand(1);

    std::string config_path, out_path, format_str;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    app.add_option("--config", config_path, "experiment config file (key = value lines)");
    app.add_option("--out", out_path, "output file (default: stdout)");
    app.add_option("--format", format_str, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--seed", seed, "random seed override");
    app.add_option("--tol", tol, "solver tolerance override");

    CLI::App* cmd_gibbs = app.add_subcommand(
        "gibbs",
        "thermal states exp(-beta*H)/Z over an energy grid (E, beta, entropy, tail "
        "bound); the convergent sign convention exp(-beta*H) is used throughout");
    CLI::App* cmd_afw = app.add_subcommand(
        "afw", "coupling construction report for a pair of spectral states");
    AfwArgs afw_args;
    cmd_afw->add_option("--rho", afw_args.rho_file, "rho state JSON file");
    cmd_afw->add_option("--sigma", afw_args.sigma_file, "sigma state JSON file");
    cmd_afw->add_option("--rho-weights", afw_args.rho_weights, "inline rho weights, comma-separated");
    cmd_afw->add_option("--sigma-weights", afw_args.sigma_weights, "inline sigma weights");
    cmd_afw->add_option("--rho-labels", afw_args.rho_labels, "inline rho labels");
    cmd_afw->add_option("--sigma-labels", afw_args.sigma_labels, "inline sigma labels");
    CLI::App* cmd_bounds = app.add_subcommand(
        "bounds", "compare continuity bounds over (epsilon, E) grids");
    CLI::App* cmd_contra = app.add_subcommand(
        "contradiction", "entropy threshold certificates for the bounded-basis hypothesis");
    CLI::App* cmd_check = app.add_subcommand("check", "run the full property suite");
    for (CLI::App* sub : {cmd_gibbs, cmd_afw, cmd_bounds, cmd_contra, cmd_check})
        sub->fallthrough();

    std::vector<const char*> argv;
    argv.push_back("entropy-bounds");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(int(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        ExperimentConfig cfg;
        if (!config_path.empty()) cfg = load_config(config_path);
        if (!out_path.empty()) cfg.out_path = out_path;
        if (!format_str.empty())
            cfg.format = format_str == "json" ? OutputFormat::json : OutputFormat::csv;
        if (seed) cfg.seed = *seed;
        if (tol) cfg.tol = *tol;
        if (!(cfg.tol > 0.0)) {
            err << "error: tol must be positive\n";
            return kExitConfig;
        }

        if (cmd_gibbs->parsed())
            return detail::with_output(cfg, out, err,
                                       [&](std::ostream& d) { return run_gibbs(cfg, d, err); });
        if (cmd_afw->parsed())
            return detail::with_output(
                cfg, out, err, [&](std::ostream& d) { return run_afw(cfg, afw_args, d, err); });
        if (cmd_bounds->parsed())
            return detail::with_output(cfg, out, err,
                                       [&](std::ostream& d) { return run_bounds(cfg, d, err); });
        if (cmd_contra->parsed())
            return detail::with_output(cfg, out, err, [&](std::ostream& d) {
                return run_contradiction(cfg, d, out, err);
            });
        if (cmd_check->parsed())
            return detail::with_output(cfg, out, err,
                                       [&](std::ostream& d) { return run_check(cfg, d); });
        err << "error: no subcommand\n";
        return kExitConfig;
    } catch (const parse_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const hypothesis_violation& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const invariant_violation& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const energy_out_of_range& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const threshold_not_reached& e) {
        err << "error: " << e.what() << '\n';
        return kExitThreshold;
    } catch (const numeric_failure& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitNumeric;
    }
}

}  // namespace cli
}  // namespace entropy_bounds
