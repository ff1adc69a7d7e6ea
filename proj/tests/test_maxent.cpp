#include <doctest.h>

#include <cmath>
#include <numeric>

#include "entropy_bounds/maxent.hpp"
#include "entropy_bounds/sampling.hpp"
#include "oracles.hpp"

using namespace entropy_bounds;

TEST_CASE("gibbs state at beta = ln 2 reproduces the geometric closed form") {
    const Spectrum osc = Spectrum::harmonic_oscillator(1.0, 64);
    const ThermalSolve solve = gibbs_state(osc, std::log(2.0));
    CHECK(solve.state.weights()[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(solve.state.weights()[1] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(solve.state.weights()[2] == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(solve.mean_energy == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(solve.entropy_bits == doctest::Approx(2.0).epsilon(1e-12));
    REQUIRE(solve.tail_bound.has_value());
    CHECK(*solve.tail_bound < 1e-12);
}

TEST_CASE("thermal solve internal consistency") {
    const Spectrum osc = Spectrum::harmonic_oscillator(1.0, 64);
    const ThermalSolve solve = gibbs_state(osc, std::log(2.0));
    CHECK(std::abs(solve.mean_energy - energy(solve.state, osc)) <= 1e-10);
    // Z = sum over n of 2^-n on 64 levels
    CHECK(solve.partition == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(solve.truncation_dim == 64);
}

TEST_CASE("gibbs state limits") {
    const Spectrum osc = Spectrum::harmonic_oscillator(1.0, 16);
    const ThermalSolve cold = gibbs_state(osc, 50.0);
    CHECK(cold.state.weights()[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cold.entropy_bits < 1e-12);

    const Spectrum finite = Spectrum::load("0\n1\n2\n3\n");
    const ThermalSolve hot = gibbs_state(finite, 0.0);
    for (double w : hot.state.weights()) CHECK(w == doctest::Approx(0.25));
    CHECK(hot.entropy_bits == doctest::Approx(2.0));

    CHECK_THROWS_AS(gibbs_state(osc, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(gibbs_state(osc, -1.0), std::invalid_argument);
}

TEST_CASE("thermal solve hits the oscillator closed forms") {
    const Spectrum osc = Spectrum::harmonic_oscillator(1.0, 64);

    const ThermalSolve e1 = thermal_for_energy(osc, 1.0, 1e-10);
    CHECK(e1.beta == doctest::Approx(std::log(2.0)).epsilon(1e-8));
    CHECK(e1.entropy_bits == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(std::abs(e1.mean_energy - 1.0) <= 1e-10);

    const ThermalSolve e2 = thermal_for_energy(osc, 2.0, 1e-10);
    CHECK(e2.beta == doctest::Approx(oracles::oscillator_beta(2.0)).epsilon(1e-8));
    CHECK(e2.entropy_bits == doctest::Approx(3.0 * std::log2(3.0) - 2.0).epsilon(1e-8));
}

TEST_CASE("thermal solve auto-extends until the tail certificate holds") {
    const Spectrum tiny = Spectrum::harmonic_oscillator(1.0, 4);
    const ThermalSolve solve = thermal_for_energy(tiny, 20.0, 1e-10);
    CHECK(solve.truncation_dim > 4);
    REQUIRE(solve.tail_bound.has_value());
    CHECK(*solve.tail_bound <= 1e-10);
    CHECK(solve.entropy_bits == doctest::Approx(oracles::oscillator_entropy_bits(20.0)).epsilon(1e-8));
}

TEST_CASE("unreachable energies fail loudly") {
    const Spectrum finite = Spectrum::load("0\n1\n2\n");
    try {
        thermal_for_energy(finite, 5.0, 1e-10);
        FAIL("expected energy_out_of_range");
    } catch (const energy_out_of_range& e) {
        CHECK(e.reachable_max() == doctest::Approx(2.0));
    }
    CHECK_THROWS_AS(thermal_for_energy(finite, 0.0, 1e-10), std::invalid_argument);
    CHECK_THROWS_AS(thermal_for_energy(finite, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("finite spectra reach energies above the mean with beta < 0") {
    const Spectrum finite = Spectrum::load("0\n1\n2\n");
    const ThermalSolve solve = thermal_for_energy(finite, 1.5, 1e-10);
    CHECK(solve.beta < 0.0);
    CHECK(std::abs(solve.mean_energy - 1.5) <= 1e-10);
}

TEST_CASE("oscillator oracle across the energy range") {
    const Spectrum osc = Spectrum::harmonic_oscillator(1.0, 256);
    for (double e : {0.1, 0.5, 1.0, 3.0, 10.0, 40.0, 100.0}) {
        const ThermalSolve solve = thermal_for_energy(osc, e, 1e-12);
        REQUIRE(solve.tail_bound.has_value());
        CHECK(*solve.tail_bound <= 1e-12);
        CHECK(solve.entropy_bits ==
              doctest::Approx(oracles::oscillator_entropy_bits(e)).epsilon(1e-8));
    }
}

TEST_CASE("bisection consistency: beta reproduces the target energy") {
    const Spectrum osc = Spectrum::harmonic_oscillator(0.5, 512);
    const double tol = 1e-9;
    for (double e : {0.3, 1.7, 6.2}) {
        const ThermalSolve solve = thermal_for_energy(osc, e, tol);
        const ThermalSolve redo = gibbs_state(osc.extended(solve.truncation_dim), solve.beta);
        CHECK(std::abs(redo.mean_energy - e) <= 2.0 * tol);
    }
}

TEST_CASE("entropy curve is strictly increasing and midpoint concave") {
    const Spectrum osc = Spectrum::harmonic_oscillator(1.0, 128);
    const EntropyCurve curve = gamma_entropy_curve(osc, {0.5, 1.0, 2.0, 4.0, 8.0}, 1e-10);
    REQUIRE(curve.points.size() == 5);
    CHECK(curve.strictly_increasing);
    CHECK(curve.midpoint_concave);
    CHECK(curve.points[3].solve.entropy_bits ==
          doctest::Approx(oracles::oscillator_entropy_bits(4.0)).epsilon(1e-8));

    CHECK_THROWS_AS(gamma_entropy_curve(osc, {2.0, 1.0}, 1e-10), std::invalid_argument);
}

TEST_CASE("entropy vanishes in the ground-state limit") {
    const Spectrum osc = Spectrum::harmonic_oscillator(1.0, 64);
    const ThermalSolve solve = thermal_for_energy(osc, 1e-3, 1e-12);
    CHECK(solve.entropy_bits < 0.02);
    CHECK(solve.entropy_bits ==
          doctest::Approx(oracles::oscillator_entropy_bits(1e-3)).epsilon(1e-6));
}

TEST_CASE("singleton curve equals the direct solve") {
    const Spectrum osc = Spectrum::harmonic_oscillator(1.0, 64);
    const EntropyCurve curve = gamma_entropy_curve(osc, {1.5}, 1e-10);
    const ThermalSolve direct = thermal_for_energy(osc, 1.5, 1e-10);
    REQUIRE(curve.points.size() == 1);
    CHECK(curve.points[0].solve.entropy_bits == doctest::Approx(direct.entropy_bits).epsilon(1e-12));
}

TEST_CASE("max-entropy dominance over random energy-bounded states") {
    const Spectrum osc = Spectrum::harmonic_oscillator(1.0, 64);
    const double cap = 2.0;
    const ThermalSolve gamma = thermal_for_energy(osc, cap, 1e-10);
    Rng rng(424242);
    const std::vector<std::size_t> labels = labels_with_level_at_most(osc, 2.0 * cap);
    int accepted = 0;
    while (accepted < 200) {
        const SpectralState state = random_state(rng, labels);
        if (energy(state, osc) > cap) continue;
        ++accepted;
        CHECK(von_neumann_entropy(state) <= gamma.entropy_bits + 1e-9);
    }
}
