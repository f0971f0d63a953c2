#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qtomo/chronocyclic.hpp"

using namespace qtomo;

TEST_CASE("experiment parameters and tooth count") {
    CombParams p = CombParams::experiment_values();
    p.validate();
    CHECK(p.n_window == 1161);
    CHECK(p.teeth() == 2323);
    CHECK(p.omega_bar == doctest::Approx(2.0 * kPi * 19.2e9));
    CHECK(p.d_omega == doctest::Approx(2.0 * kPi * 1.92e9));
    CHECK(p.d_Omega == doctest::Approx(2.0 * kPi * 6.0e12));
}

TEST_CASE("single-tooth profile degenerates to a gaussian ridge") {
    CombParams p = CombParams::experiment_values();
    p.n_window = 0;  // comb factors become constant
    double a = p.d_omega * p.d_omega * p.d_Omega * p.d_Omega /
               (2.0 * (p.d_omega * p.d_omega + p.d_Omega * p.d_Omega));
    for (CombKind kind : {CombKind::alpha, CombKind::beta}) {
        double w0 = tt_profile_raw(kind, p, 0.0);
        double w1 = tt_profile_raw(kind, p, 3e-13);
        CHECK(w1 / w0 == doctest::Approx(std::exp(-9e-26 * a)).epsilon(1e-10));
    }
}

TEST_CASE("profiles are even in the time difference and tomograms normalize") {
    CombParams p = CombParams::experiment_values();
    p.n_window = 3;
    TTGrid g{0.0, 2.0e-10, 4001};
    for (CombKind kind : {CombKind::alpha, CombKind::beta}) {
        TTProfile w = tt_tomogram(kind, p, g);
        long long n = g.n_t;
        for (long long k : {1LL, 7LL, n - 1}) {
            CHECK(w.values[(size_t)(n - 1 + k)] == doctest::Approx(w.values[(size_t)(n - 1 - k)]));
        }
        CHECK(w.at(5, 5) == doctest::Approx(w.values[(size_t)(n - 1)]));
        // grid mass with triangular diagonal counting
        double dt = g.dt(), mass = 0.0;
        for (long long k = -(n - 1); k <= n - 1; ++k)
            mass += double(n - std::llabs(k)) * w.values[(size_t)(k + n - 1)] * dt * dt;
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("normalization constants match the brute-force quadruple sum") {
    CombParams p = CombParams::experiment_values();
    for (int nw : {1, 2, 3}) {
        p.n_window = nw;
        for (CombKind kind : {CombKind::alpha, CombKind::beta}) {
            double closed = comb_norm_constant(kind, p);
            double brute = comb_norm_constant_brute(kind, p);
            CHECK(closed == doctest::Approx(brute).epsilon(1e-10));
        }
    }
    p.n_window = 5;
    CHECK_THROWS_AS(comb_norm_constant_brute(CombKind::alpha, p), std::runtime_error);
}

TEST_CASE("undersampled grids are rejected") {
    CombParams p = CombParams::experiment_values();
    TTGrid coarse{0.0, 2.6e-11, 51};
    CHECK_THROWS_AS(tt_tomogram(CombKind::alpha, p, coarse), std::runtime_error);
}

TEST_CASE("entropy ordering and refinement stability on a small comb") {
    CombParams p = CombParams::experiment_values();
    p.n_window = 2;
    TTGrid g{0.0, 2.0e-10, 4001};
    double ea = chrono_eps_tei(tt_tomogram(CombKind::alpha, p, g));
    double eb = chrono_eps_tei(tt_tomogram(CombKind::beta, p, g));
    CHECK(ea > 0.0);
    CHECK(eb > 0.0);
    CHECK(ea > eb);
    TTGrid g2{0.0, 2.0e-10, 8001};
    double ea2 = chrono_eps_tei(tt_tomogram(CombKind::alpha, p, g2));
    CHECK(ea2 == doctest::Approx(ea).epsilon(0.01));
}

TEST_CASE("parameter validation") {
    CombParams p = CombParams::experiment_values();
    p.d_omega = p.omega_bar * 2.0;  // teeth would overlap
    CHECK_THROWS_AS(p.validate(), std::runtime_error);
    TTGrid g{0.0, -1.0, 101};
    CHECK_THROWS_AS(g.validate(), std::runtime_error);
}
