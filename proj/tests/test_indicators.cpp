#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qtomo/indicators.hpp"

using namespace qtomo;

namespace {
Tomogram2 two_mode(const PureState& psi, const std::vector<double>& thetas, double half = 7.0,
                   int n_x = 241) {
    QuadGrid g(-half, half, n_x, thetas);
    return tomogram_two_mode(psi, g, g);
}

// Simpson integral of the squared slice density (the participation weight eta)
double slice_eta(const Tomogram& t, double theta) {
    int it = t.grid.theta_index(theta);
    Eigen::VectorXd w = t.slice(it);
    const auto& xs = t.grid.xs();
    double h = xs[1] - xs[0], eta = 0.0;
    for (int i = 0; i < w.size(); ++i) {
        double c = (i == 0 || i + 1 == w.size()) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        eta += c * h / 3.0 * w[i] * w[i];
    }
    return eta;
}
}  // namespace

TEST_CASE("product states carry no slice correlations") {
    PureState a = make_coherent(cplx(0.8, 0.3), 18);
    PureState b = make_coherent(cplx(-0.5, 0.6), 18);
    Tomogram2 t = two_mode(tensor(a, b), {0.0, 1.1});
    // the participation indicator does not vanish on products; it factorizes
    QuadGrid g(-7, 7, 241, {0.0, 1.1});
    Tomogram wa = tomogram_pure_single(a, g);
    Tomogram wb = tomogram_pure_single(b, g);
    for (double ta : {0.0, 1.1})
        for (double tb : {0.0, 1.1}) {
            CHECK(eps_tei(t, ta, tb) < 1e-8);
            double want = (1.0 - slice_eta(wa, ta)) * (1.0 - slice_eta(wb, tb));
            CHECK(eps_ipr(t, ta, tb) == doctest::Approx(want).epsilon(1e-6));
            CHECK(eps_pcc(t, ta, tb) < 1e-6);
            CHECK(eps_bd(t, ta, tb) < 1e-8);
        }
}

TEST_CASE("pair-correlated state lights every slice correlator") {
    PureState tms = make_two_mode_squeezed(cplx(0.7, 0.0), 30);
    Tomogram2 t = two_mode(tms, {0.0});
    CHECK(eps_tei(t, 0.0, 0.0) > 0.2);
    CHECK(eps_pcc(t, 0.0, 0.0) > 0.5);
    CHECK(eps_bd(t, 0.0, 0.0) > 0.05);
    CHECK(eps_ipr(t, 0.0, 0.0) > 0.01);
    // the Bhattacharyya distance is bounded by half the mutual information
    CHECK(eps_bd(t, 0.0, 0.0) <= 0.5 * eps_tei(t, 0.0, 0.0) + 1e-9);
}

TEST_CASE("slice dispatch and averaging") {
    PureState tms = make_two_mode_squeezed(cplx(0.5, 0.2), 25);
    Tomogram2 t = two_mode(tms, xi_angle_grid(3));
    CHECK(xi_angle_grid(3) == std::vector<double>({0.0, kPi / 3, 2 * kPi / 3}));
    double mean = 0.0;
    for (double ta : xi_angle_grid(3))
        for (double tb : xi_angle_grid(3)) mean += eps_slice(t, SliceKind::tei, ta, tb);
    mean /= 9.0;
    CHECK(xi_average(t, SliceKind::tei) == doctest::Approx(mean).epsilon(1e-12));
    CHECK(eps_slice(t, SliceKind::pcc, 0.0, 0.0) == doctest::Approx(eps_pcc(t, 0.0, 0.0)));
    // above-threshold average never drops below the plain mean
    CHECK(xi_prime_tei(t) >= xi_average(t, SliceKind::tei) - 1e-12);
}

TEST_CASE("degenerate slice statistics fall back to the mean") {
    PureState ab = tensor(make_fock(0, 6), make_fock(0, 6));
    Tomogram2 t = two_mode(ab, xi_angle_grid(3));
    CHECK(xi_prime_tei(t) == doctest::Approx(xi_average(t, SliceKind::tei)).epsilon(1e-9));
}

TEST_CASE("reference measures against hand values") {
    DensityMatrix bell = to_density(make_bell_psi_plus());
    CHECK(xi_svne(bell, {0}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(xi_svne(bell, {1}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(xi_svne(bell, {0}, std::exp(1.0)) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(xi_sle(bell, {0}) == doctest::Approx(0.5).epsilon(1e-12));

    PureState prod = tensor(make_fock(1, 2), make_fock(0, 2));
    CHECK(xi_svne(to_density(prod), {0}) < 1e-12);
    CHECK(xi_sle(to_density(prod), {0}) < 1e-12);
}

TEST_CASE("spin tomogram mutual information of a bell pair") {
    SpinTomogram st = spin_tomogram_xyz(to_density(make_bell_psi_plus()));
    REQUIRE(st.axis_sets.size() == 9);
    int perfect = 0, zero = 0;
    for (int s = 0; s < 9; ++s) {
        double mi = spin_eps_tei(st, s, {0});  // bits
        if (mi > 0.999) ++perfect;
        if (mi < 1e-9) ++zero;
    }
    // correlations only when both qubits read the same axis
    CHECK(perfect == 3);
    CHECK(zero == 6);
    CHECK(spin_xi_tei(st, {0}) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
    CHECK(spin_xi_tei(st, {0}, std::exp(1.0)) ==
          doctest::Approx(std::log(2.0) / 3.0).epsilon(1e-9));
}

TEST_CASE("series correlation endpoints") {
    std::vector<double> a{1, 2, 3, 4, 5}, b{2, 4, 6, 8, 10}, c{5, 4, 3, 2, 1};
    CHECK(series_pcc(a, b) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(series_pcc(a, c) == doctest::Approx(-1.0).epsilon(1e-12));
    std::vector<double> d{1, -1, 1, -1, 1};
    CHECK(std::abs(series_pcc(a, d)) < 0.5);
}

TEST_CASE("jensen-type bound across random slices") {
    std::mt19937_64 rng(2026);
    std::uniform_real_distribution<double> angle(0.0, kPi);
    std::vector<PureState> battery;
    battery.push_back(make_two_mode_squeezed(cplx(0.6, 0.3), 22));
    battery.push_back(make_binomial(8));
    battery.push_back(tensor(make_coherent(cplx(0.9, 0.0), 16), make_pacs(cplx(0.4, 0.2), 1, 16)));
    for (const PureState& psi : battery) {
        std::vector<double> thetas;
        for (int i = 0; i < 4; ++i) thetas.push_back(angle(rng));
        std::sort(thetas.begin(), thetas.end());
        Tomogram2 t = two_mode(psi, thetas);
        for (double ta : thetas)
            for (double tb : thetas)
                CHECK(eps_bd(t, ta, tb) <= 0.5 * eps_tei(t, ta, tb) + 1e-9);
    }
}

TEST_CASE("indicator row difference columns") {
    IndicatorRow row;
    row.xi_tei = 0.4;
    row.xi_tei_prime = 0.5;
    row.xi_ipr = 0.2;
    row.xi_svne = 1.0;
    row.xi_sle = 0.45;
    row.finalize();
    CHECK(row.d1 == doctest::Approx(0.5));
    CHECK(row.d2 == doctest::Approx(0.05));
    CHECK(row.d3 == doctest::Approx(0.25));
    CHECK(row.delta == doctest::Approx(0.55));

    IndicatorSeries s;
    s.rows.push_back(row);
    const auto& names = IndicatorSeries::column_names();
    CHECK(names.front() == "xi_tei");
    CHECK(s.column("d1")[0] == doctest::Approx(0.5));
    CHECK_THROWS_AS(s.column("nope"), std::runtime_error);
}
