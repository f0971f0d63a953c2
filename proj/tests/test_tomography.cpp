#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qtomo/tomography.hpp"

using namespace qtomo;

namespace {
double slice_norm(const Tomogram& t, int ti) {
    std::vector<double> f(t.grid.n_x);
    for (int i = 0; i < t.grid.n_x; ++i) f[(size_t)i] = t.values(ti, i);
    return simpson(f, t.grid.dx());
}
}  // namespace

TEST_CASE("quadrature grid bookkeeping") {
    QuadGrid g(-5, 5, 11, {0.0, 1.0});
    CHECK(g.dx() == doctest::Approx(1.0));
    CHECK(g.xs().front() == doctest::Approx(-5.0));
    CHECK(g.xs().back() == doctest::Approx(5.0));
    CHECK(g.theta_index(1.0) == 1);
    CHECK(g.theta_index(0.5) == -1);
    CHECK_THROWS_AS(QuadGrid(-5, 5, 10, {0.0}), std::runtime_error);  // even n_x
    CHECK_THROWS_AS(QuadGrid(-5, 5, 11, {1.0, 0.0}), std::runtime_error);  // unsorted
    CHECK(QuadGrid::quorum_thetas(2) == std::vector<double>({0.0, kPi / 3.0, 2.0 * kPi / 3.0}));
}

TEST_CASE("simpson rule integrates smooth functions") {
    int n = 101;
    double dx = kPi / (n - 1);
    std::vector<double> f(n);
    for (int i = 0; i < n; ++i) f[(size_t)i] = std::sin(i * dx);
    CHECK(simpson(f, dx) == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("hermite basis matches low-order closed forms") {
    double x = 0.85;
    VectorXd h = hermite_basis(3, x);
    double g = std::exp(-0.5 * x * x) / std::pow(kPi, 0.25);
    CHECK(h(0) == doctest::Approx(g).epsilon(1e-12));
    CHECK(h(1) == doctest::Approx(std::sqrt(2.0) * x * g).epsilon(1e-12));
    CHECK(h(2) == doctest::Approx((2 * x * x - 1) / std::sqrt(2.0) * g).epsilon(1e-12));
    CHECK(h(3) == doctest::Approx((2 * x * x * x - 3 * x) / std::sqrt(3.0) * g).epsilon(1e-11));
    // rotation phase e^{-i n theta}
    VectorXcd w = hermite_weights(3, x, 0.4);
    CHECK(std::abs(w(2) - h(2) * std::exp(cplx(0, -0.8))) < 1e-12);
}

TEST_CASE("vacuum tomogram is the angle-independent ground Gaussian") {
    PureState vac = make_fock(0, 5);
    QuadGrid g(-6, 6, 601, {0.0, 0.7, 2.1});
    Tomogram t = tomogram_pure_single(vac, g);
    auto xs = g.xs();
    for (int ti = 0; ti < 3; ++ti) {
        for (int i = 0; i < g.n_x; i += 60) {
            double expect = std::exp(-xs[(size_t)i] * xs[(size_t)i]) / std::sqrt(kPi);
            CHECK(std::abs(t.values(ti, i) - expect) < 1e-12);
        }
        CHECK(slice_norm(t, ti) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("coherent tomogram: rotating Gaussian of variance 1/2") {
    cplx alpha(1.1, 0.8);
    PureState cs = make_coherent(alpha, 35);
    QuadGrid g(-8, 8, 801, {0.0, 0.9, 1.7});
    Tomogram t = tomogram_pure_single(cs, g);
    auto xs = g.xs();
    double dx = g.dx();
    for (int ti = 0; ti < 3; ++ti) {
        double th = g.thetas[(size_t)ti];
        double mean_expect = std::sqrt(2.0) * (alpha * std::exp(cplx(0, -th))).real();
        double m0 = 0, m1 = 0, m2 = 0;
        std::vector<double> f0(g.n_x), f1(g.n_x), f2(g.n_x);
        for (int i = 0; i < g.n_x; ++i) {
            double w = t.values(ti, i), x = xs[(size_t)i];
            f0[(size_t)i] = w;
            f1[(size_t)i] = w * x;
            f2[(size_t)i] = w * x * x;
        }
        m0 = simpson(f0, dx);
        m1 = simpson(f1, dx);
        m2 = simpson(f2, dx);
        CHECK(m0 == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(m1 == doctest::Approx(mean_expect).epsilon(1e-7));
        CHECK(m2 - m1 * m1 == doctest::Approx(0.5).epsilon(1e-7));
    }
}

TEST_CASE("first excited state profile") {
    PureState one = make_fock(1, 4);
    QuadGrid g(-6, 6, 401, {0.3});
    Tomogram t = tomogram_pure_single(one, g);
    auto xs = g.xs();
    for (int i = 0; i < g.n_x; i += 25) {
        double x = xs[(size_t)i];
        double expect = 2.0 * x * x * std::exp(-x * x) / std::sqrt(kPi);
        CHECK(std::abs(t.values(0, i) - expect) < 1e-12);
    }
}

TEST_CASE("density and pure routes agree") {
    PureState psi = make_pacs(cplx(0.8, -0.5), 1, 25);
    QuadGrid g(-7, 7, 301, {0.0, 1.2});
    Tomogram tp = tomogram_pure_single(psi, g);
    Tomogram td = tomogram_density_single(to_density(psi), g);
    CHECK((tp.values - td.values).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("reflection symmetry of the quadrature family") {
    PureState psi = make_pacs(cplx(1.0, 0.3), 2, 30);
    CHECK(tomogram_symmetry_check(psi, QuadGrid(-7, 7, 201, {0.0, kPi / 3, kPi, kPi + kPi / 3})) <
          1e-12);
}

TEST_CASE("two-mode tomogram of a product factorizes") {
    PureState a = make_coherent(cplx(0.7, 0.1), 20);
    PureState b = make_fock(1, 6);
    PureState ab = tensor(a, b);
    QuadGrid ga(-6, 6, 121, {0.0, 0.8});
    QuadGrid gb(-6, 6, 121, {0.5});
    Tomogram2 t2 = tomogram_two_mode(ab, ga, gb);
    Tomogram ta = tomogram_pure_single(a, ga);
    Tomogram tb = tomogram_pure_single(b, gb);
    const MatrixXd& s = t2.slice(1, 0);
    for (int i = 0; i < 121; i += 17)
        for (int j = 0; j < 121; j += 17)
            CHECK(std::abs(s(i, j) - ta.values(1, i) * tb.values(0, j)) < 1e-11);

    Tomogram2 t2d = tomogram_two_mode(to_density(ab), ga, gb);
    CHECK((t2d.slice(0, 0) - t2.slice(0, 0)).cwiseAbs().maxCoeff() < 1e-11);

    Tomogram red = reduced_tomogram(t2, 0, 0.5);
    for (int i = 0; i < 121; i += 17)
        CHECK(std::abs(red.values(0, i) - ta.values(0, i)) < 1e-9);
}

TEST_CASE("spin tomogram conventions") {
    // excited qubit measured along z: outcome bit 0 ("+") certain
    DensityMatrix up = to_density(PureState(ModeSpace({2}), (VectorXcd(2) << 1, 0).finished()));
    SpinTomogram tz = spin_tomogram(up, {{spin_axis('z')}});
    CHECK(tz.probs[0][0] == doctest::Approx(1.0));
    CHECK(tz.probs[0][1] == doctest::Approx(0.0));
    SpinTomogram tx = spin_tomogram(up, {{spin_axis('x')}});
    CHECK(tx.probs[0][0] == doctest::Approx(0.5));

    // spin coherent state measured along its own axis is deterministic
    double th = 1.1, ph = 0.4;
    PureState sc = make_spin_coherent(th, ph, 1);
    // Bloch direction of cos(th)|down> + e^{i ph} sin(th)|up>: (pi - 2 th, -ph)
    SpinTomogram ts = spin_tomogram(to_density(sc), {{{kPi - 2 * th, -ph}}});
    CHECK(ts.probs[0][0] == doctest::Approx(1.0).epsilon(1e-10));

    // psi+ pair: zz outcomes perfectly correlated
    DensityMatrix bell = to_density(make_bell_psi_plus());
    SpinTomogram tb = spin_tomogram(bell, {{spin_axis('z'), spin_axis('z')}});
    CHECK(tb.probs[0][0] == doctest::Approx(0.5));
    CHECK(tb.probs[0][3] == doctest::Approx(0.5));
    CHECK(tb.probs[0][1] == doctest::Approx(0.0));

    SpinTomogram xyz = spin_tomogram_xyz(bell);
    CHECK(xyz.axis_sets.size() == 9);
    for (const auto& p : xyz.probs) {
        double s = 0;
        for (double v : p) s += v;
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }
}
