#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "qtomo/fock.hpp"

using namespace qtomo;

TEST_CASE("mode space flat index round trip") {
    ModeSpace sp({3, 4, 2});
    CHECK(sp.total_dim() == 24);
    CHECK(sp.flat({0, 0, 0}) == 0);
    CHECK(sp.flat({2, 3, 1}) == 23);
    CHECK(sp.flat({1, 2, 0}) == 1 * 8 + 2 * 2);
    for (long long f = 0; f < sp.total_dim(); ++f) CHECK(sp.flat(sp.unflat(f)) == f);
    CHECK_THROWS_AS(ModeSpace({2, 0}), std::runtime_error);
}

TEST_CASE("combinatorial helpers against direct evaluation") {
    CHECK(log_factorial(0) == doctest::Approx(0.0));
    CHECK(log_factorial(5) == doctest::Approx(std::log(120.0)));
    CHECK(binomial_coeff(10, 3) == doctest::Approx(120.0));
    CHECK(log_binomial(20, 7) == doctest::Approx(std::log(77520.0)).epsilon(1e-12));
    // L_m(-r) = sum_k C(m,k) r^k / k!
    double r = 2.3;
    double direct = 1.0 + 3 * r + 3 * r * r / 2 + r * r * r / 6;  // m = 3
    CHECK(laguerre_neg(3, r) == doctest::Approx(direct).epsilon(1e-13));
}

TEST_CASE("coherent state amplitudes and tail guard") {
    cplx alpha(1.1, -0.4);
    PureState psi = make_coherent(alpha, 40);
    double a2 = std::norm(alpha);
    for (int n = 0; n <= 5; ++n) {
        cplx expect = std::exp(-0.5 * a2) * std::pow(alpha, n) / std::sqrt(std::tgamma(n + 1.0));
        CHECK(std::abs(psi.amp()(n) - expect) < 1e-12);
    }
    CHECK(std::abs(psi.amp().norm() - 1.0) < 1e-12);
    // |alpha|^2 = 10 has far too much weight above n = 10
    CHECK_THROWS_AS(make_coherent(cplx(std::sqrt(10.0), 0), 10), std::runtime_error);
}

TEST_CASE("photon-added coherent state equals normalized a^dag^m application") {
    cplx alpha(0.9, 0.6);
    int n_max = 30, m = 2;
    PureState cs = make_coherent(alpha, n_max);
    MatrixXcd adag = annihilation(n_max + 1).adjoint();
    VectorXcd v = adag * adag * cs.amp();
    v.normalize();
    PureState pacs = make_pacs(alpha, m, n_max);
    // global phase free
    cplx ov = v.adjoint() * pacs.amp();
    CHECK(std::abs(std::abs(ov) - 1.0) < 1e-10);
    // closed-form norm: m! L_m(-|alpha|^2)
    double a2 = std::norm(alpha);
    VectorXcd raw = adag * adag * cs.amp();
    CHECK(raw.squaredNorm() == doctest::Approx(2.0 * laguerre_neg(2, a2)).epsilon(1e-9));
}

TEST_CASE("binomial state amplitudes") {
    int N = 4;
    PureState psi = make_binomial(N);
    CHECK(psi.space().dims == std::vector<int>({5, 5}));
    for (int n = 0; n <= N; ++n) {
        double expect = std::pow(2.0, -N / 2.0) * std::sqrt(binomial_coeff(N, n));
        CHECK(std::abs(psi.amp_at({N - n, n}) - cplx(expect, 0)) < 1e-12);
    }
    CHECK(std::abs(psi.amp().norm() - 1.0) < 1e-12);
}

TEST_CASE("two-mode squeezed pair correlation") {
    cplx zeta = std::polar(0.8, 0.7);
    int n_max = 40;
    PureState psi = make_two_mode_squeezed(zeta, n_max);
    ModeSpace sp = psi.space();
    MatrixXcd a = embed(sp, 0, annihilation(sp.dims[0]));
    MatrixXcd b = embed(sp, 1, annihilation(sp.dims[1]));
    cplx ab = expval(psi, a * b);
    cplx expect = -std::polar(std::sinh(0.8) * std::cosh(0.8), 0.7);
    CHECK(std::abs(ab - expect) < 1e-8);
    cplx na = expval(psi, a.adjoint() * a);
    CHECK(na.real() == doctest::Approx(std::sinh(0.8) * std::sinh(0.8)).epsilon(1e-8));
}

TEST_CASE("bell states and spin coherent product") {
    PureState psi_p = make_bell_psi_plus();
    CHECK(std::abs(psi_p.amp_at({0, 0}) - cplx(1 / std::sqrt(2.0), 0)) < 1e-15);
    CHECK(std::abs(psi_p.amp_at({1, 1}) - cplx(1 / std::sqrt(2.0), 0)) < 1e-15);
    CHECK(std::abs(psi_p.amp_at({0, 1})) < 1e-15);
    PureState phi_p = make_bell_phi_plus();
    CHECK(std::abs(phi_p.amp_at({0, 1}) - cplx(1 / std::sqrt(2.0), 0)) < 1e-15);
    CHECK(std::abs(phi_p.amp_at({1, 0}) - cplx(1 / std::sqrt(2.0), 0)) < 1e-15);

    double th = 0.7, ph = 1.3;
    PureState sc = make_spin_coherent(th, ph, 2);
    cplx up = std::polar(std::sin(th), ph), down(std::cos(th), 0);
    CHECK(std::abs(sc.amp_at({0, 0}) - up * up) < 1e-12);
    CHECK(std::abs(sc.amp_at({1, 1}) - down * down) < 1e-12);
    CHECK(std::abs(sc.amp_at({0, 1}) - up * down) < 1e-12);
}

TEST_CASE("tensor product composes amplitudes") {
    PureState a = make_coherent(cplx(0.5, 0.2), 8);
    PureState b = make_fock(2, 5);
    PureState ab = tensor(a, b);
    CHECK(ab.space().dims == std::vector<int>({9, 6}));
    CHECK(std::abs(ab.amp_at({3, 2}) - a.amp()(3) * b.amp()(2)) < 1e-14);
    CHECK(std::abs(ab.amp_at({3, 1})) < 1e-14);
}

TEST_CASE("bell pair reductions and entanglement measures") {
    DensityMatrix rho = to_density(make_bell_psi_plus());
    DensityMatrix ra = partial_trace(rho, {0});
    CHECK((ra.mat() - 0.5 * MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(purity(ra) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(svne(ra) == doctest::Approx(1.0).epsilon(1e-12));          // bits
    CHECK(sle(ra) == doctest::Approx(0.5).epsilon(1e-12));           // 1 - tr rho^2
    CHECK(qmi(rho, {0}) == doctest::Approx(2.0).epsilon(1e-12));     // bits
    CHECK(negativity(rho, {0}) == doctest::Approx(0.5).epsilon(1e-12));

    // product state: no entanglement on any count
    DensityMatrix prod = to_density(tensor(make_fock(0, 1), make_fock(1, 1)));
    CHECK(negativity(prod, {0}) < 1e-12);
    CHECK(qmi(prod, {0}) < 1e-12);
}

TEST_CASE("partial trace of a pure product recovers factors") {
    PureState a = make_coherent(cplx(0.7, -0.3), 12);
    PureState b = make_coherent(cplx(-0.2, 0.5), 10);
    DensityMatrix ra = partial_trace(tensor(a, b), {0});
    MatrixXcd expect = a.amp() * a.amp().adjoint();
    CHECK((ra.mat() - expect).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("fidelity overloads agree") {
    PureState a = make_coherent(cplx(0.6, 0.1), 20);
    PureState b = make_coherent(cplx(0.6, 0.4), 20);
    double f = fidelity(a, b);
    CHECK(f == doctest::Approx(fidelity(to_density(a), b)).epsilon(1e-12));
    // |<alpha|beta>|^2 = exp(-|alpha-beta|^2)
    CHECK(f == doctest::Approx(std::exp(-0.09)).epsilon(1e-9));
}

TEST_CASE("operator algebra") {
    MatrixXcd a = annihilation(6);
    CHECK(std::abs(a(2, 3) - cplx(std::sqrt(3.0), 0)) < 1e-15);
    MatrixXcd comm = a * a.adjoint() - a.adjoint() * a;
    // canonical commutator holds away from the truncation corner
    CHECK((comm.topLeftCorner(5, 5) - MatrixXcd::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((number_op(6) - a.adjoint() * a).cwiseAbs().maxCoeff() < 1e-13);

    MatrixXcd sx = sigma_half_x(), sy = sigma_half_y(), sz = sigma_half_z();
    CHECK((sx * sy - sy * sx - cplx(0, 1) * sz).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((sigma_plus() - (sx + cplx(0, 1) * sy)).cwiseAbs().maxCoeff() < 1e-15);
    // |e> is the +1/2 eigenvector of s_z at index 0
    CHECK(std::abs(sz(0, 0) - cplx(0.5, 0)) < 1e-15);

    PureState cs = make_coherent(cplx(1.0, 0.5), 30);
    MatrixXcd n = number_op(31);
    CHECK(expval(cs, n).real() == doctest::Approx(1.25).epsilon(1e-9));
}

TEST_CASE("embed places an operator on the right subsystem") {
    ModeSpace sp({2, 3});
    MatrixXcd a1 = embed(sp, 1, annihilation(3));
    PureState f = tensor(make_fock(1, 1), make_fock(2, 2));
    VectorXcd v = a1 * f.amp();
    PureState expect = tensor(make_fock(1, 1), make_fock(1, 2));
    CHECK(std::abs((expect.amp().adjoint() * v)(0) - cplx(std::sqrt(2.0), 0)) < 1e-13);
}

TEST_CASE("density matrix constructor validates") {
    MatrixXcd bad = MatrixXcd::Identity(2, 2);  // trace 2
    CHECK_THROWS_AS(DensityMatrix(ModeSpace({2}), bad), std::runtime_error);
    MatrixXcd nh(2, 2);
    nh << 1.0, cplx(0.1, 0.0), cplx(0.3, 0.0), 0.0;
    CHECK_THROWS_AS(DensityMatrix(ModeSpace({2}), nh), std::runtime_error);
}
