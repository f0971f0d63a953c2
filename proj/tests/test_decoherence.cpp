#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qtomo/decoherence.hpp"
#include "qtomo/dynamics.hpp"

using namespace qtomo;

TEST_CASE("amplitude damping drags a coherent state along the coherent family") {
    cplx alpha(1.2, -0.5);
    DensityMatrix rho = to_density(make_coherent(alpha, 30));
    DampingParams p{DampingParams::Kind::amplitude, 0.5, 1.6};  // gt = 0.8
    DensityMatrix damped = amplitude_damp_single(rho, p);
    CHECK(std::abs(damped.mat().trace().real() - 1.0) < 1e-12);
    // alpha scales by e^{-Gamma tau}: the photon number decays at rate 2 Gamma
    PureState target = make_coherent(alpha * std::exp(-0.8), 30);
    CHECK(fidelity(damped, target) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(purity(damped) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("single-photon amplitude decay closed form") {
    DensityMatrix rho = to_density(make_fock(1, 3));
    double gt = 0.7;
    DensityMatrix damped = amplitude_damp_single(rho, {DampingParams::Kind::amplitude, gt, 1.0});
    double e = std::exp(-2.0 * gt);  // survival probability of the photon
    CHECK(damped.mat()(1, 1).real() == doctest::Approx(e).epsilon(1e-13));
    CHECK(damped.mat()(0, 0).real() == doctest::Approx(1.0 - e).epsilon(1e-13));
    CHECK(damped.mat()(0, 1) == cplx(0, 0));
}

TEST_CASE("long-time amplitude damping empties the mode") {
    PureState cat = evolve(make_coherent(cplx(1.5, 0.9), 25), KerrCubic{1.0, 0.0}, kPi / 2);
    DensityMatrix rho = to_density(cat);
    DensityMatrix late = amplitude_damp_single(rho, {DampingParams::Kind::amplitude, 1.0, 14.0});
    CHECK(late.mat()(0, 0).real() == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(purity(late) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("phase damping keeps populations and kills coherences") {
    DensityMatrix rho = to_density(make_coherent(cplx(1.0, 0.4), 20));
    double gt = 0.9;
    DensityMatrix damped = phase_damp_single(rho, {DampingParams::Kind::phase, gt, 1.0});
    for (int n = 0; n <= 20; ++n)
        CHECK(std::abs(damped.mat()(n, n) - rho.mat()(n, n)) < 1e-14);
    // off-diagonal scaling e^{-gt (m-n)^2}
    for (int m = 0; m <= 6; ++m)
        for (int n = 0; n <= 6; ++n) {
            double s = std::exp(-gt * (m - n) * (m - n));
            CHECK(std::abs(damped.mat()(m, n) - s * rho.mat()(m, n)) < 1e-13);
        }
    CHECK(std::abs(damped.mat().trace().real() - 1.0) < 1e-12);
}

TEST_CASE("damped states stay positive") {
    PureState cat = evolve(make_coherent(cplx(1.1, 0.0), 18), KerrCubic{1.0, 0.0}, kPi / 2);
    DensityMatrix rho = to_density(cat);
    for (double gt : {0.1, 1.0, 3.0}) {
        for (auto kind : {DampingParams::Kind::amplitude, DampingParams::Kind::phase}) {
            DensityMatrix d = kind == DampingParams::Kind::amplitude
                                  ? amplitude_damp_single(rho, {kind, gt, 1.0})
                                  : phase_damp_single(rho, {kind, gt, 1.0});
            Eigen::SelfAdjointEigenSolver<MatrixXcd> es(d.mat());
            CHECK(es.eigenvalues().minCoeff() > -1e-12);
        }
    }
}

TEST_CASE("mode-resolved channel acts only on the chosen subsystem") {
    PureState a = make_coherent(cplx(0.9, 0.2), 12);
    PureState b = make_fock(1, 4);
    DensityMatrix rho = to_density(tensor(a, b));
    double gt = 0.6;
    DensityMatrix damped = amplitude_damp_mode(rho, 0, gt);
    // reduced state of mode 0 matches the single-mode channel
    DensityMatrix red = partial_trace(damped, {0});
    DensityMatrix single =
        amplitude_damp_single(to_density(a), {DampingParams::Kind::amplitude, gt, 1.0});
    CHECK((red.mat() - single.mat()).cwiseAbs().maxCoeff() < 1e-11);
    // spectator mode untouched
    DensityMatrix redb = partial_trace(damped, {1});
    CHECK((redb.mat() - to_density(b).mat()).cwiseAbs().maxCoeff() < 1e-11);

    DensityMatrix via_bipartite =
        damp_bipartite_modeA(rho, {DampingParams::Kind::amplitude, gt, 1.0});
    CHECK((via_bipartite.mat() - damped.mat()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("phase channel on one mode preserves number correlations") {
    PureState tms = make_two_mode_squeezed(cplx(0.6, 0.0), 14);
    DensityMatrix rho = to_density(tms);
    DensityMatrix damped = phase_damp_mode(rho, 1, 1.3);
    ModeSpace sp = rho.space();
    MatrixXcd na = embed(sp, 0, number_op(sp.dims[0]));
    MatrixXcd nb = embed(sp, 1, number_op(sp.dims[1]));
    CHECK(std::abs(expval(damped, na * nb) - expval(rho, na * nb)) < 1e-11);
    CHECK(std::abs(damped.mat().trace().real() - 1.0) < 1e-12);
}

TEST_CASE("parameter validation") {
    DampingParams bad{DampingParams::Kind::amplitude, -0.1, 1.0};
    CHECK_THROWS_AS(bad.gt(), std::runtime_error);
}
