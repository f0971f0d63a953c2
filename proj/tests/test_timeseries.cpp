#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qtomo/timeseries.hpp"

using namespace qtomo;

namespace {

ScalarSeries logistic(int n, double r = 4.0, double x0 = 0.6347) {
    ScalarSeries s;
    s.dt = 1.0;
    double x = x0;
    for (int i = 0; i < n; ++i) {
        s.values.push_back(x);
        x = r * x * (1.0 - x);
    }
    return s;
}

ScalarSeries sinusoid(int n, double period) {
    ScalarSeries s;
    s.dt = 1.0;
    for (int i = 0; i < n; ++i) s.values.push_back(std::sin(2.0 * kPi * i / period));
    return s;
}

}  // namespace

TEST_CASE("delay pick on a sinusoid lands near the quarter period") {
    ScalarSeries s = sinusoid(4000, 40.0);
    int tau = mi_delay(s);
    CHECK(tau >= 7);
    CHECK(tau <= 13);
}

TEST_CASE("embedding dimension separates low-dimensional maps from noise") {
    ScalarSeries s = logistic(6000);
    EmbedDimResult ed = embed_dim(s, 1, 6, 800, 11);
    CHECK(ed.saturated);
    CHECK(ed.d_emb >= 1);
    CHECK(ed.d_emb <= 3);

    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss(0.0, 1.0);
    ScalarSeries noise;
    noise.dt = 1.0;
    for (int i = 0; i < 6000; ++i) noise.values.push_back(gauss(rng));
    EmbedDimResult en = embed_dim(noise, 1, 5, 800, 11);
    CHECK_FALSE(en.saturated);
}

TEST_CASE("window products recover exponents of hand-built linearizations") {
    // uniform 1-d contraction: every window gives exactly ln 0.62
    JacobianSet js;
    js.d_emb = 1;
    for (int n = 0; n < 500; ++n) {
        js.jac.push_back(MatrixXd::Constant(1, 1, 0.62));
        js.index.push_back(n);
    }
    double lam = lambda_L(js, 40, 60, 9);
    CHECK(lam == doctest::Approx(std::log(0.62)).epsilon(1e-9));

    // planar spiral: contraction 0.9 with rotation pi/7, exponent ln 0.9
    JacobianSet spiral;
    spiral.d_emb = 2;
    MatrixXd rot(2, 2);
    double c = std::cos(kPi / 7), sn = std::sin(kPi / 7);
    rot << 0.9 * c, -0.9 * sn, 0.9 * sn, 0.9 * c;
    for (int n = 0; n < 300; ++n) {
        spiral.jac.push_back(rot);
        spiral.index.push_back(n);
    }
    CHECK(lambda_L(spiral, 25, 20, 4) == doctest::Approx(std::log(0.9)).epsilon(1e-9));

    // a run shorter than the window is refused
    JacobianSet shorty;
    shorty.d_emb = 1;
    for (int n = 0; n < 30; ++n) {
        shorty.jac.push_back(MatrixXd::Constant(1, 1, 0.5));
        shorty.index.push_back(n);
    }
    CHECK_THROWS_AS(lambda_L(shorty, 40, 5, 1), std::runtime_error);
}

TEST_CASE("logistic map exponent approaches ln 2") {
    ScalarSeries s = logistic(12000);
    Embedding emb{1, 2};
    JacobianSet js = local_jacobians(s, emb, 0, 21);
    double lam = lambda_L(js, 120, 100, 23);
    CHECK(lam == doctest::Approx(std::log(2.0)).epsilon(0.12));
}

TEST_CASE("window fit recovers a synthetic saturation law") {
    std::vector<std::pair<int, double>> pairs;
    for (int L = 25; L <= 207; L += 14)
        pairs.push_back({L, 0.7 + 2.0 / std::pow(L, 0.8)});
    LambdaFit fit = fit_lambda_inf(pairs);
    CHECK(fit.lambda_inf == doctest::Approx(0.7).epsilon(2e-3));
    CHECK(fit.q == doctest::Approx(0.8).epsilon(0.05));
    CHECK(fit.residual < 1e-6);
    // fewer than 14 windows is refused
    pairs.resize(10);
    CHECK_THROWS_AS(fit_lambda_inf(pairs), std::runtime_error);
}

TEST_CASE("periodogram peaks at the drive frequency") {
    ScalarSeries s = sinusoid(2048, 32.0);
    Spectrum sp = power_spectrum(s);
    REQUIRE(sp.freq.size() == sp.power.size());
    size_t imax = 0;
    for (size_t i = 1; i < sp.power.size(); ++i)
        if (sp.power[i] > sp.power[imax]) imax = i;
    CHECK(sp.freq[imax] == doctest::Approx(1.0 / 32.0).epsilon(0.02));
    for (double p : sp.power) CHECK(p >= 0.0);
}

TEST_CASE("series validation") {
    ScalarSeries tiny;
    tiny.dt = 1.0;
    tiny.values = {1.0, 2.0};
    CHECK_THROWS_AS(mi_delay(tiny), std::runtime_error);
}
