#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qtomo/dynamics.hpp"

using namespace qtomo;

namespace {
MatrixXcd expm_i(const MatrixXcd& h, double t) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
    VectorXcd ph(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < ph.size(); ++i)
        ph(i) = std::polar(1.0, -es.eigenvalues()(i) * t);
    return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}
}  // namespace

TEST_CASE("nonlinear oscillator evolution matches the diagonal phase formula") {
    cplx alpha(1.3, -0.4);
    int n_max = 20;
    double chi1 = 0.7, chi2 = 0.13, t = 2.31;
    PureState psi0 = make_coherent(alpha, n_max);
    PureState psit = evolve(psi0, KerrCubic{chi1, chi2}, t);
    for (int n = 0; n <= n_max; ++n) {
        double e = chi1 * n * (n - 1.0) + chi2 * n * (n - 1.0) * (n - 2.0);
        cplx expect = psi0.amp()(n) * std::polar(1.0, -e * t);
        CHECK(std::abs(psit.amp()(n) - expect) < 1e-12);
    }
}

TEST_CASE("revival periods") {
    auto t1 = revival_time(KerrCubic{2.0, 0.0});
    REQUIRE(t1.has_value());
    CHECK(*t1 == doctest::Approx(kPi / 2.0));
    auto t2 = revival_time(KerrCubic{0.0, 0.5});
    REQUIRE(t2.has_value());
    CHECK(*t2 == doctest::Approx(2.0 * kPi));
    auto t3 = revival_time(KerrCubic{3.0, 1.0});
    REQUIRE(t3.has_value());
    CHECK(*t3 == doctest::Approx(kPi));
    // coupling ratio with a large odd numerator
    auto t4 = revival_time(KerrCubic{1.0, 2.048e-7});
    REQUIRE(t4.has_value());
    CHECK(*t4 == doctest::Approx(9765625.0 * kPi).epsilon(1e-12));
    // irrational ratios never close
    CHECK_FALSE(revival_time(KerrCubic{1.0, 1.0 / std::sqrt(2.0)}).has_value());
    CHECK_FALSE(revival_time(KerrCubic{(1.0 + std::sqrt(5.0)) / 2.0, 1.0}).has_value());
    CHECK_FALSE(revival_time(KerrCubic{0.0, 0.0}).has_value());

    // two-well closure: omega0 = m U, lambda1 = m' U with m + m' odd
    BECWell w{10.0, 3.0, 1.0, 4.0};  // lambda1 = 5, 10 + 5 odd
    auto tb = revival_time(w);
    REQUIRE(tb.has_value());
    CHECK(*tb == doctest::Approx(kPi));
    BECWell w2{10.0, 0.0, 1.0, 4.0};  // lambda1 = 4, 10 + 4 even
    CHECK_FALSE(revival_time(w2).has_value());
}

TEST_CASE("kerr coherent state revives and forms a two-component cat") {
    cplx alpha(1.4, 0.6);
    int n_max = 25;
    PureState psi0 = make_coherent(alpha, n_max);
    double trev = *revival_time(KerrCubic{1.0, 0.0});
    CHECK(fidelity(psi0, evolve(psi0, KerrCubic{1.0, 0.0}, trev)) ==
          doctest::Approx(1.0).epsilon(1e-12));

    // at half revival: (e^{-i pi/4}|i alpha> + e^{i pi/4}|-i alpha>)/sqrt(2)
    PureState half = evolve(psi0, KerrCubic{1.0, 0.0}, trev / 2.0);
    cplx i_alpha = cplx(0, 1) * alpha;
    VectorXcd cat =
        std::polar(1.0 / std::sqrt(2.0), -kPi / 4) * make_coherent(i_alpha, n_max).amp() +
        std::polar(1.0 / std::sqrt(2.0), kPi / 4) * make_coherent(-i_alpha, n_max).amp();
    PureState catst = PureState::normalized(psi0.space(), cat);
    CHECK(fidelity(half, catst) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("cubic-only evolution closes at a third of the revival period") {
    PureState psi0 = make_coherent(cplx(1.2, 0.2), 22);
    double chi2 = 0.35;
    double trev = *revival_time(KerrCubic{0.0, chi2});
    PureState third = evolve(psi0, KerrCubic{0.0, chi2}, trev / 3.0);
    CHECK(fidelity(psi0, third) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("propagator equals dense matrix exponential") {
    BECWell spec{1.3, 0.4, 0.9, 0.7};
    ModeSpace sp({4, 4});
    MatrixXcd h = build_hamiltonian(spec, sp);
    CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    PureState psi0 = PureState::normalized(sp, VectorXcd::Ones(16));
    Propagator prop(spec, sp);
    double t = 1.7;
    VectorXcd direct = expm_i(h, t) * psi0.amp();
    CHECK((prop.at(psi0, t).amp() - direct).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("two-well hamiltonian conserves total number") {
    BECWell spec{0.8, 0.3, 1.0, 0.5};
    ModeSpace sp({5, 5});
    MatrixXcd h = build_hamiltonian(spec, sp);
    MatrixXcd n_tot = embed(sp, 0, number_op(5)) + embed(sp, 1, number_op(5));
    // commutator vanishes away from the truncation boundary
    MatrixXcd comm = h * n_tot - n_tot * h;
    CHECK(comm.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("closed-form two-well evolution matches the propagator") {
    BECWell spec{10.0, 3.0, 1.0, 4.0};
    cplx aa(0.8, 0.0), ab(0.6, 0.3);
    int n_max = 14;
    PureState psi0 = tensor(make_coherent(aa, n_max), make_coherent(ab, n_max));
    Propagator prop(spec, psi0.space());
    for (double t : {0.37, kPi / 2}) {
        PureState numeric = prop.at(psi0, t);
        PureState closed = bec_analytic_state(aa, ab, 0, 0, spec, t, n_max, n_max);
        CHECK(fidelity(numeric, closed) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("sector eigensystems reproduce decoupled energies") {
    // hopping off: two-well sector energies omega0 N + omega1 (2j - N) + U N^2
    BECWell b{1.0, 0.3, 1.0, 0.0};
    EigenSystem es = bec_sector_eigensystem(b, 3);
    REQUIRE(es.energies.size() == 4);
    std::vector<double> expect;
    for (int j = 0; j <= 3; ++j) expect.push_back(3.0 + 0.3 * (2 * j - 3) + 9.0);
    std::sort(expect.begin(), expect.end());
    for (int i = 0; i < 4; ++i) CHECK(es.energies(i) == doctest::Approx(expect[(size_t)i]));

    // coupling off: field-atom sector energies omega_f (N-k) + omega_a k + gamma k(k-1)
    AtomField af{1.0, 1.0, 1.0, 0.0};
    EigenSystem ea = af_sector_eigensystem(af, 4);
    REQUIRE(ea.energies.size() == 5);
    CHECK(ea.energies(0) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(ea.energies(1) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(ea.energies(2) == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(ea.energies(3) == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(ea.energies(4) == doctest::Approx(16.0).epsilon(1e-12));
}

TEST_CASE("sector state embedding is a valid eigenvector") {
    BECWell b{1.0, 0.25, 1.0, 0.25};
    PureState psi = bec_sector_state(b, 4, 2);
    CHECK(psi.space().dims == std::vector<int>({5, 5}));
    ModeSpace sp = psi.space();
    MatrixXcd h = build_hamiltonian(b, sp);
    VectorXcd hv = h * psi.amp();
    cplx e = psi.amp().adjoint() * hv;
    CHECK((hv - e * psi.amp()).norm() < 1e-9);
}

TEST_CASE("spin chain closed form matches numeric evolution") {
    double chi = 0.9;
    NMRSpin spec{chi};
    ModeSpace sp({2, 2, 2});
    MatrixXcd h = build_hamiltonian(spec, sp);
    DensityMatrix rho0 = nmr_rho_t(chi, 0.0);
    for (double t : {0.2, 0.11 * kPi}) {
        MatrixXcd u = expm_i(h, t);
        MatrixXcd direct = u * rho0.mat() * u.adjoint();
        DensityMatrix closed = nmr_rho_t(chi, t);
        CHECK((closed.mat() - direct).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("interaction hamiltonians commute with total excitation") {
    DoubleJC spec{1.0, 1.0, 0.8};
    ModeSpace sp({4, 4, 2, 2});
    MatrixXcd h = build_hamiltonian(spec, sp);
    CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    MatrixXcd exc = embed(sp, 0, number_op(4)) + embed(sp, 1, number_op(4)) +
                    embed(sp, 2, sigma_half_z() + 0.5 * MatrixXcd::Identity(2, 2)) +
                    embed(sp, 3, sigma_half_z() + 0.5 * MatrixXcd::Identity(2, 2));
    CHECK((h * exc - exc * h).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("parameter sweep carries the swept value through") {
    BECWell base{1.0, 0.0, 1.0, 0.25};
    auto pts = spectrum_sweep(base, "omega1", {-0.5, 0.0, 0.5}, 2);
    REQUIRE(pts.size() == 3);
    CHECK(pts[1].param == doctest::Approx(0.0));
    CHECK(pts[0].sys.energies.size() == 3);
    // omega1 = 0 with lambda > 0 keeps the sector gap open
    CHECK(pts[1].sys.energies(1) - pts[1].sys.energies(0) > 0.1);
}

TEST_CASE("disorder draw is reproducible and respects the floor") {
    auto a = tavis_disorder_draw(1.0, 0.2, 0.3, 6, 42);
    auto b = tavis_disorder_draw(1.0, 0.2, 0.3, 6, 42);
    CHECK(a == b);
    auto c = tavis_disorder_draw(1.0, 0.2, 0.3, 6, 43);
    CHECK(a != c);
    for (double v : a) CHECK(v >= 0.3);
}
