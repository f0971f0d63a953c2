#include "qtomo/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace qtomo {

double BECWell::lambda1() const { return std::hypot(omega1, lambda); }

namespace {

void expect_dims(const ModeSpace& sp, size_t n, const char* who) {
    if (sp.dims.size() != n) fail(std::string(who) + ": wrong subsystem count for this model");
}

void expect_qubits_from(const ModeSpace& sp, int first, const char* who) {
    for (size_t i = first; i < sp.dims.size(); ++i)
        if (sp.dims[i] != 2) fail(std::string(who) + ": trailing subsystems must be qubits");
}

MatrixXcd kerr_cubic_h(const KerrCubic& s, const ModeSpace& sp) {
    expect_dims(sp, 1, "KerrCubic");
    int d = sp.dims[0];
    MatrixXcd h = MatrixXcd::Zero(d, d);
    for (int n = 0; n < d; ++n)
        h(n, n) = s.chi1 * n * (n - 1.0) + s.chi2 * n * (n - 1.0) * (n - 2.0);
    return h;
}

MatrixXcd two_mode_h(const ModeSpace& sp, double ca, double cb, double U_ntot2, double omega0_ntot,
                     double hop, double kerr_b) {
    // ca a^+a + cb b^+b + omega0_ntot N + U_ntot2 N^2 + hop (a^+b + ab^+) + kerr_b b^+2 b^2
    MatrixXcd na = embed(sp, 0, number_op(sp.dims[0]));
    MatrixXcd nb = embed(sp, 1, number_op(sp.dims[1]));
    MatrixXcd ab = embed(sp, 0, annihilation(sp.dims[0]).adjoint()) *
                   embed(sp, 1, annihilation(sp.dims[1]));
    MatrixXcd n = na + nb;
    MatrixXcd h = ca * na + cb * nb + omega0_ntot * n + U_ntot2 * n * n + hop * (ab + ab.adjoint());
    if (kerr_b != 0.0) {
        MatrixXcd nb2 = nb * (nb - MatrixXcd::Identity(nb.rows(), nb.cols()));
        h += kerr_b * nb2;
    }
    return h;
}

MatrixXcd tavis_h(const TavisCummings& s, const ModeSpace& sp) {
    int M = static_cast<int>(s.Omega_p.size());
    expect_dims(sp, 1 + M, "TavisCummings");
    expect_qubits_from(sp, 1, "TavisCummings");
    int d = sp.dims[0];
    MatrixXcd a = annihilation(d);
    MatrixXcd nf = number_op(d);
    MatrixXcd h = s.Omega_F * embed(sp, 0, nf) +
                  s.chi * embed(sp, 0, nf * (nf - MatrixXcd::Identity(d, d)));
    for (int p = 0; p < M; ++p) {
        h += s.Omega_p[p] * embed(sp, 1 + p, sigma_half_z());
        MatrixXcd up = embed(sp, 0, a.adjoint()) * embed(sp, 1 + p, sigma_minus());
        h += s.Lambda * (up + up.adjoint());
    }
    for (int p = 0; p + 1 < M; ++p) {
        MatrixXcd flip = embed(sp, 1 + p, sigma_minus()) * embed(sp, 2 + p, sigma_plus());
        h += s.Lambda_s * (flip + flip.adjoint());
    }
    return h;
}

MatrixXcd djc_h(const DoubleJC& s, const ModeSpace& sp) {
    expect_dims(sp, 4, "DoubleJC");
    expect_qubits_from(sp, 2, "DoubleJC");
    MatrixXcd h = s.chi_f * (embed(sp, 0, number_op(sp.dims[0])) + embed(sp, 1, number_op(sp.dims[1]))) +
                  s.chi0 * (embed(sp, 2, sigma_half_z()) + embed(sp, 3, sigma_half_z()));
    MatrixXcd ac = embed(sp, 0, annihilation(sp.dims[0]).adjoint()) * embed(sp, 2, sigma_minus());
    MatrixXcd bd = embed(sp, 1, annihilation(sp.dims[1]).adjoint()) * embed(sp, 3, sigma_minus());
    h += s.g0 * (ac + ac.adjoint() + bd + bd.adjoint());
    return h;
}

MatrixXcd dtc_h(const DoubleTC& s, const ModeSpace& sp) {
    expect_dims(sp, 6, "DoubleTC");
    expect_qubits_from(sp, 2, "DoubleTC");
    MatrixXcd h = s.chi_f * (embed(sp, 0, number_op(sp.dims[0])) + embed(sp, 1, number_op(sp.dims[1])));
    for (int k = 0; k < 4; ++k) h += s.chi0 * embed(sp, 2 + k, sigma_half_z());
    for (int k = 0; k < 2; ++k) {
        MatrixXcd ac = embed(sp, 0, annihilation(sp.dims[0]).adjoint()) * embed(sp, 2 + k, sigma_minus());
        MatrixXcd bd = embed(sp, 1, annihilation(sp.dims[1]).adjoint()) * embed(sp, 4 + k, sigma_minus());
        h += s.g0 * (ac + ac.adjoint() + bd + bd.adjoint());
    }
    return h;
}

MatrixXcd nmr_h(const NMRSpin& s, const ModeSpace& sp) {
    expect_dims(sp, 3, "NMRSpin");
    expect_qubits_from(sp, 0, "NMRSpin");
    return 4.0 * s.chi_s * (embed(sp, 1, sigma_half_x()) + embed(sp, 2, sigma_half_x())) *
           embed(sp, 0, sigma_half_x());
}

}  // namespace

MatrixXcd build_hamiltonian(const HamiltonianSpec& spec, const ModeSpace& space) {
    return std::visit(
        [&](const auto& s) -> MatrixXcd {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, KerrCubic>) return kerr_cubic_h(s, space);
            if constexpr (std::is_same_v<T, BECWell>) {
                if (!(s.U > 0)) fail("BECWell: U must be > 0");
                expect_dims(space, 2, "BECWell");
                return two_mode_h(space, s.omega1, -s.omega1, s.U, s.omega0, -s.lambda, 0.0);
            }
            if constexpr (std::is_same_v<T, AtomField>) {
                if (!(s.gamma > 0)) fail("AtomField: gamma must be > 0");
                expect_dims(space, 2, "AtomField");
                return two_mode_h(space, s.omega_f, s.omega_a, 0.0, 0.0, s.g, s.gamma);
            }
            if constexpr (std::is_same_v<T, TavisCummings>) return tavis_h(s, space);
            if constexpr (std::is_same_v<T, DoubleJC>) return djc_h(s, space);
            if constexpr (std::is_same_v<T, DoubleTC>) return dtc_h(s, space);
            if constexpr (std::is_same_v<T, NMRSpin>) return nmr_h(s, space);
        },
        spec);
}

EigenSystem eigensystem(const MatrixXcd& h) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
    if (es.info() != Eigen::Success) fail("eigensystem: dense solve failed");
    EigenSystem sys;
    sys.energies = es.eigenvalues();
    sys.states = es.eigenvectors();
    return sys;
}

Propagator::Propagator(const HamiltonianSpec& spec, const ModeSpace& space) : space_(space) {
    MatrixXcd h = build_hamiltonian(spec, space);
    if (std::holds_alternative<KerrCubic>(spec)) {
        diagonal_ = true;
        energies_ = h.diagonal().real();
        return;
    }
    EigenSystem sys = eigensystem(h);
    energies_ = std::move(sys.energies);
    states_ = std::move(sys.states);
}

PureState Propagator::at(const PureState& psi0, double t) const {
    if (!(psi0.space() == space_)) fail("Propagator: state space mismatch");
    VectorXcd phases(energies_.size());
    for (long long i = 0; i < energies_.size(); ++i) phases(i) = std::polar(1.0, -energies_(i) * t);
    if (diagonal_) return PureState(space_, phases.cwiseProduct(psi0.amp()));
    VectorXcd c = states_.adjoint() * psi0.amp();
    return PureState(space_, states_ * phases.cwiseProduct(c));
}

PureState evolve(const PureState& psi, const HamiltonianSpec& spec, double t) {
    return Propagator(spec, psi.space()).at(psi, t);
}

PureState bec_analytic_state(cplx alpha_a, cplx alpha_b, int m1, int m2, const BECWell& spec,
                             double t, int n_max_a, int n_max_b) {
    if (m1 < 0 || m2 < 0) fail("bec_analytic_state: negative boson addition");
    if (!(spec.U > 0)) fail("bec_analytic_state: U must be > 0");
    double l1 = spec.lambda1();
    double sinc = (l1 > 0) ? std::sin(l1 * t) / l1 : t;  // sin(x t)/x -> t as x -> 0
    cplx at = alpha_a * std::cos(l1 * t) + cplx(0, 1) * sinc * (spec.lambda * alpha_b - spec.omega1 * alpha_a);
    cplx bt = alpha_b * std::cos(l1 * t) + cplx(0, 1) * sinc * (spec.lambda * alpha_a + spec.omega1 * alpha_b);

    ModeSpace sp({n_max_a + 1, n_max_b + 1});
    VectorXcd amp = VectorXcd::Zero(sp.total_dim());
    double lead = -0.5 * (std::norm(alpha_a) + std::norm(alpha_b));
    double ra = std::abs(at), rb = std::abs(bt);
    double pha = std::arg(at), phb = std::arg(bt);
    for (int p = 0; p <= n_max_a; ++p) {
        if (ra == 0.0 && p > 0) break;
        for (int q = 0; q <= n_max_b; ++q) {
            if (rb == 0.0 && q > 0) break;
            double lm = lead + p * (ra > 0 ? std::log(ra) : 0.0) + q * (rb > 0 ? std::log(rb) : 0.0) -
                        0.5 * (log_factorial(p) + log_factorial(q));
            double phase = p * pha + q * phb -
                           t * (spec.omega0 * (p + q) + spec.U * double(p + q) * double(p + q));
            amp(sp.flat({p, q})) = std::polar(std::exp(lm), phase);
        }
    }

    if (m1 > 0 || m2 > 0) {
        // dress the freely evolved product of coherent states with the evolved
        // creation operators, written as a finite operator sum
        double kappa = std::atan2(spec.lambda, spec.omega1);
        double c2 = std::cos(0.5 * kappa), s2 = std::sin(0.5 * kappa);
        int mt = m1 + m2;

        // N-dependent phase acts first: exp(-i U t mt (2N + mt)) exp(-i omega0 t mt)
        for (int p = 0; p <= n_max_a; ++p)
            for (int q = 0; q <= n_max_b; ++q) {
                double ph = -spec.omega0 * t * mt - spec.U * t * mt * (2.0 * (p + q) + mt);
                amp(sp.flat({p, q})) *= std::polar(1.0, ph);
            }

        // accumulate coefficients of a^+da b^+db over the quadruple sum
        MatrixXcd coef = MatrixXcd::Zero(mt + 1, mt + 1);  // coef(da, db), da + db = mt
        for (int k = 0; k <= m1; ++k)
            for (int l = 0; l <= m2; ++l) {
                int pmax = k + m2 - l, qmax = l + m1 - k;
                cplx lam_phase = std::polar(1.0, -l1 * t * (2.0 * (k - l) + m2 - m1));
                for (int p = 0; p <= pmax; ++p)
                    for (int q = 0; q <= qmax; ++q) {
                        double sgn = ((k - p) % 2 == 0) ? 1.0 : -1.0;
                        double mag = binomial_coeff(m1, k) * binomial_coeff(m2, l) *
                                     binomial_coeff(pmax, p) * binomial_coeff(qmax, q) *
                                     std::pow(c2, k + l + p + q) *
                                     std::pow(s2, 2 * mt - (k + l + p + q));
                        coef(p + qmax - q, q + pmax - p) += sgn * mag * lam_phase;
                    }
            }

        VectorXcd dressed = VectorXcd::Zero(sp.total_dim());
        for (int da = 0; da <= mt; ++da) {
            int db = mt - da;
            if (std::abs(coef(da, db)) == 0.0) continue;
            for (int p = 0; p + da <= n_max_a; ++p)
                for (int q = 0; q + db <= n_max_b; ++q) {
                    double lift = std::exp(0.5 * (log_factorial(p + da) - log_factorial(p) +
                                                  log_factorial(q + db) - log_factorial(q)));
                    dressed(sp.flat({p + da, q + db})) += coef(da, db) * lift * amp(sp.flat({p, q}));
                }
        }
        double mu = std::sqrt(std::exp(log_factorial(m1)) * laguerre_neg(m1, std::norm(alpha_a)) *
                              std::exp(log_factorial(m2)) * laguerre_neg(m2, std::norm(alpha_b)));
        amp = dressed / mu;
    }

    double mass = amp.squaredNorm();
    if (1.0 - mass > 1e-6)
        fail("bec_analytic_state: truncation loses mass " + std::to_string(1.0 - mass) +
             " > 1e-6; raise n_max");
    return PureState(std::move(sp), amp / std::sqrt(mass));
}

namespace {

// best rational p/q ~ x (x > 0) via continued fractions; nullopt when no
// approximation with p,q <= cap reaches relative tolerance tol
std::optional<std::pair<long long, long long>> rationalize(double x, double tol, double cap) {
    long long pm = 1, qm = 0;  // convergent before the current one
    long long p = static_cast<long long>(std::floor(x)), q = 1;
    double frac = x - std::floor(x);
    for (int it = 0; it < 64; ++it) {
        if (q > 0 && std::abs(double(p) / double(q) - x) <= tol * x) return std::make_pair(p, q);
        if (frac == 0.0) break;
        double v = 1.0 / frac;
        double whole = std::floor(v);
        frac = v - whole;
        long long a = static_cast<long long>(whole);
        long long p2 = a * p + pm, q2 = a * q + qm;
        if (double(p2) > cap || double(q2) > cap) return std::nullopt;
        pm = p;
        qm = q;
        p = p2;
        q = q2;
    }
    if (q > 0 && std::abs(double(p) / double(q) - x) <= tol * x) return std::make_pair(p, q);
    return std::nullopt;
}

bool near_integer(double x, long long& out, double tol = 1e-9) {
    double r = std::round(x);
    if (std::abs(x - r) <= tol * std::max(1.0, std::abs(x))) {
        out = static_cast<long long>(r);
        return true;
    }
    return false;
}

}  // namespace

std::optional<double> revival_time(const HamiltonianSpec& spec) {
    if (const auto* kc = std::get_if<KerrCubic>(&spec)) {
        double c1 = std::abs(kc->chi1), c2 = std::abs(kc->chi2);
        if (c1 == 0.0 && c2 == 0.0) return std::nullopt;
        if (c2 == 0.0) return kPi / c1;
        if (c1 == 0.0) return kPi / c2;
        // Tolerance at double precision with a 1e7 cap: a genuinely rational
        // ratio (denominator within the cap) reconstructs to a few ulps, while
        // the best rational approximations of an irrational need denominators
        // beyond the cap before they get that close (error ~ 1/q^2).
        auto pq = rationalize(c1 / c2, 1e-15, 1e7);
        if (!pq) return std::nullopt;
        return kPi * double(pq->first) / c1;
    }
    if (const auto* b = std::get_if<BECWell>(&spec)) {
        if (!(b->U > 0)) return std::nullopt;
        long long m = 0, mp = 0;
        if (!near_integer(b->omega0 / b->U, m)) return std::nullopt;
        if (!near_integer(b->lambda1() / b->U, mp)) return std::nullopt;
        if ((m + mp) % 2 == 0) return std::nullopt;
        return kPi / b->U;
    }
    return std::nullopt;
}

DensityMatrix nmr_rho_t(double chi_s, double t) {
    MatrixXcd psi = make_bell_psi_plus().amp() * make_bell_psi_plus().amp().adjoint();
    MatrixXcd phi = make_bell_phi_plus().amp() * make_bell_phi_plus().amp().adjoint();
    MatrixXcd cross =
        make_bell_phi_plus().amp() * make_bell_psi_plus().amp().adjoint();  // |phi+><psi+|
    MatrixXcd rm_plus(2, 2), rm_minus(2, 2);
    rm_plus << 0.5, 0.5, 0.5, 0.5;    // |+x><+x|
    rm_minus << 0.5, -0.5, -0.5, 0.5;
    MatrixXcd eye2 = MatrixXcd::Identity(2, 2);

    double c2 = std::cos(2.0 * chi_s * t), s2 = std::sin(2.0 * chi_s * t);
    double s4 = std::sin(4.0 * chi_s * t);
    MatrixXcd rho = 0.5 * c2 * c2 * (kron(rm_plus, phi) + kron(rm_minus, psi)) +
                    0.5 * s2 * s2 * (kron(rm_plus, psi) + kron(rm_minus, phi)) +
                    cplx(0, 0.25) * s4 * kron(eye2, cross - cross.adjoint());
    return DensityMatrix(ModeSpace({2, 2, 2}), std::move(rho));
}

namespace {

// Eigenvectors of exactly degenerate levels are basis-convention artifacts of
// the solver.  When a coupling structure is supplied, each degenerate block is
// re-diagonalized along it, which selects the zero-coupling limit of the
// interacting eigenvectors (the mixed combinations, e.g. (|4,0>+|3,1>)/sqrt(2)
// at the atom-field level crossing).  Within a block, columns are ordered by
// descending coupling eigenvalue.
EigenSystem sector_solve(const MatrixXd& h, int N, const MatrixXd* coupling = nullptr) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(h);
    if (es.info() != Eigen::Success) fail("sector eigensolve failed");
    MatrixXd vecs = es.eigenvectors();
    VectorXd vals = es.eigenvalues();
    if (coupling) {
        double tol = 1e-11 * std::max(1.0, vals.cwiseAbs().maxCoeff());
        int n = static_cast<int>(vals.size());
        for (int i0 = 0; i0 < n;) {
            int i1 = i0 + 1;
            while (i1 < n && vals(i1) - vals(i1 - 1) <= tol) ++i1;
            if (i1 - i0 > 1) {
                MatrixXd block = vecs.middleCols(i0, i1 - i0);
                Eigen::SelfAdjointEigenSolver<MatrixXd> bs(block.transpose() * (*coupling) * block);
                if (bs.info() != Eigen::Success) fail("degenerate-block resolve failed");
                vecs.middleCols(i0, i1 - i0) = block * bs.eigenvectors().rowwise().reverse();
            }
            i0 = i1;
        }
    }
    EigenSystem sys;
    sys.energies = vals;
    sys.states = vecs.cast<cplx>();
    for (int k = 0; k < vals.size(); ++k) sys.labels.emplace_back(N, k);
    return sys;
}

}  // namespace

EigenSystem bec_sector_eigensystem(const BECWell& spec, int N) {
    if (N < 0) fail("bec_sector_eigensystem: negative N");
    MatrixXd h = MatrixXd::Zero(N + 1, N + 1);
    MatrixXd hop = MatrixXd::Zero(N + 1, N + 1);  // unit-strength well coupling
    for (int j = 0; j <= N; ++j) {  // basis |n_a=j, n_b=N-j>
        h(j, j) = spec.omega0 * N + spec.omega1 * (2.0 * j - N) + spec.U * double(N) * N;
        if (j < N) hop(j + 1, j) = hop(j, j + 1) = -std::sqrt((j + 1.0) * (N - j));
    }
    h += spec.lambda * hop;
    return sector_solve(h, N, &hop);
}

EigenSystem af_sector_eigensystem(const AtomField& spec, int N) {
    if (N < 0) fail("af_sector_eigensystem: negative N");
    MatrixXd h = MatrixXd::Zero(N + 1, N + 1);
    MatrixXd hop = MatrixXd::Zero(N + 1, N + 1);  // unit-strength field-mode coupling
    for (int k = 0; k <= N; ++k) {  // basis |n_f=N-k, n_b=k>
        h(k, k) = spec.omega_f * (N - k) + spec.omega_a * k + spec.gamma * k * (k - 1.0);
        if (k > 0) hop(k - 1, k) = hop(k, k - 1) = std::sqrt(k * (N - k + 1.0));
    }
    h += spec.g * hop;
    return sector_solve(h, N, &hop);
}

EigenSystem tavis_sector_eigensystem(const TavisCummings& spec, int N) {
    int M = static_cast<int>(spec.Omega_p.size());
    if (M < 1 || M > 20) fail("tavis_sector_eigensystem: qubit count out of range");
    if (N < 0) fail("tavis_sector_eigensystem: negative N");
    // basis: qubit patterns s (bit M-1-q of s set <=> qubit q excited), n_field = N - popcount
    std::vector<int> basis;
    for (int s = 0; s < (1 << M); ++s)
        if (N - __builtin_popcount(s) >= 0) basis.push_back(s);
    int D = static_cast<int>(basis.size());
    std::vector<int> where(1 << M, -1);
    for (int i = 0; i < D; ++i) where[basis[i]] = i;

    MatrixXd h = MatrixXd::Zero(D, D);
    for (int i = 0; i < D; ++i) {
        int s = basis[i];
        int n = N - __builtin_popcount(s);
        double diag = spec.Omega_F * n + spec.chi * n * (n - 1.0);
        for (int q = 0; q < M; ++q) {
            bool exc = (s >> (M - 1 - q)) & 1;
            diag += spec.Omega_p[q] * (exc ? 0.5 : -0.5);
            if (exc) {
                int s2 = s & ~(1 << (M - 1 - q));  // emit a photon
                if (where[s2] >= 0) {
                    double el = spec.Lambda * std::sqrt(n + 1.0);
                    h(where[s2], i) += el;
                    h(i, where[s2]) += el;
                }
            }
            if (q + 1 < M) {
                bool exc2 = (s >> (M - 2 - q)) & 1;
                if (exc && !exc2) {  // hop excitation q -> q+1
                    int s2 = (s & ~(1 << (M - 1 - q))) | (1 << (M - 2 - q));
                    h(where[s2], i) += spec.Lambda_s;
                    h(i, where[s2]) += spec.Lambda_s;
                }
            }
        }
        h(i, i) = diag;
    }
    return sector_solve(h, N);
}

namespace {

PureState sector_state(const EigenSystem& sys, int N, int k, bool bec_layout) {
    if (k < 0 || k > N) fail("sector state: k outside 0..N");
    ModeSpace sp({N + 1, N + 1});
    VectorXcd amp = VectorXcd::Zero(sp.total_dim());
    for (int j = 0; j <= N; ++j) {
        // bec layout: basis j = |n_a=j, n_b=N-j>; atom-field: basis k' = |n_f=N-k', n_b=k'>
        long long idx = bec_layout ? sp.flat({j, N - j}) : sp.flat({N - j, j});
        amp(idx) = sys.states(j, k);
    }
    return PureState::normalized(std::move(sp), std::move(amp));
}

}  // namespace

PureState bec_sector_state(const BECWell& spec, int N, int k) {
    return sector_state(bec_sector_eigensystem(spec, N), N, k, true);
}

PureState af_sector_state(const AtomField& spec, int N, int k) {
    return sector_state(af_sector_eigensystem(spec, N), N, k, false);
}

std::vector<SweepPoint> spectrum_sweep(const HamiltonianSpec& base, const std::string& param_name,
                                       const std::vector<double>& values, int N_sector) {
    std::vector<SweepPoint> out;
    out.reserve(values.size());
    for (double v : values) {
        HamiltonianSpec spec = base;
        if (auto* b = std::get_if<BECWell>(&spec)) {
            if (param_name == "omega0") b->omega0 = v;
            else if (param_name == "omega1") b->omega1 = v;
            else if (param_name == "U") b->U = v;
            else if (param_name == "lambda") b->lambda = v;
            else fail("spectrum_sweep: unknown BEC parameter " + param_name);
            out.push_back({v, bec_sector_eigensystem(*b, N_sector)});
        } else if (auto* a = std::get_if<AtomField>(&spec)) {
            if (param_name == "omega_f") a->omega_f = v;
            else if (param_name == "omega_a") a->omega_a = v;
            else if (param_name == "gamma") a->gamma = v;
            else if (param_name == "g") a->g = v;
            else fail("spectrum_sweep: unknown atom-field parameter " + param_name);
            out.push_back({v, af_sector_eigensystem(*a, N_sector)});
        } else {
            fail("spectrum_sweep: only the two-well and atom-field models support sweeps");
        }
    }
    return out;
}

std::vector<double> tavis_disorder_draw(double mean_gap, double sigma_frac, double epsilon, int M,
                                        unsigned long long seed) {
    if (M < 1) fail("tavis_disorder_draw: M must be >= 1");
    std::mt19937_64 rng(seed);
    auto unit = [&rng]() {
        // uniform in (0,1]; explicit Box-Muller keeps draws bitwise reproducible
        return (static_cast<double>(rng() >> 11) + 1.0) * 0x1p-53;
    };
    std::vector<double> omega(M);
    for (int p = 0; p < M; ++p) {
        double u1 = unit(), u2 = unit();
        double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
        double delta = mean_gap + sigma_frac * mean_gap * z;
        omega[p] = std::hypot(delta, epsilon);
    }
    return omega;
}

}  // namespace qtomo
