#include "qtomo/moments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>

namespace qtomo {

namespace {

// Unscaled Hermite polynomial values H_order(x) on the whole grid.
VectorXd hermite_poly(int order, const std::vector<double>& xs) {
    VectorXd h(static_cast<long long>(xs.size()));
    for (size_t i = 0; i < xs.size(); ++i) {
        double x = xs[i];
        double hm = 0.0, hc = 1.0;
        for (int n = 0; n < order; ++n) {
            double hn = 2.0 * x * hc - 2.0 * n * hm;
            hm = hc;
            hc = hn;
        }
        h[static_cast<long long>(i)] = hc;
    }
    return h;
}

// k! l! / ((k+l+1)! 2^{(k+l)/2})
double inversion_constant(int k, int l) {
    return std::exp(log_factorial(k) + log_factorial(l) - log_factorial(k + l + 1) -
                    0.5 * (k + l) * std::log(2.0));
}

int slice_index_or_fail(const QuadGrid& grid, double theta, const char* who) {
    int ti = grid.theta_index(theta);
    if (ti < 0) fail(std::string(who) + ": tomogram lacks required angle " + std::to_string(theta));
    return ti;
}

VectorXd simpson_vector(const QuadGrid& grid) {
    auto w = simpson_weights(grid.n_x, grid.dx());
    return Eigen::Map<const VectorXd>(w.data(), static_cast<long long>(w.size()));
}

// Sum_{j=1..q} C(q,j)^2 j! <a†^{q-j} a^{q-j}>, the commutator [a^q, a†^q].
double commutator_from_moments(int q, const std::function<cplx(int, int)>& mom) {
    double f = 0.0;
    for (int j = 1; j <= q; ++j) {
        double c = binomial_coeff(q, j);
        f += c * c * std::exp(log_factorial(j)) * std::real(mom(q - j, q - j));
    }
    return f;
}

SqueezeReport dq_report(int q, double var_z, double f_abs) {
    if (f_abs < 1e-12) fail("hillery_dq: commutator expectation vanishes, D_q undefined");
    double d = (2.0 * var_z - f_abs) / f_abs;
    return SqueezeReport{q, d, 0.0, d < 0.0};
}

// D_q from the normal-ordered moment supplier (single mode).
SqueezeReport dq_single_from_moments(int q, Quadrature which,
                                     const std::function<cplx(int, int)>& mom) {
    cplx a_q = mom(0, q);
    cplx a_2q = mom(0, 2 * q);
    double nn = std::real(mom(q, q));
    double f = commutator_from_moments(q, mom);
    double mean, second;
    if (which == Quadrature::z1) {
        mean = std::sqrt(2.0) * std::real(a_q);
        second = std::real(a_2q) + nn + 0.5 * f;
    } else {
        mean = std::sqrt(2.0) * std::imag(a_q);
        second = -std::real(a_2q) + nn + 0.5 * f;
    }
    return dq_report(q, second - mean * mean, std::abs(f));
}

// D_q for two modes; mom(k,l,m,n) = <a†^k a^l b†^m b^n>.
SqueezeReport dq_two_from_moments(int q, Quadrature which,
                                  const std::function<cplx(int, int, int, int)>& mom) {
    cplx a_q = mom(0, q, 0, 0), b_q = mom(0, 0, 0, q);
    cplx a_2q = mom(0, 2 * q, 0, 0), b_2q = mom(0, 0, 0, 2 * q);
    double nna = std::real(mom(q, q, 0, 0)), nnb = std::real(mom(0, 0, q, q));
    double fa = commutator_from_moments(q, [&](int k, int l) { return mom(k, l, 0, 0); });
    double fb = commutator_from_moments(q, [&](int k, int l) { return mom(0, 0, k, l); });
    double ab = std::real(mom(0, q, 0, q));   // <a^q b^q>
    double adb = std::real(mom(q, 0, 0, q));  // <a†^q b^q>
    double mean, second;
    if (which == Quadrature::z1) {
        mean = (std::real(a_q) + std::real(b_q)) / std::sqrt(2.0);
        double sa = 2.0 * std::real(a_2q) + 2.0 * nna + fa;
        double sb = 2.0 * std::real(b_2q) + 2.0 * nnb + fb;
        double cross = 2.0 * ab + 2.0 * adb;
        second = 0.125 * (sa + sb + 2.0 * cross);
    } else {
        mean = (std::imag(a_q) + std::imag(b_q)) / std::sqrt(2.0);
        double da = 2.0 * std::real(a_2q) - 2.0 * nna - fa;
        double db = 2.0 * std::real(b_2q) - 2.0 * nnb - fb;
        double cross = 2.0 * ab - 2.0 * adb;
        second = -0.125 * (da + db + 2.0 * cross);
    }
    return dq_report(q, second - mean * mean, 0.25 * std::abs(fa + fb));
}

// Zero amplitudes that occupy the top `excess` levels of any mode, where the
// truncated ladder algebra is unreliable, then renormalize.  Significant
// weight there means the cutoff is too small for this order.
PureState edge_projected(const PureState& psi, int excess) {
    const ModeSpace& sp = psi.space();
    VectorXcd amp = psi.amp();
    double removed = 0.0;
    for (long long f = 0; f < sp.total_dim(); ++f) {
        auto idx = sp.unflat(f);
        bool edge = false;
        for (int s = 0; s < sp.n_subsystems(); ++s)
            if (idx[s] >= sp.dims[s] - excess) edge = true;
        if (edge) {
            removed += std::norm(amp[f]);
            amp[f] = cplx(0.0, 0.0);
        }
    }
    if (removed > 1e-10)
        fail("hillery_dq: population " + std::to_string(removed) +
             " in the top Fock levels; raise the cutoff");
    return PureState(sp, amp / amp.norm());
}

DensityMatrix edge_projected(const DensityMatrix& rho, int excess) {
    const ModeSpace& sp = rho.space();
    MatrixXcd m = rho.mat();
    double removed = 0.0;
    for (long long f = 0; f < sp.total_dim(); ++f) {
        auto idx = sp.unflat(f);
        bool edge = false;
        for (int s = 0; s < sp.n_subsystems(); ++s)
            if (idx[s] >= sp.dims[s] - excess) edge = true;
        if (edge) {
            removed += std::real(m(f, f));
            m.row(f).setZero();
            m.col(f).setZero();
        }
    }
    if (removed > 1e-10)
        fail("hillery_dq: population " + std::to_string(removed) +
             " in the top Fock levels; raise the cutoff");
    m /= std::real(m.trace());
    return DensityMatrix(rho.space(), m);
}

MatrixXcd matrix_power(const MatrixXcd& a, int q) {
    MatrixXcd p = MatrixXcd::Identity(a.rows(), a.cols());
    for (int i = 0; i < q; ++i) p = p * a;
    return p;
}

// Normal-ordered moments of one mode evaluated directly on a state.
template <typename State>
std::function<cplx(int, int)> state_moments_single(const State& st) {
    int d = st.space().dims[0];
    MatrixXcd a = annihilation(d);
    return [st, a, d](int k, int l) {
        MatrixXcd op = matrix_power(a.adjoint(), k) * matrix_power(a, l);
        return expval(st, op);
    };
}

template <typename State>
std::function<cplx(int, int, int, int)> state_moments_two(const State& st) {
    const ModeSpace sp = st.space();
    MatrixXcd a = annihilation(sp.dims[0]), b = annihilation(sp.dims[1]);
    return [st, sp, a, b](int k, int l, int m, int n) {
        MatrixXcd op_a = matrix_power(a.adjoint(), k) * matrix_power(a, l);
        MatrixXcd op_b = matrix_power(b.adjoint(), m) * matrix_power(b, n);
        return expval(st, kron(op_a, op_b));
    };
}

template <typename State>
SqueezeReport dq_state_single(const State& st, int q, Quadrature which) {
    if (st.space().n_subsystems() != 1) fail("hillery_dq: expected a single-mode state");
    if (st.space().dims[0] <= 2 * q) fail("hillery_dq: cutoff too small for order q");
    State safe = edge_projected(st, 2 * q);
    return dq_single_from_moments(q, which, state_moments_single(safe));
}

template <typename State>
SqueezeReport dq_state_two(const State& st, int q, Quadrature which) {
    if (st.space().n_subsystems() != 2) fail("hillery_dq_two_mode: expected a two-mode state");
    if (st.space().dims[0] <= 2 * q || st.space().dims[1] <= 2 * q)
        fail("hillery_dq_two_mode: cutoff too small for order q");
    State safe = edge_projected(st, 2 * q);
    return dq_two_from_moments(q, which, state_moments_two(safe));
}

std::vector<std::array<double, 3>> fibonacci_sphere(int n) {
    std::vector<std::array<double, 3>> dirs;
    dirs.reserve(n);
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
        double z = 1.0 - (2.0 * i + 1.0) / n;
        double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        dirs.push_back({r * std::cos(golden * i), r * std::sin(golden * i), z});
    }
    return dirs;
}

// Orthonormal pair spanning the plane normal to the unit vector u.
void perp_basis(const std::array<double, 3>& u, std::array<double, 3>& e1,
                std::array<double, 3>& e2) {
    std::array<double, 3> t = std::abs(u[0]) < 0.9 ? std::array<double, 3>{1.0, 0.0, 0.0}
                                                   : std::array<double, 3>{0.0, 1.0, 0.0};
    e1 = {t[1] * u[2] - t[2] * u[1], t[2] * u[0] - t[0] * u[2], t[0] * u[1] - t[1] * u[0]};
    double n1 = std::sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]);
    for (auto& c : e1) c /= n1;
    e2 = {u[1] * e1[2] - u[2] * e1[1], u[2] * e1[0] - u[0] * e1[2], u[0] * e1[1] - u[1] * e1[0]};
}

struct SpinFrame {
    std::array<MatrixXcd, 3> j;   // collective spin components
    std::array<double, 3> mean;   // <J>
    Eigen::Matrix3d s2;           // symmetrized <J_i J_j>
};

SpinFrame spin_frame(const DensityMatrix& rho) {
    const ModeSpace& sp = rho.space();
    for (int d : sp.dims)
        if (d != 2) fail("spin squeezing: every subsystem must be a qubit");
    SpinFrame fr;
    std::array<MatrixXcd, 3> single = {sigma_half_x(), sigma_half_y(), sigma_half_z()};
    for (int i = 0; i < 3; ++i) {
        fr.j[i] = MatrixXcd::Zero(sp.total_dim(), sp.total_dim());
        for (int s = 0; s < sp.n_subsystems(); ++s) fr.j[i] += embed(sp, s, single[i]);
        fr.mean[i] = std::real(expval(rho, fr.j[i]));
    }
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            fr.s2(i, k) =
                0.5 * std::real(expval(rho, MatrixXcd(fr.j[i] * fr.j[k] + fr.j[k] * fr.j[i])));
    return fr;
}

double direction_variance(const SpinFrame& fr, const std::array<double, 3>& v) {
    Eigen::Vector3d vv(v[0], v[1], v[2]);
    double m = fr.mean[0] * v[0] + fr.mean[1] * v[1] + fr.mean[2] * v[2];
    return vv.dot(fr.s2 * vv) - m * m;
}

}  // namespace

cplx moment_from_tomogram_single(const Tomogram& t, int k, int l) {
    if (k < 0 || l < 0) fail("moment_from_tomogram_single: negative operator powers");
    int order = k + l;
    if (order > 60) fail("moment_from_tomogram_single: Hermite degree above 60");
    VectorXd h = hermite_poly(order, t.grid.xs());
    VectorXd sw = simpson_vector(t.grid);
    VectorXd hw = h.cwiseProduct(sw);
    cplx acc(0.0, 0.0);
    for (int m = 0; m <= order; ++m) {
        double theta = m * kPi / (order + 1);
        int ti = slice_index_or_fail(t.grid, theta, "moment_from_tomogram_single");
        double integral = t.values.row(ti).dot(hw);
        acc += std::polar(1.0, (l - k) * theta) * integral;
    }
    return inversion_constant(k, l) * acc;
}

cplx moment_from_tomogram_two(const Tomogram2& t, int k, int l, int m, int n) {
    if (k < 0 || l < 0 || m < 0 || n < 0) fail("moment_from_tomogram_two: negative operator powers");
    int oa = k + l, ob = m + n;
    if (oa > 60 || ob > 60) fail("moment_from_tomogram_two: Hermite degree above 60");
    VectorXd va = hermite_poly(oa, t.grid_a.xs()).cwiseProduct(simpson_vector(t.grid_a));
    VectorXd vb = hermite_poly(ob, t.grid_b.xs()).cwiseProduct(simpson_vector(t.grid_b));
    cplx acc(0.0, 0.0);
    for (int p = 0; p <= oa; ++p) {
        double th_a = p * kPi / (oa + 1);
        int ia = slice_index_or_fail(t.grid_a, th_a, "moment_from_tomogram_two");
        for (int s = 0; s <= ob; ++s) {
            double th_b = s * kPi / (ob + 1);
            int ib = slice_index_or_fail(t.grid_b, th_b, "moment_from_tomogram_two");
            double integral = va.dot(t.slice(ia, ib) * vb);
            acc += std::polar(1.0, (l - k) * th_a + (n - m) * th_b) * integral;
        }
    }
    return inversion_constant(k, l) * inversion_constant(m, n) * acc;
}

std::vector<double> union_quorum_thetas(int max_order) {
    if (max_order < 0) fail("union_quorum_thetas: negative order");
    std::vector<double> all;
    for (int o = 0; o <= max_order; ++o) {
        auto q = QuadGrid::quorum_thetas(o);
        all.insert(all.end(), q.begin(), q.end());
    }
    std::sort(all.begin(), all.end());
    std::vector<double> out;
    for (double th : all)
        if (out.empty() || th - out.back() > 1e-12) out.push_back(th);
    return out;
}

double hong_mandel_moment(const Tomogram& t, double theta, int q) {
    if (q < 1) fail("hong_mandel_moment: order must be >= 1");
    int ti = slice_index_or_fail(t.grid, theta, "hong_mandel_moment");
    VectorXd sw = simpson_vector(t.grid);
    auto xs = t.grid.xs();
    Eigen::VectorXd w = t.slice(ti);
    double mean = 0.0;
    for (int i = 0; i < t.grid.n_x; ++i) mean += sw[i] * w[i] * xs[i];
    double central = 0.0;
    for (int i = 0; i < t.grid.n_x; ++i)
        central += sw[i] * w[i] * std::pow(xs[i] - mean, 2.0 * q);
    return central;
}

double two_mode_quadrature_moment(const Tomogram2& t, int q) {
    if (q < 1) fail("two_mode_quadrature_moment: order must be >= 1");
    int ia = slice_index_or_fail(t.grid_a, 0.0, "two_mode_quadrature_moment");
    int ib = slice_index_or_fail(t.grid_b, 0.0, "two_mode_quadrature_moment");
    const MatrixXd& w = t.slice(ia, ib);
    VectorXd swa = simpson_vector(t.grid_a), swb = simpson_vector(t.grid_b);
    auto xa = t.grid_a.xs();
    auto xb = t.grid_b.xs();
    double mean = 0.0;
    for (int i = 0; i < t.grid_a.n_x; ++i) {
        double row = 0.0;
        for (int j = 0; j < t.grid_b.n_x; ++j)
            row += swb[j] * w(i, j) * 0.5 * (xa[i] + xb[j]);
        mean += swa[i] * row;
    }
    double central = 0.0;
    for (int i = 0; i < t.grid_a.n_x; ++i) {
        double row = 0.0;
        for (int j = 0; j < t.grid_b.n_x; ++j)
            row += swb[j] * w(i, j) * std::pow(0.5 * (xa[i] + xb[j]) - mean, 2.0 * q);
        central += swa[i] * row;
    }
    return central;
}

double hong_mandel_threshold(int q, double vacuum_variance) {
    if (q < 1) fail("hong_mandel_threshold: order must be >= 1");
    double df = 1.0;
    for (int j = 1; j <= q; ++j) df *= 2.0 * j - 1.0;
    return df * std::pow(vacuum_variance, q);
}

SqueezeReport hillery_dq(const PureState& psi, int q, Quadrature which) {
    if (q < 1) fail("hillery_dq: order must be >= 1");
    return dq_state_single(psi, q, which);
}

SqueezeReport hillery_dq(const DensityMatrix& rho, int q, Quadrature which) {
    if (q < 1) fail("hillery_dq: order must be >= 1");
    return dq_state_single(rho, q, which);
}

SqueezeReport hillery_dq(const Tomogram& t, int q, Quadrature which) {
    if (q < 1) fail("hillery_dq: order must be >= 1");
    return dq_single_from_moments(
        q, which, [&t](int k, int l) { return moment_from_tomogram_single(t, k, l); });
}

SqueezeReport hillery_dq_two_mode(const PureState& psi, int q, Quadrature which) {
    if (q < 1) fail("hillery_dq_two_mode: order must be >= 1");
    return dq_state_two(psi, q, which);
}

SqueezeReport hillery_dq_two_mode(const DensityMatrix& rho, int q, Quadrature which) {
    if (q < 1) fail("hillery_dq_two_mode: order must be >= 1");
    return dq_state_two(rho, q, which);
}

SqueezeReport hillery_dq_two_mode(const Tomogram2& t, int q, Quadrature which) {
    if (q < 1) fail("hillery_dq_two_mode: order must be >= 1");
    return dq_two_from_moments(q, which, [&t](int k, int l, int m, int n) {
        return moment_from_tomogram_two(t, k, l, m, n);
    });
}

double tomographic_entropy_slice(const Tomogram& t, double theta) {
    int ti = slice_index_or_fail(t.grid, theta, "tomographic_entropy_slice");
    VectorXd sw = simpson_vector(t.grid);
    Eigen::VectorXd w = t.slice(ti);
    double s = 0.0;
    for (int i = 0; i < t.grid.n_x; ++i)
        if (w[i] > 0.0) s -= sw[i] * w[i] * std::log(w[i]);
    return s;
}

double entropic_threshold() { return 0.5 * (1.0 + std::log(kPi)); }

SqueezeReport entropic_squeeze(const Tomogram& t, double theta) {
    double s = tomographic_entropy_slice(t, theta);
    double thr = entropic_threshold();
    return SqueezeReport{1, s, thr, s < thr};
}

SqueezeReport spin_min_variance(const DensityMatrix& rho, int n_dirs) {
    if (n_dirs < 1) fail("spin_min_variance: need at least one direction");
    SpinFrame fr = spin_frame(rho);
    double mean_norm = std::sqrt(fr.mean[0] * fr.mean[0] + fr.mean[1] * fr.mean[1] +
                                 fr.mean[2] * fr.mean[2]);
    double best = std::numeric_limits<double>::infinity();
    if (mean_norm < 1e-10) {
        for (const auto& v : fibonacci_sphere(n_dirs))
            best = std::min(best, direction_variance(fr, v));
    } else {
        std::array<double, 3> u = {fr.mean[0] / mean_norm, fr.mean[1] / mean_norm,
                                   fr.mean[2] / mean_norm};
        std::array<double, 3> e1, e2;
        perp_basis(u, e1, e2);
        for (int j = 0; j < n_dirs; ++j) {
            double psi = 2.0 * kPi * j / n_dirs;
            std::array<double, 3> v;
            for (int c = 0; c < 3; ++c) v[c] = std::cos(psi) * e1[c] + std::sin(psi) * e2[c];
            best = std::min(best, direction_variance(fr, v));
        }
    }
    // guard so boundary states (aligned product states) do not flicker on roundoff
    return SqueezeReport{1, best, 0.5, best < 0.5 - 1e-12};
}

SqueezeReport spin_second_order_variance(const DensityMatrix& rho, int n_v1, int n_psi) {
    if (n_v1 < 1 || n_psi < 1) fail("spin_second_order_variance: empty direction scan");
    SpinFrame fr = spin_frame(rho);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& v1 : fibonacci_sphere(n_v1)) {
        // v2 must keep <J.v1 J.v2>_sym = 0, i.e. lie normal to s2*v1.
        Eigen::Vector3d w = fr.s2 * Eigen::Vector3d(v1[0], v1[1], v1[2]);
        std::array<double, 3> axis;
        if (w.norm() < 1e-12)
            axis = v1;  // constraint void: any v2 works, span the plane normal to v1
        else
            axis = {w[0] / w.norm(), w[1] / w.norm(), w[2] / w.norm()};
        std::array<double, 3> e1, e2;
        perp_basis(axis, e1, e2);
        MatrixXcd p = v1[0] * fr.j[0] + v1[1] * fr.j[1] + v1[2] * fr.j[2];
        for (int jn = 0; jn < n_psi; ++jn) {
            double psi = kPi * jn / n_psi;
            std::array<double, 3> v2;
            for (int c = 0; c < 3; ++c) v2[c] = std::cos(psi) * e1[c] + std::sin(psi) * e2[c];
            MatrixXcd qm = v2[0] * fr.j[0] + v2[1] * fr.j[1] + v2[2] * fr.j[2];
            MatrixXcd dyad = 0.5 * (p * qm + qm * p);
            double mean = std::real(expval(rho, dyad));
            if (std::abs(mean) > 1e-10)
                fail("spin_second_order_variance: orthogonality constraint violated");
            double second = std::real(expval(rho, MatrixXcd(dyad * dyad)));
            best = std::min(best, second - mean * mean);
        }
    }
    return SqueezeReport{2, best, 0.125, best < 0.125 - 1e-12};
}

}  // namespace qtomo
