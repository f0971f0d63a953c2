#include "qtomo/fock.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace qtomo {

void fail(const std::string& msg) { throw std::runtime_error(msg); }

double log_factorial(int n) {
    if (n < 0) fail("log_factorial: negative argument");
    return std::lgamma(static_cast<double>(n) + 1.0);
}

double log_binomial(int n, int k) {
    if (k < 0 || k > n) fail("log_binomial: out of range");
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

double binomial_coeff(int n, int k) { return std::exp(log_binomial(n, k)); }

double laguerre_neg(int m, double r) {
    if (m < 0 || r < 0) fail("laguerre_neg: bad arguments");
    double acc = 1.0;  // k = 0 term of sum_k C(m,k) r^k / k!
    for (int k = 1; k <= m && r > 0.0; ++k)
        acc += std::exp(log_binomial(m, k) + k * std::log(r) - log_factorial(k));
    return acc;
}

ModeSpace::ModeSpace(std::vector<int> d) : dims(std::move(d)) {
    if (dims.empty()) fail("ModeSpace: no subsystems");
    for (int di : dims)
        if (di < 2) fail("ModeSpace: every subsystem dimension must be >= 2");
}

long long ModeSpace::total_dim() const {
    long long t = 1;
    for (int d : dims) t *= d;
    return t;
}

std::vector<long long> ModeSpace::strides() const {
    std::vector<long long> s(dims.size(), 1);
    for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i) s[i] = s[i + 1] * dims[i + 1];
    return s;
}

long long ModeSpace::flat(const std::vector<int>& idx) const {
    if (idx.size() != dims.size()) fail("ModeSpace::flat: index rank mismatch");
    long long f = 0;
    for (size_t i = 0; i < dims.size(); ++i) {
        if (idx[i] < 0 || idx[i] >= dims[i]) fail("ModeSpace::flat: index out of range");
        f = f * dims[i] + idx[i];
    }
    return f;
}

std::vector<int> ModeSpace::unflat(long long f) const {
    std::vector<int> idx(dims.size());
    for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
        idx[i] = static_cast<int>(f % dims[i]);
        f /= dims[i];
    }
    return idx;
}

PureState::PureState(ModeSpace space, VectorXcd amp) : space_(std::move(space)), amp_(std::move(amp)) {
    if (amp_.size() != space_.total_dim()) fail("PureState: amplitude length != space dimension");
    if (std::abs(amp_.norm() - 1.0) > 1e-10) fail("PureState: norm deviates from 1 beyond 1e-10");
}

PureState PureState::normalized(ModeSpace space, VectorXcd amp) {
    double n = amp.norm();
    if (n <= 0.0) fail("PureState::normalized: zero vector");
    return PureState(std::move(space), amp / n);
}

DensityMatrix::DensityMatrix(ModeSpace space, MatrixXcd mat, long long entry_cap)
    : space_(std::move(space)), mat_(std::move(mat)) {
    long long d = space_.total_dim();
    if (mat_.rows() != d || mat_.cols() != d) fail("DensityMatrix: shape mismatch with space");
    if (d * d > entry_cap) fail("DensityMatrix: entry count exceeds cap; raise entry_cap if intended");
    double herm = (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-10) fail("DensityMatrix: not hermitian within 1e-10");
    // 1e-8 absorbs the trace drift of a state reloaded from its 9-digit export
    if (std::abs(mat_.trace().real() - 1.0) > 1e-8 || std::abs(mat_.trace().imag()) > 1e-8)
        fail("DensityMatrix: trace deviates from 1 beyond 1e-8");
    for (long long i = 0; i < d; ++i)
        if (mat_(i, i).real() < -1e-9) fail("DensityMatrix: negative diagonal entry beyond -1e-9");
}

PureState make_fock(int n, int n_max) {
    if (n < 0 || n > n_max) fail("make_fock: level outside truncation");
    VectorXcd amp = VectorXcd::Zero(n_max + 1);
    amp(n) = 1.0;
    return PureState(ModeSpace({n_max + 1}), std::move(amp));
}

PureState make_coherent(cplx alpha, int n_max) {
    if (n_max < 1) fail("make_coherent: n_max must be >= 1");
    double r = std::norm(alpha);
    if (r == 0.0) return make_fock(0, n_max);
    if (r > 0.5 * n_max)
        std::fprintf(stderr, "make_coherent: |alpha|^2=%g exceeds n_max/2=%g; truncation error may be non-negligible\n",
                     r, 0.5 * n_max);
    double ph = std::arg(alpha);
    VectorXcd amp(n_max + 1);
    double mass = 0.0;
    for (int p = 0; p <= n_max; ++p) {
        double lm = -0.5 * r + 0.5 * (p * std::log(r) - log_factorial(p));
        amp(p) = std::polar(std::exp(lm), p * ph);
        mass += std::exp(2.0 * lm);
    }
    if (1.0 - mass > 1e-6)
        fail("make_coherent: truncation at n_max=" + std::to_string(n_max) + " loses tail mass " +
             std::to_string(1.0 - mass) + " > 1e-6; raise n_max");
    amp /= std::sqrt(mass);
    return PureState(ModeSpace({n_max + 1}), std::move(amp));
}

PureState make_pacs(cplx alpha, int m, int n_max) {
    if (m < 0) fail("make_pacs: negative photon addition");
    if (m == 0) return make_coherent(alpha, n_max);
    if (n_max < m) fail("make_pacs: n_max below added photon number");
    double r = std::norm(alpha);
    double ph = std::arg(alpha);
    double lnorm2 = log_factorial(m) + std::log(laguerre_neg(m, r));
    VectorXcd amp = VectorXcd::Zero(n_max + 1);
    double mass = 0.0;
    for (int p = 0; p + m <= n_max; ++p) {
        if (r == 0.0 && p > 0) break;
        double lm = -0.5 * r + 0.5 * (p * (r > 0 ? std::log(r) : 0.0)) + 0.5 * log_factorial(p + m) -
                    log_factorial(p) - 0.5 * lnorm2;
        amp(p + m) = std::polar(std::exp(lm), p * ph);
        mass += std::exp(2.0 * lm);
    }
    if (1.0 - mass > 1e-6)
        fail("make_pacs: truncation at n_max=" + std::to_string(n_max) + " loses tail mass " +
             std::to_string(1.0 - mass) + " > 1e-6; raise n_max");
    amp /= std::sqrt(mass);
    return PureState(ModeSpace({n_max + 1}), std::move(amp));
}

PureState make_binomial(int N) {
    if (N < 1) fail("make_binomial: N must be >= 1");
    ModeSpace sp({N + 1, N + 1});
    VectorXcd amp = VectorXcd::Zero(sp.total_dim());
    for (int n = 0; n <= N; ++n)
        amp(sp.flat({N - n, n})) = std::exp(0.5 * log_binomial(N, n) - 0.5 * N * std::log(2.0));
    return PureState(std::move(sp), std::move(amp));
}

PureState make_two_mode_squeezed(cplx zeta, int n_max) {
    double s = std::abs(zeta);
    ModeSpace sp({n_max + 1, n_max + 1});
    VectorXcd amp = VectorXcd::Zero(sp.total_dim());
    if (s == 0.0) {
        amp(0) = 1.0;
        return PureState(std::move(sp), std::move(amp));
    }
    double t = std::tanh(s);
    double tail = std::pow(t, 2.0 * (n_max + 1));  // exact lost mass of the geometric series
    if (tail > 1e-8)
        fail("make_two_mode_squeezed: truncation at n_max=" + std::to_string(n_max) +
             " loses tail mass " + std::to_string(tail) + " > 1e-8; raise n_max");
    cplx q = -std::polar(t, std::arg(zeta));
    cplx c = 1.0 / std::cosh(s);
    double mass = 0.0;
    for (int n = 0; n <= n_max; ++n) {
        amp(sp.flat({n, n})) = c;
        mass += std::norm(c);
        c *= q;
    }
    amp /= std::sqrt(mass);
    return PureState(std::move(sp), std::move(amp));
}

PureState make_bell_psi_plus() {
    VectorXcd amp = VectorXcd::Zero(4);
    amp(0) = amp(3) = 1.0 / std::sqrt(2.0);  // |ee> + |gg>
    return PureState(ModeSpace({2, 2}), std::move(amp));
}

PureState make_bell_phi_plus() {
    VectorXcd amp = VectorXcd::Zero(4);
    amp(1) = amp(2) = 1.0 / std::sqrt(2.0);  // |eg> + |ge>
    return PureState(ModeSpace({2, 2}), std::move(amp));
}

PureState make_spin_coherent(double theta, double phi, int n_qubits) {
    if (n_qubits < 1) fail("make_spin_coherent: need at least one qubit");
    Eigen::Vector2cd one;
    one << std::polar(std::sin(theta), phi), std::cos(theta);  // {up, down}
    VectorXcd amp = one;
    for (int q = 1; q < n_qubits; ++q) {
        VectorXcd next(amp.size() * 2);
        for (long long i = 0; i < amp.size(); ++i) {
            next(2 * i) = amp(i) * one(0);
            next(2 * i + 1) = amp(i) * one(1);
        }
        amp.swap(next);
    }
    return PureState::normalized(ModeSpace(std::vector<int>(n_qubits, 2)), std::move(amp));
}

PureState tensor(const PureState& a, const PureState& b) {
    std::vector<int> dims = a.space().dims;
    dims.insert(dims.end(), b.space().dims.begin(), b.space().dims.end());
    long long da = a.amp().size(), db = b.amp().size();
    VectorXcd amp(da * db);
    for (long long i = 0; i < da; ++i) amp.segment(i * db, db) = a.amp()(i) * b.amp();
    return PureState(ModeSpace(std::move(dims)), std::move(amp));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
    std::vector<int> dims = a.space().dims;
    dims.insert(dims.end(), b.space().dims.begin(), b.space().dims.end());
    return DensityMatrix(ModeSpace(std::move(dims)), kron(a.mat(), b.mat()));
}

DensityMatrix to_density(const PureState& psi, long long entry_cap) {
    return DensityMatrix(psi.space(), psi.amp() * psi.amp().adjoint(), entry_cap);
}

namespace {

struct TraceLayout {
    ModeSpace keep_space;
    std::vector<long long> keep_base;  // flat offset for each kept multi-index
    std::vector<long long> tr_off;     // flat offset for each traced multi-index
};

TraceLayout trace_layout(const ModeSpace& space, const std::vector<int>& keep) {
    if (keep.empty()) fail("partial_trace: keep set is empty");
    for (size_t i = 1; i < keep.size(); ++i)
        if (keep[i] <= keep[i - 1]) fail("partial_trace: keep indices must be strictly ascending");
    for (int s : keep)
        if (s < 0 || s >= space.n_subsystems()) fail("partial_trace: keep index out of range");

    std::vector<long long> strides = space.strides();
    std::vector<int> tr;
    for (int s = 0; s < space.n_subsystems(); ++s)
        if (!std::binary_search(keep.begin(), keep.end(), s)) tr.push_back(s);

    TraceLayout lay;
    std::vector<int> kd;
    for (int s : keep) kd.push_back(space.dims[s]);
    lay.keep_space = ModeSpace(kd);

    long long dk = 1;
    for (int s : keep) dk *= space.dims[s];
    lay.keep_base.assign(dk, 0);
    for (long long a = 0; a < dk; ++a) {
        long long rem = a, off = 0;
        for (int i = static_cast<int>(keep.size()) - 1; i >= 0; --i) {
            off += (rem % space.dims[keep[i]]) * strides[keep[i]];
            rem /= space.dims[keep[i]];
        }
        lay.keep_base[a] = off;
    }
    long long dt = 1;
    for (int s : tr) dt *= space.dims[s];
    lay.tr_off.assign(dt, 0);
    for (long long t = 0; t < dt; ++t) {
        long long rem = t, off = 0;
        for (int i = static_cast<int>(tr.size()) - 1; i >= 0; --i) {
            off += (rem % space.dims[tr[i]]) * strides[tr[i]];
            rem /= space.dims[tr[i]];
        }
        lay.tr_off[t] = off;
    }
    return lay;
}

}  // namespace

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
    TraceLayout lay = trace_layout(rho.space(), keep);
    long long dk = lay.keep_space.total_dim();
    MatrixXcd out = MatrixXcd::Zero(dk, dk);
    for (long long a = 0; a < dk; ++a)
        for (long long b = 0; b < dk; ++b) {
            cplx acc = 0.0;
            for (long long off : lay.tr_off) acc += rho.mat()(lay.keep_base[a] + off, lay.keep_base[b] + off);
            out(a, b) = acc;
        }
    return DensityMatrix(lay.keep_space, std::move(out));
}

DensityMatrix partial_trace(const PureState& psi, const std::vector<int>& keep) {
    TraceLayout lay = trace_layout(psi.space(), keep);
    long long dk = lay.keep_space.total_dim();
    MatrixXcd out = MatrixXcd::Zero(dk, dk);
    for (long long a = 0; a < dk; ++a)
        for (long long b = 0; b <= a; ++b) {
            cplx acc = 0.0;
            for (long long off : lay.tr_off)
                acc += psi.amp()(lay.keep_base[a] + off) * std::conj(psi.amp()(lay.keep_base[b] + off));
            out(a, b) = acc;
            out(b, a) = std::conj(acc);
        }
    return DensityMatrix(lay.keep_space, std::move(out));
}

DensityMatrix partial_transpose(const DensityMatrix& rho, const std::vector<int>& part_a) {
    const ModeSpace& sp = rho.space();
    for (int s : part_a)
        if (s < 0 || s >= sp.n_subsystems()) fail("partial_transpose: subsystem out of range");
    std::vector<bool> in_a(sp.n_subsystems(), false);
    for (int s : part_a) in_a[s] = true;
    long long d = sp.total_dim();
    MatrixXcd out(d, d);
    for (long long i = 0; i < d; ++i) {
        std::vector<int> ii = sp.unflat(i);
        for (long long j = 0; j < d; ++j) {
            std::vector<int> jj = sp.unflat(j);
            std::vector<int> ri = ii, rj = jj;
            for (int s = 0; s < sp.n_subsystems(); ++s)
                if (in_a[s]) std::swap(ri[s], rj[s]);
            out(sp.flat(ri), sp.flat(rj)) = rho.mat()(i, j);
        }
    }
    return DensityMatrix(sp, std::move(out));
}

double purity(const DensityMatrix& rho) { return rho.mat().squaredNorm(); }

double fidelity(const PureState& a, const PureState& b) {
    if (!(a.space() == b.space())) fail("fidelity: space mismatch");
    return std::norm(a.amp().dot(b.amp()));
}

double fidelity(const DensityMatrix& rho, const PureState& b) {
    if (!(rho.space() == b.space())) fail("fidelity: space mismatch");
    return std::max(0.0, (b.amp().adjoint() * rho.mat() * b.amp())(0).real());
}

namespace {
VectorXd clamped_spectrum(const MatrixXcd& m) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    VectorXd ev = es.eigenvalues();
    for (long long i = 0; i < ev.size(); ++i) {
        if (ev(i) < -1e-9) fail("spectrum: eigenvalue below -1e-9; matrix is not a valid state");
        if (ev(i) < 0) ev(i) = 0.0;
    }
    return ev;
}
}  // namespace

double svne(const DensityMatrix& rho, double log_base) {
    VectorXd ev = clamped_spectrum(rho.mat());
    double s = 0.0;
    for (long long i = 0; i < ev.size(); ++i)
        if (ev(i) > 0) s -= ev(i) * std::log(ev(i));
    return s / std::log(log_base);
}

double sle(const DensityMatrix& rho) { return 1.0 - purity(rho); }

double qmi(const DensityMatrix& rho, const std::vector<int>& part_a, double log_base) {
    std::vector<int> part_b;
    std::vector<bool> in_a(rho.space().n_subsystems(), false);
    for (int s : part_a) in_a[s] = true;
    for (int s = 0; s < rho.space().n_subsystems(); ++s)
        if (!in_a[s]) part_b.push_back(s);
    if (part_b.empty() || part_a.empty()) fail("qmi: bipartition must be proper");
    return svne(partial_trace(rho, part_a), log_base) + svne(partial_trace(rho, part_b), log_base) -
           svne(rho, log_base);
}

double negativity(const DensityMatrix& rho, const std::vector<int>& part_a) {
    DensityMatrix pt = partial_transpose(rho, part_a);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(pt.mat(), Eigen::EigenvaluesOnly);
    double acc = 0.0;
    for (long long i = 0; i < es.eigenvalues().size(); ++i) {
        double l = es.eigenvalues()(i);
        acc += std::abs(l) - l;
    }
    return 0.5 * acc;
}

MatrixXcd annihilation(int dim) {
    MatrixXcd a = MatrixXcd::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

MatrixXcd number_op(int dim) {
    MatrixXcd n = MatrixXcd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) n(i, i) = i;
    return n;
}

MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
    MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (long long i = 0; i < a.rows(); ++i)
        for (long long j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

MatrixXcd embed(const ModeSpace& space, int sub, const MatrixXcd& op) {
    if (sub < 0 || sub >= space.n_subsystems()) fail("embed: subsystem out of range");
    if (op.rows() != space.dims[sub] || op.cols() != space.dims[sub]) fail("embed: operator shape mismatch");
    MatrixXcd out = MatrixXcd::Identity(1, 1);
    for (int s = 0; s < space.n_subsystems(); ++s) {
        if (s == sub)
            out = kron(out, op);
        else
            out = kron(out, MatrixXcd::Identity(space.dims[s], space.dims[s]));
    }
    return out;
}

cplx expval(const PureState& psi, const MatrixXcd& op) { return psi.amp().dot(op * psi.amp()); }

cplx expval(const DensityMatrix& rho, const MatrixXcd& op) { return (rho.mat() * op).trace(); }

MatrixXcd sigma_half_x() {
    MatrixXcd m(2, 2);
    m << 0.0, 0.5, 0.5, 0.0;
    return m;
}

MatrixXcd sigma_half_y() {
    MatrixXcd m(2, 2);
    m << 0.0, cplx(0, -0.5), cplx(0, 0.5), 0.0;
    return m;
}

MatrixXcd sigma_half_z() {
    MatrixXcd m(2, 2);
    m << 0.5, 0.0, 0.0, -0.5;
    return m;
}

MatrixXcd sigma_plus() {
    MatrixXcd m = MatrixXcd::Zero(2, 2);
    m(0, 1) = 1.0;
    return m;
}

MatrixXcd sigma_minus() {
    MatrixXcd m = MatrixXcd::Zero(2, 2);
    m(1, 0) = 1.0;
    return m;
}

}  // namespace qtomo
