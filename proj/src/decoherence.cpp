#include "qtomo/decoherence.hpp"

#include <cmath>

namespace qtomo {

double DampingParams::gt() const {
    if (rate < 0 || tau < 0) fail("DampingParams: rate and tau must be nonnegative");
    return rate * tau;
}

namespace {

double ipow(double x, int r) {  // x^r with 0^0 = 1
    double acc = 1.0;
    for (int i = 0; i < r; ++i) acc *= x;
    return acc;
}

// flat offsets of all indices whose component along `sub` is zero
std::vector<long long> other_offsets(const ModeSpace& sp, int sub) {
    long long stride = sp.strides()[sub];
    int d = sp.dims[sub];
    std::vector<long long> off;
    off.reserve(sp.total_dim() / d);
    for (long long f = 0; f < sp.total_dim(); ++f)
        if ((f / stride) % d == 0) off.push_back(f);
    return off;
}

}  // namespace

DensityMatrix amplitude_damp_mode(const DensityMatrix& rho, int sub, double gamma_tau) {
    const ModeSpace& sp = rho.space();
    if (sub < 0 || sub >= sp.n_subsystems()) fail("amplitude_damp_mode: subsystem out of range");
    if (gamma_tau < 0) fail("amplitude_damp_mode: negative Gamma*tau");
    int d = sp.dims[sub];
    long long s = sp.strides()[sub];
    double E = std::exp(-gamma_tau);
    double x = 1.0 - E * E;
    std::vector<long long> off = other_offsets(sp, sub);

    MatrixXcd out = MatrixXcd::Zero(rho.mat().rows(), rho.mat().cols());
    for (int n = 0; n < d; ++n)
        for (int np = 0; np < d; ++np) {
            int r_max = std::min(d - 1 - n, d - 1 - np);
            double lead = ipow(E, n + np);
            if (lead == 0.0 && n + np > 0) continue;
            for (long long oi : off)
                for (long long oj : off) {
                    cplx acc = 0.0;
                    for (int r = 0; r <= r_max; ++r) {
                        double c = std::exp(0.5 * (log_binomial(n + r, r) + log_binomial(np + r, r)));
                        acc += c * ipow(x, r) * rho.mat()(oi + (n + r) * s, oj + (np + r) * s);
                    }
                    out(oi + n * s, oj + np * s) = lead * acc;
                }
        }
    return DensityMatrix(sp, std::move(out));
}

DensityMatrix phase_damp_mode(const DensityMatrix& rho, int sub, double gamma_tau) {
    const ModeSpace& sp = rho.space();
    if (sub < 0 || sub >= sp.n_subsystems()) fail("phase_damp_mode: subsystem out of range");
    if (gamma_tau < 0) fail("phase_damp_mode: negative Gamma_p*tau");
    int d = sp.dims[sub];
    long long s = sp.strides()[sub];
    MatrixXcd out = rho.mat();
    for (long long i = 0; i < out.rows(); ++i) {
        int ni = static_cast<int>((i / s) % d);
        for (long long j = 0; j < out.cols(); ++j) {
            int nj = static_cast<int>((j / s) % d);
            out(i, j) *= std::exp(-gamma_tau * double(ni - nj) * double(ni - nj));
        }
    }
    return DensityMatrix(sp, std::move(out));
}

DensityMatrix amplitude_damp_single(const DensityMatrix& rho, const DampingParams& p) {
    if (p.kind != DampingParams::Kind::amplitude) fail("amplitude_damp_single: wrong channel kind");
    if (rho.space().n_subsystems() != 1) fail("amplitude_damp_single: expected a single mode");
    return amplitude_damp_mode(rho, 0, p.gt());
}

DensityMatrix phase_damp_single(const DensityMatrix& rho, const DampingParams& p) {
    if (p.kind != DampingParams::Kind::phase) fail("phase_damp_single: wrong channel kind");
    if (rho.space().n_subsystems() != 1) fail("phase_damp_single: expected a single mode");
    return phase_damp_mode(rho, 0, p.gt());
}

DensityMatrix damp_bipartite_modeA(const DensityMatrix& rho, const DampingParams& p) {
    if (rho.space().n_subsystems() != 2) fail("damp_bipartite_modeA: expected a two-mode state");
    if (p.kind == DampingParams::Kind::amplitude) return amplitude_damp_mode(rho, 0, p.gt());
    return phase_damp_mode(rho, 0, p.gt());
}

}  // namespace qtomo
