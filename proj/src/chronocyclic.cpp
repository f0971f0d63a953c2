#include "qtomo/chronocyclic.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace qtomo {

namespace {

// sum_{n=-N}^{N} e^{i n x} = sin(W x / 2) / sin(x / 2), W = 2N+1 (odd).
double dirichlet(double x, int w) {
    double r = std::remainder(x, 2.0 * kPi);
    double s = std::sin(0.5 * r);
    if (std::abs(s) < 1e-14) return (double)w;
    return std::sin(0.5 * w * r) / s;
}

struct CombDerived {
    double sum2 = 0.0;   // d_omega^2 + d_Omega^2
    double env_a = 0.0;  // envelope exponent coefficient
    double phi_c = 0.0;  // phase advance per second of separation
};

CombDerived derived(const CombParams& p) {
    CombDerived d;
    double w2 = p.d_omega * p.d_omega;
    double o2 = p.d_Omega * p.d_Omega;
    d.sum2 = w2 + o2;
    d.env_a = w2 * o2 / (2.0 * d.sum2);
    d.phi_c = p.omega_bar * o2 / (2.0 * d.sum2);
    return d;
}

// Triangle-weighted Riemann mass of the profile over the square grid,
// evaluated at a refinement of the lattice (refine=1 reproduces the grid sum).
double grid_mass(CombKind kind, const CombParams& p, const TTGrid& g, int refine) {
    double dt = g.dt() / refine;
    double span = (double)g.n_t * g.dt();
    long long half = (long long)(g.n_t - 1) * refine;
    double acc = 0.0;
    for (long long k = -half; k <= half; ++k) {
        double delta = k * dt;
        acc += (span - std::abs(delta)) * tt_profile_raw(kind, p, delta) * dt;
    }
    return acc;
}

double xlogx(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

}  // namespace

void CombParams::validate() const {
    if (omega_bar <= 0.0 || d_omega <= 0.0 || d_Omega <= 0.0)
        fail("comb frequencies must be positive");
    if (n_window < 0) fail("comb tooth window must be nonnegative");
    if (d_omega >= omega_bar) fail("comb teeth must be narrower than their spacing");
}

CombParams CombParams::experiment_values() {
    CombParams p;
    const double two_pi = 2.0 * kPi;
    p.omega_p = two_pi * 391.8856e12;
    p.omega_bar = two_pi * 19.2e9;
    p.d_omega = two_pi * 1.92e9;
    p.Omega_0 = two_pi * 10.9e12;
    p.d_Omega = two_pi * 6.0e12;
    p.n_window = (int)std::floor(p.d_Omega / p.omega_bar * std::sqrt(std::log(1e6)));
    return p;
}

void TTGrid::validate() const {
    if (n_t < 16) fail("time-time grid needs at least 16 points per axis");
    if (!(t_max > t_min)) fail("time-time grid span must be positive");
}

TTGrid TTGrid::defaults() {
    TTGrid g;
    g.t_min = 0.0;
    g.t_max = 26.0e-12;
    g.n_t = 4001;
    return g;
}

double TTProfile::at(long long i, long long j) const {
    long long n = grid.n_t;
    if (i < 0 || i >= n || j < 0 || j >= n) fail("time-time index out of range");
    return values[(size_t)(i - j + n - 1)];
}

double tt_profile_raw(CombKind kind, const CombParams& p, double delta_t) {
    CombDerived d = derived(p);
    double phi = delta_t * d.phi_c;
    double f = dirichlet(phi, p.teeth());
    double comb;
    if (kind == CombKind::alpha) {
        comb = f * f * f * f;
    } else {
        double gshift = dirichlet(phi + kPi, p.teeth());
        comb = f * f * gshift * gshift;
    }
    return std::exp(-delta_t * delta_t * d.env_a) * comb;
}

TTProfile tt_tomogram(CombKind kind, const CombParams& p, const TTGrid& g) {
    p.validate();
    g.validate();
    double mass = grid_mass(kind, p, g, 1);
    if (!(mass > 0.0)) fail("time-time tomogram has no support on the grid");
    double mass_fine = grid_mass(kind, p, g, 16);
    if (std::abs(mass - mass_fine) > 1e-3 * mass_fine)
        fail("time-time grid too coarse for the comb teeth (aliasing)");

    TTProfile out;
    out.grid = g;
    out.kind = kind;
    out.values.resize(2 * (size_t)g.n_t - 1);
    double dt = g.dt();
    // Rescale so the plain grid sum (profile times cell area, triangle
    // multiplicity) is exactly one.
    double plain = 0.0;
    long long n = g.n_t;
    for (long long k = -(n - 1); k <= n - 1; ++k)
        plain += (double)(n - std::abs(k)) * tt_profile_raw(kind, p, k * dt) * dt * dt;
    for (long long k = -(n - 1); k <= n - 1; ++k)
        out.values[(size_t)(k + n - 1)] = tt_profile_raw(kind, p, k * dt) / plain;
    return out;
}

double chrono_eps_tei(const TTProfile& w) {
    long long n = w.grid.n_t;
    if ((long long)w.values.size() != 2 * n - 1) fail("malformed time-time profile");
    double cell = w.grid.dt() * w.grid.dt();

    // Joint entropy from the separation profile: every diagonal d = i - j
    // holds n - |d| identical cells.
    double h_joint = 0.0;
    for (long long d = -(n - 1); d <= n - 1; ++d) {
        double pv = w.values[(size_t)(d + n - 1)] * cell;
        if (pv < 0.0) fail("time-time tomogram has a negative entry");
        h_joint -= (double)(n - std::llabs(d)) * xlogx(pv);
    }

    // Marginal over one axis: p_i = sum_j p(i-j), a sliding window over the
    // profile, via prefix sums.  The other marginal is its mirror image.
    std::vector<double> prefix(w.values.size() + 1, 0.0);
    for (size_t k = 0; k < w.values.size(); ++k) prefix[k + 1] = prefix[k] + w.values[k];
    double h_marg = 0.0;
    double total = 0.0;
    for (long long i = 0; i < n; ++i) {
        // d runs over i-(n-1)..i, i.e. profile indices i..i+n-1.
        double pi = (prefix[(size_t)(i + n)] - prefix[(size_t)i]) * cell;
        h_marg -= xlogx(pi);
        total += pi;
    }
    if (std::abs(total - 1.0) > 1e-9) fail("time-time tomogram lost normalization");
    return 2.0 * h_marg - h_joint;
}

namespace {

double norm_sum(const CombParams& p, bool alternating) {
    int w = p.teeth();
    // cnt(s) = sum_d tri(d) tri(s-d) with tri(x) = w - |x| on |x| <= w-1; the
    // beta variant alternates the sign of the pair difference coming from the
    // shifted comb, i.e. one factor of the convolution.
    int dmax = w - 1;
    std::vector<double> cnt(4 * dmax + 1, 0.0);
    for (int d1 = -dmax; d1 <= dmax; ++d1) {
        double t1 = (double)(w - std::abs(d1));
        if (alternating && (d1 & 1)) t1 = -t1;
        for (int d2 = -dmax; d2 <= dmax; ++d2) {
            double t2 = (double)(w - std::abs(d2));
            cnt[(size_t)(d1 + d2 + 2 * dmax)] += t1 * t2;
        }
    }
    double w2 = p.d_omega * p.d_omega;
    double o2 = p.d_Omega * p.d_Omega;
    double b = p.omega_bar * p.omega_bar * o2 / (2.0 * w2 * (w2 + o2));
    double mu0 = std::sqrt(kPi * o2 * w2 / (2.0 * (w2 + o2)));
    double acc = 0.0;
    for (int s = -2 * dmax; s <= 2 * dmax; ++s)
        acc += cnt[(size_t)(s + 2 * dmax)] * std::exp(-(double)s * (double)s * b);
    return kPi / mu0 * acc;
}

}  // namespace

double comb_norm_constant(CombKind kind, const CombParams& p) {
    p.validate();
    return norm_sum(p, kind == CombKind::beta);
}

double comb_norm_constant_brute(CombKind kind, const CombParams& p) {
    p.validate();
    int w = p.teeth();
    if (w > 9) fail("brute-force comb normalization is limited to 9 teeth");
    double w2 = p.d_omega * p.d_omega;
    double o2 = p.d_Omega * p.d_Omega;
    double b = p.omega_bar * p.omega_bar * o2 / (2.0 * w2 * (w2 + o2));
    double mu0 = std::sqrt(kPi * o2 * w2 / (2.0 * (w2 + o2)));
    int nw = p.n_window;
    double acc = 0.0;
    for (int n1 = -nw; n1 <= nw; ++n1)
        for (int n2 = -nw; n2 <= nw; ++n2)
            for (int m1 = -nw; m1 <= nw; ++m1)
                for (int m2 = -nw; m2 <= nw; ++m2) {
                    double s = (double)(n1 - n2 + m2 - m1);
                    double sign = 1.0;
                    if (kind == CombKind::beta && ((n1 + n2) & 1)) sign = -sign;
                    acc += sign * std::exp(-s * s * b);
                }
    return kPi / mu0 * acc;
}

}  // namespace qtomo
