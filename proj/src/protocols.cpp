#include "qtomo/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "qtomo/moments.hpp"

namespace qtomo {

VectorXd gaussian_smooth(const VectorXd& f, double dx, double sigma) {
    if (dx <= 0.0 || sigma <= 0.0) fail("smoothing needs positive dx and sigma");
    int radius = (int)std::ceil(4.0 * sigma / dx);
    int n = (int)f.size();
    VectorXd out(n);
    std::vector<double> kernel(2 * radius + 1);
    for (int k = -radius; k <= radius; ++k)
        kernel[(size_t)(k + radius)] = std::exp(-0.5 * (k * dx) * (k * dx) / (sigma * sigma));
    for (int i = 0; i < n; ++i) {
        double acc = 0.0, wsum = 0.0;
        int lo = std::max(0, i - radius), hi = std::min(n - 1, i + radius);
        for (int j = lo; j <= hi; ++j) {
            double w = kernel[(size_t)(j - i + radius)];
            acc += w * f(j);
            wsum += w;
        }
        out(i) = acc / wsum;
    }
    return out;
}

int count_strands(const VectorXd& profile, double dx) {
    int n = (int)profile.size();
    if (n < 5) fail("profile too short for strand counting");
    VectorXd env = gaussian_smooth(profile, dx, 0.5);
    double env_max = env.maxCoeff();
    if (!(env_max > 0.0)) fail("strand counting on an empty profile");
    int strands = 0;
    int i = 0;
    while (i < n) {
        if (env(i) < 0.05 * env_max) {
            ++i;
            continue;
        }
        int j = i;
        while (j < n && env(j) >= 0.05 * env_max) ++j;
        double region_max = profile.segment(i, j - i).maxCoeff();
        std::vector<int> peaks;
        for (int k = std::max(i, 1); k < std::min(j, n - 1); ++k)
            if (profile(k) >= profile(k - 1) && profile(k) > profile(k + 1) &&
                profile(k) >= 0.15 * region_max)
                peaks.push_back(k);
        bool fringed = false;
        for (size_t p = 0; p + 1 < peaks.size() && !fringed; ++p) {
            double dip = profile.segment(peaks[p], peaks[p + 1] - peaks[p] + 1).minCoeff();
            if (dip < 0.5 * std::min(profile(peaks[p]), profile(peaks[p + 1]))) fringed = true;
        }
        strands += fringed ? 2 : 1;
        i = j;
    }
    return strands;
}

int count_blobs(const MatrixXd& slice, double dxa, double dxb, double threshold_frac,
                double sigma) {
    int ra = (int)slice.rows(), rb = (int)slice.cols();
    if (ra < 5 || rb < 5) fail("section too small for blob counting");
    // separable smoothing: rows then columns
    MatrixXd sm(ra, rb);
    for (int c = 0; c < rb; ++c) sm.col(c) = gaussian_smooth(slice.col(c), dxa, sigma);
    for (int r = 0; r < ra; ++r)
        sm.row(r) = gaussian_smooth(sm.row(r).transpose(), dxb, sigma).transpose();
    double cutoff = threshold_frac * sm.maxCoeff();
    if (!(cutoff > 0.0)) fail("blob counting on an empty section");
    std::vector<char> seen((size_t)ra * rb, 0);
    auto idx = [rb](int r, int c) { return (size_t)r * rb + c; };
    int blobs = 0;
    std::vector<std::pair<int, int>> stack;
    for (int r = 0; r < ra; ++r)
        for (int c = 0; c < rb; ++c) {
            if (seen[idx(r, c)] || sm(r, c) < cutoff) continue;
            ++blobs;
            stack.push_back({r, c});
            seen[idx(r, c)] = 1;
            while (!stack.empty()) {
                auto [cr, cc] = stack.back();
                stack.pop_back();
                const int dr[4] = {1, -1, 0, 0}, dc[4] = {0, 0, 1, -1};
                for (int d = 0; d < 4; ++d) {
                    int nr = cr + dr[d], nc = cc + dc[d];
                    if (nr < 0 || nr >= ra || nc < 0 || nc >= rb) continue;
                    if (seen[idx(nr, nc)] || sm(nr, nc) < cutoff) continue;
                    seen[idx(nr, nc)] = 1;
                    stack.push_back({nr, nc});
                }
            }
        }
    return blobs;
}

std::vector<int> revival_gallery_divisors() { return {1, 2, 3, 4, 5, 6, 9, 12, 15}; }

Tomogram kerr_cubic_tomogram(cplx alpha, double chi1, double chi2, double t, int n_max,
                             const QuadGrid& grid) {
    PureState psi0 = make_coherent(alpha, n_max);
    PureState psi = evolve(psi0, KerrCubic{chi1, chi2}, t);
    return tomogram_pure_single(psi, grid);
}

int strand_count_at_fraction(cplx alpha, double chi1, double chi2, int ell, int n_max,
                             double x_half, int n_x) {
    if (ell < 1) fail("revival fraction must be >= 1");
    auto trev = revival_time(KerrCubic{chi1, chi2});
    if (!trev) fail("no revival time for these couplings");
    QuadGrid grid(-x_half, x_half, n_x, {0.0});
    Tomogram t = kerr_cubic_tomogram(alpha, chi1, chi2, *trev / ell, n_max, grid);
    return count_strands(t.slice(0), grid.dx());
}

MatrixXd bec_section(cplx alpha_a, cplx alpha_b, const BECWell& spec, double t, int n_max,
                     const QuadGrid& g) {
    PureState psi = bec_analytic_state(alpha_a, alpha_b, 0, 0, spec, t, n_max, n_max);
    Tomogram2 tomo = tomogram_two_mode(psi, g, g);
    return tomo.slice(0, 0);
}

PureState hq_bell(BellKind kind) {
    return kind == BellKind::psi_plus ? make_bell_psi_plus() : make_bell_phi_plus();
}

PureState djc_initial(BellKind atoms, int n_ph_dim) {
    if (n_ph_dim < 2) fail("field dimension must be at least 2");
    ModeSpace sp({n_ph_dim, n_ph_dim, 2, 2});
    VectorXcd amp = VectorXcd::Zero(sp.total_dim());
    PureState bell = hq_bell(atoms);
    for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) amp(sp.flat({0, 0, c, d})) = bell.amp_at({c, d});
    return PureState(sp, amp);
}

PureState dtc_initial(BellKind pair1, BellKind pair2, int n_ph_dim) {
    if (n_ph_dim < 2) fail("field dimension must be at least 2");
    ModeSpace sp({n_ph_dim, n_ph_dim, 2, 2, 2, 2});
    VectorXcd amp = VectorXcd::Zero(sp.total_dim());
    PureState b1 = hq_bell(pair1), b2 = hq_bell(pair2);
    // pairs are (C1, D1) and (C2, D2) across the two arms
    for (int c1 = 0; c1 < 2; ++c1)
        for (int c2 = 0; c2 < 2; ++c2)
            for (int d1 = 0; d1 < 2; ++d1)
                for (int d2 = 0; d2 < 2; ++d2)
                    amp(sp.flat({0, 0, c1, c2, d1, d2})) =
                        b1.amp_at({c1, d1}) * b2.amp_at({c2, d2});
    return PureState(sp, amp);
}

namespace {

// field-pair and atom-pair indicator points for one instant of an A,B + atoms state
void hq_point(const PureState& psi, const std::vector<int>& atom_subs, double x_half, int n_x,
              int xi_pairs, double g0t, HQPoint& field_out, HQPoint& atom_out) {
    DensityMatrix rho_f = partial_trace(psi, {0, 1});
    QuadGrid grid(-x_half, x_half, n_x, xi_angle_grid(xi_pairs));
    Tomogram2 tomo = tomogram_two_mode(rho_f, grid, grid);
    field_out.g0t = g0t;
    field_out.xi_tei = xi_average(tomo, SliceKind::tei);
    field_out.xi_tei_prime = xi_prime_tei(tomo);
    field_out.xi_qmi = qmi(rho_f, {0});

    DensityMatrix rho_a = partial_trace(psi, atom_subs);
    SpinTomogram st = spin_tomogram_xyz(rho_a);
    std::vector<int> part_a;
    for (int q = 0; q < (int)atom_subs.size() / 2; ++q) part_a.push_back(q);
    atom_out.g0t = g0t;
    atom_out.xi_tei = spin_xi_tei(st, part_a, std::exp(1.0));
    atom_out.xi_tei_prime = atom_out.xi_tei;  // no above-threshold variant for spin sets
    atom_out.xi_qmi = qmi(rho_a, part_a);
}

}  // namespace

HQSeries djc_series(const DoubleJC& spec, BellKind atoms, int n_instants, double step_pi_units,
                    int xi_pairs, int n_ph_dim) {
    if (n_instants < 1) fail("series needs at least one instant");
    if (spec.g0 == 0.0) fail("series time step is scaled by g0; g0 must be nonzero");
    ModeSpace sp({n_ph_dim, n_ph_dim, 2, 2});
    Propagator prop(spec, sp);
    PureState psi0 = djc_initial(atoms, n_ph_dim);
    HQSeries out;
    double x_half = std::max(6.0, 2.0 * std::sqrt((double)n_ph_dim));
    for (int k = 0; k < n_instants; ++k) {
        double g0t = k * step_pi_units * kPi;
        PureState psi = prop.at(psi0, g0t / spec.g0);
        HQPoint f, a;
        hq_point(psi, {2, 3}, x_half, 201, xi_pairs, g0t, f, a);
        out.field.push_back(f);
        out.atom.push_back(a);
    }
    return out;
}

HQSeries dtc_series(const DoubleTC& spec, BellKind pair1, BellKind pair2, int n_instants,
                    double step_pi_units, int xi_pairs, int n_ph_dim) {
    if (n_instants < 1) fail("series needs at least one instant");
    if (spec.g0 == 0.0) fail("series time step is scaled by g0; g0 must be nonzero");
    ModeSpace sp({n_ph_dim, n_ph_dim, 2, 2, 2, 2});
    Propagator prop(spec, sp);
    PureState psi0 = dtc_initial(pair1, pair2, n_ph_dim);
    HQSeries out;
    double x_half = std::max(6.0, 2.0 * std::sqrt((double)n_ph_dim));
    for (int k = 0; k < n_instants; ++k) {
        double g0t = k * step_pi_units * kPi;
        PureState psi = prop.at(psi0, g0t / spec.g0);
        HQPoint f, a;
        hq_point(psi, {2, 3, 4, 5}, x_half, 201, xi_pairs, g0t, f, a);
        out.field.push_back(f);
        out.atom.push_back(a);
    }
    return out;
}

std::vector<NMRPoint> nmr_series(double chi_st_max, int n_points) {
    if (n_points < 2) fail("series needs at least two points");
    std::vector<NMRPoint> out;
    for (int k = 0; k < n_points; ++k) {
        double ct = chi_st_max * k / (n_points - 1);
        DensityMatrix rho = nmr_rho_t(1.0, ct);
        DensityMatrix rho_ab = partial_trace(rho, {1, 2});
        NMRPoint p;
        p.chi_st = ct;
        p.var1 = spin_min_variance(rho_ab).value;
        p.var2 = spin_second_order_variance(rho_ab).value;
        p.neg = negativity(rho_ab, {0});
        p.xi_tei = spin_xi_tei(spin_tomogram_xyz(rho_ab), {0}, std::exp(1.0));
        p.xi_qmi = qmi(rho_ab, {0});
        out.push_back(p);
    }
    return out;
}

IndicatorRow indicator_row_for_pure(const PureState& psi, const QuadGrid& grid, double axis) {
    Tomogram2 tomo = tomogram_two_mode(psi, grid, grid);
    IndicatorRow row;
    row.axis = axis;
    row.xi_tei = xi_average(tomo, SliceKind::tei);
    row.xi_tei_prime = xi_prime_tei(tomo);
    row.xi_ipr = xi_average(tomo, SliceKind::ipr);
    row.xi_pcc = xi_average(tomo, SliceKind::pcc);
    row.xi_bd = xi_average(tomo, SliceKind::bd);
    DensityMatrix rho = to_density(psi);
    row.xi_svne = xi_svne(rho, {0});
    row.xi_sle = xi_sle(rho, {0});
    row.xi_qmi = qmi(rho, {0});
    row.negativity = negativity(rho, {0});
    row.finalize();
    return row;
}

IndicatorSeries bec_indicator_sweep(const BECWell& base, int N_sector, int k_state,
                                    const std::vector<double>& omega1_values, int xi_pairs,
                                    double x_half, int n_x) {
    if (omega1_values.empty()) fail("sweep needs at least one parameter value");
    IndicatorSeries series;
    series.axis_name = "omega1";
    QuadGrid grid(-x_half, x_half, n_x, xi_angle_grid(xi_pairs));
    for (double w1 : omega1_values) {
        BECWell spec = base;
        spec.omega1 = w1;
        PureState psi = bec_sector_state(spec, N_sector, k_state);
        series.rows.push_back(indicator_row_for_pure(psi, grid, w1));
    }
    return series;
}

}  // namespace qtomo
