#pragma once

#include <string>
#include <vector>

#include "qtomo/dynamics.hpp"
#include "qtomo/indicators.hpp"
#include "qtomo/tomography.hpp"

namespace qtomo {

// Truncated Gaussian smoothing (sigma in x units) with edge renormalization.
VectorXd gaussian_smooth(const VectorXd& f, double dx, double sigma);

// Count wave-packet strands in a quadrature profile.  Envelope regions come
// from the smoothed profile (5% floor); a region counts twice when the raw
// profile inside it carries interference fringes (>= 2 peaks above 15% of the
// region maximum separated by a dip under half the smaller peak), the
// signature of two packets sharing the same quadrature projection with
// opposite momenta.
int count_strands(const VectorXd& profile, double dx);

// Count connected regions above threshold_frac * max in a smoothed 2D section.
int count_blobs(const MatrixXd& slice, double dxa, double dxb, double threshold_frac = 0.2,
                double sigma = 0.5);

// Canonical fractional-revival gallery for the cubic-oscillator scenario.
std::vector<int> revival_gallery_divisors();  // {1,2,3,4,5,6,9,12,15}

Tomogram kerr_cubic_tomogram(cplx alpha, double chi1, double chi2, double t, int n_max,
                             const QuadGrid& grid);
// Strand count of the theta = 0 profile at t = T_rev / ell.
int strand_count_at_fraction(cplx alpha, double chi1, double chi2, int ell, int n_max,
                             double x_half, int n_x);

// theta_a = theta_b = 0 section of the evolved two-well product coherent state.
MatrixXd bec_section(cplx alpha_a, cplx alpha_b, const BECWell& spec, double t, int n_max,
                     const QuadGrid& g);

// ---- hybrid field-atom models ----
enum class BellKind { psi_plus, phi_plus };

PureState hq_bell(BellKind kind);
// Fields A, B in vacuum; atoms C, D in the Bell state.  dims (n_ph, n_ph, 2, 2).
PureState djc_initial(BellKind atoms, int n_ph_dim);
// Pairs (C1, D1) and (C2, D2) each in a Bell state; dims (n_ph, n_ph, 2, 2, 2, 2).
PureState dtc_initial(BellKind pair1, BellKind pair2, int n_ph_dim);

struct HQPoint {
    double g0t = 0.0;
    double xi_tei = 0.0;        // tomogram mutual-information average
    double xi_tei_prime = 0.0;  // above-threshold average
    double xi_qmi = 0.0;        // quantum mutual information (bits)
};
struct HQSeries {
    std::vector<HQPoint> field;  // optical tomograms, entropies in bits
    std::vector<HQPoint> atom;   // spin tomograms, mutual information in nats
};

// Indicator dynamics on the grid of instants k * step_pi_units * pi/g0.
HQSeries djc_series(const DoubleJC& spec, BellKind atoms, int n_instants, double step_pi_units,
                    int xi_pairs, int n_ph_dim);
HQSeries dtc_series(const DoubleTC& spec, BellKind pair1, BellKind pair2, int n_instants,
                    double step_pi_units, int xi_pairs, int n_ph_dim);

// ---- spin-chain squeezing / entanglement dynamics ----
struct NMRPoint {
    double chi_st = 0.0;
    double var1 = 0.0;  // min variance of J.n over directions normal to the mean spin
    double var2 = 0.0;  // min variance of the symmetrized second-order dyad
    double neg = 0.0;
    double xi_tei = 0.0;  // spin tomogram mutual information (nats)
    double xi_qmi = 0.0;  // bits

    double sq1() const { return 1.0 - 2.0 * var1; }
    double sq2() const { return 1.0 - 8.0 * var2; }
};
std::vector<NMRPoint> nmr_series(double chi_st_max, int n_points);

// ---- two-well eigenstate sweep ----
// Full indicator row (tomographic + reference measures, mode 0 vs mode 1) for a
// two-mode pure state; the grid carries the averaging angles for both quadratures.
IndicatorRow indicator_row_for_pure(const PureState& psi, const QuadGrid& grid, double axis);

// Indicator row per omega1 value for the k-th eigenstate of the N-boson sector.
IndicatorSeries bec_indicator_sweep(const BECWell& base, int N_sector, int k_state,
                                    const std::vector<double>& omega1_values, int xi_pairs,
                                    double x_half, int n_x);

}  // namespace qtomo
