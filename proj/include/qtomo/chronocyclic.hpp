#pragma once

#include <vector>

#include "qtomo/fock.hpp"

namespace qtomo {

// Two-photon frequency-comb parameters, all angular frequencies in rad/s.
// The comb teeth are indexed n = -n_window..n_window.
struct CombParams {
    double omega_p = 0.0;    // pump
    double omega_bar = 0.0;  // cavity tooth spacing
    double d_omega = 0.0;    // tooth width
    double Omega_0 = 0.0;    // signal-idler detuning center
    double d_Omega = 0.0;    // detuning envelope width
    int n_window = 0;

    int teeth() const { return 2 * n_window + 1; }
    void validate() const;

    // Experimental values (given as frequency/2pi): pump 391.8856 THz, tooth
    // spacing 19.2 GHz, tooth width 1.92 GHz, detuning center 10.9 THz,
    // envelope width 6 THz.  The window keeps every tooth whose envelope
    // weight is at least 1e-6 of the peak.
    static CombParams experiment_values();
};

// Uniform time-time grid (seconds per axis).
struct TTGrid {
    double t_min = 0.0;
    double t_max = 0.0;
    int n_t = 0;

    double dt() const { return (t_max - t_min) / (n_t - 1); }
    void validate() const;

    static TTGrid defaults();  // spans the central correlation structure of the comb
};

enum class CombKind { alpha, beta };

// Time-time slice of the comb tomogram.  The density depends on t_S - t_I
// only, so the full n_t x n_t table is stored as one profile of length
// 2 n_t - 1, normalized so the grid Riemann mass is exactly 1.
struct TTProfile {
    TTGrid grid;
    CombKind kind = CombKind::alpha;
    std::vector<double> values;  // index (i - j) + n_t - 1

    double at(long long i, long long j) const;
};

// Unnormalized slice value at separation delta_t: Gaussian envelope times the
// fourth power of the comb kernel (alpha) or the product form (beta).
double tt_profile_raw(CombKind kind, const CombParams& p, double delta_t);

// Build the normalized profile; rejects grids too coarse to resolve the comb
// teeth (checked against a 16x refined quadrature).
TTProfile tt_tomogram(CombKind kind, const CombParams& p, const TTGrid& g);

// Discrete mutual information (bits) between the two time axes.
double chrono_eps_tei(const TTProfile& w);

// Closed-form normalization constant of the time-time state (per unit
// reference time), reduced to a single sum over s = n - n' + m' - m.
double comb_norm_constant(CombKind kind, const CombParams& p);
// Literal four-index sum, usable only for small tooth windows.
double comb_norm_constant_brute(CombKind kind, const CombParams& p);

}  // namespace qtomo
