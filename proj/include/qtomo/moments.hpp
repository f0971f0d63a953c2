#pragma once

#include "qtomo/tomography.hpp"

namespace qtomo {

struct SqueezeReport {
    int q = 1;
    double value = 0.0;
    double threshold = 0.0;
    bool squeezed = false;  // value < threshold
};

// Normal-ordered moments recovered from tomogram slices alone.  The order
// k+l inversion needs the angles m*pi/(k+l+1), m = 0..k+l; a tomogram that
// lacks any of them (within 1e-9) is rejected.
cplx moment_from_tomogram_single(const Tomogram& t, int k, int l);  // <a†^k a^l>
cplx moment_from_tomogram_two(const Tomogram2& t, int k, int l, int m, int n);  // <a†^k a^l b†^m b^n>

// Union of the inversion angle sets for every order <= max_order, deduplicated.
std::vector<double> union_quorum_thetas(int max_order);

// 2q-th central moment of the theta slice.
double hong_mandel_moment(const Tomogram& t, double theta, int q);
// 2q-th central moment of eta = (X_A + X_B)/2 on the thetaA = thetaB = 0 slice.
double two_mode_quadrature_moment(const Tomogram2& t, int q);
// (2q-1)!! * vacuum_variance^q; vacuum variance is 1/2 for X_theta, 1/4 for eta.
double hong_mandel_threshold(int q, double vacuum_variance);

enum class Quadrature { z1, z2 };

// Amplitude-power squeezing D_q = (2 Var(Z) - |<F_q>|)/|<F_q>| with
// Z1 = (a^q + a†^q)/√2, Z2 = (a^q - a†^q)/(i√2) and F_q their commutator;
// squeezed iff -1 <= D_q < 0.  State routes demand negligible population in
// the top 2q Fock levels so the truncated commutator is trustworthy.
SqueezeReport hillery_dq(const PureState& psi, int q, Quadrature which = Quadrature::z1);
SqueezeReport hillery_dq(const DensityMatrix& rho, int q, Quadrature which = Quadrature::z1);
SqueezeReport hillery_dq(const Tomogram& t, int q, Quadrature which = Quadrature::z1);
// Two-mode variant, Z1 = (a^q + a†^q + b^q + b†^q)/(2√2).
SqueezeReport hillery_dq_two_mode(const PureState& psi, int q, Quadrature which = Quadrature::z1);
SqueezeReport hillery_dq_two_mode(const DensityMatrix& rho, int q, Quadrature which = Quadrature::z1);
SqueezeReport hillery_dq_two_mode(const Tomogram2& t, int q, Quadrature which = Quadrature::z1);

// Shannon entropy -∫ w ln w of one slice (natural log).  A quadrature is
// entropically squeezed when the entropy drops below (1 + ln pi)/2.
double tomographic_entropy_slice(const Tomogram& t, double theta);
double entropic_threshold();
SqueezeReport entropic_squeeze(const Tomogram& t, double theta);

// Kitagawa-Ueda squeezing for qubit registers: minimum variance of J.v over
// unit directions v normal to the mean spin; when the mean spin vanishes every
// direction qualifies and a Fibonacci lattice of n_dirs directions is scanned.
// Threshold 1/2 (the spin-coherent-state variance).
SqueezeReport spin_min_variance(const DensityMatrix& rho, int n_dirs = 800);

// Second-order extension: scan pairs (v1, v2) with <J.v1 J.v2>_sym = 0 and
// minimize the variance of (J.v1 J.v2 + J.v2 J.v1)/2.  Threshold 1/8.
SqueezeReport spin_second_order_variance(const DensityMatrix& rho, int n_v1 = 40, int n_psi = 8);

}  // namespace qtomo
