#pragma once

#include <optional>
#include <variant>

#include "qtomo/fock.hpp"

namespace qtomo {

// Model Hamiltonians, hbar = 1, all rates in rad/time.
struct KerrCubic {
    double chi1 = 0.0, chi2 = 0.0;  // chi1 a^+2 a^2 + chi2 a^+3 a^3
};
struct BECWell {
    double omega0 = 0.0, omega1 = 0.0, U = 0.0, lambda = 0.0;
    // omega0 N + omega1 (a^+a - b^+b) + U N^2 - lambda (a^+b + ab^+), U > 0
    double lambda1() const;  // sqrt(omega1^2 + lambda^2)
};
struct AtomField {
    double omega_f = 0.0, omega_a = 0.0, gamma = 0.0, g = 0.0;
    // omega_f a^+a + omega_a b^+b + gamma b^+2 b^2 + g (a^+b + ab^+), gamma > 0
};
struct TavisCummings {
    double Omega_F = 0.0, chi = 0.0;
    std::vector<double> Omega_p;  // per-qubit splittings; size = qubit count M
    double Lambda = 0.0, Lambda_s = 0.0;
};
struct DoubleJC {
    double chi_f = 0.0, chi0 = 0.0, g0 = 0.0;  // fields A,B; atoms C,D
};
struct DoubleTC {
    double chi_f = 0.0, chi0 = 0.0, g0 = 0.0;  // fields A,B; atoms C1,C2,D1,D2
};
struct NMRSpin {
    double chi_s = 0.0;  // 4 chi_s (S_Ax + S_Bx) S_Mx on qubits (M, A, B)
};

using HamiltonianSpec =
    std::variant<KerrCubic, BECWell, AtomField, TavisCummings, DoubleJC, DoubleTC, NMRSpin>;

// Space layout per variant: KerrCubic (d); BECWell/AtomField (field-or-A, B);
// TavisCummings (field, 2^M qubits); DoubleJC (A, B, C, D); DoubleTC (A, B, C1, C2, D1, D2);
// NMRSpin (M, A, B).
MatrixXcd build_hamiltonian(const HamiltonianSpec& spec, const ModeSpace& space);

struct EigenSystem {
    VectorXd energies;                        // ascending within each (N) block
    MatrixXcd states;                         // eigenvectors as columns
    std::vector<std::pair<int, int>> labels;  // (N, k) quantum numbers when sector-resolved
};

EigenSystem eigensystem(const MatrixXcd& h);  // dense solve, residual < 1e-9 ||H||

// Unitary evolution by eigendecomposition; diagonal fast path for KerrCubic.
class Propagator {
   public:
    Propagator(const HamiltonianSpec& spec, const ModeSpace& space);
    PureState at(const PureState& psi0, double t) const;

   private:
    ModeSpace space_;
    bool diagonal_ = false;
    VectorXd energies_;
    MatrixXcd states_;
};

PureState evolve(const PureState& psi, const HamiltonianSpec& spec, double t);

// Closed-form evolution of |alpha_a, m1> x |alpha_b, m2> under the two-well Hamiltonian.
PureState bec_analytic_state(cplx alpha_a, cplx alpha_b, int m1, int m2, const BECWell& spec,
                             double t, int n_max_a, int n_max_b);

// Smallest exact revival period, when one exists. KerrCubic: pi*p/chi1 from the
// rationalized ratio chi1/chi2 (continued fractions, relative tolerance 1e-15,
// numerator and denominator both capped at 1e7 -> otherwise treated as
// irrational). BECWell: pi/U when omega0 = m U and lambda1 = m' U with m+m' odd.
std::optional<double> revival_time(const HamiltonianSpec& spec);

// Three-qubit state (M, A, B) of the spin chain at time t (closed form).
DensityMatrix nmr_rho_t(double chi_s, double t);

// Fixed-N sector eigensystems (bases: BEC |n_a=j, n_b=N-j>; AtomField |n_f=N-k, n_b=k>;
// TavisCummings qubit patterns with n_field = N - #excited).
EigenSystem bec_sector_eigensystem(const BECWell& spec, int N);
EigenSystem af_sector_eigensystem(const AtomField& spec, int N);
EigenSystem tavis_sector_eigensystem(const TavisCummings& spec, int N);

// Embed a sector eigenstate as a two-mode PureState on dims (N+1, N+1).
PureState bec_sector_state(const BECWell& spec, int N, int k);
PureState af_sector_state(const AtomField& spec, int N, int k);

struct SweepPoint {
    double param;
    EigenSystem sys;
};

// Sweep one named parameter of a BECWell or AtomField spec over the given values,
// eigensolving the fixed-N sector at each point.
std::vector<SweepPoint> spectrum_sweep(const HamiltonianSpec& base, const std::string& param_name,
                                       const std::vector<double>& values, int N_sector);

// Qubit splittings Omega_p = sqrt(Delta_p^2 + epsilon^2) with Delta_p Gaussian
// (mean mean_gap, sd sigma_frac*mean_gap); bitwise reproducible for a fixed seed.
std::vector<double> tavis_disorder_draw(double mean_gap, double sigma_frac, double epsilon, int M,
                                        unsigned long long seed);

}  // namespace qtomo
