#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qtomo {

using cplx = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr long long kDensityEntryCap = 1LL << 22;

[[noreturn]] void fail(const std::string& msg);

double log_factorial(int n);
double log_binomial(int n, int k);
double binomial_coeff(int n, int k);
// L_m(-r) for r >= 0 (all terms positive, stable)
double laguerre_neg(int m, double r);

// Product of Fock-type subsystems. Flat index is row-major with subsystem 0 slowest.
struct ModeSpace {
    std::vector<int> dims;

    ModeSpace() = default;
    explicit ModeSpace(std::vector<int> d);
    int n_subsystems() const { return static_cast<int>(dims.size()); }
    long long total_dim() const;
    long long flat(const std::vector<int>& idx) const;
    std::vector<int> unflat(long long f) const;
    std::vector<long long> strides() const;
    bool operator==(const ModeSpace& o) const { return dims == o.dims; }
};

class PureState {
   public:
    PureState(ModeSpace space, VectorXcd amp);  // requires unit norm within 1e-10
    static PureState normalized(ModeSpace space, VectorXcd amp);
    const ModeSpace& space() const { return space_; }
    const VectorXcd& amp() const { return amp_; }
    cplx amp_at(const std::vector<int>& idx) const { return amp_(space_.flat(idx)); }

   private:
    ModeSpace space_;
    VectorXcd amp_;
};

class DensityMatrix {
   public:
    // requires: hermitian within 1e-10, trace 1 within 1e-10, diagonal >= -1e-9,
    // total entries <= entry_cap
    DensityMatrix(ModeSpace space, MatrixXcd mat, long long entry_cap = kDensityEntryCap);
    const ModeSpace& space() const { return space_; }
    const MatrixXcd& mat() const { return mat_; }

   private:
    ModeSpace space_;
    MatrixXcd mat_;
};

// ---- state factories ----
PureState make_fock(int n, int n_max);
// truncated to n_max and renormalized; fails if the lost tail mass exceeds 1e-6
PureState make_coherent(cplx alpha, int n_max);
// m-photon-added coherent state  a^dag^m |alpha> / sqrt(m! L_m(-|alpha|^2))
PureState make_pacs(cplx alpha, int m, int n_max);
// two-mode binomial state  2^{-N/2} sum_n C(N,n)^{1/2} |N-n, n>
PureState make_binomial(int N);
// sum_n (-e^{i arg z} tanh|z|)^n / cosh|z| |n,n>
PureState make_two_mode_squeezed(cplx zeta, int n_max);

// qubit conventions: index 0 = excited/up, index 1 = ground/down
PureState make_bell_psi_plus();  // (|gg> + |ee>)/sqrt(2)
PureState make_bell_phi_plus();  // (|ge> + |eg>)/sqrt(2)
// (cos(theta)|down> + e^{i phi} sin(theta)|up>)^{tensor n}
PureState make_spin_coherent(double theta, double phi, int n_qubits);

// ---- composition / reduction ----
PureState tensor(const PureState& a, const PureState& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);
DensityMatrix to_density(const PureState& psi, long long entry_cap = kDensityEntryCap);
// keep must be strictly ascending subsystem indices
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);
DensityMatrix partial_trace(const PureState& psi, const std::vector<int>& keep);
DensityMatrix partial_transpose(const DensityMatrix& rho, const std::vector<int>& part_a);

// ---- scalar measures ----
double purity(const DensityMatrix& rho);
double fidelity(const PureState& a, const PureState& b);        // |<a|b>|^2
double fidelity(const DensityMatrix& rho, const PureState& b);  // <b|rho|b>
double svne(const DensityMatrix& rho, double log_base = 2.0);
double sle(const DensityMatrix& rho);
double qmi(const DensityMatrix& rho, const std::vector<int>& part_a, double log_base = 2.0);
double negativity(const DensityMatrix& rho, const std::vector<int>& part_a);

// ---- operators ----
MatrixXcd annihilation(int dim);
MatrixXcd number_op(int dim);
MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b);
MatrixXcd embed(const ModeSpace& space, int sub, const MatrixXcd& op);
cplx expval(const PureState& psi, const MatrixXcd& op);
cplx expval(const DensityMatrix& rho, const MatrixXcd& op);
// half-Pauli spin components (eigenvalues +-1/2); basis {excited, ground}
MatrixXcd sigma_half_x();
MatrixXcd sigma_half_y();
MatrixXcd sigma_half_z();
MatrixXcd sigma_plus();   // |e><g|
MatrixXcd sigma_minus();  // |g><e|

}  // namespace qtomo
