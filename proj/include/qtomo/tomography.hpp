#pragma once

#include "qtomo/fock.hpp"

namespace qtomo {

// Uniform quadrature grid plus a set of rotation angles.  n_x must be odd so
// Simpson quadrature applies; thetas must be sorted and distinct.
struct QuadGrid {
    double x_min = -10.0;
    double x_max = 10.0;
    int n_x = 1001;
    std::vector<double> thetas;

    QuadGrid() = default;
    QuadGrid(double x_min_, double x_max_, int n_x_, std::vector<double> thetas_);

    static QuadGrid defaults(int n_theta = 32);           // thetas j*pi/n_theta in [0,pi)
    static QuadGrid full_circle(int n_theta = 64);        // thetas j*2pi/n_theta in [0,2pi)
    static std::vector<double> quorum_thetas(int order);  // m*pi/(order+1), m=0..order

    double dx() const { return (x_max - x_min) / (n_x - 1); }
    std::vector<double> xs() const;
    int theta_index(double theta, double tol = 1e-9) const;  // -1 if absent
};

// Simpson weights on an odd-length uniform grid; composite rule.
std::vector<double> simpson_weights(int n, double dx);
double simpson(const std::vector<double>& f, double dx);

// Column of overlaps <X_theta,theta|n> for n = 0..n_max at one grid point:
// e^{-inθ} * h_n(x) with h_n(x) = H_n(x) e^{-x²/2} / (π^{1/4} √(n!) 2^{n/2}),
// evaluated by a scaled three-term recurrence (stable to n_max = 1000).
VectorXcd hermite_weights(int n_max, double x, double theta);
VectorXd hermite_basis(int n_max, double x);  // the real h_n(x) column

struct Tomogram {
    QuadGrid grid;
    MatrixXd values;  // n_theta x n_x, each row a normalized probability density in X

    const std::vector<double>& thetas() const { return grid.thetas; }
    Eigen::VectorXd slice(int theta_index) const { return values.row(theta_index); }
};

struct Tomogram2 {
    QuadGrid grid_a, grid_b;
    // values[ia*n_theta_b + ib] is the (X_A x X_B) slice at (theta_a[ia], theta_b[ib])
    std::vector<MatrixXd> values;

    const MatrixXd& slice(int ia, int ib) const;
};

struct SpinTomogram {
    int n_qubits = 0;
    // each axis is (theta, phi) of the measurement direction per qubit
    std::vector<std::vector<std::pair<double, double>>> axis_sets;
    // probs[set][outcome], outcome bits ordered subsystem 0 = most significant,
    // bit value 0 = "+" outcome along the axis
    std::vector<std::vector<double>> probs;
};

Tomogram tomogram_pure_single(const PureState& psi, const QuadGrid& grid);
Tomogram tomogram_density_single(const DensityMatrix& rho, const QuadGrid& grid);
Tomogram2 tomogram_two_mode(const PureState& psi, const QuadGrid& grid_a, const QuadGrid& grid_b);
Tomogram2 tomogram_two_mode(const DensityMatrix& rho, const QuadGrid& grid_a, const QuadGrid& grid_b);

// Marginal over the other mode's quadrature at a fixed angle of that mode.
Tomogram reduced_tomogram(const Tomogram2& t, int keep_mode, double fixed_other_theta);

// Axis angles: x -> (pi/2, 0), y -> (pi/2, pi/2), z -> (0, 0).
std::pair<double, double> spin_axis(char label);
SpinTomogram spin_tomogram(const DensityMatrix& rho,
                           const std::vector<std::vector<std::pair<double, double>>>& axis_sets);
SpinTomogram spin_tomogram_xyz(const DensityMatrix& rho);  // all {x,y,z}^n axis sets

// max |w(-X,θ) - w(X,θ+π)| over the grid; grid must be symmetric (x_min = -x_max)
// and contain both θ and θ+π for at least one pair.
double tomogram_symmetry_check(const PureState& psi, const QuadGrid& grid);

}  // namespace qtomo
