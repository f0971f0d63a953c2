#pragma once

#include <string>

#include "qtomo/tomography.hpp"

namespace qtomo {

enum class SliceKind { tei, ipr, pcc, bd };

// Slice correlators between the two quadratures of a two-mode tomogram at one
// angle pair.  All entropies and distances use log2.
double eps_tei(const Tomogram2& t, double theta_a, double theta_b);  // mutual information
double eps_ipr(const Tomogram2& t, double theta_a, double theta_b);  // 1 + eta_ab - eta_a - eta_b
double eps_pcc(const Tomogram2& t, double theta_a, double theta_b);  // |Pearson correlation|
double eps_bd(const Tomogram2& t, double theta_a, double theta_b);   // Bhattacharyya distance
double eps_slice(const Tomogram2& t, SliceKind kind, double theta_a, double theta_b);

// Equal-step angle grid k*pi/n, k = 0..n-1 (the averaging quorum for xi).
std::vector<double> xi_angle_grid(int n);

// Mean of the slice correlator over every angle pair the tomogram carries.
double xi_average(const Tomogram2& t, SliceKind kind);
// Mean restricted to slice values above mean + one standard deviation; falls
// back to the plain mean when the values are degenerate or none qualify.
double xi_prime_tei(const Tomogram2& t);

// Reference measures on the density matrix side.
double xi_svne(const DensityMatrix& rho, const std::vector<int>& subsystem, double log_base = 2.0);
double xi_sle(const DensityMatrix& rho, const std::vector<int>& subsystem);

// Discrete mutual information of one spin measurement set, splitting the
// outcome bits between the qubits in part_a and the rest.
double spin_eps_tei(const SpinTomogram& st, int set_index, const std::vector<int>& part_a,
                    double log_base = 2.0);
// Average over every measurement set in the tomogram.
double spin_xi_tei(const SpinTomogram& st, const std::vector<int>& part_a, double log_base = 2.0);

// Signed Pearson correlation between two equally long series.
double series_pcc(const std::vector<double>& a, const std::vector<double>& b);

// One record of every indicator at a single axis value (time or parameter).
struct IndicatorRow {
    double axis = 0.0;
    double xi_tei = 0.0, xi_tei_prime = 0.0, xi_ipr = 0.0, xi_pcc = 0.0, xi_bd = 0.0;
    double xi_svne = 0.0, xi_sle = 0.0, xi_qmi = 0.0, negativity = 0.0;
    double d1 = 0.0, d2 = 0.0, d3 = 0.0, delta = 0.0;

    void finalize();  // fill the difference columns from the xi fields
};

struct IndicatorSeries {
    std::string axis_name = "t";
    std::vector<IndicatorRow> rows;

    static const std::vector<std::string>& column_names();  // stable order, axis excluded
    std::vector<double> column(const std::string& name) const;
};

}  // namespace qtomo
