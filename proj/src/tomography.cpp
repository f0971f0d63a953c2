#include "qtomo/tomography.hpp"

#include <algorithm>
#include <cmath>

namespace qtomo {

QuadGrid::QuadGrid(double x_min_, double x_max_, int n_x_, std::vector<double> thetas_)
    : x_min(x_min_), x_max(x_max_), n_x(n_x_), thetas(std::move(thetas_)) {
    if (n_x < 3 || n_x % 2 == 0) fail("QuadGrid: n_x must be odd and >= 3");
    if (!(x_max > x_min)) fail("QuadGrid: empty x range");
    if (thetas.empty()) fail("QuadGrid: no angles");
    for (size_t i = 0; i < thetas.size(); ++i) {
        if (thetas[i] < 0.0 || thetas[i] >= 2.0 * kPi + 1e-12) fail("QuadGrid: angle outside [0, 2pi)");
        if (i > 0 && thetas[i] <= thetas[i - 1]) fail("QuadGrid: angles must be sorted, distinct");
    }
}

QuadGrid QuadGrid::defaults(int n_theta) {
    std::vector<double> th(n_theta);
    for (int j = 0; j < n_theta; ++j) th[j] = j * kPi / n_theta;
    return QuadGrid(-10.0, 10.0, 1001, std::move(th));
}

QuadGrid QuadGrid::full_circle(int n_theta) {
    std::vector<double> th(n_theta);
    for (int j = 0; j < n_theta; ++j) th[j] = j * 2.0 * kPi / n_theta;
    return QuadGrid(-10.0, 10.0, 1001, std::move(th));
}

std::vector<double> QuadGrid::quorum_thetas(int order) {
    std::vector<double> th(order + 1);
    for (int m = 0; m <= order; ++m) th[m] = m * kPi / (order + 1);
    return th;
}

std::vector<double> QuadGrid::xs() const {
    std::vector<double> x(n_x);
    double d = dx();
    for (int i = 0; i < n_x; ++i) x[i] = x_min + i * d;
    x[n_x - 1] = x_max;
    return x;
}

int QuadGrid::theta_index(double theta, double tol) const {
    for (size_t i = 0; i < thetas.size(); ++i)
        if (std::abs(thetas[i] - theta) <= tol) return static_cast<int>(i);
    return -1;
}

std::vector<double> simpson_weights(int n, double dx) {
    if (n < 3 || n % 2 == 0) fail("simpson_weights: need odd n >= 3");
    std::vector<double> w(n, dx / 3.0);
    for (int i = 1; i < n - 1; ++i) w[i] *= (i % 2 == 1) ? 4.0 : 2.0;
    return w;
}

double simpson(const std::vector<double>& f, double dx) {
    std::vector<double> w = simpson_weights(static_cast<int>(f.size()), dx);
    double acc = 0.0;
    for (size_t i = 0; i < f.size(); ++i) acc += w[i] * f[i];
    return acc;
}

VectorXd hermite_basis(int n_max, double x) {
    if (n_max < 0 || n_max > 1000) fail("hermite_basis: order outside [0, 1000]");
    VectorXd h(n_max + 1);
    h(0) = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
    if (n_max >= 1) h(1) = x * std::sqrt(2.0) * h(0);
    for (int n = 1; n < n_max; ++n)
        h(n + 1) = x * std::sqrt(2.0 / (n + 1)) * h(n) - std::sqrt(n / (n + 1.0)) * h(n - 1);
    return h;
}

VectorXcd hermite_weights(int n_max, double x, double theta) {
    VectorXd h = hermite_basis(n_max, x);
    VectorXcd out(n_max + 1);
    for (int n = 0; n <= n_max; ++n) out(n) = std::polar(h(n), -n * theta);
    return out;
}

namespace {

// rows: grid points; cols: Fock levels 0..n_max
MatrixXd basis_matrix(const QuadGrid& grid, int n_max) {
    std::vector<double> xs = grid.xs();
    MatrixXd H(grid.n_x, n_max + 1);
    for (int i = 0; i < grid.n_x; ++i) H.row(i) = hermite_basis(n_max, xs[i]).transpose();
    return H;
}

VectorXcd phase_column(int n_max, double theta) {
    VectorXcd ph(n_max + 1);
    for (int n = 0; n <= n_max; ++n) ph(n) = std::polar(1.0, -n * theta);
    return ph;
}

void check_slice_norms(const MatrixXd& values, double dx, double tol) {
    std::vector<double> w = simpson_weights(static_cast<int>(values.cols()), dx);
    for (long long r = 0; r < values.rows(); ++r) {
        double mass = 0.0;
        for (long long c = 0; c < values.cols(); ++c) mass += w[c] * values(r, c);
        if (std::abs(mass - 1.0) > tol)
            fail("tomogram: slice norm " + std::to_string(mass) +
                 " deviates beyond tolerance; widen the grid or raise the truncation");
    }
}

// eigendecompose rho into pure components, dropping relative weights below 1e-13
std::vector<std::pair<double, VectorXcd>> pure_components(const MatrixXcd& rho) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(rho);
    if (es.info() != Eigen::Success) fail("tomogram: eigendecomposition failed");
    double lmax = es.eigenvalues().maxCoeff();
    std::vector<std::pair<double, VectorXcd>> comps;
    for (long long k = 0; k < es.eigenvalues().size(); ++k) {
        double l = es.eigenvalues()(k);
        if (l > 1e-13 * lmax) comps.emplace_back(l, es.eigenvectors().col(k));
    }
    return comps;
}

void require_single_mode(const ModeSpace& sp, const char* who) {
    if (sp.n_subsystems() != 1) fail(std::string(who) + ": expected a single-mode state");
}

void require_two_mode(const ModeSpace& sp, const char* who) {
    if (sp.n_subsystems() != 2) fail(std::string(who) + ": expected a two-mode state");
}

MatrixXd single_mode_values(const VectorXcd& amp, const QuadGrid& grid, const MatrixXd& H) {
    int n_max = static_cast<int>(amp.size()) - 1;
    MatrixXd values(static_cast<int>(grid.thetas.size()), grid.n_x);
    for (size_t j = 0; j < grid.thetas.size(); ++j) {
        VectorXcd c = amp.cwiseProduct(phase_column(n_max, grid.thetas[j]));
        values.row(j) = (H * c).cwiseAbs2().transpose();
    }
    return values;
}

}  // namespace

Tomogram tomogram_pure_single(const PureState& psi, const QuadGrid& grid) {
    require_single_mode(psi.space(), "tomogram_pure_single");
    MatrixXd H = basis_matrix(grid, psi.space().dims[0] - 1);
    Tomogram t{grid, single_mode_values(psi.amp(), grid, H)};
    check_slice_norms(t.values, grid.dx(), 1e-4);
    return t;
}

Tomogram tomogram_density_single(const DensityMatrix& rho, const QuadGrid& grid) {
    require_single_mode(rho.space(), "tomogram_density_single");
    MatrixXd H = basis_matrix(grid, rho.space().dims[0] - 1);
    MatrixXd values = MatrixXd::Zero(static_cast<int>(grid.thetas.size()), grid.n_x);
    for (const auto& [l, vec] : pure_components(rho.mat())) values += l * single_mode_values(vec, grid, H);
    Tomogram t{grid, std::move(values)};
    check_slice_norms(t.values, grid.dx(), 1e-4);
    return t;
}

const MatrixXd& Tomogram2::slice(int ia, int ib) const {
    int nb = static_cast<int>(grid_b.thetas.size());
    if (ia < 0 || ib < 0 || ia >= static_cast<int>(grid_a.thetas.size()) || ib >= nb)
        fail("Tomogram2::slice: angle index out of range");
    return values[static_cast<size_t>(ia) * nb + ib];
}

namespace {

Tomogram2 two_mode_from_components(const std::vector<std::pair<double, VectorXcd>>& comps,
                                   const ModeSpace& sp, const QuadGrid& grid_a, const QuadGrid& grid_b) {
    long long total = static_cast<long long>(grid_a.thetas.size()) * grid_b.thetas.size() * grid_a.n_x *
                      grid_b.n_x;
    if (total > (1LL << 26)) fail("tomogram_two_mode: output exceeds 2^26 entries");
    int da = sp.dims[0], db = sp.dims[1];
    MatrixXd Ha = basis_matrix(grid_a, da - 1);
    MatrixXd Hb = basis_matrix(grid_b, db - 1);

    Tomogram2 t;
    t.grid_a = grid_a;
    t.grid_b = grid_b;
    t.values.assign(grid_a.thetas.size() * grid_b.thetas.size(), MatrixXd());

    std::vector<double> wa = simpson_weights(grid_a.n_x, grid_a.dx());
    std::vector<double> wb = simpson_weights(grid_b.n_x, grid_b.dx());

    for (size_t ia = 0; ia < grid_a.thetas.size(); ++ia) {
        VectorXcd pa = phase_column(da - 1, grid_a.thetas[ia]);
        for (size_t ib = 0; ib < grid_b.thetas.size(); ++ib) {
            VectorXcd pb = phase_column(db - 1, grid_b.thetas[ib]);
            MatrixXd slice = MatrixXd::Zero(grid_a.n_x, grid_b.n_x);
            for (const auto& [l, vec] : comps) {
                Eigen::Map<const MatrixXcd> C(vec.data(), db, da);  // column-major map of row-major data
                MatrixXcd Cp = (pa.asDiagonal() * C.transpose()) * pb.asDiagonal();
                MatrixXcd amp = (Ha.cast<cplx>() * Cp) * Hb.cast<cplx>().transpose();
                slice += l * amp.cwiseAbs2();
            }
            double mass = 0.0;
            for (int i = 0; i < grid_a.n_x; ++i)
                for (int j = 0; j < grid_b.n_x; ++j) mass += wa[i] * wb[j] * slice(i, j);
            if (std::abs(mass - 1.0) > 1e-4)
                fail("tomogram_two_mode: slice norm " + std::to_string(mass) +
                     " deviates beyond tolerance; widen the grid or raise the truncation");
            t.values[ia * grid_b.thetas.size() + ib] = std::move(slice);
        }
    }
    return t;
}

}  // namespace

Tomogram2 tomogram_two_mode(const PureState& psi, const QuadGrid& grid_a, const QuadGrid& grid_b) {
    require_two_mode(psi.space(), "tomogram_two_mode");
    return two_mode_from_components({{1.0, psi.amp()}}, psi.space(), grid_a, grid_b);
}

Tomogram2 tomogram_two_mode(const DensityMatrix& rho, const QuadGrid& grid_a, const QuadGrid& grid_b) {
    require_two_mode(rho.space(), "tomogram_two_mode");
    return two_mode_from_components(pure_components(rho.mat()), rho.space(), grid_a, grid_b);
}

Tomogram reduced_tomogram(const Tomogram2& t, int keep_mode, double fixed_other_theta) {
    if (keep_mode != 0 && keep_mode != 1) fail("reduced_tomogram: keep_mode must be 0 or 1");
    const QuadGrid& keep_grid = (keep_mode == 0) ? t.grid_a : t.grid_b;
    const QuadGrid& other_grid = (keep_mode == 0) ? t.grid_b : t.grid_a;
    int fixed = other_grid.theta_index(fixed_other_theta);
    if (fixed < 0) fail("reduced_tomogram: fixed angle not present in the tomogram");

    std::vector<double> w = simpson_weights(other_grid.n_x, other_grid.dx());
    MatrixXd values(static_cast<int>(keep_grid.thetas.size()), keep_grid.n_x);
    for (size_t jt = 0; jt < keep_grid.thetas.size(); ++jt) {
        const MatrixXd& slice = (keep_mode == 0) ? t.slice(static_cast<int>(jt), fixed)
                                                 : t.slice(fixed, static_cast<int>(jt));
        for (int i = 0; i < keep_grid.n_x; ++i) {
            double acc = 0.0;
            for (int k = 0; k < other_grid.n_x; ++k)
                acc += w[k] * ((keep_mode == 0) ? slice(i, k) : slice(k, i));
            values(static_cast<int>(jt), i) = acc;
        }
    }
    Tomogram out{keep_grid, std::move(values)};
    check_slice_norms(out.values, keep_grid.dx(), 1e-4);
    return out;
}

std::pair<double, double> spin_axis(char label) {
    switch (label) {
        case 'x': return {0.5 * kPi, 0.0};
        case 'y': return {0.5 * kPi, 0.5 * kPi};
        case 'z': return {0.0, 0.0};
        default: fail("spin_axis: label must be one of x,y,z");
    }
}

SpinTomogram spin_tomogram(const DensityMatrix& rho,
                           const std::vector<std::vector<std::pair<double, double>>>& axis_sets) {
    const ModeSpace& sp = rho.space();
    for (int d : sp.dims)
        if (d != 2) fail("spin_tomogram: all subsystems must be qubits");
    int nq = sp.n_subsystems();
    long long n_out = 1LL << nq;

    SpinTomogram st;
    st.n_qubits = nq;
    st.axis_sets = axis_sets;
    st.probs.reserve(axis_sets.size());

    for (const auto& set : axis_sets) {
        if (static_cast<int>(set.size()) != nq) fail("spin_tomogram: axis set size != qubit count");
        // per-qubit outcome vectors; bit 0 = "+" along the axis
        std::vector<std::array<Eigen::Vector2cd, 2>> basis(nq);
        for (int q = 0; q < nq; ++q) {
            auto [th, ph] = set[q];
            basis[q][0] << std::cos(0.5 * th), std::polar(std::sin(0.5 * th), ph);
            basis[q][1] << std::sin(0.5 * th), -std::polar(std::cos(0.5 * th), ph);
        }
        std::vector<double> row(n_out);
        double mass = 0.0;
        for (long long o = 0; o < n_out; ++o) {
            VectorXcd v = VectorXcd::Ones(1);
            for (int q = 0; q < nq; ++q) {
                int bit = static_cast<int>((o >> (nq - 1 - q)) & 1);
                VectorXcd next(v.size() * 2);
                for (long long i = 0; i < v.size(); ++i) {
                    next(2 * i) = v(i) * basis[q][bit](0);
                    next(2 * i + 1) = v(i) * basis[q][bit](1);
                }
                v.swap(next);
            }
            row[o] = std::max(0.0, (v.adjoint() * rho.mat() * v)(0).real());
            mass += row[o];
        }
        if (std::abs(mass - 1.0) > 1e-10) fail("spin_tomogram: outcome row fails to sum to 1");
        st.probs.push_back(std::move(row));
    }
    return st;
}

SpinTomogram spin_tomogram_xyz(const DensityMatrix& rho) {
    int nq = rho.space().n_subsystems();
    long long n_sets = 1;
    for (int q = 0; q < nq; ++q) n_sets *= 3;
    const char labels[3] = {'x', 'y', 'z'};
    std::vector<std::vector<std::pair<double, double>>> sets;
    sets.reserve(n_sets);
    for (long long s = 0; s < n_sets; ++s) {
        std::vector<std::pair<double, double>> set(nq);
        long long rem = s;
        for (int q = nq - 1; q >= 0; --q) {
            set[q] = spin_axis(labels[rem % 3]);
            rem /= 3;
        }
        sets.push_back(std::move(set));
    }
    return spin_tomogram(rho, sets);
}

double tomogram_symmetry_check(const PureState& psi, const QuadGrid& grid) {
    require_single_mode(psi.space(), "tomogram_symmetry_check");
    if (std::abs(grid.x_min + grid.x_max) > 1e-12)
        fail("tomogram_symmetry_check: grid must be symmetric about 0");
    int n_max = psi.space().dims[0] - 1;
    MatrixXd H = basis_matrix(grid, n_max);
    double worst = 0.0;
    for (double th : grid.thetas) {
        VectorXd w1 = (H * psi.amp().cwiseProduct(phase_column(n_max, th))).cwiseAbs2();
        VectorXd w2 = (H * psi.amp().cwiseProduct(phase_column(n_max, th + kPi))).cwiseAbs2();
        for (int i = 0; i < grid.n_x; ++i) worst = std::max(worst, std::abs(w2(i) - w1(grid.n_x - 1 - i)));
    }
    return worst;
}

}  // namespace qtomo
