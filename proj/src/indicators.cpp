#include "qtomo/indicators.hpp"

#include <algorithm>
#include <cmath>

namespace qtomo {

namespace {

constexpr double kLn2 = 0.69314718055994530941723212145817657;

double clamp_indicator(double v, const char* who) {
    if (v < -1e-9) fail(std::string(who) + ": indicator came out negative (" + std::to_string(v) + ")");
    return std::max(v, 0.0);
}

VectorXd simpson_vector(const QuadGrid& grid) {
    auto w = simpson_weights(grid.n_x, grid.dx());
    return Eigen::Map<const VectorXd>(w.data(), static_cast<long long>(w.size()));
}

struct SliceCtx {
    const MatrixXd* w;  // joint slice, rows = X_A
    VectorXd swa, swb;
    VectorXd wa, wb;  // marginals
};

SliceCtx make_ctx(const Tomogram2& t, int ia, int ib) {
    SliceCtx c;
    c.w = &t.slice(ia, ib);
    c.swa = simpson_vector(t.grid_a);
    c.swb = simpson_vector(t.grid_b);
    c.wa = (*c.w) * c.swb;
    c.wb = c.w->transpose() * c.swa;
    return c;
}

std::pair<int, int> lookup(const Tomogram2& t, double ta, double tb, const char* who) {
    int ia = t.grid_a.theta_index(ta);
    int ib = t.grid_b.theta_index(tb);
    if (ia < 0 || ib < 0)
        fail(std::string(who) + ": tomogram lacks the requested angle pair (" +
             std::to_string(ta) + ", " + std::to_string(tb) + ")");
    return {ia, ib};
}

double tei_from_ctx(const SliceCtx& c) {
    double mi = 0.0;
    for (long long i = 0; i < c.w->rows(); ++i) {
        for (long long j = 0; j < c.w->cols(); ++j) {
            double wij = (*c.w)(i, j);
            if (wij <= 0.0) continue;
            double denom = c.wa[i] * c.wb[j];
            if (denom <= 0.0) continue;
            mi += c.swa[i] * c.swb[j] * wij * std::log(wij / denom);
        }
    }
    return clamp_indicator(mi / kLn2, "eps_tei");
}

double ipr_from_ctx(const SliceCtx& c) {
    double eta_ab = 0.0;
    for (long long i = 0; i < c.w->rows(); ++i)
        eta_ab += c.swa[i] * c.w->row(i).cwiseAbs2().dot(c.swb);
    double eta_a = c.wa.cwiseAbs2().dot(c.swa);
    double eta_b = c.wb.cwiseAbs2().dot(c.swb);
    return 1.0 + eta_ab - eta_a - eta_b;
}

double pcc_from_ctx(const SliceCtx& c, const std::vector<double>& xa,
                    const std::vector<double>& xb) {
    double mx = 0.0, my = 0.0;
    for (long long i = 0; i < c.w->rows(); ++i)
        for (long long j = 0; j < c.w->cols(); ++j) {
            double m = c.swa[i] * c.swb[j] * (*c.w)(i, j);
            mx += m * xa[i];
            my += m * xb[j];
        }
    double cov = 0.0, vx = 0.0, vy = 0.0;
    for (long long i = 0; i < c.w->rows(); ++i)
        for (long long j = 0; j < c.w->cols(); ++j) {
            double m = c.swa[i] * c.swb[j] * (*c.w)(i, j);
            cov += m * (xa[i] - mx) * (xb[j] - my);
            vx += m * (xa[i] - mx) * (xa[i] - mx);
            vy += m * (xb[j] - my) * (xb[j] - my);
        }
    if (vx <= 0.0 || vy <= 0.0) fail("eps_pcc: degenerate quadrature distribution");
    return std::min(std::abs(cov) / std::sqrt(vx * vy), 1.0);
}

double bd_from_ctx(const SliceCtx& c) {
    double bc = 0.0;
    for (long long i = 0; i < c.w->rows(); ++i)
        for (long long j = 0; j < c.w->cols(); ++j) {
            double wij = (*c.w)(i, j);
            if (wij <= 0.0) continue;
            bc += c.swa[i] * c.swb[j] * std::sqrt(wij * c.wa[i] * c.wb[j]);
        }
    if (bc <= 0.0) fail("eps_bd: vanishing Bhattacharyya coefficient");
    return clamp_indicator(-std::log(bc) / kLn2, "eps_bd");
}

double eps_by_index(const Tomogram2& t, SliceKind kind, int ia, int ib) {
    SliceCtx c = make_ctx(t, ia, ib);
    switch (kind) {
        case SliceKind::tei:
            return tei_from_ctx(c);
        case SliceKind::ipr:
            return ipr_from_ctx(c);
        case SliceKind::pcc:
            return pcc_from_ctx(c, t.grid_a.xs(), t.grid_b.xs());
        case SliceKind::bd:
            return bd_from_ctx(c);
    }
    fail("eps_slice: unknown slice kind");
}

std::vector<double> all_slice_values(const Tomogram2& t, SliceKind kind) {
    std::vector<double> vals;
    int na = static_cast<int>(t.grid_a.thetas.size());
    int nb = static_cast<int>(t.grid_b.thetas.size());
    vals.reserve(static_cast<size_t>(na) * nb);
    for (int ia = 0; ia < na; ++ia)
        for (int ib = 0; ib < nb; ++ib) vals.push_back(eps_by_index(t, kind, ia, ib));
    return vals;
}

}  // namespace

double eps_tei(const Tomogram2& t, double theta_a, double theta_b) {
    auto [ia, ib] = lookup(t, theta_a, theta_b, "eps_tei");
    return eps_by_index(t, SliceKind::tei, ia, ib);
}

double eps_ipr(const Tomogram2& t, double theta_a, double theta_b) {
    auto [ia, ib] = lookup(t, theta_a, theta_b, "eps_ipr");
    return eps_by_index(t, SliceKind::ipr, ia, ib);
}

double eps_pcc(const Tomogram2& t, double theta_a, double theta_b) {
    auto [ia, ib] = lookup(t, theta_a, theta_b, "eps_pcc");
    return eps_by_index(t, SliceKind::pcc, ia, ib);
}

double eps_bd(const Tomogram2& t, double theta_a, double theta_b) {
    auto [ia, ib] = lookup(t, theta_a, theta_b, "eps_bd");
    return eps_by_index(t, SliceKind::bd, ia, ib);
}

double eps_slice(const Tomogram2& t, SliceKind kind, double theta_a, double theta_b) {
    auto [ia, ib] = lookup(t, theta_a, theta_b, "eps_slice");
    return eps_by_index(t, kind, ia, ib);
}

std::vector<double> xi_angle_grid(int n) {
    if (n < 1) fail("xi_angle_grid: need at least one angle");
    std::vector<double> th(n);
    for (int k = 0; k < n; ++k) th[k] = k * kPi / n;
    return th;
}

double xi_average(const Tomogram2& t, SliceKind kind) {
    auto vals = all_slice_values(t, kind);
    if (vals.empty()) fail("xi_average: tomogram has no slices");
    double s = 0.0;
    for (double v : vals) s += v;
    return s / vals.size();
}

double xi_prime_tei(const Tomogram2& t) {
    auto vals = all_slice_values(t, SliceKind::tei);
    if (vals.empty()) fail("xi_prime_tei: tomogram has no slices");
    double mean = 0.0, sq = 0.0;
    for (double v : vals) {
        mean += v;
        sq += v * v;
    }
    mean /= vals.size();
    double sigma = std::sqrt(std::max(0.0, sq / vals.size() - mean * mean));
    if (sigma < 1e-15) return mean;
    double s = 0.0;
    int n = 0;
    for (double v : vals)
        if (v > mean + sigma) {
            s += v;
            ++n;
        }
    return n == 0 ? mean : s / n;
}

double xi_svne(const DensityMatrix& rho, const std::vector<int>& subsystem, double log_base) {
    return svne(partial_trace(rho, subsystem), log_base);
}

double xi_sle(const DensityMatrix& rho, const std::vector<int>& subsystem) {
    return sle(partial_trace(rho, subsystem));
}

double spin_eps_tei(const SpinTomogram& st, int set_index, const std::vector<int>& part_a,
                    double log_base) {
    if (set_index < 0 || set_index >= static_cast<int>(st.probs.size()))
        fail("spin_eps_tei: measurement set index out of range");
    if (part_a.empty() || static_cast<int>(part_a.size()) >= st.n_qubits)
        fail("spin_eps_tei: partition must be a strict nonempty subset of the qubits");
    std::vector<bool> in_a(st.n_qubits, false);
    for (int q : part_a) {
        if (q < 0 || q >= st.n_qubits || in_a[q]) fail("spin_eps_tei: bad partition");
        in_a[q] = true;
    }
    int na = 1 << part_a.size();
    int nb = 1 << (st.n_qubits - static_cast<int>(part_a.size()));
    const std::vector<double>& p = st.probs[set_index];
    MatrixXd joint = MatrixXd::Zero(na, nb);
    for (size_t o = 0; o < p.size(); ++o) {
        int oa = 0, ob = 0;
        for (int q = 0; q < st.n_qubits; ++q) {
            int bit = (static_cast<int>(o) >> (st.n_qubits - 1 - q)) & 1;
            if (in_a[q])
                oa = (oa << 1) | bit;
            else
                ob = (ob << 1) | bit;
        }
        joint(oa, ob) += p[o];
    }
    VectorXd pa = joint.rowwise().sum();
    VectorXd pb = joint.colwise().sum().transpose();
    double mi = 0.0;
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j) {
            double v = joint(i, j);
            if (v <= 0.0) continue;
            mi += v * std::log(v / (pa[i] * pb[j]));
        }
    return clamp_indicator(mi / std::log(log_base), "spin_eps_tei");
}

double spin_xi_tei(const SpinTomogram& st, const std::vector<int>& part_a, double log_base) {
    if (st.probs.empty()) fail("spin_xi_tei: tomogram has no measurement sets");
    double s = 0.0;
    for (size_t k = 0; k < st.probs.size(); ++k)
        s += spin_eps_tei(st, static_cast<int>(k), part_a, log_base);
    return s / st.probs.size();
}

double series_pcc(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2) fail("series_pcc: need two equally long series");
    double ma = 0.0, mb = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= a.size();
    mb /= b.size();
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        cov += (a[i] - ma) * (b[i] - mb);
        va += (a[i] - ma) * (a[i] - ma);
        vb += (b[i] - mb) * (b[i] - mb);
    }
    if (va <= 0.0 || vb <= 0.0) fail("series_pcc: constant series has no correlation");
    return cov / std::sqrt(va * vb);
}

void IndicatorRow::finalize() {
    d1 = std::abs(xi_svne - xi_tei_prime);
    d2 = std::abs(xi_sle - xi_tei_prime);
    d3 = std::abs(xi_sle - xi_ipr);
    delta = std::abs(xi_svne - xi_sle);
}

const std::vector<std::string>& IndicatorSeries::column_names() {
    static const std::vector<std::string> names = {
        "xi_tei", "xi_tei_prime", "xi_ipr", "xi_pcc", "xi_bd",   "xi_svne", "xi_sle",
        "xi_qmi", "negativity",   "d1",     "d2",     "d3",      "delta"};
    return names;
}

std::vector<double> IndicatorSeries::column(const std::string& name) const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) {
        if (name == axis_name || name == "axis")
            out.push_back(r.axis);
        else if (name == "xi_tei")
            out.push_back(r.xi_tei);
        else if (name == "xi_tei_prime")
            out.push_back(r.xi_tei_prime);
        else if (name == "xi_ipr")
            out.push_back(r.xi_ipr);
        else if (name == "xi_pcc")
            out.push_back(r.xi_pcc);
        else if (name == "xi_bd")
            out.push_back(r.xi_bd);
        else if (name == "xi_svne")
            out.push_back(r.xi_svne);
        else if (name == "xi_sle")
            out.push_back(r.xi_sle);
        else if (name == "xi_qmi")
            out.push_back(r.xi_qmi);
        else if (name == "negativity")
            out.push_back(r.negativity);
        else if (name == "d1")
            out.push_back(r.d1);
        else if (name == "d2")
            out.push_back(r.d2);
        else if (name == "d3")
            out.push_back(r.d3);
        else if (name == "delta")
            out.push_back(r.delta);
        else
            fail("IndicatorSeries: unknown column " + name);
    }
    return out;
}

}  // namespace qtomo
