#include "qtomo/timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <unsupported/Eigen/FFT>

namespace qtomo {

namespace {

void check_series(const ScalarSeries& s, size_t min_len, const char* who) {
    if (s.values.size() < min_len)
        fail(std::string(who) + ": series too short (" + std::to_string(s.values.size()) + ")");
    if (!(s.dt > 0.0)) fail(std::string(who) + ": sample step must be positive");
    for (double v : s.values)
        if (!std::isfinite(v)) fail(std::string(who) + ": series contains non-finite values");
}

// Binned mutual information between y(n) and y(n + lag); natural log, since
// the location of the minimum is base-independent.
double lagged_mi(const std::vector<double>& y, int lag, int n_bins, double lo, double width) {
    int n = static_cast<int>(y.size()) - lag;
    std::vector<double> joint(static_cast<size_t>(n_bins) * n_bins, 0.0);
    std::vector<double> pa(n_bins, 0.0), pb(n_bins, 0.0);
    auto bin = [&](double v) {
        int b = static_cast<int>((v - lo) / width);
        return std::clamp(b, 0, n_bins - 1);
    };
    double inv = 1.0 / n;
    for (int i = 0; i < n; ++i) {
        int a = bin(y[i]), b = bin(y[i + lag]);
        joint[static_cast<size_t>(a) * n_bins + b] += inv;
        pa[a] += inv;
        pb[b] += inv;
    }
    double mi = 0.0;
    for (int a = 0; a < n_bins; ++a)
        for (int b = 0; b < n_bins; ++b) {
            double j = joint[static_cast<size_t>(a) * n_bins + b];
            if (j > 0.0) mi += j * std::log(j / (pa[a] * pb[b]));
        }
    return mi;
}

// Delay vectors y(n) = [y_n, y_{n+tau}, ..., y_{n+(d-1)tau}]; M usable points.
int n_embedded(int n_samples, int d, int tau) { return n_samples - (d - 1) * tau; }

double emb_dist2(const std::vector<double>& y, int i, int j, int d, int tau) {
    double s = 0.0;
    for (int p = 0; p < d; ++p) {
        double diff = y[i + p * tau] - y[j + p * tau];
        s += diff * diff;
    }
    return s;
}

// Without-replacement sample of count indices from [0, n) (partial Fisher-Yates).
std::vector<int> sample_indices(int n, int count, std::uint64_t seed) {
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::mt19937_64 rng(seed);
    count = std::min(count, n);
    for (int i = 0; i < count; ++i) {
        std::uniform_int_distribution<int> pick(i, n - 1);
        std::swap(idx[i], idx[pick(rng)]);
    }
    idx.resize(count);
    return idx;
}

// Least-squares slope of log C vs log r over the small-distance scaling
// region: ranked pair distances whose empirical C(r) lies in [1e-4, 1e-2].
// Larger distances feel the attractor edge, where the local slope keeps
// steepening with embedding dimension instead of saturating.
double correlation_slope(std::vector<double>& log_d) {
    std::sort(log_d.begin(), log_d.end());
    size_t n = log_d.size();
    if (n < 100000) fail("embed_dim: too few finite pair distances");
    size_t k_lo = static_cast<size_t>(n * 1e-4);
    size_t k_hi = static_cast<size_t>(n * 1e-2);
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    long long cnt = 0;
    for (size_t k = k_lo; k < k_hi; ++k) {
        double lr = log_d[k];
        double lc = std::log((k + 1.0) / n);  // empirical C at this ranked distance
        sx += lr;
        sy += lc;
        sxx += lr * lr;
        sxy += lr * lc;
        ++cnt;
    }
    if (cnt < 10) fail("embed_dim: scaling region holds too few points");
    double denom = cnt * sxx - sx * sx;
    if (std::abs(denom) < 1e-300) fail("embed_dim: degenerate scaling region");
    return (cnt * sxy - sx * sy) / denom;
}

}  // namespace

int mi_delay(const ScalarSeries& s, int max_lag, int n_bins) {
    check_series(s, 64, "mi_delay");
    if (n_bins < 2) fail("mi_delay: need at least two bins");
    int n = static_cast<int>(s.values.size());
    if (max_lag <= 0) max_lag = std::min(200, n / 10);
    max_lag = std::min(max_lag, n - 2);
    auto [mn, mx] = std::minmax_element(s.values.begin(), s.values.end());
    if (*mx - *mn <= 0.0) fail("mi_delay: constant series has no delay structure");
    double width = (*mx - *mn) / n_bins;

    double prev = lagged_mi(s.values, 1, n_bins, *mn, width);
    for (int lag = 2; lag <= max_lag; ++lag) {
        double cur = lagged_mi(s.values, lag, n_bins, *mn, width);
        if (cur > prev) return lag - 1;  // first local minimum
        prev = cur;
    }

    // Monotone decay: fall back to the 1/e autocorrelation crossing.
    double mean = 0.0;
    for (double v : s.values) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : s.values) var += (v - mean) * (v - mean);
    for (int lag = 1; lag <= max_lag; ++lag) {
        double c = 0.0;
        for (int i = 0; i + lag < n; ++i) c += (s.values[i] - mean) * (s.values[i + lag] - mean);
        if (std::abs(c / var) < std::exp(-1.0)) return lag;
    }
    return max_lag;
}

EmbedDimResult embed_dim(const ScalarSeries& s, int tau_d, int d_max, int n_ref,
                         std::uint64_t seed) {
    check_series(s, 1000, "embed_dim");
    if (tau_d < 1) fail("embed_dim: delay must be >= 1");
    if (d_max < 1) fail("embed_dim: dimension range is empty");
    EmbedDimResult res;
    for (int d = 1; d <= d_max + 1; ++d) {
        int m = n_embedded(static_cast<int>(s.values.size()), d, tau_d);
        if (m < 100) fail("embed_dim: series too short for requested dimension");
        auto refs = sample_indices(m, n_ref, seed);
        std::vector<double> log_d;
        log_d.reserve(refs.size() * (refs.size() - 1) / 2);
        for (size_t i = 0; i < refs.size(); ++i)
            for (size_t j = i + 1; j < refs.size(); ++j) {
                double d2 = emb_dist2(s.values, refs[i], refs[j], d, tau_d);
                if (d2 > 0.0) log_d.push_back(0.5 * std::log(d2));
            }
        res.slopes.push_back(correlation_slope(log_d));
    }
    for (int d = 1; d <= d_max; ++d) {
        double cur = res.slopes[d - 1], next = res.slopes[d];
        if (std::abs(next - cur) < 0.05 * std::abs(next)) {
            res.d_emb = d + 1;
            res.saturated = true;
            return res;
        }
    }
    res.d_emb = d_max;  // no saturation: noise-like series
    res.saturated = false;
    return res;
}

JacobianSet local_jacobians(const ScalarSeries& s, const Embedding& emb, int k_neighbors,
                            std::uint64_t seed) {
    check_series(s, 1000, "local_jacobians");
    int d = emb.d_emb, tau = emb.tau_d;
    if (d < 1 || tau < 1) fail("local_jacobians: invalid embedding");
    int n_quad = d * (d + 1) / 2;
    int n_par = d + n_quad;
    int k = k_neighbors > 0 ? k_neighbors : 2 * n_par + 2;
    if (k < n_par) fail("local_jacobians: too few neighbors for the fit order");
    int m = n_embedded(static_cast<int>(s.values.size()), d, tau);
    if (m - 1 <= k) fail("local_jacobians: series too short");

    const std::vector<double>& y = s.values;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jitter(-1e-12, 1e-12);

    JacobianSet out;
    out.d_emb = d;
    out.jac.reserve(m - 1);
    out.index.reserve(m - 1);
    double res_acc = 0.0;
    long long res_cnt = 0;

    std::vector<std::pair<double, int>> cand;
    cand.reserve(m);
    for (int n = 0; n + 1 < m; ++n) {
        cand.clear();
        for (int j = 0; j + 1 < m; ++j) {
            if (std::abs(j - n) <= tau) continue;  // Theiler exclusion
            cand.emplace_back(emb_dist2(y, n, j, d, tau), j);
        }
        if (static_cast<int>(cand.size()) < k)
            fail("local_jacobians: not enough neighbor candidates");
        std::partial_sort(cand.begin(), cand.begin() + k, cand.end());

        MatrixXd phi(k, n_par);
        MatrixXd rhs(k, d);
        bool degenerate = false;
        for (int p = 0; p < k; ++p)
            if (cand[p].first <= 0.0) degenerate = true;
        for (int p = 0; p < k; ++p) {
            int j = cand[p].second;
            VectorXd dy(d);
            for (int c = 0; c < d; ++c) {
                dy[c] = y[j + c * tau] - y[n + c * tau];
                if (degenerate) dy[c] += jitter(rng);
            }
            int col = 0;
            for (int c = 0; c < d; ++c) phi(p, col++) = dy[c];
            for (int l = 0; l < d; ++l)
                for (int mm = l; mm < d; ++mm) phi(p, col++) = dy[l] * dy[mm];
            for (int c = 0; c < d; ++c) rhs(p, c) = y[j + 1 + c * tau] - y[n + 1 + c * tau];
        }
        Eigen::ColPivHouseholderQR<MatrixXd> qr(phi);
        if (qr.rank() == 0) {  // every neighbor coincides with the point
            ++out.n_skipped;
            continue;
        }
        // Rank-deficient neighborhoods (data confined to a submanifold) keep the
        // pivoted least-squares solution: coefficients along unsampled directions
        // are zeroed, which leaves the tangent dynamics intact.
        MatrixXd coef = qr.solve(rhs);  // n_par x d, row c of first d rows = dF/dy_c
        out.jac.push_back(coef.topRows(d).transpose());
        out.index.push_back(n);
        res_acc += (phi * coef - rhs).norm();
        ++res_cnt;
    }
    if (out.jac.empty()) fail("local_jacobians: every neighborhood was rank-deficient");
    out.mean_residual = res_acc / static_cast<double>(res_cnt);
    return out;
}

double lambda_L(const JacobianSet& js, int L, int n_starts, std::uint64_t seed) {
    if (L < 1) fail("lambda_L: window must be >= 1");
    if (n_starts < 1) fail("lambda_L: need at least one start");
    if (js.jac.empty()) fail("lambda_L: empty Jacobian set");
    int d = js.d_emb;

    // Map time index to Jacobian slot so windows with skipped points are rejected.
    int max_index = js.index.back();
    std::vector<int> slot(max_index + 1, -1);
    for (size_t i = 0; i < js.index.size(); ++i) slot[js.index[i]] = static_cast<int>(i);
    std::vector<int> valid_starts;
    for (int n = 0; n + L - 1 <= max_index; ++n) {
        bool ok = true;
        for (int p = 0; p < L && ok; ++p) ok = slot[n + p] >= 0;
        if (ok) valid_starts.push_back(n);
    }
    if (valid_starts.empty()) fail("lambda_L: no unbroken window of requested length");

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<size_t> pick(0, valid_starts.size() - 1);
    double acc_lambda = 0.0;
    for (int st = 0; st < n_starts; ++st) {
        int n = valid_starts[pick(rng)];
        MatrixXd prod = MatrixXd::Identity(d, d);
        double log_scale = 0.0;
        for (int p = 0; p < L; ++p) {
            prod = js.jac[slot[n + p]] * prod;
            double f = prod.norm();
            if (f <= 0.0) {
                log_scale = -std::numeric_limits<double>::infinity();
                break;
            }
            prod /= f;
            log_scale += std::log(f);
        }
        double smax = Eigen::JacobiSVD<MatrixXd>(prod).singularValues()(0);
        acc_lambda += (log_scale + std::log(smax)) / L;
    }
    return acc_lambda / n_starts;
}

double lambda_L(const ScalarSeries& s, const Embedding& emb, int L, int n_starts,
                std::uint64_t seed) {
    return lambda_L(local_jacobians(s, emb), L, n_starts, seed);
}

LambdaFit fit_lambda_inf(const std::vector<std::pair<int, double>>& pairs) {
    if (pairs.size() < 14) fail("fit_lambda_inf: need at least 14 (L, lambda) pairs");
    for (const auto& p : pairs)
        if (p.first < 1) fail("fit_lambda_inf: window lengths must be >= 1");

    // For fixed q the model is linear in (lambda_inf, m); scan q, then refine.
    auto rss_for_q = [&pairs](double q, double& lam, double& m) {
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        int n = static_cast<int>(pairs.size());
        for (const auto& p : pairs) {
            double x = std::pow(static_cast<double>(p.first), -q);
            sx += x;
            sy += p.second;
            sxx += x * x;
            sxy += x * p.second;
        }
        double denom = n * sxx - sx * sx;
        if (std::abs(denom) < 1e-300) {
            m = 0.0;
            lam = sy / n;
        } else {
            m = (n * sxy - sx * sy) / denom;
            lam = (sy - m * sx) / n;
        }
        double rss = 0.0;
        for (const auto& p : pairs) {
            double e = p.second - lam - m * std::pow(static_cast<double>(p.first), -q);
            rss += e * e;
        }
        return rss;
    };

    double best_q = 0.05, best_rss = std::numeric_limits<double>::infinity();
    double lam = 0.0, m = 0.0;
    for (double step : {0.05, 0.005, 0.0005}) {
        double lo = std::max(0.05, best_q - 10 * step), hi = std::min(4.0, best_q + 10 * step);
        if (step == 0.05) {
            lo = 0.05;
            hi = 4.0;
        }
        for (double q = lo; q <= hi + 1e-12; q += step) {
            double l, mm;
            double rss = rss_for_q(q, l, mm);
            if (rss < best_rss) {
                best_rss = rss;
                best_q = q;
                lam = l;
                m = mm;
            }
        }
    }
    LambdaFit fit;
    fit.lambda_inf = lam;
    fit.m = m;
    fit.q = best_q;
    fit.residual = std::sqrt(best_rss / pairs.size());
    return fit;
}

Spectrum power_spectrum(const ScalarSeries& s) {
    check_series(s, 2, "power_spectrum");
    int n = static_cast<int>(s.values.size());
    double mean = 0.0;
    for (double v : s.values) mean += v;
    mean /= n;
    int n_pad = 1;
    while (n_pad < n) n_pad <<= 1;
    std::vector<double> padded(n_pad, 0.0);
    for (int i = 0; i < n; ++i) padded[i] = s.values[i] - mean;

    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> out;
    fft.fwd(out, padded);

    Spectrum sp;
    int n_half = n_pad / 2;
    sp.freq.reserve(n_half + 1);
    sp.power.reserve(n_half + 1);
    for (int k = 0; k <= n_half; ++k) {
        sp.freq.push_back(k / (n_pad * s.dt));
        sp.power.push_back(std::norm(out[k]) / n);
    }
    return sp;
}

}  // namespace qtomo
