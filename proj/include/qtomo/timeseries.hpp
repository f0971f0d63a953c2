#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qtomo/fock.hpp"

namespace qtomo {

struct ScalarSeries {
    std::vector<double> values;
    double dt = 1.0;
};

struct Embedding {
    int tau_d = 1;  // delay in samples
    int d_emb = 1;  // reconstruction dimension
};

// Delay from the first local minimum of the binned mutual information I(T);
// falls back to the 1/e autocorrelation crossing when I(T) decays monotonically.
// max_lag <= 0 selects min(200, N/10).
int mi_delay(const ScalarSeries& s, int max_lag = 0, int n_bins = 32);

struct EmbedDimResult {
    int d_emb = 0;
    bool saturated = false;        // false: slope kept growing up to d_max (noise-like)
    std::vector<double> slopes;    // correlation-integral slope for d = 1..d_max+1
};

// Embedding dimension from correlation-integral slopes: the smallest d whose
// slope changes by under 5% when the dimension is raised, plus one.  Distances
// are sampled over n_ref reference points; the slope is fit over the central
// two decades of the log-distance range.
EmbedDimResult embed_dim(const ScalarSeries& s, int tau_d, int d_max = 8, int n_ref = 1000,
                         std::uint64_t seed = 12345);

struct JacobianSet {
    int d_emb = 0;
    std::vector<MatrixXd> jac;  // one per retained phase-space point
    std::vector<int> index;     // time index of each retained point
    int n_skipped = 0;          // rank-deficient neighborhoods dropped
    double mean_residual = 0.0;
};

// Local linearizations of the reconstructed map: second-order least-squares
// fit over k nearest neighbors (exact scan, Theiler exclusion tau_d).
// k <= 0 selects 2*(d + d(d+1)/2) + 2.
JacobianSet local_jacobians(const ScalarSeries& s, const Embedding& emb, int k_neighbors = 0,
                            std::uint64_t seed = 99);

// Maximal local Lyapunov exponent over window L: average over random starts of
// (1/L) ln sigma_max(DF^L), the product kept stable by running renormalization.
double lambda_L(const JacobianSet& js, int L, int n_starts = 100, std::uint64_t seed = 7);
double lambda_L(const ScalarSeries& s, const Embedding& emb, int L, int n_starts = 100,
                std::uint64_t seed = 7);

struct LambdaFit {
    double lambda_inf = 0.0;
    double m = 0.0;
    double q = 0.0;
    double residual = 0.0;  // rms misfit
};

// Fit lambda_L = lambda_inf + m / L^q over at least 14 (L, lambda_L) pairs.
LambdaFit fit_lambda_inf(const std::vector<std::pair<int, double>>& pairs);

struct Spectrum {
    std::vector<double> freq;   // cycles per unit time
    std::vector<double> power;  // |X_k|^2 / n, one-sided
};

// Periodogram of the mean-removed series, zero-padded to a power of two.
Spectrum power_spectrum(const ScalarSeries& s);

}  // namespace qtomo
