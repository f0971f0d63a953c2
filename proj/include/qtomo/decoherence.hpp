#pragma once

#include "qtomo/fock.hpp"

namespace qtomo {

struct DampingParams {
    enum class Kind { amplitude, phase };
    Kind kind = Kind::amplitude;
    double rate = 0.0;  // Gamma (photon loss) or Gamma_p (dephasing), 1/time
    double tau = 0.0;   // elapsed time

    double gt() const;  // rate * tau, validated nonnegative
};

// Exact closed-form channels in the truncated Fock space.  Amplitude decay only
// moves population downward, so the finite series over r is exact, not an
// approximation, and the trace is preserved identically.
DensityMatrix amplitude_damp_single(const DensityMatrix& rho, const DampingParams& p);
DensityMatrix phase_damp_single(const DensityMatrix& rho, const DampingParams& p);

// Same channels applied to one Fock subsystem of a composite state.
DensityMatrix amplitude_damp_mode(const DensityMatrix& rho, int sub, double gamma_tau);
DensityMatrix phase_damp_mode(const DensityMatrix& rho, int sub, double gamma_tau);

// Damp subsystem A (index 0) of a two-mode state with either channel.
DensityMatrix damp_bipartite_modeA(const DensityMatrix& rho, const DampingParams& p);

}  // namespace qtomo
