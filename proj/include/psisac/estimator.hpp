#ifndef PSISAC_ESTIMATOR_HPP
#define PSISAC_ESTIMATOR_HPP

#include <cstddef>
#include <vector>

#include "psisac/types.hpp"
#include "psisac/waveform.hpp"

namespace psisac {

/// Receiver output: one full-band CFR estimate per transmitter, plus the
/// joint CIR (PS_ISAC only; empty for CI_ISAC) kept for inspection.
struct EstimationResult {
    std::vector<cvec> per_tx_cfr;
    cvec joint_cir;
};

/// Per-bin least squares on the occupied bins: h(i) = y_f(occupied[i]) /
/// known_pilots(occupied[i]). Result is compacted to size |occupied|.
/// A zero pilot on an occupied bin throws std::domain_error.
cvec ls_estimate(const cvec& y_f, const cvec& known_pilots,
                 const std::vector<std::size_t>& occupied);

/// PS-ISAC separation: the joint CIR (unitary IDFT of the joint estimate)
/// carries transmitter u's CIR in window [(u-1)*n_cp, u*n_cp). Each window
/// is cut out, shifted back to the origin (undoing the transmit phase ramp)
/// and forward-transformed into that transmitter's full-band CFR.
EstimationResult separate_ps_isac(const cvec& h_f_joint,
                                  const SystemConfig& cfg);

/// CI-ISAC baseline: per transmitter, LS on its comb, inverse transform of
/// the comb estimate to an N*PR-tap CIR, zero-pad to length N and forward
/// transform back - exact DFT interpolation whenever the channel has at
/// most N*PR taps. joint_cir is left empty.
EstimationResult estimate_ci_isac(const cvec& y_f, const PilotGrid& pilots,
                                  const SystemConfig& cfg);

/// Full receiver: CP removal -> unitary DFT -> joint LS against the shared
/// base pilots followed by separate_ps_isac (PS_ISAC), or estimate_ci_isac
/// (CI_ISAC). Input length must be n_fft + n_cp.
EstimationResult run_receiver(const cvec& y_t_with_cp, const PilotGrid& pilots,
                              const SystemConfig& cfg);

} // namespace psisac

#endif
