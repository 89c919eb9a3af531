#pragma once

#include "qrng/rng.hpp"

namespace qrng::channel {

/// Scalar loss and splitting budget of the lossy two-output waveguide
/// splitter. transmit/reflect/loss describe the splitting region itself and
/// must sum to 1; output_survival is the combined post-split propagation and
/// out-coupling survival probability, symmetric across the two arms.
struct ChannelParams {
  double grating_efficiency = 0.0;
  double lead_in_length_um = 0.0;
  double decay_length_um = 1.0;
  double transmit_prob = 0.0;
  double reflect_prob = 0.0;
  double loss_prob = 0.0;
  double output_survival = 1.0;

  void validate() const;  // throws std::domain_error
};

enum class SplitOutcome { TransmittedTo0, ReflectedTo1, Lost };

/// e^(-length / decay_length).
double propagation_transmission(double length_um, double decay_length_um);

/// Probability that an input photon becomes a guided excitation that reaches
/// the splitting region: grating efficiency times lead-in transmission.
double input_survival_probability(const ChannelParams& params);

/// Samples the single-excitation splitting trichotomy. Outcome probabilities
/// are (T*s, R*s, 1 - (T+R)*s) with s = output_survival.
SplitOutcome split_excitation(const ChannelParams& params, Xoshiro256ss& rng);

struct RegimeReport {
  double excitation_ratio = 0.0;  // arrival rate x coherence time
  bool single_excitation_ok = false;
  double dead_time_ratio = 0.0;  // detection rate x dead time
  bool dead_time_ok = false;
};

/// Two operating-regime ratios with pass flags: the source must stay in the
/// single-excitation regime (ratio < 1e-2) and each detector well below dead
/// time saturation (ratio < 1e-1).
RegimeReport check_operating_regime(double arrival_rate_hz,
                                    double coherence_time_s,
                                    double detection_rate_per_detector_hz,
                                    double dead_time_s);

struct BranchRates {
  double to_output0_hz = 0.0;
  double to_output1_hz = 0.0;
  double lost_hz = 0.0;
};

/// Thinned Poisson rates of the labeled arrival streams leaving the channel
/// for a given photon input rate. Poisson thinning is exact: sampling the
/// branch streams at these rates is statistically identical to sampling every
/// input photon and splitting it event by event.
BranchRates branch_rates(const ChannelParams& params, double input_rate_hz);

}  // namespace qrng::channel
