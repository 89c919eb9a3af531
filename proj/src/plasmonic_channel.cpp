#include "qrng/plasmonic_channel.hpp"

#include <cmath>
#include <stdexcept>

namespace qrng::channel {

namespace {
bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }
}  // namespace

void ChannelParams::validate() const {
  if (!is_probability(grating_efficiency))
    throw std::domain_error("grating efficiency must be in [0,1]");
  if (!is_probability(transmit_prob) || !is_probability(reflect_prob) ||
      !is_probability(loss_prob) || !is_probability(output_survival))
    throw std::domain_error("splitting probabilities must be in [0,1]");
  if (std::abs(transmit_prob + reflect_prob + loss_prob - 1.0) > 1e-12)
    throw std::domain_error("transmit + reflect + loss must sum to 1");
  if (!(decay_length_um > 0))
    throw std::domain_error("decay length must be > 0");
  if (lead_in_length_um < 0)
    throw std::domain_error("lead-in length must be >= 0");
}

double propagation_transmission(double length_um, double decay_length_um) {
  if (!(decay_length_um > 0))
    throw std::domain_error("decay length must be > 0");
  if (length_um < 0) throw std::domain_error("length must be >= 0");
  return std::exp(-length_um / decay_length_um);
}

double input_survival_probability(const ChannelParams& params) {
  return params.grating_efficiency *
         propagation_transmission(params.lead_in_length_um,
                                  params.decay_length_um);
}

SplitOutcome split_excitation(const ChannelParams& params, Xoshiro256ss& rng) {
  params.validate();
  const double u = rng.next_unit();
  const double p0 = params.transmit_prob * params.output_survival;
  const double p1 = params.reflect_prob * params.output_survival;
  if (u < p0) return SplitOutcome::TransmittedTo0;
  if (u < p0 + p1) return SplitOutcome::ReflectedTo1;
  return SplitOutcome::Lost;
}

RegimeReport check_operating_regime(double arrival_rate_hz,
                                    double coherence_time_s,
                                    double detection_rate_per_detector_hz,
                                    double dead_time_s) {
  if (!(arrival_rate_hz > 0) || !(coherence_time_s > 0) ||
      !(detection_rate_per_detector_hz > 0) || !(dead_time_s > 0))
    throw std::domain_error("regime check requires positive inputs");
  RegimeReport report;
  report.excitation_ratio = arrival_rate_hz * coherence_time_s;
  report.single_excitation_ok = report.excitation_ratio < 1e-2;
  report.dead_time_ratio = detection_rate_per_detector_hz * dead_time_s;
  report.dead_time_ok = report.dead_time_ratio < 1e-1;
  return report;
}

BranchRates branch_rates(const ChannelParams& params, double input_rate_hz) {
  params.validate();
  if (input_rate_hz < 0) throw std::domain_error("input rate must be >= 0");
  const double at_splitter = input_rate_hz * input_survival_probability(params);
  BranchRates rates;
  rates.to_output0_hz = at_splitter * params.transmit_prob * params.output_survival;
  rates.to_output1_hz = at_splitter * params.reflect_prob * params.output_survival;
  rates.lost_hz = input_rate_hz - rates.to_output0_hz - rates.to_output1_hz;
  return rates;
}

}  // namespace qrng::channel
