#pragma once

#include <cstdint>
#include <vector>

namespace qrng::source {

/// Attenuated coherent-state source settings.
struct SourceParams {
  double wavelength_m = 0.0;
  double linewidth_hz = 0.0;
  double power_at_reference_w = 0.0;
  double transmission_factor = 0.0;  // in [0,1]
  double mean_photon_number = 0.0;   // |alpha|^2

  /// Throws std::domain_error when a field is outside its valid range.
  void validate() const;
};

/// Poisson photon-number distribution p_n = e^-mean mean^n / n!, materialized
/// up to a cutoff. `tail_mass` is the probability mass beyond the cutoff.
struct PhotonNumberDistribution {
  double mean = 0.0;
  std::vector<double> probabilities;  // index n = 0..cutoff
  double tail_mass = 0.0;
};

struct ArrivalTimes {
  std::vector<double> times;  // seconds, strictly increasing, in [0, duration)
  double duration_s = 0.0;
  double rate_hz = 0.0;
};

PhotonNumberDistribution photon_number_distribution(double mean, int cutoff);

/// Adaptive cutoff: smallest n with tail mass below 1e-12.
PhotonNumberDistribution photon_number_distribution(double mean);

/// tau = sqrt(2 ln 2) / (pi * linewidth).
double coherence_time_s(double linewidth_hz);

/// R = lambda * P / (h c).
double photon_rate_hz(double input_power_w, double wavelength_m);

double attenuated_power_w(double reference_power_w, double transmission_factor);

/// Homogeneous Poisson process on [0, duration): exponential inter-arrival
/// times with mean 1/rate. Deterministic for a fixed seed.
ArrivalTimes sample_poisson_arrivals(double rate_hz, double duration_s,
                                     std::uint64_t seed);

}  // namespace qrng::source
