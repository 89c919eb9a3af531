#include "qrng/photon_source.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qrng/constants.hpp"
#include "qrng/rng.hpp"

namespace qrng::source {

void SourceParams::validate() const {
  if (!(wavelength_m > 0)) throw std::domain_error("wavelength must be > 0");
  if (!(linewidth_hz > 0)) throw std::domain_error("linewidth must be > 0");
  if (power_at_reference_w < 0)
    throw std::domain_error("reference power must be >= 0");
  if (transmission_factor < 0 || transmission_factor > 1)
    throw std::domain_error("transmission factor must be in [0,1]");
  if (mean_photon_number < 0)
    throw std::domain_error("mean photon number must be >= 0");
}

PhotonNumberDistribution photon_number_distribution(double mean, int cutoff) {
  if (mean < 0) throw std::domain_error("mean must be >= 0");
  if (cutoff < 1) throw std::domain_error("cutoff must be >= 1");
  PhotonNumberDistribution dist;
  dist.mean = mean;
  dist.probabilities.resize(static_cast<std::size_t>(cutoff) + 1);
  double term = std::exp(-mean);  // p_0
  double sum = 0.0;
  for (int n = 0; n <= cutoff; ++n) {
    dist.probabilities[static_cast<std::size_t>(n)] = term;
    sum += term;
    term *= mean / static_cast<double>(n + 1);
  }
  dist.tail_mass = std::max(0.0, 1.0 - sum);
  return dist;
}

PhotonNumberDistribution photon_number_distribution(double mean) {
  if (mean < 0) throw std::domain_error("mean must be >= 0");
  double term = std::exp(-mean);
  double sum = term;
  int cutoff = 1;
  for (;; ++cutoff) {
    term *= mean / static_cast<double>(cutoff);
    sum += term;
    if (1.0 - sum < 1e-12) break;
    if (cutoff > 2000)
      throw std::domain_error("mean too large for adaptive cutoff");
  }
  return photon_number_distribution(mean, cutoff);
}

double coherence_time_s(double linewidth_hz) {
  if (!(linewidth_hz > 0)) throw std::domain_error("linewidth must be > 0");
  return std::sqrt(2.0 * std::numbers::ln2) / (std::numbers::pi * linewidth_hz);
}

double photon_rate_hz(double input_power_w, double wavelength_m) {
  if (!(wavelength_m > 0)) throw std::domain_error("wavelength must be > 0");
  if (input_power_w < 0) throw std::domain_error("power must be >= 0");
  return wavelength_m * input_power_w / (kPlanckJs * kSpeedOfLightMs);
}

double attenuated_power_w(double reference_power_w, double transmission_factor) {
  if (reference_power_w < 0) throw std::domain_error("power must be >= 0");
  if (transmission_factor < 0 || transmission_factor > 1)
    throw std::domain_error("transmission factor must be in [0,1]");
  return reference_power_w * transmission_factor;
}

ArrivalTimes sample_poisson_arrivals(double rate_hz, double duration_s,
                                     std::uint64_t seed) {
  if (rate_hz < 0) throw std::domain_error("rate must be >= 0");
  if (!(duration_s > 0)) throw std::domain_error("duration must be > 0");
  ArrivalTimes arrivals;
  arrivals.duration_s = duration_s;
  arrivals.rate_hz = rate_hz;
  if (rate_hz == 0) return arrivals;
  arrivals.times.reserve(static_cast<std::size_t>(rate_hz * duration_s * 1.05) + 16);
  Xoshiro256ss rng(seed);
  const double mean_gap = 1.0 / rate_hz;
  double t = rng.next_exponential(mean_gap);
  while (t < duration_s) {
    arrivals.times.push_back(t);
    t += rng.next_exponential(mean_gap);
  }
  return arrivals;
}

}  // namespace qrng::source
