#pragma once

#include <cstdint>
#include <vector>

#include "sarimg/rng.hpp"
#include "sarimg/scene.hpp"
#include "sarimg/types.hpp"

namespace sarimg::forward {

constexpr double kSpeedOfLight = 299792458.0;

/// Wide-angle spotlight geometry: the full angular range splits into L
/// contiguous sub-apertures of equal span, each sampled at K aspect angles;
/// every look carries the same M-sample frequency sweep.
struct ApertureSpec {
  std::size_t n_subapertures = 1;       // L
  std::size_t angles_per_subaperture = 1;  // K
  std::size_t n_frequencies = 1;        // M
  double theta_start_deg = 0.0;
  double theta_end_deg = 0.0;
  double center_freq_hz = 0.0;
  double bandwidth_hz = 0.0;
  double elevation_deg = 0.0;  // metadata only, not part of the 2D model
  double c_mps = kSpeedOfLight;

  void validate() const;

  double subaperture_span_deg() const {
    return (theta_end_deg - theta_start_deg) /
           static_cast<double>(n_subapertures);
  }

  /// Aspect angles are centered within each sub-aperture:
  /// theta(l, k) = start + l*span + (k + 1/2) * span / K.
  double theta_deg(std::size_t l, std::size_t k) const;
  std::vector<double> angles_deg(std::size_t l) const;

  /// M samples spanning [fc - B/2, fc + B/2] inclusive (M = 1 sits at fc).
  std::vector<double> frequencies_hz() const;
};

/// Round-trip delay 2 (x cos(theta) + y sin(theta)) / c, in seconds.
double phase_delay(double x, double y, double theta_deg, double c_mps);

/// M x N matrix with entry (m, n) = exp(-j 2 pi gamma_m phase_delay(n)).
/// Every entry has unit magnitude.
CMatrix build_steering(const scene::SceneGrid& grid,
                       const std::vector<double>& gammas_hz, double theta_deg,
                       double c_mps = kSpeedOfLight);

/// Compressed-sensing row selection: per sub-aperture, a random J-subset of
/// the M frequency samples, shared by all K angle blocks of that
/// sub-aperture. Deterministic per seed.
struct SelectionPlan {
  double fraction = 1.0;
  std::size_t kept_per_block = 0;  // J
  std::uint64_t seed = 0;
  std::vector<std::vector<std::uint32_t>> rows;  // per l, sorted ascending
};

SelectionPlan make_selection(std::size_t n_frequencies, std::size_t n_angles,
                             std::size_t n_subapertures, double fraction,
                             std::uint64_t seed);

/// Stacked, row-selected operator for sub-aperture l: KJ x N, angle-major
/// blocks, kept frequency rows in ascending order within each block.
CMatrix build_subaperture_operator(const scene::SceneGrid& grid,
                                   const ApertureSpec& spec,
                                   const SelectionPlan& plan, std::size_t l);

struct Measurements {
  CVec y;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

struct SubApertureSim {
  CMatrix theta_op;
  Measurements meas;
};

/// Adds circularly symmetric complex Gaussian noise, sigma per component.
void add_noise(CVec& y, double sigma, Rng& rng);

/// Per-component sigma giving the requested SNR (dB) against the mean
/// per-sample energy of the noiseless measurements.
double noise_sigma_for_snr(const std::vector<CVec>& noiseless, double snr_db);

/// End-to-end synthesis for all sub-apertures: stack, select, add noise.
std::vector<SubApertureSim> simulate(const scene::SceneGrid& grid,
                                     const ApertureSpec& spec,
                                     const scene::GroundTruth& truth,
                                     const SelectionPlan& plan,
                                     double noise_sigma, std::uint64_t seed);

// Substream tags for seed derivation (shared with the pipeline).
namespace seed_tag {
constexpr std::uint64_t selection = 0x73656c65637400ULL;
constexpr std::uint64_t noise = 0x6e6f69736500ULL;
constexpr std::uint64_t scene = 0x7363656e6500ULL;
}  // namespace seed_tag

}  // namespace sarimg::forward
