#include "sarimg/forward.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "sarimg/kernels.hpp"

namespace sarimg::forward {
namespace {

constexpr double kPi = 3.14159265358979323846264338328;

double deg_to_rad(double deg) { return deg * (kPi / 180.0); }

}  // namespace

void ApertureSpec::validate() const {
  if (n_subapertures < 1 || angles_per_subaperture < 1 || n_frequencies < 1) {
    throw std::invalid_argument("ApertureSpec: L, K, M must all be >= 1");
  }
  if (!(theta_end_deg > theta_start_deg)) {
    throw std::invalid_argument("ApertureSpec: empty angular range");
  }
  if (!(center_freq_hz > 0.0)) {
    throw std::invalid_argument("ApertureSpec: center frequency must be positive");
  }
  if (bandwidth_hz < 0.0 || (n_frequencies > 1 && bandwidth_hz == 0.0)) {
    throw std::invalid_argument("ApertureSpec: bandwidth must be positive for M > 1");
  }
  if (!(c_mps > 0.0)) {
    throw std::invalid_argument("ApertureSpec: propagation speed must be positive");
  }
}

double ApertureSpec::theta_deg(std::size_t l, std::size_t k) const {
  const double span = subaperture_span_deg();
  return theta_start_deg + static_cast<double>(l) * span +
         (static_cast<double>(k) + 0.5) * span /
             static_cast<double>(angles_per_subaperture);
}

std::vector<double> ApertureSpec::angles_deg(std::size_t l) const {
  std::vector<double> out(angles_per_subaperture);
  for (std::size_t k = 0; k < angles_per_subaperture; ++k) out[k] = theta_deg(l, k);
  return out;
}

std::vector<double> ApertureSpec::frequencies_hz() const {
  std::vector<double> out(n_frequencies);
  if (n_frequencies == 1) {
    out[0] = center_freq_hz;
    return out;
  }
  const double lo = center_freq_hz - 0.5 * bandwidth_hz;
  const double step = bandwidth_hz / static_cast<double>(n_frequencies - 1);
  for (std::size_t m = 0; m < n_frequencies; ++m) {
    out[m] = lo + static_cast<double>(m) * step;
  }
  return out;
}

double phase_delay(double x, double y, double theta_deg, double c_mps) {
  const double t = deg_to_rad(theta_deg);
  return 2.0 * (x * std::cos(t) + y * std::sin(t)) / c_mps;
}

CMatrix build_steering(const scene::SceneGrid& grid,
                       const std::vector<double>& gammas_hz, double theta_deg,
                       double c_mps) {
  if (grid.size() == 0 || gammas_hz.empty()) {
    throw std::invalid_argument("build_steering: empty grid or frequency list");
  }
  const std::size_t n = grid.size();
  std::vector<double> delay(n);
  for (std::size_t i = 0; i < n; ++i) {
    delay[i] = phase_delay(grid.x[i], grid.y[i], theta_deg, c_mps);
  }
  CMatrix mat(gammas_hz.size(), n);
  for (std::size_t m = 0; m < gammas_hz.size(); ++m) {
    const double w = -2.0 * kPi * gammas_hz[m];
    cplx* row = mat.row(m);
    for (std::size_t i = 0; i < n; ++i) {
      const double ang = w * delay[i];
      row[i] = {std::cos(ang), std::sin(ang)};
    }
  }
  return mat;
}

SelectionPlan make_selection(std::size_t n_frequencies, std::size_t n_angles,
                             std::size_t n_subapertures, double fraction,
                             std::uint64_t seed) {
  if (n_frequencies < 1 || n_angles < 1 || n_subapertures < 1) {
    throw std::invalid_argument("make_selection: counts must be >= 1");
  }
  if (!(fraction > 0.0) || fraction > 1.0) {
    throw std::invalid_argument("make_selection: fraction must be in (0, 1]");
  }
  const auto kept = static_cast<std::size_t>(
      std::lround(fraction * static_cast<double>(n_frequencies)));
  if (kept < 1) {
    throw std::invalid_argument("make_selection: fraction keeps no rows (J < 1)");
  }

  SelectionPlan plan;
  plan.fraction = fraction;
  plan.kept_per_block = std::min(kept, n_frequencies);
  plan.seed = seed;
  plan.rows.resize(n_subapertures);
  for (std::size_t l = 0; l < n_subapertures; ++l) {
    // partial Fisher-Yates over the frequency indices, then sort
    std::vector<std::uint32_t> idx(n_frequencies);
    std::iota(idx.begin(), idx.end(), 0u);
    Rng rng(substream_seed(seed, seed_tag::selection, l));
    for (std::size_t j = 0; j < plan.kept_per_block; ++j) {
      const std::size_t pick = j + rng.uniform_index(n_frequencies - j);
      std::swap(idx[j], idx[pick]);
    }
    idx.resize(plan.kept_per_block);
    std::sort(idx.begin(), idx.end());
    plan.rows[l] = std::move(idx);
  }
  return plan;
}

CMatrix build_subaperture_operator(const scene::SceneGrid& grid,
                                   const ApertureSpec& spec,
                                   const SelectionPlan& plan, std::size_t l) {
  spec.validate();
  if (l >= spec.n_subapertures || l >= plan.rows.size()) {
    throw std::invalid_argument("build_subaperture_operator: bad sub-aperture index");
  }
  const auto gammas = spec.frequencies_hz();
  const auto& kept = plan.rows[l];
  for (auto m : kept) {
    if (m >= gammas.size()) {
      throw std::invalid_argument("build_subaperture_operator: selection plan does not match M");
    }
  }
  const std::size_t n = grid.size();
  const std::size_t j = kept.size();
  const std::size_t k_angles = spec.angles_per_subaperture;

  std::vector<double> kept_gammas(j);
  for (std::size_t i = 0; i < j; ++i) kept_gammas[i] = gammas[kept[i]];

  CMatrix op(k_angles * j, n);
  for (std::size_t k = 0; k < k_angles; ++k) {
    const CMatrix block =
        build_steering(grid, kept_gammas, spec.theta_deg(l, k), spec.c_mps);
    std::copy(block.data(), block.data() + j * n, op.row(k * j));
  }
  return op;
}

void add_noise(CVec& y, double sigma, Rng& rng) {
  if (sigma < 0.0) throw std::invalid_argument("add_noise: negative sigma");
  if (sigma == 0.0) return;
  for (auto& v : y) v += rng.circular_gaussian(sigma);
}

double noise_sigma_for_snr(const std::vector<CVec>& noiseless, double snr_db) {
  const auto& k = kernels::active();
  double energy = 0.0;
  std::size_t count = 0;
  for (const auto& y : noiseless) {
    energy += k.sum_sq(y.data(), y.size());
    count += y.size();
  }
  if (count == 0 || energy == 0.0) return 0.0;
  const double mean_power = energy / static_cast<double>(count);
  // complex noise power is 2 sigma^2
  return std::sqrt(mean_power / (2.0 * std::pow(10.0, snr_db / 10.0)));
}

std::vector<SubApertureSim> simulate(const scene::SceneGrid& grid,
                                     const ApertureSpec& spec,
                                     const scene::GroundTruth& truth,
                                     const SelectionPlan& plan,
                                     double noise_sigma, std::uint64_t seed) {
  spec.validate();
  if (truth.size() != grid.size()) {
    throw std::invalid_argument("simulate: ground truth length " +
                                std::to_string(truth.size()) +
                                " does not match grid N " +
                                std::to_string(grid.size()));
  }
  if (!truth.isotropic() && truth.values.size() != spec.n_subapertures) {
    throw std::invalid_argument("simulate: anisotropic truth must carry one raster per sub-aperture");
  }
  if (plan.rows.size() != spec.n_subapertures) {
    throw std::invalid_argument("simulate: selection plan does not match L");
  }

  std::vector<SubApertureSim> out;
  out.reserve(spec.n_subapertures);
  for (std::size_t l = 0; l < spec.n_subapertures; ++l) {
    SubApertureSim sim;
    sim.theta_op = build_subaperture_operator(grid, spec, plan, l);
    const CVec& s = truth.for_subaperture(l);
    sim.meas.y.resize(sim.theta_op.rows());
    kernels::active().matvec(sim.theta_op.data(), sim.theta_op.rows(),
                             sim.theta_op.cols(), s.data(), sim.meas.y.data());
    sim.meas.noise_sigma = noise_sigma;
    sim.meas.seed = substream_seed(seed, seed_tag::noise, l);
    Rng rng(sim.meas.seed);
    add_noise(sim.meas.y, noise_sigma, rng);
    out.push_back(std::move(sim));
  }
  return out;
}

}  // namespace sarimg::forward
