#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sarimg/forward.hpp"
#include "sarimg/graph.hpp"
#include "sarimg/scene.hpp"
#include "sarimg/solver.hpp"
#include "sarimg/types.hpp"

namespace sarimg::pipeline {

enum class Method { bp, tv2d, gfl_nltv, gfl_entv };

std::string_view method_name(Method m);
Method parse_method(std::string_view name);

struct SceneSpec {
  enum class Kind { points, rectangle, lshape };
  Kind kind = Kind::points;
  std::size_t nx = 32;
  std::size_t ny = 32;
  double extent = 1.0;
  std::vector<scene::PointTarget> points;
  scene::Rect rect;
  double thickness = 0.0;  // lshape arm width
  scene::AmplitudeLaw law = scene::AmplitudeLaw::constant;
  double amplitude = 1.0;
};

struct GraphConfig {
  double sigma = 0.0;      // Gaussian kernel scale (EN and NLTV)
  double en_cutoff = 0.0;  // meters
  std::size_t nltv_patch = 3;
  std::size_t nltv_window = 21;
  double nltv_patch_cutoff = std::numeric_limits<double>::infinity();
  bool nltv_magnitude_only = false;
};

struct NoiseConfig {
  std::optional<double> sigma;
  std::optional<double> snr_db;
};

struct ExperimentConfig {
  SceneSpec scene;
  forward::ApertureSpec aperture;
  Method method = Method::bp;
  GraphConfig graph;
  solver::GflParams solver;
  double cs_fraction = 1.0;
  NoiseConfig noise;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  std::string out_dir;  // empty: compute only, emit nothing
  bool dump_measurements = false;
  bool dump_graph = false;
};

struct PhaseTimers {
  double forward_s = 0.0;
  double graph_build_s = 0.0;
  double cache_build_s = 0.0;
  double iterate_s = 0.0;
  std::size_t graph_builds = 0;
};

struct Reconstruction {
  std::vector<CVec> per_subaperture;
  std::vector<double> fused;  // nonnegative intensities, length N
  std::vector<CVec> measurements;
  std::vector<std::size_t> kept_rows_per_block;  // J per sub-aperture
  double noise_sigma = 0.0;
  std::vector<solver::Diagnostics> diagnostics;
  PhaseTimers timers;
  double bp_scale = 1.0;
  std::optional<graph::GraphModel> shared_graph;
  std::vector<graph::GraphModel> per_sub_graphs;  // NLTV, kept only for dumps
};

struct MetricsReport {
  double mse = 0.0;
  bool mse_is_absolute = false;  // true when the truth raster is all-zero
  double hit_rate = 0.0;
  bool hit_rate_defined = true;
  double target_background_ratio = 0.0;
  bool background_nonzero = true;
  std::size_t support_size = 0;
  std::vector<std::size_t> iterations;
  double total_wall_s = 0.0;
};

/// Per-pixel max over sub-apertures of |estimate|^2.
std::vector<double> fuse(const std::vector<CVec>& estimates);

MetricsReport compute_metrics(const Reconstruction& recon,
                              const scene::GroundTruth& truth,
                              const scene::SceneGrid& grid);

scene::GroundTruth build_scene(const SceneSpec& spec,
                               const scene::SceneGrid& grid,
                               std::uint64_t master_seed);

struct ExperimentResult {
  scene::SceneGrid grid;
  scene::GroundTruth truth;
  Reconstruction recon;
  MetricsReport metrics;
};

/// Runs the full experiment: scene, forward synthesis, per-sub-aperture
/// reconstruction (parallel up to config.workers), fusion, metrics. Writes
/// the output file set when out_dir is nonempty; config_echo is stored
/// alongside for provenance.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                const std::string& config_echo = "");

void emit_outputs(const ExperimentResult& result, const ExperimentConfig& config,
                  const std::string& config_echo, const std::string& dir);

}  // namespace sarimg::pipeline
