#include "sarimg/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "sarimg/config.hpp"
#include "sarimg/io.hpp"
#include "sarimg/kernels.hpp"

namespace sarimg::pipeline {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct SubApertureOutcome {
  CVec estimate;
  CVec measurement;
  solver::Diagnostics diagnostics;
  double graph_build_s = 0.0;
  double cache_build_s = 0.0;
  double iterate_s = 0.0;
  std::size_t graph_builds = 0;
  graph::GraphModel nltv_graph;  // retained only when dumping
};

void validate(const ExperimentConfig& cfg) {
  if (cfg.workers < 1) throw std::invalid_argument("run: workers must be >= 1");
  if (cfg.method == Method::gfl_entv) {
    if (!(cfg.graph.sigma > 0.0) || !(cfg.graph.en_cutoff > 0.0)) {
      throw std::invalid_argument(
          "run: gfl-entv needs positive graph.sigma and graph.en_cutoff");
    }
  }
  if (cfg.method == Method::gfl_nltv) {
    if (!(cfg.graph.sigma > 0.0)) {
      throw std::invalid_argument("run: gfl-nltv needs positive graph.sigma");
    }
    if (cfg.graph.nltv_patch % 2 == 0 || cfg.graph.nltv_window % 2 == 0) {
      throw std::invalid_argument("run: NLTV patch and window sizes must be odd");
    }
  }
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::bp: return "bp";
    case Method::tv2d: return "tv2d";
    case Method::gfl_nltv: return "gfl-nltv";
    case Method::gfl_entv: return "gfl-entv";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  if (name == "bp") return Method::bp;
  if (name == "tv2d") return Method::tv2d;
  if (name == "gfl-nltv") return Method::gfl_nltv;
  if (name == "gfl-entv") return Method::gfl_entv;
  throw std::invalid_argument("unknown method '" + std::string(name) +
                              "' (expected bp|tv2d|gfl-nltv|gfl-entv)");
}

scene::GroundTruth build_scene(const SceneSpec& spec,
                               const scene::SceneGrid& grid,
                               std::uint64_t master_seed) {
  const std::uint64_t seed =
      substream_seed(master_seed, forward::seed_tag::scene, 0);
  switch (spec.kind) {
    case SceneSpec::Kind::points:
      return scene::make_point_targets(grid, spec.points);
    case SceneSpec::Kind::rectangle:
      return scene::make_extended_target(grid, spec.rect, spec.law,
                                         spec.amplitude, seed);
    case SceneSpec::Kind::lshape:
      return scene::make_extended_target(
          grid, scene::LShape{spec.rect, spec.thickness}, spec.law,
          spec.amplitude, seed);
  }
  throw std::invalid_argument("build_scene: bad scene kind");
}

std::vector<double> fuse(const std::vector<CVec>& estimates) {
  if (estimates.empty()) throw std::invalid_argument("fuse: no sub-aperture estimates");
  const std::size_t n = estimates.front().size();
  std::vector<double> fused(n, 0.0);
  for (const auto& est : estimates) {
    if (est.size() != n) throw std::invalid_argument("fuse: estimate length mismatch");
    kernels::active().max_abs2_accum(est.data(), fused.data(), n);
  }
  return fused;
}

MetricsReport compute_metrics(const Reconstruction& recon,
                              const scene::GroundTruth& truth,
                              const scene::SceneGrid& grid) {
  const std::size_t n = grid.size();
  if (recon.fused.size() != n || truth.size() != n) {
    throw std::invalid_argument("compute_metrics: raster size mismatch");
  }

  // reference intensity raster: max over sub-apertures of |truth|^2
  std::vector<double> ref(n, 0.0);
  for (std::size_t li = 0; li < truth.values.size(); ++li) {
    kernels::active().max_abs2_accum(truth.values[li].data(), ref.data(), n);
  }

  MetricsReport report;
  double err = 0.0, ref_norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = recon.fused[i] - ref[i];
    err += d * d;
    ref_norm += ref[i] * ref[i];
  }
  if (ref_norm > 0.0) {
    report.mse = err / ref_norm;
  } else {
    report.mse = err;
    report.mse_is_absolute = true;
  }

  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < n; ++i) {
    if (ref[i] != 0.0) support.push_back(i);
  }
  report.support_size = support.size();

  if (support.empty()) {
    report.hit_rate = 0.0;
    report.hit_rate_defined = false;
  } else {
    // top-|support| cells by fused intensity, ties broken by index
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (recon.fused[a] != recon.fused[b]) return recon.fused[a] > recon.fused[b];
      return a < b;
    });
    std::vector<char> is_support(n, 0);
    for (auto i : support) is_support[i] = 1;
    std::size_t hits = 0;
    for (std::size_t r = 0; r < support.size(); ++r) {
      if (is_support[order[r]]) ++hits;
    }
    report.hit_rate = static_cast<double>(hits) / static_cast<double>(support.size());
  }

  double on = 0.0, off = 0.0;
  std::size_t off_count = n - support.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (ref[i] != 0.0) {
      on += recon.fused[i];
    } else {
      off += recon.fused[i];
    }
  }
  const double on_mean = support.empty() ? 0.0 : on / static_cast<double>(support.size());
  const double off_mean = off_count == 0 ? 0.0 : off / static_cast<double>(off_count);
  if (off_mean > 0.0) {
    report.target_background_ratio = on_mean / off_mean;
  } else {
    report.target_background_ratio = std::numeric_limits<double>::infinity();
    report.background_nonzero = false;
  }

  for (const auto& d : recon.diagnostics) report.iterations.push_back(d.iterations);
  return report;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const std::string& config_echo) {
  validate(cfg);
  cfg.aperture.validate();
  if (cfg.method != Method::bp) cfg.solver.validate();

  const auto wall_start = Clock::now();

  ExperimentResult result;
  result.grid = scene::make_grid(cfg.scene.nx, cfg.scene.ny, cfg.scene.extent);
  const scene::SceneGrid& grid = result.grid;
  result.truth = build_scene(cfg.scene, grid, cfg.seed);
  if (!result.truth.isotropic() &&
      result.truth.values.size() != cfg.aperture.n_subapertures) {
    throw std::invalid_argument("run: anisotropic truth/sub-aperture mismatch");
  }

  const std::size_t n_sub = cfg.aperture.n_subapertures;
  const auto plan = forward::make_selection(
      cfg.aperture.n_frequencies, cfg.aperture.angles_per_subaperture, n_sub,
      cfg.cs_fraction, cfg.seed);

  Reconstruction& recon = result.recon;
  recon.kept_rows_per_block.assign(n_sub, plan.kept_per_block);

  // Noiseless synthesis pass. Operators are kept in memory when small enough,
  // otherwise rebuilt inside the workers.
  const std::size_t op_rows = cfg.aperture.angles_per_subaperture * plan.kept_per_block;
  const std::size_t op_bytes = op_rows * grid.size() * sizeof(cplx);
  const bool keep_ops = op_bytes * n_sub <= (std::size_t{1} << 28);

  std::vector<CMatrix> ops(keep_ops ? n_sub : 0);
  std::vector<CVec> noiseless(n_sub);
  {
    const auto t0 = Clock::now();
    for (std::size_t l = 0; l < n_sub; ++l) {
      CMatrix op = forward::build_subaperture_operator(grid, cfg.aperture, plan, l);
      const CVec& s = result.truth.for_subaperture(l);
      noiseless[l].resize(op.rows());
      kernels::active().matvec(op.data(), op.rows(), op.cols(), s.data(),
                               noiseless[l].data());
      if (keep_ops) ops[l] = std::move(op);
    }
    recon.timers.forward_s = seconds_since(t0);
  }

  double sigma = 0.0;
  if (cfg.noise.sigma) {
    sigma = *cfg.noise.sigma;
  } else if (cfg.noise.snr_db) {
    sigma = forward::noise_sigma_for_snr(noiseless, *cfg.noise.snr_db);
  }
  recon.noise_sigma = sigma;

  // Shared graph for the content-independent methods: built exactly once.
  graph::GraphModel shared_model;
  graph::DifferenceMatrix shared_diff;
  if (cfg.method == Method::tv2d || cfg.method == Method::gfl_entv) {
    const auto t0 = Clock::now();
    shared_model = cfg.method == Method::tv2d
                       ? graph::tv2d_graph(grid)
                       : graph::build_en_graph(grid, cfg.graph.sigma,
                                               cfg.graph.en_cutoff);
    recon.timers.graph_build_s = seconds_since(t0);
    recon.timers.graph_builds = 1;
    shared_diff = graph::build_difference(shared_model);
  }

  graph::NltvParams nltv;
  nltv.sigma = cfg.graph.sigma;
  nltv.patch_size = cfg.graph.nltv_patch;
  nltv.window_size = cfg.graph.nltv_window;
  nltv.patch_cutoff = cfg.graph.nltv_patch_cutoff;
  nltv.magnitude_only = cfg.graph.nltv_magnitude_only;

  std::vector<SubApertureOutcome> outcomes(n_sub);
  std::vector<std::exception_ptr> errors(n_sub);
  std::atomic<std::size_t> next{0};

  const auto process = [&](std::size_t l) {
    SubApertureOutcome& out = outcomes[l];
    const CMatrix local_op =
        keep_ops ? CMatrix{}
                 : forward::build_subaperture_operator(grid, cfg.aperture, plan, l);
    const CMatrix& op = keep_ops ? ops[l] : local_op;

    out.measurement = noiseless[l];
    Rng rng(substream_seed(cfg.seed, forward::seed_tag::noise, l));
    forward::add_noise(out.measurement, sigma, rng);
    const CVec& y = out.measurement;

    switch (cfg.method) {
      case Method::bp: {
        out.estimate = solver::backprojection(op, y);
        break;
      }
      case Method::tv2d:
      case Method::gfl_entv: {
        const auto tc = Clock::now();
        const auto cache = solver::build_cache(op, shared_diff, cfg.solver, y);
        out.cache_build_s = seconds_since(tc);
        const auto ti = Clock::now();
        auto solved = solver::solve_gfl(cache, op, y, shared_diff, cfg.solver);
        out.iterate_s = seconds_since(ti);
        out.estimate = std::move(solved.s);
        out.diagnostics = std::move(solved.diagnostics);
        break;
      }
      case Method::gfl_nltv: {
        const CVec ref = solver::backprojection(op, y);
        const auto tg = Clock::now();
        graph::GraphModel model = graph::build_nltv_graph(grid, ref, nltv);
        out.graph_build_s = seconds_since(tg);
        out.graph_builds = 1;
        const auto diff = graph::build_difference(model);
        if (cfg.dump_graph) out.nltv_graph = std::move(model);
        const auto tc = Clock::now();
        const auto cache = solver::build_cache(op, diff, cfg.solver, y);
        out.cache_build_s = seconds_since(tc);
        const auto ti = Clock::now();
        auto solved = solver::solve_gfl(cache, op, y, diff, cfg.solver);
        out.iterate_s = seconds_since(ti);
        out.estimate = std::move(solved.s);
        out.diagnostics = std::move(solved.diagnostics);
        break;
      }
    }
  };

  const std::size_t n_workers = std::min(cfg.workers, n_sub);
  if (n_workers <= 1) {
    for (std::size_t l = 0; l < n_sub; ++l) {
      try {
        process(l);
      } catch (...) {
        errors[l] = std::current_exception();
      }
    }
  } else {
    std::vector<std::thread> workers;
    workers.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) {
      workers.emplace_back([&]() {
        for (;;) {
          const std::size_t l = next.fetch_add(1);
          if (l >= n_sub) return;
          try {
            process(l);
          } catch (...) {
            errors[l] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : workers) t.join();
  }

  for (std::size_t l = 0; l < n_sub; ++l) {
    if (!errors[l]) continue;
    try {
      std::rethrow_exception(errors[l]);
    } catch (const std::exception& e) {
      throw std::runtime_error("sub-aperture " + std::to_string(l) + ": " + e.what());
    }
  }

  recon.per_subaperture.resize(n_sub);
  recon.measurements.resize(n_sub);
  recon.diagnostics.resize(n_sub);
  for (std::size_t l = 0; l < n_sub; ++l) {
    recon.per_subaperture[l] = std::move(outcomes[l].estimate);
    recon.measurements[l] = std::move(outcomes[l].measurement);
    recon.diagnostics[l] = std::move(outcomes[l].diagnostics);
    recon.timers.graph_build_s += outcomes[l].graph_build_s;
    recon.timers.cache_build_s += outcomes[l].cache_build_s;
    recon.timers.iterate_s += outcomes[l].iterate_s;
    recon.timers.graph_builds += outcomes[l].graph_builds;
    if (cfg.dump_graph && cfg.method == Method::gfl_nltv) {
      recon.per_sub_graphs.push_back(std::move(outcomes[l].nltv_graph));
    }
  }
  if (cfg.dump_graph &&
      (cfg.method == Method::tv2d || cfg.method == Method::gfl_entv)) {
    recon.shared_graph = std::move(shared_model);
  }
  if (cfg.method == Method::bp && op_rows > 0) {
    recon.bp_scale = 1.0 / static_cast<double>(op_rows);
  }

  recon.fused = fuse(recon.per_subaperture);
  result.metrics = compute_metrics(recon, result.truth, grid);
  result.metrics.total_wall_s = seconds_since(wall_start);

  if (!cfg.out_dir.empty()) {
    emit_outputs(result, cfg, config_echo, cfg.out_dir);
  }
  return result;
}

void emit_outputs(const ExperimentResult& result, const ExperimentConfig& cfg,
                  const std::string& config_echo, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory '" + dir +
                             "': " + ec.message());
  }
  const auto path = [&dir](const std::string& name) {
    return (fs::path(dir) / name).string();
  };

  const Reconstruction& recon = result.recon;
  const MetricsReport& metrics = result.metrics;
  io::write_pgm(path("fused.pgm"), recon.fused, result.grid.nx, result.grid.ny);
  io::write_matrix_csv(path("fused.csv"), recon.fused, result.grid.nx,
                       result.grid.ny);

  std::string m;
  m += "method: " + std::string(method_name(cfg.method)) + "\n";
  m += "seed: " + std::to_string(cfg.seed) + "\n";
  m += "grid: " + std::to_string(result.grid.nx) + "x" + std::to_string(result.grid.ny) + "\n";
  m += "subapertures: " + std::to_string(cfg.aperture.n_subapertures) + "\n";
  m += "cs_fraction: " + io::format_double(cfg.cs_fraction) + "\n";
  m += "kept_rows_per_block: " +
       std::to_string(recon.kept_rows_per_block.empty() ? 0 : recon.kept_rows_per_block[0]) + "\n";
  m += "noise_sigma: " + io::format_double(recon.noise_sigma) + "\n";
  m += std::string(metrics.mse_is_absolute ? "absolute_mse: " : "relative_mse: ") +
       io::format_double(metrics.mse) + "\n";
  if (metrics.mse_is_absolute) m += "truth_all_zero: true\n";
  if (metrics.hit_rate_defined) {
    m += "hit_rate: " + io::format_double(metrics.hit_rate) + "\n";
  }
  m += "target_background_ratio: " +
       (metrics.background_nonzero ? io::format_double(metrics.target_background_ratio)
                                   : std::string("inf")) +
       "\n";
  m += "support_cells: " + std::to_string(metrics.support_size) + "\n";
  if (cfg.method == Method::bp) {
    m += "bp_scale: " + io::format_double(recon.bp_scale) + "\n";
  }
  std::string iters;
  for (auto it : metrics.iterations) {
    if (!iters.empty()) iters += ' ';
    iters += std::to_string(it);
  }
  m += "iterations: " + iters + "\n";
  io::write_text_file(path("metrics.txt"), m);

  std::string t;
  t += "forward_s: " + io::format_double(recon.timers.forward_s) + "\n";
  t += "graph_build_s: " + io::format_double(recon.timers.graph_build_s) + "\n";
  t += "graph_builds: " + std::to_string(recon.timers.graph_builds) + "\n";
  t += "cache_build_s: " + io::format_double(recon.timers.cache_build_s) + "\n";
  t += "iterate_s: " + io::format_double(recon.timers.iterate_s) + "\n";
  t += "total_wall_s: " + io::format_double(metrics.total_wall_s) + "\n";
  io::write_text_file(path("timings.txt"), t);

  for (std::size_t l = 0; l < recon.diagnostics.size(); ++l) {
    io::write_diagnostics_csv(path("diagnostics_l" + std::to_string(l) + ".csv"),
                              recon.diagnostics[l].trace);
  }

  io::write_text_file(path("config.echo"), config_echo);

  if (cfg.dump_measurements) {
    for (std::size_t l = 0; l < recon.measurements.size(); ++l) {
      io::write_measurement_dump(
          path("measurements_l" + std::to_string(l) + ".txt"), l,
          cfg.aperture.angles_per_subaperture, recon.kept_rows_per_block[l],
          result.grid.size(), recon.measurements[l]);
    }
  }
  if (cfg.dump_graph) {
    if (recon.shared_graph) {
      io::write_graph_edges(path("graph.txt"), *recon.shared_graph);
    }
    for (std::size_t l = 0; l < recon.per_sub_graphs.size(); ++l) {
      io::write_graph_edges(path("graph_l" + std::to_string(l) + ".txt"),
                            recon.per_sub_graphs[l]);
    }
  }
}

}  // namespace sarimg::pipeline
