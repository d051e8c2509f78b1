#include "sarimg/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sarimg::io {
namespace {

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

void write_pgm(const std::string& path, const std::vector<double>& intensity,
               std::size_t nx, std::size_t ny, double floor_db) {
  if (intensity.size() != nx * ny) {
    throw std::invalid_argument("write_pgm: size mismatch");
  }
  double peak = 0.0;
  for (double v : intensity) peak = std::max(peak, v);

  std::string bytes(nx * ny, '\0');
  if (peak > 0.0) {
    // amplitude dB relative to the peak (10 log10 of an intensity ratio),
    // clamped at -floor_db
    for (std::size_t i = 0; i < intensity.size(); ++i) {
      if (intensity[i] <= 0.0) continue;
      const double db = 10.0 * std::log10(intensity[i] / peak);
      const double scaled = 255.0 * (1.0 + db / floor_db);
      const int px = static_cast<int>(std::lround(std::clamp(scaled, 0.0, 255.0)));
      bytes[i] = static_cast<char>(px);
    }
  }

  auto out = open_out(path, std::ios::out | std::ios::binary);
  out << "P5\n" << nx << " " << ny << "\n255\n";
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

void write_matrix_csv(const std::string& path, const std::vector<double>& values,
                      std::size_t nx, std::size_t ny) {
  if (values.size() != nx * ny) {
    throw std::invalid_argument("write_matrix_csv: size mismatch");
  }
  std::string text;
  text.reserve(values.size() * 20);
  for (std::size_t r = 0; r < ny; ++r) {
    for (std::size_t c = 0; c < nx; ++c) {
      if (c > 0) text += ',';
      text += format_double(values[r * nx + c]);
    }
    text += '\n';
  }
  write_text_file(path, text);
}

std::vector<double> read_matrix_csv(const std::string& path, std::size_t& nx,
                                    std::size_t& ny) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::vector<double> values;
  std::string line;
  nx = 0;
  ny = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream fields(line);
    std::string field;
    std::size_t cols = 0;
    while (std::getline(fields, field, ',')) {
      values.push_back(std::stod(field));
      ++cols;
    }
    if (nx == 0) {
      nx = cols;
    } else if (cols != nx) {
      throw std::runtime_error("ragged CSV in '" + path + "'");
    }
    ++ny;
  }
  return values;
}

void write_diagnostics_csv(const std::string& path,
                           const std::vector<solver::IterationRecord>& trace) {
  std::string text = "iter,objective,s_update_norm,r_u_norm,r_z_norm\n";
  for (const auto& rec : trace) {
    text += std::to_string(rec.iter);
    text += ',';
    text += format_double(rec.objective);
    text += ',';
    text += format_double(rec.s_update_norm);
    text += ',';
    text += format_double(rec.r_u_norm);
    text += ',';
    text += format_double(rec.r_z_norm);
    text += '\n';
  }
  write_text_file(path, text);
}

void write_measurement_dump(const std::string& path, std::size_t l,
                            std::size_t k, std::size_t j, std::size_t n,
                            const CVec& y) {
  std::string text = std::to_string(l) + " " + std::to_string(k) + " " +
                     std::to_string(j) + " " + std::to_string(n) + "\n";
  for (const auto& v : y) {
    text += format_double(v.real());
    text += ' ';
    text += format_double(v.imag());
    text += '\n';
  }
  write_text_file(path, text);
}

void write_graph_edges(const std::string& path, const graph::GraphModel& model) {
  std::string text;
  for (std::size_t a = 0; a < model.n_vertices; ++a) {
    for (std::size_t e = model.row_ptr[a]; e < model.row_ptr[a + 1]; ++e) {
      text += std::to_string(a);
      text += ' ';
      text += std::to_string(model.col[e]);
      text += ' ';
      text += format_double(model.weight[e]);
      text += '\n';
    }
  }
  write_text_file(path, text);
}

}  // namespace sarimg::io
