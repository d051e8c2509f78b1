#pragma once

#include <string>
#include <vector>

#include "sarimg/graph.hpp"
#include "sarimg/solver.hpp"
#include "sarimg/types.hpp"

namespace sarimg::io {

/// Shortest round-trippable decimal form (%.17g).
std::string format_double(double v);

void write_text_file(const std::string& path, const std::string& text);

/// Binary PGM (P5) of the intensity image. Amplitudes are mapped to [0, 255]
/// on a logarithmic scale with `floor_db` of dynamic range below the peak;
/// an all-zero image comes out uniformly black.
void write_pgm(const std::string& path, const std::vector<double>& intensity,
               std::size_t nx, std::size_t ny, double floor_db = 40.0);

/// Full-precision CSV raster, ny rows of nx comma-separated values.
void write_matrix_csv(const std::string& path, const std::vector<double>& values,
                      std::size_t nx, std::size_t ny);
std::vector<double> read_matrix_csv(const std::string& path, std::size_t& nx,
                                    std::size_t& ny);

/// Per-iteration solver trace.
void write_diagnostics_csv(const std::string& path,
                           const std::vector<solver::IterationRecord>& trace);

/// Measurement dump: header line "l K J N", then one "re im" pair per row.
void write_measurement_dump(const std::string& path, std::size_t l,
                            std::size_t k, std::size_t j, std::size_t n,
                            const CVec& y);

/// Edge list "n n' weight", one directed edge per line, sorted by (n, n').
void write_graph_edges(const std::string& path, const graph::GraphModel& model);

}  // namespace sarimg::io
