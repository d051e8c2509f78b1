#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace sarimg {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

/// Numerical failure outside the caller's control (non-positive-definite
/// system, non-finite intermediate, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Solver iterates left the finite range.
class DivergenceError : public NumericalError {
 public:
  DivergenceError(std::size_t iteration, const std::string& what)
      : NumericalError(what), iteration_(iteration) {}
  std::size_t iteration() const { return iteration_; }

 private:
  std::size_t iteration_;
};

/// Dense row-major complex matrix. Rows are contiguous, which is what the
/// kernel backends assume.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  cplx* row(std::size_t r) { return data_.data() + r * cols_; }
  const cplx* row(std::size_t r) const { return data_.data() + r * cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  cplx* data() { return data_.data(); }
  const cplx* data() const { return data_.data(); }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  CVec data_;
};

}  // namespace sarimg
