#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace dissim {

using cplx = std::complex<double>;
using SparseMat = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using DenseMat = Eigen::MatrixXcd;
using RowDenseMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr cplx kI{0.0, 1.0};

// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class UnknownMode : public Error {
 public:
  explicit UnknownMode(const std::string& label) : Error("unknown mode label '" + label + "'") {}
};

class LayoutMismatch : public Error {
 public:
  LayoutMismatch() : Error("operands do not share a system layout") {}
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace dissim
