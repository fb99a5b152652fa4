#pragma once
// Truncated Fock-space operator algebra over tensor-product layouts.

#include <cmath>
#include <cstddef>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dissim/types.hpp"

namespace dissim::hilbert {

struct ModeSpec {
  std::string label;
  int dim = 2;

  bool operator==(const ModeSpec&) const = default;
};

/// Ordered list of bosonic modes. Basis index is row-major over the mode
/// order: mode 0 is the most significant digit.
class SystemLayout {
 public:
  explicit SystemLayout(std::vector<ModeSpec> modes) : modes_(std::move(modes)) {
    if (modes_.empty()) throw DimensionError("layout needs at least one mode");
    std::set<std::string> seen;
    total_ = 1;
    for (const auto& m : modes_) {
      if (m.dim < 2) throw DimensionError("mode '" + m.label + "' has dimension < 2");
      if (!seen.insert(m.label).second) throw InvalidArgument("duplicate mode label '" + m.label + "'");
      total_ *= static_cast<std::size_t>(m.dim);
    }
    strides_.assign(modes_.size(), 1);
    for (std::size_t k = modes_.size() - 1; k > 0; --k)
      strides_[k - 1] = strides_[k] * static_cast<std::size_t>(modes_[k].dim);
  }

  const std::vector<ModeSpec>& modes() const { return modes_; }
  std::size_t size() const { return modes_.size(); }
  std::size_t total_dim() const { return total_; }
  int dim(std::size_t k) const { return modes_.at(k).dim; }
  std::size_t stride(std::size_t k) const { return strides_.at(k); }

  bool has(std::string_view label) const {
    for (const auto& m : modes_)
      if (m.label == label) return true;
    return false;
  }

  std::size_t index_of(std::string_view label) const {
    for (std::size_t k = 0; k < modes_.size(); ++k)
      if (modes_[k].label == label) return k;
    throw UnknownMode(std::string(label));
  }

  /// Fock occupation of `mode` in basis state `basis_index`.
  int occupation(std::size_t basis_index, std::size_t mode) const {
    return static_cast<int>((basis_index / strides_[mode]) % static_cast<std::size_t>(modes_[mode].dim));
  }

  bool operator==(const SystemLayout& o) const { return modes_ == o.modes_; }

 private:
  std::vector<ModeSpec> modes_;
  std::vector<std::size_t> strides_;
  std::size_t total_ = 1;
};

using LayoutPtr = std::shared_ptr<const SystemLayout>;

inline LayoutPtr make_layout(std::vector<ModeSpec> modes) {
  return std::make_shared<const SystemLayout>(std::move(modes));
}

inline LayoutPtr single_mode_layout(int n, std::string label = "mode") {
  return make_layout({ModeSpec{std::move(label), n}});
}

inline bool same_layout(const LayoutPtr& a, const LayoutPtr& b) {
  return a == b || (a && b && *a == *b);
}

/// Sparse complex matrix bound to a layout. Immutable after construction.
class Operator {
 public:
  Operator(LayoutPtr layout, SparseMat data) : layout_(std::move(layout)), data_(std::move(data)) {
    const auto d = static_cast<Eigen::Index>(layout_->total_dim());
    if (data_.rows() != d || data_.cols() != d)
      throw DimensionError("operator matrix does not match layout dimension");
    data_.makeCompressed();
  }

  static Operator zero(LayoutPtr layout) {
    const auto d = static_cast<Eigen::Index>(layout->total_dim());
    return Operator(std::move(layout), SparseMat(d, d));
  }

  static Operator identity(LayoutPtr layout) {
    const auto d = static_cast<Eigen::Index>(layout->total_dim());
    SparseMat m(d, d);
    m.setIdentity();
    return Operator(std::move(layout), std::move(m));
  }

  const LayoutPtr& layout() const { return layout_; }
  const SparseMat& data() const { return data_; }
  std::size_t dim() const { return layout_->total_dim(); }
  DenseMat dense() const { return DenseMat(data_); }

  Operator adjoint() const { return Operator(layout_, SparseMat(data_.adjoint())); }

  Operator operator+(const Operator& o) const {
    check(o);
    return Operator(layout_, SparseMat(data_ + o.data_));
  }
  Operator operator-(const Operator& o) const {
    check(o);
    return Operator(layout_, SparseMat(data_ - o.data_));
  }
  Operator operator*(const Operator& o) const {
    check(o);
    return Operator(layout_, SparseMat(data_ * o.data_));
  }
  Operator operator*(cplx s) const { return Operator(layout_, SparseMat(data_ * s)); }
  Operator operator-() const { return Operator(layout_, SparseMat(-data_)); }
  friend Operator operator*(cplx s, const Operator& op) { return op * s; }

  /// Largest absolute entry (0 for the zero operator).
  double max_abs() const {
    double m = 0.0;
    for (Eigen::Index k = 0; k < data_.outerSize(); ++k)
      for (SparseMat::InnerIterator it(data_, k); it; ++it) m = std::max(m, std::abs(it.value()));
    return m;
  }

  /// max |A - A^dagger|
  double hermiticity_error() const { return (*this - adjoint()).max_abs(); }

 private:
  void check(const Operator& o) const {
    if (!same_layout(layout_, o.layout_)) throw LayoutMismatch();
  }

  LayoutPtr layout_;
  SparseMat data_;
};

inline Operator dagger(const Operator& op) { return op.adjoint(); }
inline Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

/// Single-mode lowering operator on |0>..|n-1>: entries (k-1, k) = sqrt(k).
inline Operator annihilation(int n) {
  if (n < 2) throw DimensionError("Fock truncation must be >= 2, got " + std::to_string(n));
  SparseMat m(n, n);
  m.reserve(Eigen::VectorXi::Constant(n, 1));
  for (int k = 1; k < n; ++k) m.insert(k - 1, k) = std::sqrt(static_cast<double>(k));
  return Operator(single_mode_layout(n), std::move(m));
}

inline Operator creation(int n) { return annihilation(n).adjoint(); }

inline Operator number(int n) {
  const auto a = annihilation(n);
  return a.adjoint() * a;
}

inline Operator identity(int n) {
  if (n < 2) throw DimensionError("Fock truncation must be >= 2, got " + std::to_string(n));
  return Operator::identity(single_mode_layout(n));
}

/// I (x) ... (x) op (x) ... (x) I with `op` in the slot of `mode_label`.
inline Operator embed(const Operator& op, std::string_view mode_label, const LayoutPtr& layout) {
  const std::size_t k = layout->index_of(mode_label);
  if (op.layout()->size() != 1) throw DimensionError("embed expects a single-mode operator");
  const int n = layout->dim(k);
  if (static_cast<int>(op.dim()) != n)
    throw DimensionError("operator dimension " + std::to_string(op.dim()) + " does not match mode '" +
                         std::string(mode_label) + "' of dimension " + std::to_string(n));
  const std::size_t right = layout->stride(k);
  const std::size_t left = layout->total_dim() / (right * static_cast<std::size_t>(n));

  std::vector<Eigen::Triplet<cplx>> trips;
  trips.reserve(static_cast<std::size_t>(op.data().nonZeros()) * left * right);
  for (std::size_t l = 0; l < left; ++l)
    for (Eigen::Index r = 0; r < op.data().outerSize(); ++r)
      for (SparseMat::InnerIterator it(op.data(), r); it; ++it)
        for (std::size_t q = 0; q < right; ++q) {
          const auto row = (l * n + static_cast<std::size_t>(it.row())) * right + q;
          const auto col = (l * n + static_cast<std::size_t>(it.col())) * right + q;
          trips.emplace_back(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col), it.value());
        }
  const auto d = static_cast<Eigen::Index>(layout->total_dim());
  SparseMat m(d, d);
  m.setFromTriplets(trips.begin(), trips.end());
  return Operator(layout, std::move(m));
}

/// Lowering operator of `mode_label` embedded in `layout`.
inline Operator lowering(std::string_view mode_label, const LayoutPtr& layout) {
  return embed(annihilation(layout->dim(layout->index_of(mode_label))), mode_label, layout);
}

struct Quadratures {
  Operator x;
  Operator p;
};

/// x = (b + b^dagger)/sqrt2, p = i(b^dagger - b)/sqrt2 for the labelled mode.
inline Quadratures quadratures(std::string_view mode_label, const LayoutPtr& layout) {
  const auto b = lowering(mode_label, layout);
  const auto bd = b.adjoint();
  const double s = 1.0 / std::sqrt(2.0);
  return {(b + bd) * cplx(s), (bd - b) * cplx(0.0, s)};
}

/// Kronecker product of two dense matrices (first factor is the slow index).
inline DenseMat kron(const DenseMat& a, const DenseMat& b) {
  DenseMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace dissim::hilbert
