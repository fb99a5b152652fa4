#pragma once
// Symmetry sectors for block-diagonal Lindblad propagation.
//
// A subset S of modes defines the label P_S = (-1)^{sum_{m in S} n_m}. If
// every Hamiltonian operator conserves P_S, every jump either commutes or
// anticommutes with it, and the initial state commutes with it, then rho(t)
// stays block diagonal in the P_S eigenspaces. Independent labels of that kind
// split the basis into sectors; propagation only touches the diagonal blocks.
//
// The exchange of two identical modes is handled the same way once the basis
// is rotated to symmetric and antisymmetric combinations (|mn> +- |nm>)/sqrt2.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "dissim/hilbert.hpp"

namespace dissim::sectors {

using hilbert::LayoutPtr;

/// Exchange of two modes of equal dimension (indices into the layout).
struct ModeSwap {
  std::size_t first = 0;
  std::size_t second = 0;
};

/// Basis index reached by exchanging the occupations of the swapped modes.
inline std::size_t swapped_index(const hilbert::SystemLayout& layout, const ModeSwap& sw, std::size_t i) {
  const auto np = static_cast<std::size_t>(layout.occupation(i, sw.first));
  const auto nq = static_cast<std::size_t>(layout.occupation(i, sw.second));
  return i - np * layout.stride(sw.first) - nq * layout.stride(sw.second) + nq * layout.stride(sw.first) +
         np * layout.stride(sw.second);
}

class SectorPlan {
 public:
  /// Trivial plan: one sector holding the whole basis.
  explicit SectorPlan(const LayoutPtr& layout) : SectorPlan(layout, {}) {}

  SectorPlan(const LayoutPtr& layout, std::vector<std::uint32_t> generators, std::optional<ModeSwap> swap = {})
      : layout_(layout), generators_(std::move(generators)), swap_(swap) {
    const std::size_t d = layout->total_dim();
    if (swap_) {
      if (swap_->first == swap_->second || swap_->first >= layout->size() || swap_->second >= layout->size() ||
          layout->dim(swap_->first) != layout->dim(swap_->second))
        throw InvalidArgument("mode swap needs two distinct modes of equal dimension");
      const std::uint32_t pair = (1u << swap_->first) | (1u << swap_->second);
      for (auto g : generators_)
        if ((g & pair) != 0 && (g & pair) != pair)
          throw InvalidArgument("parity generator is not invariant under the mode swap");
      build_swap_basis();
    }
    const std::size_t count = std::size_t{1} << (generators_.size() + (swap_ ? 1 : 0));
    members_.assign(count, {});
    sector_of_.resize(d);
    position_.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
      const auto s = label(i);
      sector_of_[i] = s;
      position_[i] = static_cast<Eigen::Index>(members_[s].size());
      members_[s].push_back(static_cast<Eigen::Index>(i));
    }
    offsets_.assign(count + 1, 0);
    for (std::size_t s = 0; s < count; ++s) {
      const auto n = static_cast<Eigen::Index>(members_[s].size());
      offsets_[s + 1] = offsets_[s] + n * n;
    }
  }

  std::size_t count() const { return members_.size(); }
  Eigen::Index block_size(std::size_t s) const { return static_cast<Eigen::Index>(members_[s].size()); }
  Eigen::Index offset(std::size_t s) const { return offsets_[s]; }
  Eigen::Index storage_size() const { return offsets_.back(); }
  std::uint32_t sector_of(std::size_t i) const { return sector_of_[i]; }
  Eigen::Index position(std::size_t i) const { return position_[i]; }
  const std::vector<Eigen::Index>& members(std::size_t s) const { return members_[s]; }
  const std::vector<std::uint32_t>& generators() const { return generators_; }
  const std::optional<ModeSwap>& swap() const { return swap_; }
  const LayoutPtr& layout() const { return layout_; }

  /// Sector label of plan-basis vector i. Bit k is the parity over generator
  /// k; with a swap, the top bit marks the antisymmetric combination.
  std::uint32_t label(std::size_t i) const {
    std::uint32_t out = 0;
    for (std::size_t k = 0; k < generators_.size(); ++k)
      if (subset_parity(*layout_, generators_[k], i)) out |= (1u << k);
    if (swap_ && layout_->occupation(i, swap_->first) > layout_->occupation(i, swap_->second))
      out |= (1u << generators_.size());
    return out;
  }

  static bool subset_parity(const hilbert::SystemLayout& layout, std::uint32_t subset, std::size_t basis_index) {
    int sum = 0;
    for (std::size_t m = 0; m < layout.size(); ++m)
      if (subset & (1u << m)) sum += layout.occupation(basis_index, m);
    return (sum & 1) != 0;
  }

  /// U^T A U, i.e. A expressed in the plan basis (A itself without a swap).
  SparseMat to_plan(const SparseMat& a) const {
    if (!swap_) return a;
    return SparseMat(SparseMat(basis_.transpose()) * a * basis_);
  }
  DenseMat to_plan(const DenseMat& a) const {
    if (!swap_) return a;
    const SparseMat ut = basis_.transpose();
    const DenseMat left = ut * a;
    return left * basis_;
  }
  DenseMat from_plan(const DenseMat& a) const {
    if (!swap_) return a;
    const SparseMat ut = basis_.transpose();
    const DenseMat left = basis_ * a;
    return left * ut;
  }

 private:
  // Column j of U is the plan-basis vector j. For a pair i < i' of swapped
  // states, column i is (|i> + |i'>)/sqrt2 and column i' is (|i> - |i'>)/sqrt2,
  // where i is the state with the smaller occupation in the first swapped mode.
  void build_swap_basis() {
    const auto d = layout_->total_dim();
    const double h = 1.0 / std::sqrt(2.0);
    std::vector<Eigen::Triplet<cplx>> trips;
    trips.reserve(2 * d);
    for (std::size_t j = 0; j < d; ++j) {
      const int np = layout_->occupation(j, swap_->first), nq = layout_->occupation(j, swap_->second);
      const auto partner = swapped_index(*layout_, *swap_, j);
      const auto J = static_cast<Eigen::Index>(j), P = static_cast<Eigen::Index>(partner);
      if (np == nq) {
        trips.emplace_back(J, J, 1.0);
      } else if (np < nq) {
        trips.emplace_back(J, J, h);
        trips.emplace_back(P, J, h);
      } else {
        trips.emplace_back(P, J, h);
        trips.emplace_back(J, J, -h);
      }
    }
    basis_.resize(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    basis_.setFromTriplets(trips.begin(), trips.end());
    basis_.makeCompressed();
  }

  LayoutPtr layout_;
  std::vector<std::uint32_t> generators_;
  std::optional<ModeSwap> swap_;
  SparseMat basis_;
  std::vector<std::vector<Eigen::Index>> members_;
  std::vector<std::uint32_t> sector_of_;
  std::vector<Eigen::Index> position_;
  std::vector<Eigen::Index> offsets_;
};

namespace detail {

// Parity flip of `op` with respect to `subset`: 0 or 1 when definite,
// nullopt when the operator mixes both. The zero operator is 0.
inline std::optional<int> flip(const hilbert::SystemLayout& layout, const SparseMat& op, std::uint32_t subset) {
  std::optional<int> f;
  for (Eigen::Index r = 0; r < op.outerSize(); ++r)
    for (SparseMat::InnerIterator it(op, r); it; ++it) {
      if (it.value() == cplx(0.0)) continue;
      const int v = SectorPlan::subset_parity(layout, subset, static_cast<std::size_t>(it.row())) !=
                    SectorPlan::subset_parity(layout, subset, static_cast<std::size_t>(it.col()));
      if (f && *f != v) return std::nullopt;
      f = v;
    }
  return f.value_or(0);
}

// Sign s with S op S = s op for the mode exchange S, or nullopt.
inline std::optional<int> swap_sign(const hilbert::SystemLayout& layout, const SparseMat& op, const ModeSwap& sw) {
  std::optional<int> sign;
  double scale = 0.0;
  for (Eigen::Index r = 0; r < op.outerSize(); ++r)
    for (SparseMat::InnerIterator it(op, r); it; ++it) scale = std::max(scale, std::abs(it.value()));
  const double tol = 1e-12 * std::max(1.0, scale);
  for (Eigen::Index r = 0; r < op.outerSize(); ++r)
    for (SparseMat::InnerIterator it(op, r); it; ++it) {
      const cplx v = it.value();
      if (std::abs(v) <= tol) continue;
      const auto pr = static_cast<Eigen::Index>(swapped_index(layout, sw, static_cast<std::size_t>(it.row())));
      const auto pc = static_cast<Eigen::Index>(swapped_index(layout, sw, static_cast<std::size_t>(it.col())));
      const cplx w = op.coeff(pr, pc);
      int s = 0;
      if (std::abs(w - v) <= tol) s = 1;
      else if (std::abs(w + v) <= tol) s = -1;
      else return std::nullopt;
      if (sign && *sign != s) return std::nullopt;
      sign = s;
    }
  return sign.value_or(1);
}

inline bool swap_invariant(const hilbert::SystemLayout& layout, const DenseMat& rho, const ModeSwap& sw) {
  const auto d = rho.rows();
  const double tol = 1e-14 * std::max(1.0, rho.cwiseAbs().maxCoeff());
  for (Eigen::Index j = 0; j < d; ++j) {
    const auto pj = static_cast<Eigen::Index>(swapped_index(layout, sw, static_cast<std::size_t>(j)));
    for (Eigen::Index i = 0; i < d; ++i) {
      const auto pi = static_cast<Eigen::Index>(swapped_index(layout, sw, static_cast<std::size_t>(i)));
      if (std::abs(rho(pi, pj) - rho(i, j)) > tol) return false;
    }
  }
  return true;
}

}  // namespace detail

/// Largest set of independent parity labels compatible with the generator
/// (`conserved` must commute, `jumps` may commute or anticommute) and with
/// the initial state (`initial`, block diagonal). `pair_mask`, when
/// non-zero, restricts to subsets that contain both or neither of its modes.
inline std::vector<std::uint32_t> parity_generators(const LayoutPtr& layout,
                                                    const std::vector<const SparseMat*>& conserved,
                                                    const std::vector<const SparseMat*>& jumps,
                                                    const DenseMat* initial, std::uint32_t pair_mask = 0) {
  const std::size_t m = layout->size();
  std::vector<std::uint32_t> basis;  // GF(2) basis of accepted subsets
  std::vector<std::uint32_t> reduced;
  auto reduce = [&](std::uint32_t v) {
    for (auto r : reduced) v = std::min(v, v ^ r);
    return v;
  };
  for (std::uint32_t subset = 1; subset < (1u << m); ++subset) {
    if (pair_mask && (subset & pair_mask) != 0 && (subset & pair_mask) != pair_mask) continue;
    bool ok = true;
    for (const auto* op : conserved) {
      const auto f = detail::flip(*layout, *op, subset);
      if (!f || *f != 0) {
        ok = false;
        break;
      }
    }
    if (ok)
      for (const auto* op : jumps)
        if (!detail::flip(*layout, *op, subset)) {
          ok = false;
          break;
        }
    if (ok && initial) {
      const auto d = initial->rows();
      for (Eigen::Index j = 0; j < d && ok; ++j)
        for (Eigen::Index i = 0; i < d; ++i)
          if ((*initial)(i, j) != cplx(0.0) &&
              SectorPlan::subset_parity(*layout, subset, static_cast<std::size_t>(i)) !=
                  SectorPlan::subset_parity(*layout, subset, static_cast<std::size_t>(j))) {
            ok = false;
            break;
          }
    }
    if (!ok) continue;
    const auto r = reduce(subset);
    if (r == 0) continue;
    reduced.push_back(r);
    std::sort(reduced.begin(), reduced.end(), std::greater<>());
    basis.push_back(subset);
  }
  return basis;
}

/// Sector plan with the smallest block storage: parity labels alone, or
/// parity labels combined with the first exchange symmetry found.
inline SectorPlan plan_sectors(const LayoutPtr& layout, const std::vector<const SparseMat*>& conserved,
                               const std::vector<const SparseMat*>& jumps, const DenseMat* initial) {
  const std::size_t m = layout->size();
  if (m > 20) return SectorPlan(layout);
  SectorPlan best(layout, parity_generators(layout, conserved, jumps, initial));
  for (std::size_t p = 0; p < m; ++p)
    for (std::size_t q = p + 1; q < m; ++q) {
      if (layout->dim(p) != layout->dim(q)) continue;
      const ModeSwap sw{p, q};
      bool ok = true;
      for (const auto* op : conserved) {
        const auto s = detail::swap_sign(*layout, *op, sw);
        if (!s || *s != 1) {
          ok = false;
          break;
        }
      }
      if (ok)
        for (const auto* op : jumps)
          if (!detail::swap_sign(*layout, *op, sw)) {
            ok = false;
            break;
          }
      if (ok && initial) ok = detail::swap_invariant(*layout, *initial, sw);
      if (!ok) continue;
      const std::uint32_t pair = (1u << p) | (1u << q);
      SectorPlan candidate(layout, parity_generators(layout, conserved, jumps, initial, pair), sw);
      if (candidate.storage_size() < best.storage_size()) best = std::move(candidate);
      return best;
    }
  return best;
}

/// Operator restricted to sector blocks: source sector s maps into s ^ mask.
struct BlockOperator {
  std::uint32_t mask = 0;
  std::vector<SparseMat> blocks;  // indexed by source sector; rows live in sector s ^ mask
};

/// Sector mask of an operator already expressed in the plan basis.
inline std::uint32_t label_mask(const SectorPlan& plan, const SparseMat& op_in_plan) {
  for (Eigen::Index r = 0; r < op_in_plan.outerSize(); ++r)
    for (SparseMat::InnerIterator it(op_in_plan, r); it; ++it)
      if (it.value() != cplx(0.0))
        return plan.sector_of(static_cast<std::size_t>(it.row())) ^ plan.sector_of(static_cast<std::size_t>(it.col()));
  return 0;
}

/// Split `op` (given in the layout basis) into sector blocks, scaled by `scale`.
inline BlockOperator split(const SectorPlan& plan, const SparseMat& op, cplx scale = 1.0) {
  const SparseMat t = plan.to_plan(op);
  const double tol = 1e-14 * std::max(1.0, t.nonZeros() ? t.coeffs().cwiseAbs().maxCoeff() : 0.0);
  BlockOperator out;
  const std::size_t count = plan.count();
  std::vector<std::vector<Eigen::Triplet<cplx>>> trips(count);
  bool have_mask = false;
  for (Eigen::Index r = 0; r < t.outerSize(); ++r)
    for (SparseMat::InnerIterator it(t, r); it; ++it) {
      if (std::abs(it.value()) <= tol) continue;
      const auto row = static_cast<std::size_t>(it.row());
      const auto col = static_cast<std::size_t>(it.col());
      const auto s = plan.sector_of(col);
      const auto mask = plan.sector_of(row) ^ s;
      if (!have_mask) {
        out.mask = mask;
        have_mask = true;
      }
      if (mask != out.mask) throw InvalidArgument("operator has no definite parity with respect to the sector plan");
      trips[s].emplace_back(plan.position(row), plan.position(col), scale * it.value());
    }
  out.blocks.resize(count);
  for (std::size_t s = 0; s < count; ++s) {
    out.blocks[s].resize(plan.block_size(s ^ out.mask), plan.block_size(s));
    out.blocks[s].setFromTriplets(trips[s].begin(), trips[s].end());
    out.blocks[s].makeCompressed();
  }
  return out;
}

}  // namespace dissim::sectors
