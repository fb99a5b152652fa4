#pragma once
// Reduced states, phase-space distributions and spin readout.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "dissim/dynamics.hpp"

namespace dissim::analysis {

using dynamics::DensityState;
using dynamics::TimeSeries;
using hilbert::LayoutPtr;

/// Reduced state on the modes in `keep` (layout order is preserved).
inline DensityState partial_trace(const DensityState& rho, const std::vector<std::string>& keep) {
  const auto& layout = *rho.layout();
  if (keep.empty()) throw InvalidArgument("partial_trace needs at least one mode to keep");
  std::vector<bool> kept(layout.size(), false);
  for (const auto& label : keep) {
    const auto k = layout.index_of(label);
    if (kept[k]) throw InvalidArgument("mode '" + label + "' listed twice");
    kept[k] = true;
  }
  std::vector<hilbert::ModeSpec> reduced_modes;
  for (std::size_t k = 0; k < layout.size(); ++k)
    if (kept[k]) reduced_modes.push_back(layout.modes()[k]);
  auto reduced = hilbert::make_layout(reduced_modes);

  // Split every basis index into (kept index, traced index).
  const std::size_t d = layout.total_dim();
  std::size_t traced_dim = 1;
  for (std::size_t k = 0; k < layout.size(); ++k)
    if (!kept[k]) traced_dim *= static_cast<std::size_t>(layout.dim(k));
  std::vector<std::vector<std::pair<Eigen::Index, Eigen::Index>>> groups(traced_dim);
  for (std::size_t i = 0; i < d; ++i) {
    std::size_t ki = 0, ti = 0;
    for (std::size_t k = 0; k < layout.size(); ++k) {
      const auto n = static_cast<std::size_t>(layout.occupation(i, k));
      const auto dim = static_cast<std::size_t>(layout.dim(k));
      if (kept[k]) ki = ki * dim + n;
      else ti = ti * dim + n;
    }
    groups[ti].emplace_back(static_cast<Eigen::Index>(ki), static_cast<Eigen::Index>(i));
  }
  const auto dr = static_cast<Eigen::Index>(reduced->total_dim());
  DenseMat out = DenseMat::Zero(dr, dr);
  const DenseMat& r = rho.matrix();
  for (const auto& g : groups)
    for (const auto& [ka, ia] : g)
      for (const auto& [kb, ib] : g) out(ka, kb) += r(ia, ib);
  return {reduced, std::move(out)};
}

// ---------------------------------------------------------------------------
// Wigner functions

struct Axis {
  std::string label;
  double min = -5.0;
  double max = 5.0;
  int n = 151;

  double step() const { return n > 1 ? (max - min) / (n - 1) : 0.0; }
  double at(int k) const { return min + step() * k; }
  void validate() const {
    if (n < 2) throw InvalidArgument("axis '" + label + "' needs at least two points");
    if (!(max > min)) throw InvalidArgument("axis '" + label + "' has an empty range");
  }
};

/// Symmetric square grid [-extent, extent]^2 with n points per axis.
struct GridSpec {
  double extent = 5.0;
  int n = 151;
};

inline constexpr GridSpec kSingleModeGrid{5.0, 151};
inline constexpr GridSpec kJointGrid{4.0, 101};

/// Values are stored with rows along y and columns along x.
struct WignerGrid {
  Axis axis_x;
  Axis axis_y;
  Eigen::MatrixXd values;

  double x(int col) const { return axis_x.at(col); }
  double y(int row) const { return axis_y.at(row); }
  double cell_area() const { return axis_x.step() * axis_y.step(); }
  double integral() const { return values.sum() * cell_area(); }
  double max() const { return values.maxCoeff(); }
};

/// <m|D(beta)|n> for m, n < dim, by recursion in n starting from the
/// coherent-state column <m|D|0> = exp(-|beta|^2/2) beta^m / sqrt(m!).
inline DenseMat displacement_elements(cplx beta, int dim) {
  DenseMat d(dim, dim);
  d(0, 0) = std::exp(-0.5 * std::norm(beta));
  for (int m = 1; m < dim; ++m) d(m, 0) = d(m - 1, 0) * beta / std::sqrt(static_cast<double>(m));
  const cplx bc = std::conj(beta);
  for (int n = 1; n < dim; ++n) {
    const double rn = 1.0 / std::sqrt(static_cast<double>(n));
    d(0, n) = -bc * d(0, n - 1) * rn;
    for (int m = 1; m < dim; ++m)
      d(m, n) = (std::sqrt(static_cast<double>(m)) * d(m - 1, n - 1) - bc * d(m, n - 1)) * rn;
  }
  return d;
}

/// Displaced parity D(a) P D(a)^dag = D(2a) P with a = (x + i p)/sqrt2.
inline DenseMat displaced_parity(double x, double p, int dim) {
  DenseMat d = displacement_elements(cplx(x, p) * std::numbers::sqrt2, dim);
  for (int n = 1; n < dim; n += 2) d.col(n) *= -1.0;
  return d;
}

namespace detail {

inline double checked_real(cplx v, double scale = 1.0) {
  if (std::abs(v.imag()) > 1e-8 * std::max(1.0, scale))
    throw Error("phase-space value has imaginary part " + std::to_string(v.imag()));
  return v.real();
}

// Tr(rho A) for dense A.
inline cplx trace_product(const DenseMat& rho, const DenseMat& a) {
  return (rho.transpose().array() * a.array()).sum();
}

}  // namespace detail

/// W(x, p) = (1/pi) Tr[rho D(a) P D(a)^dag], normalised so that the integral
/// over dx dp is one. Rows of the result follow p, columns follow x.
inline WignerGrid wigner(const DensityState& rho, const GridSpec& spec = kSingleModeGrid) {
  if (rho.layout()->size() != 1) throw DimensionError("wigner expects a single-mode state");
  const std::string label = rho.layout()->modes()[0].label;
  WignerGrid g{{"x_" + label, -spec.extent, spec.extent, spec.n}, {"p_" + label, -spec.extent, spec.extent, spec.n}, {}};
  g.axis_x.validate();
  g.axis_y.validate();
  const int dim = rho.layout()->dim(0);
  g.values.resize(spec.n, spec.n);
  for (int r = 0; r < spec.n; ++r)
    for (int c = 0; c < spec.n; ++c)
      g.values(r, c) =
          detail::checked_real(detail::trace_product(rho.matrix(), displaced_parity(g.x(c), g.y(r), dim))) /
          std::numbers::pi;
  return g;
}

enum class Plane { XX, PP };

inline const char* plane_name(Plane p) { return p == Plane::XX ? "XX" : "PP"; }

/// Section of the two-mode Wigner function, (2/pi)^2 Tr[rho (D1 P1 D1^dag) x (D2 P2 D2^dag)],
/// through p1 = p2 = 0 (XX) or x1 = x2 = 0 (PP). Columns follow mode 1, rows mode 2.
inline WignerGrid joint_wigner_section(const DensityState& rho, Plane plane, const GridSpec& spec = kJointGrid) {
  const auto& layout = *rho.layout();
  if (layout.size() != 2) throw DimensionError("joint_wigner_section expects a two-mode state");
  const std::string q = plane == Plane::XX ? "x_" : "p_";
  WignerGrid g{{q + layout.modes()[0].label, -spec.extent, spec.extent, spec.n},
               {q + layout.modes()[1].label, -spec.extent, spec.extent, spec.n},
               {}};
  g.axis_x.validate();
  g.axis_y.validate();
  const int n1 = layout.dim(0), n2 = layout.dim(1);
  auto kernel = [&](double v, int dim) {
    return plane == Plane::XX ? displaced_parity(v, 0.0, dim) : displaced_parity(0.0, v, dim);
  };
  const DenseMat& r = rho.matrix();
  // C_y(n1, m1) = sum_{n2, m2} rho[(n1 n2), (m1 m2)] B_y(m2, n2)
  std::vector<DenseMat> contracted(static_cast<std::size_t>(spec.n));
  for (int row = 0; row < spec.n; ++row) {
    const DenseMat b = kernel(g.y(row), n2);
    DenseMat c = DenseMat::Zero(n1, n1);
    for (int a = 0; a < n1; ++a)
      for (int m = 0; m < n1; ++m)
        c(a, m) = (r.block(a * n2, m * n2, n2, n2).transpose().array() * b.array()).sum();
    contracted[static_cast<std::size_t>(row)] = std::move(c);
  }
  const double pref = 4.0 / (std::numbers::pi * std::numbers::pi);
  g.values.resize(spec.n, spec.n);
  for (int col = 0; col < spec.n; ++col) {
    const DenseMat a = kernel(g.x(col), n1);
    for (int row = 0; row < spec.n; ++row)
      g.values(row, col) =
          pref * detail::checked_real(detail::trace_product(contracted[static_cast<std::size_t>(row)], a));
  }
  return g;
}

// ---------------------------------------------------------------------------
// Moments

struct QuadratureStats {
  double mean_x = 0.0;
  double mean_p = 0.0;
  double var_x = 0.0;
  double var_p = 0.0;
};

inline double real_expectation(const DensityState& rho, const hilbert::Operator& op) {
  return detail::checked_real(rho.expectation(op));
}

inline QuadratureStats quadrature_stats(const DensityState& rho, std::string_view mode) {
  const auto q = hilbert::quadratures(mode, rho.layout());
  QuadratureStats s;
  s.mean_x = real_expectation(rho, q.x);
  s.mean_p = real_expectation(rho, q.p);
  s.var_x = real_expectation(rho, q.x * q.x) - s.mean_x * s.mean_x;
  s.var_p = real_expectation(rho, q.p * q.p) - s.mean_p * s.mean_p;
  return s;
}

/// Tr(rho A B) for commuting Hermitian A, B (e.g. quadratures of distinct modes).
inline double correlation(const DensityState& rho, const hilbert::Operator& a, const hilbert::Operator& b) {
  return real_expectation(rho, a * b);
}

struct QuadratureCorrelations {
  double xx = 0.0;
  double pp = 0.0;
};

inline QuadratureCorrelations correlations(const DensityState& rho, std::string_view mode1, std::string_view mode2) {
  if (mode1 == mode2) throw InvalidArgument("correlations need two distinct modes");
  const auto q1 = hilbert::quadratures(mode1, rho.layout());
  const auto q2 = hilbert::quadratures(mode2, rho.layout());
  return {correlation(rho, q1.x, q2.x), correlation(rho, q1.p, q2.p)};
}

// ---------------------------------------------------------------------------
// Components of a phase-space distribution

struct Component {
  std::size_t cells = 0;
  double mass = 0.0;  // sum of values times the cell area
  double centroid_x = 0.0;
  double centroid_y = 0.0;
  double peak = 0.0;
};

/// 4-connected regions where values exceed rel_threshold * max, largest mass first.
inline std::vector<Component> components(const WignerGrid& g, double rel_threshold = 0.5) {
  if (!(rel_threshold > 0.0 && rel_threshold < 1.0)) throw InvalidArgument("rel_threshold must lie in (0, 1)");
  if (g.values.size() == 0 || g.values.cwiseAbs().maxCoeff() == 0.0) throw InvalidArgument("grid is identically zero");
  const double peak = g.values.maxCoeff();
  if (!(peak > 0.0)) throw InvalidArgument("grid has no positive values");
  const double cut = rel_threshold * peak;
  const auto rows = g.values.rows(), cols = g.values.cols();
  std::vector<int> seen(static_cast<std::size_t>(rows * cols), 0);
  std::vector<Component> out;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> stack;
  for (Eigen::Index r0 = 0; r0 < rows; ++r0)
    for (Eigen::Index c0 = 0; c0 < cols; ++c0) {
      if (seen[static_cast<std::size_t>(r0 * cols + c0)] || !(g.values(r0, c0) > cut)) continue;
      Component comp;
      double wx = 0.0, wy = 0.0, w = 0.0;
      stack.assign(1, {r0, c0});
      seen[static_cast<std::size_t>(r0 * cols + c0)] = 1;
      while (!stack.empty()) {
        const auto [r, c] = stack.back();
        stack.pop_back();
        const double v = g.values(r, c);
        ++comp.cells;
        w += v;
        wx += v * g.x(static_cast<int>(c));
        wy += v * g.y(static_cast<int>(r));
        comp.peak = std::max(comp.peak, v);
        const std::array<std::pair<Eigen::Index, Eigen::Index>, 4> nb{{{r - 1, c}, {r + 1, c}, {r, c - 1}, {r, c + 1}}};
        for (const auto& [rr, cc] : nb) {
          if (rr < 0 || cc < 0 || rr >= rows || cc >= cols) continue;
          auto& flag = seen[static_cast<std::size_t>(rr * cols + cc)];
          if (flag || !(g.values(rr, cc) > cut)) continue;
          flag = 1;
          stack.emplace_back(rr, cc);
        }
      }
      comp.mass = w * g.cell_area();
      comp.centroid_x = wx / w;
      comp.centroid_y = wy / w;
      out.push_back(comp);
    }
  std::stable_sort(out.begin(), out.end(), [](const Component& a, const Component& b) { return a.mass > b.mass; });
  return out;
}

inline int count_components(const WignerGrid& g, double rel_threshold = 0.5) {
  return static_cast<int>(components(g, rel_threshold).size());
}

/// Distance between the centroids of the two heaviest components (0 if fewer than two).
inline double lobe_separation(const WignerGrid& g, double rel_threshold = 0.5) {
  const auto comps = components(g, rel_threshold);
  if (comps.size() < 2) return 0.0;
  return std::hypot(comps[0].centroid_x - comps[1].centroid_x, comps[0].centroid_y - comps[1].centroid_y);
}

// ---------------------------------------------------------------------------
// Ising readout

enum class Spin : int { down = -1, indeterminate = 0, up = 1 };

inline int value(Spin s) { return static_cast<int>(s); }

inline const char* spin_name(Spin s) {
  switch (s) {
    case Spin::up: return "+1";
    case Spin::down: return "-1";
    default: return "indeterminate";
  }
}

struct SpinReadout {
  std::array<Spin, 2> spins{Spin::indeterminate, Spin::indeterminate};
  std::array<std::string, 2> source{};  // "mean" or "wigner" or "none"
  Spin correlation = Spin::indeterminate;
  double pp = 0.0;
  std::array<double, 2> mean_p{0.0, 0.0};

  bool determinate() const { return spins[0] != Spin::indeterminate && spins[1] != Spin::indeterminate; }
};

struct ReadoutOptions {
  double mean_threshold = 1e-3;
  double correlation_threshold = 1e-3;
  double tie_tolerance = 1e-6;  // relative mass difference treated as a tie
  GridSpec grid = kSingleModeGrid;
};

namespace detail {

inline Spin sign_of(double v, double threshold) {
  if (v > threshold) return Spin::up;
  if (v < -threshold) return Spin::down;
  return Spin::indeterminate;
}

// Spin of the heaviest Wigner component, judged by the sign of its p centroid.
inline Spin spin_from_wigner(const DensityState& single, const ReadoutOptions& opt) {
  const auto comps = components(wigner(single, opt.grid), 0.5);
  if (comps.empty()) return Spin::indeterminate;
  if (comps.size() > 1 && comps[0].mass - comps[1].mass <= opt.tie_tolerance * comps[0].mass)
    return Spin::indeterminate;
  return sign_of(comps[0].centroid_y, 0.5 * opt.grid.extent / std::max(1, opt.grid.n - 1));
}

}  // namespace detail

struct ModeSpin {
  Spin spin = Spin::indeterminate;
  std::string source = "none";
  double mean_p = 0.0;
};

/// Spin of one mode of `rho`: sign of <p>, else the dominant Wigner lobe.
inline ModeSpin mode_spin(const DensityState& rho, const std::string& mode, const ReadoutOptions& opt = {}) {
  ModeSpin out;
  out.mean_p = real_expectation(rho, hilbert::quadratures(mode, rho.layout()).p);
  out.spin = detail::sign_of(out.mean_p, opt.mean_threshold);
  out.source = "mean";
  if (out.spin == Spin::indeterminate) {
    const auto single = rho.layout()->size() == 1 ? rho : partial_trace(rho, {mode});
    out.spin = detail::spin_from_wigner(single, opt);
    out.source = out.spin == Spin::indeterminate ? "none" : "wigner";
  }
  return out;
}

/// Spins from the sign of <p_i> (falling back on the dominant Wigner lobe when
/// <p_i> vanishes) and the coupling sign from <p_1 p_2>.
inline SpinReadout spin_readout(const DensityState& rho, const ReadoutOptions& opt = {}) {
  const auto& layout = *rho.layout();
  if (layout.size() != 2) throw DimensionError("spin_readout expects a two-mode state");
  SpinReadout out;
  const std::array<std::string, 2> labels{layout.modes()[0].label, layout.modes()[1].label};
  for (std::size_t i = 0; i < 2; ++i) {
    const auto m = mode_spin(rho, labels[i], opt);
    out.spins[i] = m.spin;
    out.source[i] = m.source;
    out.mean_p[i] = m.mean_p;
  }
  out.pp = correlations(rho, labels[0], labels[1]).pp;
  out.correlation = detail::sign_of(out.pp, opt.correlation_threshold);
  return out;
}

/// Readout of two named modes of a larger state.
inline SpinReadout spin_readout(const DensityState& rho, const std::string& mode1, const std::string& mode2,
                                const ReadoutOptions& opt = {}) {
  return spin_readout(partial_trace(rho, {mode1, mode2}), opt);
}

// ---------------------------------------------------------------------------
// Time-series checks

/// max |d<O>/dt| over the final `fraction` of the window, by finite differences.
inline double late_drift(const TimeSeries& s, std::string_view track, double fraction = 0.1) {
  const auto v = s.real(track);
  if (s.times.size() < 2) return 0.0;
  const double t_end = s.times.back();
  const double t_from = t_end - fraction * (t_end - s.times.front());
  double drift = 0.0;
  for (std::size_t k = 1; k < s.times.size(); ++k) {
    if (s.times[k - 1] < t_from) continue;
    const double dt = s.times[k] - s.times[k - 1];
    if (dt > 0.0) drift = std::max(drift, std::abs(v[k] - v[k - 1]) / dt);
  }
  return drift;
}

/// Steady when every real track drifts by less than `tol` per unit time at the end.
inline bool is_steady(const TimeSeries& s, double tol = 1e-4, double fraction = 0.1) {
  for (const auto& t : s.tracks)
    if (t.real && late_drift(s, t.name, fraction) >= tol) return false;
  return true;
}

struct ConvergenceReport {
  std::vector<int> dims;
  std::string observable;
  std::vector<double> times;
  std::vector<std::vector<double>> tracks;  // one per dim
  double max_deviation = 0.0;               // max over t and over dims of |O_N - O_ref|, ref = last dim
  double time_of_max = 0.0;
};

/// Run `run(dim)` for every dim and compare `observable` against the last one.
/// All runs must share the same sample grid.
inline ConvergenceReport convergence_check(const std::function<TimeSeries(int)>& run, const std::vector<int>& dims,
                                           const std::string& observable) {
  if (dims.empty()) throw InvalidArgument("convergence_check needs at least one truncation");
  ConvergenceReport rep;
  rep.dims = dims;
  rep.observable = observable;
  for (int d : dims) {
    const TimeSeries s = run(d);
    if (rep.tracks.empty()) rep.times = s.times;
    else if (s.times != rep.times) throw InvalidArgument("convergence runs produced different sample grids");
    rep.tracks.push_back(s.real(observable));
  }
  const auto& ref = rep.tracks.back();
  for (const auto& tr : rep.tracks)
    for (std::size_t k = 0; k < ref.size(); ++k) {
      const double dev = std::abs(tr[k] - ref[k]);
      if (dev > rep.max_deviation) {
        rep.max_deviation = dev;
        rep.time_of_max = rep.times[k];
      }
    }
  return rep;
}

}  // namespace dissim::analysis
