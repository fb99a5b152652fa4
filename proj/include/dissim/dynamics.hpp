#pragma once
// Density-matrix propagation under the Lindblad master equation
//   d rho/dt = -i[H(t), rho] + sum_k G_k/2 (2 L rho L^dag - L^dag L rho - rho L^dag L).

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "dissim/integrator.hpp"
#include "dissim/model.hpp"
#include "dissim/sectors.hpp"

namespace dissim::dynamics {

using hilbert::LayoutPtr;
using hilbert::Operator;
using model::LindbladModel;

/// Density matrix bound to a layout.
class DensityState {
 public:
  DensityState(LayoutPtr layout, DenseMat rho) : layout_(std::move(layout)), rho_(std::move(rho)) {
    const auto d = static_cast<Eigen::Index>(layout_->total_dim());
    if (rho_.rows() != d || rho_.cols() != d) throw DimensionError("density matrix does not match layout dimension");
  }

  static DensityState vacuum(LayoutPtr layout) {
    const auto d = static_cast<Eigen::Index>(layout->total_dim());
    DenseMat rho = DenseMat::Zero(d, d);
    rho(0, 0) = 1.0;
    return {std::move(layout), std::move(rho)};
  }

  /// |psi><psi| / <psi|psi>
  static DensityState pure(LayoutPtr layout, const Eigen::VectorXcd& psi) {
    const double n = psi.squaredNorm();
    if (!(n > 0.0)) throw InvalidArgument("cannot normalise a zero state vector");
    return {std::move(layout), psi * psi.adjoint() / n};
  }

  /// Fock state |n_0, n_1, ...> in layout order.
  static DensityState fock(LayoutPtr layout, const std::vector<int>& occupations) {
    if (occupations.size() != layout->size()) throw DimensionError("one occupation per mode expected");
    std::size_t index = 0;
    for (std::size_t k = 0; k < layout->size(); ++k) {
      if (occupations[k] < 0 || occupations[k] >= layout->dim(k)) throw DimensionError("occupation outside truncation");
      index += static_cast<std::size_t>(occupations[k]) * layout->stride(k);
    }
    const auto d = static_cast<Eigen::Index>(layout->total_dim());
    DenseMat rho = DenseMat::Zero(d, d);
    rho(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
    return {std::move(layout), std::move(rho)};
  }

  const LayoutPtr& layout() const { return layout_; }
  const DenseMat& matrix() const { return rho_; }
  std::size_t dim() const { return layout_->total_dim(); }

  cplx trace() const { return rho_.trace(); }
  double hermiticity_error() const { return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff(); }
  double purity() const { return (rho_ * rho_).trace().real(); }

  double min_eigenvalue() const {
    const DenseMat h = 0.5 * (rho_ + rho_.adjoint());
    Eigen::SelfAdjointEigenSolver<DenseMat> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }

  /// Tr(rho O)
  cplx expectation(const Operator& op) const {
    if (!hilbert::same_layout(op.layout(), layout_)) throw LayoutMismatch();
    cplx acc = 0.0;
    const auto& m = op.data();
    for (Eigen::Index r = 0; r < m.outerSize(); ++r)
      for (SparseMat::InnerIterator it(m, r); it; ++it) acc += it.value() * rho_(it.col(), it.row());
    return acc;
  }

 private:
  LayoutPtr layout_;
  DenseMat rho_;
};

/// Sampled times plus named observable tracks (one value per time).
struct TimeSeries {
  struct Track {
    std::string name;
    std::vector<cplx> values;
    bool real = true;  // imaginary part is meaningless (Hermitian observable)
  };

  std::vector<double> times;
  std::vector<Track> tracks;

  const Track& track(std::string_view name) const {
    for (const auto& t : tracks)
      if (t.name == name) return t;
    throw InvalidArgument("no track named '" + std::string(name) + "'");
  }
  bool has(std::string_view name) const {
    return std::any_of(tracks.begin(), tracks.end(), [&](const Track& t) { return t.name == name; });
  }
  std::vector<double> real(std::string_view name) const {
    const auto& t = track(name);
    std::vector<double> out(t.values.size());
    std::transform(t.values.begin(), t.values.end(), out.begin(), [](cplx v) { return v.real(); });
    return out;
  }
  void add(std::string name, std::vector<cplx> values, bool is_real = true) {
    if (values.size() != times.size()) throw DimensionError("track length must equal the number of samples");
    tracks.push_back({std::move(name), std::move(values), is_real});
  }
  bool consistent() const {
    return std::all_of(tracks.begin(), tracks.end(), [&](const Track& t) { return t.values.size() == times.size(); });
  }
};

struct Observable {
  std::string name;
  Operator op;
  bool real = true;
};

/// Reference right-hand side on a full dense matrix, written term by term.
inline DenseMat rhs(const LindbladModel& m, double t, const DensityState& rho) {
  if (!hilbert::same_layout(m.layout, rho.layout())) throw LayoutMismatch();
  const SparseMat h = m.hamiltonian(t).data();
  const DenseMat& r = rho.matrix();
  DenseMat out = -kI * (DenseMat(h * r) - DenseMat(r * h));
  for (const auto& d : m.dissipators) {
    if (d.rate == 0.0) continue;
    const SparseMat& L = d.jump.data();
    const SparseMat Ld = L.adjoint();
    const SparseMat LdL = Ld * L;
    const DenseMat LrLd = DenseMat(L * r) * Ld;
    out += (0.5 * d.rate) * (2.0 * LrLd - DenseMat(LdL * r) - DenseMat(r * LdL));
  }
  return out;
}

struct EvolveOptions {
  integrator::Tolerances tolerances{};
  double trace_abort = 1e-6;        // |Tr rho - 1| beyond this aborts
  double hermiticity_abort = 1e-10;
  double positivity_abort = 1e-6;   // min eigenvalue below -this aborts
  bool check_positivity = true;
  int positivity_stride = 1;        // check every k-th sample (the last one always)
  bool use_sectors = true;
  std::function<void(double, const DensityState&)> on_sample;  // optional
};

struct Diagnostics {
  double max_trace_error = 0.0;
  double max_hermiticity_error = 0.0;
  double min_eigenvalue = std::numeric_limits<double>::infinity();
  long accepted_steps = 0;
  long rejected_steps = 0;
  long rhs_evaluations = 0;
  double max_step = 0.0;
  std::size_t sectors = 1;
};

struct Evolution {
  TimeSeries series;
  DensityState final_state;
  Diagnostics diagnostics;
};

/// Thrown when a sampled state violates trace, Hermiticity or positivity.
class InvariantBreach : public Error {
 public:
  InvariantBreach(const std::string& what, TimeSeries partial) : Error(what), partial_(std::move(partial)) {}
  const TimeSeries& partial() const { return partial_; }

 private:
  TimeSeries partial_;
};

/// Sample grid 0, dt, 2dt, ... up to t_final (t_final always included).
inline std::vector<double> sample_times(double t_final, double dt) {
  if (!(t_final > 0.0)) throw InvalidArgument("t_final must be positive");
  if (!(dt > 0.0)) throw InvalidArgument("sample_dt must be positive");
  std::vector<double> out;
  const auto n = static_cast<long>(std::floor(t_final / dt + 1e-9));
  for (long k = 0; k <= n; ++k) out.push_back(std::min(t_final, static_cast<double>(k) * dt));
  if (t_final - out.back() > 1e-9 * std::max(1.0, t_final)) out.push_back(t_final);
  else out.back() = t_final;
  return out;
}

namespace detail {

// Sector blocks are stored "split": for sector s the real parts of its n x n
// block occupy [2*offset, 2*offset + n*n) row-major, the imaginary parts the
// following n*n entries.
using State = Eigen::VectorXd;

struct SplitBlock {
  const double* re;
  const double* im;
  Eigen::Index n;
  cplx operator()(Eigen::Index i, Eigen::Index j) const { return {re[i * n + j], im[i * n + j]}; }
};

inline SplitBlock block(const sectors::SectorPlan& plan, const State& y, std::size_t s) {
  const auto n = plan.block_size(s);
  const double* base = y.data() + 2 * plan.offset(s);
  return {base, base + n * n, n};
}

/// CSR matrix with separate real and imaginary value arrays.
struct SplitCsr {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  std::vector<Eigen::Index> ptr{0};
  std::vector<Eigen::Index> idx;
  std::vector<double> re, im;

  SplitCsr() = default;
  explicit SplitCsr(const SparseMat& m) : rows(m.rows()), cols(m.cols()) {
    ptr.assign(1, 0);
    for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
      for (SparseMat::InnerIterator it(m, r); it; ++it) {
        if (it.value() == cplx(0.0)) continue;
        idx.push_back(it.col());
        re.push_back(it.value().real());
        im.push_back(it.value().imag());
      }
      ptr.push_back(static_cast<Eigen::Index>(idx.size()));
    }
  }
};

/// Y = A B (or Y += A B) with B (A.cols x m) and Y (A.rows x m) split row-major.
/// With `upper` set only columns j >= i of row i are touched.
inline void spmm(const SplitCsr& a, const double* br, const double* bi, Eigen::Index m, double* yr, double* yi,
                 bool accumulate, bool upper = false) {
  for (Eigen::Index i = 0; i < a.rows; ++i) {
    const Eigen::Index j0 = upper ? i : 0;
    double* __restrict orr = yr + i * m;
    double* __restrict ori = yi + i * m;
    if (!accumulate)
      for (Eigen::Index j = j0; j < m; ++j) orr[j] = ori[j] = 0.0;
    Eigen::Index p = a.ptr[i];
    const Eigen::Index end = a.ptr[i + 1];
    for (; p + 1 < end; p += 2) {
      const double ur = a.re[p], ui = a.im[p], vr = a.re[p + 1], vi = a.im[p + 1];
      const double* __restrict kr = br + a.idx[p] * m;
      const double* __restrict ki = bi + a.idx[p] * m;
      const double* __restrict lr = br + a.idx[p + 1] * m;
      const double* __restrict li = bi + a.idx[p + 1] * m;
      for (Eigen::Index j = j0; j < m; ++j) {
        orr[j] += ur * kr[j] - ui * ki[j] + vr * lr[j] - vi * li[j];
        ori[j] += ur * ki[j] + ui * kr[j] + vr * li[j] + vi * lr[j];
      }
    }
    if (p < end) {
      const double ur = a.re[p], ui = a.im[p];
      const double* __restrict kr = br + a.idx[p] * m;
      const double* __restrict ki = bi + a.idx[p] * m;
      for (Eigen::Index j = j0; j < m; ++j) {
        orr[j] += ur * kr[j] - ui * ki[j];
        ori[j] += ur * ki[j] + ui * kr[j];
      }
    }
  }
}

/// t = conj(w)^T for a split rows x cols block, in cache-sized tiles.
inline void adjoint_into(const double* wr, const double* wi, Eigen::Index rows, Eigen::Index cols, double* tr,
                         double* ti) {
  constexpr Eigen::Index tb = 32;
  for (Eigen::Index i0 = 0; i0 < rows; i0 += tb)
    for (Eigen::Index j0 = 0; j0 < cols; j0 += tb) {
      const Eigen::Index i1 = std::min(i0 + tb, rows), j1 = std::min(j0 + tb, cols);
      for (Eigen::Index j = j0; j < j1; ++j)
        for (Eigen::Index i = i0; i < i1; ++i) {
          tr[j * rows + i] = wr[i * cols + j];
          ti[j * rows + i] = -wi[i * cols + j];
        }
    }
}

/// Liouvillian acting on the sector-block representation of rho. Operators are
/// pre-scaled: generator G = -i H_eff, jump J_k = sqrt(G_k / 2) L_k, so that
///   d rho = Y + Y^dag,  Y = G rho + sum_k J_k rho J_k^dag.
class BlockLiouvillian {
 public:
  BlockLiouvillian(const LindbladModel& m, const sectors::SectorPlan& plan) : model_(m), plan_(plan) {
    for (const auto& d : m.dissipators) {
      if (d.rate == 0.0) continue;
      const auto split = sectors::split(plan_, d.jump.data(), std::sqrt(0.5 * d.rate));
      Jump j;
      j.mask = split.mask;
      for (const auto& b : split.blocks) {
        j.blocks.emplace_back(b);
        j.doubled.emplace_back(SparseMat(2.0 * b));
      }
      jumps_.push_back(std::move(j));
      const SparseMat& L = d.jump.data();
      decay_.push_back(SparseMat(SparseMat(L.adjoint()) * L) * cplx(d.rate));
    }
    Eigen::Index largest = 0;
    for (std::size_t s = 0; s < plan_.count(); ++s) largest = std::max(largest, plan_.block_size(s));
    w_.resize(2 * largest * largest);
    wt_.resize(2 * largest * largest);
    diag_.resize(largest);
  }

  /// Rebuild the coherent part for the schedule segment containing t.
  void set_time(double t) {
    SparseMat heff = model_.hamiltonian(t).data();
    for (const auto& g : decay_) heff -= 0.5 * kI * g;
    const auto split = sectors::split(plan_, heff, -kI);
    if (split.mask != 0) throw InvalidArgument("Hamiltonian mixes parity sectors");
    generator_.clear();
    for (const auto& b : split.blocks) generator_.emplace_back(b);
  }

  void operator()(const State& y, State& dy) {
    for (std::size_t t = 0; t < plan_.count(); ++t) {
      const auto n = plan_.block_size(t);
      if (n == 0) continue;
      const double* in = y.data() + 2 * plan_.offset(t);
      double* re = dy.data() + 2 * plan_.offset(t);
      double* im = re + n * n;
      spmm(generator_[t], in, in + n * n, n, re, im, false);
      // Jump terms J rho J^dag are Hermitian: accumulate 2x their strict upper
      // triangle and 1x the diagonal, then let the symmetrisation below fill in.
      for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) diag_[i] = re[i * n + i];
      for (const auto& jump : jumps_) {
        const std::size_t s = t ^ jump.mask;
        const auto ns = plan_.block_size(s);
        if (ns == 0) continue;
        const double* src = y.data() + 2 * plan_.offset(s);
        double* wr = w_.data();
        double* wi = wr + n * ns;
        spmm(jump.blocks[s], src, src + ns * ns, ns, wr, wi, false);  // J rho: n x ns
        double* tr = wt_.data();
        double* ti = tr + ns * n;
        adjoint_into(wr, wi, n, ns, tr, ti);  // rho J^dag: ns x n
        spmm(jump.doubled[s], tr, ti, n, re, im, true, true);
      }
      for (Eigen::Index i = 0; i < n; ++i) {
        const double d0 = diag_[static_cast<std::size_t>(i)];
        re[i * n + i] = 2.0 * d0 + (re[i * n + i] - d0);
        im[i * n + i] = 0.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
          const double r = re[i * n + j] + re[j * n + i];
          const double c = im[i * n + j] - im[j * n + i];
          re[i * n + j] = r;
          re[j * n + i] = r;
          im[i * n + j] = c;
          im[j * n + i] = -c;
        }
      }
    }
  }

 private:
  struct Jump {
    std::uint32_t mask = 0;
    std::vector<SplitCsr> blocks;   // by source sector
    std::vector<SplitCsr> doubled;  // 2 x blocks
  };

  const LindbladModel& model_;
  const sectors::SectorPlan& plan_;
  std::vector<Jump> jumps_;
  std::vector<SparseMat> decay_;  // G_k L_k^dag L_k
  std::vector<SplitCsr> generator_;
  std::vector<double> w_, wt_, diag_;
};

inline State pack(const sectors::SectorPlan& plan, const DenseMat& rho_layout) {
  const DenseMat rho = plan.to_plan(rho_layout);
  State y(2 * plan.storage_size());
  for (std::size_t s = 0; s < plan.count(); ++s) {
    const auto& mem = plan.members(s);
    const auto n = static_cast<Eigen::Index>(mem.size());
    double* re = y.data() + 2 * plan.offset(s);
    double* im = re + n * n;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        const cplx v = rho(mem[i], mem[j]);
        re[i * n + j] = v.real();
        im[i * n + j] = v.imag();
      }
  }
  return y;
}

inline DenseMat unpack(const sectors::SectorPlan& plan, const State& y) {
  const auto d = static_cast<Eigen::Index>(plan.layout()->total_dim());
  DenseMat rho = DenseMat::Zero(d, d);
  for (std::size_t s = 0; s < plan.count(); ++s) {
    const auto& mem = plan.members(s);
    const auto b = block(plan, y, s);
    for (Eigen::Index i = 0; i < b.n; ++i)
      for (Eigen::Index j = 0; j < b.n; ++j) rho(mem[i], mem[j]) = b(i, j);
  }
  return plan.from_plan(rho);
}

inline DenseMat block_matrix(const sectors::SectorPlan& plan, const State& y, std::size_t s) {
  const auto b = block(plan, y, s);
  DenseMat m(b.n, b.n);
  for (Eigen::Index i = 0; i < b.n; ++i)
    for (Eigen::Index j = 0; j < b.n; ++j) m(i, j) = b(i, j);
  return m;
}

inline cplx block_trace(const sectors::SectorPlan& plan, const State& y) {
  cplx tr = 0.0;
  for (std::size_t s = 0; s < plan.count(); ++s) {
    const auto b = block(plan, y, s);
    for (Eigen::Index i = 0; i < b.n; ++i) tr += b(i, i);
  }
  return tr;
}

inline double block_hermiticity_error(const sectors::SectorPlan& plan, const State& y) {
  double e = 0.0;
  for (std::size_t s = 0; s < plan.count(); ++s) {
    const auto b = block(plan, y, s);
    for (Eigen::Index i = 0; i < b.n; ++i)
      for (Eigen::Index j = i; j < b.n; ++j) e = std::max(e, std::abs(b(i, j) - std::conj(b(j, i))));
  }
  return e;
}

inline double block_min_eigenvalue(const sectors::SectorPlan& plan, const State& y) {
  double e = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < plan.count(); ++s) {
    if (plan.block_size(s) == 0) continue;
    const DenseMat m = block_matrix(plan, y, s);
    const DenseMat h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<DenseMat> es(h, Eigen::EigenvaluesOnly);
    e = std::min(e, es.eigenvalues().minCoeff());
  }
  return e;
}

/// Tr(rho O) without leaving the block representation; `m` is O in the plan basis.
inline cplx block_expectation(const sectors::SectorPlan& plan, const State& y, const SparseMat& m) {
  cplx acc = 0.0;
  for (Eigen::Index r = 0; r < m.outerSize(); ++r)
    for (SparseMat::InnerIterator it(m, r); it; ++it) {
      const auto row = static_cast<std::size_t>(it.row());
      const auto col = static_cast<std::size_t>(it.col());
      const auto s = plan.sector_of(col);
      if (plan.sector_of(row) != s) continue;
      acc += it.value() * block(plan, y, s)(plan.position(col), plan.position(row));
    }
  return acc;
}

}  // namespace detail

/// Sector plan the propagator would use for this model and initial state.
inline sectors::SectorPlan plan_for(const LindbladModel& m, const DensityState& rho0) {
  std::vector<SparseMat> hamiltonians{m.hamiltonian(0.0).data()};
  for (double b : m.breakpoints()) hamiltonians.push_back(m.hamiltonian(b).data());
  std::vector<const SparseMat*> conserved, jumps;
  for (const auto& h : hamiltonians) conserved.push_back(&h);
  for (const auto& d : m.dissipators)
    if (d.rate != 0.0) jumps.push_back(&d.jump.data());
  return sectors::plan_sectors(m.layout, conserved, jumps, &rho0.matrix());
}

/// Integrate from t = 0 to t_final, recording Tr(rho O) for every observable
/// on the grid from `sample_times`. Piecewise-constant schedules are honoured
/// by restarting the integrator at every switching time.
inline Evolution evolve(const LindbladModel& m, const DensityState& rho0, double t_final, double sample_dt,
                        const std::vector<Observable>& observables, const EvolveOptions& opt = {}) {
  m.validate();
  if (!hilbert::same_layout(m.layout, rho0.layout())) throw LayoutMismatch();
  for (const auto& o : observables)
    if (!hilbert::same_layout(o.op.layout(), m.layout)) throw LayoutMismatch("observable '" + o.name + "' is on a foreign layout");
  if (std::abs(rho0.trace() - 1.0) > opt.trace_abort) throw InvalidArgument("initial state is not trace one");
  if (rho0.hermiticity_error() > opt.hermiticity_abort) throw InvalidArgument("initial state is not Hermitian");

  const auto times = sample_times(t_final, sample_dt);
  const sectors::SectorPlan plan = opt.use_sectors ? plan_for(m, rho0) : sectors::SectorPlan(m.layout);

  Diagnostics diag;
  diag.sectors = plan.count();
  TimeSeries series;
  std::vector<std::vector<cplx>> values(observables.size());

  std::vector<SparseMat> observed;
  for (const auto& o : observables) observed.push_back(plan.to_plan(o.op.data()));

  detail::BlockLiouvillian liouvillian(m, plan);
  integrator::DormandPrince<detail::State> stepper(
      [&](double, const detail::State& y, detail::State& dy) { liouvillian(y, dy); }, opt.tolerances);

  auto partial = [&]() {
    TimeSeries ts;
    ts.times = series.times;
    for (std::size_t k = 0; k < observables.size(); ++k)
      ts.tracks.push_back({observables[k].name, values[k], observables[k].real});
    return ts;
  };

  std::size_t sample_index = 0;
  auto record = [&](double t, const detail::State& y) {
    const double tr_err = std::abs(detail::block_trace(plan, y) - 1.0);
    const double herm = detail::block_hermiticity_error(plan, y);
    diag.max_trace_error = std::max(diag.max_trace_error, tr_err);
    diag.max_hermiticity_error = std::max(diag.max_hermiticity_error, herm);
    series.times.push_back(t);
    for (std::size_t k = 0; k < observables.size(); ++k)
      values[k].push_back(detail::block_expectation(plan, y, observed[k]));
    const bool last = sample_index + 1 == times.size();
    if (tr_err > opt.trace_abort)
      throw InvariantBreach("trace drifted by " + std::to_string(tr_err) + " at t = " + std::to_string(t), partial());
    if (herm > opt.hermiticity_abort)
      throw InvariantBreach("state lost Hermiticity at t = " + std::to_string(t), partial());
    if (opt.check_positivity && (last || sample_index % static_cast<std::size_t>(std::max(1, opt.positivity_stride)) == 0)) {
      const double e = detail::block_min_eigenvalue(plan, y);
      diag.min_eigenvalue = std::min(diag.min_eigenvalue, e);
      if (e < -opt.positivity_abort)
        throw InvariantBreach("negative eigenvalue " + std::to_string(e) + " at t = " + std::to_string(t), partial());
    }
    if (opt.on_sample) opt.on_sample(t, DensityState(m.layout, detail::unpack(plan, y)));
    ++sample_index;
  };

  // Segment boundaries: schedule switches inside (0, t_final), then t_final.
  std::vector<double> bounds;
  for (double b : m.breakpoints())
    if (b > 0.0 && b < t_final) bounds.push_back(b);
  bounds.push_back(t_final);

  detail::State y = detail::pack(plan, rho0.matrix());
  record(0.0, y);
  double t0 = 0.0;
  for (double t_end : bounds) {
    liouvillian.set_time(0.5 * (t0 + t_end));
    stepper.reset(t0, y);
    while (stepper.time() < t_end) {
      stepper.step(t_end);
      const double t = stepper.time();
      while (sample_index < times.size() && times[sample_index] <= t) {
        const double ts = times[sample_index];
        if (ts == t) record(ts, stepper.state());
        else record(ts, stepper.dense(ts));
      }
    }
    y = stepper.state();
    t0 = t_end;
    diag.accepted_steps += stepper.accepted_steps();
    diag.rejected_steps += stepper.rejected_steps();
    diag.rhs_evaluations += stepper.rhs_evaluations();
    diag.max_step = std::max(diag.max_step, stepper.max_step_taken());
    stepper = integrator::DormandPrince<detail::State>(
        [&](double, const detail::State& yy, detail::State& dy) { liouvillian(yy, dy); }, opt.tolerances);
  }

  series.tracks.clear();
  for (std::size_t k = 0; k < observables.size(); ++k)
    series.tracks.push_back({observables[k].name, std::move(values[k]), observables[k].real});
  return {std::move(series), DensityState(m.layout, detail::unpack(plan, y)), diag};
}

/// Same contract as `evolve`; schedules are handled there.
inline Evolution evolve_scheduled(const LindbladModel& m, const DensityState& rho0, double t_final, double sample_dt,
                                  const std::vector<Observable>& observables, const EvolveOptions& opt = {}) {
  return evolve(m, rho0, t_final, sample_dt, observables, opt);
}

}  // namespace dissim::dynamics
