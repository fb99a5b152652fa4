#pragma once
// Dormand-Prince 5(4) with PI step control and fourth-order dense output.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "dissim/types.hpp"

namespace dissim::integrator {

struct Tolerances {
  double rtol = 1e-8;
  double atol = 1e-10;
  double max_step = std::numeric_limits<double>::infinity();
  double initial_step = 0.0;  // 0: choose automatically
  double min_step = 1e-12;
};

class StepUnderflow : public Error {
 public:
  using Error::Error;
};

namespace tableau {
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                        a76 = 11.0 / 84;
// b - b_hat
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;
// dense output
inline constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                        d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                        d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;
}  // namespace tableau

/// Adaptive integrator over a flat Eigen vector (real or complex). `Rhs` is
/// `void(double t, const Vec& y, Vec& dydt)`.
template <class Vec>
class DormandPrince {
 public:
  using Rhs = std::function<void(double, const Vec&, Vec&)>;

  DormandPrince(Rhs rhs, Tolerances tol) : rhs_(std::move(rhs)), tol_(tol) {}

  /// Start (or restart) at (t, y). Discards FSAL and controller memory.
  void reset(double t, const Vec& y) {
    t_ = t;
    y_ = y;
    const auto n = y.size();
    for (auto* v : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &ynew_, &tmp_}) v->resize(n);
    rhs_(t_, y_, k1_);
    ++nfev_;
    prev_err_ = 1e-4;
    if (h_ <= 0.0) h_ = tol_.initial_step > 0.0 ? tol_.initial_step : initial_step();
    h_ = std::min(h_, tol_.max_step);
    have_step_ = false;
  }

  /// Take one accepted step, never going past `t_limit`.
  void step(double t_limit) {
    using namespace tableau;
    const double span = t_limit - t_;
    bool clipped = false;
    for (;;) {
      double h = std::min(h_, tol_.max_step);
      if (h >= span) {
        clipped = h > span;
        h = span;
      }
      if (h < tol_.min_step * std::max(1.0, std::abs(t_)))
        throw StepUnderflow("integrator step size underflow at t = " + std::to_string(t_));

      tmp_ = y_ + (h * a21) * k1_;
      rhs_(t_ + c2 * h, tmp_, k2_);
      tmp_ = y_ + h * (a31 * k1_ + a32 * k2_);
      rhs_(t_ + c3 * h, tmp_, k3_);
      tmp_ = y_ + h * (a41 * k1_ + a42 * k2_ + a43 * k3_);
      rhs_(t_ + c4 * h, tmp_, k4_);
      tmp_ = y_ + h * (a51 * k1_ + a52 * k2_ + a53 * k3_ + a54 * k4_);
      rhs_(t_ + c5 * h, tmp_, k5_);
      tmp_ = y_ + h * (a61 * k1_ + a62 * k2_ + a63 * k3_ + a64 * k4_ + a65 * k5_);
      rhs_(t_ + h, tmp_, k6_);
      ynew_ = y_ + h * (a71 * k1_ + a73 * k3_ + a74 * k4_ + a75 * k5_ + a76 * k6_);
      rhs_(t_ + h, ynew_, k7_);
      nfev_ += 6;

      tmp_ = h * (e1 * k1_ + e3 * k3_ + e4 * k4_ + e5 * k5_ + e6 * k6_ + e7 * k7_);
      const double err = error_norm(tmp_);

      // PI controller (Hairer & Wanner, dopri5 defaults)
      constexpr double beta = 0.04, expo = 0.2 - beta * 0.75, safety = 0.9;
      if (err <= 1.0) {
        double fac = std::pow(err, expo) / std::pow(prev_err_, beta) / safety;
        fac = std::clamp(fac, 0.1, 5.0);  // growth <= 10x, shrink <= 5x
        prev_err_ = std::max(err, 1e-4);
        // Remember the step for dense output before advancing.
        h_last_ = h;
        t_prev_ = t_;
        have_step_ = true;
        dense_ready_ = false;
        std::swap(y_prev_, y_);
        y_ = ynew_;
        std::swap(k1_prev_, k1_);
        k1_ = k7_;  // FSAL
        t_ = (h == span) ? t_limit : t_ + h;
        ++accepted_;
        max_step_taken_ = std::max(max_step_taken_, h);
        // A step clipped by t_limit says nothing about the achievable size.
        if (!clipped) h_ = h / fac;
        return;
      }
      ++rejected_;
      h_ = h / std::min(1.0 / 0.2, std::pow(err, expo) / safety);
    }
  }

  /// Interpolate inside the last accepted step, t_prev <= t <= t.
  Vec dense(double t) {
    using namespace tableau;
    if (!have_step_) return y_;
    if (!dense_ready_) {
      const double h = h_last_;
      r2_ = y_ - y_prev_;
      r3_ = h * k1_prev_ - r2_;
      r4_ = r2_ - h * k1_ - r3_;
      // k1_ now holds f(t, y) = k7 of the last step
      r5_ = h * (d1 * k1_prev_ + d3 * k3_ + d4 * k4_ + d5 * k5_ + d6 * k6_ + d7 * k1_);
      dense_ready_ = true;
    }
    const double theta = (t - t_prev_) / h_last_;
    const double theta1 = 1.0 - theta;
    return y_prev_ + theta * (r2_ + theta1 * (r3_ + theta * (r4_ + theta1 * r5_)));
  }

  double time() const { return t_; }
  const Vec& state() const { return y_; }
  double previous_time() const { return t_prev_; }
  long rhs_evaluations() const { return nfev_; }
  long accepted_steps() const { return accepted_; }
  long rejected_steps() const { return rejected_; }
  double max_step_taken() const { return max_step_taken_; }
  double current_step() const { return h_; }

 private:
  double error_norm(const Vec& e) const {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < e.size(); ++i) {
      const double sc = tol_.atol + tol_.rtol * std::max(std::abs(y_[i]), std::abs(ynew_[i]));
      const double r = std::abs(e[i]) / sc;
      acc += r * r;
    }
    return std::sqrt(acc / static_cast<double>(std::max<Eigen::Index>(1, e.size())));
  }

  // Hairer's starting-step heuristic.
  double initial_step() {
    auto scaled = [&](const Vec& v) {
      double acc = 0.0;
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double r = std::abs(v[i]) / (tol_.atol + tol_.rtol * std::abs(y_[i]));
        acc += r * r;
      }
      return std::sqrt(acc / static_cast<double>(std::max<Eigen::Index>(1, v.size())));
    };
    const double d0 = scaled(y_), d1 = scaled(k1_);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, tol_.max_step);
    tmp_ = y_ + h0 * k1_;
    rhs_(t_ + h0, tmp_, k2_);
    ++nfev_;
    k2_ -= k1_;
    const double d2 = scaled(k2_) / h0;
    const double h1 = std::max(d1, d2) <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                                                 : std::pow(0.01 / std::max(d1, d2), 1.0 / 5.0);
    return std::min(100 * h0, h1);
  }

  Rhs rhs_;
  Tolerances tol_;
  double t_ = 0.0, t_prev_ = 0.0, h_ = 0.0, h_last_ = 0.0, prev_err_ = 1e-4, max_step_taken_ = 0.0;
  bool have_step_ = false, dense_ready_ = false;
  long nfev_ = 0, accepted_ = 0, rejected_ = 0;
  Vec y_, y_prev_, ynew_, tmp_, k1_, k2_, k3_, k4_, k5_, k6_, k7_, k1_prev_;
  Vec r2_, r3_, r4_, r5_;
};

}  // namespace dissim::integrator
