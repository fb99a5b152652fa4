#pragma once
// Hamiltonian terms, dissipators and the Lindblad model they assemble into.

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dissim/hilbert.hpp"

namespace dissim::model {

using hilbert::LayoutPtr;
using hilbert::Operator;

/// Piecewise-constant complex coefficient. The last segment extends to infinity.
class Schedule {
 public:
  struct Segment {
    double t_start = 0.0;
    cplx value;
  };

  Schedule() : segments_{{0.0, cplx(0.0)}} {}
  Schedule(cplx constant) : segments_{{0.0, constant}} {}  // NOLINT(google-explicit-constructor)
  Schedule(double constant) : Schedule(cplx(constant)) {}  // NOLINT(google-explicit-constructor)

  explicit Schedule(std::vector<Segment> segments) : segments_(std::move(segments)) {
    if (segments_.empty()) throw InvalidArgument("schedule needs at least one segment");
    if (segments_.front().t_start != 0.0) throw InvalidArgument("first schedule segment must start at t = 0");
    for (std::size_t k = 1; k < segments_.size(); ++k)
      if (!(segments_[k].t_start > segments_[k - 1].t_start))
        throw InvalidArgument("schedule segment starts must be strictly increasing");
  }

  cplx at(double t) const {
    auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                               [](double v, const Segment& s) { return v < s.t_start; });
    if (it == segments_.begin()) return segments_.front().value;
    return std::prev(it)->value;
  }

  /// Switching times, i.e. every segment start except t = 0.
  std::vector<double> breakpoints() const {
    std::vector<double> out;
    for (std::size_t k = 1; k < segments_.size(); ++k) out.push_back(segments_[k].t_start);
    return out;
  }

  bool is_constant() const { return segments_.size() == 1; }
  const std::vector<Segment>& segments() const { return segments_; }

 private:
  std::vector<Segment> segments_;
};

/// coeff(t) * op, plus conj(coeff(t)) * op^dagger when `add_conjugate` is set.
struct HamiltonianTerm {
  std::string name;
  Operator op;
  Schedule coeff;
  bool add_conjugate = false;

  Operator at(double t) const {
    const cplx c = coeff.at(t);
    Operator h = op * c;
    if (add_conjugate) h = h + op.adjoint() * std::conj(c);
    return h;
  }
};

/// Contributes rate/2 * (2 L rho L^dagger - L^dagger L rho - rho L^dagger L).
struct Dissipator {
  std::string name;
  Operator jump;
  double rate = 0.0;
};

struct LindbladModel {
  LayoutPtr layout;
  std::vector<HamiltonianTerm> terms;
  std::vector<Dissipator> dissipators;
  std::string description;

  Operator hamiltonian(double t) const {
    Operator h = Operator::zero(layout);
    for (const auto& term : terms) h = h + term.at(t);
    return h;
  }

  /// Sorted union of all schedule switching times.
  std::vector<double> breakpoints() const {
    std::vector<double> out;
    for (const auto& term : terms)
      for (double b : term.coeff.breakpoints()) out.push_back(b);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  void validate() const {
    for (const auto& term : terms)
      if (!hilbert::same_layout(term.op.layout(), layout)) throw LayoutMismatch("term '" + term.name + "' is on a foreign layout");
    for (const auto& d : dissipators) {
      if (!hilbert::same_layout(d.jump.layout(), layout)) throw LayoutMismatch("dissipator '" + d.name + "' is on a foreign layout");
      if (!(d.rate >= 0.0)) throw InvalidArgument("dissipator '" + d.name + "' has a negative rate");
    }
  }
};

// ---------------------------------------------------------------------------
// Term builders. Mode arguments are labels in `layout`.

/// Degenerate two-quantum pump s* a^dag a^dag + s a a.
inline HamiltonianTerm two_quantum_pump(std::string name, Schedule s, std::string_view mode, const LayoutPtr& layout) {
  const auto a = hilbert::lowering(mode, layout);
  return {std::move(name), a * a, std::move(s), true};
}

inline HamiltonianTerm magnon_pump(Schedule s_a, std::string_view mode, const LayoutPtr& layout) {
  return two_quantum_pump("magnon_pump:" + std::string(mode), std::move(s_a), mode, layout);
}

inline HamiltonianTerm phonon_pump(Schedule s_b, std::string_view mode, const LayoutPtr& layout) {
  return two_quantum_pump("phonon_pump:" + std::string(mode), std::move(s_b), mode, layout);
}

/// K a^dag a^dag a a, diagonal with entries K n(n-1).
inline HamiltonianTerm self_kerr(double K, std::string_view mode, const LayoutPtr& layout) {
  const auto a = hilbert::lowering(mode, layout);
  const auto ad = a.adjoint();
  return {"self_kerr:" + std::string(mode), ad * ad * a * a, Schedule(K), false};
}

/// omega c^dag c
inline HamiltonianTerm mode_frequency(double omega, std::string_view mode, const LayoutPtr& layout) {
  const auto c = hilbert::lowering(mode, layout);
  return {"frequency:" + std::string(mode), c.adjoint() * c, Schedule(omega), false};
}

/// lambda (b + b^dag)(a c^dag + a^dag c)
inline HamiltonianTerm three_body(double lambda, std::string_view magnon, std::string_view phonon,
                                  std::string_view photon, const LayoutPtr& layout) {
  const auto a = hilbert::lowering(magnon, layout);
  const auto b = hilbert::lowering(phonon, layout);
  const auto c = hilbert::lowering(photon, layout);
  return {"three_body", (b + b.adjoint()) * a * c.adjoint(), Schedule(lambda), true};
}

struct CollectiveThreeBody {
  HamiltonianTerm symmetric;      // (b + b^dag) couples a1 + a2 to c1
  HamiltonianTerm antisymmetric;  // i(b - b^dag) couples a1 - a2 to c2
};

/// H_1 = lc (b+b^dag)[(a1+a2) c1^dag + h.c.],  H_2 = lc i(b-b^dag)[(a1-a2) c2^dag + h.c.]
inline CollectiveThreeBody collective_three_body(double lambda_c, std::string_view magnon1, std::string_view magnon2,
                                                 std::string_view phonon, std::string_view photon1,
                                                 std::string_view photon2, const LayoutPtr& layout) {
  const auto a1 = hilbert::lowering(magnon1, layout);
  const auto a2 = hilbert::lowering(magnon2, layout);
  const auto b = hilbert::lowering(phonon, layout);
  const auto c1 = hilbert::lowering(photon1, layout);
  const auto c2 = hilbert::lowering(photon2, layout);
  const auto x_like = b + b.adjoint();
  const auto p_like = (b - b.adjoint()) * kI;
  return {
      {"three_body_sym", x_like * (a1 + a2) * c1.adjoint(), Schedule(lambda_c), true},
      {"three_body_antisym", p_like * (a1 - a2) * c2.adjoint(), Schedule(lambda_c), true},
  };
}

// ---------------------------------------------------------------------------
// Dissipator builders.

inline Dissipator amplitude_loss(double rate, std::string_view mode, const LayoutPtr& layout) {
  if (!(rate >= 0.0)) throw InvalidArgument("loss rate must be non-negative");
  return {"loss:" + std::string(mode), hilbert::lowering(mode, layout), rate};
}

/// Rate lambda^2 / gamma_c left after eliminating a cavity coupled through a three-body term.
inline double eliminated_rate(double lambda, double gamma_c) {
  if (!(gamma_c > 0.0)) throw InvalidArgument("cavity loss gamma_c must be positive");
  return lambda * lambda / gamma_c;
}

/// Jump (b + b^dag) a at rate lambda^2/gamma_c. The global sign of the jump is irrelevant.
inline Dissipator effective_single_loss(double lambda, double gamma_c, std::string_view magnon, std::string_view phonon,
                                        const LayoutPtr& layout) {
  const double rate = eliminated_rate(lambda, gamma_c);
  const auto a = hilbert::lowering(magnon, layout);
  const auto b = hilbert::lowering(phonon, layout);
  return {"control_loss", (b + b.adjoint()) * a, rate};
}

struct DissipatorPair {
  Dissipator first;
  Dissipator second;
};

/// L1 = (b + b^dag)(a1 + a2), L2 = i(b^dag - b)(a1 - a2), both at lambda_c^2/gamma_c.
inline DissipatorPair effective_collective_loss(double lambda_c, double gamma_c, std::string_view magnon1,
                                                std::string_view magnon2, std::string_view phonon,
                                                const LayoutPtr& layout) {
  const double rate = eliminated_rate(lambda_c, gamma_c);
  const auto a1 = hilbert::lowering(magnon1, layout);
  const auto a2 = hilbert::lowering(magnon2, layout);
  const auto b = hilbert::lowering(phonon, layout);
  return {
      {"collective_sym", (b + b.adjoint()) * (a1 + a2), rate},
      {"collective_antisym", (b.adjoint() - b) * kI * (a1 - a2), rate},
  };
}

/// Phonon-independent collective losses with jumps (a1 + a2) and (a1 - a2).
/// The coupling lambda_m multiplies the jumps, so the rate applied is
/// gamma_ncc * lambda_m^2 unless `explicit_rate` is given. lambda_m = 0
/// switches both channels off.
inline DissipatorPair static_collective_loss(double lambda_m, double gamma_ncc, std::string_view magnon1,
                                             std::string_view magnon2, const LayoutPtr& layout,
                                             std::optional<double> explicit_rate = std::nullopt) {
  if (!(gamma_ncc >= 0.0)) throw InvalidArgument("static collective loss rate must be non-negative");
  double rate = explicit_rate.value_or(gamma_ncc * lambda_m * lambda_m);
  if (lambda_m == 0.0) rate = 0.0;
  if (!(rate >= 0.0)) throw InvalidArgument("static collective loss rate must be non-negative");
  const auto a1 = hilbert::lowering(magnon1, layout);
  const auto a2 = hilbert::lowering(magnon2, layout);
  return {{"static_sym", a1 + a2, rate}, {"static_antisym", a1 - a2, rate}};
}

}  // namespace dissim::model
