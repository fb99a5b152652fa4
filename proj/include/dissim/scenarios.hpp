#pragma once
// Named scenarios: parameter tables, model assembly, observables and outputs.
//
// Mode labels: "a" (single magnon), "a1"/"a2" (magnon pair), "b" (phonon),
// "c", "c1", "c2" (photons). Magnon modes come first in every layout.

#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "dissim/dynamics.hpp"
#include "dissim/model.hpp"

namespace dissim::scenarios {

using dynamics::DensityState;
using dynamics::Observable;
using hilbert::LayoutPtr;
using model::LindbladModel;
using model::Schedule;

class UnknownScenario : public InvalidArgument {
 public:
  explicit UnknownScenario(const std::string& name) : InvalidArgument("unknown scenario '" + name + "'") {}
};

class UnknownParameter : public InvalidArgument {
 public:
  UnknownParameter(const std::string& scenario, const std::string& key)
      : InvalidArgument("scenario '" + scenario + "' has no parameter '" + key + "'") {}
};

// ---------------------------------------------------------------------------
// Values

/// Parses "1.5", "-2", "2.4i", "-i", "0.3+0.4i", "1e-3-2.5e-1i".
inline std::optional<cplx> parse_complex(const std::string& text) {
  static const std::string num = R"((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)";
  static const std::regex real_re(R"(^\s*([+-]?)" + num + R"()\s*$)");
  static const std::regex imag_re(R"(^\s*([+-]?)\s*()" + num + R"()?\s*i\s*$)");
  static const std::regex full_re(R"(^\s*([+-]?)" + num + R"()\s*([+-])\s*()" + num + R"()?\s*i\s*$)");
  auto imag = [](const std::string& sign, const std::ssub_match& mag) {
    const double v = mag.matched && mag.length() > 0 ? std::stod(mag.str()) : 1.0;
    return sign == "-" ? -v : v;
  };
  std::smatch m;
  if (std::regex_match(text, m, real_re)) return cplx(std::stod(m[1].str()), 0.0);
  if (std::regex_match(text, m, imag_re)) return cplx(0.0, imag(m[1].str(), m[2]));
  if (std::regex_match(text, m, full_re)) return cplx(std::stod(m[1].str()), imag(m[2].str(), m[3]));
  return std::nullopt;
}

/// Shortest text that parses back to the same double.
inline std::string format_real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string format_complex(cplx v) {
  if (v.imag() == 0.0) return format_real(v.real());
  const std::string im = format_real(std::abs(v.imag())) + "i";
  if (v.real() == 0.0) return (v.imag() < 0.0 ? "-" : "") + im;
  return format_real(v.real()) + (v.imag() < 0.0 ? "-" : "+") + im;
}

enum class Kind { Integer, Real, Complex };

struct Param {
  std::string key;
  Kind kind = Kind::Real;
  cplx value;
  std::string note;
  bool derived = false;  // computed from other parameters, not overridable

  std::string text() const {
    switch (kind) {
      case Kind::Integer: return std::to_string(static_cast<long>(value.real()));
      case Kind::Real: return format_real(value.real());
      default: return format_complex(value);
    }
  }
};

/// Ordered parameter table of one scenario.
class ParamSet {
 public:
  void declare(std::string key, Kind kind, cplx value, std::string note) {
    items_.push_back({std::move(key), kind, value, std::move(note), false});
  }
  void derive(std::string key, double value, std::string note) {
    if (auto* p = find(key)) {
      p->value = value;
      return;
    }
    items_.push_back({std::move(key), Kind::Real, value, std::move(note), true});
  }

  bool has(const std::string& key) const { return find(key) != nullptr; }
  const std::vector<Param>& items() const { return items_; }

  const Param& at(const std::string& key) const {
    if (const auto* p = find(key)) return *p;
    throw InvalidArgument("no parameter '" + key + "'");
  }
  cplx complex(const std::string& key) const { return at(key).value; }
  double real(const std::string& key) const { return at(key).value.real(); }
  int integer(const std::string& key) const { return static_cast<int>(at(key).value.real()); }

  /// Override from text. Returns an error message on failure.
  std::optional<std::string> set(const std::string& key, const std::string& text) {
    auto* p = find(key);
    if (!p) return "unknown parameter '" + key + "'";
    if (p->derived) return "parameter '" + key + "' is derived and cannot be overridden";
    const auto v = parse_complex(text);
    if (!v) return "cannot parse value '" + text + "' for '" + key + "'";
    if (p->kind != Kind::Complex && v->imag() != 0.0) return "parameter '" + key + "' must be real";
    if (p->kind == Kind::Integer && v->real() != std::floor(v->real())) return "parameter '" + key + "' must be an integer";
    p->value = *v;
    return std::nullopt;
  }

 private:
  Param* find(const std::string& key) {
    for (auto& p : items_)
      if (p.key == key) return &p;
    return nullptr;
  }
  const Param* find(const std::string& key) const {
    for (const auto& p : items_)
      if (p.key == key) return &p;
    return nullptr;
  }

  std::vector<Param> items_;
};

// ---------------------------------------------------------------------------
// Scenario

struct WignerRequest {
  enum class Type { SingleMode, JointXX, JointPP };
  std::string tag;
  Type type = Type::SingleMode;
  std::vector<std::string> modes;  // one label, or the two magnon labels
};

struct ScenarioBody {
  std::string name;
  std::string description;
  std::string time_unit;
  ParamSet params;
  LindbladModel model;
  double t_final = 20.0;
  double sample_dt = 0.1;
  std::vector<Observable> observables;
  std::vector<std::string> magnons;  // spin-carrying modes
  std::vector<WignerRequest> wigner;
  std::vector<std::string> variance_modes;  // modes whose var_x / var_p tracks are derived
};

struct Scenario : ScenarioBody {
  DensityState initial;
};

struct ScenarioInfo {
  std::string name;
  std::string description;
};

inline const std::vector<ScenarioInfo>& catalogue() {
  static const std::vector<ScenarioInfo> list{
      {"fig2a", "isolated phonon, s_b = 2.4i: position squeezing"},
      {"fig2b", "isolated phonon, s_b = -2.4i: momentum squeezing"},
      {"fig3a", "single magnon with switchable loss, s_b = 2.4i (bistable)"},
      {"fig3b", "single magnon with switchable loss, s_b = -2.4i (single component)"},
      {"fig3c", "single magnon with switchable loss, s_b = 1.5i"},
      {"fig3d", "single magnon with switchable loss, s_b = -1.5i"},
      {"fig5ab", "two magnons with collective losses, s_b = 2.4i, joint Wigner sections"},
      {"fig5cd", "two magnons with collective losses, s_b = -2.4i, joint Wigner sections"},
      {"fig6ab", "two magnons, s_a = 0.6, s_b = 1i: momentum correlation dynamics"},
      {"fig6c", "two magnons, s_b switched from 1i to -1i at t = 20"},
      {"fig7ab", "two magnons with static losses, s_a = 4.2, s_b = 2.4i"},
      {"fig7cd", "two magnons with static losses, s_a = 4.2, s_b = -2.4i"},
      {"fig8", "two magnons with static losses, s_b switched from -2.4i to 2.4i at t = 10"},
      {"full3body", "magnon, phonon and damped photon with the three-body coupling"},
      {"full3body_collective", "two magnons, phonon and two damped photons with both three-body couplings"},
  };
  return list;
}

inline bool known(const std::string& name) {
  for (const auto& s : catalogue())
    if (s.name == name) return true;
  return false;
}

namespace detail {

inline std::vector<Observable> quadrature_observables(const std::string& mode, const LayoutPtr& layout) {
  const auto q = hilbert::quadratures(mode, layout);
  const auto a = hilbert::lowering(mode, layout);
  return {{"x_" + mode, q.x, true},
          {"p_" + mode, q.p, true},
          {"xx_" + mode, q.x * q.x, true},
          {"pp_" + mode, q.p * q.p, true},
          {"n_" + mode, a.adjoint() * a, true}};
}

inline Observable number_observable(const std::string& mode, const LayoutPtr& layout) {
  const auto a = hilbert::lowering(mode, layout);
  return {"n_" + mode, a.adjoint() * a, true};
}

inline std::vector<Observable> pair_observables(const LayoutPtr& layout) {
  const auto q1 = hilbert::quadratures("a1", layout);
  const auto q2 = hilbert::quadratures("a2", layout);
  return {{"p1p2", q1.p * q2.p, true},     {"x1x2", q1.x * q2.x, true},
          {"p_a1", q1.p, true},            {"p_a2", q2.p, true},
          number_observable("a1", layout), number_observable("a2", layout),
          number_observable("b", layout)};
}

inline void common_time(ParamSet& p, double t_final) {
  p.declare("t_final", Kind::Real, t_final, "evolution time");
}

inline Schedule pump_schedule(const ParamSet& p, const std::string& key) {
  if (!p.has("t_switch")) return Schedule(p.complex(key));
  const double ts = p.real("t_switch");
  if (!(ts > 0.0)) throw InvalidArgument("t_switch must be positive");
  return Schedule({{0.0, p.complex(key)}, {ts, p.complex(key + "_after")}});
}

inline int checked_dim(const ParamSet& p, const std::string& key) {
  const int n = p.integer(key);
  if (n < 2) throw DimensionError("parameter '" + key + "' must be >= 2");
  return n;
}

// --- families ----------------------------------------------------------------

inline ParamSet phonon_params(cplx s_b) {
  ParamSet p;
  p.declare("N_b", Kind::Integer, 25, "phonon Fock truncation");
  p.declare("s_b", Kind::Complex, s_b, "two-phonon pump");
  p.declare("Gamma_b", Kind::Real, 10.0, "phonon damping rate");
  common_time(p, 20.0);
  return p;
}

inline ParamSet single_magnon_params(cplx s_b) {
  ParamSet p;
  p.declare("N", Kind::Integer, 20, "magnon Fock truncation");
  p.declare("N_b", Kind::Integer, 30, "phonon Fock truncation (the pump sits close to threshold)");
  p.declare("s_a", Kind::Complex, 1.0, "two-magnon pump");
  p.declare("K", Kind::Real, 0.75, "self-Kerr coefficient");
  p.declare("s_b", Kind::Complex, s_b, "two-phonon pump");
  p.declare("Gamma_b", Kind::Real, 10.0, "phonon damping rate");
  p.declare("lambda", Kind::Real, 0.8, "three-body coupling of the eliminated photon");
  p.declare("gamma_c", Kind::Real, 1.0, "cavity loss of the eliminated photon");
  common_time(p, 20.0);
  return p;
}

inline ParamSet pair_params(int n, cplx s_a, cplx s_b, double t_final) {
  ParamSet p;
  p.declare("N", Kind::Integer, n, "magnon Fock truncation (each magnon)");
  p.declare("N_b", Kind::Integer, 10, "phonon Fock truncation");
  p.declare("s_a", Kind::Complex, s_a, "two-magnon pump on each magnon");
  p.declare("K", Kind::Real, 0.75, "self-Kerr coefficient");
  p.declare("s_b", Kind::Complex, s_b, "two-phonon pump");
  p.declare("Gamma_b", Kind::Real, 10.0, "phonon damping rate");
  p.declare("lambda", Kind::Real, 0.8, "collective three-body coupling of the eliminated photons");
  p.declare("gamma_c", Kind::Real, 1.0, "cavity loss of the eliminated photons");
  common_time(p, t_final);
  return p;
}

inline void add_static_losses(ParamSet& p) {
  p.declare("lambda_m", Kind::Real, 2.0, "zeroth-order magnon-cavity coupling (0 disables the static channels)");
  p.declare("Gamma_ncc", Kind::Real, 4.0, "rate of each static collective channel");
}

inline void add_switch(ParamSet& p, cplx after, double t_switch) {
  p.declare("s_b_after", Kind::Complex, after, "two-phonon pump after the switch");
  p.declare("t_switch", Kind::Real, t_switch, "switching time of the phonon pump");
}

inline ParamSet full_single_params() {
  ParamSet p;
  p.declare("N", Kind::Integer, 6, "magnon Fock truncation");
  p.declare("N_b", Kind::Integer, 6, "phonon Fock truncation");
  p.declare("N_c", Kind::Integer, 3, "photon Fock truncation");
  p.declare("s_a", Kind::Complex, 1.0, "two-magnon pump");
  p.declare("K", Kind::Real, 0.75, "self-Kerr coefficient");
  p.declare("s_b", Kind::Complex, cplx(0.0, 2.4), "two-phonon pump");
  p.declare("Gamma_b", Kind::Real, 10.0, "phonon damping rate");
  p.declare("lambda", Kind::Real, 0.4, "three-body coupling");
  p.declare("gamma_c", Kind::Real, 4.0, "cavity loss");
  p.declare("omega_c", Kind::Real, 0.0, "photon frequency in the rotating frame");
  common_time(p, 5.0);
  return p;
}

inline ParamSet full_collective_params() {
  ParamSet p;
  p.declare("N", Kind::Integer, 3, "magnon Fock truncation (each magnon)");
  p.declare("N_b", Kind::Integer, 6, "phonon Fock truncation");
  p.declare("N_c", Kind::Integer, 2, "photon Fock truncation (each photon)");
  p.declare("s_a", Kind::Complex, 0.0, "two-magnon pump on each magnon");
  p.declare("K", Kind::Real, 0.0, "self-Kerr coefficient");
  p.declare("s_b", Kind::Complex, cplx(0.0, 2.4), "two-phonon pump");
  p.declare("Gamma_b", Kind::Real, 10.0, "phonon damping rate");
  p.declare("lambda", Kind::Real, 0.4, "collective three-body coupling");
  p.declare("gamma_c", Kind::Real, 4.0, "cavity loss (each photon)");
  p.declare("omega_c", Kind::Real, 0.0, "photon frequency in the rotating frame");
  common_time(p, 5.0);
  return p;
}

inline ParamSet defaults(const std::string& name) {
  const cplx i24(0.0, 2.4), i15(0.0, 1.5), i1(0.0, 1.0);
  if (name == "fig2a") return phonon_params(i24);
  if (name == "fig2b") return phonon_params(-i24);
  if (name == "fig3a") return single_magnon_params(i24);
  if (name == "fig3b") return single_magnon_params(-i24);
  if (name == "fig3c") return single_magnon_params(i15);
  if (name == "fig3d") return single_magnon_params(-i15);
  if (name == "fig5ab") return pair_params(15, 1.0, i24, 20.0);
  if (name == "fig5cd") return pair_params(15, 1.0, -i24, 20.0);
  if (name == "fig6ab") return pair_params(12, 0.6, i1, 20.0);
  if (name == "fig6c") {
    auto p = pair_params(12, 0.6, i1, 40.0);
    add_switch(p, -i1, 20.0);
    return p;
  }
  if (name == "fig7ab" || name == "fig7cd") {
    auto p = pair_params(12, 4.2, name == "fig7ab" ? i24 : -i24, 20.0);
    add_static_losses(p);
    return p;
  }
  if (name == "fig8") {
    auto p = pair_params(12, 4.2, -i24, 20.0);
    add_static_losses(p);
    add_switch(p, i24, 10.0);
    return p;
  }
  if (name == "full3body") return full_single_params();
  if (name == "full3body_collective") return full_collective_params();
  throw UnknownScenario(name);
}

}  // namespace detail

// --- model assembly shared with the elimination oracle ------------------------

/// Magnon-phonon model with the photon eliminated into (b + b^dag) a at rate lambda^2/gamma_c.
inline LindbladModel effective_single_model(const ParamSet& p, const LayoutPtr& layout) {
  LindbladModel m{layout, {}, {}, "magnon and phonon with eliminated photon"};
  m.terms.push_back(model::magnon_pump(p.complex("s_a"), "a", layout));
  m.terms.push_back(model::self_kerr(p.real("K"), "a", layout));
  m.terms.push_back(model::phonon_pump(detail::pump_schedule(p, "s_b"), "b", layout));
  m.dissipators.push_back(model::effective_single_loss(p.real("lambda"), p.real("gamma_c"), "a", "b", layout));
  m.dissipators.push_back(model::amplitude_loss(p.real("Gamma_b"), "b", layout));
  return m;
}

/// Photon Lindblad rate giving the eliminated rate lambda^2/gamma_c: kappa = 4 gamma_c.
inline double photon_rate(double gamma_c) { return 4.0 * gamma_c; }

inline LindbladModel full_single_model(const ParamSet& p, const LayoutPtr& layout) {
  LindbladModel m{layout, {}, {}, "magnon, phonon and photon with three-body coupling"};
  m.terms.push_back(model::magnon_pump(p.complex("s_a"), "a", layout));
  m.terms.push_back(model::self_kerr(p.real("K"), "a", layout));
  m.terms.push_back(model::phonon_pump(detail::pump_schedule(p, "s_b"), "b", layout));
  m.terms.push_back(model::three_body(p.real("lambda"), "a", "b", "c", layout));
  if (p.real("omega_c") != 0.0) m.terms.push_back(model::mode_frequency(p.real("omega_c"), "c", layout));
  const double gc = p.real("gamma_c");
  if (!(gc > 0.0)) throw InvalidArgument("cavity loss gamma_c must be positive");
  m.dissipators.push_back(model::amplitude_loss(photon_rate(gc), "c", layout));
  m.dissipators.push_back(model::amplitude_loss(p.real("Gamma_b"), "b", layout));
  return m;
}

inline void add_pair_pumps(LindbladModel& m, const ParamSet& p, const LayoutPtr& layout) {
  for (const char* a : {"a1", "a2"}) {
    m.terms.push_back(model::magnon_pump(p.complex("s_a"), a, layout));
    m.terms.push_back(model::self_kerr(p.real("K"), a, layout));
  }
  m.terms.push_back(model::phonon_pump(detail::pump_schedule(p, "s_b"), "b", layout));
}

inline LindbladModel effective_pair_model(const ParamSet& p, const LayoutPtr& layout) {
  LindbladModel m{layout, {}, {}, "two magnons and phonon with eliminated photons"};
  add_pair_pumps(m, p, layout);
  auto pair = model::effective_collective_loss(p.real("lambda"), p.real("gamma_c"), "a1", "a2", "b", layout);
  m.dissipators.push_back(pair.first);
  m.dissipators.push_back(pair.second);
  m.dissipators.push_back(model::amplitude_loss(p.real("Gamma_b"), "b", layout));
  if (p.has("lambda_m")) {
    auto stat = model::static_collective_loss(p.real("lambda_m"), p.real("Gamma_ncc"), "a1", "a2", layout,
                                              p.real("Gamma_ncc"));
    m.dissipators.push_back(stat.first);
    m.dissipators.push_back(stat.second);
  }
  return m;
}

inline LindbladModel full_pair_model(const ParamSet& p, const LayoutPtr& layout) {
  LindbladModel m{layout, {}, {}, "two magnons, phonon and two photons with collective three-body couplings"};
  add_pair_pumps(m, p, layout);
  auto h = model::collective_three_body(p.real("lambda"), "a1", "a2", "b", "c1", "c2", layout);
  m.terms.push_back(h.symmetric);
  m.terms.push_back(h.antisymmetric);
  if (p.real("omega_c") != 0.0)
    for (const char* c : {"c1", "c2"}) m.terms.push_back(model::mode_frequency(p.real("omega_c"), c, layout));
  const double gc = p.real("gamma_c");
  if (!(gc > 0.0)) throw InvalidArgument("cavity loss gamma_c must be positive");
  for (const char* c : {"c1", "c2"}) m.dissipators.push_back(model::amplitude_loss(photon_rate(gc), c, layout));
  m.dissipators.push_back(model::amplitude_loss(p.real("Gamma_b"), "b", layout));
  return m;
}

namespace detail {

inline void add_derived(const std::string& name, ParamSet& p) {
  if (name.rfind("fig3", 0) == 0 || name == "full3body")
    p.derive("Gamma_control", model::eliminated_rate(p.real("lambda"), p.real("gamma_c")),
             "eliminated loss rate lambda^2/gamma_c");
  if (name.rfind("fig5", 0) == 0 || name.rfind("fig6", 0) == 0 || name.rfind("fig7", 0) == 0 || name == "fig8" ||
      name == "full3body_collective")
    p.derive("Gamma_cc", model::eliminated_rate(p.real("lambda"), p.real("gamma_c")),
             "eliminated collective loss rate lambda^2/gamma_c");
  if (name.rfind("full3body", 0) == 0) p.derive("kappa", photon_rate(p.real("gamma_c")), "photon Lindblad rate 4 gamma_c");
}

}  // namespace detail

inline ParamSet default_params(const std::string& name) {
  auto p = detail::defaults(name);
  detail::add_derived(name, p);
  return p;
}

/// Build a scenario from its defaults plus textual overrides.
inline Scenario build_scenario(const std::string& name, const std::map<std::string, std::string>& overrides = {}) {
  if (!known(name)) throw UnknownScenario(name);
  ScenarioBody sc;
  sc.name = name;
  for (const auto& s : catalogue())
    if (s.name == name) sc.description = s.description;
  sc.params = detail::defaults(name);
  for (const auto& [key, text] : overrides) {
    if (!sc.params.has(key)) throw UnknownParameter(name, key);
    if (auto err = sc.params.set(key, text)) throw InvalidArgument(*err);
  }
  detail::add_derived(name, sc.params);
  const auto& p = sc.params;
  sc.t_final = p.real("t_final");
  if (!(sc.t_final > 0.0)) throw InvalidArgument("t_final must be positive");
  sc.time_unit = "1/s_a";

  LayoutPtr layout;
  if (name.rfind("fig2", 0) == 0) {
    sc.time_unit = "1/|s_b|";
    layout = hilbert::make_layout({{"b", detail::checked_dim(p, "N_b")}});
    sc.model = LindbladModel{layout, {}, {}, sc.description};
    sc.model.terms.push_back(model::phonon_pump(p.complex("s_b"), "b", layout));
    sc.model.dissipators.push_back(model::amplitude_loss(p.real("Gamma_b"), "b", layout));
    sc.observables = detail::quadrature_observables("b", layout);
    sc.variance_modes = {"b"};
    sc.wigner = {{"b", WignerRequest::Type::SingleMode, {"b"}}};
  } else if (name.rfind("fig3", 0) == 0) {
    layout = hilbert::make_layout({{"a", detail::checked_dim(p, "N")}, {"b", detail::checked_dim(p, "N_b")}});
    sc.model = effective_single_model(p, layout);
    sc.model.description = sc.description;
    sc.observables = detail::quadrature_observables("a", layout);
    sc.observables.push_back(detail::number_observable("b", layout));
    sc.variance_modes = {"a"};
    sc.magnons = {"a"};
    sc.wigner = {{"a", WignerRequest::Type::SingleMode, {"a"}}};
  } else if (name == "full3body") {
    layout = hilbert::make_layout({{"a", detail::checked_dim(p, "N")},
                                   {"b", detail::checked_dim(p, "N_b")},
                                   {"c", detail::checked_dim(p, "N_c")}});
    sc.model = full_single_model(p, layout);
    sc.observables = detail::quadrature_observables("a", layout);
    sc.observables.push_back(detail::number_observable("b", layout));
    sc.observables.push_back(detail::number_observable("c", layout));
    sc.variance_modes = {"a"};
    sc.magnons = {"a"};
    sc.wigner = {{"a", WignerRequest::Type::SingleMode, {"a"}}};
  } else if (name == "full3body_collective") {
    const int n = detail::checked_dim(p, "N"), nc = detail::checked_dim(p, "N_c");
    layout = hilbert::make_layout(
        {{"a1", n}, {"a2", n}, {"b", detail::checked_dim(p, "N_b")}, {"c1", nc}, {"c2", nc}});
    sc.model = full_pair_model(p, layout);
    sc.observables = detail::pair_observables(layout);
    sc.observables.push_back(detail::number_observable("c1", layout));
    sc.observables.push_back(detail::number_observable("c2", layout));
    sc.magnons = {"a1", "a2"};
  } else {
    const int n = detail::checked_dim(p, "N");
    layout = hilbert::make_layout({{"a1", n}, {"a2", n}, {"b", detail::checked_dim(p, "N_b")}});
    sc.model = effective_pair_model(p, layout);
    sc.model.description = sc.description;
    sc.observables = detail::pair_observables(layout);
    sc.magnons = {"a1", "a2"};
    if (name.rfind("fig5", 0) == 0 || name.rfind("fig7", 0) == 0)
      sc.wigner = {{"XX", WignerRequest::Type::JointXX, {"a1", "a2"}},
                   {"PP", WignerRequest::Type::JointPP, {"a1", "a2"}}};
  }
  sc.model.validate();
  // The collective oracle starts from one excitation in a1, which populates both (a1 +- a2) channels.
  auto initial = name == "full3body_collective" ? DensityState::fock(layout, {1, 0, 0, 0, 0})
                                                : DensityState::vacuum(layout);
  return Scenario{std::move(sc), std::move(initial)};
}

}  // namespace dissim::scenarios
