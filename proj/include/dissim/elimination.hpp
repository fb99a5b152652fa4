#pragma once
// Full three-body models with explicit photons versus their eliminated counterparts.

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "dissim/analysis.hpp"
#include "dissim/scenarios.hpp"

namespace dissim::elimination {

using dynamics::DensityState;

/// Half the sum of the absolute eigenvalues of (a - b).
inline double trace_distance(const DenseMat& a, const DenseMat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("trace_distance needs equal shapes");
  const DenseMat diff = 0.5 * ((a - b) + (a - b).adjoint());
  Eigen::SelfAdjointEigenSolver<DenseMat> es(diff, Eigen::EigenvaluesOnly);
  return std::clamp(0.5 * es.eigenvalues().cwiseAbs().sum(), 0.0, 1.0);
}

struct GammaRun {
  double gamma_c = 0.0;
  double effective_rate = 0.0;
  std::vector<double> times;
  std::vector<double> distances;
  double max_trace_distance = 0.0;
  double mean_photon_max = 0.0;
  bool adiabatic = true;  // photon population stayed below kPhotonLimit

  // Magnon pair only: final populations of the (a1 +- a2) combinations.
  struct Channels {
    double symmetric_full = 0.0, antisymmetric_full = 0.0;
    double symmetric_effective = 0.0, antisymmetric_effective = 0.0;
  };
  std::optional<Channels> channels;
};

inline constexpr double kPhotonLimit = 0.5;
inline constexpr double kAdiabaticPhoton = 0.1;

struct EliminationReport {
  std::string kind;  // "single" or "collective"
  double lambda = 0.0;
  std::vector<GammaRun> runs;

  std::vector<double> gamma_c_values() const {
    std::vector<double> out;
    for (const auto& r : runs) out.push_back(r.gamma_c);
    return out;
  }
  std::vector<double> trace_distances() const {
    std::vector<double> out;
    for (const auto& r : runs) out.push_back(r.max_trace_distance);
    return out;
  }
  std::vector<std::pair<double, double>> rates_checked() const {
    std::vector<std::pair<double, double>> out;
    for (const auto& r : runs) out.emplace_back(lambda, r.effective_rate);
    return out;
  }
  bool adiabaticity_violated() const {
    return std::any_of(runs.begin(), runs.end(), [](const GammaRun& r) { return !r.adiabatic; });
  }
  bool strictly_decreasing() const {
    for (std::size_t k = 1; k < runs.size(); ++k)
      if (!(runs[k].max_trace_distance < runs[k - 1].max_trace_distance)) return false;
    return true;
  }

  std::string table() const {
    std::ostringstream os;
    char buf[256];
    os << "# " << kind << " elimination, lambda = " << scenarios::format_real(lambda) << '\n';
    os << "gamma_c,max_trace_distance,mean_photon_max\n";
    for (const auto& r : runs) {
      std::snprintf(buf, sizeof buf, "%.17e,%.17e,%.17e\n", r.gamma_c, r.max_trace_distance, r.mean_photon_max);
      os << buf;
    }
    for (const auto& r : runs)
      if (!r.adiabatic) {
        std::snprintf(buf, sizeof buf, "# warning: gamma_c = %g exceeded %.2g photons (max %.4g)\n", r.gamma_c,
                      kPhotonLimit, r.mean_photon_max);
        os << buf;
      }
    return os.str();
  }
};

struct CompareOptions {
  std::map<std::string, std::string> overrides;  // applied to the full-model scenario defaults
  std::optional<double> t_final;                 // scenario default when unset
  double sample_dt = 0.05;
  dynamics::EvolveOptions evolve{};
};

namespace detail {

inline std::vector<DenseMat> reduced_history(const hilbert::LayoutPtr& layout, const model::LindbladModel& m,
                                             const DensityState& rho0, double t_final, double dt,
                                             const std::vector<std::string>& keep,
                                             const std::vector<dynamics::Observable>& obs,
                                             dynamics::EvolveOptions opt, dynamics::TimeSeries* series) {
  std::vector<DenseMat> out;
  const bool trace_out = keep.size() < layout->size();
  opt.on_sample = [&](double, const DensityState& rho) {
    out.push_back(trace_out ? analysis::partial_trace(rho, keep).matrix() : rho.matrix());
  };
  auto ev = dynamics::evolve(m, rho0, t_final, dt, obs, opt);
  if (series) *series = std::move(ev.series);
  return out;
}

inline DensityState restrict_initial(const DensityState& full, const hilbert::LayoutPtr& reduced,
                                     const std::vector<std::string>& keep) {
  return {reduced, analysis::partial_trace(full, keep).matrix()};
}

inline double max_of(const std::vector<cplx>& v) {
  double m = 0.0;
  for (auto x : v) m = std::max(m, x.real());
  return m;
}

template <class BuildFull, class BuildEffective>
EliminationReport compare(const std::string& kind, const std::string& scenario, double lambda,
                          const std::vector<double>& gammas, const CompareOptions& opt, BuildFull full_model,
                          BuildEffective effective_model, const std::vector<std::string>& photons) {
  if (gammas.empty()) throw InvalidArgument("compare needs at least one gamma_c");
  for (double g : gammas)
    if (!(g > 0.0)) throw InvalidArgument("gamma_c values must be positive");
  EliminationReport rep;
  rep.kind = kind;
  rep.lambda = lambda;

  for (double g : gammas) {
    auto overrides = opt.overrides;
    overrides["lambda"] = scenarios::format_real(lambda);
    overrides["gamma_c"] = scenarios::format_real(g);
    const auto sc = scenarios::build_scenario(scenario, overrides);
    const double t_final = opt.t_final.value_or(sc.t_final);

    const auto& full_layout = sc.model.layout;
    std::vector<std::string> keep;
    std::vector<hilbert::ModeSpec> reduced_modes;
    for (const auto& mode : full_layout->modes())
      if (std::find(photons.begin(), photons.end(), mode.label) == photons.end()) {
        keep.push_back(mode.label);
        reduced_modes.push_back(mode);
      }
    const auto reduced = hilbert::make_layout(reduced_modes);

    std::vector<dynamics::Observable> photon_obs;
    for (const auto& c : photons) photon_obs.push_back(scenarios::detail::number_observable(c, full_layout));

    const bool pair = kind == "collective";
    std::vector<dynamics::Observable> channel_full, channel_eff;
    if (pair) {
      for (const auto* lay : {&full_layout, &reduced}) {
        const auto a1 = hilbert::lowering("a1", *lay), a2 = hilbert::lowering("a2", *lay);
        const auto s = a1 + a2, d = a1 - a2;
        auto& dst = lay == &full_layout ? channel_full : channel_eff;
        dst.push_back({"n_sym", s.adjoint() * s * cplx(0.5), true});
        dst.push_back({"n_anti", d.adjoint() * d * cplx(0.5), true});
      }
    }
    auto obs_full = photon_obs;
    obs_full.insert(obs_full.end(), channel_full.begin(), channel_full.end());

    dynamics::TimeSeries full_series, eff_series;
    const auto full_hist = reduced_history(full_layout, full_model(sc.params, full_layout), sc.initial, t_final,
                                           opt.sample_dt, keep, obs_full, opt.evolve, &full_series);
    const auto eff_hist = reduced_history(reduced, effective_model(sc.params, reduced),
                                          restrict_initial(sc.initial, reduced, keep), t_final, opt.sample_dt, keep,
                                          channel_eff, opt.evolve, &eff_series);

    GammaRun run;
    run.gamma_c = g;
    run.effective_rate = model::eliminated_rate(lambda, g);
    run.times = full_series.times;
    for (std::size_t k = 0; k < full_hist.size(); ++k) {
      const double d = trace_distance(full_hist[k], eff_hist[k]);
      run.distances.push_back(d);
      run.max_trace_distance = std::max(run.max_trace_distance, d);
    }
    for (const auto& c : photons) run.mean_photon_max = std::max(run.mean_photon_max, max_of(full_series.track("n_" + c).values));
    run.adiabatic = run.mean_photon_max < kPhotonLimit;
    if (pair) {
      GammaRun::Channels ch;
      ch.symmetric_full = full_series.real("n_sym").back();
      ch.antisymmetric_full = full_series.real("n_anti").back();
      ch.symmetric_effective = eff_series.real("n_sym").back();
      ch.antisymmetric_effective = eff_series.real("n_anti").back();
      run.channels = ch;
    }
    rep.runs.push_back(std::move(run));
  }
  return rep;
}

}  // namespace detail

/// One magnon, one phonon and one photon against the eliminated single-channel model.
inline EliminationReport compare_single(double lambda, const std::vector<double>& gammas, const CompareOptions& opt = {}) {
  return detail::compare("single", "full3body", lambda, gammas, opt, scenarios::full_single_model,
                         scenarios::effective_single_model, {"c"});
}

/// Two magnons, one phonon and two photons against the eliminated L1/L2 pair.
inline EliminationReport compare_collective(double lambda_c, const std::vector<double>& gammas,
                                            const CompareOptions& opt = {}) {
  return detail::compare("collective", "full3body_collective", lambda_c, gammas, opt, scenarios::full_pair_model,
                         scenarios::effective_pair_model, {"c1", "c2"});
}

}  // namespace dissim::elimination
