#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "dissim/dynamics.hpp"

using namespace dissim;
using dynamics::DensityState;
using dynamics::Observable;

namespace {

Observable number_of(const std::string& mode, const hilbert::LayoutPtr& layout) {
  const auto a = hilbert::lowering(mode, layout);
  return {"n_" + mode, a.adjoint() * a, true};
}

model::LindbladModel decay_model(int n, double rate) {
  auto layout = hilbert::make_layout({{"a", n}});
  model::LindbladModel m{layout, {}, {}, "decay"};
  m.dissipators.push_back(model::amplitude_loss(rate, "a", layout));
  return m;
}

model::LindbladModel kerr_model(double s_b_sign = 1.0) {
  auto layout = hilbert::make_layout({{"a1", 4}, {"a2", 4}, {"b", 4}});
  model::LindbladModel m{layout, {}, {}, "pair"};
  for (const char* a : {"a1", "a2"}) {
    m.terms.push_back(model::magnon_pump(0.6, a, layout));
    m.terms.push_back(model::self_kerr(0.75, a, layout));
  }
  m.terms.push_back(model::phonon_pump(cplx(0, s_b_sign), "b", layout));
  const auto pair = model::effective_collective_loss(0.8, 1.0, "a1", "a2", "b", layout);
  m.dissipators.push_back(pair.first);
  m.dissipators.push_back(pair.second);
  m.dissipators.push_back(model::amplitude_loss(10.0, "b", layout));
  return m;
}

}  // namespace

TEST(Integrator, ExponentialDecayToHighAccuracy) {
  using Vec = Eigen::VectorXd;
  integrator::DormandPrince<Vec> dp([](double, const Vec& y, Vec& dy) { dy = -y; }, {1e-10, 1e-12});
  dp.reset(0.0, Vec::Ones(1));
  while (dp.time() < 3.0) dp.step(3.0);
  EXPECT_NEAR(dp.state()(0), std::exp(-3.0), 1e-9);
  EXPECT_EQ(dp.time(), 3.0);
}

TEST(Integrator, DenseOutputBetweenSteps) {
  using Vec = Eigen::VectorXcd;
  const cplx w(0.0, 2.0);
  integrator::DormandPrince<Vec> dp([&](double, const Vec& y, Vec& dy) { dy = w * y; }, {1e-10, 1e-12});
  dp.reset(0.0, Vec::Ones(1));
  dp.step(5.0);
  const double t_mid = 0.5 * (dp.previous_time() + dp.time());
  EXPECT_LT(std::abs(dp.dense(t_mid)(0) - std::exp(w * t_mid)), 1e-7);
}

TEST(SampleTimes, GridIncludesEndpoint) {
  const auto t = dynamics::sample_times(1.0, 0.3);
  ASSERT_EQ(t.size(), 5u);
  EXPECT_DOUBLE_EQ(t[3], 0.9);
  EXPECT_DOUBLE_EQ(t.back(), 1.0);
  EXPECT_EQ(dynamics::sample_times(20.0, 0.1).size(), 201u);
  EXPECT_THROW(dynamics::sample_times(1.0, 0.0), InvalidArgument);
}

TEST(Evolve, AmplitudeDecayFollowsExponentialLaw) {
  const double rate = 0.7;
  const auto m = decay_model(6, rate);
  const auto rho0 = DensityState::fock(m.layout, {3});
  const auto ev = dynamics::evolve(m, rho0, 4.0, 0.1, {number_of("a", m.layout)});
  const auto n = ev.series.real("n_a");
  for (std::size_t k = 0; k < n.size(); ++k) EXPECT_NEAR(n[k], 3.0 * std::exp(-rate * ev.series.times[k]), 1e-6);
  // Survival in |3>: exp(-3 rate t).
  EXPECT_NEAR(ev.final_state.matrix()(3, 3).real(), std::exp(-3.0 * rate * 4.0), 1e-6);
}

TEST(Evolve, ClosedSystemMatchesExactUnitary) {
  auto layout = hilbert::make_layout({{"a", 6}, {"b", 3}});
  model::LindbladModel m{layout, {}, {}, "closed"};
  m.terms.push_back(model::magnon_pump(cplx(0.4, 0.2), "a", layout));
  m.terms.push_back(model::self_kerr(0.75, "a", layout));
  m.terms.push_back(model::phonon_pump(cplx(0, 0.5), "b", layout));
  const auto rho0 = DensityState::vacuum(layout);
  std::vector<double> purity;
  dynamics::EvolveOptions opt;
  opt.on_sample = [&](double, const DensityState& r) { purity.push_back(r.purity()); };
  const auto ev = dynamics::evolve(m, rho0, 3.0, 0.5, {}, opt);
  for (double p : purity) EXPECT_NEAR(p, 1.0, 1e-8);

  // rho(t) = V exp(-i E t) V^dag rho0 (...)^dag
  Eigen::SelfAdjointEigenSolver<DenseMat> es(DenseMat(m.hamiltonian(0.0).data()));
  const Eigen::VectorXcd phases = (es.eigenvalues().cast<cplx>() * cplx(0, -3.0)).array().exp();
  const DenseMat u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  const DenseMat exact = u * rho0.matrix() * u.adjoint();
  EXPECT_LT((ev.final_state.matrix() - exact).cwiseAbs().maxCoeff(), 1e-7);
}

TEST(Evolve, PhysicalInvariantsHoldAtEverySample) {
  const auto m = kerr_model();
  const auto ev = dynamics::evolve(m, DensityState::vacuum(m.layout), 3.0, 0.25, {number_of("a1", m.layout)});
  EXPECT_LT(ev.diagnostics.max_trace_error, 1e-8);
  EXPECT_LT(ev.diagnostics.max_hermiticity_error, 1e-10);
  EXPECT_GT(ev.diagnostics.min_eigenvalue, -1e-6);
  EXPECT_GT(ev.diagnostics.sectors, 1u);
}

TEST(Evolve, SectorsAgreeWithFullMatrixEvolution) {
  const auto m = kerr_model();
  const auto q1 = hilbert::quadratures("a1", m.layout), q2 = hilbert::quadratures("a2", m.layout);
  const std::vector<Observable> obs{{"pp", q1.p * q2.p, true}, number_of("b", m.layout)};
  dynamics::EvolveOptions full;
  full.use_sectors = false;
  const auto a = dynamics::evolve(m, DensityState::vacuum(m.layout), 2.0, 0.25, obs);
  const auto b = dynamics::evolve(m, DensityState::vacuum(m.layout), 2.0, 0.25, obs, full);
  EXPECT_EQ(b.diagnostics.sectors, 1u);
  for (const char* name : {"pp", "n_b"}) {
    const auto x = a.series.real(name), y = b.series.real(name);
    for (std::size_t k = 0; k < x.size(); ++k) EXPECT_NEAR(x[k], y[k], 1e-7);
  }
}

TEST(Evolve, StepHalvingChangesObservablesBelowTolerance) {
  const auto m = kerr_model();
  const auto q1 = hilbert::quadratures("a1", m.layout), q2 = hilbert::quadratures("a2", m.layout);
  const std::vector<Observable> obs{{"pp", q1.p * q2.p, true}, number_of("a1", m.layout)};
  const auto coarse = dynamics::evolve(m, DensityState::vacuum(m.layout), 2.0, 0.1, obs);
  dynamics::EvolveOptions fine;
  fine.tolerances.max_step = 0.5 * coarse.diagnostics.max_step;
  const auto halved = dynamics::evolve(m, DensityState::vacuum(m.layout), 2.0, 0.1, obs, fine);
  EXPECT_GT(halved.diagnostics.accepted_steps, coarse.diagnostics.accepted_steps);
  for (const char* name : {"pp", "n_a1"}) {
    const auto x = coarse.series.real(name), y = halved.series.real(name);
    for (std::size_t k = 0; k < x.size(); ++k) EXPECT_LT(std::abs(x[k] - y[k]), 1e-6);
  }
}

TEST(Evolve, ScheduledSwitchEqualsTwoStageEvolution) {
  auto switched = kerr_model();
  switched.terms.back() = model::phonon_pump(model::Schedule({{0.0, cplx(0, 1)}, {1.0, cplx(0, -1)}}), "b",
                                             switched.layout);
  const auto obs = std::vector<Observable>{number_of("a1", switched.layout)};
  const auto rho0 = DensityState::vacuum(switched.layout);
  const auto one = dynamics::evolve(switched, rho0, 2.0, 0.5, obs);

  const auto first = dynamics::evolve(kerr_model(1.0), rho0, 1.0, 0.5, obs);
  const auto second = dynamics::evolve(kerr_model(-1.0), DensityState(switched.layout, first.final_state.matrix()), 1.0,
                                       0.5, obs);
  EXPECT_LT((one.final_state.matrix() - second.final_state.matrix()).cwiseAbs().maxCoeff(), 1e-7);
}

TEST(Evolve, InvariantBreachCarriesPartialSeries) {
  const auto m = decay_model(4, 1.0);
  DenseMat bad = DenseMat::Zero(4, 4);
  bad(0, 0) = 1.2;
  bad(1, 1) = -0.2;
  try {
    dynamics::evolve(m, DensityState(m.layout, bad), 5.0, 0.5, {number_of("a", m.layout)});
    FAIL() << "negative eigenvalue went unnoticed";
  } catch (const dynamics::InvariantBreach& e) {
    EXPECT_TRUE(e.partial().consistent());
    ASSERT_EQ(e.partial().times.size(), 1u);
    EXPECT_NEAR(e.partial().real("n_a")[0], -0.2, 1e-15);
  }
}

TEST(Evolve, RejectsInconsistentInputs) {
  const auto m = decay_model(4, 1.0);
  const auto other = hilbert::make_layout({{"a", 5}});
  EXPECT_THROW(dynamics::evolve(m, DensityState::vacuum(other), 1.0, 0.1, {}), LayoutMismatch);
  DenseMat half = DenseMat::Zero(4, 4);
  half(0, 0) = 0.5;
  EXPECT_THROW(dynamics::evolve(m, DensityState(m.layout, half), 1.0, 0.1, {}), InvalidArgument);
  EXPECT_THROW(DensityState(m.layout, DenseMat::Identity(3, 3)), DimensionError);
}
