#include <gtest/gtest.h>

#include "dissim/model.hpp"

using namespace dissim;
using namespace dissim::model;

namespace {

DenseMat dense(const hilbert::Operator& op) { return DenseMat(op.data()); }

double hermiticity(const hilbert::Operator& op) {
  const DenseMat m = dense(op);
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace

TEST(Schedule, PiecewiseConstantLookup) {
  const Schedule s({{0.0, cplx(0, 1)}, {20.0, cplx(0, -1)}});
  EXPECT_EQ(s.at(0.0), cplx(0, 1));
  EXPECT_EQ(s.at(19.999), cplx(0, 1));
  EXPECT_EQ(s.at(20.0), cplx(0, -1));
  EXPECT_EQ(s.at(35.0), cplx(0, -1));
  ASSERT_EQ(s.breakpoints().size(), 1u);
  EXPECT_EQ(s.breakpoints()[0], 20.0);
  EXPECT_TRUE(Schedule(2.0).is_constant());
}

TEST(Schedule, RejectsMalformedSegments) {
  EXPECT_THROW(Schedule(std::vector<Schedule::Segment>{}), InvalidArgument);
  EXPECT_THROW(Schedule(std::vector<Schedule::Segment>{{1.0, 1.0}}), InvalidArgument);
  EXPECT_THROW(Schedule({{0.0, 1.0}, {5.0, 2.0}, {5.0, 3.0}}), InvalidArgument);
}

TEST(Terms, TwoQuantumPumpMatrixElements) {
  auto layout = hilbert::make_layout({{"a", 5}});
  const cplx s(0.3, 2.4);
  const DenseMat h = dense(two_quantum_pump("p", s, "a", layout).at(0.0));
  // <0| s a a |2> = s sqrt2 and its conjugate partner.
  EXPECT_NEAR(std::abs(h(0, 2) - s * std::sqrt(2.0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(h(2, 0) - std::conj(s) * std::sqrt(2.0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(h(1, 3) - s * std::sqrt(6.0)), 0.0, 1e-14);
  EXPECT_LT((h - h.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Terms, SelfKerrIsDiagonal) {
  auto layout = hilbert::make_layout({{"a", 6}});
  const DenseMat h = dense(self_kerr(0.75, "a", layout).at(0.0));
  for (int n = 0; n < 6; ++n)
    for (int m = 0; m < 6; ++m) EXPECT_NEAR(std::abs(h(n, m)), n == m ? 0.75 * n * (n - 1) : 0.0, 1e-14);
}

TEST(Terms, ThreeBodyCouplingsAreHermitian) {
  auto layout = hilbert::make_layout({{"a1", 3}, {"a2", 3}, {"b", 3}, {"c1", 2}, {"c2", 2}});
  const auto pair = collective_three_body(0.4, "a1", "a2", "b", "c1", "c2", layout);
  EXPECT_LT(hermiticity(pair.symmetric.at(0.0)), 1e-14);
  EXPECT_LT(hermiticity(pair.antisymmetric.at(0.0)), 1e-14);
  auto single = hilbert::make_layout({{"a", 3}, {"b", 3}, {"c", 2}});
  const auto h = three_body(0.4, "a", "b", "c", single).at(0.0);
  EXPECT_LT(hermiticity(h), 1e-14);
  // <a=0,b=1,c=1| H |a=1,b=0,c=0> = lambda <1|b^dag|0> <0|a|1> <1|c^dag|0> = lambda
  const auto idx = [](int a, int b, int c) { return a * 6 + b * 2 + c; };
  EXPECT_NEAR(std::abs(dense(h)(idx(0, 1, 1), idx(1, 0, 0)) - 0.4), 0.0, 1e-14);
}

TEST(Dissipators, EliminatedRateReproducesControlRate) {
  EXPECT_NEAR(eliminated_rate(0.8, 1.0), 0.64, 1e-12);
  EXPECT_NEAR(eliminated_rate(0.4, 16.0), 0.01, 1e-15);
  EXPECT_THROW(eliminated_rate(0.8, 0.0), InvalidArgument);
  EXPECT_THROW(amplitude_loss(-1.0, "a", hilbert::make_layout({{"a", 3}})), InvalidArgument);
}

TEST(Dissipators, CollectiveJumpsMatchTheirDefinitions) {
  auto layout = hilbert::make_layout({{"a1", 3}, {"a2", 3}, {"b", 3}});
  const auto a1 = hilbert::lowering("a1", layout), a2 = hilbert::lowering("a2", layout);
  const auto b = hilbert::lowering("b", layout);
  const auto pair = effective_collective_loss(0.8, 1.0, "a1", "a2", "b", layout);
  EXPECT_NEAR(pair.first.rate, 0.64, 1e-12);
  EXPECT_NEAR(pair.second.rate, 0.64, 1e-12);
  const DenseMat l1 = dense((b + b.adjoint()) * (a1 + a2));
  const DenseMat l2 = dense((b.adjoint() - b) * (a1 - a2)) * cplx(0, 1);
  EXPECT_LT((dense(pair.first.jump) - l1).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((dense(pair.second.jump) - l2).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Dissipators, StaticCollectiveRateRules) {
  auto layout = hilbert::make_layout({{"a1", 3}, {"a2", 3}});
  EXPECT_NEAR(static_collective_loss(2.0, 4.0, "a1", "a2", layout).first.rate, 16.0, 1e-14);
  EXPECT_NEAR(static_collective_loss(2.0, 4.0, "a1", "a2", layout, 4.0).second.rate, 4.0, 1e-14);
  EXPECT_EQ(static_collective_loss(0.0, 4.0, "a1", "a2", layout, 4.0).first.rate, 0.0);
  EXPECT_THROW(static_collective_loss(2.0, -1.0, "a1", "a2", layout), InvalidArgument);
}

TEST(LindbladModel, HamiltonianFollowsSchedule) {
  auto layout = hilbert::make_layout({{"b", 4}});
  LindbladModel m{layout, {}, {}, "switch"};
  m.terms.push_back(phonon_pump(Schedule({{0.0, cplx(0, 1)}, {10.0, cplx(0, -1)}}), "b", layout));
  m.terms.push_back(mode_frequency(0.5, "b", layout));
  const DenseMat before = dense(m.hamiltonian(5.0)), after = dense(m.hamiltonian(10.0));
  EXPECT_NEAR(std::abs(before(0, 2) - cplx(0, std::sqrt(2.0))), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(after(0, 2) - cplx(0, -std::sqrt(2.0))), 0.0, 1e-14);
  EXPECT_NEAR(before(1, 1).real(), 0.5, 1e-14);
  ASSERT_EQ(m.breakpoints(), std::vector<double>{10.0});
  m.dissipators.push_back({"bad", hilbert::lowering("b", layout), -0.1});
  EXPECT_THROW(m.validate(), InvalidArgument);
}

TEST(LindbladModel, ForeignLayoutIsRejected) {
  auto l1 = hilbert::make_layout({{"b", 4}});
  auto l2 = hilbert::make_layout({{"b", 5}});
  LindbladModel m{l1, {}, {}, ""};
  m.terms.push_back(self_kerr(1.0, "b", l2));
  EXPECT_THROW(m.validate(), LayoutMismatch);
}
