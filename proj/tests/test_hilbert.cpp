#include <gtest/gtest.h>

#include "dissim/hilbert.hpp"

using namespace dissim;
using namespace dissim::hilbert;

namespace {

DenseMat dense(const Operator& op) { return DenseMat(op.data()); }

// Independent Kronecker product written with explicit index arithmetic.
DenseMat kron_oracle(const DenseMat& a, const DenseMat& b) {
  DenseMat out = DenseMat::Zero(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

}  // namespace

TEST(Layout, DimensionsAndStrides) {
  auto layout = make_layout({{"a", 3}, {"b", 4}, {"c", 2}});
  EXPECT_EQ(layout->total_dim(), 24u);
  EXPECT_EQ(layout->stride(0), 8u);
  EXPECT_EQ(layout->stride(1), 2u);
  EXPECT_EQ(layout->stride(2), 1u);
  // index 8*2 + 2*3 + 1 = 23 -> occupations (2, 3, 1)
  EXPECT_EQ(layout->occupation(23, 0), 2);
  EXPECT_EQ(layout->occupation(23, 1), 3);
  EXPECT_EQ(layout->occupation(23, 2), 1);
  EXPECT_EQ(layout->index_of("b"), 1u);
}

TEST(Layout, RejectsBadModes) {
  EXPECT_THROW(make_layout({{"a", 1}}), DimensionError);
  EXPECT_THROW(make_layout({}), DimensionError);
  EXPECT_THROW(make_layout({{"a", 3}, {"a", 3}}), InvalidArgument);
  auto layout = make_layout({{"a", 3}});
  EXPECT_THROW(layout->index_of("z"), UnknownMode);
  EXPECT_THROW(annihilation(1), DimensionError);
}

TEST(Operators, LadderMatrixElements) {
  const DenseMat a = dense(annihilation(5));
  for (int m = 0; m < 5; ++m)
    for (int n = 0; n < 5; ++n) {
      const double expected = (m + 1 == n) ? std::sqrt(static_cast<double>(n)) : 0.0;
      EXPECT_DOUBLE_EQ(a(m, n).real(), expected);
      EXPECT_DOUBLE_EQ(a(m, n).imag(), 0.0);
    }
  const DenseMat n = dense(number(5));
  for (int k = 0; k < 5; ++k) EXPECT_NEAR(n(k, k).real(), k, 1e-15);
}

TEST(Operators, CommutatorHoldsBelowTruncationEdge) {
  const int N = 6;
  const DenseMat c = dense(commutator(annihilation(N), creation(N)));
  for (int k = 0; k + 1 < N; ++k) EXPECT_NEAR(c(k, k).real(), 1.0, 1e-14);
  // The edge carries the truncation defect 1 - N.
  EXPECT_NEAR(c(N - 1, N - 1).real(), 1.0 - N, 1e-14);
}

TEST(Operators, SilentTruncationOnTwoLevels) {
  const auto ad = creation(2);
  EXPECT_EQ((ad * ad).max_abs(), 0.0);
}

TEST(Operators, EmbedMatchesKroneckerOracle) {
  auto layout = make_layout({{"a", 3}, {"b", 4}, {"c", 2}});
  const DenseMat ia = DenseMat::Identity(3, 3), ib = DenseMat::Identity(4, 4), ic = DenseMat::Identity(2, 2);
  const DenseMat expected_b = kron_oracle(kron_oracle(ia, dense(annihilation(4))), ic);
  EXPECT_LT((dense(lowering("b", layout)) - expected_b).cwiseAbs().maxCoeff(), 1e-15);
  const DenseMat expected_a = kron_oracle(kron_oracle(dense(number(3)), ib), ic);
  EXPECT_LT((dense(embed(number(3), "a", layout)) - expected_a).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((kron(ia, ib) - kron_oracle(ia, ib)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(embed(annihilation(3), "b", layout), DimensionError);
}

TEST(Operators, DifferentModesCommute) {
  auto layout = make_layout({{"a", 4}, {"b", 3}});
  const auto a = lowering("a", layout), b = lowering("b", layout);
  EXPECT_LT(commutator(a, b.adjoint()).max_abs(), 1e-15);
  EXPECT_LT(commutator(a, b).max_abs(), 1e-15);
}

TEST(Operators, QuadraturesAreHermitianAndCanonical) {
  auto layout = make_layout({{"a", 8}});
  const auto q = quadratures("a", layout);
  EXPECT_LT((dense(q.x) - dense(q.x).adjoint()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((dense(q.p) - dense(q.p).adjoint()).cwiseAbs().maxCoeff(), 1e-15);
  const DenseMat c = dense(commutator(q.x, q.p));
  for (int k = 0; k + 1 < 8; ++k) EXPECT_NEAR(c(k, k).imag(), 1.0, 1e-14);
}

TEST(Operators, LayoutMismatchIsRejected) {
  auto l1 = make_layout({{"a", 3}});
  auto l2 = make_layout({{"a", 4}});
  EXPECT_THROW(lowering("a", l1) + lowering("a", l2), LayoutMismatch);
}
