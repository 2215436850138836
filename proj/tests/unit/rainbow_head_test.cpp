#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qint/core/errors.hpp"
#include "qint/core/rng.hpp"
#include "qint/head/rainbow_head.hpp"

using namespace qint;
using namespace qint::head;

namespace {

// Independent projection: every atom's image is located by a linear scan and
// its mass split by explicit interpolation weights.
Vector projection_oracle(const Vector& p, const AtomSupport& s, double reward, double discount, bool truncated) {
  const int n = s.size();
  Vector out = Vector::Zero(n);
  for (int i = 0; i < n; ++i) {
    double tz = truncated ? reward : reward + discount * s.atoms()[i];
    tz = std::min(std::max(tz, s.v_min()), s.v_max());
    int hit = -1;
    for (int k = 0; k < n; ++k) {
      if (s.atoms()[k] == tz) hit = k;
    }
    if (hit >= 0) {
      out[hit] += p[i];
      continue;
    }
    for (int k = 0; k + 1 < n; ++k) {
      const double lo = s.atoms()[k], hi = s.atoms()[k + 1];
      if (lo < tz && tz < hi) {
        out[k] += p[i] * (hi - tz) / (hi - lo);
        out[k + 1] += p[i] * (tz - lo) / (hi - lo);
        break;
      }
    }
  }
  return out;
}

Vector random_simplex(Rng& rng, int n) {
  std::exponential_distribution<double> e(1.0);
  Vector p(n);
  for (int i = 0; i < n; ++i) p[i] = e(rng);
  return p / p.sum();
}

}  // namespace

TEST(AtomSupport, EvenlySpaced) {
  const AtomSupport s(5, -2.0, 2.0);
  EXPECT_DOUBLE_EQ(s.delta(), 1.0);
  for (int i = 0; i < 5; ++i) EXPECT_DOUBLE_EQ(s.atoms()[i], -2.0 + i);
  EXPECT_THROW(AtomSupport(1, 0, 1), std::invalid_argument);
  EXPECT_THROW(AtomSupport(3, 1, 1), std::invalid_argument);
}

TEST(AtomSupport, StrictlyIncreasingAndEndsExactly) {
  const AtomSupport s(51, -10.0, 10.0);
  for (int i = 1; i < 51; ++i) EXPECT_LT(s.atoms()[i - 1], s.atoms()[i]);
  EXPECT_EQ(s.atoms()[0], -10.0);
  EXPECT_EQ(s.atoms()[50], 10.0);
}

TEST(DuelingCombine, IdenticalAdvantagesGiveValueSoftmax) {
  Vector v(3);
  v << 0.3, -1.0, 2.0;
  Matrix a(4, 3);
  for (int r = 0; r < 4; ++r) a.row(r) << 1.0, 5.0, -2.0;
  const auto dist = dueling_combine(DuelingLogits::from_streams(v, a));
  const Matrix expected = softmax_rows(v.transpose());
  for (int r = 0; r < 4; ++r) EXPECT_TRUE(dist.probs.row(r).isApprox(expected.row(0), 1e-14));
}

TEST(DuelingCombine, ZeroLogitsUniform) {
  const auto dist = dueling_combine(DuelingLogits::from_streams(Vector::Zero(5), Matrix::Zero(6, 5)));
  EXPECT_TRUE((dist.probs.array() - 0.2).abs().maxCoeff() < 1e-15);
}

TEST(DuelingCombine, HandSoftmaxTwoByTwo) {
  Matrix a(2, 2);
  a << 1, 0, 0, 1;
  const auto logits = DuelingLogits::from_streams(Vector::Zero(2), a);
  EXPECT_DOUBLE_EQ(logits.advantage_mean[0], 0.5);
  EXPECT_DOUBLE_EQ(logits.advantage_mean[1], 0.5);
  const double sigma = std::exp(0.5) / (std::exp(0.5) + std::exp(-0.5));
  const auto dist = dueling_combine(logits);
  EXPECT_NEAR(dist.probs(0, 0), sigma, 1e-15);
  EXPECT_NEAR(dist.probs(0, 1), 1.0 - sigma, 1e-15);
  EXPECT_NEAR(sigma, 0.7311, 1e-4);
}

TEST(DuelingCombine, NonFiniteThrows) {
  Vector v = Vector::Zero(3);
  v[1] = std::nan("");
  EXPECT_THROW(dueling_combine(DuelingLogits::from_streams(v, Matrix::Zero(2, 3))), NumericError);
  v[1] = INFINITY;
  EXPECT_THROW(dueling_combine(DuelingLogits::from_streams(v, Matrix::Zero(2, 3))), NumericError);
}

TEST(DuelingCombine, SimplexAndShiftInvarianceProperty) {
  Rng rng(7);
  std::normal_distribution<double> g(0.0, 3.0);
  for (int trial = 0; trial < 500; ++trial) {
    Vector v(51);
    Matrix a(6, 51);
    for (int i = 0; i < 51; ++i) v[i] = g(rng);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = g(rng);
    const auto dist = dueling_combine(DuelingLogits::from_streams(v, a));
    ASSERT_GE(dist.probs.minCoeff(), 0.0);
    for (int r = 0; r < 6; ++r) ASSERT_NEAR(dist.probs.row(r).sum(), 1.0, 1e-12);
    Matrix shifted = a;
    for (int i = 0; i < 51; ++i) shifted.col(i).array() += g(rng);
    const auto again = dueling_combine(DuelingLogits::from_streams(v, shifted));
    ASSERT_LE((again.probs - dist.probs).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(ExpectedQ, Examples) {
  const AtomSupport sym(51, -10, 10);
  CategoricalValueDistribution uniform{Matrix::Constant(2, 51, 1.0 / 51)};
  EXPECT_NEAR(expected_q(uniform, sym)[0], 0.0, 1e-14);

  CategoricalValueDistribution one_hot{Matrix::Zero(1, 51)};
  one_hot.probs(0, 37) = 1.0;
  EXPECT_DOUBLE_EQ(expected_q(one_hot, sym)[0], sym.atoms()[37]);

  const AtomSupport two(2, 0.0, 4.0);
  CategoricalValueDistribution d{Matrix(1, 2)};
  d.probs << 0.25, 0.75;
  EXPECT_DOUBLE_EQ(expected_q(d, two)[0], 3.0);
}

TEST(ExpectedQ, ShiftCovariance) {
  Rng rng(8);
  const AtomSupport s(11, -1.0, 4.0);
  const AtomSupport shifted(11, -1.0 + 2.5, 4.0 + 2.5);
  CategoricalValueDistribution d{Matrix(3, 11)};
  for (int r = 0; r < 3; ++r) d.probs.row(r) = random_simplex(rng, 11).transpose();
  const Vector q = expected_q(d, s);
  const Vector qs = expected_q(d, shifted);
  for (int r = 0; r < 3; ++r) EXPECT_NEAR(qs[r] - q[r], 2.5, 1e-12);
}

TEST(ProjectTarget, IdentityMap) {
  Rng rng(9);
  const AtomSupport s(11, -5, 5);
  const Vector p = random_simplex(rng, 11);
  EXPECT_EQ(project_target(p, s, 0.0, 1.0, false), p);
}

TEST(ProjectTarget, TruncatedOnAtomIsOneHot) {
  Rng rng(10);
  const AtomSupport s(11, -5, 5);
  const Vector out = project_target(random_simplex(rng, 11), s, s.atoms()[7], 0.99, true);
  for (int i = 0; i < 11; ++i) EXPECT_NEAR(out[i], i == 7 ? 1.0 : 0.0, 1e-15);
}

TEST(ProjectTarget, HandSplit) {
  const AtomSupport s(3, 0, 2);
  Vector p(3);
  p << 0, 1, 0;
  const Vector out = project_target(p, s, 0.5, 1.0, false);
  EXPECT_DOUBLE_EQ(out[0], 0.0);
  EXPECT_DOUBLE_EQ(out[1], 0.5);
  EXPECT_DOUBLE_EQ(out[2], 0.5);
}

TEST(ProjectTarget, MatchesOracleAndConservesMass) {
  Rng rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n : {2, 3, 5, 51}) {
    const AtomSupport s(n, -3.0, 3.0);
    for (int trial = 0; trial < 2000; ++trial) {
      const Vector p = random_simplex(rng, n);
      const double reward = -5.0 + 10.0 * u(rng);
      const double discount = u(rng) < 0.1 ? 1.0 : u(rng);
      const bool truncated = u(rng) < 0.2;
      const Vector got = project_target(p, s, reward, discount, truncated);
      const Vector want = projection_oracle(p, s, reward, discount, truncated);
      ASSERT_LE((got - want).cwiseAbs().maxCoeff(), 1e-12);
      ASSERT_NEAR(got.sum(), 1.0, 1e-12);
      ASSERT_GE(got.minCoeff(), 0.0);
    }
  }
}

TEST(ProjectTarget, MeanContractInsideSupport) {
  Rng rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const AtomSupport s(21, -10, 10);
  for (int trial = 0; trial < 1000; ++trial) {
    // Input mass on atoms within [-4, 4], reward in [-2, 2], discount <= 1: images stay inside.
    Vector p = Vector::Zero(21);
    p.segment(6, 9) = random_simplex(rng, 9);
    const double reward = -2.0 + 4.0 * u(rng);
    const double discount = u(rng);
    const Vector out = project_target(p, s, reward, discount, false);
    ASSERT_NEAR(out.dot(s.atoms()), reward + discount * p.dot(s.atoms()), 1e-10);
  }
}

TEST(KlLoss, Examples) {
  Vector t(2), online(2);
  t << 0.5, 0.5;
  online << std::log(0.9), std::log(0.1);
  const auto r = kl_loss(t, online);
  EXPECT_NEAR(r.loss, -0.5 * (std::log(0.9) + std::log(0.1)), 1e-15);
  EXPECT_NEAR(r.loss, 1.2040, 1e-4);
  EXPECT_NEAR(r.grad_logits[0], 0.4, 1e-15);
  EXPECT_NEAR(r.grad_logits[1], -0.4, 1e-15);

  const int n = 7;
  Vector hot = Vector::Zero(n);
  hot[3] = 1.0;
  EXPECT_NEAR(kl_loss(hot, Vector::Constant(n, -std::log(n))).loss, std::log(n), 1e-14);

  Vector p(3);
  p << 0.2, 0.3, 0.5;
  const double entropy = -(p.array() * p.array().log()).sum();
  EXPECT_NEAR(kl_loss(p, p.array().log().matrix()).loss, entropy, 1e-15);
}

TEST(DuelingBackward, MatchesFiniteDifferenceOfCombinedLogits) {
  Rng rng(13);
  std::normal_distribution<double> g;
  Matrix d(4, 3);
  for (Eigen::Index i = 0; i < d.size(); ++i) d.data()[i] = g(rng);
  const auto grads = dueling_backward(d);
  // combined(a, i) = v_i + A(a, i) - mean_a A(a, i); a linear map, so its adjoint is exact.
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(grads.value[i], d.col(i).sum(), 1e-14);
  for (int a = 0; a < 4; ++a) {
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(grads.advantage(a, i), d(a, i) - d.col(i).mean(), 1e-14);
  }
}
