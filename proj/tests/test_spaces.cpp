#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "kdof/detail/simplex.hpp"
#include "kdof/rng.hpp"
#include "kdof/spaces.hpp"

using namespace kdof;

namespace {

// Oracle: distance over a 1-dim span by bisection on the convex objective,
// independent of the LP machinery under test.
double oracle_line_distance(const Eigen::VectorXd& y, const Eigen::VectorXd& b,
                            const NormSpec& spec) {
  auto f = [&](double a) { return norm(y - a * b, spec); };
  double lo = -8.0 * (y.norm() + 1.0) / std::max(b.norm(), 1e-12);
  double hi = -lo;
  for (int it = 0; it < 300; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    const double f1 = f(m1), f2 = f(m2);
    if (f1 < f2) {
      hi = m2;
    } else if (f1 > f2) {
      lo = m1;
    } else {
      lo = m1;
      hi = m2;
    }
  }
  return f(0.5 * (lo + hi));
}

// Oracle: distance over a 2-dim span by iterated grid refinement; the value
// converges for convex objectives regardless of flat valleys.
// Exact oracle for two-dimensional coefficient spaces. The objective
// c -> ||y - B c|| is piecewise linear for the polyhedral norms, so the
// minimum is attained at a vertex of the induced line arrangement: for the
// weighted 1-norm a vertex zeroes a pair of residuals, for the sup norm a
// vertex equalizes three signed weighted residuals. Enumerating those
// candidates and evaluating the true objective at each is exact whenever B
// has full column rank.
double oracle_plane_distance(const Eigen::VectorXd& y, const Eigen::MatrixXd& b,
                             const NormSpec& spec) {
  const int m = static_cast<int>(y.size());
  Eigen::VectorXd w = Eigen::VectorXd::Ones(m);
  if (spec.weights.size() > 0) w = spec.weights;
  auto value = [&](const Eigen::Vector2d& c) { return norm(y - b * c, spec); };
  double best = value(Eigen::Vector2d::Zero());
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      Eigen::Matrix2d a;
      a.row(0) = b.row(i);
      a.row(1) = b.row(j);
      Eigen::FullPivLU<Eigen::Matrix2d> lu(a);
      if (!lu.isInvertible()) continue;
      best = std::min(best, value(lu.solve(Eigen::Vector2d(y(i), y(j)))));
    }
  }
  if (spec.kind == NormKind::pInf) {
    for (int i = 0; i < m; ++i) {
      for (int j = i + 1; j < m; ++j) {
        for (int k = j + 1; k < m; ++k) {
          for (double sj : {1.0, -1.0}) {
            for (double sk : {1.0, -1.0}) {
              Eigen::Matrix3d a3;
              a3 << w(i) * b(i, 0), w(i) * b(i, 1), 1.0,
                  sj * w(j) * b(j, 0), sj * w(j) * b(j, 1), 1.0,
                  sk * w(k) * b(k, 0), sk * w(k) * b(k, 1), 1.0;
              Eigen::Vector3d r3(w(i) * y(i), sj * w(j) * y(j), sk * w(k) * y(k));
              Eigen::FullPivLU<Eigen::Matrix3d> lu3(a3);
              if (!lu3.isInvertible()) continue;
              const Eigen::Vector3d x = lu3.solve(r3);
              best = std::min(best, value(x.head<2>()));
            }
          }
        }
      }
    }
  }
  return best;
}

Eigen::VectorXd random_vec(Rng& rng, int n) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.normal();
  return v;
}

Eigen::VectorXd random_weights(Rng& rng, int n) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.uniform(0.5, 2.0);
  return v;
}

}  // namespace

TEST(Rng, DeterministicStreams) {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
  bool differs = false;
  Rng a2(42);
  for (int i = 0; i < 100; ++i) differs |= a2.next_u64() != c.next_u64();
  EXPECT_TRUE(differs);
  Rng s0 = Rng(7).substream(0), s1 = Rng(7).substream(1);
  EXPECT_NE(s0.next_u64(), s1.next_u64());
  Rng u(5);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform();
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
}

TEST(Norms, HandValues) {
  Eigen::Vector3d v(3.0, -4.0, 0.0);
  EXPECT_DOUBLE_EQ(norm(v, make_norm(NormKind::p1)), 7.0);
  EXPECT_DOUBLE_EQ(norm(v, make_norm(NormKind::p2)), 5.0);
  EXPECT_DOUBLE_EQ(norm(v, make_norm(NormKind::pInf)), 4.0);
  Eigen::Vector3d w(2.0, 0.5, 1.0);
  EXPECT_DOUBLE_EQ(norm(v, make_norm(NormKind::p1, w)), 6.0 + 2.0);
  EXPECT_DOUBLE_EQ(norm(v, make_norm(NormKind::pInf, w)), 6.0);
  EXPECT_DOUBLE_EQ(norm(v, make_norm(NormKind::p2, w)), std::sqrt(36.0 + 4.0));
}

TEST(Norms, Validation) {
  Eigen::Vector2d w(1.0, -1.0);
  EXPECT_THROW(validate_norm_spec(make_norm(NormKind::p1, w), 2, "t"), std::invalid_argument);
  Eigen::Vector2d w2(1.0, 1.0);
  EXPECT_THROW(validate_norm_spec(make_norm(NormKind::p1, w2), 3, "t"), std::invalid_argument);
  Eigen::Vector3d x(1.0, 2.0, 3.0);
  EXPECT_THROW(norm(x, make_norm(NormKind::p1, w2)), std::invalid_argument);
}

TEST(EquivalenceConstant, UnweightedClassicalTable) {
  const int k = 5;
  const double rk = std::sqrt(5.0);
  const NormSpec p1 = make_norm(NormKind::p1), p2 = make_norm(NormKind::p2),
                 pi = make_norm(NormKind::pInf);
  EXPECT_DOUBLE_EQ(equivalence_constant(p1, p2, k), rk);
  EXPECT_DOUBLE_EQ(equivalence_constant(p1, pi, k), 5.0);
  EXPECT_DOUBLE_EQ(equivalence_constant(p2, pi, k), rk);
  EXPECT_DOUBLE_EQ(equivalence_constant(p2, p1, k), 1.0);
  EXPECT_DOUBLE_EQ(equivalence_constant(pi, p1, k), 1.0);
  EXPECT_DOUBLE_EQ(equivalence_constant(pi, p2, k), 1.0);
  EXPECT_DOUBLE_EQ(equivalence_constant(p1, p1, k), 1.0);
}

TEST(EquivalenceConstant, WeightedTightness) {
  Rng rng(2024);
  const NormKind kinds[] = {NormKind::p1, NormKind::p2, NormKind::pInf};
  for (int trial = 0; trial < 40; ++trial) {
    const int k = 2 + static_cast<int>(rng.uniform_int(0, 4));
    NormSpec from = make_norm(kinds[rng.uniform_int(0, 2)], random_weights(rng, k));
    NormSpec to = make_norm(kinds[rng.uniform_int(0, 2)], random_weights(rng, k));
    const double ec = equivalence_constant(from, to, k);
    // no sampled vector may exceed the constant
    double sampled = 0.0;
    for (int s = 0; s < 200; ++s) {
      Eigen::VectorXd x = random_vec(rng, k);
      sampled = std::max(sampled, norm(x, from) / norm(x, to));
    }
    EXPECT_LE(sampled, ec * (1.0 + 1e-12));
    // the analytic attainers reach it exactly
    const Eigen::VectorXd d = from.weights.cwiseQuotient(to.weights);
    double attained = 0.0;
    std::vector<Eigen::VectorXd> cands;
    for (int i = 0; i < k; ++i) cands.push_back(Eigen::VectorXd::Unit(k, i));
    cands.push_back(to.weights.cwiseInverse().cwiseProduct(d));
    cands.push_back(to.weights.cwiseInverse());
    for (const auto& x : cands) attained = std::max(attained, norm(x, from) / norm(x, to));
    EXPECT_NEAR(attained, ec, 1e-12 * ec);
  }
}

TEST(Subspace, RankReductionAndBasis) {
  Eigen::MatrixXd cols(3, 3);
  cols.col(0) = Eigen::Vector3d(1, 0, 0);
  cols.col(1) = Eigen::Vector3d(2, 0, 0);
  cols.col(2) = Eigen::Vector3d(0, 1, 0);
  Subspace s(cols);
  EXPECT_EQ(s.dim(), 2);
  EXPECT_EQ(s.ambient_dim(), 3);
  Eigen::MatrixXd g = s.basis().transpose() * s.basis();
  EXPECT_LT((g - Eigen::MatrixXd::Identity(2, 2)).norm(), 1e-12);
  Subspace z(4);
  EXPECT_EQ(z.dim(), 0);
  EXPECT_EQ(z.ambient_dim(), 4);
}

TEST(ExtremePoints, CountsAndStatuses) {
  Eigen::Vector3d w(2.0, 1.0, 0.5);
  ExtremePointSet p1 = extreme_points(make_norm(NormKind::p1, w), 3, 20);
  ASSERT_EQ(p1.status, ExtremePointSet::Status::Enumerated);
  ASSERT_EQ(p1.points.size(), 6u);
  for (const auto& x : p1.points)
    EXPECT_NEAR(norm(x, make_norm(NormKind::p1, w)), 1.0, 1e-14);

  ExtremePointSet pi = extreme_points(make_norm(NormKind::pInf), 4, 20);
  ASSERT_EQ(pi.status, ExtremePointSet::Status::Enumerated);
  ASSERT_EQ(pi.points.size(), 8u);  // one per sign pattern modulo global sign
  for (const auto& x : pi.points) {
    EXPECT_GT(x(0), 0.0);
    EXPECT_NEAR(norm(x, make_norm(NormKind::pInf)), 1.0, 1e-14);
  }

  EXPECT_EQ(extreme_points(make_norm(NormKind::pInf), 25, 20).status,
            ExtremePointSet::Status::CapExceeded);
  EXPECT_EQ(extreme_points(make_norm(NormKind::p2), 3, 20).status,
            ExtremePointSet::Status::NotPolyhedral);
}

TEST(Distance, HilbertProjection) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 4 + static_cast<int>(rng.uniform_int(0, 3));
    Eigen::MatrixXd cols(m, 2);
    cols.col(0) = random_vec(rng, m);
    cols.col(1) = random_vec(rng, m);
    Subspace s(cols);
    Eigen::VectorXd y = random_vec(rng, m);
    const bool weighted = trial % 2 == 0;
    NormSpec spec = weighted ? make_norm(NormKind::p2, random_weights(rng, m))
                             : make_norm(NormKind::p2);
    DistanceResult dr = distance_to_subspace(y, s, spec);
    EXPECT_TRUE(dr.converged);
    // normal equations in the weighted inner product
    Eigen::VectorXd w = weighted ? spec.weights : Eigen::VectorXd::Ones(m);
    Eigen::MatrixXd bw = w.asDiagonal() * s.basis();
    Eigen::VectorXd yw = w.cwiseProduct(y);
    Eigen::VectorXd a = (bw.transpose() * bw).ldlt().solve(bw.transpose() * yw);
    EXPECT_NEAR(dr.distance, (yw - bw * a).norm(), 1e-10);
    // the reported coefficients attain the reported distance
    EXPECT_NEAR(norm(y - s.basis() * dr.coeffs, spec), dr.distance, 1e-9);
  }
}

TEST(Distance, PolyhedralAgainstOracles) {
  Rng rng(77);
  const NormKind kinds[] = {NormKind::p1, NormKind::pInf};
  for (int trial = 0; trial < 60; ++trial) {
    const int m = 3 + static_cast<int>(rng.uniform_int(0, 3));
    NormSpec spec = make_norm(kinds[trial % 2]);
    if (trial % 3 == 0) spec.weights = random_weights(rng, m);
    Eigen::VectorXd y = random_vec(rng, m);

    Eigen::MatrixXd one_col = random_vec(rng, m);
    Subspace line(one_col);
    DistanceResult d1 = distance_to_subspace(y, line, spec);
    EXPECT_TRUE(d1.converged);
    EXPECT_NEAR(d1.distance, oracle_line_distance(y, line.basis(), spec), 2e-7);
    EXPECT_NEAR(norm(y - line.basis() * d1.coeffs, spec), d1.distance, 1e-9);

    Eigen::MatrixXd two_cols(m, 2);
    two_cols.col(0) = random_vec(rng, m);
    two_cols.col(1) = random_vec(rng, m);
    Subspace plane(two_cols);
    DistanceResult d2 = distance_to_subspace(y, plane, spec);
    EXPECT_TRUE(d2.converged);
    EXPECT_NEAR(d2.distance, oracle_plane_distance(y, plane.basis(), spec), 1e-8);
    EXPECT_NEAR(norm(y - plane.basis() * d2.coeffs, spec), d2.distance, 1e-9);
  }
}

TEST(Distance, EdgeCases) {
  Eigen::Vector3d y(1.0, -2.0, 3.0);
  Subspace zero(3);
  for (NormKind k : {NormKind::p1, NormKind::p2, NormKind::pInf}) {
    NormSpec spec = make_norm(k);
    EXPECT_DOUBLE_EQ(distance_to_subspace(y, zero, spec).distance, norm(y, spec));
  }
  // membership gives zero distance
  Eigen::MatrixXd cols(3, 2);
  cols.col(0) = Eigen::Vector3d(1, 0, 1);
  cols.col(1) = Eigen::Vector3d(0, 1, 1);
  Subspace s(cols);
  Eigen::Vector3d inside = 2.0 * cols.col(0) - 3.0 * cols.col(1);
  for (NormKind k : {NormKind::p1, NormKind::p2, NormKind::pInf})
    EXPECT_NEAR(distance_to_subspace(inside, s, make_norm(k)).distance, 0.0, 1e-9);
  // dimension mismatch
  Eigen::Vector2d bad(1.0, 2.0);
  EXPECT_THROW(distance_to_subspace(bad, s, make_norm(NormKind::p2)), std::invalid_argument);
}

TEST(Simplex, KnownPrograms) {
  {
    // min x0 subject to x0 - x1 = 1
    Eigen::MatrixXd a(1, 2);
    a << 1, -1;
    Eigen::VectorXd b(1);
    b << 1;
    Eigen::VectorXd c(2);
    c << 1, 0;
    auto r = detail::solve_lp(a, b, c);
    ASSERT_EQ(r.status, detail::LpResult::Status::Optimal);
    EXPECT_NEAR(r.objective, 1.0, 1e-10);
  }
  {
    // infeasible: x0 = -1 with x0 >= 0
    Eigen::MatrixXd a(1, 1);
    a << 1;
    Eigen::VectorXd b(1);
    b << -1;
    Eigen::VectorXd c(1);
    c << 1;
    auto r = detail::solve_lp(a, b, c);
    EXPECT_EQ(r.status, detail::LpResult::Status::Infeasible);
  }
  {
    // degenerate ties need Bland's rule to terminate
    Eigen::MatrixXd a(2, 4);
    a << 1, 1, 1, 0, 1, 2, 0, 1;
    Eigen::VectorXd b(2);
    b << 1, 1;
    Eigen::VectorXd c(4);
    c << -1, -2, 0, 0;
    auto r = detail::solve_lp(a, b, c);
    ASSERT_EQ(r.status, detail::LpResult::Status::Optimal);
    EXPECT_NEAR(r.objective, -1.0, 1e-10);
  }
}
