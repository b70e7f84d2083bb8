#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <vector>

namespace kdof::detail {

struct LpResult {
  enum class Status { Optimal, IterLimit, Infeasible, Unbounded };
  Status status = Status::Optimal;
  double objective = 0.0;
  Eigen::VectorXd x;
};

//
// Dense two-phase primal simplex for  min c'x  s.t.  Ax = b, x >= 0.
// Bland's rule for both the entering and the leaving choice, so cycling is
// impossible. Sized for the small best-approximation programs this library
// generates (a few hundred columns); no factorization updates, the tableau
// is carried explicitly.
//
inline LpResult solve_lp(Eigen::MatrixXd A, Eigen::VectorXd b, const Eigen::VectorXd& c,
                         int max_iters = 0) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  if (max_iters <= 0) max_iters = 200 * (m + n + 1);

  for (int i = 0; i < m; ++i) {
    if (b(i) < 0) {
      A.row(i) = -A.row(i);
      b(i) = -b(i);
    }
  }

  double scale = 1.0;
  if (m > 0 && n > 0) scale += A.cwiseAbs().maxCoeff() + b.cwiseAbs().maxCoeff();
  const double eps = 1e-11 * scale;

  Eigen::MatrixXd T(m, n + m + 1);
  T.leftCols(n) = A;
  T.middleCols(n, m).setIdentity();
  T.col(n + m) = b;
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n + i;

  auto pivot = [&](int r, int col) {
    T.row(r) /= T(r, col);
    for (int i = 0; i < m; ++i) {
      if (i != r && T(i, col) != 0.0) T.row(i) -= T(i, col) * T.row(r);
    }
    basis[r] = col;
  };

  // returns iterations used, -1 on unbounded, -2 on iteration limit
  auto run_phase = [&](const Eigen::VectorXd& cost, int ncols, int iters) -> int {
    int used = 0;
    Eigen::VectorXd cb(m);
    while (used < iters) {
      for (int i = 0; i < m; ++i) cb(i) = cost(basis[i]);
      int enter = -1;
      for (int j = 0; j < ncols; ++j) {
        double rc = cost(j) - cb.dot(T.col(j));
        if (rc < -eps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return used;
      int leave = -1;
      double best = 0.0;
      for (int i = 0; i < m; ++i) {
        if (T(i, enter) <= eps) continue;
        double ratio = T(i, n + m) / T(i, enter);
        if (leave < 0) {
          best = ratio;
          leave = i;
          continue;
        }
        double tie = 1e-12 * (1.0 + std::abs(best));
        if (ratio < best - tie) {
          best = ratio;
          leave = i;
        } else if (ratio < best + tie && basis[i] < basis[leave]) {
          best = std::min(best, ratio);
          leave = i;
        }
      }
      if (leave < 0) return -1;
      pivot(leave, enter);
      ++used;
    }
    return -2;
  };

  LpResult out;
  out.x = Eigen::VectorXd::Zero(n);

  Eigen::VectorXd cost1 = Eigen::VectorXd::Zero(n + m + 1);
  cost1.segment(n, m).setOnes();
  int r1 = run_phase(cost1, n + m, max_iters);
  double art_sum = 0.0;
  for (int i = 0; i < m; ++i) {
    if (basis[i] >= n) art_sum += T(i, n + m);
  }
  if (r1 == -1 || (r1 >= 0 && art_sum > 1e-8 * scale)) {
    out.status = LpResult::Status::Infeasible;
    return out;
  }
  if (r1 == -2) {
    out.status = LpResult::Status::IterLimit;
  }

  // evict artificials still basic at level zero; an all-zero structural row is
  // a redundant constraint and can be left inert (its column never re-enters)
  for (int i = 0; i < m; ++i) {
    if (basis[i] >= n) {
      for (int j = 0; j < n; ++j) {
        if (std::abs(T(i, j)) > eps) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  Eigen::VectorXd cost2 = Eigen::VectorXd::Zero(n + m + 1);
  cost2.head(n) = c;
  int iters_left = max_iters - std::max(r1, 0);
  if (out.status != LpResult::Status::IterLimit && iters_left > 0) {
    int r2 = run_phase(cost2, n, iters_left);
    if (r2 == -1) {
      out.status = LpResult::Status::Unbounded;
      return out;
    }
    if (r2 == -2) out.status = LpResult::Status::IterLimit;
  }

  for (int i = 0; i < m; ++i) {
    if (basis[i] < n) out.x(basis[i]) = std::max(0.0, T(i, n + m));
  }
  out.objective = c.dot(out.x);
  return out;
}

}  // namespace kdof::detail
