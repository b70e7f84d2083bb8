#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "kdof/operator.hpp"
#include "kdof/spaces.hpp"
#include "kdof/widths.hpp"

namespace kdof {

class IndeterminateCount : public std::runtime_error {
 public:
  IndeterminateCount(double eps, int lo, int hi)
      : std::runtime_error("N(" + std::to_string(eps) + ") undecidable with current brackets: in [" +
                           std::to_string(lo) + ", " + std::to_string(hi) + "]"),
        count_low(lo),
        count_high(hi) {}
  int count_low, count_high;
};

struct DofCount {
  int count = 0;            // certified value when not indeterminate, else the floor
  bool indeterminate = false;
  int count_low = 0;
  int count_high = 0;
  int straddling = 0;       // indices whose bracket contains eps
  bool exact_tie = false;   // some certified width equals eps exactly (excluded by strictness)
  bool certified = true;    // every consulted estimate was certified
};

//
// Lazily extended width estimates for one operator, shared across level
// queries. Upper bounds are clamped to be non-increasing as indices extend;
// counting uses strict inequality, so a width equal to eps does not count.
//
class WidthOracle {
 public:
  explicit WidthOracle(Operator T, WidthConfig cfg = {}) : op_(std::move(T)), cfg_(cfg) {
    horizon_ = static_cast<int>(std::min(op_.matrix.rows(), op_.matrix.cols()));
    hilbert_ = op_.domain.norm.kind == NormKind::p2 && op_.codomain.norm.kind == NormKind::p2;
    if (!hilbert_) {
      rank_ = detail::numerical_rank(op_.matrix);
      small_ok_ = detail::exact_small_eligible(op_, cfg_);
    }
  }

  const Operator& op() const { return op_; }
  int horizon() const { return horizon_; }

  const WidthEstimate& estimate(int n) {
    if (n < 1) throw std::invalid_argument("WidthOracle: n must be >= 1");
    ensure(n);
    return est_[static_cast<size_t>(n - 1)];
  }

  DofCount count_at(double eps) {
    if (!(eps >= 0.0)) throw std::invalid_argument("count_at: eps must be >= 0");
    DofCount c;
    for (int n = 1; n <= horizon_ + 1; ++n) {
      const WidthEstimate& e = estimate(n);
      if (!e.certified) c.certified = false;
      if (e.lower > eps) {
        ++c.count_low;
      } else if (e.certified_upper <= eps) {
        if (e.lower == e.upper && e.upper == eps) c.exact_tie = true;
        break;  // upper bounds are non-increasing from here on
      } else {
        ++c.straddling;
      }
    }
    c.count_high = c.count_low + c.straddling;
    c.indeterminate = c.straddling > 0;
    c.count = c.count_low;
    return c;
  }

  int count_certified(double eps) {
    DofCount c = count_at(eps);
    if (c.indeterminate) throw IndeterminateCount(eps, c.count_low, c.count_high);
    return c.count;
  }

 private:
  void ensure(int n) {
    if (hilbert_ && est_.empty()) {
      WidthSequence ws = widths_hilbert(op_, std::max(n, horizon_ + 1));
      est_ = std::move(ws.estimates);
    }
    while (static_cast<int>(est_.size()) < n) {
      const int idx = static_cast<int>(est_.size()) + 1;
      WidthEstimate e = detail::width_one(op_, idx, rank_, small_ok_, cfg_);
      if (!est_.empty()) {
        const WidthEstimate& p = est_.back();
        e.upper = std::min(e.upper, p.upper);
        e.certified_upper = std::min(e.certified_upper, p.certified_upper);
        e.lower = std::min(e.lower, e.upper);
      }
      est_.push_back(std::move(e));
    }
  }

  Operator op_;
  WidthConfig cfg_;
  std::vector<WidthEstimate> est_;
  int horizon_ = 0;
  int rank_ = 0;
  bool hilbert_ = false;
  bool small_ok_ = false;
};

inline DofCount dof_at_level(const Operator& T, double eps, const WidthConfig& cfg = {}) {
  return WidthOracle(T, cfg).count_at(eps);
}

inline std::vector<DofCount> dof_over_grid(WidthOracle& oracle, const std::vector<double>& grid) {
  std::vector<DofCount> out;
  out.reserve(grid.size());
  for (double eps : grid) out.push_back(oracle.count_at(eps));
  return out;
}

inline std::vector<DofCount> dof_over_grid(const Operator& T, const std::vector<double>& grid,
                                           const WidthConfig& cfg = {}) {
  WidthOracle oracle(T, cfg);
  return dof_over_grid(oracle, grid);
}

//
// Step-function summary of N: the jump locations are the widths themselves,
// the residual bound certifies that no further jump exceeds it.
//
struct DofCurve {
  std::vector<double> jumps;      // point estimates for d_1..d_k
  double residual_bound = 0.0;    // certified upper bound on d_{k+1}
  bool certified = true;          // jump values exact, not just bracketed
  int count(double eps) const {
    int c = 0;
    for (double j : jumps)
      if (j > eps) ++c;
    return c;
  }
};

inline DofCurve dof_curve(const Operator& T, int k, const WidthConfig& cfg = {}) {
  if (k < 1) throw std::invalid_argument("dof_curve: k must be >= 1");
  WidthSequence ws = compute_widths(T, k + 1, cfg);
  DofCurve curve;
  for (int i = 0; i < k; ++i) {
    const WidthEstimate& e = ws.estimates[static_cast<size_t>(i)];
    curve.jumps.push_back(e.upper);
    if (!e.certified || e.upper - e.lower > 1e-9 * std::max(1.0, e.upper)) curve.certified = false;
  }
  curve.residual_bound = ws.estimates.back().certified_upper;
  return curve;
}

//
// Bisection for the n-th jump location of N; the count drops below n exactly
// where the level crosses d_n, so the jump and the width coincide. The
// bracket must already separate the jump: N(lo) >= n > N(hi).
//
inline double jump_bisect(const Operator& T, int n, double lo, double hi,
                          const WidthConfig& cfg = {}) {
  if (n < 1) throw std::invalid_argument("jump_bisect: n must be >= 1");
  if (!(lo >= 0.0) || !(hi > lo)) throw std::invalid_argument("jump_bisect: invalid bracket");
  WidthOracle oracle(T, cfg);
  if (oracle.count_certified(lo) < n || oracle.count_certified(hi) >= n)
    throw std::invalid_argument("jump_bisect: bracket does not separate the jump");
  const double tol = 1e-8 * std::max(oracle.estimate(1).upper, 1e-30);
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (oracle.count_certified(mid) >= n)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

struct DofWitness {
  int count = 0;
  Subspace span;
  explicit DofWitness(int ambient) : span(ambient) {}
};

//
// Constructive counterpart of the counting function: grow a span greedily by
// the worst-approximated extreme-point image until the quotient norm drops
// to eps. Requires an enumerable polyhedral domain so the sup is exact.
//
inline DofWitness greedy_dof_witness(const Operator& T, double eps, const WidthConfig& cfg = {}) {
  if (!(eps >= 0.0)) throw std::invalid_argument("greedy_dof_witness: eps must be >= 0");
  detail::QuotientEngine eng(T, cfg);
  if (!eng.enumerable())
    throw std::invalid_argument("greedy_dof_witness: enumerable polyhedral domain required");
  const int m = T.codomain.dim;
  Eigen::MatrixXd b(m, 0);
  DofWitness w(m);
  const int guard = std::min(T.domain.dim, m);
  for (int t = 0; t <= guard; ++t) {
    detail::QuotientEval ev = eng.eval(b);
    if (ev.value <= eps || ev.worst < 0) break;
    Eigen::VectorXd z = T.matrix * eng.reps()[static_cast<size_t>(ev.worst)];
    Eigen::VectorXd r = z - b * (b.transpose() * z);
    const double rn = r.norm();
    if (rn <= 1e-14 * std::max(1.0, z.norm())) break;
    b.conservativeResize(Eigen::NoChange, b.cols() + 1);
    b.col(b.cols() - 1) = r / rn;
  }
  w.count = static_cast<int>(b.cols());
  w.span = b.cols() > 0 ? Subspace::from_orthonormal(b) : Subspace(m);
  return w;
}

}  // namespace kdof
