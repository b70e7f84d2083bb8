#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kdof/operator.hpp"
#include "kdof/quadrature.hpp"
#include "kdof/widths.hpp"

namespace kdof {

class MonotonicityViolation : public std::runtime_error {
 public:
  MonotonicityViolation(int rung, double prev, double cur)
      : std::runtime_error("ladder rung " + std::to_string(rung) + " decreased: " +
                           std::to_string(prev) + " -> " + std::to_string(cur)),
        rung_index(rung) {}
  int rung_index;
};

//
// Operator together with an ordered orthonormal domain basis. Truncation to
// the first m basis vectors restricts the unit ball to a nested family of
// sections, so truncated widths are certified lower bounds of the full widths
// and non-decreasing in m.
//
struct SequenceOperator {
  Operator op;
  Eigen::MatrixXd basis;  // columns ordered; prefix spans define the sections
};

inline SequenceOperator make_sequence_operator(Operator op, Eigen::MatrixXd basis) {
  if (op.domain.norm.kind != NormKind::p2 || op.domain.norm.weights.size() > 0)
    throw std::invalid_argument("make_sequence_operator: plain p2 domain required");
  if (basis.rows() != op.domain.dim || basis.cols() < 1 || basis.cols() > op.domain.dim)
    throw std::invalid_argument("make_sequence_operator: basis shape mismatch");
  // re-orthonormalize; unpivoted QR keeps every prefix span intact
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis);
  Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  const double scale = std::abs(r(0, 0));
  Eigen::MatrixXd q = Eigen::MatrixXd(qr.householderQ()).leftCols(basis.cols());
  for (int k = 0; k < basis.cols(); ++k) {
    if (std::abs(r(k, k)) <= 1e-12 * std::max(scale, 1.0))
      throw std::invalid_argument("make_sequence_operator: basis columns are dependent");
    if (r(k, k) < 0) q.col(k) = -q.col(k);
  }
  return SequenceOperator{std::move(op), std::move(q)};
}

inline Operator truncate(const SequenceOperator& s, int m) {
  if (m < 1 || m > s.basis.cols())
    throw std::invalid_argument("truncate: m out of range");
  return make_operator(s.op.matrix * s.basis.leftCols(m), make_norm(NormKind::p2),
                       s.op.codomain.norm);
}

// certified lower bound for the n-th width via the m-th section
inline WidthEstimate truncated_width(const SequenceOperator& s, int n, int m,
                                     const WidthConfig& cfg = {}) {
  Operator tm = truncate(s, m);
  WidthSequence ws = compute_widths(tm, n, cfg);
  return ws.estimates.back();
}

struct Ladder {
  int n = 1;
  std::vector<int> ms;
  std::vector<double> rungs;      // certified lower bounds for sigma_n
  std::vector<bool> certified;
};

inline Ladder ladder(const SequenceOperator& s, int n, const std::vector<int>& ms,
                     const WidthConfig& cfg = {}) {
  if (n < 1) throw std::invalid_argument("ladder: n must be >= 1");
  if (ms.empty()) throw std::invalid_argument("ladder: empty m list");
  for (size_t i = 0; i < ms.size(); ++i) {
    if (ms[i] < 1 || ms[i] > s.basis.cols())
      throw std::invalid_argument("ladder: m out of range");
    if (i > 0 && ms[i] <= ms[i - 1])
      throw std::invalid_argument("ladder: m list must be strictly increasing");
  }
  Ladder lad;
  lad.n = n;
  lad.ms = ms;
  for (size_t i = 0; i < ms.size(); ++i) {
    WidthEstimate e = truncated_width(s, n, ms[i], cfg);
    lad.rungs.push_back(e.lower);
    lad.certified.push_back(e.certified);
    if (i > 0 && lad.certified[i] && lad.certified[i - 1]) {
      const double tol = 1e-10 * std::max(1.0, std::abs(lad.rungs[i - 1]));
      if (lad.rungs[i] < lad.rungs[i - 1] - tol)
        throw MonotonicityViolation(static_cast<int>(i), lad.rungs[i - 1], lad.rungs[i]);
    }
  }
  return lad;
}

struct ConvergenceReport {
  int n = 1;
  double estimate = 0.0;           // finest certified rung
  double final_relative_gap = 0.0; // between the two finest certified rungs
  int certified_rungs = 0;
};

inline ConvergenceReport convergence_report(const Ladder& lad) {
  std::vector<double> cert;
  for (size_t i = 0; i < lad.rungs.size(); ++i)
    if (lad.certified[i]) cert.push_back(lad.rungs[i]);
  if (cert.size() < 2)
    throw std::invalid_argument("convergence_report: at least two certified rungs required");
  ConvergenceReport rep;
  rep.n = lad.n;
  rep.certified_rungs = static_cast<int>(cert.size());
  rep.estimate = cert.back();
  const double denom = std::max(std::abs(rep.estimate), 1e-300);
  rep.final_relative_gap = (cert.back() - cert[cert.size() - 2]) / denom;
  return rep;
}

//
// Nystrom-style discretization of an integral operator: the scaled matrix
// acts between the quadrature coefficient spaces so that plain p2 norms
// represent the L2 norms of the underlying functions.
//
template <class K>
Operator discretize(K&& kernel, const Quadrature& out_q, const Quadrature& in_q) {
  const int rows = static_cast<int>(out_q.nodes.size());
  const int cols = static_cast<int>(in_q.nodes.size());
  Eigen::MatrixXd a(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const double vi = std::sqrt(out_q.weights(i));
    for (int j = 0; j < cols; ++j)
      a(i, j) = vi * kernel(out_q.nodes(i), in_q.nodes(j)) * std::sqrt(in_q.weights(j));
  }
  return make_operator(std::move(a), make_norm(NormKind::p2), make_norm(NormKind::p2));
}

//
// Orthonormal polynomial basis of the domain, ordered by degree. Sections
// spanned by low-degree polynomials converge quickly for smooth kernels,
// which is what makes the ladder informative at small m.
//
inline SequenceOperator to_sequence(const Operator& a, const Quadrature& in_q) {
  if (a.domain.norm.kind != NormKind::p2 || a.domain.norm.weights.size() > 0)
    throw std::invalid_argument("to_sequence: plain p2 domain required");
  const int m = a.domain.dim;
  if (static_cast<int>(in_q.nodes.size()) != m)
    throw std::invalid_argument("to_sequence: quadrature size mismatch");
  const double len = in_q.b - in_q.a;
  Eigen::MatrixXd v(m, m);
  for (int j = 0; j < m; ++j) {
    const double x = 2.0 * (in_q.nodes(j) - in_q.a) / len - 1.0;
    const double sw = std::sqrt(in_q.weights(j));
    double p0 = 1.0, p1 = x;
    for (int k = 0; k < m; ++k) {
      double pk;
      if (k == 0) {
        pk = 1.0;
      } else if (k == 1) {
        pk = x;
      } else {
        pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      v(j, k) = std::sqrt((2.0 * k + 1.0) / len) * pk * sw;
    }
  }
  return make_sequence_operator(a, std::move(v));
}

inline SequenceOperator diagonal_family(const Eigen::VectorXd& decays) {
  if (decays.size() < 1) throw std::invalid_argument("diagonal_family: empty diagonal");
  const int m = static_cast<int>(decays.size());
  Eigen::MatrixXd d = decays.asDiagonal();
  Operator op = make_operator(std::move(d), make_norm(NormKind::p2), make_norm(NormKind::p2));
  return SequenceOperator{std::move(op), Eigen::MatrixXd::Identity(m, m)};
}

}  // namespace kdof
