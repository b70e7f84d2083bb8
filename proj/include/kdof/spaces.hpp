#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "kdof/detail/simplex.hpp"

namespace kdof {

enum class NormKind { p1, p2, pInf };

inline const char* to_string(NormKind k) {
  switch (k) {
    case NormKind::p1: return "p1";
    case NormKind::p2: return "p2";
    default: return "pinf";
  }
}

// ‖x‖ = ‖(w_i x_i)_i‖_p; empty weights mean the unweighted norm
struct NormSpec {
  NormKind kind = NormKind::p2;
  Eigen::VectorXd weights;

  bool polyhedral() const { return kind != NormKind::p2; }
};

inline NormSpec make_norm(NormKind kind) { return NormSpec{kind, Eigen::VectorXd()}; }
inline NormSpec make_norm(NormKind kind, const Eigen::VectorXd& w) { return NormSpec{kind, w}; }

struct SpaceModel {
  int dim = 0;
  NormSpec norm;
};

inline constexpr double tau_fit_p2 = 1e-10;
inline constexpr double tau_fit_lp = 1e-9;
inline constexpr int default_sign_cap = 20;
inline constexpr int default_lp_cap = 64;

inline void validate_norm_spec(const NormSpec& spec, int dim, const std::string& where) {
  if (dim < 1) throw std::invalid_argument(where + ": dimension must be >= 1");
  if (spec.weights.size() > 0) {
    if (spec.weights.size() != dim)
      throw std::invalid_argument(where + ": weight vector does not match dimension");
    for (int i = 0; i < dim; ++i) {
      if (!(spec.weights(i) > 0.0) || !std::isfinite(spec.weights(i)))
        throw std::invalid_argument(where + ": weights must be strictly positive and finite");
    }
  }
}

namespace detail {

inline Eigen::VectorXd weights_or_ones(const NormSpec& spec, int dim) {
  if (spec.weights.size() > 0) return spec.weights;
  return Eigen::VectorXd::Ones(dim);
}

}  // namespace detail

inline double norm(const Eigen::VectorXd& v, const NormSpec& spec) {
  if (spec.weights.size() > 0 && spec.weights.size() != v.size())
    throw std::invalid_argument("norm: vector/weight dimension mismatch");
  if (v.size() == 0) return 0.0;
  Eigen::VectorXd s = spec.weights.size() > 0 ? Eigen::VectorXd(spec.weights.cwiseProduct(v)) : v;
  switch (spec.kind) {
    case NormKind::p1: return s.lpNorm<1>();
    case NormKind::p2: return s.norm();
    default: return s.lpNorm<Eigen::Infinity>();
  }
}

namespace detail {

// sup over the spec unit ball of <phi, x>
inline double dual_norm(const Eigen::VectorXd& phi, const NormSpec& spec) {
  Eigen::VectorXd s = phi.cwiseQuotient(weights_or_ones(spec, static_cast<int>(phi.size())));
  switch (spec.kind) {
    case NormKind::p1: return s.lpNorm<Eigen::Infinity>();
    case NormKind::p2: return s.norm();
    default: return s.lpNorm<1>();
  }
}

}  // namespace detail

//
// Subspace of R^ambient held as an orthonormal Euclidean basis. The span is
// the semantic identity; the particular basis is only a representation.
// Construction from arbitrary spanning columns drops numerically dependent
// directions at the relative rank threshold 1e-10 (tau_rank against the
// largest column norm, which is what column-pivoted QR compares against).
//
class Subspace {
 public:
  explicit Subspace(int ambient) : ambient_(ambient), basis_(ambient, 0) {
    if (ambient < 1) throw std::invalid_argument("Subspace: ambient dimension must be >= 1");
  }

  explicit Subspace(const Eigen::MatrixXd& span_cols) : ambient_(static_cast<int>(span_cols.rows())) {
    if (ambient_ < 1) throw std::invalid_argument("Subspace: ambient dimension must be >= 1");
    if (span_cols.cols() == 0) {
      basis_.resize(ambient_, 0);
      return;
    }
    if (!span_cols.allFinite()) throw std::invalid_argument("Subspace: non-finite basis entries");
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(span_cols);
    qr.setThreshold(1e-10);
    const int r = static_cast<int>(qr.rank());
    Eigen::MatrixXd q = qr.householderQ();
    basis_ = q.leftCols(r);
  }

  // trusted path for search inner loops: columns must already be orthonormal
  static Subspace from_orthonormal(const Eigen::MatrixXd& q) {
    Subspace s(static_cast<int>(q.rows()));
    s.basis_ = q;
    return s;
  }

  int ambient_dim() const { return ambient_; }
  int dim() const { return static_cast<int>(basis_.cols()); }
  const Eigen::MatrixXd& basis() const { return basis_; }

 private:
  int ambient_;
  Eigen::MatrixXd basis_;
};

struct ExtremePointSet {
  enum class Status { Enumerated, NotPolyhedral, CapExceeded };
  Status status = Status::Enumerated;
  // one representative per +/- pair for pInf; both signs listed for p1
  std::vector<Eigen::VectorXd> points;
};

inline ExtremePointSet extreme_points(const NormSpec& spec, int dim, int sign_cap = default_sign_cap) {
  validate_norm_spec(spec, dim, "extreme_points");
  ExtremePointSet out;
  const Eigen::VectorXd w = detail::weights_or_ones(spec, dim);
  switch (spec.kind) {
    case NormKind::p2:
      out.status = ExtremePointSet::Status::NotPolyhedral;
      return out;
    case NormKind::p1:
      for (int j = 0; j < dim; ++j) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
        e(j) = 1.0 / w(j);
        out.points.push_back(e);
        out.points.push_back(-e);
      }
      return out;
    default: {
      if (dim > sign_cap) {
        out.status = ExtremePointSet::Status::CapExceeded;
        return out;
      }
      const std::uint64_t count = 1ull << (dim - 1);
      out.points.reserve(count);
      for (std::uint64_t t = 0; t < count; ++t) {
        Eigen::VectorXd x(dim);
        x(0) = 1.0 / w(0);
        for (int i = 1; i < dim; ++i) x(i) = ((t >> (i - 1)) & 1ull) ? -1.0 / w(i) : 1.0 / w(i);
        out.points.push_back(x);
      }
      return out;
    }
  }
}

struct DistanceResult {
  double distance = 0.0;
  Eigen::VectorXd coeffs;
  bool converged = true;
};

//
// Best approximation of y from span(S) in the given norm. p2 reduces to a
// (weighted) least-squares projection; p1 and pInf are solved exactly as
// linear programs. On an iteration-limited solve the returned distance is the
// objective of the last feasible point, a valid upper bound, with converged
// set to false.
//
inline DistanceResult distance_to_subspace(const Eigen::VectorXd& y, const Subspace& S,
                                           const NormSpec& spec) {
  const int m = static_cast<int>(y.size());
  if (S.ambient_dim() != m)
    throw std::invalid_argument("distance_to_subspace: ambient dimension mismatch");
  validate_norm_spec(spec, m, "distance_to_subspace");
  const int k = S.dim();
  DistanceResult out;
  if (k == 0) {
    out.distance = norm(y, spec);
    out.coeffs = Eigen::VectorXd(0);
    return out;
  }
  const Eigen::MatrixXd& B = S.basis();
  if (spec.kind == NormKind::p2) {
    if (spec.weights.size() == 0) {
      out.coeffs = B.transpose() * y;
      out.distance = (y - B * out.coeffs).norm();
    } else {
      Eigen::MatrixXd wb = spec.weights.asDiagonal() * B;
      Eigen::VectorXd wy = spec.weights.cwiseProduct(y);
      out.coeffs = wb.colPivHouseholderQr().solve(wy);
      out.distance = (wy - wb * out.coeffs).norm();
    }
    return out;
  }

  const Eigen::VectorXd w = detail::weights_or_ones(spec, m);
  const Eigen::MatrixXd wb = w.asDiagonal() * B;
  const Eigen::VectorXd wy = w.cwiseProduct(y);
  const bool is_p1 = spec.kind == NormKind::p1;
  // variables: [a+ (k), a- (k), u (m for p1 / 1 for pInf), slacks (2m)]
  const int nu = is_p1 ? m : 1;
  const int ncols = 2 * k + nu + 2 * m;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * m, ncols);
  Eigen::VectorXd b(2 * m), c = Eigen::VectorXd::Zero(ncols);
  for (int i = 0; i < m; ++i) {
    A.block(i, 0, 1, k) = wb.row(i);
    A.block(i, k, 1, k) = -wb.row(i);
    A.block(m + i, 0, 1, k) = wb.row(i);
    A.block(m + i, k, 1, k) = -wb.row(i);
    const int ucol = 2 * k + (is_p1 ? i : 0);
    A(i, ucol) = 1.0;        // w_i (y - Ba)_i <= u
    A(m + i, ucol) = -1.0;   // w_i (y - Ba)_i >= -u
    A(i, 2 * k + nu + i) = -1.0;
    A(m + i, 2 * k + nu + m + i) = 1.0;
    b(i) = wy(i);
    b(m + i) = wy(i);
  }
  for (int j = 0; j < nu; ++j) c(2 * k + j) = 1.0;

  detail::LpResult lp = detail::solve_lp(A, b, c);
  if (lp.status == detail::LpResult::Status::Optimal ||
      lp.status == detail::LpResult::Status::IterLimit) {
    out.distance = std::max(0.0, lp.objective);
    out.coeffs = lp.x.head(k) - lp.x.segment(k, k);
    out.converged = lp.status == detail::LpResult::Status::Optimal;
  } else {
    // cannot happen for these always-feasible, bounded programs; degrade to
    // the trivial upper bound rather than inventing a value
    out.distance = norm(y, spec);
    out.coeffs = Eigen::VectorXd::Zero(k);
    out.converged = false;
  }
  return out;
}

//
// Smallest C with ‖x‖_from <= C ‖x‖_to. Equivalent to the operator norm of
// diag(wf_i / wt_i) mapping the `to` p-space into the `from` p-space, which
// has a closed form for every kind pair; unweighted cases reduce to the
// classical constants (sqrt(k), k, 1).
//
inline double equivalence_constant(const NormSpec& from, const NormSpec& to, int dim) {
  validate_norm_spec(from, dim, "equivalence_constant");
  validate_norm_spec(to, dim, "equivalence_constant");
  const Eigen::VectorXd d =
      detail::weights_or_ones(from, dim).cwiseQuotient(detail::weights_or_ones(to, dim));
  const NormKind f = from.kind, t = to.kind;
  if ((f == NormKind::p1 && t == NormKind::p2) || (f == NormKind::p2 && t == NormKind::pInf))
    return d.norm();
  if (f == NormKind::p1 && t == NormKind::pInf) return d.lpNorm<1>();
  return d.lpNorm<Eigen::Infinity>();
}

}  // namespace kdof
