#pragma once

#include <Eigen/Dense>

#include <stdexcept>

#include "kdof/spaces.hpp"

namespace kdof {

// channel map T: X -> Y as a dense matrix plus the two norm structures
struct Operator {
  Eigen::MatrixXd matrix;  // rows = codomain dim, cols = domain dim
  SpaceModel domain;
  SpaceModel codomain;
};

inline Operator make_operator(const Eigen::MatrixXd& m, const NormSpec& domain_norm,
                              const NormSpec& codomain_norm) {
  if (m.rows() < 1 || m.cols() < 1)
    throw std::invalid_argument("make_operator: matrix must be at least 1x1");
  if (!m.allFinite()) throw std::invalid_argument("make_operator: non-finite matrix entries");
  validate_norm_spec(domain_norm, static_cast<int>(m.cols()), "make_operator(domain)");
  validate_norm_spec(codomain_norm, static_cast<int>(m.rows()), "make_operator(codomain)");
  return Operator{m, SpaceModel{static_cast<int>(m.cols()), domain_norm},
                  SpaceModel{static_cast<int>(m.rows()), codomain_norm}};
}

inline Eigen::VectorXd apply(const Operator& T, const Eigen::VectorXd& x) {
  if (x.size() != T.domain.dim) throw std::invalid_argument("apply: dimension mismatch");
  return T.matrix * x;
}

namespace detail {

// weighted p2 norms absorbed into the matrix: W_Y T W_X^{-1}; sides with a
// non-p2 kind are left untouched
inline Eigen::MatrixXd p2_reduced(const Operator& T) {
  Eigen::MatrixXd m = T.matrix;
  if (T.codomain.norm.kind == NormKind::p2 && T.codomain.norm.weights.size() > 0)
    m = T.codomain.norm.weights.asDiagonal() * m;
  if (T.domain.norm.kind == NormKind::p2 && T.domain.norm.weights.size() > 0)
    m = m * T.domain.norm.weights.cwiseInverse().asDiagonal();
  return m;
}

}  // namespace detail

}  // namespace kdof
