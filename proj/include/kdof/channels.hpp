#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

#include "kdof/operator.hpp"
#include "kdof/quadrature.hpp"
#include "kdof/rng.hpp"
#include "kdof/truncation.hpp"
#include "kdof/widths.hpp"

namespace kdof {

inline Operator make_diagonal(const Eigen::VectorXd& decays,
                              NormSpec domain_norm = make_norm(NormKind::p2),
                              NormSpec codomain_norm = make_norm(NormKind::p2)) {
  if (decays.size() < 1) throw std::invalid_argument("make_diagonal: size must be >= 1");
  Eigen::MatrixXd m = decays.asDiagonal();
  return make_operator(std::move(m), std::move(domain_norm), std::move(codomain_norm));
}

inline Operator make_gaussian_kernel(double width, double a, double b, int m) {
  if (!(width > 0)) throw std::invalid_argument("make_gaussian_kernel: width must be > 0");
  if (m < 1) throw std::invalid_argument("make_gaussian_kernel: m must be >= 1");
  const Quadrature q = gauss_legendre(m, a, b);
  auto kernel = [width](double s, double t) {
    const double d = s - t;
    return std::exp(-d * d / width);
  };
  return discretize(kernel, q, q);
}

//
// Discrete prolate matrix: composition of ideal band limiting (normalized
// bandwidth W) with time limiting to `size` samples. Symmetric with
// eigenvalues in [0, 1], sharply concentrated: about 2*W*size of them are
// near 1 and the rest near 0.
//
inline Operator make_timefreq_limiter(int size, double w) {
  if (size < 1) throw std::invalid_argument("make_timefreq_limiter: size must be >= 1");
  if (!(w > 0.0) || !(w < 0.5))
    throw std::invalid_argument("make_timefreq_limiter: W must satisfy 0 < W < 1/2");
  Eigen::MatrixXd m(size, size);
  const double pi = 3.141592653589793;
  for (int i = 0; i < size; ++i) {
    for (int j = 0; j < size; ++j) {
      if (i == j)
        m(i, j) = 2.0 * w;
      else
        m(i, j) = std::sin(2.0 * pi * w * (i - j)) / (pi * (i - j));
    }
  }
  return make_operator(std::move(m), make_norm(NormKind::p2), make_norm(NormKind::p2));
}

inline Operator make_random_gaussian(int rows, int cols, std::uint64_t seed,
                                     NormSpec domain_norm = make_norm(NormKind::p2),
                                     NormSpec codomain_norm = make_norm(NormKind::p2)) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("make_random_gaussian: sizes must be >= 1");
  Rng rng(seed);
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.normal();
  return make_operator(std::move(m), std::move(domain_norm), std::move(codomain_norm));
}

struct TwoWtResult {
  int dof = 0;
  double twowt = 0.0;
  double deviation = 0.0;
};

inline TwoWtResult dof_vs_2wt(int size, double w, double eps) {
  Operator t = make_timefreq_limiter(size, w);
  WidthSequence ws = widths_hilbert(t, size);
  int count = 0;
  for (const auto& e : ws.estimates)
    if (e.upper > eps) ++count;
  TwoWtResult r;
  r.dof = count;
  r.twowt = 2.0 * w * size;
  r.deviation = count - r.twowt;
  return r;
}

//
// Plunge-region statistics of a non-increasing width sequence: the last index
// still above `hi`, the first index already below `lo`, their separation, and
// the implied constants in the 2Wsize ± c*log(size) window.
//
struct PlungeStats {
  int last_above = 0;    // max n with d_n > hi (0 if none)
  int first_below = 0;   // min n with d_n < lo (size + 1 if none)
  int plunge_width = 0;  // first_below - last_above
  double c_low = 0.0;    // (2Wsize - last_above) / log(size)
  double c_high = 0.0;   // (first_below - 2Wsize) / log(size)
};

inline PlungeStats plunge_stats(const Eigen::VectorXd& widths, int size, double w,
                                double lo = 0.1, double hi = 0.9) {
  if (!(lo < hi)) throw std::invalid_argument("plunge_stats: need lo < hi");
  PlungeStats p;
  const int k = static_cast<int>(widths.size());
  for (int n = 1; n <= k; ++n)
    if (widths(n - 1) > hi) p.last_above = n;
  p.first_below = k + 1;
  for (int n = k; n >= 1; --n)
    if (widths(n - 1) < lo) p.first_below = n;
  p.plunge_width = p.first_below - p.last_above;
  const double logn = std::log(static_cast<double>(size));
  p.c_low = (2.0 * w * size - p.last_above) / logn;
  p.c_high = (p.first_below - 2.0 * w * size) / logn;
  return p;
}

}  // namespace kdof
