// Width estimates for one small operator under three norm pairs, showing the
// exact Hilbert path, the certified angle-grid oracle, and the subspace
// search agreeing on the same matrix.

#include <cstdio>

#include <kdof/kdof.hpp>

namespace {

void print_sequence(const char* label, const kdof::Operator& op, int k) {
  std::printf("%s\n", label);
  std::printf("  n   lower          upper          certified  method\n");
  kdof::WidthSequence ws = kdof::compute_widths(op, k);
  for (const kdof::WidthEstimate& e : ws.estimates)
    std::printf("  %d   %-13.10g  %-13.10g  %-9s  %s\n", e.index, e.lower, e.upper,
                e.certified ? "yes" : "no", e.method.c_str());
}

}  // namespace

int main() {
  Eigen::VectorXd d(3);
  d << 3.0, 2.0, 1.0;

  print_sequence("diag(3,2,1), p2 -> p2 (singular values)", kdof::make_diagonal(d), 3);

  kdof::Operator p1 = kdof::make_diagonal(d, kdof::make_norm(kdof::NormKind::p1),
                                          kdof::make_norm(kdof::NormKind::p2));
  print_sequence("\ndiag(3,2,1), p1 -> p2 (d_2 = 6/sqrt(13) = 1.6641...)", p1, 3);

  kdof::WidthEstimate oracle = kdof::widths_exact_small(p1, 2);
  std::printf("\nangle-grid oracle for d_2: value %.10g, certified lower %.10g\n", oracle.upper,
              oracle.lower);

  // the counting function jumps exactly at the widths
  kdof::Operator t = kdof::make_diagonal(d);
  std::printf("\njump locations recovered by bisection on N(eps):\n");
  for (int n = 1; n <= 3; ++n) {
    const double lo = d(n - 1) - 0.5;
    const double hi = d(n - 1) + 0.5;
    std::printf("  n=%d: %.10g\n", n, kdof::jump_bisect(t, n, lo, hi));
  }
  return 0;
}
