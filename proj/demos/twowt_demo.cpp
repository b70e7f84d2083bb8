// Degrees of freedom of the discrete time-frequency limiter: the count at
// half height tracks the 2WT rule, with a logarithmically thin plunge region
// around it.

#include <cstdio>

#include <kdof/kdof.hpp>

int main() {
  const int size = 256;
  const double w = 0.1;
  const double eps = 0.5;

  kdof::TwoWtResult r = kdof::dof_vs_2wt(size, w, eps);
  std::printf("time-frequency limiter, size %d, W = %g\n", size, w);
  std::printf("  N(%g)     = %d\n", eps, r.dof);
  std::printf("  2WT       = %.4g\n", r.twowt);
  std::printf("  deviation = %+.4g\n", r.deviation);

  kdof::Operator t = kdof::make_timefreq_limiter(size, w);
  kdof::WidthSequence ws = kdof::widths_hilbert(t, size);
  Eigen::VectorXd widths(size);
  for (int n = 1; n <= size; ++n) widths(n - 1) = ws.estimates[n - 1].upper;

  kdof::PlungeStats p = kdof::plunge_stats(widths, size, w);
  std::printf("\nplunge region (0.1 / 0.9 thresholds):\n");
  std::printf("  last n with d_n > 0.9 : %d\n", p.last_above);
  std::printf("  first n with d_n < 0.1: %d\n", p.first_below);
  std::printf("  width                 : %d\n", p.plunge_width);
  std::printf("  c_low, c_high         : %.4f, %.4f\n", p.c_low, p.c_high);

  std::printf("\nwidths around the plunge:\n");
  for (int n = p.last_above - 1; n <= p.first_below + 1; ++n)
    if (n >= 1 && n <= size) std::printf("  d_%-3d = %.6f\n", n, widths(n - 1));
  return 0;
}
