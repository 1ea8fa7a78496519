#pragma once

#include "fracmim/types.hpp"

namespace fracmim {

// Convolution weights of the memory term:
//   M_j = (j+1)^{2-alpha} - j^{2-alpha},   G_j = M_j - M_{j-1}.
// m holds M_0..M_{count-1}; g holds G_1..G_{count-1} (g[j-1] is G_j) and is
// formed from the stored m values, so the difference identity holds bitwise.
struct WeightTable {
  double alpha = 0.5;
  VecX m;
  VecX g;

  double M(Index j) const { return m[j]; }
  double G(Index j) const { return g[j - 1]; }
  Index count() const { return m.size(); }
};

// Builds the table for 0 < alpha < 1 and count >= 1. For large j the direct
// difference cancels, so j >= 64 switches to j^{2-alpha} * expm1((2-alpha) *
// log1p(1/j)), which keeps the monotonicity of M and G intact at count=2000.
WeightTable build_weights(double alpha, Index count);

// Gamma(3-alpha) - (2^{2-alpha} - 3) * tau^{1-alpha}. Nonnegative return
// certifies the sufficient stability condition; tau <= 1 always qualifies.
double stability_margin(double alpha, double tau);

}  // namespace fracmim
