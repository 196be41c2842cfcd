#pragma once

#include <vector>

namespace eglb {

// One block of the auxiliary-variable step:
//   minimize  mu * max_i(theta_i * z_i + offset_i) - kappa . z
//   over      0 <= z_i <= zbar_i.
// `offset` is an optional affine shift inside the max (empty = all zero); the
// receding-horizon solver uses it to account for footprints carried in from
// past slots.
struct AuxBlock {
  double mu = 0.0;
  std::vector<double> theta;
  std::vector<double> kappa;
  std::vector<double> zbar;
  std::vector<double> offset;
};

struct BlockSolution {
  std::vector<double> z;
  double value = 0.0;
};

// Exact minimizer. The objective restricted to the path
// z_i(m) = min(zbar_i, (m - offset_i)/theta_i) is convex piecewise-linear in
// the trial max-level m, so scanning its breakpoints suffices. Coordinates
// with kappa_i = 0 are pinned to 0 (any value under the max level is optimal;
// 0 keeps the dual subgradient smallest). Ties resolve to the smaller m.
BlockSolution minimize_block(const AuxBlock& block);

struct AuxSolution {
  std::vector<double> z_carbon;
  std::vector<double> z_water;
  double value = 0.0;  // sum of the two block values
};

// The joint objective separates across the carbon and water blocks.
AuxSolution minimize_aux(const AuxBlock& carbon, const AuxBlock& water);

}  // namespace eglb
