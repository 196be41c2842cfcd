#pragma once

#include <vector>

namespace eglb {

enum class ReferenceFunction { Quadratic };  // h(a) = 0.5 * ||a||^2

// Lagrange multipliers for the footprint-target constraints: the first N
// entries penalize carbon, the last N water.
struct DualState {
  std::vector<double> kappa;  // length 2N, componentwise >= 0
  double eta = 0.0;           // learning rate, > 0
  ReferenceFunction reference = ReferenceFunction::Quadratic;
};

// d_t = [z_c; z_w] - [carbon; water].
std::vector<double> subgradient(const std::vector<double>& z_carbon,
                                const std::vector<double>& z_water,
                                const std::vector<double>& carbon,
                                const std::vector<double>& water);

// Mirror-descent step. With the quadratic reference the Bregman projection
// has the closed form kappa' = max(kappa - eta * d, 0).
DualState update(const DualState& state, const std::vector<double>& d);

}  // namespace eglb
