#include "eglb/dmd.hpp"

#include <algorithm>
#include <string>

#include "eglb/errors.hpp"

namespace eglb {

std::vector<double> subgradient(const std::vector<double>& z_carbon,
                                const std::vector<double>& z_water,
                                const std::vector<double>& carbon,
                                const std::vector<double>& water) {
  const size_t n = z_carbon.size();
  if (z_water.size() != n || carbon.size() != n || water.size() != n)
    throw StructuralError("subgradient: all vectors must have length N");
  std::vector<double> d(2 * n);
  for (size_t i = 0; i < n; ++i) {
    d[i] = z_carbon[i] - carbon[i];
    d[n + i] = z_water[i] - water[i];
  }
  return d;
}

DualState update(const DualState& state, const std::vector<double>& d) {
  if (!(state.eta > 0.0)) throw ConfigError("learning rate eta must be > 0");
  if (state.reference != ReferenceFunction::Quadratic)
    throw ConfigError("only the quadratic reference function is implemented");
  if (d.size() != state.kappa.size())
    throw StructuralError("update: subgradient length " + std::to_string(d.size()) +
                          " != dual length " + std::to_string(state.kappa.size()));
  DualState next = state;
  for (size_t i = 0; i < d.size(); ++i)
    next.kappa[i] = std::max(state.kappa[i] - state.eta * d[i], 0.0);
  return next;
}

}  // namespace eglb
