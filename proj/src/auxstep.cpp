#include "eglb/auxstep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "eglb/errors.hpp"

namespace eglb {

namespace {

void validate(const AuxBlock& b) {
  const size_t n = b.theta.size();
  if (b.kappa.size() != n || b.zbar.size() != n)
    throw StructuralError("aux block vectors must share one length");
  if (!b.offset.empty() && b.offset.size() != n)
    throw StructuralError("aux block offset has wrong length");
  if (!(b.mu >= 0.0)) throw StructuralError("aux block mu must be >= 0");
  auto nonneg = [](const std::vector<double>& v, const char* name) {
    for (double x : v)
      if (!(x >= 0.0)) throw StructuralError(std::string("aux block ") + name + " must be >= 0");
  };
  nonneg(b.theta, "theta");
  nonneg(b.kappa, "kappa");
  nonneg(b.zbar, "zbar");
  nonneg(b.offset, "offset");
}

}  // namespace

BlockSolution minimize_block(const AuxBlock& b) {
  validate(b);
  const int n = static_cast<int>(b.theta.size());
  const bool shifted = !b.offset.empty();
  auto off = [&](int i) { return shifted ? b.offset[i] : 0.0; };

  // The max level can never drop below the largest offset.
  double base = 0.0;
  for (int i = 0; i < n; ++i) base = std::max(base, off(i));

  std::vector<double> candidates;
  candidates.push_back(base);
  for (int i = 0; i < n; ++i) {
    if (off(i) >= base) candidates.push_back(off(i));
    double sat = off(i) + b.theta[i] * b.zbar[i];
    if (sat >= base) candidates.push_back(sat);
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  auto z_at = [&](double m, std::vector<double>& z) {
    for (int i = 0; i < n; ++i) {
      if (b.kappa[i] <= 0.0) {
        z[i] = 0.0;  // any level-feasible value is optimal; 0 tames the dual
      } else if (b.theta[i] <= 0.0) {
        z[i] = b.zbar[i];  // the max term never sees this coordinate
      } else {
        z[i] = std::clamp((m - off(i)) / b.theta[i], 0.0, b.zbar[i]);
      }
    }
  };
  auto value_of = [&](const std::vector<double>& z) {
    double level = n > 0 ? -std::numeric_limits<double>::infinity() : 0.0;
    double linear = 0.0;
    for (int i = 0; i < n; ++i) {
      level = std::max(level, b.theta[i] * z[i] + off(i));
      linear += b.kappa[i] * z[i];
    }
    if (n == 0) level = 0.0;
    return b.mu * level - linear;
  };

  BlockSolution best;
  best.z.assign(n, 0.0);
  best.value = std::numeric_limits<double>::infinity();
  std::vector<double> z(n, 0.0);
  for (double m : candidates) {
    z_at(m, z);
    double v = value_of(z);
    if (v < best.value) {  // strict: ties resolve to the smaller level
      best.value = v;
      best.z = z;
    }
  }
  if (n == 0) best.value = 0.0;
  return best;
}

AuxSolution minimize_aux(const AuxBlock& carbon, const AuxBlock& water) {
  AuxSolution s;
  auto c = minimize_block(carbon);
  auto w = minimize_block(water);
  s.z_carbon = std::move(c.z);
  s.z_water = std::move(w.z);
  s.value = c.value + w.value;
  return s;
}

}  // namespace eglb
