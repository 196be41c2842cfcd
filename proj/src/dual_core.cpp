#include "dual_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "eglb/auxstep.hpp"

namespace eglb::detail {

namespace {

// Dense LU with partial pivoting for the tiny master bases.
struct Lu {
  int n = 0;
  std::vector<double> a;   // n x n, factored in place
  std::vector<int> perm;

  void factor(std::vector<double> matrix, int dim) {
    n = dim;
    a = std::move(matrix);
    perm.resize(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int col = 0; col < n; ++col) {
      int piv = col;
      for (int r = col + 1; r < n; ++r)
        if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
      if (piv != col) {
        for (int c = 0; c < n; ++c) std::swap(a[col * n + c], a[piv * n + c]);
        std::swap(perm[col], perm[piv]);
      }
      double d = a[col * n + col];
      if (std::abs(d) < 1e-13)
        throw std::runtime_error("singular master basis");
      for (int r = col + 1; r < n; ++r) {
        double f = a[r * n + col] / d;
        a[r * n + col] = f;
        for (int c = col + 1; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
      }
    }
  }

  // Solves B x = rhs.
  std::vector<double> solve(const std::vector<double>& rhs) const {
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = rhs[perm[i]];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j) x[i] -= a[i * n + j] * x[j];
    for (int i = n - 1; i >= 0; --i) {
      for (int j = i + 1; j < n; ++j) x[i] -= a[i * n + j] * x[j];
      x[i] /= a[i * n + i];
    }
    return x;
  }

  // Solves B^T y = rhs.
  std::vector<double> solve_transposed(const std::vector<double>& rhs) const {
    std::vector<double> y(rhs);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < i; ++j) y[i] -= a[j * n + i] * y[j];
      y[i] /= a[i * n + i];
    }
    for (int i = n - 1; i >= 0; --i)
      for (int j = i + 1; j < n; ++j) y[i] -= a[j * n + i] * y[j];
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[perm[i]] = y[i];
    return out;
  }
};

// Revised simplex for the master in its dual form:
//   min  sum_j c_j l_j + sum_i ub_i y_i
//   s.t. sum_j l_j = 1                        (row 0)
//        sum_j grad_{j,i} l_j - y_i + s_i = 0 (row 1 + i)
//        l, y, s >= 0.
// Columns: cut weights l_j (id = j), then y_i (id = kYBase + 2i) and
// s_i (id = kYBase + 2i + 1). The basis persists across master re-solves;
// every pivot refactorizes, so no drift accumulates. The row duals recover
// the model argmax: pi_0 = v*, kappa_i = -pi_{1+i}.
constexpr int kYBase = 1 << 30;

class MasterLP {
 public:
  MasterLP(int m, std::vector<double> ub) : m_(m), rows_(m + 1), ub_(std::move(ub)) {}

  void column(int id, std::vector<double>& out) const {
    std::fill(out.begin(), out.end(), 0.0);
    if (id < kYBase) {
      const Cut& cut = (*cuts_)[id];
      out[0] = 1.0;
      for (int i = 0; i < m_; ++i) out[1 + i] = cut.grad[i];
    } else {
      int i = (id - kYBase) / 2;
      out[1 + i] = (id - kYBase) % 2 == 0 ? -1.0 : 1.0;
    }
  }

  double cost(int id) const {
    if (id < kYBase) {
      const Cut& cut = (*cuts_)[id];
      double c = cut.value;
      for (int i = 0; i < m_; ++i) c -= cut.grad[i] * cut.kappa[i];
      return c;
    }
    int i = (id - kYBase) / 2;
    return (id - kYBase) % 2 == 0 ? ub_[i] : 0.0;
  }

  MasterResult solve(const std::vector<Cut>& cuts) {
    cuts_ = &cuts;
    if (basis_.empty()) initial_basis();
    const int k = static_cast<int>(cuts.size());

    double cost_scale = 1.0;
    for (int j = 0; j < k; ++j) cost_scale = std::max(cost_scale, std::abs(cost(j)));
    const double eps = 1e-11 * cost_scale;

    std::vector<double> col(rows_);
    Lu lu;
    std::vector<double> b(rows_, 0.0);
    b[0] = 1.0;

    const int max_pivots = 400 + 40 * (rows_ + k);
    int pivot = 0;
    for (; pivot < max_pivots; ++pivot) {
      factor(lu);
      std::vector<double> cb(rows_);
      for (int r = 0; r < rows_; ++r) cb[r] = cost(basis_[r]);
      auto pi = lu.solve_transposed(cb);

      // Pricing (Bland: first eligible in the fixed column order).
      int enter = -1;
      for (int j = 0; j < k && enter == -1; ++j) {
        double r = cost(j) - pi[0];
        const Cut& cut = cuts[j];
        for (int i = 0; i < m_; ++i) r -= pi[1 + i] * cut.grad[i];
        if (r < -eps && !is_basic(j)) enter = j;
      }
      for (int i = 0; i < m_ && enter == -1; ++i) {
        double ry = ub_[i] + pi[1 + i];  // y_i column is -e_{1+i}
        if (ry < -eps && !is_basic(kYBase + 2 * i)) enter = kYBase + 2 * i;
        if (enter == -1) {
          double rs = -pi[1 + i];
          if (rs < -eps && !is_basic(kYBase + 2 * i + 1)) enter = kYBase + 2 * i + 1;
        }
      }
      if (enter == -1) break;

      column(enter, col);
      auto dir = lu.solve(col);
      auto xb = lu.solve(b);
      int leave = -1;
      double best_ratio = 0.0;
      for (int r = 0; r < rows_; ++r) {
        if (dir[r] <= 1e-11) continue;
        double ratio = std::max(xb[r], 0.0) / dir[r];
        if (leave == -1 || ratio < best_ratio - 1e-12 * (1.0 + best_ratio) ||
            (ratio <= best_ratio + 1e-12 * (1.0 + best_ratio) &&
             basis_[r] < basis_[leave]))
          {
            leave = r;
            best_ratio = ratio;
          }
      }
      if (leave == -1) throw std::logic_error("master LP unbounded");
      basis_[leave] = enter;
    }
    if (pivot >= max_pivots) throw std::logic_error("master LP exceeded its pivot budget");

    factor(lu);
    auto xb = lu.solve(b);
    std::vector<double> cb(rows_);
    for (int r = 0; r < rows_; ++r) cb[r] = cost(basis_[r]);
    auto pi = lu.solve_transposed(cb);

    MasterResult res;
    res.lambda.assign(k, 0.0);
    double lambda_sum = 0.0;
    for (int r = 0; r < rows_; ++r)
      if (basis_[r] < kYBase) {
        double v = std::max(xb[r], 0.0);
        res.lambda[basis_[r]] = v;
        lambda_sum += v;
      }
    if (lambda_sum > 0.0)
      for (auto& l : res.lambda) l /= lambda_sum;
    res.upper = pi[0];
    res.kappa.assign(m_, 0.0);
    for (int i = 0; i < m_; ++i) res.kappa[i] = std::clamp(-pi[1 + i], 0.0, ub_[i]);
    return res;
  }

 private:
  void initial_basis() {
    basis_.assign(rows_, -1);
    basis_[0] = 0;  // cut 0 covers the convexity row
    const Cut& c0 = (*cuts_)[0];
    for (int i = 0; i < m_; ++i)
      basis_[1 + i] = kYBase + 2 * i + (c0.grad[i] > 0.0 ? 0 : 1);  // y_i else s_i
  }

  bool is_basic(int id) const {
    return std::find(basis_.begin(), basis_.end(), id) != basis_.end();
  }

  void factor(Lu& lu) const {
    std::vector<double> bmat(static_cast<size_t>(rows_) * rows_, 0.0);
    std::vector<double> col(rows_);
    for (int r = 0; r < rows_; ++r) {
      column(basis_[r], col);
      for (int row = 0; row < rows_; ++row) bmat[static_cast<size_t>(row) * rows_ + r] = col[row];
    }
    lu.factor(std::move(bmat), rows_);
  }

  int m_, rows_;
  std::vector<double> ub_;
  const std::vector<Cut>* cuts_ = nullptr;
  std::vector<int> basis_;
};

}  // namespace

MasterResult solve_master(const std::vector<Cut>& cuts, const std::vector<double>& ub) {
  if (cuts.empty()) throw std::logic_error("master needs at least one cut");
  MasterLP lp(static_cast<int>(ub.size()), ub);
  return lp.solve(cuts);
}

double combination_value(const DualProblem& p, double energy_sum,
                         const std::vector<double>& sum_fc, const std::vector<double>& sum_fw) {
  double hc = 0.0, hw = 0.0;
  for (int i = 0; i < p.n; ++i) {
    hc = std::max(hc, p.theta_eff_c[i] * sum_fc[i] + p.offset_c[i]);
    hw = std::max(hw, p.theta_eff_w[i] * sum_fw[i] + p.offset_w[i]);
  }
  return p.e_scale * energy_sum + hc + hw;
}

DualResult maximize_dual(const DualProblem& p, const DualOptions& opt) {
  const int n = p.n;
  const int m = 2 * n;
  const int W = p.slots;

  // The auxiliary step works on per-slot levels; theta_eff applies to sums.
  AuxBlock cblock{1.0, p.theta_eff_c, {}, p.zbar_c, p.offset_c};
  AuxBlock wblock{1.0, p.theta_eff_w, {}, p.zbar_w, p.offset_w};
  std::vector<double> ub(m, 0.0);
  for (int i = 0; i < n; ++i) {
    cblock.theta[i] *= W;
    wblock.theta[i] *= W;
    // Optimal multipliers live in the subdifferential of the max terms, so
    // they are bounded by the effective slopes.
    ub[i] = cblock.theta[i];
    ub[n + i] = wblock.theta[i];
  }

  auto make_cut = [&](const std::vector<double>& kappa) {
    Cut cut;
    cut.kappa = kappa;
    auto ev = p.evaluate(kappa);
    cut.energy_sum = ev.energy_sum;
    cut.sum_fc = std::move(ev.sum_fc);
    cut.sum_fw = std::move(ev.sum_fw);
    cblock.kappa.assign(kappa.begin(), kappa.begin() + n);
    wblock.kappa.assign(kappa.begin() + n, kappa.end());
    auto zc = minimize_block(cblock);
    auto zw = minimize_block(wblock);
    cut.value = p.e_scale * cut.energy_sum + zc.value + zw.value;
    cut.grad.assign(m, 0.0);
    for (int i = 0; i < n; ++i) {
      cut.value += (kappa[i] * cut.sum_fc[i] + kappa[n + i] * cut.sum_fw[i]) / W;
      cut.grad[i] = cut.sum_fc[i] / W - zc.z[i];
      cut.grad[n + i] = cut.sum_fw[i] / W - zw.z[i];
    }
    return cut;
  };

  std::vector<Cut> cuts;
  cuts.push_back(make_cut(std::vector<double>(m, 0.0)));
  if (!opt.kappa_init.empty()) {
    std::vector<double> start = opt.kappa_init;
    for (int i = 0; i < m; ++i) start[i] = std::clamp(start[i], 0.0, ub[i]);
    bool zero = true;
    for (int i = 0; i < m; ++i) zero = zero && start[i] == 0.0;
    if (!zero) cuts.push_back(make_cut(start));
  }

  MasterLP master_lp(m, ub);

  DualResult res;
  res.dual = -std::numeric_limits<double>::infinity();
  res.kappa.assign(m, 0.0);
  double best_primal = std::numeric_limits<double>::infinity();
  std::vector<double> best_lambda;

  for (const auto& cut : cuts)
    if (cut.value > res.dual) {
      res.dual = cut.value;
      res.kappa = cut.kappa;
    }

  int it = 0;
  int stagnant = 0;
  double last_gap = std::numeric_limits<double>::infinity();
  for (; it < opt.max_iters; ++it) {
    auto master = master_lp.solve(cuts);
    res.upper = master.upper;

    // Primal candidate: the master's convex combination of inner minimizers.
    double energy = 0.0;
    std::vector<double> sum_fc(n, 0.0), sum_fw(n, 0.0);
    for (size_t j = 0; j < cuts.size(); ++j) {
      double w = master.lambda[j];
      if (w <= 0.0) continue;
      energy += w * cuts[j].energy_sum;
      for (int i = 0; i < n; ++i) {
        sum_fc[i] += w * cuts[j].sum_fc[i];
        sum_fw[i] += w * cuts[j].sum_fw[i];
      }
    }
    double primal = combination_value(p, energy, sum_fc, sum_fw);
    if (primal < best_primal) {
      best_primal = primal;
      best_lambda = master.lambda;
    }

    double scale = std::max(1.0, std::abs(best_primal));
    if (best_primal - res.dual < -1e-6 * scale)
      throw std::logic_error("weak duality violated in the dual solver: primal " +
                             std::to_string(best_primal) + " < dual " +
                             std::to_string(res.dual));
    if (best_primal - res.dual <= opt.tol * scale && res.upper - res.dual <= opt.tol * scale) {
      ++it;
      res.converged = true;
      break;
    }
    double gap = std::max(best_primal, res.upper) - res.dual;
    if (gap >= last_gap - 1e-14 * scale) {
      if (++stagnant >= 10) break;  // numerically converged; gap won't close further
    } else {
      stagnant = 0;
      last_gap = gap;
    }

    auto cut = make_cut(master.kappa);
    if (cut.value > res.dual) {
      res.dual = cut.value;
      res.kappa = cut.kappa;
    }
    cuts.push_back(std::move(cut));
  }

  if (best_lambda.empty()) {
    best_lambda.assign(cuts.size(), 0.0);
    best_lambda[0] = 1.0;
    best_primal = combination_value(p, cuts[0].energy_sum, cuts[0].sum_fc, cuts[0].sum_fw);
  }
  for (size_t j = 0; j < best_lambda.size(); ++j)
    if (best_lambda[j] > 0.0) p.accumulate(cuts[j].kappa, best_lambda[j]);

  res.primal = best_primal;
  res.gap = std::max(res.primal - res.dual, 0.0);
  res.iterations = it;
  if (!res.converged)
    res.converged = res.gap <= opt.tol * std::max(1.0, std::abs(res.primal));
  return res;
}

}  // namespace eglb::detail
