#include "snfa/globalness.hpp"

#include <cmath>

#include "snfa/degrees.hpp"
#include "snfa/walks.hpp"

namespace snfa {

GlobalnessReport restriction_profile(const SnFunction& f, int t_max) {
  require(t_max >= 0 && t_max <= f.n, "restriction_profile: 0 <= t_max <= n");
  GlobalnessReport rep;
  for (int t = 0; t <= t_max; ++t) {
    RestrictionRow row{t, -1.0, {}};
    enumerate_pair_sets_canonical(f.n, t, [&](const PairSet& T) {
      const double nrm = norm2(restrict_to(f, T));
      if (nrm > row.max_norm) {
        row.max_norm = nrm;
        row.argmax = T;
      }
    });
    rep.restriction.push_back(row);
  }
  rep.eps_fit = rep.restriction[0].max_norm;
  rep.c_fit = 1.0;
  if (rep.eps_fit > 0.0) {
    for (int t = 1; t <= t_max; ++t) {
      const double ratio = rep.restriction[static_cast<std::size_t>(t)].max_norm / rep.eps_fit;
      if (ratio > 1.0) rep.c_fit = std::max(rep.c_fit, std::pow(ratio, 1.0 / t));
    }
  }
  return rep;
}

void enumerate_derivatives(
    int n, int t,
    const std::function<void(const std::vector<std::pair<int, int>>&,
                             const std::vector<std::pair<int, int>>&)>& fn) {
  require(t >= 0 && 2 * t <= n, "enumerate_derivatives: need 2t <= n");
  std::vector<std::pair<int, int>> pairs(static_cast<std::size_t>(t));
  std::vector<std::pair<int, int>> targets(static_cast<std::size_t>(t));
  std::vector<bool> pos_used(static_cast<std::size_t>(n) + 1, false);
  std::vector<bool> val_used(static_cast<std::size_t>(n) + 1, false);

  std::function<void(int)> pick_targets;
  std::function<void(int, int)> pick_pairs = [&](int idx, int start) {
    if (idx == t) {
      pick_targets(0);
      return;
    }
    for (int a = start; a <= n; ++a) {
      if (pos_used[static_cast<std::size_t>(a)]) continue;
      pos_used[static_cast<std::size_t>(a)] = true;
      for (int b = a + 1; b <= n; ++b) {
        if (pos_used[static_cast<std::size_t>(b)]) continue;
        pos_used[static_cast<std::size_t>(b)] = true;
        pairs[static_cast<std::size_t>(idx)] = {a, b};
        pick_pairs(idx + 1, a + 1);
        pos_used[static_cast<std::size_t>(b)] = false;
      }
      pos_used[static_cast<std::size_t>(a)] = false;
    }
  };
  pick_targets = [&](int idx) {
    if (idx == t) {
      fn(pairs, targets);
      return;
    }
    for (int c = 1; c <= n; ++c) {
      if (val_used[static_cast<std::size_t>(c)]) continue;
      val_used[static_cast<std::size_t>(c)] = true;
      for (int d = 1; d <= n; ++d) {
        if (d == c || val_used[static_cast<std::size_t>(d)]) continue;
        val_used[static_cast<std::size_t>(d)] = true;
        targets[static_cast<std::size_t>(idx)] = {c, d};
        pick_targets(idx + 1);
        val_used[static_cast<std::size_t>(d)] = false;
      }
      val_used[static_cast<std::size_t>(c)] = false;
    }
  };
  pick_pairs(0, 1);
}

GlobalnessReport derivative_profile(const SnFunction& f, int t_max) {
  require(2 * t_max <= f.n, "derivative_profile: need t_max <= n/2");
  GlobalnessReport rep;
  for (int t = 0; t <= t_max; ++t) {
    DerivativeRow row{t, -1.0, {}, {}};
    if (t == 0) {
      row.max_norm = norm2(f);
    } else {
      enumerate_derivatives(f.n, t, [&](const std::vector<std::pair<int, int>>& pairs,
                                        const std::vector<std::pair<int, int>>& targets) {
        const double nrm = norm2(derivative(f, pairs, targets));
        if (nrm > row.max_norm) {
          row.max_norm = nrm;
          row.argmax_pairs = pairs;
          row.argmax_targets = targets;
        }
      });
    }
    rep.derivative.push_back(row);
  }
  return rep;
}

bool is_global_with_constant(const SnFunction& f, double eps, double C, int t_max,
                             bool* partial) {
  require(eps > 0.0 && C > 0.0, "is_global_with_constant: eps, C > 0");
  if (partial) *partial = (t_max < f.n);
  const GlobalnessReport rep = restriction_profile(f, t_max);
  for (const auto& row : rep.restriction)
    if (row.max_norm > std::pow(C, row.t) * eps + 1e-12) return false;
  return true;
}

InfinityBoundReport infinity_bound_check(const SnFunction& f, int d, double eps) {
  InfinityBoundReport rep{};
  rep.lhs = norm_inf(f);
  rep.rhs = std::sqrt(static_cast<double>(factorial(6 * d))) *
            std::pow(4.0, 3.0 * f.n) * eps;
  rep.measured_degree = degree_of(f, 1e-9);
  const GlobalnessReport prof = restriction_profile(f, std::min(2 * d, f.n));
  rep.profile_max = 0.0;
  for (const auto& row : prof.restriction) rep.profile_max = std::max(rep.profile_max, row.max_norm);
  rep.vacuous = (rep.measured_degree > d) || (rep.profile_max > eps + 1e-12);
  rep.holds = rep.lhs <= rep.rhs + 1e-12;
  return rep;
}

LowDegreeGlobalnessReport low_degree_globalness(const SnFunction& f, int j) {
  LowDegreeGlobalnessReport rep;
  rep.integer_valued = true;
  for (double v : f.values)
    if (std::fabs(v - std::round(v)) > 1e-9) rep.integer_valued = false;
  require(rep.integer_valued, "low_degree_globalness: f must be integer-valued");
  SnFunction snapped = f;
  for (auto& v : snapped.values) v = std::round(v);
  rep.truncation_profile = restriction_profile(project_le(snapped, j), snapped.n).restriction;
  rep.base_profile = restriction_profile(snapped, snapped.n).restriction;
  return rep;
}

}  // namespace snfa
