#include "qnet/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qnet {

namespace {

constexpr double kHalfPi = M_PI / 2.0;
constexpr double kInfeasible = -std::numeric_limits<double>::infinity();

int edge_count(const SearchSpec& spec) {
  return spec.topology == Topology::Linear ? 2 : static_cast<int>(spec.sources.size());
}

void validate_spec(const SearchSpec& spec) {
  const int n = static_cast<int>(spec.sources.size());
  if (n < 1 || n > kMaxSources) throw std::invalid_argument("source count out of range");
  if (spec.topology == Topology::Star && n < 2)
    throw std::invalid_argument("star search needs at least two sources");
  if (static_cast<int>(spec.edges.size()) != edge_count(spec))
    throw std::invalid_argument("one search range per edge party expected");
  if (spec.budget.grid_points < 2 || spec.budget.refine_iterations < 0)
    throw std::invalid_argument("bad search budget");
  for (const auto& e : spec.edges) {
    if (e.eta_cap < 0.0 || e.eta_cap > 1.0)
      throw std::invalid_argument("eta cap must be in [0,1]");
    // the compatibility threshold over t in [0, pi/2] bottoms out at 1/sqrt(2)
    if (e.force == ForceFlag::Incompatible && e.eta_cap <= 1.0 / std::sqrt(2.0) + 1e-12)
      throw std::invalid_argument(
          "force-incompatible is infeasible: eta cap never exceeds the compatibility threshold");
  }
}

struct Objective {
  const SearchSpec& spec;
  int m;  // edge parties
  mutable int evals = 0;

  /// Clamp (t, eta) pairs onto the feasible set; returns false when the
  /// point cannot be repaired (forced incompatibility out of reach).
  bool project(std::vector<double>& x) const {
    for (int i = 0; i < m; ++i) {
      double& t = x[i];
      double& eta = x[m + i];
      t = std::clamp(t, 0.0, kHalfPi);
      eta = std::clamp(eta, 0.0, spec.edges[i].eta_cap);
      const double threshold = compatibility_threshold(spec.edges[i].plane, t);
      switch (spec.edges[i].force) {
        case ForceFlag::Compatible:
          eta = std::min(eta, threshold);
          break;
        case ForceFlag::Incompatible: {
          const double floor = threshold * (1.0 + 1e-9);
          if (floor > spec.edges[i].eta_cap) return false;
          eta = std::max(eta, floor);
          break;
        }
        case ForceFlag::None:
          break;
      }
    }
    return true;
  }

  NetworkScenario scenario_at(const std::vector<double>& x) const {
    NetworkScenario s;
    s.topology = spec.topology;
    s.n = static_cast<int>(spec.sources.size());
    s.sources = spec.sources;
    if (spec.topology == Topology::Linear) {
      s.parties.push_back({equatorial_pair(spec.edges[0].plane, x[0], x[m]), std::nullopt});
      for (int p = 1; p < s.n; ++p) s.parties.push_back({std::nullopt, bell_basis()});
      s.parties.push_back({equatorial_pair(spec.edges[1].plane, x[1], x[m + 1]), std::nullopt});
    } else {
      s.parties.push_back({std::nullopt, ghz_basis(s.n)});
      for (int i = 0; i < m; ++i)
        s.parties.push_back({equatorial_pair(spec.edges[i].plane, x[i], x[m + i]), std::nullopt});
    }
    return s;
  }

  double operator()(std::vector<double> x) const {
    ++evals;
    if (!project(x)) return kInfeasible;
    const NetworkScenario s = scenario_at(x);
    const Behavior b = behavior(s);
    if (spec.topology == Topology::Linear) return linear_lhs(b).lhs;
    return star_lhs(b, *s.parties.front().basis).lhs;
  }
};

}  // namespace

SearchResult optimize(const SearchSpec& spec) {
  validate_spec(spec);
  const int m = edge_count(spec);
  Objective f{spec, m};

  SearchResult r;
  r.best_lhs = kInfeasible;

  // Coarse phase: cartesian angle grid, etas at their feasible maximum.
  std::vector<double> x(2 * m, 0.0);
  std::vector<int> idx(m, 0);
  const int g = spec.budget.grid_points;
  while (true) {
    for (int i = 0; i < m; ++i) {
      x[i] = kHalfPi * idx[i] / (g - 1);
      x[m + i] = spec.edges[i].eta_cap;
    }
    std::vector<double> pt = x;
    if (f.project(pt)) {  // store the projected point; project is idempotent
      const double v = f(pt);
      if (v > r.best_lhs) {
        r.best_lhs = v;
        r.angles.assign(pt.begin(), pt.begin() + m);
        r.etas.assign(pt.begin() + m, pt.end());
        r.trace.emplace_back(f.evals, v);
      }
    }
    int d = m - 1;
    while (d >= 0 && ++idx[d] == g) idx[d--] = 0;
    if (d < 0) break;
  }
  if (r.best_lhs == kInfeasible)
    throw std::invalid_argument("no feasible grid point under the given constraints");

  // Refinement: Nelder-Mead on (angles, etas).
  const int dim = 2 * m;
  std::vector<std::vector<double>> simplex;
  std::vector<double> vals;
  std::vector<double> x0 = r.angles;
  x0.insert(x0.end(), r.etas.begin(), r.etas.end());
  simplex.push_back(x0);
  vals.push_back(f(x0));
  for (int d = 0; d < dim; ++d) {
    std::vector<double> xi = x0;
    xi[d] += (d < m) ? kHalfPi / (2.0 * (g - 1)) : -0.05;
    simplex.push_back(xi);
    vals.push_back(f(xi));
  }

  auto record = [&](double v, const std::vector<double>& pt) {
    if (v > r.best_lhs) {
      r.best_lhs = v;
      r.angles.assign(pt.begin(), pt.begin() + m);
      r.etas.assign(pt.begin() + m, pt.end());
      r.trace.emplace_back(f.evals, v);
    }
  };
  for (size_t i = 0; i < simplex.size(); ++i) record(vals[i], simplex[i]);

  for (int it = 0; it < spec.budget.refine_iterations; ++it) {
    // order descending by value (maximization)
    std::vector<int> order(dim + 1);
    for (int i = 0; i <= dim; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return vals[a] > vals[b]; });
    const int best = order.front(), worst = order.back(), second_worst = order[dim - 1];

    double spread = 0.0;
    for (int d = 0; d < dim; ++d)
      spread = std::max(spread, std::abs(simplex[worst][d] - simplex[best][d]));
    if (spread < spec.budget.shrink_tol) break;

    std::vector<double> centroid(dim, 0.0);
    for (int i = 0; i <= dim; ++i)
      if (i != worst)
        for (int d = 0; d < dim; ++d) centroid[d] += simplex[i][d] / dim;

    auto affine = [&](double c) {
      std::vector<double> pt(dim);
      for (int d = 0; d < dim; ++d) pt[d] = centroid[d] + c * (centroid[d] - simplex[worst][d]);
      return pt;
    };
    const std::vector<double> refl = affine(1.0);
    const double v_refl = f(refl);
    record(v_refl, refl);
    if (v_refl > vals[best]) {
      const std::vector<double> exp_pt = affine(2.0);
      const double v_exp = f(exp_pt);
      record(v_exp, exp_pt);
      simplex[worst] = (v_exp > v_refl) ? exp_pt : refl;
      vals[worst] = std::max(v_exp, v_refl);
      continue;
    }
    if (v_refl > vals[second_worst]) {
      simplex[worst] = refl;
      vals[worst] = v_refl;
      continue;
    }
    const std::vector<double> contr = affine(-0.5);
    const double v_contr = f(contr);
    record(v_contr, contr);
    if (v_contr > vals[worst]) {
      simplex[worst] = contr;
      vals[worst] = v_contr;
      continue;
    }
    for (int i = 0; i <= dim; ++i) {
      if (i == best) continue;
      for (int d = 0; d < dim; ++d)
        simplex[i][d] = simplex[best][d] + 0.5 * (simplex[i][d] - simplex[best][d]);
      vals[i] = f(simplex[i]);
      record(vals[i], simplex[i]);
    }
  }

  // Re-project the winning point and freeze the scenario so the
  // reported value is exactly reproducible from the returned settings.
  std::vector<double> best_pt = r.angles;
  best_pt.insert(best_pt.end(), r.etas.begin(), r.etas.end());
  f.project(best_pt);
  r.angles.assign(best_pt.begin(), best_pt.begin() + m);
  r.etas.assign(best_pt.begin() + m, best_pt.end());
  r.scenario = f.scenario_at(best_pt);
  const Behavior b = behavior(r.scenario);
  r.best_lhs = (spec.topology == Topology::Linear)
                   ? linear_lhs(b).lhs
                   : star_lhs(b, *r.scenario.parties.front().basis).lhs;
  return r;
}

}  // namespace qnet
