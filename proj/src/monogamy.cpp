#include "wmono/monogamy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace wmono {

namespace {

constexpr double kTieTol = 1e-12;

void check_subset(const WClassParams& params, const std::vector<int>& subset) {
  if (subset.size() < 2) {
    throw std::invalid_argument("subset must contain at least two pair indices (m >= 3)");
  }
  const int n = params.num_qubits();
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int j : subset) {
    if (j < 1 || j > n - 1) {
      throw std::invalid_argument("pair index " + std::to_string(j) + " outside [1, " +
                                  std::to_string(n - 1) + "]");
    }
    if (seen[static_cast<std::size_t>(j)]) {
      throw std::invalid_argument("duplicate pair index " + std::to_string(j));
    }
    seen[static_cast<std::size_t>(j)] = true;
  }
}

unsigned subset_keep_mask(const std::vector<int>& subset) {
  unsigned mask = 1u;  // qubit A
  for (int j : subset) mask |= 1u << j;
  return mask;
}

// True when no comparison is a strict "less than" (the all-dominating
// hypothesis pattern, ties allowed).
bool all_ge_admissible(const OrderingProfile& profile) {
  for (const OrderingProfile::Comparison& c : profile.comparisons) {
    if (c.relation == Relation::le) return false;
  }
  return true;
}

}  // namespace

Kernel kernel_family(BoundKind kind) {
  switch (kind) {
    case BoundKind::assist_conc_flat:
    case BoundKind::assist_conc_xhalf:
    case BoundKind::assist_conc_h:
    case BoundKind::assist_conc_h_all_ge:
    case BoundKind::conc_xhalf:
    case BoundKind::conc_h:
      return Kernel::concurrence;
    default:
      return Kernel::negativity;
  }
}

WeightLaw weight_law(BoundKind kind) {
  switch (kind) {
    case BoundKind::assist_conc_flat:
      return WeightLaw::flat;
    case BoundKind::assist_conc_xhalf:
    case BoundKind::assist_neg_xhalf:
    case BoundKind::conc_xhalf:
    case BoundKind::cren_xhalf:
      return WeightLaw::xhalf;
    default:
      return WeightLaw::h_pow;
  }
}

bool requires_all_ge(BoundKind kind) {
  return kind == BoundKind::assist_conc_h_all_ge || kind == BoundKind::assist_neg_h_all_ge;
}

bool is_assisted(BoundKind kind) {
  switch (kind) {
    case BoundKind::conc_xhalf:
    case BoundKind::conc_h:
    case BoundKind::cren_xhalf:
    case BoundKind::cren_h:
      return false;
    default:
      return true;
  }
}

const char* to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::assist_conc_flat: return "assist_conc_flat";
    case BoundKind::assist_conc_xhalf: return "assist_conc_xhalf";
    case BoundKind::assist_conc_h: return "assist_conc_h";
    case BoundKind::assist_conc_h_all_ge: return "assist_conc_h_all_ge";
    case BoundKind::assist_neg_xhalf: return "assist_neg_xhalf";
    case BoundKind::assist_neg_h: return "assist_neg_h";
    case BoundKind::assist_neg_h_all_ge: return "assist_neg_h_all_ge";
    case BoundKind::conc_xhalf: return "conc_xhalf";
    case BoundKind::conc_h: return "conc_h";
    case BoundKind::cren_xhalf: return "cren_xhalf";
    case BoundKind::cren_h: return "cren_h";
  }
  return "?";
}

double h_coeff(double x) {
  if (x < 2.0) {
    throw std::domain_error("h_coeff: the bounds require x >= 2 (got " + std::to_string(x) + ")");
  }
  return std::pow(2.0, 0.5 * x) - 1.0;
}

std::vector<double> weight_vector(BoundKind kind, int m, int t, double x) {
  if (m < 3) throw std::invalid_argument("weight_vector: need m >= 3");
  if (t < 0 || t > m - 2) {
    throw std::invalid_argument("weight_vector: t = " + std::to_string(t) +
                                " outside [0, " + std::to_string(m - 2) + "]");
  }
  double q = 1.0;
  switch (weight_law(kind)) {
    case WeightLaw::flat:
      q = 1.0;
      break;
    case WeightLaw::xhalf:
      if (x < 2.0) throw std::domain_error("weight_vector: the bounds require x >= 2");
      q = 0.5 * x;
      break;
    case WeightLaw::h_pow:
      q = h_coeff(x);
      break;
  }

  std::vector<double> w(static_cast<std::size_t>(m - 1));
  if (weight_law(kind) == WeightLaw::flat) {
    std::fill(w.begin(), w.end(), 1.0);
    return w;
  }
  for (int pos = 1; pos <= m - 1; ++pos) {
    double coeff;
    if (pos <= t) {
      coeff = std::pow(q, pos - 1);
    } else if (pos <= m - 2) {
      coeff = std::pow(q, t + 1);
    } else {
      coeff = std::pow(q, t);
    }
    w[static_cast<std::size_t>(pos - 1)] = coeff;
  }
  return w;
}

OrderingProfile classify_ordering(const WClassParams& params, const std::vector<int>& subset,
                                  Kernel kernel) {
  check_subset(params, subset);
  const int m = static_cast<int>(subset.size()) + 1;

  OrderingProfile profile;
  profile.comparisons.reserve(static_cast<std::size_t>(m - 2));
  for (int pos = 1; pos <= m - 2; ++pos) {
    const double pair = wclass_pair_value(params, subset[static_cast<std::size_t>(pos - 1)], kernel);
    const std::vector<int> rest(subset.begin() + pos, subset.end());
    const double rest_value = wclass_one_vs_rest(params, rest, kernel);
    Relation rel;
    if (std::abs(pair - rest_value) <= kTieTol) {
      rel = Relation::tie;
    } else if (pair > rest_value) {
      rel = Relation::ge;
    } else {
      rel = Relation::le;
    }
    profile.comparisons.push_back({pair, rest_value, rel});
  }

  for (int t = 0; t <= m - 2; ++t) {
    bool ok = true;
    for (int pos = 1; pos <= m - 2 && ok; ++pos) {
      const Relation rel = profile.comparisons[static_cast<std::size_t>(pos - 1)].relation;
      if (pos <= t) {
        ok = rel == Relation::ge || rel == Relation::tie;
      } else {
        ok = rel == Relation::le || rel == Relation::tie;
      }
    }
    if (ok) {
      profile.valid = true;
      profile.t = t;
      return profile;
    }
  }
  return profile;
}

double bound_rhs(BoundKind kind, const std::vector<double>& pair_values, double x, int t) {
  for (double v : pair_values) {
    if (v < 0.0) throw std::invalid_argument("bound_rhs: negative pair value");
  }
  const int m = static_cast<int>(pair_values.size()) + 1;
  const std::vector<double> w = weight_vector(kind, m, t, x);
  double sum = 0.0;
  for (std::size_t k = 0; k < pair_values.size(); ++k) {
    sum += w[k] * std::pow(pair_values[k], x);
  }
  return sum;
}

MonogamyReport verify_theorem(const WClassParams& params, const std::vector<int>& subset,
                              BoundKind kind, const std::vector<double>& x_grid,
                              const RoofConfig& cfg, LhsMode lhs_mode) {
  check_subset(params, subset);
  const int m = static_cast<int>(subset.size()) + 1;
  const Kernel kernel = kernel_family(kind);

  MonogamyReport report;
  report.kind = kind;
  report.subset = subset;
  report.x_grid = x_grid;
  report.lhs_mode = lhs_mode;
  report.profile = classify_ordering(params, subset, kernel);

  std::ostringstream notes;
  if (report.profile.valid) {
    report.hypothesis_satisfied =
        requires_all_ge(kind) ? all_ge_admissible(report.profile) : true;
  }
  if (report.profile.valid) {
    if (report.profile.t == 0 || report.profile.t == m - 2) {
      notes << "t=" << report.profile.t << " (outside the stated 1<=t<=m-3 range; "
            << "evaluated with the degenerate weight pattern); ";
    } else {
      notes << "t=" << report.profile.t << "; ";
    }
  } else {
    notes << "no admissible ordering profile; ";
  }

  if (!report.hypothesis_satisfied) {
    notes << "hypothesis unsatisfied for " << to_string(kind) << "; margins not evaluated";
    report.notes = notes.str();
    return report;
  }

  const int t = requires_all_ge(kind) ? m - 2 : report.profile.t;

  std::vector<double> pair_values;
  pair_values.reserve(subset.size());
  for (int j : subset) pair_values.push_back(wclass_pair_value(params, j, kernel));

  // Base (x = 1) LHS value by mode.
  double lhs_base = 0.0;
  switch (lhs_mode) {
    case LhsMode::analytic: {
      if (m != params.num_qubits()) {
        throw std::invalid_argument(
            "verify_theorem: analytic LHS is defined only when the subset covers all qubits");
      }
      const PureState psi = make_wclass(params);
      const Bipartition split = Bipartition::one_vs_rest(params.num_qubits());
      lhs_base = kernel == Kernel::concurrence ? concurrence_pure(psi, split).value
                                               : negativity_pure(psi, split).value;
      notes << "; lhs=analytic pure-state value";
      break;
    }
    case LhsMode::oracle: {
      const PureState psi = make_wclass(params);
      const DensityOperator reduced = reduce(psi, subset_keep_mask(subset));
      const Bipartition split = Bipartition::one_vs_rest(reduced.num_qubits());
      const MeasureValue mv = roof_extremize(reduced, split, kernel, Sense::maximize, cfg);
      lhs_base = mv.value;
      report.lhs_converged = mv.converged;
      notes << "; lhs=roof maximum on the reduced state";
      if (!mv.converged) notes << " (roof optimizer hit max_iters)";
      break;
    }
    case LhsMode::chain: {
      lhs_base = wclass_one_vs_rest(params, subset, kernel);
      notes << "; lhs=unassisted closed form (lower bound on the assisted value)";
      break;
    }
  }

  report.lhs.reserve(x_grid.size());
  report.rhs.reserve(x_grid.size());
  report.margin.reserve(x_grid.size());
  for (double x : x_grid) {
    const double lhs = std::pow(lhs_base, x);
    const double rhs = bound_rhs(kind, pair_values, x, t);
    report.lhs.push_back(lhs);
    report.rhs.push_back(rhs);
    report.margin.push_back(lhs - rhs);
  }
  report.notes = notes.str();
  return report;
}

BoundTable compare_bounds(const WClassParams& params, const std::vector<int>& subset,
                          const std::vector<BoundKind>& kinds,
                          const std::vector<double>& x_grid) {
  check_subset(params, subset);
  BoundTable table;
  table.x_grid = x_grid;
  table.kinds = kinds;
  table.rhs.resize(kinds.size());

  for (std::size_t ki = 0; ki < kinds.size(); ++ki) {
    const BoundKind kind = kinds[ki];
    const OrderingProfile profile = classify_ordering(params, subset, kernel_family(kind));
    const int m = static_cast<int>(subset.size()) + 1;
    if (!profile.valid || (requires_all_ge(kind) && !all_ge_admissible(profile))) {
      throw std::invalid_argument(std::string("compare_bounds: hypothesis of ") +
                                  to_string(kind) + " is not satisfied by this instance");
    }
    const int t = requires_all_ge(kind) ? m - 2 : profile.t;
    std::vector<double> pair_values;
    for (int j : subset) pair_values.push_back(wclass_pair_value(params, j, kernel_family(kind)));
    table.rhs[ki].reserve(x_grid.size());
    for (double x : x_grid) {
      table.rhs[ki].push_back(bound_rhs(kind, pair_values, x, t));
    }
  }

  // weight dominance: identical pair values and t, so h-law >= (x/2)-law >= flat
  for (std::size_t a = 0; a < kinds.size(); ++a) {
    for (std::size_t b = 0; b < kinds.size(); ++b) {
      if (kernel_family(kinds[a]) != kernel_family(kinds[b])) continue;
      if (requires_all_ge(kinds[a]) != requires_all_ge(kinds[b])) continue;
      const bool a_dominates =
          (weight_law(kinds[a]) == WeightLaw::h_pow && weight_law(kinds[b]) != WeightLaw::h_pow) ||
          (weight_law(kinds[a]) == WeightLaw::xhalf && weight_law(kinds[b]) == WeightLaw::flat);
      if (!a_dominates) continue;
      for (std::size_t xi = 0; xi < x_grid.size(); ++xi) {
        if (table.rhs[a][xi] < table.rhs[b][xi] - 1e-12) {
          throw std::logic_error("compare_bounds: weight-law dominance violated");
        }
      }
    }
  }
  return table;
}

}  // namespace wmono
