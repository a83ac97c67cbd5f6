#pragma once

#include <string>
#include <vector>

#include "wmono/measures.hpp"

namespace wmono {

// Lower-bound families for the one-vs-rest entanglement of a W-class
// state, x >= 2. Naming: kernel family (assisted/unassisted concurrence,
// CREN/CRENOA) + weight law (flat / (x/2)^k / h^k with h = 2^{x/2} - 1).
// The *_all_ge kinds are the variants whose hypothesis demands every pair
// value to dominate its remainder.
enum class BoundKind {
  assist_conc_flat,
  assist_conc_xhalf,
  assist_conc_h,
  assist_conc_h_all_ge,
  assist_neg_xhalf,
  assist_neg_h,
  assist_neg_h_all_ge,
  conc_xhalf,
  conc_h,
  cren_xhalf,
  cren_h,
};

enum class WeightLaw { flat, xhalf, h_pow };

Kernel kernel_family(BoundKind kind);
WeightLaw weight_law(BoundKind kind);
bool requires_all_ge(BoundKind kind);
bool is_assisted(BoundKind kind);
const char* to_string(BoundKind kind);

// h = 2^{x/2} - 1; the bounds hold for x >= 2 only.
double h_coeff(double x);

// Per-pair coefficients for positions 1..m-1: position i <= t gets q^{i-1},
// positions t+1..m-2 get q^{t+1}, position m-1 gets q^t (q = 1, x/2 or h by
// weight law). t = 0 degenerates to (q, ..., q, 1) and t = m-2 to
// (1, q, ..., q^{m-2}).
std::vector<double> weight_vector(BoundKind kind, int m, int t, double x);

enum class Relation { ge, le, tie };

// Hypothesis classification of an ordered pair subset: positions 1..t
// dominate their remainder, positions t+1..m-2 are dominated by it.
struct OrderingProfile {
  struct Comparison {
    double pair_value;
    double rest_value;
    Relation relation;
  };
  bool valid = false;
  int t = -1;  // smallest admissible t; -1 when invalid
  std::vector<Comparison> comparisons;
};

OrderingProfile classify_ordering(const WClassParams& params, const std::vector<int>& subset,
                                  Kernel kernel);

// sum_k weight_vector[k] * pair_values[k]^x.
double bound_rhs(BoundKind kind, const std::vector<double>& pair_values, double x, int t);

enum class LhsMode { analytic, oracle, chain };

struct MonogamyReport {
  BoundKind kind = BoundKind::assist_conc_h;
  std::vector<int> subset;
  OrderingProfile profile;
  bool hypothesis_satisfied = false;
  LhsMode lhs_mode = LhsMode::chain;
  std::vector<double> x_grid;
  std::vector<double> lhs;     // per x; empty when hypothesis unsatisfied
  std::vector<double> rhs;
  std::vector<double> margin;  // lhs - rhs
  bool lhs_converged = true;
  std::string notes;
};

// Evaluate one bound family over an x-grid for the m-qubit reduction of a
// W-class state onto A and the pairs in `subset` (1-based, ordered).
// LHS modes: analytic = pure-state formula (full subset only), oracle =
// roof maximum on the reduced state, chain = unassisted closed-form value
// (a certified lower bound on the assisted LHS).
MonogamyReport verify_theorem(const WClassParams& params, const std::vector<int>& subset,
                              BoundKind kind, const std::vector<double>& x_grid,
                              const RoofConfig& cfg, LhsMode lhs_mode);

struct BoundTable {
  std::vector<double> x_grid;
  std::vector<BoundKind> kinds;
  std::vector<std::vector<double>> rhs;  // [kind][x]
};

// Side-by-side RHS values; verifies the h-law >= (x/2)-law >= flat
// dominance on the shared profile.
BoundTable compare_bounds(const WClassParams& params, const std::vector<int>& subset,
                          const std::vector<BoundKind>& kinds,
                          const std::vector<double>& x_grid);

}  // namespace wmono
