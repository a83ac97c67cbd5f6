#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wmono/states.hpp"

namespace wmono {

enum class Kernel { concurrence, negativity };
enum class Sense { minimize, maximize };
enum class Method { closed_form, roof_opt };

// A pure-state decomposition {p_i, |psi_i>} of some density operator.
struct DecompositionEnsemble {
  std::vector<double> weights;
  std::vector<PureState> members;
};

struct RoofConfig {
  int restarts = 200;
  int max_iters = 2000;       // pair-rotation sweeps per restart
  double step_tol = 1e-8;     // rotation-angle refinement window
  double value_tol = 1e-9;    // sweep improvement below this ends a restart
  int ensemble_size = 0;      // 0 = max(4, rank)
  std::uint64_t rng_seed = 1;
};

struct MeasureValue {
  double value = 0.0;
  Method method = Method::closed_form;
  std::optional<DecompositionEnsemble> ensemble;
  bool converged = true;
};

// C(|psi>) = sqrt(2 (1 - Tr rho_A^2)) across the split.
MeasureValue concurrence_pure(const PureState& psi, const Bipartition& split);

// Two-qubit mixed-state concurrence, max(0, l1-l2-l3-l4) with l_i the
// decreasing square roots of the eigenvalues of rho (Y x Y) rho* (Y x Y).
MeasureValue concurrence_two_qubit(const DensityOperator& rho);

// Doubled-convention negativity ||rho^{T_A}|| - 1, clamped at zero.
MeasureValue negativity(const DensityOperator& rho, const Bipartition& split);

// Pure-state negativity (Tr sqrt(rho_A))^2 - 1.
MeasureValue negativity_pure(const PureState& psi, const Bipartition& split);

// Conversion to the halved negativity convention (||rho^{T_A}|| - 1) / 2.
inline double halved_negativity(double doubled) { return doubled / 2.0; }

// Extremal average kernel value over size-K pure-state decompositions of
// rho, parameterized by isometric mixing of the eigen-ensemble. Random
// restarts plus pair-rotation refinement; deterministic for a fixed seed.
// The returned ensemble certifies the value: a min-sense result is an upper
// bound on the roof minimum, a max-sense result a lower bound on the
// maximum.
MeasureValue roof_extremize(const DensityOperator& rho, const Bipartition& split,
                            Kernel kernel, Sense sense, const RoofConfig& cfg);

// Concurrence of assistance: max-sense concurrence roof.
MeasureValue concurrence_assist(const DensityOperator& rho, const Bipartition& split,
                                const RoofConfig& cfg);

// Convex-roof extended negativity (min) and its assisted variant (max).
MeasureValue cren(const DensityOperator& rho, const Bipartition& split, const RoofConfig& cfg);
MeasureValue crenoa(const DensityOperator& rho, const Bipartition& split, const RoofConfig& cfg);

// Closed form 2|a||b_i| for the pair A,B_i of a W-class state; identical
// for both kernels on these rank-2 two-qubit reductions (oracle-gated in
// the test suite). i is 1-based.
double wclass_pair_value(const WClassParams& params, int i, Kernel kernel);

// Closed form 2|a| sqrt(sum_{l in S} |b_l|^2) for the entanglement of A
// against the pairs in S after tracing everything else (oracle-gated).
double wclass_one_vs_rest(const WClassParams& params, const std::vector<int>& subset,
                          Kernel kernel = Kernel::concurrence);

}  // namespace wmono
