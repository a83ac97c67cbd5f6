#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wmono/linalg.hpp"

namespace wmono {

// State-file parse failure; line is 1-based, 0 when not tied to a line.
struct parse_error : std::runtime_error {
  parse_error(int line_number, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_number) + ": " + msg),
        line(line_number) {}
  int line;
};

class PureState {
 public:
  PureState(int num_qubits, std::vector<cplx> amplitudes, double norm_tol = kNormTol);

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return amplitudes_.size(); }
  const std::vector<cplx>& amplitudes() const { return amplitudes_; }
  cplx amplitude(std::size_t basis_index) const { return amplitudes_[basis_index]; }

  Matrix projector() const;

 private:
  int num_qubits_;
  std::vector<cplx> amplitudes_;
};

class DensityOperator {
 public:
  // Validates Hermiticity, unit trace and positivity (within tolerances).
  DensityOperator(int num_qubits, Matrix matrix);

  static DensityOperator from_pure(const PureState& psi);

  int num_qubits() const { return num_qubits_; }
  int dim() const { return matrix_.rows(); }
  const Matrix& matrix() const { return matrix_; }

 private:
  int num_qubits_;
  Matrix matrix_;
};

// Coefficients (a, b_1..b_{N-1}) of a generalized W-class state
// a|10...0> + b_1|01...0> + ... + b_{N-1}|00...1>.
struct WClassParams {
  cplx a;
  std::vector<cplx> b;

  WClassParams(cplx a_coeff, std::vector<cplx> b_coeffs, double norm_tol = kNormTol);

  int num_qubits() const { return static_cast<int>(b.size()) + 1; }
};

// A|B split of an n-qubit register; side_a_mask bit k selects qubit k.
struct Bipartition {
  int num_qubits;
  unsigned side_a_mask;

  Bipartition(int n, unsigned a_mask);

  // Qubit 0 (subsystem A) against everything else.
  static Bipartition one_vs_rest(int n) { return Bipartition(n, 1u); }

  unsigned side_b_mask() const { return ((1u << num_qubits) - 1u) & ~side_a_mask; }
};

PureState make_wclass(const WClassParams& params);

// Partial trace down to the qubits in keep_mask; qubit order preserved.
DensityOperator reduce(const PureState& state, unsigned keep_mask);
DensityOperator reduce(const DensityOperator& rho, unsigned keep_mask);

// Coefficients drawn as independent complex standard Gaussians, then
// normalized (uniform on the complex sphere). Deterministic per seed.
WClassParams sample_wclass(int n_qubits, std::uint64_t seed);

// Text state file: `qubits <n>` then 2^n lines `<index> <re> <im>` in
// ascending index order; `#` starts a comment.
PureState load_state(const std::string& path);
void save_state(const PureState& state, const std::string& path);

}  // namespace wmono
