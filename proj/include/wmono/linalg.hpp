#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

// Dense complex linear algebra for operators on small n-qubit spaces.
// Qubit ordering convention used throughout the library: qubit 0 is the
// most significant bit of the computational-basis index, so |10...0> has
// basis index 2^(n-1).

namespace wmono {

using cplx = std::complex<double>;

inline constexpr int kMaxQubits = 10;
inline constexpr int kMaxDim = 1 << kMaxQubits;

// Default tolerances; every checking entry point accepts an override.
inline constexpr double kHermTol = 1e-9;
inline constexpr double kEigTol = 1e-10;
inline constexpr double kPsdClampTol = 1e-8;
inline constexpr double kNormTol = 1e-9;

// Requested dimension exceeds the qubit cap.
struct capacity_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input violates a numeric precondition (non-Hermitian, not PSD, ...).
struct contract_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols);

  static Matrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  cplx& operator()(int r, int c) { return entries_[static_cast<std::size_t>(r) * cols_ + c]; }
  const cplx& operator()(int r, int c) const {
    return entries_[static_cast<std::size_t>(r) * cols_ + c];
  }

  const std::vector<cplx>& entries() const { return entries_; }

  Matrix adjoint() const;
  Matrix conjugate() const;
  cplx trace() const;

  // Largest entry modulus.
  double max_abs() const;
  // max_ij |M_ij - conj(M_ji)|; zero for exactly Hermitian inputs.
  double hermiticity_defect() const;

  Matrix& operator+=(const Matrix& rhs);
  Matrix& operator-=(const Matrix& rhs);
  Matrix& operator*=(cplx s);

  friend Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
  friend Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }
  friend Matrix operator*(cplx s, Matrix m) { return m *= s; }
  friend Matrix operator*(const Matrix& lhs, const Matrix& rhs);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<cplx> entries_;
};

struct HermitianEig {
  std::vector<double> eigenvalues;  // ascending
  Matrix eigenvectors;              // orthonormal columns, same order
};

// Kronecker product with the left factor's index most significant.
Matrix tensor_product(const Matrix& a, const Matrix& b);

// Trace out the qubits named in traced_mask (bit k of the mask = qubit k).
// The remaining qubits keep their original relative order.
Matrix partial_trace(const Matrix& rho, int num_qubits, unsigned traced_mask);

// Transpose the indices of the qubits named in mask; involutive.
Matrix partial_transpose(const Matrix& rho, int num_qubits, unsigned mask);

// Full spectrum of a Hermitian matrix by cyclic Jacobi rotations.
// Deterministic for a fixed input; throws contract_error when the input is
// not Hermitian within herm_tol.
HermitianEig hermitian_eig(const Matrix& m, double herm_tol = kHermTol);

// Sum of |eigenvalue| for a Hermitian matrix.
double trace_norm(const Matrix& m, double herm_tol = kHermTol);

// Hermitian square root with eigenvalues below zero clamped; eigenvalues
// under -clamp_tol are a contract violation.
Matrix psd_sqrt(const Matrix& m, double clamp_tol = kPsdClampTol);

// Index-bit position of a qubit (qubit 0 = most significant).
inline int qubit_bit(int num_qubits, int qubit) { return num_qubits - 1 - qubit; }

}  // namespace wmono
