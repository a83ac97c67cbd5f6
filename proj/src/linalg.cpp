#include "wmono/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace wmono {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// Bit positions (in index space) of the qubits selected by a qubit mask,
// ordered so that the first entry is the most significant selected qubit.
std::vector<int> index_bits(int num_qubits, unsigned qubit_mask) {
  std::vector<int> bits;
  for (int q = 0; q < num_qubits; ++q) {
    if (qubit_mask & (1u << q)) bits.push_back(qubit_bit(num_qubits, q));
  }
  return bits;
}

// Scatter the low bits of value onto the given index-bit positions.
unsigned scatter_bits(unsigned value, const std::vector<int>& bits) {
  unsigned out = 0;
  const int n = static_cast<int>(bits.size());
  for (int i = 0; i < n; ++i) {
    if (value & (1u << (n - 1 - i))) out |= 1u << bits[static_cast<std::size_t>(i)];
  }
  return out;
}

}  // namespace

Matrix::Matrix(int rows, int cols) : rows_(rows), cols_(cols) {
  require(rows > 0 && cols > 0, "Matrix dimensions must be positive");
  if (rows > kMaxDim || cols > kMaxDim) {
    throw capacity_error("Matrix dimension exceeds the " + std::to_string(kMaxDim) +
                         " (=2^" + std::to_string(kMaxQubits) + ") cap");
  }
  entries_.assign(static_cast<std::size_t>(rows) * cols, cplx{0.0, 0.0});
}

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::adjoint() const {
  Matrix out(cols_, rows_);
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  }
  return out;
}

Matrix Matrix::conjugate() const {
  Matrix out(rows_, cols_);
  for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] = std::conj(entries_[i]);
  return out;
}

cplx Matrix::trace() const {
  require(rows_ == cols_, "trace requires a square matrix");
  cplx t{0.0, 0.0};
  for (int i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (const cplx& e : entries_) m = std::max(m, std::abs(e));
  return m;
}

double Matrix::hermiticity_defect() const {
  if (rows_ != cols_) return std::numeric_limits<double>::infinity();
  double d = 0.0;
  for (int r = 0; r < rows_; ++r) {
    for (int c = r; c < cols_; ++c) {
      d = std::max(d, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
    }
  }
  return d;
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
  require(rows_ == rhs.rows_ && cols_ == rhs.cols_, "shape mismatch in +");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += rhs.entries_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
  require(rows_ == rhs.rows_ && cols_ == rhs.cols_, "shape mismatch in -");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= rhs.entries_[i];
  return *this;
}

Matrix& Matrix::operator*=(cplx s) {
  for (cplx& e : entries_) e *= s;
  return *this;
}

Matrix operator*(const Matrix& lhs, const Matrix& rhs) {
  require(lhs.cols_ == rhs.rows_, "shape mismatch in *");
  Matrix out(lhs.rows_, rhs.cols_);
  for (int r = 0; r < lhs.rows_; ++r) {
    for (int k = 0; k < lhs.cols_; ++k) {
      const cplx v = lhs(r, k);
      if (v == cplx{0.0, 0.0}) continue;
      for (int c = 0; c < rhs.cols_; ++c) out(r, c) += v * rhs(k, c);
    }
  }
  return out;
}

Matrix tensor_product(const Matrix& a, const Matrix& b) {
  const long long rows = static_cast<long long>(a.rows()) * b.rows();
  const long long cols = static_cast<long long>(a.cols()) * b.cols();
  if (rows > kMaxDim || cols > kMaxDim) {
    throw capacity_error("tensor_product result exceeds the 2^" +
                         std::to_string(kMaxQubits) + " dimension cap");
  }
  Matrix out(static_cast<int>(rows), static_cast<int>(cols));
  for (int ra = 0; ra < a.rows(); ++ra) {
    for (int ca = 0; ca < a.cols(); ++ca) {
      const cplx v = a(ra, ca);
      if (v == cplx{0.0, 0.0}) continue;
      for (int rb = 0; rb < b.rows(); ++rb) {
        for (int cb = 0; cb < b.cols(); ++cb) {
          out(ra * b.rows() + rb, ca * b.cols() + cb) = v * b(rb, cb);
        }
      }
    }
  }
  return out;
}

Matrix partial_trace(const Matrix& rho, int num_qubits, unsigned traced_mask) {
  require(num_qubits >= 1 && num_qubits <= kMaxQubits, "qubit count out of range");
  const int dim = 1 << num_qubits;
  require(rho.rows() == dim && rho.cols() == dim, "operator dimension must be 2^num_qubits");
  const unsigned full = (1u << num_qubits) - 1u;
  require((traced_mask & ~full) == 0, "traced set is not a subset of the qubits");

  const unsigned keep_mask = full & ~traced_mask;
  const std::vector<int> keep_bits = index_bits(num_qubits, keep_mask);
  const std::vector<int> traced_bits = index_bits(num_qubits, traced_mask);
  const int keep_dim = 1 << keep_bits.size();
  const int traced_dim = 1 << traced_bits.size();

  Matrix out(keep_dim, keep_dim);
  for (int k1 = 0; k1 < keep_dim; ++k1) {
    const unsigned base1 = scatter_bits(static_cast<unsigned>(k1), keep_bits);
    for (int k2 = 0; k2 < keep_dim; ++k2) {
      const unsigned base2 = scatter_bits(static_cast<unsigned>(k2), keep_bits);
      cplx sum{0.0, 0.0};
      for (int t = 0; t < traced_dim; ++t) {
        const unsigned tb = scatter_bits(static_cast<unsigned>(t), traced_bits);
        sum += rho(static_cast<int>(base1 | tb), static_cast<int>(base2 | tb));
      }
      out(k1, k2) = sum;
    }
  }
  return out;
}

Matrix partial_transpose(const Matrix& rho, int num_qubits, unsigned mask) {
  require(num_qubits >= 1 && num_qubits <= kMaxQubits, "qubit count out of range");
  const int dim = 1 << num_qubits;
  require(rho.rows() == dim && rho.cols() == dim, "operator dimension must be 2^num_qubits");
  const unsigned full = (1u << num_qubits) - 1u;
  require((mask & ~full) == 0, "transpose mask out of range");

  unsigned bit_mask = 0;  // index-bit mask of the transposed qubits
  for (int q = 0; q < num_qubits; ++q) {
    if (mask & (1u << q)) bit_mask |= 1u << qubit_bit(num_qubits, q);
  }

  Matrix out(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      const unsigned src_r = (static_cast<unsigned>(i) & ~bit_mask) |
                             (static_cast<unsigned>(j) & bit_mask);
      const unsigned src_c = (static_cast<unsigned>(j) & ~bit_mask) |
                             (static_cast<unsigned>(i) & bit_mask);
      out(i, j) = rho(static_cast<int>(src_r), static_cast<int>(src_c));
    }
  }
  return out;
}

HermitianEig hermitian_eig(const Matrix& m, double herm_tol) {
  require(m.rows() == m.cols(), "hermitian_eig requires a square matrix");
  const int n = m.rows();
  if (m.hermiticity_defect() > herm_tol) {
    throw contract_error("hermitian_eig: input is not Hermitian within tolerance");
  }

  // Work on the exactly Hermitian part so rotations stay consistent.
  Matrix a(n, n);
  for (int r = 0; r < n; ++r) {
    a(r, r) = cplx{std::real(m(r, r)), 0.0};
    for (int c = r + 1; c < n; ++c) {
      const cplx v = 0.5 * (m(r, c) + std::conj(m(c, r)));
      a(r, c) = v;
      a(c, r) = std::conj(v);
    }
  }
  Matrix v = Matrix::identity(n);

  double frob = 0.0;
  for (const cplx& e : a.entries()) frob += std::norm(e);
  frob = std::sqrt(frob);
  const double target = 1e-14 * frob;

  auto off_norm = [&]() {
    double s = 0.0;
    for (int r = 0; r < n; ++r) {
      for (int c = r + 1; c < n; ++c) s += std::norm(a(r, c));
    }
    return std::sqrt(2.0 * s);
  };

  const int max_sweeps = 100;
  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    if (off_norm() <= target) break;
    const double skip_tol = target / (n > 1 ? n : 1);
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double r = std::abs(apq);
        if (r <= skip_tol) continue;

        const double app = std::real(a(p, p));
        const double aqq = std::real(a(q, q));
        const cplx phase = apq / r;  // e^{i alpha}
        const double theta = (aqq - app) / (2.0 * r);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // 2x2 unitary V = [[c, s], [-s*conj(phase), c*conj(phase)]] applied
        // as A <- V^dag A V; zeroes the (p,q) entry.
        const cplx s_conj = s * std::conj(phase);
        const cplx c_conj = c * std::conj(phase);
        const cplx s_ph = s * phase;
        const cplx c_ph = c * phase;

        for (int i = 0; i < n; ++i) {  // columns: A <- A V
          const cplx aip = a(i, p);
          const cplx aiq = a(i, q);
          a(i, p) = c * aip - s_conj * aiq;
          a(i, q) = s * aip + c_conj * aiq;
        }
        for (int j = 0; j < n; ++j) {  // rows: A <- V^dag A
          const cplx apj = a(p, j);
          const cplx aqj = a(q, j);
          a(p, j) = c * apj - s_ph * aqj;
          a(q, j) = s * apj + c_ph * aqj;
        }
        a(p, q) = cplx{0.0, 0.0};
        a(q, p) = cplx{0.0, 0.0};
        a(p, p) = cplx{std::real(a(p, p)), 0.0};
        a(q, q) = cplx{std::real(a(q, q)), 0.0};

        for (int i = 0; i < n; ++i) {  // accumulate V
          const cplx vip = v(i, p);
          const cplx viq = v(i, q);
          v(i, p) = c * vip - s_conj * viq;
          v(i, q) = s * vip + c_conj * viq;
        }
      }
    }
  }
  if (sweep == max_sweeps && off_norm() > target) {
    throw contract_error("hermitian_eig: Jacobi sweeps failed to converge");
  }

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return std::real(a(i, i)) < std::real(a(j, j)); });

  HermitianEig out;
  out.eigenvalues.resize(static_cast<std::size_t>(n));
  out.eigenvectors = Matrix(n, n);
  for (int k = 0; k < n; ++k) {
    const int src = order[static_cast<std::size_t>(k)];
    out.eigenvalues[static_cast<std::size_t>(k)] = std::real(a(src, src));
    for (int i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, src);
  }
  return out;
}

double trace_norm(const Matrix& m, double herm_tol) {
  const HermitianEig eig = hermitian_eig(m, herm_tol);
  double s = 0.0;
  for (double lambda : eig.eigenvalues) s += std::abs(lambda);
  return s;
}

Matrix psd_sqrt(const Matrix& m, double clamp_tol) {
  const HermitianEig eig = hermitian_eig(m);
  const int n = m.rows();
  for (double lambda : eig.eigenvalues) {
    if (lambda < -clamp_tol) {
      throw contract_error("psd_sqrt: eigenvalue " + std::to_string(lambda) +
                           " below the PSD clamp tolerance");
    }
  }
  Matrix out(n, n);
  for (int k = 0; k < n; ++k) {
    const double root = std::sqrt(std::max(0.0, eig.eigenvalues[static_cast<std::size_t>(k)]));
    if (root == 0.0) continue;
    for (int i = 0; i < n; ++i) {
      const cplx vik = eig.eigenvectors(i, k);
      if (vik == cplx{0.0, 0.0}) continue;
      for (int j = 0; j < n; ++j) {
        out(i, j) += root * vik * std::conj(eig.eigenvectors(j, k));
      }
    }
  }
  return out;
}

}  // namespace wmono
