#include "wmono/states.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "wmono/rng.hpp"

namespace wmono {

namespace {

double vector_norm_sq(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const cplx& e : v) s += std::norm(e);
  return s;
}

// (kept index, traced index) -> full basis index tables for a keep mask.
struct ReduceIndexer {
  int keep_dim = 1;
  int traced_dim = 1;
  std::vector<unsigned> keep_base;    // contribution of the kept part
  std::vector<unsigned> traced_base;  // contribution of the traced part

  ReduceIndexer(int num_qubits, unsigned keep_mask) {
    std::vector<int> keep_bits;
    std::vector<int> traced_bits;
    for (int q = 0; q < num_qubits; ++q) {
      if (keep_mask & (1u << q)) {
        keep_bits.push_back(qubit_bit(num_qubits, q));
      } else {
        traced_bits.push_back(qubit_bit(num_qubits, q));
      }
    }
    keep_dim = 1 << keep_bits.size();
    traced_dim = 1 << traced_bits.size();
    keep_base.resize(static_cast<std::size_t>(keep_dim));
    traced_base.resize(static_cast<std::size_t>(traced_dim));
    for (int k = 0; k < keep_dim; ++k) {
      unsigned f = 0;
      const int nk = static_cast<int>(keep_bits.size());
      for (int i = 0; i < nk; ++i) {
        if (k & (1 << (nk - 1 - i))) f |= 1u << keep_bits[static_cast<std::size_t>(i)];
      }
      keep_base[static_cast<std::size_t>(k)] = f;
    }
    for (int t = 0; t < traced_dim; ++t) {
      unsigned f = 0;
      const int nt = static_cast<int>(traced_bits.size());
      for (int i = 0; i < nt; ++i) {
        if (t & (1 << (nt - 1 - i))) f |= 1u << traced_bits[static_cast<std::size_t>(i)];
      }
      traced_base[static_cast<std::size_t>(t)] = f;
    }
  }
};

int popcount(unsigned v) {
  int c = 0;
  for (; v; v &= v - 1) ++c;
  return c;
}

}  // namespace

PureState::PureState(int num_qubits, std::vector<cplx> amplitudes, double norm_tol)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    throw capacity_error("PureState: qubit count " + std::to_string(num_qubits) +
                         " outside [1, " + std::to_string(kMaxQubits) + "]");
  }
  if (amplitudes_.size() != (std::size_t{1} << num_qubits)) {
    throw std::invalid_argument("PureState: expected 2^n amplitudes");
  }
  const double n2 = vector_norm_sq(amplitudes_);
  if (std::abs(n2 - 1.0) > 2.0 * norm_tol + norm_tol * norm_tol) {
    throw std::invalid_argument("PureState: squared norm " + std::to_string(n2) +
                                " is not 1 within tolerance");
  }
}

Matrix PureState::projector() const {
  const int d = static_cast<int>(dim());
  Matrix out(d, d);
  for (int i = 0; i < d; ++i) {
    const cplx ai = amplitudes_[static_cast<std::size_t>(i)];
    if (ai == cplx{0.0, 0.0}) continue;
    for (int j = 0; j < d; ++j) {
      out(i, j) = ai * std::conj(amplitudes_[static_cast<std::size_t>(j)]);
    }
  }
  return out;
}

DensityOperator::DensityOperator(int num_qubits, Matrix matrix)
    : num_qubits_(num_qubits), matrix_(std::move(matrix)) {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    throw capacity_error("DensityOperator: qubit count out of range");
  }
  const int d = 1 << num_qubits;
  if (matrix_.rows() != d || matrix_.cols() != d) {
    throw std::invalid_argument("DensityOperator: matrix must be 2^n x 2^n");
  }
  if (matrix_.hermiticity_defect() > kHermTol) {
    throw contract_error("DensityOperator: matrix is not Hermitian within tolerance");
  }
  if (std::abs(matrix_.trace() - cplx{1.0, 0.0}) > 1e-10) {
    throw contract_error("DensityOperator: trace is not 1 within tolerance");
  }
  const HermitianEig eig = hermitian_eig(matrix_);
  if (!eig.eigenvalues.empty() && eig.eigenvalues.front() < -kPsdClampTol) {
    throw contract_error("DensityOperator: negative eigenvalue " +
                         std::to_string(eig.eigenvalues.front()));
  }
}

DensityOperator DensityOperator::from_pure(const PureState& psi) {
  return DensityOperator(psi.num_qubits(), psi.projector());
}

WClassParams::WClassParams(cplx a_coeff, std::vector<cplx> b_coeffs, double norm_tol)
    : a(a_coeff), b(std::move(b_coeffs)) {
  if (b.size() < 2) {
    throw std::invalid_argument("WClassParams: need at least two b coefficients (N >= 3)");
  }
  if (num_qubits() > kMaxQubits) {
    throw capacity_error("WClassParams: qubit count exceeds cap");
  }
  double n2 = std::norm(a);
  for (const cplx& bi : b) n2 += std::norm(bi);
  if (std::abs(n2 - 1.0) > 2.0 * norm_tol + norm_tol * norm_tol) {
    throw std::invalid_argument("WClassParams: |a|^2 + sum|b_i|^2 = " + std::to_string(n2) +
                                " is not 1 within tolerance");
  }
}

Bipartition::Bipartition(int n, unsigned a_mask) : num_qubits(n), side_a_mask(a_mask) {
  if (n < 1 || n > kMaxQubits) throw capacity_error("Bipartition: qubit count out of range");
  const unsigned full = (1u << n) - 1u;
  if ((a_mask & ~full) != 0) throw std::invalid_argument("Bipartition: mask out of range");
  if (a_mask == 0) throw std::invalid_argument("Bipartition: side A must be non-empty");
}

PureState make_wclass(const WClassParams& params) {
  const int n = params.num_qubits();
  std::vector<cplx> amps(std::size_t{1} << n, cplx{0.0, 0.0});
  amps[std::size_t{1} << (n - 1)] = params.a;  // |10...0>
  for (int i = 1; i < n; ++i) {
    amps[std::size_t{1} << (n - 1 - i)] = params.b[static_cast<std::size_t>(i - 1)];
  }
  return PureState(n, std::move(amps));
}

DensityOperator reduce(const PureState& state, unsigned keep_mask) {
  const int n = state.num_qubits();
  const unsigned full = (1u << n) - 1u;
  if ((keep_mask & ~full) != 0) throw std::invalid_argument("reduce: keep set out of range");
  if (keep_mask == 0) throw std::invalid_argument("reduce: keep set must be non-empty");

  const ReduceIndexer ix(n, keep_mask);
  Matrix out(ix.keep_dim, ix.keep_dim);
  const std::vector<cplx>& amps = state.amplitudes();
  for (int k1 = 0; k1 < ix.keep_dim; ++k1) {
    for (int k2 = 0; k2 < ix.keep_dim; ++k2) {
      cplx sum{0.0, 0.0};
      for (int t = 0; t < ix.traced_dim; ++t) {
        const unsigned f1 = ix.keep_base[static_cast<std::size_t>(k1)] |
                            ix.traced_base[static_cast<std::size_t>(t)];
        const unsigned f2 = ix.keep_base[static_cast<std::size_t>(k2)] |
                            ix.traced_base[static_cast<std::size_t>(t)];
        sum += amps[f1] * std::conj(amps[f2]);
      }
      out(k1, k2) = sum;
    }
  }
  return DensityOperator(popcount(keep_mask), std::move(out));
}

DensityOperator reduce(const DensityOperator& rho, unsigned keep_mask) {
  const int n = rho.num_qubits();
  const unsigned full = (1u << n) - 1u;
  if ((keep_mask & ~full) != 0) throw std::invalid_argument("reduce: keep set out of range");
  if (keep_mask == 0) throw std::invalid_argument("reduce: keep set must be non-empty");
  Matrix out = partial_trace(rho.matrix(), n, full & ~keep_mask);
  return DensityOperator(popcount(keep_mask), std::move(out));
}

WClassParams sample_wclass(int n_qubits, std::uint64_t seed) {
  if (n_qubits < 4) {
    throw std::invalid_argument("sample_wclass: need at least 4 qubits");
  }
  if (n_qubits > kMaxQubits) {
    throw capacity_error("sample_wclass: qubit count exceeds cap");
  }
  Rng rng(seed);
  std::vector<cplx> coeffs(static_cast<std::size_t>(n_qubits));
  double n2 = 0.0;
  for (cplx& c : coeffs) {
    c = rng.complex_normal();
    n2 += std::norm(c);
  }
  const double inv = 1.0 / std::sqrt(n2);
  for (cplx& c : coeffs) c *= inv;
  return WClassParams(coeffs[0], std::vector<cplx>(coeffs.begin() + 1, coeffs.end()));
}

PureState load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error(0, "cannot open '" + path + "'");

  int line_no = 0;
  std::string line;
  int num_qubits = -1;
  std::vector<cplx> amps;
  std::size_t next_index = 0;

  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::istringstream ss(line);
    if (num_qubits < 0) {
      std::string tag;
      int n = 0;
      if (!(ss >> tag >> n) || tag != "qubits") {
        throw parse_error(line_no, "expected header 'qubits <n>'");
      }
      if (n < 1 || n > kMaxQubits) {
        throw parse_error(line_no, "qubit count " + std::to_string(n) + " out of range");
      }
      num_qubits = n;
      amps.reserve(std::size_t{1} << n);
      continue;
    }
    std::size_t index = 0;
    double re = 0.0;
    double im = 0.0;
    if (!(ss >> index >> re >> im)) {
      throw parse_error(line_no, "expected '<index> <re> <im>'");
    }
    if (index != next_index) {
      throw parse_error(line_no, "expected index " + std::to_string(next_index) +
                                     ", got " + std::to_string(index));
    }
    if (index >= (std::size_t{1} << num_qubits)) {
      throw parse_error(line_no, "index out of range for " + std::to_string(num_qubits) +
                                     " qubits");
    }
    amps.emplace_back(re, im);
    ++next_index;
  }
  if (num_qubits < 0) throw parse_error(line_no, "missing 'qubits <n>' header");
  if (amps.size() != (std::size_t{1} << num_qubits)) {
    throw parse_error(line_no, "expected " + std::to_string(std::size_t{1} << num_qubits) +
                                   " amplitudes, got " + std::to_string(amps.size()));
  }
  const double n2 = vector_norm_sq(amps);
  if (std::abs(n2 - 1.0) > 2.0 * kNormTol + kNormTol * kNormTol) {
    throw parse_error(line_no, "state norm^2 is " + std::to_string(n2) + ", expected 1");
  }
  return PureState(num_qubits, std::move(amps));
}

void save_state(const PureState& state, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_state: cannot open '" + path + "' for writing");
  out << "qubits " << state.num_qubits() << "\n";
  char buf[96];
  for (std::size_t i = 0; i < state.dim(); ++i) {
    const cplx a = state.amplitude(i);
    std::snprintf(buf, sizeof(buf), "%zu %.17g %.17g\n", i, a.real(), a.imag());
    out << buf;
  }
  if (!out) throw std::runtime_error("save_state: write to '" + path + "' failed");
}

}  // namespace wmono
