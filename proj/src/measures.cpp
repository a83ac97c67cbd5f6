#include "wmono/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wmono/rng.hpp"

namespace wmono {

namespace {

int popcount(unsigned v) {
  int c = 0;
  for (; v; v &= v - 1) ++c;
  return c;
}

// Full-space basis index from (side index, complement index) for a fixed
// qubit mask; lets reduced operators be accumulated straight from a raw
// amplitude vector.
struct SplitIndexer {
  int side_dim = 1;
  int comp_dim = 1;
  std::vector<unsigned> side_base;
  std::vector<unsigned> comp_base;

  SplitIndexer(int num_qubits, unsigned side_mask) {
    std::vector<int> side_bits;
    std::vector<int> comp_bits;
    for (int q = 0; q < num_qubits; ++q) {
      if (side_mask & (1u << q)) {
        side_bits.push_back(qubit_bit(num_qubits, q));
      } else {
        comp_bits.push_back(qubit_bit(num_qubits, q));
      }
    }
    side_dim = 1 << side_bits.size();
    comp_dim = 1 << comp_bits.size();
    side_base.resize(static_cast<std::size_t>(side_dim));
    comp_base.resize(static_cast<std::size_t>(comp_dim));
    for (int s = 0; s < side_dim; ++s) {
      unsigned f = 0;
      const int ns = static_cast<int>(side_bits.size());
      for (int i = 0; i < ns; ++i) {
        if (s & (1 << (ns - 1 - i))) f |= 1u << side_bits[static_cast<std::size_t>(i)];
      }
      side_base[static_cast<std::size_t>(s)] = f;
    }
    for (int t = 0; t < comp_dim; ++t) {
      unsigned f = 0;
      const int nt = static_cast<int>(comp_bits.size());
      for (int i = 0; i < nt; ++i) {
        if (t & (1 << (nt - 1 - i))) f |= 1u << comp_bits[static_cast<std::size_t>(i)];
      }
      comp_base[static_cast<std::size_t>(t)] = f;
    }
  }
};

// Smaller side of a split (spectra of the two reductions agree on nonzero
// eigenvalues, so every kernel below may use either).
unsigned smaller_side_mask(const Bipartition& split) {
  const int na = popcount(split.side_a_mask);
  const int nb = split.num_qubits - na;
  return (na <= nb) ? split.side_a_mask : split.side_b_mask();
}

// Average-entanglement contribution p * kernel(v / sqrt(p)) of a
// subnormalized member v with p = <v|v>, evaluated without normalizing:
//   concurrence: sqrt(2 (p^2 - Tr rt^2))
//   negativity:  (Tr sqrt(rt))^2 - p
// where rt is the reduced operator of v on the indexer's side.
class KernelEvaluator {
 public:
  KernelEvaluator(int num_qubits, unsigned side_mask, Kernel kernel)
      : ix_(num_qubits, side_mask), kernel_(kernel),
        red_(static_cast<std::size_t>(ix_.side_dim) * ix_.side_dim) {}

  double contribution(const std::vector<cplx>& v) {
    const int ds = ix_.side_dim;
    double p = 0.0;
    for (int s1 = 0; s1 < ds; ++s1) {
      for (int s2 = s1; s2 < ds; ++s2) {
        cplx sum{0.0, 0.0};
        for (int t = 0; t < ix_.comp_dim; ++t) {
          const unsigned tb = ix_.comp_base[static_cast<std::size_t>(t)];
          sum += v[ix_.side_base[static_cast<std::size_t>(s1)] | tb] *
                 std::conj(v[ix_.side_base[static_cast<std::size_t>(s2)] | tb]);
        }
        red_[static_cast<std::size_t>(s1) * ds + s2] = sum;
        if (s1 == s2) p += std::real(sum);
      }
    }

    if (kernel_ == Kernel::concurrence) {
      double tr2 = 0.0;
      for (int s1 = 0; s1 < ds; ++s1) {
        tr2 += std::norm(red_[static_cast<std::size_t>(s1) * ds + s1]);
        for (int s2 = s1 + 1; s2 < ds; ++s2) {
          tr2 += 2.0 * std::norm(red_[static_cast<std::size_t>(s1) * ds + s2]);
        }
      }
      return std::sqrt(std::max(0.0, 2.0 * (p * p - tr2)));
    }

    // negativity: needs the spectrum of the reduced operator
    double tr_sqrt = 0.0;
    if (ds == 2) {
      const double alpha = std::real(red_[0]);
      const double delta = std::real(red_[3]);
      const double mean = 0.5 * (alpha + delta);
      const double dev = std::sqrt(0.25 * (alpha - delta) * (alpha - delta) +
                                   std::norm(red_[1]));
      tr_sqrt = std::sqrt(std::max(0.0, mean + dev)) + std::sqrt(std::max(0.0, mean - dev));
    } else {
      Matrix rt(ds, ds);
      for (int s1 = 0; s1 < ds; ++s1) {
        rt(s1, s1) = red_[static_cast<std::size_t>(s1) * ds + s1];
        for (int s2 = s1 + 1; s2 < ds; ++s2) {
          rt(s1, s2) = red_[static_cast<std::size_t>(s1) * ds + s2];
          rt(s2, s1) = std::conj(red_[static_cast<std::size_t>(s1) * ds + s2]);
        }
      }
      for (double lambda : hermitian_eig(rt).eigenvalues) {
        tr_sqrt += std::sqrt(std::max(0.0, lambda));
      }
    }
    return tr_sqrt * tr_sqrt - p;
  }

 private:
  SplitIndexer ix_;
  Kernel kernel_;
  std::vector<cplx> red_;
};

double dim_of_check(const DensityOperator& rho, const Bipartition& split) {
  if (rho.num_qubits() != split.num_qubits) {
    throw std::invalid_argument("bipartition qubit count does not match the operator");
  }
  return 0.0;
}

// Collection of subnormalized members spanning a target; sum_j v_j v_j^dag
// is invariant under the pair rotations applied by the optimizer.
struct EnsembleState {
  std::vector<std::vector<cplx>> members;   // K vectors, dim d
  std::vector<double> contributions;        // cached kernel contributions
  double total = 0.0;
};

class RoofOptimizer {
 public:
  RoofOptimizer(const DensityOperator& rho, const Bipartition& split, Kernel kernel,
                Sense sense, const RoofConfig& cfg)
      : eval_(rho.num_qubits(), smaller_side_mask(split), kernel),
        sense_(sense),
        cfg_(cfg),
        dim_(rho.dim()) {
    const HermitianEig eig = hermitian_eig(rho.matrix());
    for (int k = dim_ - 1; k >= 0; --k) {
      const double lambda = eig.eigenvalues[static_cast<std::size_t>(k)];
      if (lambda <= kRankTol) break;
      std::vector<cplx> w(static_cast<std::size_t>(dim_));
      const double root = std::sqrt(lambda);
      for (int i = 0; i < dim_; ++i) {
        w[static_cast<std::size_t>(i)] = root * eig.eigenvectors(i, k);
      }
      base_.push_back(std::move(w));
    }
    rank_ = static_cast<int>(base_.size());
    if (cfg.ensemble_size == 0) {
      k_ = std::max(4, rank_);
    } else {
      if (cfg.ensemble_size < rank_) {
        throw std::invalid_argument("roof_extremize: ensemble_size " +
                                    std::to_string(cfg.ensemble_size) +
                                    " below the target rank " + std::to_string(rank_));
      }
      k_ = cfg.ensemble_size;
    }
  }

  int rank() const { return rank_; }
  const std::vector<cplx>& top_eigvec_scaled() const { return base_.front(); }

  MeasureValue run() {
    MeasureValue out;
    out.method = Method::roof_opt;
    EnsembleState best;
    double best_value = 0.0;
    bool best_converged = false;
    bool have_best = false;

    const int restarts = std::max(1, cfg_.restarts);
    for (int r = 0; r < restarts; ++r) {
      EnsembleState st = initial_state(r);
      const bool converged = refine(st);
      if (!have_best || better(st.total, best_value)) {
        best = st;
        best_value = st.total;
        best_converged = converged;
        have_best = true;
      }
    }

    out.value = std::max(0.0, best_value);
    out.converged = best_converged;
    out.ensemble = to_ensemble(best);
    return out;
  }

 private:
  static constexpr double kRankTol = 1e-10;

  bool better(double candidate, double incumbent) const {
    return sense_ == Sense::maximize ? candidate > incumbent : candidate < incumbent;
  }

  EnsembleState initial_state(int restart) {
    EnsembleState st;
    st.members.assign(static_cast<std::size_t>(k_),
                      std::vector<cplx>(static_cast<std::size_t>(dim_)));
    if (restart == 0) {
      // eigen-ensemble itself: a valid decomposition, so the reported
      // extremum is never worse than the spectral one
      for (int i = 0; i < rank_; ++i) st.members[static_cast<std::size_t>(i)] = base_[static_cast<std::size_t>(i)];
    } else {
      Rng rng(derive_seed(cfg_.rng_seed, static_cast<std::uint64_t>(restart)));
      const std::vector<std::vector<cplx>> m = random_isometry(rng);
      for (int j = 0; j < k_; ++j) {
        std::vector<cplx>& v = st.members[static_cast<std::size_t>(j)];
        for (int i = 0; i < rank_; ++i) {
          const cplx mji = m[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
          const std::vector<cplx>& w = base_[static_cast<std::size_t>(i)];
          for (int x = 0; x < dim_; ++x) v[static_cast<std::size_t>(x)] += mji * w[static_cast<std::size_t>(x)];
        }
      }
    }
    st.contributions.resize(static_cast<std::size_t>(k_));
    st.total = 0.0;
    for (int j = 0; j < k_; ++j) {
      st.contributions[static_cast<std::size_t>(j)] = eval_.contribution(st.members[static_cast<std::size_t>(j)]);
      st.total += st.contributions[static_cast<std::size_t>(j)];
    }
    return st;
  }

  // K x rank matrix with orthonormal columns (Gram-Schmidt on Gaussians).
  std::vector<std::vector<cplx>> random_isometry(Rng& rng) const {
    std::vector<std::vector<cplx>> cols(
        static_cast<std::size_t>(rank_), std::vector<cplx>(static_cast<std::size_t>(k_)));
    for (auto& col : cols) {
      for (cplx& e : col) e = rng.complex_normal();
    }
    for (std::size_t i = 0; i < cols.size(); ++i) {
      for (std::size_t prev = 0; prev < i; ++prev) {
        cplx proj{0.0, 0.0};
        for (int j = 0; j < k_; ++j) {
          proj += std::conj(cols[prev][static_cast<std::size_t>(j)]) * cols[i][static_cast<std::size_t>(j)];
        }
        for (int j = 0; j < k_; ++j) {
          cols[i][static_cast<std::size_t>(j)] -= proj * cols[prev][static_cast<std::size_t>(j)];
        }
      }
      double n2 = 0.0;
      for (int j = 0; j < k_; ++j) n2 += std::norm(cols[i][static_cast<std::size_t>(j)]);
      const double inv = 1.0 / std::sqrt(n2);
      for (int j = 0; j < k_; ++j) cols[i][static_cast<std::size_t>(j)] *= inv;
    }
    // transpose into row-major K x rank
    std::vector<std::vector<cplx>> m(
        static_cast<std::size_t>(k_), std::vector<cplx>(static_cast<std::size_t>(rank_)));
    for (int j = 0; j < k_; ++j) {
      for (int i = 0; i < rank_; ++i) {
        m[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
            cols[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      }
    }
    return m;
  }

  // One (theta, phi) rotation applied to members j and k:
  //   v_j' =  cos(t) v_j + sin(t) e^{i phi} v_k
  //   v_k' = -sin(t) e^{-i phi} v_j + cos(t) v_k
  void apply_rotation(EnsembleState& st, int j, int k, double theta, double phi) const {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const cplx e_pos = std::polar(s, phi);
    const cplx e_neg = std::polar(s, -phi);
    std::vector<cplx>& vj = st.members[static_cast<std::size_t>(j)];
    std::vector<cplx>& vk = st.members[static_cast<std::size_t>(k)];
    for (int x = 0; x < dim_; ++x) {
      const cplx a = vj[static_cast<std::size_t>(x)];
      const cplx b = vk[static_cast<std::size_t>(x)];
      vj[static_cast<std::size_t>(x)] = c * a + e_pos * b;
      vk[static_cast<std::size_t>(x)] = -e_neg * a + c * b;
    }
  }

  double pair_value(const EnsembleState& st, int j, int k, double theta, double phi,
                    std::vector<cplx>& sj, std::vector<cplx>& sk) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const cplx e_pos = std::polar(s, phi);
    const cplx e_neg = std::polar(s, -phi);
    const std::vector<cplx>& vj = st.members[static_cast<std::size_t>(j)];
    const std::vector<cplx>& vk = st.members[static_cast<std::size_t>(k)];
    for (int x = 0; x < dim_; ++x) {
      const cplx a = vj[static_cast<std::size_t>(x)];
      const cplx b = vk[static_cast<std::size_t>(x)];
      sj[static_cast<std::size_t>(x)] = c * a + e_pos * b;
      sk[static_cast<std::size_t>(x)] = -e_neg * a + c * b;
    }
    return eval_.contribution(sj) + eval_.contribution(sk);
  }

  // Golden-section minimization/maximization of the pair objective along
  // one coordinate; returns the refined coordinate value.
  double golden_polish(const EnsembleState& st, int j, int k, double lo, double hi,
                       bool move_theta, double other, double window,
                       std::vector<cplx>& sj, std::vector<cplx>& sk) {
    const double gr = 0.6180339887498949;
    const double sign = sense_ == Sense::maximize ? 1.0 : -1.0;
    while (hi - lo > window) {
      const double m1 = hi - gr * (hi - lo);
      const double m2 = lo + gr * (hi - lo);
      const double v1 = move_theta ? pair_value(st, j, k, m1, other, sj, sk)
                                   : pair_value(st, j, k, other, m1, sj, sk);
      const double v2 = move_theta ? pair_value(st, j, k, m2, other, sj, sk)
                                   : pair_value(st, j, k, other, m2, sj, sk);
      if (sign * (v1 - v2) > 0.0) {
        hi = m2;
      } else {
        lo = m1;
      }
    }
    return 0.5 * (lo + hi);
  }

  // Sweeps of pair rotations; returns true when the last sweep improved by
  // less than value_tol (converged) rather than hitting max_iters.
  bool refine(EnsembleState& st) {
    std::vector<cplx> sj(static_cast<std::size_t>(dim_));
    std::vector<cplx> sk(static_cast<std::size_t>(dim_));
    const double sign = sense_ == Sense::maximize ? 1.0 : -1.0;
    const int sweeps = std::max(1, cfg_.max_iters);
    const double window = std::max(cfg_.step_tol, 1e-9);

    for (int sweep = 0; sweep < sweeps; ++sweep) {
      double improvement = 0.0;
      for (int j = 0; j + 1 < k_; ++j) {
        for (int k = j + 1; k < k_; ++k) {
          const double cur = st.contributions[static_cast<std::size_t>(j)] +
                             st.contributions[static_cast<std::size_t>(k)];
          double best_val = cur;
          double best_theta = 0.0;
          double best_phi = 0.0;
          bool found = false;

          constexpr int kThetaGrid = 12;
          constexpr int kPhiGrid = 8;
          for (int ti = 1; ti < kThetaGrid; ++ti) {
            const double theta = (0.5 * kPi) * ti / kThetaGrid;
            for (int pi_idx = 0; pi_idx < kPhiGrid; ++pi_idx) {
              const double phi = (2.0 * kPi) * pi_idx / kPhiGrid;
              const double val = pair_value(st, j, k, theta, phi, sj, sk);
              if (sign * (val - best_val) > 0.0) {
                best_val = val;
                best_theta = theta;
                best_phi = phi;
                found = true;
              }
            }
          }
          if (!found) continue;

          // alternate golden-section polish of theta and phi around the
          // grid optimum
          const double theta_span = (0.5 * kPi) / kThetaGrid;
          const double phi_span = (2.0 * kPi) / kPhiGrid;
          for (int round = 0; round < 2; ++round) {
            best_theta = golden_polish(st, j, k, best_theta - theta_span,
                                       best_theta + theta_span, true, best_phi, window, sj, sk);
            best_phi = golden_polish(st, j, k, best_phi - phi_span, best_phi + phi_span,
                                     false, best_theta, window, sj, sk);
          }

          const double final_val = pair_value(st, j, k, best_theta, best_phi, sj, sk);
          if (sign * (final_val - cur) <= 0.0) continue;
          apply_rotation(st, j, k, best_theta, best_phi);
          const double cj = eval_.contribution(st.members[static_cast<std::size_t>(j)]);
          const double ck = eval_.contribution(st.members[static_cast<std::size_t>(k)]);
          st.total += (cj + ck) - cur;
          st.contributions[static_cast<std::size_t>(j)] = cj;
          st.contributions[static_cast<std::size_t>(k)] = ck;
          improvement += sign * ((cj + ck) - cur);
        }
      }
      if (improvement < cfg_.value_tol) return true;
    }
    return false;
  }

  DecompositionEnsemble to_ensemble(const EnsembleState& st) const {
    DecompositionEnsemble ens;
    for (int j = 0; j < k_; ++j) {
      const std::vector<cplx>& v = st.members[static_cast<std::size_t>(j)];
      double p = 0.0;
      for (const cplx& e : v) p += std::norm(e);
      if (p < 1e-12) continue;
      std::vector<cplx> normalized(v);
      const double inv = 1.0 / std::sqrt(p);
      for (cplx& e : normalized) e *= inv;
      ens.weights.push_back(p);
      const int n = popcount_dim(dim_);
      ens.members.emplace_back(n, std::move(normalized));
    }
    return ens;
  }

  static int popcount_dim(int dim) {
    int n = 0;
    while ((1 << n) < dim) ++n;
    return n;
  }

  static constexpr double kPi = 3.14159265358979323846;

  KernelEvaluator eval_;
  Sense sense_;
  RoofConfig cfg_;
  int dim_;
  std::vector<std::vector<cplx>> base_;  // sqrt(lambda_i) * eigvec_i, descending
  int rank_ = 0;
  int k_ = 0;
};

}  // namespace

MeasureValue concurrence_pure(const PureState& psi, const Bipartition& split) {
  if (psi.num_qubits() != split.num_qubits) {
    throw std::invalid_argument("bipartition qubit count does not match the state");
  }
  KernelEvaluator eval(psi.num_qubits(), smaller_side_mask(split), Kernel::concurrence);
  MeasureValue out;
  out.value = eval.contribution(psi.amplitudes());
  out.method = Method::closed_form;
  return out;
}

MeasureValue concurrence_two_qubit(const DensityOperator& rho) {
  if (rho.num_qubits() != 2) {
    throw std::invalid_argument("concurrence_two_qubit requires a 2-qubit operator");
  }
  // spin-flip Y x Y is real: antidiagonal (-1, 1, 1, -1)
  Matrix yy(4, 4);
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const Matrix rho_tilde = yy * rho.matrix().conjugate() * yy;
  const Matrix root = psd_sqrt(rho.matrix());
  const Matrix r = root * rho_tilde * root;
  const HermitianEig eig = hermitian_eig(r, 1e-8);
  std::vector<double> lambdas;
  for (double v : eig.eigenvalues) lambdas.push_back(std::sqrt(std::max(0.0, v)));
  std::sort(lambdas.begin(), lambdas.end(), std::greater<double>());
  MeasureValue out;
  out.value = std::max(0.0, lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]);
  out.method = Method::closed_form;
  return out;
}

MeasureValue negativity(const DensityOperator& rho, const Bipartition& split) {
  dim_of_check(rho, split);
  const Matrix pt = partial_transpose(rho.matrix(), rho.num_qubits(), split.side_a_mask);
  MeasureValue out;
  out.value = std::max(0.0, trace_norm(pt) - 1.0);
  out.method = Method::closed_form;
  return out;
}

MeasureValue negativity_pure(const PureState& psi, const Bipartition& split) {
  if (psi.num_qubits() != split.num_qubits) {
    throw std::invalid_argument("bipartition qubit count does not match the state");
  }
  KernelEvaluator eval(psi.num_qubits(), smaller_side_mask(split), Kernel::negativity);
  MeasureValue out;
  out.value = std::max(0.0, eval.contribution(psi.amplitudes()));
  out.method = Method::closed_form;
  return out;
}

MeasureValue roof_extremize(const DensityOperator& rho, const Bipartition& split,
                            Kernel kernel, Sense sense, const RoofConfig& cfg) {
  dim_of_check(rho, split);
  RoofOptimizer opt(rho, split, kernel, sense, cfg);
  if (opt.rank() == 1) {
    // pure target: every decomposition is the state itself
    std::vector<cplx> v = opt.top_eigvec_scaled();
    double n2 = 0.0;
    for (const cplx& e : v) n2 += std::norm(e);
    const double inv = 1.0 / std::sqrt(n2);
    for (cplx& e : v) e *= inv;
    PureState psi(rho.num_qubits(), std::move(v));
    MeasureValue out = kernel == Kernel::concurrence ? concurrence_pure(psi, split)
                                                     : negativity_pure(psi, split);
    out.method = Method::roof_opt;
    DecompositionEnsemble ens;
    ens.weights.push_back(1.0);
    ens.members.push_back(psi);
    out.ensemble = std::move(ens);
    return out;
  }
  return opt.run();
}

MeasureValue concurrence_assist(const DensityOperator& rho, const Bipartition& split,
                                const RoofConfig& cfg) {
  return roof_extremize(rho, split, Kernel::concurrence, Sense::maximize, cfg);
}

MeasureValue cren(const DensityOperator& rho, const Bipartition& split, const RoofConfig& cfg) {
  return roof_extremize(rho, split, Kernel::negativity, Sense::minimize, cfg);
}

MeasureValue crenoa(const DensityOperator& rho, const Bipartition& split, const RoofConfig& cfg) {
  return roof_extremize(rho, split, Kernel::negativity, Sense::maximize, cfg);
}

double wclass_pair_value(const WClassParams& params, int i, Kernel /*kernel*/) {
  const int n = params.num_qubits();
  if (i < 1 || i > n - 1) {
    throw std::invalid_argument("wclass_pair_value: pair index " + std::to_string(i) +
                                " outside [1, " + std::to_string(n - 1) + "]");
  }
  return 2.0 * std::abs(params.a) * std::abs(params.b[static_cast<std::size_t>(i - 1)]);
}

double wclass_one_vs_rest(const WClassParams& params, const std::vector<int>& subset,
                          Kernel /*kernel*/) {
  if (subset.empty()) {
    throw std::invalid_argument("wclass_one_vs_rest: subset must be non-empty");
  }
  const int n = params.num_qubits();
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  double sum = 0.0;
  for (int l : subset) {
    if (l < 1 || l > n - 1) {
      throw std::invalid_argument("wclass_one_vs_rest: pair index out of range");
    }
    if (seen[static_cast<std::size_t>(l)]) {
      throw std::invalid_argument("wclass_one_vs_rest: duplicate pair index");
    }
    seen[static_cast<std::size_t>(l)] = true;
    sum += std::norm(params.b[static_cast<std::size_t>(l - 1)]);
  }
  return 2.0 * std::abs(params.a) * std::sqrt(sum);
}

}  // namespace wmono
