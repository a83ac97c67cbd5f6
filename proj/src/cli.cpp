#include "wmono/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "wmono/monogamy.hpp"
#include "wmono/rng.hpp"

namespace wmono {

namespace cli {

namespace {

constexpr const char* kVersion = "wmono 0.1.0";
constexpr double kMarginTol = -1e-8;

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<double> make_grid(double lo, double hi, double step) {
  std::vector<double> grid;
  const int count = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
  grid.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) grid.push_back(lo + i * step);
  return grid;
}

unsigned mask_from_indices(const std::vector<int>& qubits, int num_qubits) {
  unsigned mask = 0;
  for (int q : qubits) {
    if (q < 0 || q >= num_qubits) {
      throw std::invalid_argument("qubit index " + std::to_string(q) + " outside [0, " +
                                  std::to_string(num_qubits - 1) + "]");
    }
    mask |= 1u << q;
  }
  return mask;
}

std::string params_to_string(const WClassParams& params) {
  std::ostringstream ss;
  ss << "a=(" << g17(params.a.real()) << "," << g17(params.a.imag()) << ")";
  for (std::size_t i = 0; i < params.b.size(); ++i) {
    ss << " b" << (i + 1) << "=(" << g17(params.b[i].real()) << "," << g17(params.b[i].imag())
       << ")";
  }
  return ss.str();
}

std::string subset_to_string(const std::vector<int>& subset) {
  std::ostringstream ss;
  for (std::size_t i = 0; i < subset.size(); ++i) ss << (i ? "," : "") << subset[i];
  return ss.str();
}

struct VerifyStats {
  int instances = 0;
  int satisfied = 0;
  long margins_checked = 0;
  double min_margin = std::numeric_limits<double>::infinity();
};

}  // namespace

int cmd_compute(const ComputeArgs& args, std::ostream& out, std::ostream& err) {
  const PureState psi = load_state(args.state_file);
  const Bipartition split(psi.num_qubits(), mask_from_indices(args.side_a, psi.num_qubits()));

  RoofConfig cfg;
  cfg.restarts = args.restarts;
  cfg.rng_seed = args.seed;

  MeasureValue mv;
  if (args.measure == "concurrence") {
    mv = concurrence_pure(psi, split);
  } else if (args.measure == "negativity") {
    mv = negativity(DensityOperator::from_pure(psi), split);
  } else if (args.measure == "negativity-pure") {
    mv = negativity_pure(psi, split);
  } else if (args.measure == "concurrence-assist") {
    mv = concurrence_assist(DensityOperator::from_pure(psi), split, cfg);
  } else if (args.measure == "cren") {
    mv = cren(DensityOperator::from_pure(psi), split, cfg);
  } else if (args.measure == "crenoa") {
    mv = crenoa(DensityOperator::from_pure(psi), split, cfg);
  } else {
    err << "unknown measure '" << args.measure << "'\n";
    return 2;
  }

  out << args.measure << " = " << g17(mv.value)
      << "  method=" << (mv.method == Method::closed_form ? "closed_form" : "roof_opt");
  if (!mv.converged) out << "  (not converged)";
  out << "\n";
  if (args.show_ensemble && mv.ensemble) {
    for (std::size_t i = 0; i < mv.ensemble->weights.size(); ++i) {
      out << "  p[" << i << "] = " << g17(mv.ensemble->weights[i]) << "\n";
      const PureState& member = mv.ensemble->members[i];
      for (std::size_t idx = 0; idx < member.dim(); ++idx) {
        const cplx a = member.amplitude(idx);
        if (std::abs(a) < 1e-12) continue;
        out << "    |" << idx << "> " << g17(a.real()) << " " << g17(a.imag()) << "\n";
      }
    }
  }
  return 0;
}

int cmd_fig1(const FigArgs& args, std::ostream& err) {
  std::ofstream out(args.out_path);
  if (!out) {
    err << "cannot open '" << args.out_path << "' for writing\n";
    return 2;
  }

  const WClassParams w4(cplx{0.5, 0.0}, {cplx{0.5, 0.0}, cplx{0.5, 0.0}, cplx{0.5, 0.0}});
  const std::vector<int> subset = {1, 2, 3};
  const OrderingProfile profile = classify_ordering(w4, subset, Kernel::concurrence);
  const double exact_base =
      concurrence_pure(make_wclass(w4), Bipartition::one_vs_rest(4)).value;
  std::vector<double> pairs;
  for (int j : subset) pairs.push_back(wclass_pair_value(w4, j, Kernel::concurrence));

  out << "# " << kVersion << " fig1 x-min=" << g17(args.x_min) << " x-max=" << g17(args.x_max)
      << " x-step=" << g17(args.x_step) << "\n";
  out << "# concurrence-of-assistance curve family for the symmetric 4-qubit W state, "
      << "one-vs-rest split (profile t=" << profile.t << ")\n";
  out << "x,exact,thm1,jzx,zxn\n";
  for (double x : make_grid(args.x_min, args.x_max, args.x_step)) {
    const double exact = std::pow(exact_base, x);
    const double thm1 = bound_rhs(BoundKind::assist_conc_h, pairs, x, profile.t);
    const double jzx = bound_rhs(BoundKind::assist_conc_xhalf, pairs, x, profile.t);
    const double zxn = bound_rhs(BoundKind::assist_conc_flat, pairs, x, profile.t);
    out << g17(x) << "," << g17(exact) << "," << g17(thm1) << "," << g17(jzx) << ","
        << g17(zxn) << "\n";
  }
  if (!out) {
    err << "write to '" << args.out_path << "' failed\n";
    return 2;
  }
  return 0;
}

int cmd_fig2(const FigArgs& args, std::ostream& err) {
  std::ofstream out(args.out_path);
  if (!out) {
    err << "cannot open '" << args.out_path << "' for writing\n";
    return 2;
  }

  const double inv_sqrt5 = 1.0 / std::sqrt(5.0);
  const WClassParams w5(cplx{inv_sqrt5, 0.0},
                        std::vector<cplx>(4, cplx{inv_sqrt5, 0.0}));
  const std::vector<int> subset = {1, 2, 3, 4};
  const OrderingProfile profile = classify_ordering(w5, subset, Kernel::negativity);
  const double exact_base =
      negativity_pure(make_wclass(w5), Bipartition::one_vs_rest(5)).value;
  std::vector<double> pairs;
  for (int j : subset) pairs.push_back(wclass_pair_value(w5, j, Kernel::negativity));

  out << "# " << kVersion << " fig2 x-min=" << g17(args.x_min) << " x-max=" << g17(args.x_max)
      << " x-step=" << g17(args.x_step) << "\n";
  out << "# negativity-of-assistance curve family for the symmetric 5-qubit W state, "
      << "one-vs-rest split (profile t=" << profile.t << ")\n";
  out << "# note: bound series use the pairwise factor (2/5)^x; some published statements "
      << "of these bounds print (1/2)^x instead, which would exceed the exact curve at x=2 "
      << "(1.0 vs 0.64) and is treated here as a typo\n";
  out << "x,exact,thm3,jzx\n";
  for (double x : make_grid(args.x_min, args.x_max, args.x_step)) {
    const double exact = std::pow(exact_base, x);
    const double thm3 = bound_rhs(BoundKind::assist_neg_h, pairs, x, profile.t);
    const double jzx = bound_rhs(BoundKind::assist_neg_xhalf, pairs, x, profile.t);
    out << g17(x) << "," << g17(exact) << "," << g17(thm3) << "," << g17(jzx) << "\n";
  }
  if (!out) {
    err << "write to '" << args.out_path << "' failed\n";
    return 2;
  }
  return 0;
}

int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
  if (args.samples < 1) {
    err << "--samples must be >= 1\n";
    return 2;
  }
  if (args.x_list.empty() && (args.x_min < 2.0 || args.x_step <= 0.0 || args.x_max < args.x_min)) {
    err << "invalid x grid: the bounds require x >= 2 and a positive step\n";
    return 2;
  }
  for (double x : args.x_list) {
    if (x < 2.0) {
      err << "invalid x grid: the bounds require x >= 2\n";
      return 2;
    }
  }
  for (int n : args.qubits) {
    if (n < 4 || n > kMaxQubits) {
      err << "--qubits entries must be in [4, " << kMaxQubits << "]\n";
      return 2;
    }
  }

  std::vector<BoundKind> kinds;
  if (args.family == "concurrence" || args.family == "both") {
    kinds.push_back(BoundKind::assist_conc_h);
    kinds.push_back(BoundKind::assist_conc_h_all_ge);
  }
  if (args.family == "negativity" || args.family == "both") {
    kinds.push_back(BoundKind::assist_neg_h);
    kinds.push_back(BoundKind::assist_neg_h_all_ge);
  }
  if (kinds.empty()) {
    err << "--family must be concurrence, negativity or both\n";
    return 2;
  }

  LhsMode mode;
  if (args.lhs_mode == "analytic") {
    mode = LhsMode::analytic;
  } else if (args.lhs_mode == "oracle") {
    mode = LhsMode::oracle;
  } else if (args.lhs_mode == "chain") {
    mode = LhsMode::chain;
  } else {
    err << "--lhs-mode must be analytic, oracle or chain\n";
    return 2;
  }

  const std::vector<double> grid =
      args.x_list.empty() ? make_grid(args.x_min, args.x_max, args.x_step) : args.x_list;

  std::ofstream csv;
  if (!args.out_path.empty()) {
    csv.open(args.out_path);
    if (!csv) {
      err << "cannot open '" << args.out_path << "' for writing\n";
      return 2;
    }
    csv << "# " << kVersion << " verify seed=" << args.seed << " samples=" << args.samples
        << " family=" << args.family << " lhs-mode=" << args.lhs_mode
        << " restarts=" << args.restarts << " oracle-samples=" << args.oracle_samples << "\n";
    csv << "sample,n,kind,mode,subset,t,satisfied,x,lhs,rhs,margin\n";
  }

  RoofConfig cfg;
  cfg.restarts = args.restarts;

  std::map<BoundKind, VerifyStats> stats;
  int violations = 0;
  std::vector<int> oracle_pool;  // sample indices with N = 4

  struct Instance {
    WClassParams params;
    std::vector<int> subset;
  };
  std::vector<Instance> instances;
  instances.reserve(static_cast<std::size_t>(args.samples));

  for (int s = 0; s < args.samples; ++s) {
    const int n = args.qubits[static_cast<std::size_t>(s) % args.qubits.size()];
    WClassParams params = sample_wclass(n, derive_seed(args.seed, 2ull * s));
    Rng sub(derive_seed(args.seed, 2ull * s + 1));
    const int max_size = n - 1;
    // analytic LHS exists only for the full split
    int size = mode == LhsMode::analytic
                   ? max_size
                   : 3 + static_cast<int>(sub.uniform() * (max_size - 3 + 1));
    size = std::min(size, max_size);
    std::vector<int> pool;
    for (int j = 1; j <= n - 1; ++j) pool.push_back(j);
    for (int i = 0; i < size; ++i) {
      const int j = i + static_cast<int>(sub.uniform() * (pool.size() - i));
      std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    pool.resize(static_cast<std::size_t>(size));
    if (n == 4) oracle_pool.push_back(s);
    instances.push_back({std::move(params), std::move(pool)});
  }

  auto run_instance = [&](int sample_idx, LhsMode run_mode, const RoofConfig& run_cfg) -> int {
    const Instance& inst = instances[static_cast<std::size_t>(sample_idx)];
    int bad = 0;
    for (BoundKind kind : kinds) {
      const MonogamyReport report =
          verify_theorem(inst.params, inst.subset, kind, grid, run_cfg, run_mode);
      VerifyStats& st = stats[kind];
      if (run_mode == mode) {
        ++st.instances;
        if (report.hypothesis_satisfied) ++st.satisfied;
      }
      const char* mode_tag = run_mode == LhsMode::oracle   ? "oracle"
                             : run_mode == LhsMode::chain  ? "chain"
                                                           : "analytic";
      if (!report.hypothesis_satisfied) {
        if (csv.is_open()) {
          csv << sample_idx << "," << inst.params.num_qubits() << "," << to_string(kind) << ","
              << mode_tag << "," << subset_to_string(inst.subset) << ",-1,0,,,,\n";
        }
        continue;
      }
      for (std::size_t xi = 0; xi < grid.size(); ++xi) {
        const double margin = report.margin[xi];
        VerifyStats& target = stats[kind];
        target.margins_checked += 1;
        target.min_margin = std::min(target.min_margin, margin);
        if (csv.is_open()) {
          csv << sample_idx << "," << inst.params.num_qubits() << "," << to_string(kind) << ","
              << mode_tag << "," << subset_to_string(inst.subset) << "," << report.profile.t
              << ",1," << g17(grid[xi]) << "," << g17(report.lhs[xi]) << ","
              << g17(report.rhs[xi]) << "," << g17(margin) << "\n";
        }
        if (margin < kMarginTol) {
          ++bad;
          err << "margin violation: sample=" << sample_idx << " kind=" << to_string(kind)
              << " mode=" << mode_tag << " x=" << g17(grid[xi]) << " margin=" << g17(margin)
              << "\n  subset=(" << subset_to_string(inst.subset) << ") "
              << params_to_string(inst.params) << "\n";
        }
      }
    }
    return bad;
  };

  for (int s = 0; s < args.samples; ++s) violations += run_instance(s, mode, cfg);

  const int oracle_count = std::min<int>(args.oracle_samples, static_cast<int>(oracle_pool.size()));
  for (int i = 0; i < oracle_count; ++i) {
    violations += run_instance(oracle_pool[static_cast<std::size_t>(i)], LhsMode::oracle, cfg);
  }

  for (const auto& [kind, st] : stats) {
    out << to_string(kind) << ": instances=" << st.instances
        << " hypothesis_satisfied=" << st.satisfied << " margins_checked=" << st.margins_checked
        << " min_margin=" << (st.margins_checked ? g17(st.min_margin) : "n/a") << "\n";
  }
  if (oracle_count > 0) out << "oracle spot checks: " << oracle_count << " instances (N=4)\n";
  out << (violations == 0 ? "OK" : "FAIL") << ": " << violations
      << " margin(s) below " << g17(kMarginTol) << "\n";
  return violations == 0 ? 0 : 1;
}

int cmd_oracle_check(const OracleCheckArgs& args, std::ostream& out, std::ostream& err) {
  if (args.samples < 1 || args.restarts < 1) {
    err << "--samples and --restarts must be >= 1\n";
    return 2;
  }
  RoofConfig cfg;
  cfg.restarts = args.restarts;
  constexpr double kTol = 1e-3;

  double worst = 0.0;
  std::string worst_label;
  PureState worst_state(1, {cplx{1.0, 0.0}, cplx{0.0, 0.0}});
  bool have_worst = false;

  auto consider = [&](double dev, const std::string& label, const PureState& origin) {
    if (!have_worst || dev > worst) {
      worst = dev;
      worst_label = label;
      worst_state = origin;
      have_worst = true;
    }
  };

  // (a) Wootters closed form vs roof minimum on rank <= 2 two-qubit states
  // obtained by tracing one qubit of random 3-qubit pure states.
  double max_wootters_dev = 0.0;
  for (int s = 0; s < args.samples; ++s) {
    Rng rng(derive_seed(args.seed, static_cast<std::uint64_t>(s)));
    std::vector<cplx> amps(8);
    double n2 = 0.0;
    for (cplx& a : amps) {
      a = rng.complex_normal();
      n2 += std::norm(a);
    }
    const double inv = 1.0 / std::sqrt(n2);
    for (cplx& a : amps) a *= inv;
    const PureState purification(3, std::move(amps));
    const DensityOperator pair = reduce(purification, 0b011u);
    const double closed = concurrence_two_qubit(pair).value;
    RoofConfig local = cfg;
    local.rng_seed = derive_seed(args.seed, 1000ull + static_cast<std::uint64_t>(s));
    const double roof = roof_extremize(pair, Bipartition::one_vs_rest(2),
                                       Kernel::concurrence, Sense::minimize, local).value;
    const double dev = std::abs(roof - closed);
    max_wootters_dev = std::max(max_wootters_dev, dev);
    consider(dev, "wootters-vs-roof-min", purification);
  }
  out << "wootters vs roof-min concurrence: max deviation = " << g17(max_wootters_dev) << "\n";

  // (b) W-class pair equalities: roof max = roof min = 2|a||b_i| for both
  // kernels on every pair reduction.
  double max_pair_dev = 0.0;
  const int wclass_samples = std::max(1, args.samples / 10);
  for (int s = 0; s < wclass_samples; ++s) {
    const int n = 4 + s % 3;
    const WClassParams params = sample_wclass(n, derive_seed(args.seed, 5000ull + s));
    const PureState psi = make_wclass(params);
    for (int i = 1; i <= n - 1; ++i) {
      const DensityOperator pair = reduce(psi, 1u | (1u << i));
      const Bipartition split = Bipartition::one_vs_rest(2);
      for (Kernel kernel : {Kernel::concurrence, Kernel::negativity}) {
        const double closed = wclass_pair_value(params, i, kernel);
        RoofConfig local = cfg;
        local.rng_seed = derive_seed(args.seed, 9000ull + 16ull * s + i);
        const double lo = roof_extremize(pair, split, kernel, Sense::minimize, local).value;
        const double hi = roof_extremize(pair, split, kernel, Sense::maximize, local).value;
        const double dev =
            std::max({std::abs(hi - lo), std::abs(lo - closed), std::abs(hi - closed)});
        max_pair_dev = std::max(max_pair_dev, dev);
        consider(dev, "wclass-pair-equality", psi);
      }
    }
  }
  out << "wclass pair roof-max/roof-min/2|a||b_i|: max deviation = " << g17(max_pair_dev)
      << "\n";

  // (c) one-vs-rest closed form vs roof minimum on partial reductions.
  double max_rest_dev = 0.0;
  for (int s = 0; s < wclass_samples; ++s) {
    const int n = 4 + s % 2;
    const WClassParams params = sample_wclass(n, derive_seed(args.seed, 20000ull + s));
    const PureState psi = make_wclass(params);
    for (int size : {2, 3}) {
      if (size > n - 2) continue;  // keep the reduction a proper mixed state
      std::vector<int> subset;
      for (int j = 1; j <= size; ++j) subset.push_back(j);
      unsigned keep = 1u;
      for (int j : subset) keep |= 1u << j;
      const DensityOperator reduced = reduce(psi, keep);
      const Bipartition split = Bipartition::one_vs_rest(reduced.num_qubits());
      for (Kernel kernel : {Kernel::concurrence, Kernel::negativity}) {
        const double closed = wclass_one_vs_rest(params, subset, kernel);
        RoofConfig local = cfg;
        local.rng_seed = derive_seed(args.seed, 30000ull + 8ull * s + size);
        const double roof =
            roof_extremize(reduced, split, kernel, Sense::minimize, local).value;
        const double dev = std::abs(roof - closed);
        max_rest_dev = std::max(max_rest_dev, dev);
        consider(dev, "wclass-one-vs-rest", psi);
      }
    }
  }
  out << "wclass one-vs-rest closed form vs roof-min: max deviation = " << g17(max_rest_dev)
      << "\n";

  const double overall = std::max({max_wootters_dev, max_pair_dev, max_rest_dev});
  if (overall > kTol) {
    save_state(worst_state, args.dump_path);
    err << "FAIL: max deviation " << g17(overall) << " (" << worst_label << ") exceeds "
        << g17(kTol) << "; worst-case origin state written to " << args.dump_path << "\n";
    return 1;
  }
  out << "OK: all deviations within " << g17(kTol) << "\n";
  return 0;
}

}  // namespace cli

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"entanglement measures and monogamy-bound verification for W-class states"};
  app.set_version_flag("--version", std::string(cli::kVersion));
  app.require_subcommand(1);

  cli::ComputeArgs compute_args;
  CLI::App* compute = app.add_subcommand(
      "compute", "compute an entanglement measure of a state file");
  compute->add_option("state-file", compute_args.state_file, "input state file")->required();
  compute
      ->add_option("measure", compute_args.measure,
                   "concurrence|concurrence-assist|negativity|negativity-pure|cren|crenoa")
      ->required();
  compute->add_option("--side-a", compute_args.side_a, "qubits of side A (default: 0)");
  compute->add_option("--restarts", compute_args.restarts, "roof-optimizer restarts");
  compute->add_option("--seed", compute_args.seed, "roof-optimizer seed");
  compute->add_flag("--show-ensemble", compute_args.show_ensemble,
                    "print the realizing decomposition of roof values");

  cli::FigArgs fig1_args;
  CLI::App* fig1 = app.add_subcommand(
      "fig1", "CSV of the 4-qubit W-state assisted-concurrence bound curves");
  fig1->add_option("--out", fig1_args.out_path, "output CSV path")->required();
  fig1->add_option("--x-min", fig1_args.x_min, "grid start (>= 2)");
  fig1->add_option("--x-max", fig1_args.x_max, "grid end");
  fig1->add_option("--x-step", fig1_args.x_step, "grid step");

  cli::FigArgs fig2_args;
  CLI::App* fig2 = app.add_subcommand(
      "fig2", "CSV of the 5-qubit W-state assisted-negativity bound curves");
  fig2->add_option("--out", fig2_args.out_path, "output CSV path")->required();
  fig2->add_option("--x-min", fig2_args.x_min, "grid start (>= 2)");
  fig2->add_option("--x-max", fig2_args.x_max, "grid end");
  fig2->add_option("--x-step", fig2_args.x_step, "grid step");

  cli::VerifyArgs verify_args;
  CLI::App* verify = app.add_subcommand(
      "verify", "randomized monogamy-bound verification sweep over W-class states");
  verify->add_option("--seed", verify_args.seed, "sampling seed");
  verify->add_option("--samples", verify_args.samples, "number of sampled states");
  verify->add_option("--qubits", verify_args.qubits, "qubit counts to cycle through");
  verify->add_option("--x-min", verify_args.x_min, "grid start (>= 2)");
  verify->add_option("--x-max", verify_args.x_max, "grid end");
  verify->add_option("--x-step", verify_args.x_step, "grid step");
  verify->add_option("--x-list", verify_args.x_list, "explicit x values (overrides the grid)");
  verify->add_option("--family", verify_args.family, "concurrence|negativity|both");
  verify->add_option("--lhs-mode", verify_args.lhs_mode, "analytic|oracle|chain");
  verify->add_option("--restarts", verify_args.restarts, "roof restarts for oracle mode");
  verify->add_option("--oracle-samples", verify_args.oracle_samples,
                     "extra roof-oracle pass on this many N=4 instances");
  verify->add_option("--out", verify_args.out_path, "per-instance CSV path");

  cli::OracleCheckArgs oracle_args;
  CLI::App* oracle = app.add_subcommand(
      "oracle-check", "cross-check closed forms against the roof optimizer");
  oracle->add_option("--seed", oracle_args.seed, "sampling seed");
  oracle->add_option("--samples", oracle_args.samples, "sample count for each suite");
  oracle->add_option("--restarts", oracle_args.restarts, "roof restarts");
  oracle->add_option("--dump", oracle_args.dump_path, "worst-case dump path on failure");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << cli::kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }

  try {
    if (*compute) return cli::cmd_compute(compute_args, out, err);
    if (*fig1) return cli::cmd_fig1(fig1_args, err);
    if (*fig2) return cli::cmd_fig2(fig2_args, err);
    if (*verify) return cli::cmd_verify(verify_args, out, err);
    if (*oracle) return cli::cmd_oracle_check(oracle_args, out, err);
  } catch (const parse_error& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << "no subcommand given\n";
  return 2;
}

}  // namespace wmono
