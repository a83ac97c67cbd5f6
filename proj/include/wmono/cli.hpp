#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace wmono {

namespace cli {

struct ComputeArgs {
  std::string state_file;
  std::string measure;  // concurrence|concurrence-assist|negativity|negativity-pure|cren|crenoa
  std::vector<int> side_a = {0};
  int restarts = 200;
  std::uint64_t seed = 1;
  bool show_ensemble = false;
};

struct FigArgs {
  std::string out_path;
  double x_min = 2.0;
  double x_max = 10.0;
  double x_step = 0.1;
};

struct VerifyArgs {
  std::uint64_t seed = 42;
  int samples = 100;
  std::vector<int> qubits = {4, 5, 6};
  double x_min = 2.0;
  double x_max = 10.0;
  double x_step = 0.1;
  std::vector<double> x_list;  // overrides the uniform grid when non-empty
  std::string family = "both";
  std::string lhs_mode = "chain";
  int restarts = 200;
  int oracle_samples = 0;  // extra roof-oracle pass on this many N=4 instances
  std::string out_path;
};

struct OracleCheckArgs {
  std::uint64_t seed = 7;
  int samples = 100;
  int restarts = 200;
  std::string dump_path = "oracle-check-worst.state";
};

int cmd_compute(const ComputeArgs& args, std::ostream& out, std::ostream& err);
int cmd_fig1(const FigArgs& args, std::ostream& err);
int cmd_fig2(const FigArgs& args, std::ostream& err);
int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err);
int cmd_oracle_check(const OracleCheckArgs& args, std::ostream& out, std::ostream& err);

}  // namespace cli

// Exit codes: 0 success, 1 verification failure, 2 usage or input error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wmono
