#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace interchange::cli {

std::string version();

enum class Format { csv, json };

/// Parsed options shared by all subcommands; each command reads what it needs.
struct RunConfig {
  std::string command;
  int n = 0;
  std::optional<int> k;
  std::vector<int> k_list;
  std::vector<int> n_list;
  std::vector<double> c_list;
  std::optional<double> t;
  std::optional<double> t_min, t_max;
  int t_points = 0;
  bool t_log = false;
  int replicas = 0;
  std::uint64_t seed = 1;
  double epsilon = 0.1;
  int precision_bits = 0;  // 0: adaptive
  std::optional<double> big_c;
  double small_c = 0.125;
  double f_lo = 0.25, f_hi = 0.75;
  bool couple = false;
  bool corrupt = false;  // verify self-test: flips one spectral coefficient
  int threads = 0;
  Format format = Format::csv;
  std::string out_path;
};

/// Time grid from --t or --t-min/--t-max/--t-points[/--t-log]; throws std::invalid_argument.
std::vector<double> time_grid(const RunConfig& config);

/// Parses argv-style arguments (without the program name), runs one
/// subcommand and writes its table to `out` (or --out). Returns the exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace interchange::cli
