#include "interchange/cli.hpp"

#include "interchange/closed_form.hpp"
#include "interchange/oracle.hpp"
#include "interchange/rep_theory.hpp"
#include "interchange/simulator.hpp"
#include "interchange/transition.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <variant>

#ifndef INTERCHANGE_VERSION
#define INTERCHANGE_VERSION "dev"
#endif

namespace interchange::cli {

namespace {

using Cell = std::variant<std::monostate, long long, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, std::string>> metadata;
};

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_text(const Cell& cell) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{}, cell);
}

nlohmann::json to_json(const Cell& cell) {
  struct Visitor {
    nlohmann::json operator()(std::monostate) const { return nullptr; }
    nlohmann::json operator()(long long v) const { return v; }
    nlohmann::json operator()(double v) const { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(format_double(v)); }
    nlohmann::json operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{}, cell);
}

void write_table(const Table& table, Format format, std::ostream& os) {
  if (format == Format::csv) {
    for (const auto& [key, value] : table.metadata) os << "# " << key << ": " << value << '\n';
    for (std::size_t c = 0; c < table.columns.size(); ++c) os << (c ? "," : "") << table.columns[c];
    os << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << to_text(row[c]);
      os << '\n';
    }
    return;
  }
  nlohmann::ordered_json doc;
  for (const auto& [key, value] : table.metadata) doc["metadata"][key] = value;
  doc["rows"] = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t c = 0; c < row.size(); ++c) obj[table.columns[c]] = to_json(row[c]);
    doc["rows"].push_back(std::move(obj));
  }
  os << doc.dump(2) << '\n';
}

std::string join(const auto& values) {
  std::ostringstream os;
  bool first = true;
  for (const auto& v : values) {
    os << (first ? "" : ";") << v;
    first = false;
  }
  return os.str();
}

std::vector<std::pair<std::string, std::string>> provenance(const RunConfig& c) {
  std::vector<std::pair<std::string, std::string>> meta{
      {"command", c.command},
      {"version", version()},
  };
  auto opt = [](const auto& o) { return o ? format_double(static_cast<double>(*o)) : std::string("-"); };
  std::ostringstream cfg;
  cfg << "n=" << c.n << " k=" << (c.k ? std::to_string(*c.k) : "-") << " k_list=" << join(c.k_list)
      << " n_list=" << join(c.n_list) << " c_list=" << join(c.c_list) << " t=" << opt(c.t)
      << " t_min=" << opt(c.t_min) << " t_max=" << opt(c.t_max) << " t_points=" << c.t_points
      << " t_log=" << c.t_log << " reps=" << c.replicas << " seed=" << c.seed << " eps=" << format_double(c.epsilon)
      << " precision_bits=" << c.precision_bits << " big_c=" << opt(c.big_c)
      << " small_c=" << format_double(c.small_c) << " f_lo=" << format_double(c.f_lo)
      << " f_hi=" << format_double(c.f_hi) << " couple=" << c.couple;
  meta.emplace_back("config", cfg.str());
  return meta;
}

std::vector<double> log_grid(double lo, double hi, int points) {
  std::vector<double> out;
  for (int i = 0; i < points; ++i) out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1)));
  return out;
}

void require_n(const RunConfig& c, int min_n) {
  if (c.n < min_n) throw std::invalid_argument("--n must be >= " + std::to_string(min_n));
}

// ---------------------------------------------------------------------------

int cmd_exact(const RunConfig& c, Table& table) {
  require_n(c, 1);
  if (!c.k) throw std::invalid_argument("exact needs --k");
  table.columns = {"n", "k", "t", "x", "E_sk"};
  for (double t : time_grid(c)) {
    const auto p = closed_form::ModelParams::make(c.n, *c.k, t);
    table.rows.push_back({(long long)c.n, (long long)*c.k, t, p.x(), closed_form::expected_cycles(c.n, *c.k, t)});
  }
  return 0;
}

struct RouteCheck {
  std::string pair;
  double max_abs = 0.0;
  double max_rel = 0.0;
  double tolerance = 0.0;
  bool relative = false;

  void record(double a, double b) {
    const double diff = std::abs(a - b);
    max_abs = std::max(max_abs, diff);
    const double scale = std::max(std::abs(a), std::abs(b));
    if (scale > 0.0) max_rel = std::max(max_rel, diff / scale);
  }
  bool ok() const { return (relative ? max_rel : max_abs) <= tolerance; }
};

double spectral_value(const rep::CycleBasis& basis, double t, int bits) {
  if (bits > 0) return rep::spectral_sum(basis, t, bits).to_double();
  return rep::spectral_sum_adaptive(basis, t).to_double();
}

int cmd_verify(const RunConfig& c, Table& table) {
  require_n(c, 2);
  std::vector<int> ks;
  if (c.k) ks.push_back(*c.k);
  else for (int k = 1; k <= c.n; ++k) ks.push_back(k);

  const bool with_oracle = c.n <= oracle::kMaxOracleN;
  RouteCheck closed_vs_oracle{"closed_vs_oracle", 0, 0, 1e-8, false};
  RouteCheck spectral_vs_oracle{"spectral_vs_oracle", 0, 0, 1e-8, false};
  RouteCheck spectral_vs_closed{"spectral_vs_closed", 0, 0, with_oracle ? 1e-8 : 1e-10, !with_oracle};
  std::optional<oracle::ClassChain> chain;
  if (with_oracle) chain = oracle::build_class_chain(c.n);
  const bool explicit_grid = c.t || c.t_min || c.t_max;
  long long points = 0;

  for (int k : ks) {
    auto basis = rep::cycle_basis(c.n, k);
    if (c.corrupt && basis.terms.size() > 1) basis.terms[1].a = -basis.terms[1].a;
    std::vector<double> ts;
    if (explicit_grid) ts = time_grid(c);
    else if (with_oracle) ts = {0.05, 0.2, 1.0};
    else {
      const double tr = transition::reference_time(c.n, k);
      ts = log_grid(tr / 4.0, 4.0 * tr, 8);
    }
    for (double t : ts) {
      const double closed = closed_form::expected_cycles(c.n, k, t);
      const double spectral = spectral_value(basis, t, c.precision_bits);
      spectral_vs_closed.record(spectral, closed);
      if (chain) {
        const double brute = oracle::expected_cycles(*chain, k, t);
        closed_vs_oracle.record(closed, brute);
        spectral_vs_oracle.record(spectral, brute);
      }
      ++points;
    }
  }

  table.columns = {"route_pair", "n", "points", "max_abs_err", "max_rel_err", "tolerance", "tolerance_kind", "status"};
  bool all_ok = true;
  std::vector<const RouteCheck*> checks{&spectral_vs_closed};
  if (with_oracle) checks = {&closed_vs_oracle, &spectral_vs_oracle, &spectral_vs_closed};
  for (const RouteCheck* check : checks) {
    all_ok = all_ok && check->ok();
    table.rows.push_back({check->pair, (long long)c.n, points, check->max_abs, check->max_rel, check->tolerance,
                          std::string(check->relative ? "relative" : "absolute"),
                          std::string(check->ok() ? "pass" : "FAIL")});
  }
  return all_ok ? 0 : 1;
}

int cmd_figure1(const RunConfig& c, Table& table) {
  const int n = c.n > 0 ? c.n : 200;
  const int k = c.k.value_or(100);
  RunConfig grid = c;
  if (!c.t && !c.t_min && !c.t_max) {
    grid.t_min = 0.0;
    grid.t_max = 3.0;
    grid.t_points = c.t_points >= 2 ? c.t_points : 301;
  }
  const double nd = n, kd = k;
  if (k < n) table.metadata.emplace_back("jump_at_t", format_double(n * transition::critical_time(n, k)));
  table.columns = {"t", "x", "E_sk", "scaled_E", "step_normalized", "giant"};
  for (double t : time_grid(grid)) {
    const double time = t / n;
    const double e = closed_form::expected_cycles(n, k, time);
    const double giant = t > 1.0 ? closed_form::giant_component_theta(t) : 0.0;
    table.rows.push_back({t, std::exp(-kd * time), e, nd * nd / kd * e, kd * kd / nd * e, giant});
  }
  return 0;
}

int cmd_simulate(const RunConfig& c, Table& table) {
  require_n(c, 1);
  sim::MonteCarloConfig mc;
  mc.n = c.n;
  mc.k_list = c.k_list.empty() ? std::vector<int>{1, 2} : c.k_list;
  mc.epsilon = c.epsilon;
  mc.replicas = c.replicas > 0 ? c.replicas : 1000;
  mc.base_seed = c.seed;
  mc.couple_graph = c.couple;
  mc.threads = c.threads;

  table.columns = {"n", "t", "quantity", "mean", "std_error", "closed_form", "replicas", "seed"};
  for (double t : time_grid(c)) {
    mc.t = t;
    const auto result = sim::monte_carlo(mc);
    const double distance = closed_form::expected_distance(c.n, t);
    for (const auto& [name, est] : result.estimates) {
      Cell expected;
      if (name.starts_with("s_")) expected = closed_form::expected_cycles(c.n, std::stoi(name.substr(2)), t);
      else if (name == "d") expected = distance;
      else if (name == "N") expected = c.n - distance;
      else if (name == "events") expected = t * 0.5 * c.n * (c.n - 1.0);
      table.rows.push_back({(long long)c.n, t, name, est.mean, est.std_error, expected, (long long)est.replicas,
                            std::to_string(est.base_seed)});
    }
  }
  return 0;
}

int cmd_transition(const RunConfig& c, Table& table) {
  std::vector<int> ns = c.n_list;
  if (ns.empty() && c.n > 0) ns.push_back(c.n);
  if (ns.empty()) ns = {200, 400, 800};
  const int points = c.t_points >= 2 ? c.t_points : 200;

  table.columns = {"n", "k", "t_crit", "t_lo", "t_hi", "width", "width_n32", "q", "small_c", "fitted_big_c",
                   "b1_constant", "envelope_ok"};
  bool all_ok = true;
  for (int n : ns) {
    const int k = c.k.value_or(n / 2);
    const auto params = transition::TransitionParams::make(n, k);
    const auto profile = transition::measure_window(n, k, c.f_lo, c.f_hi);
    const auto ts = transition::envelope_grid(n, k, points);
    const double fitted = transition::fit_envelope_constant(n, k, ts, c.small_c);
    std::vector<double> xs;
    for (double t : ts) xs.push_back(std::exp(-k * t));
    const double b1 = transition::fit_b1_constant(n, k, xs);
    Cell ok;
    if (c.big_c) {
      const bool holds = fitted <= *c.big_c;
      all_ok = all_ok && holds;
      ok = std::string(holds ? "yes" : "no");
    }
    table.rows.push_back({(long long)n, (long long)k, params.t_crit, profile.crossings.at(c.f_lo),
                          profile.crossings.at(c.f_hi), profile.width, profile.width * std::pow(n, 1.5), params.q,
                          c.small_c, fitted, b1, ok});
  }
  return all_ok ? 0 : 1;
}

int cmd_slowdown(const RunConfig& c, Table& table) {
  const int n = c.n > 0 ? c.n : 3000;
  std::vector<double> cs = c.c_list;
  if (cs.empty()) for (int i = 1; i <= 12; ++i) cs.push_back(0.25 * i);
  const int reps = c.replicas;  // 0 skips the simulation columns

  table.columns = {"c", "u_c", "c_half", "d_over_n_closed", "d_over_n_mc", "d_over_n_mc_se", "replicas", "seed"};
  for (double cv : cs) {
    const double u = closed_form::slowdown_u(cv, 1e-10);
    const double closed = closed_form::expected_distance(n, cv / n) / n;
    Cell mc_mean, mc_se;
    if (reps >= 2) {
      sim::MonteCarloConfig mc;
      mc.n = n;
      mc.t = cv / n;
      mc.replicas = reps;
      mc.base_seed = c.seed;
      mc.threads = c.threads;
      const auto est = sim::monte_carlo(mc).at("d");
      mc_mean = est.mean / n;
      mc_se = est.std_error / n;
    }
    table.rows.push_back({cv, u, cv / 2.0, closed, mc_mean, mc_se, (long long)reps, std::to_string(c.seed)});
  }
  return 0;
}

}  // namespace

std::string version() { return INTERCHANGE_VERSION; }

std::vector<double> time_grid(const RunConfig& c) {
  if (c.t) {
    if (!(*c.t >= 0.0)) throw std::invalid_argument("--t must be >= 0");
    return {*c.t};
  }
  if (!c.t_min || !c.t_max) throw std::invalid_argument("give --t or both --t-min and --t-max");
  if (!(*c.t_min < *c.t_max)) throw std::invalid_argument("--t-min must be < --t-max");
  if (*c.t_min < 0.0) throw std::invalid_argument("--t-min must be >= 0");
  const int points = c.t_points == 0 ? 2 : c.t_points;
  if (points < 2) throw std::invalid_argument("--t-points must be >= 2");
  if (c.t_log) {
    if (!(*c.t_min > 0.0)) throw std::invalid_argument("--t-log needs --t-min > 0");
    return log_grid(*c.t_min, *c.t_max, points);
  }
  std::vector<double> out;
  for (int i = 0; i < points; ++i) out.push_back(*c.t_min + (*c.t_max - *c.t_min) * i / (points - 1));
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cycle statistics of the interchange process on the complete graph", "interchange"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1, 1);

  RunConfig c;
  std::string format = "csv";
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--n", c.n, "Number of points");
    sub->add_option("--k", c.k, "Cycle size");
    sub->add_option("--k-list", c.k_list, "Cycle sizes (comma separated)")->delimiter(',');
    sub->add_option("--t", c.t, "Single time");
    sub->add_option("--t-min", c.t_min, "Grid start");
    sub->add_option("--t-max", c.t_max, "Grid end");
    sub->add_option("--t-points", c.t_points, "Grid points");
    sub->add_flag("--t-log", c.t_log, "Logarithmic grid");
    sub->add_option("--reps", c.replicas, "Monte Carlo replicas");
    sub->add_option("--seed", c.seed, "Base seed");
    sub->add_option("--eps", c.epsilon, "Large-cycle threshold fraction");
    sub->add_option("--precision-bits", c.precision_bits, "Spectral working precision (0: adaptive)");
    sub->add_option("--big-c", c.big_c, "Envelope constant C to check");
    sub->add_option("--small-c", c.small_c, "Envelope exponent constant c");
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", c.out_path, "Output path (default: stdout)");
    sub->add_option("--threads", c.threads, "Worker threads (default: INTERCHANGE_THREADS or all cores)");
  };

  auto* exact = app.add_subcommand("exact", "Closed-form E(s_k(t)) over a time grid");
  auto* verify = app.add_subcommand("verify", "Cross-check closed form, spectral sum and class-chain oracle");
  auto* figure1 = app.add_subcommand("figure1", "Scaled E(s_k(c/n)) and giant component fraction vs c");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo cycle statistics");
  auto* trans = app.add_subcommand("transition", "Critical time, window width and envelope constants");
  auto* slowdown = app.add_subcommand("slowdown", "Slowdown curve u(c) vs the finite-n distance");
  for (auto* sub : {exact, verify, figure1, simulate, trans, slowdown}) add_common(sub);
  verify->add_flag("--corrupt", c.corrupt, "Self-test: flip the sign of one spectral coefficient");
  simulate->add_flag("--couple", c.couple, "Track the coupled random graph");
  trans->add_option("--n-list", c.n_list, "Sizes (comma separated)")->delimiter(',');
  trans->add_option("--f-lo", c.f_lo, "Lower crossing fraction of 1/k");
  trans->add_option("--f-hi", c.f_hi, "Upper crossing fraction of 1/k");
  slowdown->add_option("--c-list", c.c_list, "Values of c (comma separated)")->delimiter(',');

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  c.format = format == "json" ? Format::json : Format::csv;
  c.command = app.get_subcommands().front()->get_name();

  Table table;
  int status = 0;
  try {
    if (c.command == "exact") status = cmd_exact(c, table);
    else if (c.command == "verify") status = cmd_verify(c, table);
    else if (c.command == "figure1") status = cmd_figure1(c, table);
    else if (c.command == "simulate") status = cmd_simulate(c, table);
    else if (c.command == "transition") status = cmd_transition(c, table);
    else status = cmd_slowdown(c, table);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  auto meta = provenance(c);
  meta.insert(meta.end(), table.metadata.begin(), table.metadata.end());
  table.metadata = std::move(meta);

  if (c.out_path.empty()) {
    write_table(table, c.format, out);
  } else {
    std::ofstream file(c.out_path, std::ios::binary);
    if (!file) {
      err << "error: cannot open " << c.out_path << '\n';
      return 2;
    }
    write_table(table, c.format, file);
  }
  return status;
}

}  // namespace interchange::cli
