#include "xbf_cli/cli.hpp"

#include "xbf/errors.hpp"
#include "xbf/fixed_time.hpp"
#include "xbf/hartman_watson.hpp"
#include "xbf/moments.hpp"
#include "xbf/random_laws.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>

namespace xbf::cli {
namespace {

using nlohmann::json;

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_number(const std::string &key, const std::string &text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception &) {
    throw ConfigurationError("--" + key + ": not a number: " + text);
  }
  if (used != text.size() || !std::isfinite(v)) {
    throw ConfigurationError("--" + key + ": not a finite number: " + text);
  }
  return v;
}

long long parse_integer(const std::string &key, const std::string &text) {
  const double v = parse_number(key, text);
  if (v != std::floor(v) || std::abs(v) > 9e15) {
    throw ConfigurationError("--" + key + ": not an integer: " + text);
  }
  return static_cast<long long>(v);
}

class Params {
public:
  explicit Params(const std::map<std::string, std::string> &values) : values_(values) {}

  void require(const std::vector<std::string> &keys) const {
    for (const auto &k : keys) {
      if (values_.find(k) == values_.end()) {
        throw ConfigurationError("missing required option --" + k);
      }
    }
  }
  bool has(const std::string &key) const { return values_.count(key) != 0; }
  const std::string &text(const std::string &key) const {
    require({key});
    return values_.at(key);
  }
  std::string text_or(const std::string &key, const std::string &fallback) const {
    return has(key) ? values_.at(key) : fallback;
  }
  double number(const std::string &key) const { return parse_number(key, text(key)); }
  double number_or(const std::string &key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }
  long long integer(const std::string &key) const { return parse_integer(key, text(key)); }
  long long integer_or(const std::string &key, long long fallback) const {
    return has(key) ? integer(key) : fallback;
  }
  std::vector<double> grid() const { return parse_grid(text("grid")); }

private:
  const std::map<std::string, std::string> &values_;
};

// Splits a comma-separated list of integers.
std::vector<long long> parse_list(const std::string &key, const std::string &text) {
  std::vector<long long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(parse_integer(key, item));
  }
  if (out.empty()) {
    throw ConfigurationError("--" + key + ": empty list");
  }
  return out;
}

template <class E>
E pick(const std::string &key, const std::string &value,
       const std::vector<std::pair<std::string, E>> &choices) {
  for (const auto &[name, e] : choices) {
    if (name == value) {
      return e;
    }
  }
  std::string names;
  for (const auto &[name, e] : choices) {
    names += (names.empty() ? "" : "|") + name;
  }
  throw ConfigurationError("--" + key + ": expected one of " + names + ", got " + value);
}

Table cmd_theta(const Params &p) {
  p.require({"t", "grid"});
  const double t = p.number("t");
  ThetaEngine engine;
  engine.method = pick<ThetaMethod>("method", p.text_or("method", "automatic"),
                                    {{"automatic", ThetaMethod::automatic},
                                     {"oscillatory", ThetaMethod::oscillatory},
                                     {"contour", ThetaMethod::contour}});
  Table table{{"r", "theta"}, {}};
  for (double r : p.grid()) {
    table.rows.push_back({r, theta(HwQuery{r, t}, engine).value});
  }
  return table;
}

Table cmd_density(const Params &p) {
  p.require({"mu", "t", "grid"});
  const LawQuery q{p.number("mu"), p.number("t")};
  const auto method = pick<DensityMethod>(
      "method", p.text_or("method", "reciprocal"),
      {{"reciprocal", DensityMethod::reciprocal}, {"contour", DensityMethod::contour}});
  Table table{{"u", "density"}, {}};
  for (double u : p.grid()) {
    table.rows.push_back({u, density_of_A(q, u, method).value});
  }
  return table;
}

Table cmd_joint(const Params &p) {
  p.require({"mu", "t", "x", "grid"});
  const LawQuery q{p.number("mu"), p.number("t")};
  const double x = p.number("x");
  Table table{{"u", "density"}, {}};
  for (double u : p.grid()) {
    table.rows.push_back({u, joint_density(q, u, x).value});
  }
  return table;
}

Table cmd_moments(const Params &p) {
  p.require({"mu", "t"});
  const double mu = p.number("mu");
  const double t = p.number("t");
  if (p.has("n") == p.has("p")) {
    throw ConfigurationError("moments needs exactly one of --n or --p");
  }
  if (p.has("n")) {
    Table table{{"n", "moment"}, {}};
    for (long long n : parse_list("n", p.text("n"))) {
      if (n < 0 || n > 1000) {
        throw DomainError("--n must lie in [0, 1000]");
      }
      const MomentQuery q{mu, t, static_cast<int>(n), 0.0};
      table.rows.push_back({static_cast<double>(n), moment_exact(q)});
    }
    return table;
  }
  const double order = p.number("p");
  const MomentQuery q{mu, t, 0, order};
  return Table{{"p", "moment"}, {{order, negative_moment(q).value}}};
}

Table cmd_laplace(const Params &p) {
  p.require({"mu", "t", "grid"});
  const LawQuery q{p.number("mu"), p.number("t")};
  const auto method = pick<LaplaceMethod>(
      "method", p.text_or("method", "density_quadrature"),
      {{"density_quadrature", LaplaceMethod::density_quadrature},
       {"bougerol_cos", LaplaceMethod::bougerol_cos},
       {"plancherel", LaplaceMethod::plancherel}});
  Table table{{"alpha", "laplace"}, {}};
  for (double alpha : p.grid()) {
    table.rows.push_back({alpha, laplace_of_A(q, alpha, method).value});
  }
  return table;
}

Table cmd_hfunc(const Params &p) {
  p.require({"mu", "r", "t", "grid"});
  const double mu = p.number("mu");
  const double r = p.number("r");
  const double t = p.number("t");
  const auto method = pick<HMethod>(
      "method", p.text_or("method", "closed"),
      {{"closed", HMethod::closed}, {"moment_quadrature", HMethod::moment_quadrature}});
  Table table{{"s", "h"}, {}};
  for (double s : p.grid()) {
    table.rows.push_back({s, h_function(HFunctionQuery{mu, r, s, t}, method)});
  }
  return table;
}

Table cmd_gig(const Params &p) {
  p.require({"order", "a", "b", "grid"});
  const GigParams g{p.number("order"), p.number("a"), p.number("b")};
  Table table{{"x", "density", "cdf"}, {}};
  for (double x : p.grid()) {
    table.rows.push_back({x, gig_density(g, x), gig_cdf(g, x)});
  }
  return table;
}

Table cmd_sample(const Params &p, std::uint64_t seed) {
  p.require({"law", "count"});
  const long long count = p.integer("count");
  if (count < 1 || count > 100000000) {
    throw DomainError("--count must lie in [1, 1e8]");
  }
  const auto n = static_cast<std::size_t>(count);
  const std::string law = p.text("law");
  std::vector<double> values;
  if (law == "exp_time") {
    p.require({"mu", "lambda"});
    values = exp_time_sample(ExpTimeParams{p.number("mu"), p.number("lambda")}, n, seed);
  } else if (law == "gig") {
    p.require({"order", "a", "b"});
    values = gig_sample(GigParams{p.number("order"), p.number("a"), p.number("b")}, n, seed);
  } else if (law == "limit_gibbs") {
    p.require({"mu", "alpha", "t"});
    values = limit_law_sample(LimitLaw{LimitKind::gibbs, p.number("mu"), p.number("alpha")},
                              p.number("t"), n, seed,
                              static_cast<std::size_t>(p.integer_or("steps", 256)));
  } else if (law == "limit_moment") {
    p.require({"mu", "m", "t"});
    values = limit_law_sample(
        LimitLaw{LimitKind::moment_density, p.number("mu"), p.number("m")}, p.number("t"), n,
        seed, static_cast<std::size_t>(p.integer_or("steps", 256)));
  } else {
    throw ConfigurationError("--law: expected exp_time|gig|limit_gibbs|limit_moment, got " +
                             law);
  }
  Table table{{"sample"}, {}};
  table.rows.reserve(values.size());
  for (double v : values) {
    table.rows.push_back({v});
  }
  return table;
}

Table cmd_limits(const Params &p) {
  p.require({"kind", "grid"});
  const std::string kind = p.text("kind");
  Table table{{"t", "scaled", "constant"}, {}};
  if (kind == "laplace") {
    p.require({"mu", "alpha"});
    const double mu = p.number("mu");
    const double alpha = p.number("alpha");
    const double constant = laplace_constant(mu, alpha);
    for (double t : p.grid()) {
      // E[exp(-alpha A_t)] = E[exp(-(sqrt(2 alpha))^2 A_t / 2)].
      const double v = laplace_of_A(LawQuery{mu, t}, std::sqrt(2.0 * alpha),
                                    LaplaceMethod::density_quadrature)
                           .value;
      table.rows.push_back({t, laplace_scale(mu, t) * v, constant});
    }
  } else if (kind == "density") {
    p.require({"u"});
    const double u = p.number("u");
    const double constant = std::exp(-0.5 / u) / u;
    for (double t : p.grid()) {
      const double v = density_of_A(LawQuery{0.0, t}, u).value;
      table.rows.push_back({t, std::sqrt(2.0 * std::numbers::pi * t) * v, constant});
    }
  } else if (kind == "regime") {
    p.require({"mu", "m"});
    const double mu = p.number("mu");
    const double m = p.number("m");
    const double a = p.number_or("a", 1.0);
    const double xi = p.number_or("xi", 1.0);
    const RegimeKey key{mu, m, classify_regime(mu, m)};
    const double constant = regime_constant(key, a, xi);
    for (double t : p.grid()) {
      const double v = delta_general(mu, m, a, xi, t).value;
      table.rows.push_back({t, regime_scale(key, t) * v, constant});
    }
  } else {
    throw ConfigurationError("--kind: expected laplace|density|regime, got " + kind);
  }
  return table;
}

SimConfig suite_config(const Params &p, Suite suite, std::optional<std::uint64_t> seed) {
  SimConfig cfg = default_config(suite);
  if (p.has("paths")) {
    const long long v = p.integer("paths");
    if (v < 20) {
      throw DomainError("--paths must be at least 20");
    }
    cfg.n_paths = static_cast<std::size_t>(v);
  }
  if (p.has("steps")) {
    const long long v = p.integer("steps");
    if (v < 2) {
      throw DomainError("--steps must be at least 2");
    }
    cfg.n_steps = static_cast<std::size_t>(v);
  }
  if (seed) {
    cfg.seed = *seed;
  }
  cfg.scheme = pick<SimConfig::Scheme>(
      "scheme", p.text_or("scheme", "trapezoid"),
      {{"trapezoid", SimConfig::Scheme::trapezoid},
       {"left_point", SimConfig::Scheme::left_point}});
  return cfg;
}

std::vector<SuiteReport> cmd_verify(const Params &p, std::optional<std::uint64_t> seed) {
  const bool all = p.text_or("all", "false") == "true";
  if (all == p.has("suite")) {
    throw ConfigurationError("verify needs exactly one of --suite or --all");
  }
  if (!all) {
    const Suite suite = parse_suite(p.text("suite"));
    return {identity_suite(suite, suite_config(p, suite, seed))};
  }
  std::vector<SuiteReport> reports = analytic_checks();
  for (const auto &r : reports) {
    if (r.verdict == Verdict::fail) {
      return reports;
    }
  }
  for (Suite suite : all_suites()) {
    reports.push_back(identity_suite(suite, suite_config(p, suite, seed)));
  }
  return reports;
}

json report_json(const SuiteReport &r) {
  json j;
  j["suite"] = r.suite;
  j["statistic"] = r.statistic;
  j["threshold"] = r.threshold;
  j["p_value"] = r.p_value ? json(*r.p_value) : json(nullptr);
  j["ess"] = r.ess ? json(*r.ess) : json(nullptr);
  j["verdict"] = to_string(r.verdict);
  j["seed"] = r.seed;
  return j;
}

std::string single_line(std::string text) {
  for (char &c : text) {
    if (c == '\n' || c == '\r') {
      c = ' ';
    }
  }
  return text;
}

int fail(std::ostream &err, ExitCode code, const std::string &kind, const std::string &what) {
  err << "error: " << kind << ": " << single_line(what) << '\n';
  return static_cast<int>(code);
}

const std::set<std::string> &known_commands() {
  static const std::set<std::string> names{"theta", "density", "joint", "moments", "laplace",
                                           "hfunc", "gig",     "sample", "verify", "limits"};
  return names;
}

} // namespace

std::vector<double> parse_grid(const std::string &spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) {
    parts.push_back(item);
  }
  const bool geometric = !parts.empty() && parts[0] == "log";
  if (geometric) {
    parts.erase(parts.begin());
  }
  if (parts.size() != 3) {
    throw ConfigurationError("--grid: expected lo:hi:n or log:lo:hi:n, got " + spec);
  }
  const double lo = parse_number("grid", parts[0]);
  const double hi = parse_number("grid", parts[1]);
  const long long n = parse_integer("grid", parts[2]);
  if (n < 1 || n > 10000000) {
    throw ConfigurationError("--grid: point count must lie in [1, 1e7]");
  }
  if (n > 1 && !(hi > lo)) {
    throw ConfigurationError("--grid: needs hi > lo");
  }
  if (geometric && !(lo > 0.0)) {
    throw ConfigurationError("--grid: geometric grids need lo > 0");
  }
  std::vector<double> out(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) {
    const double f = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    out[static_cast<std::size_t>(i)] =
        geometric ? std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo)))
                  : lo + f * (hi - lo);
  }
  out.back() = n == 1 ? lo : hi;
  return out;
}

std::string to_csv(const Table &table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out += (i ? "," : "") + table.columns[i];
  }
  out += '\n';
  for (const auto &row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) {
        out += ',';
      }
      out += format_number(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Table &table) {
  json j;
  j["columns"] = table.columns;
  j["rows"] = table.rows;
  return j.dump(2) + "\n";
}

std::string to_json(const std::vector<SuiteReport> &reports) {
  json arr = json::array();
  for (const auto &r : reports) {
    arr.push_back(report_json(r));
  }
  return (reports.size() == 1 ? arr[0] : arr).dump(2) + "\n";
}

int run(const CliConfig &config, std::ostream &out, std::ostream &err) {
  try {
    if (known_commands().count(config.command) == 0) {
      throw ConfigurationError("unknown command: " + config.command);
    }
    const Params p(config.params);
    const std::uint64_t seed = config.seed.value_or(1);
    std::string text;
    int code = static_cast<int>(ExitCode::ok);
    if (config.command == "verify") {
      const auto reports = cmd_verify(p, config.seed);
      for (const auto &r : reports) {
        if (r.verdict == Verdict::fail) {
          code = static_cast<int>(ExitCode::suite_failure);
        }
      }
      text = to_json(reports);
    } else {
      Table table;
      const std::string &c = config.command;
      if (c == "theta") {
        table = cmd_theta(p);
      } else if (c == "density") {
        table = cmd_density(p);
      } else if (c == "joint") {
        table = cmd_joint(p);
      } else if (c == "moments") {
        table = cmd_moments(p);
      } else if (c == "laplace") {
        table = cmd_laplace(p);
      } else if (c == "hfunc") {
        table = cmd_hfunc(p);
      } else if (c == "gig") {
        table = cmd_gig(p);
      } else if (c == "sample") {
        table = cmd_sample(p, seed);
      } else {
        table = cmd_limits(p);
      }
      text = config.output == OutputFormat::json ? to_json(table) : to_csv(table);
    }
    if (config.output_path) {
      std::ofstream file(*config.output_path, std::ios::binary);
      if (!file) {
        throw ConfigurationError("cannot open output file " + *config.output_path);
      }
      file << text;
    } else {
      out << text;
    }
    if (code == static_cast<int>(ExitCode::suite_failure)) {
      err << "error: suite_failure: at least one suite failed\n";
    }
    return code;
  } catch (const NumericalFailure &e) {
    return fail(err, ExitCode::numerical, to_string(e.kind()), e.what());
  } catch (const Error &e) {
    return fail(err, ExitCode::validation, to_string(e.kind()), e.what());
  } catch (const std::exception &e) {
    return fail(err, ExitCode::numerical, "internal", e.what());
  }
}

int main_entry(int argc, char **argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"Exponential functionals of Brownian motion: tables, samples and checks"};
  app.require_subcommand(1);

  CliConfig config;
  std::string output = "csv";
  std::string out_path;
  long long seed = -1;
  std::string config_path;

  struct Flag {
    const char *name;
    const char *help;
  };
  const std::map<std::string, std::vector<Flag>> flags{
      {"theta", {{"t", "time"}, {"grid", "r grid"}, {"method", "automatic|oscillatory|contour"}}},
      {"density",
       {{"mu", "drift"}, {"t", "time"}, {"grid", "u grid"}, {"method", "reciprocal|contour"}}},
      {"joint", {{"mu", "drift"}, {"t", "time"}, {"x", "value of B_t"}, {"grid", "u grid"}}},
      {"moments",
       {{"mu", "drift"}, {"t", "time"}, {"n", "positive orders, comma separated"},
        {"p", "negative order"}}},
      {"laplace",
       {{"mu", "drift"}, {"t", "time"}, {"grid", "alpha grid"},
        {"method", "density_quadrature|bougerol_cos|plancherel"}}},
      {"hfunc",
       {{"mu", "drift"}, {"r", "order r"}, {"t", "time"}, {"grid", "s grid (s <= 0)"},
        {"method", "closed|moment_quadrature"}}},
      {"gig", {{"order", "GIG order"}, {"a", "GIG a"}, {"b", "GIG b"}, {"grid", "x grid"}}},
      {"sample",
       {{"law", "exp_time|gig|limit_gibbs|limit_moment"}, {"count", "sample size"},
        {"mu", "drift"}, {"lambda", "exponential rate"}, {"order", "GIG order"},
        {"a", "GIG a"}, {"b", "GIG b"}, {"alpha", "Gibbs alpha"}, {"m", "moment order"},
        {"t", "time"}, {"steps", "grid steps"}}},
      {"verify",
       {{"suite", "suite name"}, {"paths", "paths per attempt"}, {"steps", "grid steps"},
        {"scheme", "trapezoid|left_point"}}},
      {"limits",
       {{"kind", "laplace|density|regime"}, {"mu", "drift"}, {"alpha", "Gibbs alpha"},
        {"m", "moment order"}, {"a", "shift a"}, {"xi", "scale xi"}, {"u", "density point"},
        {"grid", "t grid"}}},
  };

  std::map<std::string, std::map<std::string, std::string>> raw;
  std::map<std::string, bool> verify_all;
  for (const auto &[name, list] : flags) {
    CLI::App *sub = app.add_subcommand(name, name + " command");
    for (const Flag &f : list) {
      sub->add_option(std::string("--") + f.name, raw[name][f.name], f.help);
    }
    if (name == "verify") {
      sub->add_flag("--all", verify_all[name], "analytic checks, then every suite");
    }
    sub->add_option("--output", output, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", out_path, "output file");
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--config", config_path, "JSON file of option values");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError &e) {
    return fail(err, ExitCode::validation, "parse", e.what());
  }

  for (CLI::App *sub : app.get_subcommands()) {
    config.command = sub->get_name();
    for (const auto &[key, value] : raw[config.command]) {
      if (sub->count("--" + key) > 0) {
        config.params[key] = value;
      }
    }
    if (verify_all[config.command]) {
      config.params["all"] = "true";
    }
    try {
      if (sub->count("--seed") > 0 && seed < 0) {
        throw ConfigurationError("--seed must be nonnegative");
      }
      if (!config_path.empty()) {
        std::ifstream file(config_path);
        if (!file) {
          throw ConfigurationError("cannot read config file " + config_path);
        }
        json j;
        try {
          j = json::parse(file);
        } catch (const json::exception &e) {
          throw ConfigurationError(std::string("config file: ") + e.what());
        }
        if (!j.is_object()) {
          throw ConfigurationError("config file must hold a JSON object");
        }
        // Command-line values take precedence over the file.
        for (const auto &[key, value] : j.items()) {
          if (key == "seed" && seed < 0) {
            if (!value.is_number_integer() || value.get<long long>() < 0) {
              throw ConfigurationError("config seed must be a nonnegative integer");
            }
            seed = value.get<long long>();
            continue;
          }
          if (key == "output" && sub->count("--output") == 0) {
            output = value.get<std::string>();
            continue;
          }
          if (config.params.count(key)) {
            continue;
          }
          if (value.is_string()) {
            config.params[key] = value.get<std::string>();
          } else if (value.is_boolean()) {
            config.params[key] = value.get<bool>() ? "true" : "false";
          } else if (value.is_number()) {
            config.params[key] = value.is_number_integer()
                                     ? std::to_string(value.get<long long>())
                                     : format_number(value.get<double>());
          } else {
            throw ConfigurationError("config value for " + key + " must be a scalar");
          }
        }
      }
      if (output != "csv" && output != "json") {
        throw ConfigurationError("--output: expected csv|json");
      }
    } catch (const Error &e) {
      return fail(err, ExitCode::validation, to_string(e.kind()), e.what());
    }
  }
  config.output = output == "json" ? OutputFormat::json : OutputFormat::csv;
  if (!out_path.empty()) {
    config.output_path = out_path;
  }
  if (seed >= 0) {
    config.seed = static_cast<std::uint64_t>(seed);
  }
  return run(config, out, err);
}

} // namespace xbf::cli
