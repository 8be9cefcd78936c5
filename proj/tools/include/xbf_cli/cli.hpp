#pragma once

#include "xbf/monte_carlo.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace xbf::cli {

enum class ExitCode : int {
  ok = 0,
  validation = 2,
  numerical = 3,
  suite_failure = 4,
};

enum class OutputFormat { csv, json };

struct CliConfig {
  std::string command;
  std::map<std::string, std::string> params;
  OutputFormat output = OutputFormat::csv;
  std::optional<std::string> output_path;
  std::optional<std::uint64_t> seed;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// lo:hi:n (linear, endpoints included) or log:lo:hi:n (geometric).
std::vector<double> parse_grid(const std::string &spec);

std::string to_csv(const Table &table);
std::string to_json(const Table &table);
std::string to_json(const std::vector<SuiteReport> &reports);

// Closed-form identities run by `verify --all` ahead of the simulation suites.
std::vector<SuiteReport> analytic_checks();

// Validates `config` and executes it, writing results to `out` (or the
// configured file) and a one-line reason to `err` on failure.
int run(const CliConfig &config, std::ostream &out, std::ostream &err);

// Parses argv (including --config JSON files) and calls run.
int main_entry(int argc, char **argv, std::ostream &out, std::ostream &err);

} // namespace xbf::cli
