#pragma once

// Plumbing shared by the subcommands: common flags, result tables, the run
// manifest and output writing.

#include <chrono>
#include <cstdint>
#include <deque>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "koranyi/serialize.hpp"

namespace koranyi::cli {

// Bad input detected after parsing. Exit code 2.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Common {
  std::uint64_t seed = 1;
  std::string out;            // output directory, empty = stdout only
  std::string format = "json";
  int threads = 0;            // 0 = KORANYI_THREADS
  std::string config;         // key = value file
};

// Formats with enough digits to round-trip.
std::string num(double x);
std::string num(long long x);
inline std::string num(int x) { return num(static_cast<long long>(x)); }
inline std::string num(std::size_t x) { return num(static_cast<long long>(x)); }
inline std::string num(bool b) { return b ? "1" : "0"; }

struct Table {
  std::string name;    // file stem under --out
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string csv() const;
};

struct Result {
  json summary;
  std::vector<Table> tables;
  std::vector<std::pair<std::string, GridField>> fields;  // written only with --out
  int status = 0;  // 0 ok, 1 checked property failed
};

struct Command {
  CLI::App* app = nullptr;
  Common common;
  std::function<Result(const Common&)> run;
};

using Registry = std::deque<Command>;

// Adds a subcommand with --seed, --out, --format, --threads and --config.
Command& add_command(CLI::App& app, Registry& reg, const std::string& name, const std::string& help);

// Runs the command, writes outputs and the manifest, prints to stdout.
int execute(const Command& cmd);

void add_core_commands(CLI::App& app, Registry& reg);
void add_spherical_commands(CLI::App& app, Registry& reg);
void add_maximal_commands(CLI::App& app, Registry& reg);

// "1,2.5,3" -> {1, 2.5, 3}
std::vector<double> parse_list(const std::string& s, const char* what);

}  // namespace koranyi::cli
