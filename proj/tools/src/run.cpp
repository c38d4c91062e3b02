#include "run.hpp"

#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "koranyi/parallel.hpp"

#ifndef KORANYI_VERSION
#define KORANYI_VERSION "unknown"
#endif

namespace koranyi::cli {

namespace fs = std::filesystem;

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string num(long long x) { return std::to_string(x); }

std::string Table::csv() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << "\n";
  }
  return os.str();
}

std::vector<double> parse_list(const std::string& s, const char* what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string(what) + ": cannot parse '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError(std::string(what) + ": empty list");
  return out;
}

Command& add_command(CLI::App& app, Registry& reg, const std::string& name, const std::string& help) {
  reg.emplace_back();
  Command& c = reg.back();
  c.app = app.add_subcommand(name, help);
  c.app->option_defaults()->always_capture_default();
  c.app->add_option("--config", c.common.config, "key = value file; flags given on the command line win");
  c.app->add_option("--seed", c.common.seed, "random seed")->capture_default_str();
  c.app->add_option("--out", c.common.out, "output directory (summary, tables, manifest)");
  c.app->add_option("--format", c.common.format, "stdout format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  c.app->add_option("--threads", c.common.threads, "worker threads, 0 = KORANYI_THREADS")
      ->check(CLI::Range(0, 256));
  return c;
}

namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json parameter_map(const CLI::App& app) {
  json p = json::object();
  for (const CLI::Option* o : app.get_options()) {
    const std::string name = o->get_single_name();
    if (name.empty() || name == "help") continue;
    if (o->count() > 0) {
      const auto& r = o->results();
      p[name] = r.size() == 1 ? json(r.front()) : json(r);
    } else if (!o->get_default_str().empty()) {
      p[name] = o->get_default_str();
    }
  }
  return p;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Fills options not given on the command line from the config file.
void apply_config(const Command& cmd) {
  std::ifstream f(cmd.common.config);
  if (!f) throw UsageError("cannot read config " + cmd.common.config);
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (val.size() >= 2 && val.front() == '"' && val.back() == '"') val = val.substr(1, val.size() - 2);
    CLI::Option* o = nullptr;
    try {
      o = cmd.app->get_option("--" + key);
    } catch (const CLI::OptionNotFound&) {
      throw UsageError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    if (key == "config" || o->count() > 0) continue;
    if (o->get_expected_min() == 0) {
      if (val == "true" || val == "1") o->add_result("true");
      else if (val != "false" && val != "0") throw UsageError("config: flag '" + key + "' needs true or false");
      else continue;
    } else {
      o->add_result(val);
    }
    try {
      o->run_callback();
    } catch (const CLI::Error& e) {
      throw UsageError("config key '" + key + "': " + e.what());
    }
  }
}

}  // namespace

int execute(const Command& cmd) {
  if (!cmd.common.config.empty()) apply_config(cmd);
  if (cmd.common.threads > 0) set_thread_count(cmd.common.threads);
  json manifest = {{"command", cmd.app->get_name()},
                   {"parameters", parameter_map(*cmd.app)},
                   {"seed", cmd.common.seed},
                   {"threads", thread_count()},
                   {"tool_version", KORANYI_VERSION},
                   {"start", utc_now()}};

  Result res = cmd.run(cmd.common);
  res.summary["status"] = res.status == 0 ? "ok" : "property check failed";

  std::vector<std::string> files;
  if (!cmd.common.out.empty()) {
    const fs::path dir(cmd.common.out);
    fs::create_directories(dir);
    write_text(dir / "summary.json", res.summary.dump(2) + "\n");
    files.push_back((dir / "summary.json").string());
    for (const auto& t : res.tables) {
      write_text(dir / (t.name + ".csv"), t.csv());
      files.push_back((dir / (t.name + ".csv")).string());
    }
    for (const auto& [name, g] : res.fields) {
      const fs::path p = dir / (name + ".bin");
      write_grid_field(g, p, {{"command", cmd.app->get_name()}, {"seed", cmd.common.seed}});
      files.push_back(p.string());
      files.push_back(p.string() + ".json");
    }
  }

  if (cmd.common.format == "csv" && !res.tables.empty())
    std::cout << res.tables.front().csv();
  else
    std::cout << res.summary.dump(2) << "\n";

  manifest["end"] = utc_now();
  manifest["exit_code"] = res.status;
  if (!cmd.common.out.empty()) {
    const fs::path m = fs::path(cmd.common.out) / "manifest.json";
    files.push_back(m.string());
    manifest["outputs"] = files;
    write_text(m, manifest.dump(2) + "\n");
  } else {
    manifest["outputs"] = json::array({"<stdout>"});
    std::cerr << "manifest " << manifest.dump() << "\n";
  }
  return res.status;
}

}  // namespace koranyi::cli
