#pragma once

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "hardyops/checks.hpp"
#include "hardyops/parse.hpp"

namespace hardyops {

/// Everything the command-line tools need: the verification context plus
/// output plumbing.  Config-file keys mirror the field names; command-line
/// flags override file values, and HARDYOPS_SEED is the seed of last
/// resort before the built-in default.
struct RunConfig {
  VerifyContext ctx;
  int jobs = 0;  // 0: one thread per hardware core
  std::string output_dir = ".";
  std::string format = "json";  // json or csv report files

  void validate() const {
    if (ctx.N < 4) throw ParseError("config: N must be >= 4");
    if (ctx.expansion_factor < 2)
      throw ParseError("config: internal_expansion_factor must be >= 2");
    auto tol_ok = [](double t) { return t > 0.0 && t < 1e-2; };
    if (!tol_ok(ctx.tol_identity) || !tol_ok(ctx.tol_rank) ||
        !tol_ok(ctx.tol_projection))
      throw ParseError("config: tolerances must lie in (0, 1e-2)");
    if (ctx.separation_factor < 1.0)
      throw ParseError("config: separation_factor must be >= 1");
    if (jobs < 0) throw ParseError("config: jobs must be >= 0");
    if (format != "json" && format != "csv")
      throw ParseError("config: format must be json or csv");
  }
};

namespace detail {

inline double parse_real(const std::string& key, const std::string& value) {
  size_t pos = 0;
  std::optional<double> v = read_double(value, pos);
  if (!v || pos != value.size())
    throw ParseError("config: bad real for " + key + ": " + value);
  return *v;
}

inline long long parse_int(const std::string& key, const std::string& value) {
  try {
    size_t used = 0;
    long long v = std::stoll(value, &used);
    if (used != value.size()) throw ParseError("");
    return v;
  } catch (...) {
    throw ParseError("config: bad integer for " + key + ": " + value);
  }
}

}  // namespace detail

/// Applies one `key=value` setting.  Unknown keys are errors so that typos
/// fail loudly.
inline void apply_config_entry(RunConfig& cfg, const std::string& key,
                               const std::string& value) {
  if (key == "N")
    cfg.ctx.N = int(detail::parse_int(key, value));
  else if (key == "internal_expansion_factor")
    cfg.ctx.expansion_factor = int(detail::parse_int(key, value));
  else if (key == "tol_identity")
    cfg.ctx.tol_identity = detail::parse_real(key, value);
  else if (key == "tol_projection")
    cfg.ctx.tol_projection = detail::parse_real(key, value);
  else if (key == "tol_rank")
    cfg.ctx.tol_rank = detail::parse_real(key, value);
  else if (key == "separation_factor")
    cfg.ctx.separation_factor = detail::parse_real(key, value);
  else if (key == "seed")
    cfg.ctx.seed = std::uint64_t(detail::parse_int(key, value));
  else if (key == "jobs")
    cfg.jobs = int(detail::parse_int(key, value));
  else if (key == "output_dir")
    cfg.output_dir = value;
  else if (key == "format")
    cfg.format = value;
  else
    throw ParseError("config: unknown key " + key);
}

/// Flat `key=value` file; blank lines and `#` comments are skipped.
inline void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("config: cannot open " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = detail::trimmed(line);
    if (t.empty() || t[0] == '#') continue;
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ParseError("config: line " + std::to_string(lineno) +
                       " is not key=value: " + line);
    apply_config_entry(cfg, detail::trimmed(t.substr(0, eq)),
                       detail::trimmed(t.substr(eq + 1)));
  }
}

/// Seed fallback: HARDYOPS_SEED applies only when neither a flag nor the
/// config file picked a seed.
inline bool apply_env_seed(RunConfig& cfg) {
  const char* env = std::getenv("HARDYOPS_SEED");
  if (!env) return false;
  cfg.ctx.seed = std::uint64_t(detail::parse_int("HARDYOPS_SEED", env));
  return true;
}

}  // namespace hardyops
