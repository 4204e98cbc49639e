// Command-line front door: assemble operator matrices, run verification
// suites, and produce rank/singular-value studies.  stderr carries the
// human-readable summary; stdout and output files carry machine output.
//
// Exit codes: 0 success (for verify: every certified check passed),
// 1 certified check failure, 2 invalid spec/usage, 3 assembly failure.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "hardyops/config.hpp"
#include "hardyops/io.hpp"
#include "hardyops/parse.hpp"
#include "hardyops/suites.hpp"

namespace {

using namespace hardyops;

struct CommonFlags {
  std::string config_path;
  std::optional<int> N;
  std::optional<int> expansion_factor;
  std::optional<double> tol_identity;
  std::optional<double> tol_projection;
  std::optional<double> tol_rank;
  std::optional<double> separation_factor;
  std::optional<long long> seed;
  std::optional<int> jobs;
  std::optional<std::string> output_dir;
  std::optional<std::string> format;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path,
                  "flat key=value config file; flags override its values");
  cmd->add_option("-N,--window", f.N, "matrix window size");
  cmd->add_option("--internal-expansion-factor", f.expansion_factor,
                  "internal series window as a multiple of N (default 4)");
  cmd->add_option("--tol-identity", f.tol_identity,
                  "Frobenius threshold for identity checks");
  cmd->add_option("--tol-projection", f.tol_projection,
                  "threshold for projection-window checks");
  cmd->add_option("--tol-rank", f.tol_rank,
                  "relative singular-value cutoff for numerical rank");
  cmd->add_option("--separation-factor", f.separation_factor,
                  "non-vanishing checks must clear factor x tolerance");
  cmd->add_option("--seed", f.seed,
                  "random-instance seed (HARDYOPS_SEED is the fallback)");
  cmd->add_option("--jobs", f.jobs,
                  "worker threads for independent checks (0 = all cores)");
  cmd->add_option("--output-dir", f.output_dir,
                  "directory for report/matrix files");
  cmd->add_option("--format", f.format, "report file format: json or csv");
}

/// Defaults < config file < HARDYOPS_SEED (seed only) < explicit flags.
RunConfig resolve_config(const CommonFlags& f) {
  RunConfig cfg;
  bool file_has_seed = false;
  if (!f.config_path.empty()) {
    std::ifstream probe(f.config_path);
    if (!probe) throw ParseError("config: cannot open " + f.config_path);
    std::string line;
    while (std::getline(probe, line)) {
      std::string t = detail::trimmed(line);
      if (t.rfind("seed", 0) == 0 && t.find('=') != std::string::npos)
        file_has_seed = true;
    }
    load_config_file(cfg, f.config_path);
  }
  if (!f.seed && !file_has_seed) apply_env_seed(cfg);
  if (f.N) cfg.ctx.N = *f.N;
  if (f.expansion_factor) cfg.ctx.expansion_factor = *f.expansion_factor;
  if (f.tol_identity) cfg.ctx.tol_identity = *f.tol_identity;
  if (f.tol_projection) cfg.ctx.tol_projection = *f.tol_projection;
  if (f.tol_rank) cfg.ctx.tol_rank = *f.tol_rank;
  if (f.separation_factor) cfg.ctx.separation_factor = *f.separation_factor;
  if (f.seed) cfg.ctx.seed = std::uint64_t(*f.seed);
  if (f.jobs) cfg.jobs = *f.jobs;
  if (f.output_dir) cfg.output_dir = *f.output_dir;
  if (f.format) cfg.format = *f.format;
  cfg.validate();
  return cfg;
}

int effective_jobs(const RunConfig& cfg) {
  if (cfg.jobs > 0) return cfg.jobs;
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? int(hw) : 1;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.output_dir);
  return (std::filesystem::path(cfg.output_dir) / name).string();
}

int cmd_assemble(const CommonFlags& flags, const std::string& kind_name,
                 const std::string& phi_spec, const std::string& eta_spec,
                 const std::string& theta_spec) {
  RunConfig cfg = resolve_config(flags);
  OperatorKind kind = parse_kind(kind_name);
  ParsedSymbol phi = parse_symbol(phi_spec, cfg.ctx.order());
  InnerFunction eta = parse_inner(eta_spec);
  InnerFunction theta = parse_inner(theta_spec);
  AssembleRequest req{kind,      phi.series, eta,
                      theta,     cfg.ctx.N,  cfg.ctx.N,
                      cfg.ctx.order()};
  OperatorMatrix m = assemble(req);
  std::string base = to_string(kind);
  std::string csv_path = out_path(cfg, base + ".csv");
  std::string json_path = out_path(cfg, base + ".json");
  write_text_file(csv_path, matrix_to_csv(m.entries));
  std::string sidecar = json_text(matrix_sidecar(m));
  write_text_file(json_path, sidecar);
  std::cout << sidecar;
  std::cerr << "assembled " << base << ": " << m.rows() << "x" << m.cols()
            << " -> " << csv_path << ", " << json_path << "\n";
  return 0;
}

int cmd_verify(const CommonFlags& flags, const std::string& suite) {
  RunConfig cfg = resolve_config(flags);
  SuiteResult result = run_suite(suite, cfg.ctx, effective_jobs(cfg));
  std::string payload, filename;
  if (cfg.format == "csv") {
    payload = suite_to_csv(result);
    filename = "verify_" + suite + ".csv";
  } else {
    payload = json_text(suite_to_json(result));
    filename = "verify_" + suite + ".json";
  }
  write_text_file(out_path(cfg, filename), payload);
  std::cout << payload;
  std::cerr << suite_summary(result);
  int certified_failures = 0;
  for (const CheckReport& r : result.reports) {
    if (r.verdict == Verdict::Pass) continue;
    if (r.status == CheckStatus::Certified) {
      ++certified_failures;
    } else {
      std::cerr << "warning: heuristic check " << r.check_id
                << " did not pass (residual "
                << format_double(r.residual) << ")\n";
    }
  }
  return certified_failures > 0 ? 1 : 0;
}

int cmd_study(const CommonFlags& flags, const std::string& kind_name,
              const std::string& phi_spec, const std::string& eta_spec,
              const std::string& theta_spec,
              const std::string& windows_spec) {
  RunConfig cfg = resolve_config(flags);
  OperatorKind kind = parse_kind(kind_name);
  InnerFunction eta = parse_inner(eta_spec);
  InnerFunction theta = parse_inner(theta_spec);
  std::vector<int> windows;
  for (const std::string& tok : detail::split(windows_spec, ','))
    windows.push_back(int(detail::parse_int("windows", tok)));
  if (windows.empty()) throw ParseError("study: empty window list");
  for (size_t i = 0; i < windows.size(); ++i) {
    if (windows[i] < 4) throw ParseError("study: windows must be >= 4");
    if (i && windows[i] <= windows[i - 1])
      throw ParseError("study: windows must be strictly ascending");
  }
  int wmax = windows.back();
  VerifyContext ctx = cfg.ctx;
  ctx.N = wmax;
  ParsedSymbol phi = parse_symbol(phi_spec, ctx.order());
  RankStudyReport report =
      rank_study(kind, phi.series, phi.eval, eta, theta, windows, ctx,
                 std::string("study.") + to_string(kind));
  std::string csv = study_to_csv(report);
  std::string path = out_path(cfg, "study_" + std::string(to_string(kind)) +
                                       ".csv");
  write_text_file(path, csv);
  std::cout << csv;
  std::cerr << "study " << to_string(kind) << ": verdict " << report.verdict
            << " (" << to_string(report.status) << ") -> " << path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "finite-window laboratory for restricted Toeplitz/Hankel operators "
      "on model spaces"};
  app.require_subcommand(1);

  CommonFlags af, vf, sf;
  std::string kind_name, phi_spec, theta_spec, windows_spec = "50,100,200";
  std::string eta_spec;
  std::string suite;

  CLI::App* assemble_cmd = app.add_subcommand(
      "assemble", "assemble one operator matrix; writes CSV + JSON sidecar");
  add_common_flags(assemble_cmd, af);
  assemble_cmd->add_option("--kind", kind_name, "operator kind")->required();
  assemble_cmd->add_option("--phi", phi_spec, "symbol spec (laurent:/rational:)")
      ->required();
  assemble_cmd->add_option("--eta", eta_spec, "inner spec for the domain");
  assemble_cmd->add_option("--theta", theta_spec,
                           "inner spec for the model space");

  CLI::App* verify_cmd = app.add_subcommand(
      "verify", "run a verification suite; writes a report file");
  add_common_flags(verify_cmd, vf);
  verify_cmd
      ->add_option("--suite", suite,
                   "one of: all, projections, defects, intertwining, "
                   "vanishing, decompositions")
      ->required()
      ->check(CLI::IsMember({"all", "projections", "defects", "intertwining",
                             "vanishing", "decompositions"}));

  CLI::App* study_cmd = app.add_subcommand(
      "study", "numerical rank across growing windows; writes CSV");
  add_common_flags(study_cmd, sf);
  study_cmd->add_option("--kind", kind_name, "operator kind")->required();
  study_cmd->add_option("--phi", phi_spec, "symbol spec")->required();
  study_cmd->add_option("--eta", eta_spec, "inner spec for the domain");
  study_cmd->add_option("--theta", theta_spec, "inner spec for the model space");
  study_cmd->add_option("--windows", windows_spec,
                        "ascending comma-separated window sizes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (assemble_cmd->parsed())
      return cmd_assemble(af, kind_name, phi_spec, eta_spec, theta_spec);
    if (verify_cmd->parsed()) return cmd_verify(vf, suite);
    return cmd_study(sf, kind_name, phi_spec, eta_spec, theta_spec,
                     windows_spec);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
