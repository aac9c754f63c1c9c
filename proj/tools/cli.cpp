#include "cli.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <thread>

#include "ross/annulus.hpp"
#include "ross/errors.hpp"
#include "ross/fem.hpp"
#include "ross/hash.hpp"
#include "ross/lemmas.hpp"
#include "ross/mesh.hpp"
#include "ross/radial_solver.hpp"
#include "ross/verifier.hpp"

namespace ross::cli {

namespace {

const std::vector<std::string>& default_spaces() {
  static const std::vector<std::string> spaces = [] {
    std::vector<std::string> out;
    std::vector<std::pair<int, int>> kn;
    for (int n = 2; n <= 8; ++n) kn.emplace_back(1, n);
    for (int n = 1; n <= 4; ++n) kn.emplace_back(2, n);
    for (int n = 1; n <= 2; ++n) kn.emplace_back(4, n);
    kn.emplace_back(8, 2);
    for (const char* suffix : {"c", "nc"}) {
      for (auto [k, n] : kn) out.push_back("K" + std::to_string(k) + "_n" + std::to_string(n) + "_" + suffix);
    }
    return out;
  }();
  return spaces;
}

const std::vector<std::string> kAllClaims{"identity", "bounds", "ball-lower-bound", "sign"};

/// Runs fn(0..count) on up to `jobs` threads; results keep index order.
template <class T>
std::vector<T> run_jobs(unsigned jobs, std::size_t count, const std::function<T(std::size_t)>& fn) {
  std::vector<T> results(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        results[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(count)));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw std::invalid_argument("cannot write '" + path + "'");
  os << text;
}

void emit_json(const Json& j, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << j.dump(2) << '\n';
  } else {
    write_text(path, j.dump(2) + "\n");
  }
}

std::string hash_of(const Json& config) { return sha256_hex(config.dump()); }

Json ball_json(const BallEig& b) {
  return {{"space", b.space.to_string()}, {"radius", b.radius}, {"mu1", b.mu1},
          {"solver", to_string(b.solver)}, {"tol", b.tol},      {"grid_size", b.grid_size}};
}

std::string profile_csv(const RadialProfile& p, const std::string& config_hash) {
  std::ostringstream os;
  os << "# config_hash=" << config_hash << '\n';
  p.write_csv(os);
  return os.str();
}

LemmaOptions lemma_options(const Json& c) {
  LemmaOptions o;
  o.grid = c.at("grid").get<std::size_t>();
  o.radii = c.at("radii").get<std::size_t>();
  o.count_offset = c.value("count_offset", 0);
  return o;
}

Report run_check_lemmas(const Json& config) {
  const auto spaces = config.at("spaces").get<std::vector<std::string>>();
  const auto claims = config.at("claims").get<std::vector<std::string>>();
  for (const auto& claim : claims) {
    if (std::find(kAllClaims.begin(), kAllClaims.end(), claim) == kAllClaims.end()) {
      throw std::invalid_argument("unknown claim '" + claim + "'");
    }
  }
  const LemmaOptions options = lemma_options(config);
  if (options.grid < 100) throw std::invalid_argument("--grid must be at least 100");
  if (options.radii < 1) throw std::invalid_argument("--radii must be positive");
  std::vector<Space> parsed;
  for (const auto& s : spaces) parsed.push_back(Space::parse(s));

  const auto has = [&](const char* claim) { return std::find(claims.begin(), claims.end(), claim) != claims.end(); };
  const auto per_space = run_jobs<std::vector<Check>>(
      config.value("jobs", 1u), parsed.size(), [&](std::size_t i) {
        const Space& space = parsed[i];
        std::vector<Check> out;
        if (has("identity")) out.push_back(check_identity(space, options));
        if (has("bounds")) out.push_back(check_gradient_bound(space, options));
        if (has("ball-lower-bound") && space.compact()) out.push_back(check_ball_lower_bound(space, options));
        if (has("sign")) out.push_back(check_sign_function(space, options));
        return out;
      });
  Report report;
  for (const auto& list : per_space) report.checks.insert(report.checks.end(), list.begin(), list.end());
  return report;
}

VerifyOptions verify_options(const Json& c) {
  VerifyOptions o;
  o.h = c.at("h").get<double>();
  o.count = c.at("count").get<int>();
  o.seed = c.at("seed").get<std::uint64_t>();
  o.jitter = c.at("jitter").get<double>();
  o.threads = 1;
  return o;
}

struct VerifyRun {
  Report report;
  std::vector<VerifyResult> results;
};

VerifyRun run_verify_full(const Json& config) {
  const Space space = Space::parse(config.at("space").get<std::string>());
  const auto domains = config.at("domains").get<std::vector<std::string>>();
  if (domains.empty()) throw std::invalid_argument("verify needs at least one --domain");
  const VerifyOptions options = verify_options(config);
  if (!(options.h > 0.0)) throw std::invalid_argument("--h must be positive");
  std::vector<DomainSpec> specs;
  for (const auto& d : domains) specs.push_back(parse_domain(d, space));
  auto results = run_jobs<std::optional<VerifyResult>>(
      config.value("jobs", 1u), specs.size(),
      [&](std::size_t i) { return std::optional<VerifyResult>(verify(space, specs[i], options)); });
  VerifyRun run;
  Json details = Json::array();
  for (auto& r : results) {
    run.report.append(r->report);
    details.push_back(r->report.details);
    run.results.push_back(std::move(*r));
  }
  run.report.details = {{"domains", details}};
  return run;
}

Report finish(Report report, const Json& config) {
  report.config = config;
  report.generated_at = utc_timestamp();
  return report;
}

int exit_code_for(const Report& report) {
  return report.summary().failed > 0 ? kExitCheckFailed : kExitOk;
}

void print_summary(const Report& report, std::ostream& err) {
  const Summary s = report.summary();
  err << "checks: " << s.passed << " passed, " << s.failed << " failed, " << s.inconclusive << " inconclusive\n";
  for (const auto& c : report.checks) {
    if (c.status != Status::pass) {
      err << "  " << to_string(c.status) << ": " << c.id << " [" << c.inputs.space << "] margin=" << c.margin
          << " tol=" << c.tol << '\n';
    }
  }
  for (const auto& w : report.warnings) err << "warning: " << w << '\n';
}

void add_space_option(CLI::App* cmd, std::string& space) {
  cmd->add_option("--space", space, "Space as K<k>_n<n>_<c|nc>, e.g. K1_n2_nc for H^2")->required();
}

}  // namespace

Report run_config(const Json& config) {
  const auto command = config.at("command").get<std::string>();
  if (command == "check-lemmas") return finish(run_check_lemmas(config), config);
  if (command == "verify") return finish(run_verify_full(config).report, config);
  throw std::invalid_argument("config command '" + command + "' does not produce a report");
}

int replay(const std::string& path, std::ostream& out, std::ostream& err, double tol) {
  std::ifstream is(path);
  if (!is) {
    err << "error: cannot open report '" << path << "'\n";
    return kExitUsage;
  }
  const Report original = Report::from_json(Json::parse(is));
  const Report again = run_config(original.config);
  int mismatches = 0;
  if (again.checks.size() != original.checks.size()) {
    err << "replay: check count differs (" << original.checks.size() << " vs " << again.checks.size() << ")\n";
    return kExitCheckFailed;
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < original.checks.size(); ++i) {
    const Check& a = original.checks[i];
    const Check& b = again.checks[i];
    const double diff = std::abs(a.margin - b.margin);
    worst = std::max(worst, diff);
    if (a.id != b.id || a.inputs.space != b.inputs.space || !(diff <= tol) || a.status != b.status) {
      ++mismatches;
      err << "replay mismatch: " << a.id << " [" << a.inputs.space << "] " << a.margin << " vs " << b.margin << '\n';
    }
  }
  out << "replayed " << original.checks.size() << " checks, max margin difference " << worst << ", "
      << mismatches << " mismatches\n";
  return mismatches == 0 ? kExitOk : kExitCheckFailed;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Neumann eigenvalue inequalities on rank-one symmetric spaces"};
  app.set_config("--config", "", "Read options from a key = value config file");
  app.require_subcommand(0, 1);
  app.fallthrough();
  unsigned jobs = 1;
  std::string replay_path;
  app.add_option("--jobs", jobs, "Worker threads for independent jobs")->check(CLI::PositiveNumber);
  app.add_option("--replay", replay_path, "Rerun the config embedded in a report and compare margins");

  // ball / rayleigh
  std::string space;
  double radius = 0.0;
  double tol = 1e-10;
  std::size_t grid = 2001;
  std::size_t intervals = 2000;
  std::string out_path;
  std::string csv_path;
  auto* ball = app.add_subcommand("ball", "First Neumann eigenvalue of a geodesic ball by shooting");
  add_space_option(ball, space);
  ball->add_option("--radius", radius, "Ball radius R")->required();
  ball->add_option("--tol", tol, "Shooting tolerance in [1e-12, 1e-4]");
  ball->add_option("--grid", grid, "Profile samples on [0, R]");
  ball->add_option("--out", out_path, "JSON output path (default stdout)");
  ball->add_option("--csv", csv_path, "Write the eigenfunction profile g as CSV");

  auto* rayleigh = app.add_subcommand("rayleigh", "Same eigenvalue from the finite-difference Rayleigh quotient");
  add_space_option(rayleigh, space);
  rayleigh->add_option("--radius", radius, "Ball radius R")->required();
  rayleigh->add_option("--intervals", intervals, "Grid intervals N >= 100");
  rayleigh->add_option("--out", out_path, "JSON output path (default stdout)");
  rayleigh->add_option("--csv", csv_path, "Write the discrete eigenvector as CSV");

  // annulus
  double r_in = 0.0;
  double r_out = 0.0;
  int count = 4;
  std::vector<int> modes{0, 1};
  auto* annulus = app.add_subcommand("annulus", "Separated-mode Neumann eigenvalues of an annulus");
  add_space_option(annulus, space);
  annulus->add_option("--r-in", r_in, "Inner radius")->required();
  annulus->add_option("--r-out", r_out, "Outer radius")->required();
  annulus->add_option("--modes", modes, "Angular modes (0 and/or 1)");
  annulus->add_option("--count", count, "Radial indices per mode");
  annulus->add_option("--tol", tol, "Shooting tolerance");
  annulus->add_option("--out", out_path, "JSON output path (default stdout)");

  // mesh / spectrum
  std::string domain;
  double h = 0.04;
  std::uint64_t seed = 0;
  double jitter = 0.0;
  auto* mesh = app.add_subcommand("mesh", "Triangulate a domain in the conformal chart");
  mesh->set_help_flag("--help", "Print this help message and exit");  // frees -h for --h
  add_space_option(mesh, space);
  mesh->add_option("--domain", domain, "Domain spec, e.g. ellipse:0.6,0.3")->required();
  mesh->add_option("--h", h, "Target metric edge length");
  mesh->add_option("--seed", seed, "Seed for lattice jitter");
  mesh->add_option("--jitter", jitter, "Interior jitter as a fraction of the spacing");
  mesh->add_option("--out", out_path, "Mesh text output path (default stdout)");

  auto* spectrum = app.add_subcommand("spectrum", "Lowest P1 Neumann eigenvalues of a domain");
  spectrum->set_help_flag("--help", "Print this help message and exit");
  add_space_option(spectrum, space);
  spectrum->add_option("--domain", domain, "Domain spec")->required();
  spectrum->add_option("--h", h, "Target metric edge length");
  spectrum->add_option("--count", count, "Eigenvalues beyond mu_0");
  spectrum->add_option("--seed", seed, "Seed for lattice jitter");
  spectrum->add_option("--jitter", jitter, "Interior jitter as a fraction of the spacing");
  spectrum->add_option("--out", out_path, "JSON output path (default stdout)");

  // check-lemmas
  std::vector<std::string> spaces = default_spaces();
  std::vector<std::string> claims = kAllClaims;
  std::size_t lemma_grid_points = 1000;
  std::size_t radii = 5;
  bool corrupt_l = false;
  auto* lemmas = app.add_subcommand("check-lemmas", "Grid checks of the radial identities, bounds and lemmas");
  lemmas->add_option("--spaces", spaces, "Spaces to check (default: the standard set)");
  lemmas->add_option("--claims", claims, "Subset of identity, bounds, ball-lower-bound, sign");
  lemmas->add_option("--grid", lemma_grid_points, "Radial grid size (>= 100)");
  lemmas->add_option("--radii", radii, "Ball radii per space");
  lemmas->add_option("--out", out_path, "Report path (default stdout)");
  lemmas->add_flag("--corrupt-l", corrupt_l)->group("");

  // verify
  std::vector<std::string> domains;
  std::string artifacts;
  int verify_count = 0;
  auto* verify_cmd = app.add_subcommand("verify", "Run the full trial-function pipeline on domains");
  verify_cmd->set_help_flag("--help", "Print this help message and exit");
  add_space_option(verify_cmd, space);
  verify_cmd->add_option("--domain", domains, "Domain spec (repeatable)")->required();
  verify_cmd->add_option("--h", h, "Target metric edge length");
  verify_cmd->add_option("--count", verify_count, "FEM eigenpairs beyond mu_0 (default m)");
  verify_cmd->add_option("--seed", seed, "Seed for lattice jitter");
  verify_cmd->add_option("--jitter", jitter, "Interior jitter as a fraction of the spacing");
  verify_cmd->add_option("--out", out_path, "Report path (default stdout)");
  verify_cmd->add_option("--artifacts", artifacts, "Directory for meshes, profiles and spectra");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    // CLI11 prints help for subcommand --help through this path too.
    if (e.get_exit_code() == 0) {
      out << e.what() << '\n';
      return kExitOk;
    }
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (!replay_path.empty()) return replay(replay_path, out, err);
    if (app.get_subcommands().empty()) {
      err << app.help();
      return kExitUsage;
    }

    if (ball->parsed() || rayleigh->parsed()) {
      const bool fd = rayleigh->parsed();
      Json config = {{"command", fd ? "rayleigh" : "ball"}, {"space", space}, {"radius", radius}};
      if (fd) {
        config["intervals"] = intervals;
      } else {
        config["tol"] = tol;
        config["grid"] = grid;
      }
      const Space s = Space::parse(space);
      const BallEig result = fd ? solve_ball_rayleigh(s, radius, intervals)
                                : solve_ball(s, radius, ShootingOptions{tol, grid});
      const std::string hash = hash_of(config);
      emit_json({{"config", config}, {"config_hash", hash}, {"result", ball_json(result)}}, out_path, out);
      if (!csv_path.empty()) write_text(csv_path, profile_csv(result.g, hash));
      return kExitOk;
    }

    if (annulus->parsed()) {
      const Json config = {{"command", "annulus"}, {"space", space}, {"r_in", r_in}, {"r_out", r_out},
                           {"modes", modes},       {"count", count}, {"tol", tol}};
      const AnnulusModes result =
          solve_annulus(Space::parse(space), r_in, r_out, modes, count, AnnulusOptions{tol, 1001});
      Json list = Json::array();
      for (const auto& m : result.modes) {
        list.push_back({{"mode", m.mode}, {"radial_index", m.radial_index}, {"eigenvalue", m.eigenvalue},
                        {"multiplicity", m.multiplicity}, {"multiplet", m.multiplet},
                        {"neumann_residual", m.neumann_residual}});
      }
      emit_json({{"config", config},
                 {"config_hash", hash_of(config)},
                 {"label", kCandidateLabel},
                 {"modes", list},
                 {"candidate_spectrum", result.candidate_spectrum(static_cast<std::size_t>(count))}},
                out_path, out);
      return kExitOk;
    }

    if (mesh->parsed() || spectrum->parsed()) {
      const Space s = Space::parse(space);
      const ConformalModel model = build_model(s);
      const DomainSpec spec = parse_domain(domain, s);
      if (spec.is_annulus()) throw std::invalid_argument("annulus domains are handled radially, not meshed");
      const Mesh m = mesh_domain(model, std::get<BoundaryCurve>(spec.shape), h, MeshOptions{jitter, seed});
      const MeshStats stats = mesh_stats(model, m);
      Json config = {{"command", mesh->parsed() ? "mesh" : "spectrum"},
                     {"space", space}, {"domain", domain}, {"h", h}, {"seed", seed}, {"jitter", jitter}};
      const Json stats_json = {{"vertices", stats.vertex_count}, {"triangles", stats.triangle_count},
                               {"h_max", stats.h_max}, {"h_max_chart", stats.h_max_chart},
                               {"min_angle_deg", stats.min_angle_deg}};
      if (mesh->parsed()) {
        const std::string text = "# config_hash=" + hash_of(config) + "\n" + mesh_text(m);
        if (out_path.empty() || out_path == "-") {
          out << text;
        } else {
          write_text(out_path, text);
          out << Json{{"config_hash", hash_of(config)}, {"mesh", stats_json}}.dump(2) << '\n';
        }
        return kExitOk;
      }
      config["count"] = count;
      const FemSystem system = assemble(model, m);
      const SpectrumResult result = solve_spectrum(system.stiffness, system.mass, count + 1);
      emit_json({{"config", config},
                 {"config_hash", hash_of(config)},
                 {"mesh", stats_json},
                 {"eigenvalues", result.eigenvalues},
                 {"residuals", result.residuals},
                 {"iterations", result.iterations}},
                out_path, out);
      return kExitOk;
    }

    if (lemmas->parsed()) {
      const Json config = {{"command", "check-lemmas"}, {"spaces", spaces}, {"claims", claims},
                           {"grid", lemma_grid_points}, {"radii", radii},   {"count_offset", corrupt_l ? 1 : 0},
                           {"jobs", jobs}};
      const Report report = run_config(config);
      emit_json(report.to_json(), out_path, out);
      print_summary(report, err);
      return exit_code_for(report);
    }

    if (verify_cmd->parsed()) {
      const Json config = {{"command", "verify"}, {"space", space},  {"domains", domains},
                           {"h", h},              {"count", verify_count}, {"seed", seed},
                           {"jitter", jitter},    {"jobs", jobs}};
      VerifyRun run = run_verify_full(config);
      Report report = finish(std::move(run.report), config);
      emit_json(report.to_json(), out_path, out);
      if (!artifacts.empty()) {
        std::filesystem::create_directories(artifacts);
        const std::string hash = report.config_hash();
        write_text(artifacts + "/report.json", report.to_json().dump(2) + "\n");
        for (std::size_t i = 0; i < run.results.size(); ++i) {
          const auto& r = run.results[i];
          const std::string stem = artifacts + "/domain" + std::to_string(i);
          if (r.setup) {
            write_text(stem + "_mesh.txt", "# config_hash=" + hash + "\n" + r.domain_text);
            write_text(stem + "_G.csv", profile_csv(r.setup->G.sampled(), hash));
            Json spectrum_json = {{"config_hash", hash},
                                  {"eigenvalues", r.setup->spectrum.eigenvalues},
                                  {"residuals", r.setup->spectrum.residuals},
                                  {"h_max", r.setup->spectrum.h_max}};
            write_text(stem + "_spectrum.json", spectrum_json.dump(2) + "\n");
          }
          if (r.ball) write_text(stem + "_g.csv", profile_csv(r.ball->g, hash));
        }
      }
      print_summary(report, err);
      return exit_code_for(report);
    }
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  } catch (const std::exception& e) {
    // Range, geometry, hypothesis, unsupported-space and argument errors.
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace ross::cli
