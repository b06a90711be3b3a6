#include "specshape/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "specshape/errors.hpp"
#include "specshape/flow.hpp"
#include "specshape/heat.hpp"
#include "specshape/shape_calculus.hpp"

namespace specshape::cli {

namespace {

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

LogLevel log_level() {
  const char* env = std::getenv("SPECSHAPE_LOG_LEVEL");
  if (!env) return LogLevel::Warn;
  const std::string s(env);
  if (s == "error") return LogLevel::Error;
  if (s == "info") return LogLevel::Info;
  if (s == "debug") return LogLevel::Debug;
  return LogLevel::Warn;
}

void log_info(const std::string& message) {
  if (log_level() >= LogLevel::Info) std::cerr << "[info] " << message << '\n';
}

std::filesystem::path prepare_output(const RunConfig& config) {
  const std::filesystem::path dir = config.output_dir;
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "resolved_config.json") << to_json(config).dump(2) << '\n';
  return dir;
}

EigenOptions eigen_options(const RunConfig& config) {
  EigenOptions opt;
  opt.cluster_tol = config.cluster_tol;
  opt.seed = config.seed;
  return opt;
}

DirichletSystem build_system(const RunConfig& config) {
  if (config.rectangle) {
    const auto& r = *config.rectangle;
    return assemble(rectangle_mesh(r.width, r.height, r.cells_x, r.cells_y));
  }
  return assemble(generate_mesh(config.star_shape(), config.refine));
}

SpectralPack spectrum(const RunConfig& config) {
  return solve_spectrum(build_system(config), config.eigen_count, eigen_options(config));
}

}  // namespace

void cmd_eigs(const RunConfig& config) {
  const auto dir = prepare_output(config);
  const SpectralPack pack = spectrum(config);
  std::ofstream out(dir / "spectrum.csv");
  write_spectrum_csv(out, pack);
  log_info("wrote " + std::to_string(pack.count()) + " eigenvalues");
}

void cmd_deriv(const RunConfig& config) {
  const auto dir = prepare_output(config);
  const BoundaryShape shape = config.star_shape();
  // Velocities from the config are made admissible (zero-mean) first.
  const NormalVelocity v =
      project_zero_mean(uniform_velocity(config.quadrature, config.deriv.velocity), shape);
  FiniteDifferenceOptions opt;
  opt.refinement_level = config.refine;
  opt.eigen = eigen_options(config);
  opt.deform.quadrature = config.quadrature;
  opt.eigen_count = std::max(config.eigen_count, config.deriv.mode + 2);
  const FiniteDifferenceTable table =
      finite_difference_check(shape, config.deriv.mode, v, config.deriv.eps, opt);
  std::ofstream out(dir / "fd_table.csv");
  write_fd_csv(out, table);
}

nlohmann::json critical_report(const RunConfig& config) {
  const SpectralPack pack = spectrum(config);
  const double tol = config.critical.tolerance;
  std::vector<Cluster> clusters;
  if (config.critical.clusters) {
    for (const auto& [first, last] : *config.critical.clusters) {
      if (last > pack.count()) {
        throw Error(ErrorCode::ConfigError, "requested cluster beyond eigen_count");
      }
      const Cluster& actual = pack.cluster_of(first);
      if (actual.first != first || actual.last != last || !actual.complete) {
        throw Error(ErrorCode::DegenerateEigenvalue,
                    "requested range [" + std::to_string(first) + ", " + std::to_string(last) +
                        "] is not a computed cluster at cluster_tol " + std::to_string(config.cluster_tol));
      }
      clusters.push_back(actual);
    }
  } else {
    for (const auto& c : pack.clusters) {
      if (c.complete) clusters.push_back(c);
    }
  }
  nlohmann::json reports = nlohmann::json::array();
  for (const auto& c : clusters) {
    nlohmann::json r = to_json(criticality_cluster(pack, c, tol));
    if (c.size() == 1) r["simple"] = to_json(criticality_simple(pack, c.first, tol));
    reports.push_back(std::move(r));
  }
  return nlohmann::json{{"cluster_tol", config.cluster_tol},
                        {"tolerance", tol},
                        {"tested_family", "boundary normal-derivative constancy"},
                        {"clusters", std::move(reports)}};
}

void cmd_critical(const RunConfig& config) {
  const auto dir = prepare_output(config);
  const nlohmann::json report = critical_report(config);
  std::ofstream(dir / "critical_report.json") << report.dump(2) << '\n';
}

void cmd_heat(const RunConfig& config) {
  const auto dir = prepare_output(config);
  const BoundaryShape shape = config.star_shape();
  const SpectralPack pack = spectrum(config);
  const auto rows = heat_sweep(pack, asymptotic_coeffs(shape, config.quadrature), config.heat.times,
                               config.heat.terms);
  std::ofstream out(dir / "heat_trace.csv");
  write_heat_csv(out, rows);
}

void cmd_flow(const RunConfig& config) {
  const auto dir = prepare_output(config);
  FlowConfig fc;
  fc.initial = config.star_shape();
  if (config.flow.normalize_area) {
    const double area = geometry_report(fc.initial, config.quadrature).area;
    fc.initial = fc.initial.scaled(std::sqrt(*config.flow.normalize_area / area));
  }
  fc.k = config.flow.mode;
  fc.initial_step = config.flow.step;
  fc.max_steps = config.flow.max_steps;
  fc.stop_tol = config.flow.stop_tol;
  fc.min_step = config.flow.min_step;
  fc.refinement_level = config.refine;
  fc.eigen = eigen_options(config);
  fc.deform.quadrature = config.quadrature;
  const FlowResult result = run_flow(fc);
  {
    std::ofstream out(dir / "trajectory.csv");
    write_trajectory_csv(out, result.trajectory);
  }
  nlohmann::json final_shape = to_json(result.state.shape);
  std::ofstream(dir / "final_shape.json") << final_shape.dump(2) << '\n';
  log_info(std::string("flow stopped: ") + to_string(result.state.stop_reason));
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dirichlet eigenvalue shape calculus toolkit"};
  app.require_subcommand(1);
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<int> refine;
  std::optional<std::uint64_t> seed;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"eigs", "lowest eigenvalues as spectrum.csv"},
      {"deriv", "finite-difference check of one-sided derivatives as fd_table.csv"},
      {"critical", "criticality report per cluster as critical_report.json"},
      {"heat", "heat-trace sweep with small-time expansion as heat_trace.csv"},
      {"flow", "area-constrained eigenvalue descent: trajectory.csv, final_shape.json"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_dir, "output directory (overrides output_dir)");
    sub->add_option("--refine", refine, "mesh refinement level (overrides refine)")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "eigensolver start-vector seed");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  const std::string name = app.get_subcommands().front()->get_name();
  try {
    RunConfig config = load_config(config_path);
    if (out_dir) config.output_dir = *out_dir;
    if (refine) config.refine = *refine;
    if (seed) config.seed = *seed;
    if (name == "eigs") cmd_eigs(config);
    else if (name == "deriv") cmd_deriv(config);
    else if (name == "critical") cmd_critical(config);
    else if (name == "heat") cmd_heat(config);
    else cmd_flow(config);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::ConfigError ? kExitConfig : kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace specshape::cli
