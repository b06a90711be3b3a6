#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "specshape/domain.hpp"

namespace specshape {

struct RectangleSpec {
  double width = kPi;
  double height = kPi;
  int cells_x = 32;
  int cells_y = 32;
};

struct DerivSettings {
  int mode = 1;
  VelocityModes velocity{0.0, {0.0, 1.0}, {0.0, 0.0}};
  std::vector<double> eps{1e-2, 1e-3, 1e-4};
};

struct CriticalSettings {
  double tolerance = 1e-2;
  /// Explicit [first, last] ranges; empty optional means every complete cluster.
  std::optional<std::vector<std::pair<int, int>>> clusters;
};

struct HeatSettings {
  std::vector<double> times;
  /// 0 means every computed eigenvalue.
  int terms = 0;
};

struct FlowSettings {
  int mode = 1;
  double step = 0.05;
  int max_steps = 200;
  double stop_tol = 1e-10;
  double min_step = 1e-4;
  /// Rescale the initial shape to this area before flowing.
  std::optional<double> normalize_area;
};

/// Validated run configuration; every default is filled in.
struct RunConfig {
  /// Zero-padded to at least kDefaultModes Fourier modes.
  std::optional<BoundaryShape> shape;
  std::optional<std::string> shape_file;
  std::optional<RectangleSpec> rectangle;
  int refine = 16;
  int eigen_count = 10;
  double cluster_tol = 1e-4;
  int quadrature = kDefaultQuadrature;
  std::uint64_t seed = 0x5eed5eedULL;
  std::string output_dir = "out";

  DerivSettings deriv;
  CriticalSettings critical;
  HeatSettings heat;
  FlowSettings flow;

  /// The star-shaped domain (unit disk when none was given).
  BoundaryShape star_shape() const;
};

/// Strict parse: unknown keys and ill-typed values throw ConfigError.
/// Relative shape_file paths are resolved against base_dir.
RunConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const RunConfig& config);

}  // namespace specshape
