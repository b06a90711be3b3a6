#include "specshape/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "specshape/errors.hpp"

namespace specshape {

namespace {

[[noreturn]] void fail(const std::string& message) { throw Error(ErrorCode::ConfigError, message); }

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& allowed,
                    const std::string& where) {
  if (!j.is_object()) fail(where + " must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) fail("unknown key '" + key + "' in " + where);
  }
}

double number(const nlohmann::json& j, const std::string& name) {
  if (!j.is_number()) fail(name + " must be a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) fail(name + " must be finite");
  return x;
}

double positive(const nlohmann::json& j, const std::string& name) {
  const double x = number(j, name);
  if (!(x > 0.0)) fail(name + " must be positive");
  return x;
}

int integer(const nlohmann::json& j, const std::string& name, int min_value) {
  if (!j.is_number_integer()) fail(name + " must be an integer");
  const auto x = j.get<long long>();
  if (x < min_value || x > 1'000'000) fail(name + " out of range");
  return static_cast<int>(x);
}

std::vector<double> numbers(const nlohmann::json& j, const std::string& name, bool require_positive) {
  if (!j.is_array()) fail(name + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : j) out.push_back(require_positive ? positive(x, name) : number(x, name));
  return out;
}

VelocityModes velocity_modes(const nlohmann::json& j) {
  reject_unknown(j, {"constant", "cos", "sin"}, "deriv.velocity");
  VelocityModes v;
  v.cos_coeffs.clear();
  v.sin_coeffs.clear();
  if (j.contains("constant")) v.constant = number(j.at("constant"), "deriv.velocity.constant");
  if (j.contains("cos")) v.cos_coeffs = numbers(j.at("cos"), "deriv.velocity.cos", false);
  if (j.contains("sin")) v.sin_coeffs = numbers(j.at("sin"), "deriv.velocity.sin", false);
  return v;
}

std::vector<double> default_times() {
  // Geometric sweep over [0.02, 1].
  std::vector<double> t;
  const int n = 20;
  for (int i = 0; i < n; ++i) t.push_back(0.02 * std::pow(50.0, static_cast<double>(i) / (n - 1)));
  return t;
}

}  // namespace

BoundaryShape RunConfig::star_shape() const {
  if (rectangle) fail("this command needs a star-shaped domain, not a rectangle");
  return shape ? *shape : BoundaryShape::disk();
}

RunConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  reject_unknown(j,
                 {"shape", "shape_file", "rectangle", "refine", "eigen_count", "cluster_tol",
                  "quadrature", "seed", "output_dir", "deriv", "critical", "heat", "flow"},
                 "config");
  RunConfig c;
  const int domains = static_cast<int>(j.contains("shape")) + static_cast<int>(j.contains("shape_file")) +
                      static_cast<int>(j.contains("rectangle"));
  if (domains > 1) fail("give at most one of shape, shape_file, rectangle");

  try {
    if (j.contains("shape")) c.shape = shape_from_json(j.at("shape"));
    if (j.contains("shape_file")) {
      if (!j.at("shape_file").is_string()) fail("shape_file must be a string");
      std::filesystem::path p = j.at("shape_file").get<std::string>();
      if (p.is_relative()) p = base_dir / p;
      std::ifstream in(p);
      if (!in) fail("cannot open shape_file " + p.string());
      nlohmann::json sj;
      try {
        in >> sj;
      } catch (const nlohmann::json::exception& e) {
        fail("shape_file " + p.string() + " is not valid JSON: " + e.what());
      }
      c.shape_file = p.string();
      c.shape = shape_from_json(sj);
    }
    if (c.shape && c.shape->modes() < kDefaultModes) {
      // Deformations need room above the modes actually written in the file.
      std::vector<double> cs = c.shape->cos_coeffs(), sn = c.shape->sin_coeffs();
      cs.resize(kDefaultModes, 0.0);
      sn.resize(kDefaultModes, 0.0);
      c.shape = BoundaryShape(c.shape->r0(), cs, sn);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    fail(std::string("invalid shape: ") + e.what());
  }
  if (j.contains("rectangle")) {
    const auto& r = j.at("rectangle");
    reject_unknown(r, {"width", "height", "cells_x", "cells_y"}, "rectangle");
    RectangleSpec rect;
    if (r.contains("width")) rect.width = positive(r.at("width"), "rectangle.width");
    if (r.contains("height")) rect.height = positive(r.at("height"), "rectangle.height");
    if (r.contains("cells_x")) rect.cells_x = integer(r.at("cells_x"), "rectangle.cells_x", 2);
    if (r.contains("cells_y")) rect.cells_y = integer(r.at("cells_y"), "rectangle.cells_y", 2);
    c.rectangle = rect;
  }

  if (j.contains("refine")) c.refine = integer(j.at("refine"), "refine", 1);
  if (j.contains("eigen_count")) c.eigen_count = integer(j.at("eigen_count"), "eigen_count", 1);
  if (j.contains("cluster_tol")) c.cluster_tol = positive(j.at("cluster_tol"), "cluster_tol");
  if (j.contains("quadrature")) c.quadrature = integer(j.at("quadrature"), "quadrature", 8);
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) fail("seed must be a non-negative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("output_dir")) {
    if (!j.at("output_dir").is_string()) fail("output_dir must be a string");
    c.output_dir = j.at("output_dir").get<std::string>();
  }
  if (c.shape && c.quadrature <= 2 * c.shape->modes()) {
    fail("quadrature must exceed twice the shape's mode count");
  }

  if (j.contains("deriv")) {
    const auto& d = j.at("deriv");
    reject_unknown(d, {"mode", "velocity", "eps"}, "deriv");
    if (d.contains("mode")) c.deriv.mode = integer(d.at("mode"), "deriv.mode", 1);
    if (d.contains("velocity")) c.deriv.velocity = velocity_modes(d.at("velocity"));
    if (d.contains("eps")) c.deriv.eps = numbers(d.at("eps"), "deriv.eps", true);
  }
  if (j.contains("critical")) {
    const auto& cr = j.at("critical");
    reject_unknown(cr, {"tolerance", "clusters"}, "critical");
    if (cr.contains("tolerance")) c.critical.tolerance = positive(cr.at("tolerance"), "critical.tolerance");
    if (cr.contains("clusters")) {
      const auto& list = cr.at("clusters");
      if (!list.is_array()) fail("critical.clusters must be an array of [first, last] pairs");
      std::vector<std::pair<int, int>> ranges;
      for (const auto& item : list) {
        if (!item.is_array() || item.size() != 2) fail("critical.clusters entries must be [first, last]");
        const int first = integer(item.at(0), "critical.clusters first", 1);
        const int last = integer(item.at(1), "critical.clusters last", 1);
        if (last < first) fail("critical.clusters entry has last < first");
        ranges.emplace_back(first, last);
      }
      c.critical.clusters = std::move(ranges);
    }
  }
  if (j.contains("heat")) {
    const auto& h = j.at("heat");
    reject_unknown(h, {"times", "terms"}, "heat");
    if (h.contains("times")) c.heat.times = numbers(h.at("times"), "heat.times", true);
    if (h.contains("terms")) c.heat.terms = integer(h.at("terms"), "heat.terms", 0);
  }
  if (c.heat.times.empty()) c.heat.times = default_times();
  if (j.contains("flow")) {
    const auto& f = j.at("flow");
    reject_unknown(f, {"mode", "step", "max_steps", "stop_tol", "min_step", "normalize_area"}, "flow");
    if (f.contains("mode")) c.flow.mode = integer(f.at("mode"), "flow.mode", 1);
    if (f.contains("step")) c.flow.step = positive(f.at("step"), "flow.step");
    if (f.contains("max_steps")) c.flow.max_steps = integer(f.at("max_steps"), "flow.max_steps", 0);
    if (f.contains("stop_tol")) c.flow.stop_tol = positive(f.at("stop_tol"), "flow.stop_tol");
    if (f.contains("min_step")) c.flow.min_step = positive(f.at("min_step"), "flow.min_step");
    if (f.contains("normalize_area")) c.flow.normalize_area = positive(f.at("normalize_area"), "flow.normalize_area");
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(j, path.parent_path());
}

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j;
  if (c.rectangle) {
    j["rectangle"] = {{"width", c.rectangle->width},
                      {"height", c.rectangle->height},
                      {"cells_x", c.rectangle->cells_x},
                      {"cells_y", c.rectangle->cells_y}};
  } else {
    j["shape"] = to_json(c.star_shape());
  }
  j["refine"] = c.refine;
  j["eigen_count"] = c.eigen_count;
  j["cluster_tol"] = c.cluster_tol;
  j["quadrature"] = c.quadrature;
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  j["deriv"] = {{"mode", c.deriv.mode},
                {"velocity",
                 {{"constant", c.deriv.velocity.constant},
                  {"cos", c.deriv.velocity.cos_coeffs},
                  {"sin", c.deriv.velocity.sin_coeffs}}},
                {"eps", c.deriv.eps}};
  j["critical"] = {{"tolerance", c.critical.tolerance}};
  if (c.critical.clusters) {
    nlohmann::json clusters = nlohmann::json::array();
    for (const auto& [a, b] : *c.critical.clusters) clusters.push_back({a, b});
    j["critical"]["clusters"] = std::move(clusters);
  }
  j["heat"] = {{"times", c.heat.times}, {"terms", c.heat.terms}};
  j["flow"] = {{"mode", c.flow.mode},
               {"step", c.flow.step},
               {"max_steps", c.flow.max_steps},
               {"stop_tol", c.flow.stop_tol},
               {"min_step", c.flow.min_step}};
  if (c.flow.normalize_area) j["flow"]["normalize_area"] = *c.flow.normalize_area;
  return j;
}

}  // namespace specshape
