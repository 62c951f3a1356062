#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "stagger/closures.hpp"
#include "stagger/euler.hpp"
#include "stagger/field.hpp"
#include "stagger/moment13.hpp"
#include "stagger/scheme.hpp"

namespace stagger {

enum class ModelKind { Moment13, Euler };

std::string_view to_string(ModelKind kind);
ModelKind parse_model(std::string_view name);
std::string_view to_string(Projection p);
Projection parse_projection(std::string_view name);

/// Piecewise-constant Riemann data; the interface sits at x_m.
struct RiemannIC {
  PhysicalState left{};
  PhysicalState right{};
  double x_m = 0.5;
};

struct OutputConfig {
  std::string directory = "out";
  int snapshot_stride = 0;  // 0: initial and final profiles only
};

struct RunConfig {
  std::string name = "custom";
  ModelKind model = ModelKind::Moment13;
  ClosureKind closure = ClosureKind::EntropicScalar;
  Projection projection = Projection::LimitedSlopes;
  GridConfig grid{};
  ModelParams params{};
  double gamma = 5.0 / 3.0;  // euler only
  RiemannIC ic{};
  OutputConfig output{};

  /// Throws ConfigError on inconsistent settings.
  void validate() const;
};

/// Euler primitive state with the same density, velocity and mechanical
/// energy as an equilibrium moment state: p = rho tr(pi) / 3.
EulerPrimitive to_euler(const PhysicalState& w);

/// End time of paper-case-2, chosen so that no wave reaches the domain ends.
inline constexpr double kPaperCase2EndTime = 0.025;

std::vector<std::string> preset_names();
/// paper-case-1, paper-case-2 or sod-euler. Throws UnknownPreset.
RunConfig preset(std::string_view name);

/// Flat `key = value` text, `#` starts a comment.
std::string dump_config(const RunConfig& cfg);
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace stagger
