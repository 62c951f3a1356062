#pragma once

#include <filesystem>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stagger/config.hpp"
#include "stagger/run.hpp"

namespace stagger {

/// Output columns of a snapshot, common to both models. For the Euler model
/// pi11 = pi22 = p / rho, u4 = rho pi22 / 2 and q1 = Js = 0.
struct Profile {
  std::vector<double> x, rho, M1, u3, u4, q1, pi11, pi22, v1, Js;

  std::size_t size() const { return x.size(); }
  const std::vector<double>& column(std::string_view name) const;
  static const std::vector<std::string>& column_names();
};

/// Fields reported by the oscillation diagnostics.
const std::vector<std::string>& report_fields();

struct FieldSummary {
  int spurious_extrema = 0;
  double total_variation = 0.0;
  double front_position = 0.0;  // x between the cells of the steepest jump
};

struct RunOutcome {
  int exit_code = 0;  // 0 ok, 2 config, 3 solver failure, 4 invalid state
  std::string message;
  std::optional<Profile> initial;
  std::optional<Profile> final_profile;
  std::vector<StepRecord> diagnostics;
  std::map<std::string, FieldSummary> summary;
  int steps = 0;
  double t = 0.0;
  double seconds = 0.0;
  /// Smallest entropy production over every cell of every completed step
  /// (moment model; stays +inf for Euler).
  double min_entropy_production = std::numeric_limits<double>::infinity();
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitInvalid = 4;

/// Riemann initial data on the grid of `cfg`, conserved variables of the
/// configured model.
FieldArray<Moment13Model::kSize> moment_initial_field(const RunConfig& cfg);
FieldArray<EulerModel::kSize> euler_initial_field(const RunConfig& cfg);

Profile moment_profile(const Moment13Model& model, const FieldArray<Moment13Model::kSize>& u,
                       const std::vector<double>& js, const GridConfig& grid);
Profile euler_profile(const EulerModel& model, const FieldArray<EulerModel::kSize>& u,
                      const GridConfig& grid);

std::map<std::string, FieldSummary> summarize(const Profile& p);

/// Runs the configuration in memory without touching the disk.
RunOutcome simulate(const RunConfig& cfg);

/// Runs the configuration and writes snapshot CSVs, diagnostics.csv,
/// config.txt and plot.gp into cfg.output.directory.
RunOutcome run_and_report(const RunConfig& cfg, std::ostream& log);

struct ComparisonReport {
  RunOutcome naive;
  RunOutcome entropic;
};

/// Runs the naive and the scalar entropic closure on the same
/// configuration. With an output directory, writes compare.csv and
/// summary.csv next to one sub-directory per closure.
ComparisonReport compare_closures(const RunConfig& cfg,
                                  const std::optional<std::filesystem::path>& out_dir,
                                  std::ostream& log);

void write_snapshot(const std::filesystem::path& path, const Profile& p);
Profile read_snapshot(const std::filesystem::path& path);
void write_diagnostics(const std::filesystem::path& path, const std::vector<StepRecord>& records);
void write_plot_script(const std::filesystem::path& path, const std::string& title);

}  // namespace stagger
