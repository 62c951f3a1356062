#include "stagger/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "stagger/errors.hpp"

namespace stagger {

std::string_view to_string(ModelKind kind) {
  return kind == ModelKind::Moment13 ? "moment13" : "euler";
}

ModelKind parse_model(std::string_view name) {
  if (name == "moment13") return ModelKind::Moment13;
  if (name == "euler") return ModelKind::Euler;
  throw ConfigError("unknown model '" + std::string(name) + "' (expected moment13 or euler)");
}

std::string_view to_string(Projection p) {
  return p == Projection::LimitedSlopes ? "limited" : "average";
}

Projection parse_projection(std::string_view name) {
  if (name == "limited") return Projection::LimitedSlopes;
  if (name == "average") return Projection::Average;
  throw ConfigError("unknown projection '" + std::string(name) + "' (expected limited or average)");
}

void RunConfig::validate() const {
  grid.validate();
  params.validate();
  if (model == ModelKind::Euler && closure != ClosureKind::None)
    throw ConfigError("the euler model admits only closure 'none'");
  if (!(ic.x_m > grid.x_lo && ic.x_m < grid.x_hi))
    throw ConfigError("interface position x_m must lie inside the domain");
  if (output.snapshot_stride < 0) throw ConfigError("snapshot stride must be non-negative");
  for (const PhysicalState* w : {&ic.left, &ic.right})
    if (!(w->rho > 0.0) || !(w->pi11 > 0.0) || !(w->pi22 > 0.0))
      throw ConfigError("initial states need rho, pi11 and pi22 positive");
}

EulerPrimitive to_euler(const PhysicalState& w) {
  return {w.rho, w.v1, w.rho * (w.pi11 + 2.0 * w.pi22) / 3.0};
}

std::vector<std::string> preset_names() { return {"paper-case-1", "paper-case-2", "sod-euler"}; }

RunConfig preset(std::string_view name) {
  RunConfig cfg;
  cfg.name = std::string(name);
  cfg.params = ModelParams{5.0 / 3.0, 1.0 / 20.0, 4.0 / 3.0, 1e-4, 1.0};
  if (name == "paper-case-1" || name == "sod-euler") {
    cfg.grid = GridConfig{800, 0.0, 1.0, 1.0 / 9.0, 0.07};
    cfg.ic.left = PhysicalState{1.0, 0.0, 5.0 / 3.0, 5.0 / 3.0, 0.0};
    cfg.ic.right = PhysicalState{1.0 / 8.0, 0.0, 4.0 / 3.0, 4.0 / 3.0, 0.0};
    if (name == "sod-euler") {
      cfg.model = ModelKind::Euler;
      cfg.closure = ClosureKind::None;
    }
    cfg.output.directory = "out/" + cfg.name;
    return cfg;
  }
  if (name == "paper-case-2") {
    cfg.grid = GridConfig{600, 0.0, 1.0, 0.025, kPaperCase2EndTime};
    cfg.params.epsilon = 1.0;
    cfg.ic.left = PhysicalState{1.0, 0.0, 30.0, 30.0, 0.0};
    cfg.ic.right = PhysicalState{1.0 / 40.0, 0.0, 8.0 / 3.0, 8.0 / 3.0, 0.0};
    cfg.output.directory = "out/" + cfg.name;
    return cfg;
  }
  throw UnknownPreset("unknown preset '" + std::string(name) +
                      "' (expected paper-case-1, paper-case-2 or sod-euler)");
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, std::string_view v) {
  // from_chars for double is unavailable on some toolchains; strtod is exact.
  std::string s(v);
  char* end = nullptr;
  const double d = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw ConfigError("config: '" + key + "' expects a number, got '" + s + "'");
  return d;
}

int to_int(const std::string& key, std::string_view v) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("config: '" + key + "' expects an integer, got '" + std::string(v) + "'");
  return out;
}

void put_state(std::ostringstream& os, const char* side, const PhysicalState& w) {
  os << side << ".rho = " << fmt(w.rho) << '\n'
     << side << ".v1 = " << fmt(w.v1) << '\n'
     << side << ".pi11 = " << fmt(w.pi11) << '\n'
     << side << ".pi22 = " << fmt(w.pi22) << '\n'
     << side << ".q1 = " << fmt(w.q1) << '\n';
}

}  // namespace

std::string dump_config(const RunConfig& c) {
  std::ostringstream os;
  os << "# stagger run configuration\n"
     << "name = " << c.name << '\n'
     << "model = " << to_string(c.model) << '\n'
     << "closure = " << to_string(c.closure) << '\n'
     << "projection = " << to_string(c.projection) << '\n'
     << "\n# grid\n"
     << "N = " << c.grid.N << '\n'
     << "x_lo = " << fmt(c.grid.x_lo) << '\n'
     << "x_hi = " << fmt(c.grid.x_hi) << '\n'
     << "lambda = " << fmt(c.grid.lambda) << '\n'
     << "t_end = " << fmt(c.grid.t_end) << '\n'
     << "\n# model constants\n"
     << "F = " << fmt(c.params.F) << '\n'
     << "b = " << fmt(c.params.b) << '\n'
     << "Dbar = " << fmt(c.params.Dbar) << '\n'
     << "epsilon = " << fmt(c.params.epsilon) << '\n'
     << "entropy_log_normalization = " << fmt(c.params.entropy_log_normalization) << '\n'
     << "gamma = " << fmt(c.gamma) << '\n'
     << "\n# riemann data\n"
     << "x_m = " << fmt(c.ic.x_m) << '\n';
  put_state(os, "left", c.ic.left);
  put_state(os, "right", c.ic.right);
  os << "\n# output\n"
     << "output.directory = " << c.output.directory << '\n'
     << "output.snapshots = " << c.output.snapshot_stride << '\n';
  return os.str();
}

RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::map<std::string, std::string> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view val = trim(line.substr(eq + 1));
    if (!seen.emplace(key, std::string(val)).second)
      throw ConfigError("config: duplicate key '" + key + "'");

    auto state_field = [&](PhysicalState& w, std::string_view field) {
      double& target = field == "rho"    ? w.rho
                       : field == "v1"   ? w.v1
                       : field == "pi11" ? w.pi11
                       : field == "pi22" ? w.pi22
                       : field == "q1"   ? w.q1
                                         : throw ConfigError("config: unknown key '" + key + "'");
      target = to_double(key, val);
    };

    if (key == "name") c.name = std::string(val);
    else if (key == "model") c.model = parse_model(val);
    else if (key == "closure") c.closure = parse_closure(val);
    else if (key == "projection") c.projection = parse_projection(val);
    else if (key == "N") c.grid.N = to_int(key, val);
    else if (key == "x_lo") c.grid.x_lo = to_double(key, val);
    else if (key == "x_hi") c.grid.x_hi = to_double(key, val);
    else if (key == "lambda") c.grid.lambda = to_double(key, val);
    else if (key == "t_end") c.grid.t_end = to_double(key, val);
    else if (key == "F") c.params.F = to_double(key, val);
    else if (key == "b") c.params.b = to_double(key, val);
    else if (key == "Dbar") c.params.Dbar = to_double(key, val);
    else if (key == "epsilon") c.params.epsilon = to_double(key, val);
    else if (key == "entropy_log_normalization") c.params.entropy_log_normalization = to_double(key, val);
    else if (key == "gamma") c.gamma = to_double(key, val);
    else if (key == "x_m") c.ic.x_m = to_double(key, val);
    else if (key.starts_with("left.")) state_field(c.ic.left, std::string_view(key).substr(5));
    else if (key.starts_with("right.")) state_field(c.ic.right, std::string_view(key).substr(6));
    else if (key == "output.directory") c.output.directory = std::string(val);
    else if (key == "output.snapshots") c.output.snapshot_stride = to_int(key, val);
    else throw ConfigError("config: unknown key '" + key + "'");
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace stagger
