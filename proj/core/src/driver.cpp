#include "stagger/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "stagger/diagnostics.hpp"
#include "stagger/errors.hpp"

namespace stagger {

namespace fs = std::filesystem;

const std::vector<std::string>& Profile::column_names() {
  static const std::vector<std::string> names{"x",  "rho",  "M1",   "u3", "u4",
                                              "q1", "pi11", "pi22", "v1", "Js"};
  return names;
}

const std::vector<double>& Profile::column(std::string_view name) const {
  if (name == "x") return x;
  if (name == "rho") return rho;
  if (name == "M1") return M1;
  if (name == "u3") return u3;
  if (name == "u4") return u4;
  if (name == "q1") return q1;
  if (name == "pi11") return pi11;
  if (name == "pi22") return pi22;
  if (name == "v1") return v1;
  if (name == "Js") return Js;
  throw std::out_of_range("unknown profile column " + std::string(name));
}

const std::vector<std::string>& report_fields() {
  static const std::vector<std::string> f{"rho", "M1", "pi11", "pi22", "q1"};
  return f;
}

namespace {

template <std::size_t M, class ToState>
FieldArray<M> riemann_field(const RunConfig& cfg, ToState&& to_state) {
  const auto& g = cfg.grid;
  FieldArray<M> u(g.N);
  const auto left = to_state(cfg.ic.left);
  const auto right = to_state(cfg.ic.right);
  for (int j = 0; j < g.N; ++j) u[j] = g.cell_center(j) < cfg.ic.x_m ? left : right;
  return fill_ghosts(u);
}

void reserve(Profile& p, std::size_t n) {
  for (auto* c : {&p.x, &p.rho, &p.M1, &p.u3, &p.u4, &p.q1, &p.pi11, &p.pi22, &p.v1, &p.Js})
    c->reserve(n);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

FieldArray<Moment13Model::kSize> moment_initial_field(const RunConfig& cfg) {
  const Moment13Model model(cfg.params);
  return riemann_field<Moment13Model::kSize>(
      cfg, [&](const PhysicalState& w) { return model.to_conserved(w); });
}

FieldArray<EulerModel::kSize> euler_initial_field(const RunConfig& cfg) {
  const EulerModel model(cfg.gamma);
  return riemann_field<EulerModel::kSize>(
      cfg, [&](const PhysicalState& w) { return model.to_conserved(to_euler(w)); });
}

Profile moment_profile(const Moment13Model& model, const FieldArray<Moment13Model::kSize>& u,
                       const std::vector<double>& js, const GridConfig& grid) {
  Profile p;
  const int n = u.interior();
  reserve(p, static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const PhysicalState w = model.to_physical(u[j]);
    p.x.push_back(grid.cell_center(j));
    p.rho.push_back(w.rho);
    p.M1.push_back(u[j][1]);
    p.u3.push_back(u[j][2]);
    p.u4.push_back(u[j][3]);
    p.q1.push_back(w.q1);
    p.pi11.push_back(w.pi11);
    p.pi22.push_back(w.pi22);
    p.v1.push_back(w.v1);
    p.Js.push_back(static_cast<std::size_t>(j) < js.size() ? js[static_cast<std::size_t>(j)] : 0.0);
  }
  return p;
}

Profile euler_profile(const EulerModel& model, const FieldArray<EulerModel::kSize>& u,
                      const GridConfig& grid) {
  Profile p;
  const int n = u.interior();
  reserve(p, static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const EulerPrimitive w = model.to_primitive(u[j]);
    const double pi = w.p / w.rho;
    p.x.push_back(grid.cell_center(j));
    p.rho.push_back(w.rho);
    p.M1.push_back(u[j][1]);
    p.u3.push_back(u[j][2]);
    p.u4.push_back(0.5 * w.rho * pi);
    p.q1.push_back(0.0);
    p.pi11.push_back(pi);
    p.pi22.push_back(pi);
    p.v1.push_back(w.v);
    p.Js.push_back(0.0);
  }
  return p;
}

std::map<std::string, FieldSummary> summarize(const Profile& p) {
  std::map<std::string, FieldSummary> out;
  for (const auto& name : report_fields()) {
    const auto& f = p.column(name);
    FieldSummary s;
    s.spurious_extrema = spurious_extrema_count(f);
    s.total_variation = total_variation(f);
    // Front positions are always taken from the density jump.
    const int i = steepest_jump_index(p.rho);
    s.front_position = 0.5 * (p.x[static_cast<std::size_t>(i)] + p.x[static_cast<std::size_t>(i) + 1]);
    out[name] = s;
  }
  return out;
}

namespace {

using SnapshotSink = std::function<void(int step, double t, const Profile&)>;

template <class Model, class MakeProfile>
RunOutcome execute(const RunConfig& cfg, const Model& model,
                   const FieldArray<Model::kSize>& ic, MakeProfile&& make_profile,
                   const SnapshotSink& sink) {
  RunOutcome out;
  const auto start = std::chrono::steady_clock::now();
  out.initial = make_profile(ic, std::vector<double>{});
  if (sink) sink(0, 0.0, *out.initial);
  SchemeOptions opts;
  opts.closure = cfg.closure;
  opts.projection = cfg.projection;
  CentralScheme<Model> scheme(model, cfg.grid.dx(), opts);
  const int stride = cfg.output.snapshot_stride;
  auto audit = [&](const FieldArray<Model::kSize>& u) {
    if constexpr (EntropicBalanceLaw<Model>) {
      for (int j = 0; j < u.interior(); ++j)
        out.min_entropy_production =
            std::min(out.min_entropy_production, model.entropy_production(u[j]));
    }
  };
  audit(ic);
  StepObserver<Model::kSize> observer = [&](int step, double t, const FieldArray<Model::kSize>& u,
                                            const std::vector<double>& js) {
    audit(u);
    if (sink && stride > 0 && step % stride == 0) sink(step, t, make_profile(u, js));
  };
  try {
    auto res = run(ic, cfg.grid, scheme, observer);
    out.steps = res.steps;
    out.t = res.t;
    out.diagnostics = std::move(res.diagnostics);
    if (res.steps > 0) {
      out.final_profile = make_profile(res.final_field, res.final_js);
      out.summary = summarize(*out.final_profile);
    }
  } catch (const SolverDivergence& e) {
    out.exit_code = kExitSolver;
    out.message = e.what();
  } catch (const DisagreementError& e) {
    out.exit_code = kExitSolver;
    out.message = e.what();
  } catch (const InvalidState& e) {
    out.exit_code = kExitInvalid;
    out.message = e.what();
  }
  out.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

RunOutcome execute(const RunConfig& cfg, const SnapshotSink& sink) {
  try {
    cfg.validate();
    if (cfg.model == ModelKind::Euler) {
      const EulerModel model(cfg.gamma);
      return execute(cfg, model, euler_initial_field(cfg),
                     [&](const FieldArray<3>& u, const std::vector<double>&) {
                       return euler_profile(model, u, cfg.grid);
                     },
                     sink);
    }
    const Moment13Model model(cfg.params);
    return execute(cfg, model, moment_initial_field(cfg),
                   [&](const FieldArray<5>& u, const std::vector<double>& js) {
                     return moment_profile(model, u, js, cfg.grid);
                   },
                   sink);
  } catch (const ConfigError& e) {
    RunOutcome out;
    out.exit_code = kExitConfig;
    out.message = e.what();
    return out;
  } catch (const InvalidState& e) {
    RunOutcome out;
    out.exit_code = kExitConfig;
    out.message = std::string("initial data: ") + e.what();
    return out;
  }
}

std::string snapshot_name(int step) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "snapshot_%06d.csv", step);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void log_outcome(std::ostream& log, const std::string& label, const RunOutcome& r) {
  log << label << ": ";
  if (r.exit_code != kExitOk) {
    log << "FAILED (exit " << r.exit_code << "): " << r.message << '\n';
    return;
  }
  log << r.steps << " steps to t=" << r.t << " in " << std::fixed << std::setprecision(2)
      << r.seconds << " s\n"
      << std::defaultfloat;
  for (const auto& [name, s] : r.summary)
    log << "  " << std::setw(5) << name << "  extrema " << std::setw(4) << s.spurious_extrema
        << "  TV " << std::setprecision(6) << s.total_variation << std::defaultfloat << '\n';
  if (r.final_profile) {
    const auto& rho = r.summary.at("rho");
    log << "  density front at x=" << rho.front_position << '\n';
  }
}

}  // namespace

RunOutcome simulate(const RunConfig& cfg) { return execute(cfg, SnapshotSink{}); }

RunOutcome run_and_report(const RunConfig& cfg, std::ostream& log) {
  const fs::path dir = cfg.output.directory;
  try {
    fs::create_directories(dir);
  } catch (const fs::filesystem_error& e) {
    RunOutcome out;
    out.exit_code = kExitConfig;
    out.message = e.what();
    return out;
  }
  RunOutcome out = execute(cfg, [&](int step, double, const Profile& p) {
    write_snapshot(dir / snapshot_name(step), p);
  });
  if (out.exit_code == kExitConfig) return out;
  write_text(dir / "config.txt", dump_config(cfg));
  write_diagnostics(dir / "diagnostics.csv", out.diagnostics);
  if (out.final_profile) {
    write_snapshot(dir / "final.csv", *out.final_profile);
    write_plot_script(dir / "plot.gp", cfg.name + " (" + std::string(to_string(cfg.closure)) + ")");
  }
  log_outcome(log, cfg.name, out);
  return out;
}

ComparisonReport compare_closures(const RunConfig& cfg, const std::optional<fs::path>& out_dir,
                                  std::ostream& log) {
  if (cfg.model != ModelKind::Moment13)
    throw ConfigError("compare: closures can only be compared on the moment13 model");
  ComparisonReport rep;
  RunConfig naive = cfg;
  naive.closure = ClosureKind::Naive;
  RunConfig entropic = cfg;
  entropic.closure = ClosureKind::EntropicScalar;
  if (out_dir) {
    naive.output.directory = (*out_dir / "naive").string();
    entropic.output.directory = (*out_dir / "entropic").string();
    rep.naive = run_and_report(naive, log);
    rep.entropic = run_and_report(entropic, log);
  } else {
    rep.naive = simulate(naive);
    rep.entropic = simulate(entropic);
    log_outcome(log, cfg.name + " naive", rep.naive);
    log_outcome(log, cfg.name + " entropic", rep.entropic);
  }
  if (!out_dir) return rep;

  std::ostringstream summary;
  summary << "closure,status,field,spurious_extrema,total_variation,front_position\n";
  for (const auto* r : {&rep.naive, &rep.entropic}) {
    const char* label = r == &rep.naive ? "naive" : "entropic-scalar";
    if (r->exit_code != kExitOk) {
      summary << label << ",failed,,,,\n";
      continue;
    }
    for (const auto& [name, s] : r->summary)
      summary << label << ",ok," << name << ',' << s.spurious_extrema << ','
              << fmt(s.total_variation) << ',' << fmt(s.front_position) << '\n';
  }
  write_text(*out_dir / "summary.csv", summary.str());

  // Side-by-side profiles of whichever runs completed.
  const Profile* a = rep.naive.final_profile ? &*rep.naive.final_profile : nullptr;
  const Profile* b = rep.entropic.final_profile ? &*rep.entropic.final_profile : nullptr;
  if (a || b) {
    const Profile& ref = a ? *a : *b;
    std::ostringstream csv;
    csv << "x";
    for (const auto& name : Profile::column_names()) {
      if (name == "x") continue;
      if (a) csv << ',' << name << "_naive";
      if (b) csv << ',' << name << "_entropic";
    }
    csv << '\n';
    for (std::size_t i = 0; i < ref.size(); ++i) {
      csv << fmt(ref.x[i]);
      for (const auto& name : Profile::column_names()) {
        if (name == "x") continue;
        if (a) csv << ',' << fmt(a->column(name)[i]);
        if (b) csv << ',' << fmt(b->column(name)[i]);
      }
      csv << '\n';
    }
    write_text(*out_dir / "compare.csv", csv.str());
  }
  return rep;
}

void write_snapshot(const fs::path& path, const Profile& p) {
  std::ostringstream os;
  const auto& names = Profile::column_names();
  for (std::size_t c = 0; c < names.size(); ++c) os << (c ? "," : "") << names[c];
  os << '\n';
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t c = 0; c < names.size(); ++c)
      os << (c ? "," : "") << fmt(p.column(names[c])[i]);
    os << '\n';
  }
  write_text(path, os.str());
}

Profile read_snapshot(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  std::string expected;
  for (const auto& n : Profile::column_names()) expected += (expected.empty() ? "" : ",") + n;
  if (line != expected) throw std::runtime_error("unexpected snapshot header in " + path.string());
  Profile p;
  std::vector<std::vector<double>*> cols{&p.x,    &p.rho,  &p.M1, &p.u3, &p.u4,
                                         &p.q1,   &p.pi11, &p.pi22, &p.v1, &p.Js};
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::size_t c = 0;
    while (std::getline(ls, cell, ',')) {
      if (c >= cols.size()) throw std::runtime_error("too many columns in " + path.string());
      cols[c++]->push_back(std::strtod(cell.c_str(), nullptr));
    }
    if (c != cols.size()) throw std::runtime_error("too few columns in " + path.string());
  }
  return p;
}

void write_diagnostics(const fs::path& path, const std::vector<StepRecord>& records) {
  std::ostringstream os;
  const std::size_t m = records.empty() ? 0 : records.front().totals.size();
  os << "step,t,dt";
  for (std::size_t k = 0; k < m; ++k) os << ",total_u" << k + 1;
  for (std::size_t k = 0; k < m; ++k) os << ",drift_u" << k + 1;
  for (std::size_t k = 0; k < m; ++k) os << ",tv_u" << k + 1;
  os << ",entropy_total,boundary_quiescent,stage_solves,newton_iterations,max_newton_iterations,"
        "bisection_fallbacks,max_residual,max_entropy_residual,min_entropy_production,max_abs_js\n";
  for (const auto& r : records) {
    os << r.step << ',' << fmt(r.t) << ',' << fmt(r.dt);
    for (double v : r.totals) os << ',' << fmt(v);
    for (double v : r.conservation_drift) os << ',' << fmt(v);
    for (double v : r.total_variation) os << ',' << fmt(v);
    const auto& s = r.stats;
    os << ',' << fmt(r.entropy_total) << ',' << (r.boundary_quiescent ? 1 : 0) << ','
       << s.stage_solves << ',' << s.newton_iterations << ',' << s.max_newton_iterations << ','
       << s.bisection_fallbacks << ',' << fmt(s.max_residual) << ','
       << fmt(s.max_entropy_residual) << ','
       << fmt(s.stage_solves > 0 && std::isfinite(s.min_entropy_production)
                  ? s.min_entropy_production
                  : 0.0)
       << ',' << fmt(s.max_abs_js) << '\n';
  }
  write_text(path, os.str());
}

void write_plot_script(const fs::path& path, const std::string& title) {
  std::ostringstream os;
  os << "# gnuplot script: gnuplot plot.gp  ->  profiles.png\n"
     << "set terminal pngcairo size 1200,1200\n"
     << "set output 'profiles.png'\n"
     << "set datafile separator ','\n"
     << "set key off\n"
     << "set multiplot layout 3,2 title '" << title << "'\n";
  const char* panels[][2] = {{"2", "rho"},  {"3", "M1"},  {"7", "pi11"},
                             {"8", "pi22"}, {"6", "q1"}, {"10", "Js"}};
  for (const auto& panel : panels) {
    os << "set title '" << panel[1] << "'\n"
       << "plot 'snapshot_000000.csv' every ::1 using 1:" << panel[0]
       << " with lines dashtype 2 lc rgb 'gray', \\\n"
       << "     'final.csv' every ::1 using 1:" << panel[0]
       << " with points pt 7 ps 0.3 lc rgb 'black'\n";
  }
  os << "unset multiplot\n";
  write_text(path, os.str());
}

}  // namespace stagger
