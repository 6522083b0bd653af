// Copyright 2026 The nvdfs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nvdfs/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "nvdfs/error.hpp"

namespace nvdfs {

namespace {

double number(const Json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  require(v.is_number(), std::string("config key '") + key + "' must be a number");
  return v.get<double>();
}

double time_or_inf(const Json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (j.at(key).is_null()) return std::numeric_limits<double>::infinity();
  return number(j, key, fallback);
}

Json time_json(double t) { return std::isinf(t) ? Json(nullptr) : Json(t); }

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    fail(ErrorCode::invalid_argument, std::string("config key '") + key + "' has the wrong type");
  }
}

std::vector<double> vec(const Json& j, const char* key) {
  require(j.contains(key) && j.at(key).is_array(), std::string("missing array '") + key + "'");
  return get_or<std::vector<double>>(j, key, {});
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) fail(ErrorCode::io, "cannot open '" + path + "' for writing");
  return f;
}

}  // namespace

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------- params

Json to_json(const SystemParams& p) {
  return Json{{"D", p.zero_field_splitting}, {"gamma_e", p.gamma_e},
              {"gamma_c", p.gamma_c},        {"d12", p.dipolar_coupling},
              {"Azz1", p.hyperfine_1},       {"Azz2", p.hyperfine_2},
              {"Bx", p.bx_gauss},            {"Bz", p.bz_gauss},
              {"T2e_us", time_json(p.t2_electron_us)},
              {"T2n1_us", time_json(p.t2_nuclear1_us)},
              {"T2n2_us", time_json(p.t2_nuclear2_us)}};
}

SystemParams params_from_json(const Json& j) {
  require(j.is_object(), "system parameters must be a JSON object");
  static const char* known[] = {"D",  "gamma_e", "gamma_c", "d12",     "Azz1",    "Azz2",
                                "Bx", "Bz",      "T2e_us",  "T2n1_us", "T2n2_us", "convention"};
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok |= key == k;
    require(ok, "unknown system parameter '" + key + "'");
  }
  const auto conv = parse_convention(get_or<std::string>(j, "convention", "literal"));
  SystemParams p = SystemParams::defaults(conv);
  p.zero_field_splitting = number(j, "D", p.zero_field_splitting);
  p.gamma_e = number(j, "gamma_e", p.gamma_e);
  p.gamma_c = number(j, "gamma_c", p.gamma_c);
  p.dipolar_coupling = number(j, "d12", p.dipolar_coupling);
  p.hyperfine_1 = number(j, "Azz1", p.hyperfine_1);
  p.hyperfine_2 = number(j, "Azz2", p.hyperfine_2);
  p.bx_gauss = number(j, "Bx", p.bx_gauss);
  p.bz_gauss = number(j, "Bz", p.bz_gauss);
  p.t2_electron_us = time_or_inf(j, "T2e_us", p.t2_electron_us);
  p.t2_nuclear1_us = time_or_inf(j, "T2n1_us", p.t2_nuclear1_us);
  p.t2_nuclear2_us = time_or_inf(j, "T2n2_us", p.t2_nuclear2_us);
  p.validate();
  return p;
}

// ---------------------------------------------------------------- shapes

Json to_json(const PulseShape& s) {
  Json j{{"kind", s.kind()}, {"omega_max", s.omega_max}, {"boundary_exponent", s.boundary_exponent}};
  if (const auto* g = std::get_if<GaussianPulse>(&s.form)) {
    j["amplitude"] = g->amplitude;
    j["sigma_us"] = g->sigma_us;
    j["delay_us"] = g->delay_us;
  } else if (const auto* p = std::get_if<PiecewiseConstantPulse>(&s.form)) {
    j["u_p"] = p->u_p;
    j["u_s"] = p->u_s;
  } else if (const auto* c = std::get_if<CrabPulse>(&s.form)) {
    j["coefficients"] = c->coefficients;
    j["randomization"] = c->randomization;
  } else if (const auto* m = std::get_if<PmPulse>(&s.form)) {
    j["coefficients"] = m->coefficients;
  }
  return j;
}

PulseShape shape_from_json(const Json& j) {
  require(j.is_object() && j.contains("kind"), "pulse shape needs a 'kind'");
  const auto kind = get_or<std::string>(j, "kind", "");
  PulseShape s;
  if (kind == "gaussian") {
    s.form = GaussianPulse{number(j, "amplitude", kPi), number(j, "sigma_us", 1.0), number(j, "delay_us", 1.0)};
  } else if (kind == "piecewise_constant") {
    s.form = PiecewiseConstantPulse{vec(j, "u_p"), vec(j, "u_s")};
  } else if (kind == "crab") {
    s.form = CrabPulse{get_or<std::vector<std::array<double, 4>>>(j, "coefficients", {}),
                       get_or<std::vector<double>>(j, "randomization", {})};
  } else if (kind == "pm") {
    s.form = PmPulse{get_or<std::vector<std::array<double, 3>>>(j, "coefficients", {})};
  } else {
    fail(ErrorCode::invalid_argument, "unknown pulse kind '" + kind + "'");
  }
  s.omega_max = number(j, "omega_max", kDefaultOmegaMax);
  s.boundary_exponent = number(j, "boundary_exponent", kDefaultBoundaryExponent);
  s.validate();
  return s;
}

// ---------------------------------------------------------------- optimizer config and results

Json to_json(const OptimizerConfig& c) {
  return Json{{"n_trials", c.n_trials},
              {"seed", c.seed},
              {"threads", c.threads},
              {"n_slices", c.n_slices},
              {"harmonics", c.harmonics},
              {"omega_max", c.omega_max},
              {"boundary_exponent", c.boundary_exponent},
              {"nm_max_evaluations", c.nelder_mead.max_evaluations},
              {"nm_tolerance", c.nelder_mead.f_tolerance},
              {"grape_slices", c.grape_slices},
              {"grape_max_iterations", c.grape_max_iterations},
              {"grape_tolerance", c.grape_tolerance},
              {"initial_level", c.task.initial_level},
              {"target_level", c.task.target_level},
              {"delta", c.disturbance.delta},
              {"kappa", c.disturbance.kappa}};
}

OptimizerConfig optimizer_config_from_json(const Json& j, OptimizerConfig c) {
  if (j.is_null()) return c;
  require(j.is_object(), "optimizer options must be a JSON object");
  const Json known = to_json(c);
  for (const auto& [key, value] : j.items())
    require(known.contains(key), "unknown optimizer option '" + key + "'");
  c.n_trials = get_or(j, "n_trials", c.n_trials);
  c.seed = get_or(j, "seed", c.seed);
  c.threads = get_or(j, "threads", c.threads);
  c.n_slices = get_or(j, "n_slices", c.n_slices);
  c.harmonics = get_or(j, "harmonics", c.harmonics);
  c.omega_max = get_or(j, "omega_max", c.omega_max);
  c.boundary_exponent = get_or(j, "boundary_exponent", c.boundary_exponent);
  c.nelder_mead.max_evaluations = get_or(j, "nm_max_evaluations", c.nelder_mead.max_evaluations);
  c.nelder_mead.f_tolerance = get_or(j, "nm_tolerance", c.nelder_mead.f_tolerance);
  c.grape_slices = get_or(j, "grape_slices", c.grape_slices);
  c.grape_max_iterations = get_or(j, "grape_max_iterations", c.grape_max_iterations);
  c.grape_tolerance = get_or(j, "grape_tolerance", c.grape_tolerance);
  c.task.initial_level = get_or(j, "initial_level", c.task.initial_level);
  c.task.target_level = get_or(j, "target_level", c.task.target_level);
  c.disturbance.delta = get_or(j, "delta", c.disturbance.delta);
  c.disturbance.kappa = get_or(j, "kappa", c.disturbance.kappa);
  c.validate();
  return c;
}

Json to_json(const OptimizationResult& r) {
  Json trials = Json::array();
  for (const auto& t : r.trials)
    trials.push_back({{"seed", t.seed},
                      {"best_fidelity", t.best_fidelity},
                      {"n_evaluations", t.n_evaluations},
                      {"budget_exhausted", t.budget_exhausted}});
  return Json{{"method", method_name(r.method)},
              {"duration_us", r.duration_us},
              {"n_slices", r.n_slices},
              {"best_fidelity", r.best_fidelity},
              {"n_evaluations", r.n_evaluations},
              {"seed", r.seed},
              {"best_trial", r.best_trial},
              {"trials", trials},
              {"best_shape", to_json(r.best_shape)}};
}

OptimizationResult result_from_json(const Json& j) {
  OptimizationResult r;
  r.method = parse_method(get_or<std::string>(j, "method", ""));
  r.duration_us = get_or(j, "duration_us", 0.0);
  r.n_slices = get_or<std::size_t>(j, "n_slices", 0);
  r.best_fidelity = get_or(j, "best_fidelity", 0.0);
  r.n_evaluations = get_or(j, "n_evaluations", 0);
  r.seed = get_or<std::uint64_t>(j, "seed", 0);
  r.best_trial = get_or(j, "best_trial", 0);
  if (j.contains("trials"))
    for (const auto& t : j.at("trials"))
      r.trials.push_back({get_or<std::uint64_t>(t, "seed", 0), get_or(t, "best_fidelity", 0.0),
                          get_or(t, "n_evaluations", 0), get_or(t, "budget_exhausted", false)});
  require(j.contains("best_shape"), "result lacks 'best_shape'");
  r.best_shape = shape_from_json(j.at("best_shape"));
  return r;
}

Json to_json(const CalibrationFit& f) {
  return Json{{"a", f.a},
              {"b", f.b},
              {"a_stderr", f.a_stderr},
              {"b_stderr", f.b_stderr},
              {"residual_rms", f.residual_rms},
              {"n_points", f.n_points}};
}

// ---------------------------------------------------------------- grids

Json to_json(const Grid& g) { return Json{{"delta_axis", g.delta_axis}, {"kappa_axis", g.kappa_axis}}; }

Grid grid_from_json(const Json& j) {
  if (j.is_null()) return Grid::standard();
  require(j.is_object(), "grid must be a JSON object");
  if (j.contains("delta_axis") || j.contains("kappa_axis")) {
    Grid g{vec(j, "delta_axis"), vec(j, "kappa_axis")};
    g.validate();
    return g;
  }
  const Grid base = Grid::standard();
  auto axis = [&](const char* key, const std::vector<double>& fallback) {
    if (!j.contains(key)) return std::array<double, 3>{fallback.front(), fallback.back(), double(fallback.size())};
    const auto v = get_or<std::vector<double>>(j, key, {});
    require(v.size() == 3, std::string("grid key '") + key + "' must be [lo, hi, count]");
    require(v[2] >= 1.0 && v[2] == std::floor(v[2]), "grid counts must be positive integers");
    return std::array<double, 3>{v[0], v[1], v[2]};
  };
  const auto d = axis("delta", base.delta_axis);
  const auto k = axis("kappa", base.kappa_axis);
  return Grid::uniform(d[0], d[1], static_cast<std::size_t>(d[2]), k[0], k[1], static_cast<std::size_t>(k[2]));
}

// ---------------------------------------------------------------- files

Json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorCode::io, "cannot open '" + path + "'");
  try {
    return Json::parse(f);
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::invalid_argument, "'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  auto f = open_out(path);
  f << text;
  if (!f) fail(ErrorCode::io, "failed writing '" + path + "'");
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  auto f = open_out(path);
  f << "time_us";
  for (int i = 1; i <= kDim; ++i) f << ",pop_" << i;
  f << ",trace,purity\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    f << format_number(traj.times[k]);
    for (int i = 0; i < kDim; ++i) f << ',' << format_number(traj.populations[k](i));
    f << ',' << format_number(traj.states[k].trace()) << ',' << format_number(traj.states[k].purity()) << '\n';
  }
}

void write_field_csv(const std::string& path, const SampledField& field) {
  auto f = open_out(path);
  f << "time_us,omega_p_radus,omega_s_radus\n";
  for (std::size_t i = 0; i < field.size(); ++i)
    f << format_number(field.times[i]) << ',' << format_number(field.omega_p[i]) << ','
      << format_number(field.omega_s[i]) << '\n';
}

void write_trace_csv(const std::string& path, const std::vector<double>& trace) {
  auto f = open_out(path);
  f << "eval_index,objective\n";
  for (std::size_t i = 0; i < trace.size(); ++i) f << i << ',' << format_number(trace[i]) << '\n';
}

void write_map_csv(const std::string& path, const RobustnessMap& map) {
  auto f = open_out(path);
  f << "# provenance=" << provenance_name(map.provenance)
    << "; rows follow delta_axis (rad/us), columns follow kappa_axis\n";
  auto row = [&](const char* name, const std::vector<double>& v) {
    f << name;
    for (double x : v) f << ',' << format_number(x);
    f << '\n';
  };
  row("delta_axis", map.delta_axis);
  row("kappa_axis", map.kappa_axis);
  f << "values\n";
  for (Eigen::Index i = 0; i < map.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < map.values.cols(); ++j) f << (j ? "," : "") << format_number(map.values(i, j));
    f << '\n';
  }
  if (map.provenance == Provenance::estimated) {
    f << "samples\ndelta,kappa,fidelity\n";
    for (const auto& s : map.samples)
      f << format_number(s.delta) << ',' << format_number(s.kappa) << ',' << format_number(s.fidelity) << '\n';
  }
}

std::vector<std::vector<double>> read_numeric_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorCode::io, "cannot open '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  std::size_t line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line[line.find_first_not_of(" \t")] == '#')
      continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t", used) != std::string::npos) numeric = false;
      } catch (const std::exception&) {
        numeric = false;
      }
    }
    if (!numeric) {
      if (first) {
        first = false;
        continue;
      }
      fail(ErrorCode::io, "'" + path + "' line " + std::to_string(line_no) + " is not numeric");
    }
    first = false;
    rows.push_back(std::move(row));
  }
  return rows;
}

SampledField read_field_csv(const std::string& path) {
  SampledField field;
  for (const auto& r : read_numeric_csv(path)) {
    require(r.size() >= 3, "field CSV rows need time_us, omega_p_radus, omega_s_radus");
    field.times.push_back(r[0]);
    field.omega_p.push_back(r[1]);
    field.omega_s.push_back(r[2]);
  }
  field.validate();
  return field;
}

MeasuredTrace read_trace_csv(const std::string& path) {
  MeasuredTrace t;
  for (const auto& r : read_numeric_csv(path)) {
    require(r.size() >= 2, "trace CSV rows need time_us, volts");
    t.times_us.push_back(r[0]);
    t.volts.push_back(r[1]);
  }
  t.validate();
  return t;
}

}  // namespace nvdfs
