// Command line driver: every library computation as a subcommand with
// machine-readable JSON or CSV output, reproducible sweeps, unit-suffix
// input, and gaussian/SI conversion applied only at emission.

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bbrad/bbrad.hpp"

namespace {

using nlohmann::ordered_json;

struct cli_usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- parsing

double parse_number(const std::string& s, const char** rest = nullptr) {
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin) throw cli_usage_error("not a number: '" + s + "'");
  if (rest) {
    *rest = end;
  } else {
    while (*end != '\0' && std::isspace(static_cast<unsigned char>(*end))) ++end;
    if (*end != '\0') throw cli_usage_error("trailing text after number: '" + s + "'");
  }
  return v;
}

double parse_suffixed(const std::string& s, const char* what,
                      const std::vector<std::pair<std::string, double>>& table) {
  const char* rest = nullptr;
  const double v = parse_number(s, &rest);
  std::string suffix(rest);
  suffix.erase(0, suffix.find_first_not_of(" \t"));
  suffix.erase(suffix.find_last_not_of(" \t") + 1);
  if (suffix.empty()) return v;  // bare numbers are gaussian cgs
  for (const auto& [name, factor] : table) {
    if (suffix == name) return v * factor;
  }
  std::string allowed;
  for (const auto& [name, factor] : table) allowed += name + " ";
  throw cli_usage_error(std::string("unknown ") + what + " suffix '" + suffix +
                        "' (accepted: " + allowed + "or none for cgs)");
}

double parse_length(const std::string& s) {  // -> cm
  return parse_suffixed(s, "length",
                        {{"cm", 1.0}, {"m", 1e2}, {"mm", 1e-1}, {"um", 1e-4}, {"nm", 1e-7}});
}

double parse_velocity(const std::string& s) {  // -> cm/s
  return parse_suffixed(s, "velocity", {{"cm/s", 1.0}, {"m/s", 1e2}, {"km/s", 1e5}});
}

double parse_mass(const std::string& s) {  // -> g
  return parse_suffixed(s, "mass", {{"g", 1.0}, {"kg", 1e3}, {"amu", bbrad::constants::amu}});
}

// Sweep grammar: a single number, or "start:stop:logN" / "start:stop:linN"
// (N points, geometric or arithmetic, ascending). Values are gaussian cgs.
std::vector<double> parse_sweep(const std::string& s, const char* what) {
  const auto c1 = s.find(':');
  if (c1 == std::string::npos) return {parse_number(s)};
  const auto c2 = s.find(':', c1 + 1);
  if (c2 == std::string::npos) {
    throw cli_usage_error(std::string(what) + ": sweep needs start:stop:logN or start:stop:linN");
  }
  const double a = parse_number(s.substr(0, c1));
  const double b = parse_number(s.substr(c1 + 1, c2 - c1 - 1));
  const std::string tail = s.substr(c2 + 1);
  bool log_spaced = false;
  if (tail.rfind("log", 0) == 0) {
    log_spaced = true;
  } else if (tail.rfind("lin", 0) != 0) {
    throw cli_usage_error(std::string(what) + ": sweep count must be logN or linN");
  }
  const double nd = parse_number(tail.substr(3));
  const int n = static_cast<int>(nd);
  if (nd != n || n < 1 || n > 100000) {
    throw cli_usage_error(std::string(what) + ": sweep count must be an integer in [1, 1e5]");
  }
  if (!(a <= b)) throw cli_usage_error(std::string(what) + ": sweep must be ascending");
  if (log_spaced && !(a > 0.0)) {
    throw cli_usage_error(std::string(what) + ": log sweep needs positive endpoints");
  }
  if (n == 1) {
    if (a != b) throw cli_usage_error(std::string(what) + ": a 1-point sweep needs start == stop");
    return {a};
  }
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    out[i] = log_spaced ? a * std::pow(b / a, t) : a + (b - a) * t;
  }
  return out;
}

// --------------------------------------------------------------- parallel

// Sweep points are independent; evaluate them on a small worker pool and
// keep output strictly in input order.
template <class F>
void parallel_for(std::size_t n, F&& fn) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned nt = static_cast<unsigned>(std::min<std::size_t>(hw, n));
  if (nt <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error = nullptr;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (unsigned t = 0; t < nt; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

// --------------------------------------------------------------- emission

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Document {
  ordered_json json;
  std::string csv_header;
  std::vector<std::string> csv_rows;
};

void emit(const Document& doc, const std::string& format) {
  if (format == "csv") {
    std::cout << doc.csv_header << "\n";
    for (const auto& row : doc.csv_rows) std::cout << row << "\n";
  } else {
    std::cout << doc.json.dump(2) << "\n";
  }
}

// value/unit/method/err_estimate block, converted to SI on request.
void put_result_fields(ordered_json& j, const bbrad::RateResult& r, bool si) {
  const double f = si ? r.unit.to_si : 1.0;
  j["value"] = r.value * f;
  j["unit"] = si ? r.unit.si : r.unit.gaussian;
  j["method"] = bbrad::method_name(r.method);
  j["err_estimate"] = r.err_estimate * f;
}

std::string csv_result_fields(const bbrad::RateResult& r, bool si) {
  const double f = si ? r.unit.to_si : 1.0;
  return fmt17(r.value * f) + "," + (si ? r.unit.si : r.unit.gaussian) + "," +
         bbrad::method_name(r.method) + "," + fmt17(r.err_estimate * f);
}

double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

ordered_json cross_block(const bbrad::RateResult& main, const bbrad::RateResult& ref, bool si) {
  ordered_json j;
  put_result_fields(j, ref, si);
  j["rel_diff"] = rel_diff(main.value, ref.value);
  return j;
}

// ----------------------------------------------------------------- options

struct Options {
  // model
  std::string model;
  std::string mass = "";     // suffixed; default electron mass
  double charge = bbrad::constants::e_esu;
  std::string radius = "";   // suffixed
  double eps_re = 0.0, eps_im = 0.0;
  double omega0 = 0.0, dipole = 0.0, linewidth = 0.0, p1 = 1.0, p2 = 0.0;

  // environment / sweeps
  double temperature = 300.0;
  std::string temperatures = "";
  std::string velocity = "";    // suffixed scalar
  std::string velocities = ""; // sweep
  double t_particle = 0.0;     // 0 = same as lab
  std::string separation = ""; // suffixed scalar
  std::string separations = ""; // sweep
  std::string statistics = "full";

  // output
  std::string format = "json";
  std::string units = "gaussian";
  std::uint64_t seed = 0;

  // quadrature overrides
  double rel_tol = 1e-10;
  double tail_cutoff = 60.0;
  int max_subdivisions = 2000;

  // spectrum
  std::string branch = "planck";
  double x0 = 1.0;
  double n0 = 0.0;  // 0 = canonical value of the branch at x0
  std::string grid = "0.1:20:log60";

  // fokker-planck / ou
  std::string particle_mass = "";
  double xi = 1.0;
  std::string v0 = "0";
  std::string sigma0 = "";  // empty = thermal width
  int cells = 1024;
  double half_width = 8.0;
  double t_final = 0.0;  // 0 = 10/xi
  double dt = 0.0;       // 0 = 5e-4/xi
  std::string checkpoints = "";

  // montecarlo
  std::string kind = "kicks";
  double damping = 0.0;
  double duration = 0.0;  // 0 = 30/damping
  int bins = 512;
  int paths = 64;
  double x_max = 30.0;
  long long samples = 1000000;
  std::string convention = "uniform";
  int modes = 128;
  bool negative_control = false;

  // air
  std::string molecule_mass = "";  // suffixed; default 28.97 amu
  double number_density = 2.446e19;

  // verify
  std::uint64_t verify_seed = 20260818ULL;
  std::string verify_format = "table";

  bool si() const { return units == "si"; }
  bbrad::QuadratureConfig quad() const {
    bbrad::QuadratureConfig cfg;
    cfg.rel_tol = rel_tol;
    cfg.tail_cutoff = tail_cutoff;
    cfg.max_subdivisions = max_subdivisions;
    return cfg;
  }
};

bbrad::PolarizabilityModel build_model(const Options& o) {
  if (o.model == "electron") {
    const double m = o.mass.empty() ? bbrad::constants::m_e : parse_mass(o.mass);
    return bbrad::ElectronModel{m, o.charge};
  }
  if (o.model == "sphere") {
    if (o.radius.empty()) throw cli_usage_error("--model sphere requires --radius");
    if (o.eps_re == 0.0 && o.eps_im == 0.0) {
      throw cli_usage_error("--model sphere requires --epsilon");
    }
    return bbrad::SphereModel{parse_length(o.radius), {o.eps_re, o.eps_im}};
  }
  if (o.model == "two-level") {
    if (o.omega0 <= 0.0 || o.dipole <= 0.0 || o.linewidth <= 0.0) {
      throw cli_usage_error("--model two-level requires --omega0, --dipole, --linewidth");
    }
    return bbrad::TwoLevelModel{o.omega0, o.dipole, o.linewidth, o.p1, o.p2};
  }
  if (o.model.empty()) throw cli_usage_error("this subcommand requires --model");
  throw cli_usage_error("unknown model '" + o.model + "'");
}

// Exactly one model per invocation: reject parameters of models that were
// not selected.
void enforce_model_params(const CLI::App* sub, const std::string& model) {
  const auto given = [sub](const char* name) {
    const CLI::Option* opt = sub->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  if (model != "electron" && (given("--mass") || given("--charge"))) {
    throw cli_usage_error("--mass/--charge apply only to --model electron");
  }
  if (model != "sphere" && (given("--radius") || given("--epsilon") || given("--epsilon-im"))) {
    throw cli_usage_error("--radius/--epsilon apply only to --model sphere");
  }
  if (model != "two-level" &&
      (given("--omega0") || given("--dipole") || given("--linewidth") || given("--p1") ||
       given("--p2"))) {
    throw cli_usage_error("--omega0/--dipole/--linewidth/--p1/--p2 apply only to --model two-level");
  }
}

ordered_json model_json(const bbrad::PolarizabilityModel& m) {
  ordered_json j;
  if (const auto* e = std::get_if<bbrad::ElectronModel>(&m)) {
    j["kind"] = "electron";
    j["mass_g"] = e->mass;
    j["charge_statC"] = e->charge;
  } else if (const auto* s = std::get_if<bbrad::SphereModel>(&m)) {
    j["kind"] = "sphere";
    j["radius_cm"] = s->radius;
    j["epsilon"] = {s->epsilon.real(), s->epsilon.imag()};
  } else if (const auto* t = std::get_if<bbrad::TwoLevelModel>(&m)) {
    j["kind"] = "two_level";
    j["omega0_rad_s"] = t->omega0;
    j["dipole_statC_cm"] = t->mu;
    j["linewidth_s"] = t->beta;
    j["p1"] = t->p1;
    j["p2"] = t->p2;
  }
  return j;
}

bbrad::Statistics parse_statistics(const std::string& s) {
  if (s == "particle") return bbrad::Statistics::particle_n;
  if (s == "wave") return bbrad::Statistics::wave_n2;
  if (s == "full") return bbrad::Statistics::full_n2_plus_n;
  throw cli_usage_error("--statistics must be particle, wave, or full");
}

std::vector<double> temperature_list(const Options& o) {
  if (!o.temperatures.empty()) return parse_sweep(o.temperatures, "--temperatures");
  return {o.temperature};
}

ordered_json doc_header(const char* command, const Options& o) {
  ordered_json j;
  j["command"] = command;
  j["unit_system"] = o.units;
  return j;
}

// ----------------------------------------------------------------- runners

Document run_diffusion(const Options& o) {
  const bbrad::PolarizabilityModel m = build_model(o);
  const bbrad::Statistics stats = parse_statistics(o.statistics);
  const std::vector<double> temps = temperature_list(o);
  const bbrad::QuadratureConfig cfg = o.quad();

  std::vector<bbrad::RateResult> values(temps.size());
  std::vector<std::optional<bbrad::RateResult>> closed(temps.size());
  parallel_for(temps.size(), [&](std::size_t i) {
    const bbrad::ThermalEnvironment env{temps[i], stats};
    values[i] = bbrad::diffusion_constant(m, env, cfg);
    if (!std::holds_alternative<bbrad::TwoLevelModel>(m)) {
      closed[i] = bbrad::diffusion_closed_form(m, env);
    }
  });

  Document doc;
  doc.json = doc_header("diffusion", o);
  doc.json["model"] = model_json(m);
  doc.json["statistics"] = o.statistics;
  doc.csv_header = "temperature,value,unit,method,err_estimate,closed_form,rel_diff";
  auto& rows = doc.json["results"] = ordered_json::array();
  for (std::size_t i = 0; i < temps.size(); ++i) {
    ordered_json row;
    row["temperature"] = temps[i];
    put_result_fields(row, values[i], o.si());
    std::string csv = fmt17(temps[i]) + "," + csv_result_fields(values[i], o.si());
    if (closed[i]) {
      row["cross_check"] = cross_block(values[i], *closed[i], o.si());
      const double f = o.si() ? closed[i]->unit.to_si : 1.0;
      csv += "," + fmt17(closed[i]->value * f) + "," +
             fmt17(rel_diff(values[i].value, closed[i]->value));
    } else {
      csv += ",,";
    }
    rows.push_back(std::move(row));
    doc.csv_rows.push_back(std::move(csv));
  }
  return doc;
}

Document run_drag(const Options& o) {
  const bbrad::PolarizabilityModel m = build_model(o);
  const std::vector<double> temps = temperature_list(o);
  const bbrad::QuadratureConfig cfg = o.quad();
  const std::optional<double> pmass =
      o.particle_mass.empty() ? std::nullopt : std::optional<double>(parse_mass(o.particle_mass));

  std::vector<bbrad::DragCoefficient> values(temps.size());
  std::vector<std::optional<bbrad::RateResult>> closed(temps.size());
  parallel_for(temps.size(), [&](std::size_t i) {
    values[i] = bbrad::drag_coefficient_nonrel(m, temps[i], cfg, pmass);
    if (const auto* t = std::get_if<bbrad::TwoLevelModel>(&m)) {
      closed[i] = bbrad::two_level_drag(*t, temps[i]);
    } else {
      closed[i] = bbrad::drag_closed_form(m, temps[i]);
    }
  });

  Document doc;
  doc.json = doc_header("drag", o);
  doc.json["model"] = model_json(m);
  doc.csv_header = "temperature,value,unit,method,err_estimate,closed_form,rel_diff";
  auto& rows = doc.json["results"] = ordered_json::array();
  for (std::size_t i = 0; i < temps.size(); ++i) {
    ordered_json row;
    row["temperature"] = temps[i];
    put_result_fields(row, values[i].force_per_velocity, o.si());
    if (values[i].xi) {
      ordered_json xj;
      put_result_fields(xj, *values[i].xi, o.si());
      row["xi"] = std::move(xj);
    }
    std::string csv =
        fmt17(temps[i]) + "," + csv_result_fields(values[i].force_per_velocity, o.si());
    if (closed[i]) {
      row["cross_check"] = cross_block(values[i].force_per_velocity, *closed[i], o.si());
      const double f = o.si() ? closed[i]->unit.to_si : 1.0;
      csv += "," + fmt17(closed[i]->value * f) + "," +
             fmt17(rel_diff(values[i].force_per_velocity.value, closed[i]->value));
    } else {
      csv += ",,";
    }
    rows.push_back(std::move(row));
    doc.csv_rows.push_back(std::move(csv));
  }
  return doc;
}

Document run_drag_relativistic(const Options& o) {
  const bbrad::PolarizabilityModel m = build_model(o);
  const bbrad::QuadratureConfig cfg = o.quad();
  std::vector<double> vels;
  if (!o.velocities.empty()) {
    vels = parse_sweep(o.velocities, "--velocities");
  } else if (!o.velocity.empty()) {
    vels = {parse_velocity(o.velocity)};
  } else {
    throw cli_usage_error("drag-relativistic requires --velocity or --velocities");
  }
  const double t_lab = o.temperature;
  const double t_part = o.t_particle > 0.0 ? o.t_particle : t_lab;

  std::vector<bbrad::RateResult> direct(vels.size()), composed(vels.size());
  parallel_for(vels.size(), [&](std::size_t i) {
    const auto st = bbrad::RelativisticState::make(vels[i], t_lab, t_part);
    direct[i] = bbrad::total_force_relativistic(st, m, cfg);
    composed[i] = bbrad::total_force_composed(st, m, cfg);
  });

  Document doc;
  doc.json = doc_header("drag-relativistic", o);
  doc.json["model"] = model_json(m);
  doc.json["t_lab"] = t_lab;
  doc.json["t_particle"] = t_part;
  doc.csv_header = "velocity,t_lab,t_particle,value,unit,method,err_estimate,composed,rel_diff";
  auto& rows = doc.json["results"] = ordered_json::array();
  const double vf = o.si() ? 1e-2 : 1.0;
  for (std::size_t i = 0; i < vels.size(); ++i) {
    ordered_json row;
    row["velocity"] = vels[i] * vf;
    row["t_lab"] = t_lab;
    row["t_particle"] = t_part;
    put_result_fields(row, direct[i], o.si());
    row["cross_check"] = cross_block(direct[i], composed[i], o.si());
    const double ff = o.si() ? direct[i].unit.to_si : 1.0;
    doc.csv_rows.push_back(fmt17(vels[i] * vf) + "," + fmt17(t_lab) + "," + fmt17(t_part) + "," +
                           csv_result_fields(direct[i], o.si()) + "," +
                           fmt17(composed[i].value * ff) + "," +
                           fmt17(rel_diff(direct[i].value, composed[i].value)));
    rows.push_back(std::move(row));
  }
  return doc;
}

Document run_decoherence(const Options& o) {
  const bbrad::PolarizabilityModel m = build_model(o);
  const bbrad::QuadratureConfig cfg = o.quad();
  std::vector<double> seps;
  if (!o.separations.empty()) {
    seps = parse_sweep(o.separations, "--separations");
  } else if (!o.separation.empty()) {
    seps = {parse_length(o.separation)};
  } else {
    throw cli_usage_error("decoherence requires --separation or --separations");
  }

  std::vector<bbrad::RateResult> values(seps.size());
  parallel_for(seps.size(), [&](std::size_t i) {
    values[i] = bbrad::decoherence_factor(m, o.temperature, seps[i], cfg);
  });

  Document doc;
  doc.json = doc_header("decoherence", o);
  doc.json["model"] = model_json(m);
  doc.json["temperature"] = o.temperature;
  doc.csv_header = "separation,value,unit,method,err_estimate";
  auto& rows = doc.json["results"] = ordered_json::array();
  const double lf = o.si() ? 1e-2 : 1.0;
  for (std::size_t i = 0; i < seps.size(); ++i) {
    ordered_json row;
    row["separation"] = seps[i] * lf;
    put_result_fields(row, values[i], o.si());
    rows.push_back(std::move(row));
    doc.csv_rows.push_back(fmt17(seps[i] * lf) + "," + csv_result_fields(values[i], o.si()));
  }
  return doc;
}

Document run_lambda(const Options& o) {
  const bbrad::PolarizabilityModel m = build_model(o);
  const bbrad::QuadratureConfig cfg = o.quad();
  const std::vector<double> temps = temperature_list(o);

  std::vector<bbrad::RateResult> values(temps.size());
  std::vector<std::optional<bbrad::RateResult>> closed(temps.size());
  parallel_for(temps.size(), [&](std::size_t i) {
    values[i] = bbrad::lambda_from_limit(m, temps[i], cfg);
    if (const auto* s = std::get_if<bbrad::SphereModel>(&m)) {
      closed[i] = bbrad::scattering_constant_lambda(*s, temps[i]);
    }
  });

  Document doc;
  doc.json = doc_header("lambda", o);
  doc.json["model"] = model_json(m);
  doc.csv_header = "temperature,value,unit,method,err_estimate,closed_form,rel_diff";
  auto& rows = doc.json["results"] = ordered_json::array();
  for (std::size_t i = 0; i < temps.size(); ++i) {
    ordered_json row;
    row["temperature"] = temps[i];
    put_result_fields(row, values[i], o.si());
    std::string csv = fmt17(temps[i]) + "," + csv_result_fields(values[i], o.si());
    if (closed[i]) {
      row["cross_check"] = cross_block(values[i], *closed[i], o.si());
      const double f = o.si() ? closed[i]->unit.to_si : 1.0;
      csv += "," + fmt17(closed[i]->value * f) + "," +
             fmt17(rel_diff(values[i].value, closed[i]->value));
    } else {
      csv += ",,";
    }
    rows.push_back(std::move(row));
    doc.csv_rows.push_back(std::move(csv));
  }
  return doc;
}

Document run_spectrum(const Options& o) {
  bbrad::SpectrumBranch branch;
  if (o.branch == "wien") {
    branch = bbrad::SpectrumBranch::wien;
  } else if (o.branch == "rayleigh-jeans") {
    branch = bbrad::SpectrumBranch::rayleigh_jeans;
  } else if (o.branch == "planck") {
    branch = bbrad::SpectrumBranch::planck;
  } else {
    throw cli_usage_error("--branch must be wien, rayleigh-jeans, or planck");
  }
  const std::vector<double> xs = parse_sweep(o.grid, "--grid");
  // default anchor occupation: the named spectrum's own value at x0
  double n0 = o.n0;
  if (!(n0 > 0.0)) {
    switch (branch) {
      case bbrad::SpectrumBranch::wien: n0 = std::exp(-o.x0); break;
      case bbrad::SpectrumBranch::rayleigh_jeans: n0 = 1.0 / o.x0; break;
      default: n0 = 1.0 / std::expm1(o.x0); break;
    }
  }
  const double omega_T = bbrad::constants::thermal_omega(o.temperature);
  std::vector<double> grid(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) grid[i] = xs[i] * omega_T;
  const bbrad::SpectrumSolution sol =
      bbrad::spectrum_ode_solve(branch, o.temperature, o.x0 * omega_T, n0, grid, o.rel_tol);

  Document doc;
  doc.json = doc_header("spectrum", o);
  doc.json["branch"] = o.branch;
  doc.json["temperature"] = o.temperature;
  doc.json["x0"] = o.x0;
  doc.json["n0"] = n0;
  doc.json["integration_constant"] = sol.integration_constant;
  doc.csv_header = "x,omega,value,unit,method,err_estimate,analytic,rel_diff";
  auto& rows = doc.json["results"] = ordered_json::array();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double n = sol.n_values[i];
    const double exact = bbrad::spectrum_analytic(branch, o.x0, n0, xs[i]);
    const bbrad::RateResult rr{n, bbrad::units::dimensionless, o.rel_tol * n,
                               bbrad::Method::quadrature};
    ordered_json row;
    row["x"] = xs[i];
    row["omega"] = grid[i];
    put_result_fields(row, rr, o.si());
    row["analytic"] = exact;
    row["rel_diff"] = rel_diff(n, exact);
    rows.push_back(std::move(row));
    doc.csv_rows.push_back(fmt17(xs[i]) + "," + fmt17(grid[i]) + "," +
                           csv_result_fields(rr, o.si()) + "," + fmt17(exact) + "," +
                           fmt17(rel_diff(n, exact)));
  }
  return doc;
}

Document run_fokker_planck(const Options& o) {
  if (o.particle_mass.empty()) throw cli_usage_error("fokker-planck requires --particle-mass");
  const double mass = parse_mass(o.particle_mass);
  const double T = o.temperature;
  const double xi = o.xi;
  if (!(xi > 0.0)) throw cli_usage_error("--xi must be positive");
  const double vth = std::sqrt(bbrad::constants::k_B * T / mass);
  const double v0 = parse_velocity(o.v0);
  const double sigma0 = o.sigma0.empty() ? vth : parse_velocity(o.sigma0);
  const double t_final = o.t_final > 0.0 ? o.t_final : 10.0 / xi;
  const double dt = o.dt > 0.0 ? o.dt : 5e-4 / xi;

  bbrad::VelocityDistribution f = bbrad::gaussian_distribution(
      bbrad::velocity_grid(mass, T, o.cells, o.half_width), mass, T, xi, v0, sigma0);
  const double norm0 = f.norm();
  f = bbrad::fokker_planck_evolve(f, xi, mass, T, t_final, dt);

  const bbrad::VelocityDistribution mb = bbrad::maxwell_boltzmann(f.v, mass, T, xi);
  double l1 = 0.0;
  for (std::size_t i = 0; i < f.f.size(); ++i) {
    l1 += std::abs(f.f[i] / f.norm() - mb.f[i] / mb.norm()) * f.dv();
  }

  const double mean = f.mean();
  const double var = f.variance();
  const double mean_ref = bbrad::ou_mean(v0, xi, t_final);
  const double var_ref = bbrad::ou_variance(sigma0 * sigma0, xi, mass, T, t_final);

  Document doc;
  doc.json = doc_header("fokker-planck", o);
  doc.json["particle_mass_g"] = mass;
  doc.json["temperature"] = T;
  doc.json["xi"] = xi;
  doc.json["t_final"] = t_final;
  doc.json["dt"] = dt;
  doc.csv_header = "velocity,value,unit,method,err_estimate";
  auto& rows = doc.json["results"] = ordered_json::array();

  const auto push_quantity = [&](const char* name, const bbrad::RateResult& r,
                                 std::optional<double> analytic) {
    ordered_json row;
    row["quantity"] = name;
    put_result_fields(row, r, o.si());
    if (analytic) {
      const double fconv = o.si() ? r.unit.to_si : 1.0;
      row["analytic"] = *analytic * fconv;
      row["rel_diff"] = rel_diff(r.value, *analytic);
    }
    rows.push_back(std::move(row));
  };
  push_quantity("mean", {mean, bbrad::units::velocity, 0.0, bbrad::Method::quadrature}, mean_ref);
  push_quantity("variance", {var, bbrad::units::velocity_squared, 0.0, bbrad::Method::quadrature},
                var_ref);
  push_quantity("l1_to_equilibrium",
                {l1, bbrad::units::dimensionless, 0.0, bbrad::Method::quadrature}, std::nullopt);
  push_quantity("norm_drift",
                {std::abs(f.norm() - norm0) / norm0, bbrad::units::dimensionless, 0.0,
                 bbrad::Method::quadrature},
                std::nullopt);

  auto& dist = doc.json["distribution"] = ordered_json::array();
  const double vf = o.si() ? 1e-2 : 1.0;
  const double ff = o.si() ? 1e2 : 1.0;
  for (std::size_t i = 0; i < f.v.size(); ++i) {
    dist.push_back({f.v[i] * vf, f.f[i] * ff});
    const bbrad::RateResult rr{f.f[i], bbrad::units::velocity_density, 0.0,
                               bbrad::Method::quadrature};
    doc.csv_rows.push_back(fmt17(f.v[i] * vf) + "," + csv_result_fields(rr, o.si()));
  }
  return doc;
}

Document run_montecarlo(const Options& o) {
  Document doc;
  doc.json = doc_header("montecarlo", o);
  doc.json["kind"] = o.kind;
  doc.json["seed"] = o.seed;
  doc.csv_header = "quantity,t,value,unit,method,err_estimate,reference,rel_diff";
  // ordered_json object insertion invalidates element references, so the
  // rows live in a local array until every top-level key is in place.
  ordered_json rows = ordered_json::array();

  const auto push_row = [&](const std::string& name, std::optional<double> t,
                            const bbrad::RateResult& r, std::optional<double> reference) {
    ordered_json row;
    row["quantity"] = name;
    if (t) row["t"] = *t;
    put_result_fields(row, r, o.si());
    std::string csv = name + "," + (t ? fmt17(*t) : "") + "," + csv_result_fields(r, o.si());
    if (reference) {
      const double fconv = o.si() ? r.unit.to_si : 1.0;
      row["reference"] = *reference * fconv;
      row["rel_diff"] = rel_diff(r.value, *reference);
      if (r.err_estimate > 0.0) {
        row["sigma_distance"] = std::abs(r.value - *reference) / r.err_estimate;
      }
      csv += "," + fmt17(*reference * fconv) + "," + fmt17(rel_diff(r.value, *reference));
    } else {
      csv += ",,";
    }
    rows.push_back(std::move(row));
    doc.csv_rows.push_back(std::move(csv));
  };

  if (o.kind == "kicks") {
    const bbrad::PolarizabilityModel m = build_model(o);
    if (!(o.damping > 0.0)) throw cli_usage_error("--kind kicks requires --damping");
    bbrad::KickProcessSpec spec;
    spec.model = m;
    spec.T = o.temperature;
    spec.beta = o.damping;
    spec.frequency_bins = o.bins;
    spec.duration = o.duration > 0.0 ? o.duration : 30.0 / o.damping;
    spec.seed = o.seed;
    spec.paths = o.paths;
    spec.x_max = o.x_max;
    const bbrad::KickSimulationResult r = bbrad::simulate_kicks(spec);
    const double d_ref =
        bbrad::diffusion_constant(m, {o.temperature, bbrad::Statistics::particle_n}, o.quad())
            .value;
    doc.json["model"] = model_json(m);
    doc.json["total_kicks"] = r.total_kicks;
    doc.json["relative_se"] = r.relative_se;
    doc.json["precision_warning"] = r.precision_warning;
    push_row("diffusion_estimate", std::nullopt, r.diffusion_estimate, d_ref);
    push_row("msq_momentum", std::nullopt, r.msq_momentum,
             d_ref / (2.0 * o.damping));
  } else if (o.kind == "recoil") {
    const bbrad::RecoilSampling conv = o.convention == "phase-function"
                                           ? bbrad::RecoilSampling::phase_function
                                           : bbrad::RecoilSampling::paper_uniform;
    if (o.convention != "uniform" && o.convention != "phase-function") {
      throw cli_usage_error("--convention must be uniform or phase-function");
    }
    const bbrad::RecoilMoment r = bbrad::recoil_second_moment(conv, o.samples, o.seed);
    doc.json["convention"] = o.convention;
    doc.json["samples"] = r.samples;
    push_row("recoil_second_moment", std::nullopt,
             {r.value, bbrad::units::dimensionless, r.standard_error, bbrad::Method::monte_carlo},
             2.0 / 3.0);
  } else if (o.kind == "ou") {
    if (o.particle_mass.empty()) throw cli_usage_error("--kind ou requires --particle-mass");
    const double mass = parse_mass(o.particle_mass);
    if (!(o.xi > 0.0)) throw cli_usage_error("--xi must be positive");
    const double t_final = o.t_final > 0.0 ? o.t_final : 3.0 / o.xi;
    const double dt = o.dt > 0.0 ? o.dt : 5e-3 / o.xi;
    const double v0 = parse_velocity(o.v0);
    std::vector<double> checkpoints;
    if (!o.checkpoints.empty()) checkpoints = parse_sweep(o.checkpoints, "--checkpoints");
    const bbrad::OUEnsembleMoments m = bbrad::ou_trajectories(
        o.xi, mass, o.temperature, o.paths, t_final, dt, o.seed, v0, checkpoints);
    doc.json["paths"] = m.paths;
    for (std::size_t i = 0; i < m.times.size(); ++i) {
      push_row("mean", m.times[i],
               {m.mean[i], bbrad::units::velocity, m.mean_se[i], bbrad::Method::monte_carlo},
               bbrad::ou_mean(v0, o.xi, m.times[i]));
      push_row("variance", m.times[i],
               {m.variance[i], bbrad::units::velocity_squared, m.variance_se[i],
                bbrad::Method::monte_carlo},
               bbrad::ou_variance(0.0, o.xi, mass, o.temperature, m.times[i]));
    }
  } else if (o.kind == "independence") {
    bbrad::FieldSampleSpec spec;
    spec.mode_count = o.modes;
    spec.sample_count = static_cast<int>(o.samples == 1000000 ? 10000 : o.samples);
    spec.seed = o.seed;
    const bbrad::IndependenceReport r =
        bbrad::gaussian_independence_test(spec, o.negative_control);
    doc.json["mode_count"] = r.mode_count;
    doc.json["sample_count"] = r.sample_count;
    doc.json["negative_control"] = o.negative_control;
    doc.json["correlation_pass"] = r.correlation_pass;
    doc.json["factorization_pass"] = r.factorization_pass;
    doc.json["pass"] = r.pass;
    const double se = 1.0 / std::sqrt(static_cast<double>(r.sample_count));
    push_row("correlation", std::nullopt,
             {r.correlation, bbrad::units::dimensionless, se, bbrad::Method::monte_carlo}, 0.0);
    push_row("max_cf_deviation", std::nullopt,
             {r.max_cf_deviation, bbrad::units::dimensionless, se, bbrad::Method::monte_carlo},
             0.0);
    push_row("correlation_bound", std::nullopt,
             {r.correlation_bound, bbrad::units::dimensionless, 0.0, bbrad::Method::closed_form},
             std::nullopt);
    push_row("cf_bound", std::nullopt,
             {r.cf_bound, bbrad::units::dimensionless, 0.0, bbrad::Method::closed_form},
             std::nullopt);
  } else {
    throw cli_usage_error("--kind must be kicks, recoil, ou, or independence");
  }
  doc.json["results"] = std::move(rows);
  return doc;
}

Document run_air(const Options& o) {
  bbrad::AirEnvironment env;
  env.T = o.temperature;
  env.molecule_mass =
      o.molecule_mass.empty() ? 28.97 * bbrad::constants::amu : parse_mass(o.molecule_mass);
  env.number_density = o.number_density;
  if (o.radius.empty()) throw cli_usage_error("air requires --radius");
  env.radius = parse_length(o.radius);

  const std::vector<double> temps = temperature_list(o);
  std::vector<bbrad::RateResult> values(temps.size());
  std::vector<bbrad::RateResult> closed(temps.size());
  parallel_for(temps.size(), [&](std::size_t i) {
    bbrad::AirEnvironment e = env;
    e.T = temps[i];
    values[i] = bbrad::air_diffusion(e, o.quad());
    closed[i] = bbrad::air_diffusion_closed_form(e);
  });

  Document doc;
  doc.json = doc_header("air", o);
  doc.json["radius_cm"] = env.radius;
  doc.json["molecule_mass_g"] = env.molecule_mass;
  doc.json["number_density_cm3"] = env.number_density;
  doc.csv_header = "temperature,value,unit,method,err_estimate,closed_form,rel_diff";
  auto& rows = doc.json["results"] = ordered_json::array();
  for (std::size_t i = 0; i < temps.size(); ++i) {
    ordered_json row;
    row["temperature"] = temps[i];
    put_result_fields(row, values[i], o.si());
    row["cross_check"] = cross_block(values[i], closed[i], o.si());
    const double f = o.si() ? closed[i].unit.to_si : 1.0;
    rows.push_back(std::move(row));
    doc.csv_rows.push_back(fmt17(temps[i]) + "," + csv_result_fields(values[i], o.si()) + "," +
                           fmt17(closed[i].value * f) + "," +
                           fmt17(rel_diff(values[i].value, closed[i].value)));
  }
  return doc;
}

int run_verify(const Options& o) {
  const bbrad::VerificationReport rep = bbrad::run_verification(o.verify_seed);
  if (o.verify_format == "json") {
    Document doc;
    doc.json = doc_header("verify", o);
    doc.json["seed"] = o.verify_seed;
    doc.json["all_pass"] = rep.all_pass();
    auto& rows = doc.json["results"] = ordered_json::array();
    for (const auto& c : rep.checks) {
      ordered_json row;
      row["id"] = c.id;
      row["name"] = c.name;
      row["pass"] = c.pass;
      put_result_fields(row, {c.measured, bbrad::units::dimensionless, 0.0,
                              bbrad::Method::quadrature},
                        false);
      row["bound"] = c.bound;
      row["detail"] = c.detail;
      row["seconds"] = c.seconds;
      rows.push_back(std::move(row));
    }
    emit(doc, "json");
  } else if (o.verify_format == "csv") {
    std::cout << "id,name,pass,measured,bound,seconds\n";
    for (const auto& c : rep.checks) {
      std::cout << c.id << "," << c.name << "," << (c.pass ? "true" : "false") << ","
                << fmt17(c.measured) << "," << fmt17(c.bound) << "," << fmt17(c.seconds) << "\n";
    }
  } else {
    bbrad::print_table(std::cout, rep);
  }
  return rep.all_pass() ? 0 : 1;
}

// ------------------------------------------------------------------- main

int fail(int code, const char* type, const std::string& message) {
  ordered_json e;
  e["error"]["type"] = type;
  e["error"]["exit_code"] = code;
  e["error"]["message"] = message;
  std::cerr << e.dump() << "\n";
  return code;
}

} // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"thermal-radiation momentum kinetics of small polarizable particles"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "bbrad 1.0.0");
  app.set_config("--config", "", "key=value config file ([subcommand] sections supported)")
      ->envname("BBRAD_CONFIG");

  const auto add_output = [&o](CLI::App* sub, bool with_seed = false) {
    sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--units", o.units, "output unit system")
        ->check(CLI::IsMember({"gaussian", "si"}));
    if (with_seed) sub->add_option("--seed", o.seed, "random stream seed");
    sub->add_option("--rel-tol", o.rel_tol, "quadrature relative tolerance");
    sub->add_option("--tail-cutoff", o.tail_cutoff, "semi-infinite truncation, in scale units");
    sub->add_option("--max-subdivisions", o.max_subdivisions, "adaptive quadrature panel budget");
  };
  const auto add_model = [&o](CLI::App* sub) {
    sub->add_option("--model", o.model, "electron | sphere | two-level")
        ->check(CLI::IsMember({"electron", "sphere", "two-level"}));
    sub->add_option("--mass", o.mass, "electron-model mass (g; suffixes g, kg, amu)");
    sub->add_option("--charge", o.charge, "electron-model charge (statC)");
    sub->add_option("--radius", o.radius, "sphere radius (cm; suffixes cm, m, mm, um, nm)");
    sub->add_option("--epsilon", o.eps_re, "sphere relative permittivity, real part");
    sub->add_option("--epsilon-im", o.eps_im, "sphere relative permittivity, imaginary part");
    sub->add_option("--omega0", o.omega0, "two-level transition frequency (rad/s)");
    sub->add_option("--dipole", o.dipole, "two-level dipole moment (statC cm)");
    sub->add_option("--linewidth", o.linewidth, "two-level linewidth (1/s)");
    sub->add_option("--p1", o.p1, "two-level lower-state probability");
    sub->add_option("--p2", o.p2, "two-level upper-state probability");
  };
  const auto add_temperature = [&o](CLI::App* sub, bool sweep = true) {
    sub->add_option("--temperature,-T", o.temperature, "blackbody temperature (K)");
    if (sweep) {
      sub->add_option("--temperatures", o.temperatures,
                      "temperature sweep start:stop:logN|linN (K)");
    }
  };

  CLI::App* sub_diffusion =
      app.add_subcommand("diffusion", "momentum diffusion constant d<p^2>/dt");
  add_model(sub_diffusion);
  add_temperature(sub_diffusion);
  sub_diffusion->add_option("--statistics", o.statistics, "particle | wave | full")
      ->check(CLI::IsMember({"particle", "wave", "full"}));
  add_output(sub_diffusion);

  CLI::App* sub_drag = app.add_subcommand("drag", "velocity-linear drag coefficient m*xi");
  add_model(sub_drag);
  add_temperature(sub_drag);
  sub_drag->add_option("--particle-mass", o.particle_mass,
                       "divide out a mass to also report xi (g; suffixes g, kg, amu)");
  add_output(sub_drag);

  CLI::App* sub_drel =
      app.add_subcommand("drag-relativistic", "total drag force at arbitrary velocity");
  add_model(sub_drel);
  add_temperature(sub_drel, false);
  sub_drel->add_option("--t-particle", o.t_particle, "particle-frame temperature (K; default lab)");
  sub_drel->add_option("--velocity", o.velocity, "velocity (cm/s; suffixes cm/s, m/s, km/s)");
  sub_drel->add_option("--velocities", o.velocities, "velocity sweep start:stop:logN|linN (cm/s)");
  add_output(sub_drel);

  CLI::App* sub_deco =
      app.add_subcommand("decoherence", "two-dipole decoherence factor F(separation)");
  add_model(sub_deco);
  add_temperature(sub_deco, false);
  sub_deco->add_option("--separation", o.separation, "separation (cm; length suffixes)");
  sub_deco->add_option("--separations", o.separations, "separation sweep start:stop:logN|linN (cm)");
  add_output(sub_deco);

  CLI::App* sub_lambda =
      app.add_subcommand("lambda", "small-separation scattering constant F/d^2");
  add_model(sub_lambda);
  add_temperature(sub_lambda);
  add_output(sub_lambda);

  CLI::App* sub_spec = app.add_subcommand("spectrum", "equilibrium spectrum ODE solutions");
  sub_spec->add_option("--branch", o.branch, "wien | rayleigh-jeans | planck")
      ->check(CLI::IsMember({"wien", "rayleigh-jeans", "planck"}));
  add_temperature(sub_spec, false);
  sub_spec->add_option("--x0", o.x0, "anchor point in x = hbar omega / k_B T");
  sub_spec->add_option("--n0", o.n0, "anchor occupation (default: branch value at x0)");
  sub_spec->add_option("--grid", o.grid, "x grid start:stop:logN|linN");
  add_output(sub_spec);

  CLI::App* sub_fp =
      app.add_subcommand("fokker-planck", "velocity distribution relaxation to equilibrium");
  add_temperature(sub_fp, false);
  sub_fp->add_option("--particle-mass", o.particle_mass, "particle mass (g; suffixes g, kg, amu)");
  sub_fp->add_option("--xi", o.xi, "drag rate xi (1/s)");
  sub_fp->add_option("--v0", o.v0, "initial mean velocity (cm/s; velocity suffixes)");
  sub_fp->add_option("--sigma0", o.sigma0, "initial Gaussian width (cm/s; default thermal)");
  sub_fp->add_option("--cells", o.cells, "velocity grid cells");
  sub_fp->add_option("--half-width", o.half_width, "grid half width in thermal velocities");
  sub_fp->add_option("--t-final", o.t_final, "evolution time (s; default 10/xi)");
  sub_fp->add_option("--dt", o.dt, "time step (s; default 5e-4/xi)");
  add_output(sub_fp);

  CLI::App* sub_mc = app.add_subcommand("montecarlo", "stochastic counterparts of the constants");
  add_model(sub_mc);
  add_temperature(sub_mc, false);
  sub_mc->add_option("--kind", o.kind, "kicks | recoil | ou | independence")
      ->check(CLI::IsMember({"kicks", "recoil", "ou", "independence"}));
  sub_mc->add_option("--damping", o.damping, "kicks: momentum damping rate (1/s)");
  sub_mc->add_option("--duration", o.duration, "kicks: path duration (s; default 30/damping)");
  sub_mc->add_option("--bins", o.bins, "kicks: frequency bins");
  sub_mc->add_option("--paths", o.paths, "kicks/ou: independent paths");
  sub_mc->add_option("--x-max", o.x_max, "kicks: band edge in x = hbar omega / k_B T");
  sub_mc->add_option("--samples", o.samples, "recoil/independence: sample count");
  sub_mc->add_option("--convention", o.convention, "recoil: uniform | phase-function");
  sub_mc->add_option("--particle-mass", o.particle_mass, "ou: particle mass (g)");
  sub_mc->add_option("--xi", o.xi, "ou: drag rate (1/s)");
  sub_mc->add_option("--v0", o.v0, "ou: initial velocity (cm/s)");
  sub_mc->add_option("--t-final", o.t_final, "ou: final time (s; default 3/xi)");
  sub_mc->add_option("--dt", o.dt, "ou: time step (s; default 5e-3/xi)");
  sub_mc->add_option("--checkpoints", o.checkpoints, "ou: moment checkpoints start:stop:linN (s)");
  sub_mc->add_option("--modes", o.modes, "independence: field modes");
  sub_mc->add_flag("--negative-control", o.negative_control,
                   "independence: correlate the channel with itself");
  add_output(sub_mc, true);

  CLI::App* sub_air = app.add_subcommand("air", "gas-collision momentum diffusion constant");
  add_temperature(sub_air);
  sub_air->add_option("--radius", o.radius, "sphere radius (cm; length suffixes)");
  sub_air->add_option("--molecule-mass", o.molecule_mass, "gas molecule mass (g; suffixes g, kg, amu)");
  sub_air->add_option("--number-density", o.number_density, "gas number density (1/cm^3)");
  add_output(sub_air);

  CLI::App* sub_verify = app.add_subcommand("verify", "run the full cross-validation suite");
  sub_verify->add_option("--seed", o.verify_seed, "seed for the stochastic checks");
  sub_verify->add_option("--format", o.verify_format, "table | json | csv")
      ->check(CLI::IsMember({"table", "json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(2, "usage", e.what());
  }

  try {
    Document doc;
    if (app.got_subcommand(sub_diffusion)) {
      enforce_model_params(sub_diffusion, o.model);
      doc = run_diffusion(o);
    } else if (app.got_subcommand(sub_drag)) {
      enforce_model_params(sub_drag, o.model);
      doc = run_drag(o);
    } else if (app.got_subcommand(sub_drel)) {
      enforce_model_params(sub_drel, o.model);
      doc = run_drag_relativistic(o);
    } else if (app.got_subcommand(sub_deco)) {
      enforce_model_params(sub_deco, o.model);
      doc = run_decoherence(o);
    } else if (app.got_subcommand(sub_lambda)) {
      enforce_model_params(sub_lambda, o.model);
      doc = run_lambda(o);
    } else if (app.got_subcommand(sub_spec)) {
      doc = run_spectrum(o);
    } else if (app.got_subcommand(sub_fp)) {
      doc = run_fokker_planck(o);
    } else if (app.got_subcommand(sub_mc)) {
      if (o.kind == "kicks") enforce_model_params(sub_mc, o.model);
      doc = run_montecarlo(o);
    } else if (app.got_subcommand(sub_air)) {
      doc = run_air(o);
    } else if (app.got_subcommand(sub_verify)) {
      return run_verify(o);
    }
    emit(doc, o.format);
    return 0;
  } catch (const cli_usage_error& e) {
    return fail(2, "usage", e.what());
  } catch (const bbrad::convergence_error& e) {
    return fail(4, "convergence", e.what());
  } catch (const bbrad::consistency_error& e) {
    return fail(4, "consistency", e.what());
  } catch (const bbrad::step_rejection_error& e) {
    return fail(4, "step_rejection", e.what());
  } catch (const bbrad::error& e) {
    return fail(3, "domain", e.what());
  } catch (const std::exception& e) {
    return fail(3, "domain", e.what());
  }
}
