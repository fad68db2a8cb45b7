#include "qew/cli.hpp"

#include "qew/error.hpp"
#include "qew/fiber_mode.hpp"
#include "qew/grid_io.hpp"
#include "qew/interactions.hpp"
#include "qew/kinematics.hpp"
#include "qew/oracle.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <variant>

namespace qew::cli {

namespace {

const std::string kMinusHalfPi = "-1.5707963267948966";

ParamSpec real(std::string key, std::string def, std::string help) {
  return {std::move(key), ParamType::real, std::move(def), std::move(help), {}};
}
ParamSpec real_list(std::string key, std::string def, std::string help) {
  return {std::move(key), ParamType::real_list, std::move(def), std::move(help), {}};
}
ParamSpec auto_int(std::string key, std::string help) {
  return {std::move(key), ParamType::integer_or_auto, "auto", std::move(help), {}};
}
ParamSpec choice(std::string key, std::string def, std::vector<std::string> options, std::string help) {
  return {std::move(key), ParamType::choice, std::move(def), std::move(help), std::move(options)};
}
ParamSpec phase(std::string key, std::string what) {
  return real(std::move(key), kMinusHalfPi, "phase of " + std::move(what) + " (rad)");
}

std::vector<ParamSpec> fiber_common() {
  return {real("wavelength-nm", "1064", "vacuum wavelength (nm)"),
          real("core-index", "2.0", "core refractive index"),
          real("clad-index", "1.0", "cladding refractive index"),
          real("length-um", "100", "normalisation length (um)"),
          {"standing-wave", ParamType::boolean, "false", "mirror cavity: effective length L*sqrt(2)", {}}};
}

const std::map<Subcommand, std::vector<ParamSpec>>& schemas() {
  static const std::map<Subcommand, std::vector<ParamSpec>> table = [] {
    std::map<Subcommand, std::vector<ParamSpec>> t;
    t[Subcommand::eels] = {real_list("alpha-mag", "1", "|alpha|, comma-separated list allowed"),
                           phase("alpha-phase", "alpha"),
                           auto_int("k-max", "largest loss index (auto: Poisson tail bound)")};
    t[Subcommand::pinem] = {real_list("alpha-mag", "0.2", "|alpha|, comma-separated list allowed"),
                            phase("alpha-phase", "alpha"),
                            real("beta-mag", "10", "|beta| of the initial coherent state"),
                            real("beta-phase", "0", "phase of beta (rad)"),
                            auto_int("k-min", "lowest electron index"),
                            auto_int("k-max", "highest electron index"),
                            auto_int("n-min", "lowest photon number"),
                            auto_int("n-max", "highest photon number"),
                            choice("preset", "none", {"none", "figure"}, "figure: photon axis covers at least 0..200")};
    t[Subcommand::two_electron] = {real_list("alpha1-mag", "1", "|alpha1|, list allowed"),
                                   phase("alpha1-phase", "alpha1"),
                                   real_list("alpha2-mag", "1", "|alpha2|, list allowed"),
                                   phase("alpha2-phase", "alpha2"),
                                   auto_int("s-max", "largest first-electron loss"),
                                   auto_int("k-min", "lowest second-electron index"),
                                   auto_int("k-max", "highest second-electron index")};
    t[Subcommand::classical_limit] = {real("alpha-mag", "0.01", "|alpha|"), phase("alpha-phase", "alpha"),
                                      real("beta-mag", "10", "|beta|"), real("beta-phase", "0", "phase of beta (rad)"),
                                      auto_int("k-max", "electron index half-range")};
    t[Subcommand::oracle_check] = {choice("mode", "eels", {"eels", "pinem", "two-electron"}, "family to check"),
                                   real("alpha-mag", "0.8", "|alpha| (eels, pinem)"),
                                   phase("alpha-phase", "alpha"),
                                   real("beta-mag", "2", "|beta| (pinem)"),
                                   real("beta-phase", "0", "phase of beta (rad)"),
                                   real("alpha1-mag", "1", "|alpha1| (two-electron)"),
                                   phase("alpha1-phase", "alpha1"),
                                   real("alpha2-mag", "1", "|alpha2| (two-electron)"),
                                   phase("alpha2-phase", "alpha2"),
                                   real("tolerance", "1e-8", "largest accepted |closed form - oracle|")};
    t[Subcommand::kinematics] = {real("kinetic-energy-kev", "200", "electron kinetic energy (keV)"),
                                 real("bandwidth-ev", "5.825", "energy spread (eV)"),
                                 choice("bandwidth-convention", "half-width", {"half-width", "full-width"},
                                        "how bandwidth-ev is read"),
                                 real("alpha-mag", "1", "|alpha| for the deflection estimate"),
                                 real("photon-energy-ev", "1.1", "photon energy (eV)"),
                                 real("length-um", "100", "interaction length (um)")};
    auto solve = fiber_common();
    solve.push_back(real("diameter-nm", "463", "core diameter (nm)"));
    t[Subcommand::fiber_solve] = solve;
    auto sweep = fiber_common();
    sweep.push_back(real("diameter-min-nm", "300", "first diameter (nm)"));
    sweep.push_back(real("diameter-max-nm", "800", "last diameter (nm)"));
    sweep.push_back(real("diameter-step-nm", "5", "diameter step (nm)"));
    t[Subcommand::fiber_sweep] = sweep;
    return t;
  }();
  return table;
}

double parse_real(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
    return v;
  } catch (const std::logic_error&) {
    throw ValidationError("--" + key + ": '" + text + "' is not a finite number");
  }
}

int parse_int(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const long v = std::stol(text, &used);
    if (used != text.size() || v < -1000000 || v > 1000000) throw std::invalid_argument(text);
    return static_cast<int>(v);
  } catch (const std::logic_error&) {
    throw ValidationError("--" + key + ": '" + text + "' is not an integer");
  }
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real(key, item));
  if (out.empty()) throw ValidationError("--" + key + ": empty list");
  return out;
}

void check_value(const ParamSpec& spec, const std::string& value) {
  const bool magnitude = spec.key.ends_with("-mag");
  switch (spec.type) {
  case ParamType::real:
    if (parse_real(spec.key, value) < 0.0 && magnitude) throw ValidationError("--" + spec.key + " must be >= 0");
    break;
  case ParamType::integer: parse_int(spec.key, value); break;
  case ParamType::integer_or_auto:
    if (value != "auto") parse_int(spec.key, value);
    break;
  case ParamType::real_list:
    for (double v : parse_list(spec.key, value)) {
      if (v < 0.0 && magnitude) throw ValidationError("--" + spec.key + " must be >= 0");
    }
    break;
  case ParamType::choice:
    if (std::find(spec.choices.begin(), spec.choices.end(), value) == spec.choices.end()) {
      throw ValidationError("--" + spec.key + ": '" + value + "' is not one of the allowed values");
    }
    break;
  case ParamType::boolean:
    if (value != "true" && value != "false") throw ValidationError("--" + spec.key + ": expected true or false");
    break;
  }
}

// Typed view of a validated configuration.
class Params {
public:
  explicit Params(const RunConfig& c) : config_(c) {}

  [[nodiscard]] std::string raw(const std::string& key) const {
    const auto it = config_.parameters.find(key);
    if (it != config_.parameters.end()) return it->second;
    for (const ParamSpec& p : schema(config_.subcommand)) {
      if (p.key == key) return p.default_value;
    }
    throw ValidationError("internal: unknown parameter " + key);
  }
  [[nodiscard]] double real(const std::string& key) const { return parse_real(key, raw(key)); }
  [[nodiscard]] double nonnegative(const std::string& key) const {
    const double v = real(key);
    if (v < 0.0) throw ValidationError("--" + key + " must be >= 0");
    return v;
  }
  [[nodiscard]] double positive(const std::string& key) const {
    const double v = real(key);
    if (!(v > 0.0)) throw ValidationError("--" + key + " must be > 0");
    return v;
  }
  [[nodiscard]] std::vector<double> list(const std::string& key) const {
    std::vector<double> v = parse_list(key, raw(key));
    for (double x : v) {
      if (x < 0.0) throw ValidationError("--" + key + " entries must be >= 0");
    }
    return v;
  }
  [[nodiscard]] std::optional<int> maybe_int(const std::string& key) const {
    const std::string v = raw(key);
    if (v == "auto") return std::nullopt;
    return parse_int(key, v);
  }
  [[nodiscard]] bool flag(const std::string& key) const { return raw(key) == "true"; }

private:
  const RunConfig& config_;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct Artifact {
  Metadata meta;
  std::variant<JointAmplitudeGrid, Table> body;
};

std::string int_text(int v) { return std::to_string(v); }

// Metadata head shared by every artifact: identity, then every schema key
// with its resolved value (overrides replace the configured text).
Metadata base_metadata(const RunConfig& c, const std::map<std::string, std::string>& resolved) {
  Metadata meta{{"subcommand", subcommand_name(c.subcommand)},
                {"qew_version", kVersion},
                {"output_format", c.format == Format::json ? "json" : "csv"}};
  const Params p(c);
  for (const ParamSpec& spec : schema(c.subcommand)) {
    const auto it = resolved.find(spec.key);
    meta.emplace_back(spec.key, it != resolved.end() ? it->second : p.raw(spec.key));
  }
  return meta;
}

bool json_bare(const std::string& v) {
  if (v == "true" || v == "false") return true;
  if (v.empty() || v == "nan" || v == "inf" || v == "-inf") return false;
  char* end = nullptr;
  std::strtod(v.c_str(), &end);
  return end == v.c_str() + v.size();
}

void write_table(const Table& t, const Metadata& meta, Format format, std::ostream& out) {
  if (format == Format::csv) {
    for (const auto& [k, v] : meta) out << "# " << k << '=' << v << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
    out << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
      out << '\n';
    }
    return;
  }
  nlohmann::ordered_json m = nlohmann::ordered_json::object();
  for (const auto& [k, v] : meta) m[k] = v;
  out << "{\n  \"metadata\": " << m.dump() << ",\n  \"rows\": [";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    out << (r ? ",\n    {" : "\n    {");
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
      const std::string& v = t.rows[r][i];
      out << (i ? ", " : "") << nlohmann::json(t.columns[i]).dump() << ": "
          << (json_bare(v) ? v : nlohmann::json(v).dump());
    }
    out << '}';
  }
  out << "\n  ]\n}\n";
}

void write_artifact(const Artifact& a, Format format, std::ostream& out) {
  if (const auto* grid = std::get_if<JointAmplitudeGrid>(&a.body)) {
    const JointAmplitudeGrid tagged = grid->with_metadata(a.meta);
    if (format == Format::csv) {
      write_grid_csv(tagged, out);
    } else {
      write_grid_json(tagged, out);
    }
  } else {
    write_table(std::get<Table>(a.body), a.meta, format, out);
  }
}

void note_probability(Metadata& meta, std::vector<std::string>& warnings, double total) {
  meta.emplace_back("total_probability", format_real(total));
  if (total < 1.0 - 1e-9) {
    warnings.push_back("truncated ranges hold total probability " + format_real(total));
    meta.emplace_back("warning", warnings.back());
  }
}

std::string convention_of(cplx alpha) {
  return satisfies_imaginary_convention(alpha) ? "alpha=-conj(alpha)" : "general-alpha (literal separated formulas)";
}

void guard_cells(Interval a, Interval b) {
  if (a.size() * b.size() > 4000000) throw ValidationError("requested grid exceeds 4e6 cells");
}

std::vector<Artifact> run_eels(const RunConfig& c, std::vector<std::string>& warnings) {
  const Params p(c);
  std::vector<Artifact> out;
  for (double mag : p.list("alpha-mag")) {
    const cplx alpha = std::polar(mag, p.real("alpha-phase"));
    const int k_max = p.maybe_int("k-max").value_or(suggest_range(mag * mag).hi);
    if (k_max < 0) throw ValidationError("--k-max must be >= 0");
    Metadata meta = base_metadata(c, {{"alpha-mag", format_real(mag)}, {"k-max", int_text(k_max)}});
    JointAmplitudeGrid grid = eels_grid(alpha, k_max);
    note_probability(meta, warnings, total_probability(grid));
    out.push_back({std::move(meta), std::move(grid)});
  }
  return out;
}

std::vector<Artifact> run_pinem(const RunConfig& c, std::vector<std::string>& warnings) {
  const Params p(c);
  const cplx beta = std::polar(p.nonnegative("beta-mag"), p.real("beta-phase"));
  std::vector<Artifact> out;
  for (double mag : p.list("alpha-mag")) {
    const cplx alpha = std::polar(mag, p.real("alpha-phase"));
    PinemRanges r = suggest_pinem_ranges(alpha, beta);
    if (p.raw("preset") == "figure") r.n = {0, std::max(200, r.n.hi)};
    r.k.lo = p.maybe_int("k-min").value_or(r.k.lo);
    r.k.hi = p.maybe_int("k-max").value_or(r.k.hi);
    r.n.lo = p.maybe_int("n-min").value_or(r.n.lo);
    r.n.hi = p.maybe_int("n-max").value_or(r.n.hi);
    if (r.k.hi < r.k.lo || r.n.hi < r.n.lo || r.n.lo < 0) throw ValidationError("invalid k/n ranges");
    guard_cells(r.k, r.n);
    Metadata meta = base_metadata(c, {{"alpha-mag", format_real(mag)},
                                      {"k-min", int_text(r.k.lo)},
                                      {"k-max", int_text(r.k.hi)},
                                      {"n-min", int_text(r.n.lo)},
                                      {"n-max", int_text(r.n.hi)}});
    meta.emplace_back("g_abs", format_real(std::abs(g_from_alpha_beta(alpha, beta))));
    meta.emplace_back("alpha_convention", convention_of(alpha));
    JointAmplitudeGrid grid = pinem_grid(alpha, beta, r.k, r.n);
    note_probability(meta, warnings, total_probability(grid));
    out.push_back({std::move(meta), std::move(grid)});
  }
  return out;
}

std::vector<Artifact> run_two_electron(const RunConfig& c, std::vector<std::string>& warnings) {
  const Params p(c);
  const std::vector<double> a1 = p.list("alpha1-mag");
  const std::vector<double> a2 = p.list("alpha2-mag");
  if (a1.size() != a2.size() && a1.size() != 1 && a2.size() != 1) {
    throw ValidationError("--alpha1-mag and --alpha2-mag lists must have equal length (or one entry)");
  }
  const std::size_t count = std::max(a1.size(), a2.size());
  std::vector<Artifact> out;
  for (std::size_t i = 0; i < count; ++i) {
    const double m1 = a1[a1.size() == 1 ? 0 : i];
    const double m2 = a2[a2.size() == 1 ? 0 : i];
    const cplx alpha1 = std::polar(m1, p.real("alpha1-phase"));
    const cplx alpha2 = std::polar(m2, p.real("alpha2-phase"));
    TwoElectronRanges r = suggest_two_electron_ranges(alpha1, alpha2);
    r.s.hi = p.maybe_int("s-max").value_or(r.s.hi);
    r.s.lo = 0;
    r.k.lo = p.maybe_int("k-min").value_or(r.k.lo);
    r.k.hi = p.maybe_int("k-max").value_or(std::min(r.k.hi, r.s.hi));
    if (r.s.hi < 0 || r.k.hi < r.k.lo) throw ValidationError("invalid s/k ranges");
    guard_cells(r.s, r.k);
    Metadata meta = base_metadata(c, {{"alpha1-mag", format_real(m1)},
                                      {"alpha2-mag", format_real(m2)},
                                      {"s-max", int_text(r.s.hi)},
                                      {"k-min", int_text(r.k.lo)},
                                      {"k-max", int_text(r.k.hi)}});
    meta.emplace_back("alpha_convention", convention_of(alpha2));
    JointAmplitudeGrid grid = two_electron_grid(alpha1, alpha2, r.s, r.k);
    note_probability(meta, warnings, total_probability(grid));
    out.push_back({std::move(meta), std::move(grid)});
  }
  return out;
}

std::vector<Artifact> run_classical(const RunConfig& c, std::vector<std::string>& warnings) {
  const Params p(c);
  const cplx alpha = std::polar(p.nonnegative("alpha-mag"), p.real("alpha-phase"));
  const cplx beta = std::polar(p.nonnegative("beta-mag"), p.real("beta-phase"));
  PinemRanges r = suggest_pinem_ranges(alpha, beta);
  if (const auto k = p.maybe_int("k-max")) {
    if (*k < 0) throw ValidationError("--k-max must be >= 0");
    r.k = {-*k, *k};
  }
  guard_cells(r.k, r.n);
  const JointAmplitudeGrid grid = pinem_grid(alpha, beta, r.k, r.n);
  const Marginal exact = marginalize(grid, AxisKind::electron_gain_index);
  const cplx g = g_from_alpha_beta(alpha, beta);
  const Marginal classical = classical_marginal(g, r.k);
  Table t{{"k", "exact_prob", "classical_prob", "abs_diff"}, {}};
  double worst = 0.0;
  for (int k = r.k.lo; k <= r.k.hi; ++k) {
    const double d = std::abs(exact.at(k) - classical.at(k));
    worst = std::max(worst, d);
    t.rows.push_back({int_text(k), format_real(exact.at(k)), format_real(classical.at(k)), format_real(d)});
  }
  Metadata meta = base_metadata(c, {{"k-max", int_text(r.k.hi)}});
  meta.emplace_back("g_abs", format_real(std::abs(g)));
  meta.emplace_back("max_abs_diff", format_real(worst));
  note_probability(meta, warnings, total_probability(grid));
  std::vector<Artifact> out;
  out.push_back({std::move(meta), std::move(t)});
  return out;
}

struct Comparison {
  double max_error = 0.0;
  std::size_t cells = 0;
};

Comparison compare(const JointAmplitudeGrid& oracle_grid, const std::function<cplx(int, int)>& closed) {
  Comparison cmp;
  const Interval r1 = oracle_grid.axis1_range();
  const Interval r2 = oracle_grid.axis2_range();
  for (int a = r1.lo; a <= r1.hi; ++a) {
    for (int b = r2.lo; b <= r2.hi; ++b) {
      const cplx exact = closed(a, b);
      const cplx numeric = oracle_grid.at(a, b);
      if (std::abs(exact) <= 1e-12 && std::abs(numeric) <= 1e-12) continue;
      cmp.max_error = std::max(cmp.max_error, std::abs(exact - numeric));
      ++cmp.cells;
    }
  }
  return cmp;
}

std::vector<Artifact> run_oracle_check(const RunConfig& c, std::vector<std::string>& warnings, bool& failed) {
  const Params p(c);
  const std::string mode = p.raw("mode");
  oracle::OracleGrid result{JointAmplitudeGrid(AxisKind::electron_gain_index, {0, 0}, AxisKind::photon_number, {0, 0},
                                               {cplx{}}),
                            {}};
  Comparison cmp;
  if (mode == "eels") {
    const cplx alpha = std::polar(p.nonnegative("alpha-mag"), p.real("alpha-phase"));
    result = oracle::eels_oracle(alpha, oracle::default_eels_basis(alpha));
    cmp = compare(result.grid, [&](int k, int n) { return n == -k ? eels_amplitude(alpha, n) : cplx{}; });
  } else if (mode == "pinem") {
    const cplx alpha = std::polar(p.nonnegative("alpha-mag"), p.real("alpha-phase"));
    const cplx beta = std::polar(p.nonnegative("beta-mag"), p.real("beta-phase"));
    const oracle::TruncatedBasis basis = oracle::default_pinem_basis(alpha, beta);
    result = oracle::pinem_oracle(alpha, beta, basis);
    cmp = compare(result.grid, [&](int k, int n) {
      return n + k <= basis.photon_max ? pinem_coefficient(alpha, beta, n, k) : cplx{};
    });
  } else {
    const cplx alpha1 = std::polar(p.nonnegative("alpha1-mag"), p.real("alpha1-phase"));
    const cplx alpha2 = std::polar(p.nonnegative("alpha2-mag"), p.real("alpha2-phase"));
    result = oracle::two_electron_oracle(alpha1, alpha2, oracle::default_two_electron_basis(alpha1, alpha2));
    cmp = compare(result.grid, [&](int s, int k) { return two_electron_coefficient(alpha1, alpha2, s, k); });
  }
  const double tol = p.positive("tolerance");
  failed = !(cmp.max_error < tol);
  Metadata meta = base_metadata(c, {});
  if (result.diagnostics.truncation_warning) {
    warnings.push_back("oracle truncation: edge population " + format_real(result.diagnostics.edge_population));
    meta.emplace_back("warning", warnings.back());
  }
  Table t{{"mode", "max_abs_error", "cells_compared", "edge_population", "norm_change", "tolerance", "passed"},
          {{mode, format_real(cmp.max_error), std::to_string(cmp.cells),
            format_real(result.diagnostics.edge_population), format_real(result.diagnostics.norm_change),
            format_real(tol), failed ? "false" : "true"}}};
  std::vector<Artifact> out;
  out.push_back({std::move(meta), std::move(t)});
  return out;
}

std::vector<Artifact> run_kinematics(const RunConfig& c) {
  const Params p(c);
  const kin::ElectronParams e = kin::electron_from_voltage(p.positive("kinetic-energy-kev"));
  const auto conv = p.raw("bandwidth-convention") == "full-width" ? kin::BandwidthConvention::full_width
                                                                   : kin::BandwidthConvention::half_width;
  const double z = kin::dispersion_distance(e, p.nonnegative("bandwidth-ev"), conv);
  const kin::Deflection d =
      kin::deflection(e, p.nonnegative("alpha-mag"), p.positive("photon-energy-ev"), p.nonnegative("length-um"));
  Table t{{"kinetic_energy_keV", "gamma", "velocity_fraction", "momentum_times_c_keV", "dispersion_distance_mm",
           "theta_f_rad", "displacement_nm"},
          {{format_real(e.kinetic_energy), format_real(e.gamma), format_real(e.velocity_fraction),
            format_real(e.momentum_times_c), format_real(z), format_real(d.theta_f), format_real(d.displacement_nm)}}};
  std::vector<Artifact> out;
  out.push_back({base_metadata(c, {}), std::move(t)});
  return out;
}

fiber::FiberSpec fiber_spec(const Params& p) {
  fiber::FiberSpec s;
  s.vacuum_wavelength_nm = p.positive("wavelength-nm");
  s.core_index = p.real("core-index");
  s.clad_index = p.real("clad-index");
  s.length_um = p.positive("length-um");
  s.standing_wave = p.flag("standing-wave");
  try {
    s.validate();
  } catch (const DomainError& e) {
    throw ValidationError(e.what());
  }
  return s;
}

const std::vector<std::string> kFiberColumns = {"diameter_nm", "beta_per_nm", "u",        "w",       "alpha_max",
                                                "decay_nm",    "match_kV",    "Lc200_um", "Lc300_um"};

std::vector<std::string> fiber_row(const fiber::SweepRow& row) {
  if (!row.mode || !row.coupling) {
    std::vector<std::string> r(kFiberColumns.size(), "nan");
    r[0] = format_real(row.diameter_nm);
    return r;
  }
  const fiber::FiberMode& m = *row.mode;
  const fiber::CouplingResult& cr = *row.coupling;
  return {format_real(row.diameter_nm),
          format_real(m.beta_per_nm),
          format_real(m.u),
          format_real(m.w),
          format_real(cr.alpha_max),
          format_real(cr.decay_length_nm),
          format_real(cr.phase_matched_voltage_kV.value_or(std::nan(""))),
          format_real(cr.coherence_200keV.reported_um()),
          format_real(cr.coherence_300keV.reported_um())};
}

std::vector<Artifact> run_fiber(const RunConfig& c, std::vector<std::string>& warnings, bool& failed) {
  const Params p(c);
  const fiber::FiberSpec spec = fiber_spec(p);
  std::vector<double> diameters;
  if (c.subcommand == Subcommand::fiber_solve) {
    diameters.push_back(p.positive("diameter-nm"));
  } else {
    const double lo = p.positive("diameter-min-nm");
    const double hi = p.positive("diameter-max-nm");
    const double step = p.positive("diameter-step-nm");
    if (hi < lo) throw ValidationError("--diameter-max-nm must be >= --diameter-min-nm");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    if (count > 100000) throw ValidationError("diameter sweep has too many rows");
    for (std::size_t i = 0; i < count; ++i) diameters.push_back(lo + step * static_cast<double>(i));
  }
  const std::vector<fiber::SweepRow> rows = fiber::sweep_diameter(spec, diameters);
  Metadata meta = base_metadata(c, {});
  Table t{kFiberColumns, {}};
  std::size_t bad = 0;
  for (const fiber::SweepRow& row : rows) {
    t.rows.push_back(fiber_row(row));
    if (!row.error.empty()) {
      ++bad;
      warnings.push_back("diameter " + format_real(row.diameter_nm) + " nm: " + row.error);
      meta.emplace_back("row_error", warnings.back());
    }
  }
  if (c.subcommand == Subcommand::fiber_solve && rows.front().mode) {
    const fiber::FiberMode& m = *rows.front().mode;
    meta.emplace_back("phase_velocity_fraction", format_real(m.phase_velocity_fraction));
    meta.emplace_back("characteristic_residual", format_real(m.residual));
    meta.emplace_back("surface_field_V_per_m", format_real(rows.front().coupling->surface_field_per_photon));
    meta.emplace_back("Lc200_capped", rows.front().coupling->coherence_200keV.capped ? "true" : "false");
  }
  failed = bad == rows.size();
  std::vector<Artifact> out;
  out.push_back({std::move(meta), std::move(t)});
  return out;
}

std::string numbered_path(const std::string& path, std::size_t i) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
  const std::string stem = has_ext ? path.substr(0, dot) : path;
  const std::string ext = has_ext ? path.substr(dot) : "";
  return stem + "_" + std::to_string(i) + ext;
}

} // namespace

std::string subcommand_name(Subcommand s) {
  switch (s) {
  case Subcommand::eels: return "eels";
  case Subcommand::pinem: return "pinem";
  case Subcommand::two_electron: return "two-electron";
  case Subcommand::classical_limit: return "classical-limit";
  case Subcommand::oracle_check: return "oracle-check";
  case Subcommand::kinematics: return "kinematics";
  case Subcommand::fiber_solve: return "fiber-solve";
  case Subcommand::fiber_sweep: return "fiber-sweep";
  }
  return "unknown";
}

const std::vector<Subcommand>& all_subcommands() {
  static const std::vector<Subcommand> all = {Subcommand::eels,         Subcommand::pinem,
                                              Subcommand::two_electron, Subcommand::classical_limit,
                                              Subcommand::oracle_check, Subcommand::kinematics,
                                              Subcommand::fiber_solve,  Subcommand::fiber_sweep};
  return all;
}

Subcommand parse_subcommand(const std::string& name) {
  for (Subcommand s : all_subcommands()) {
    if (subcommand_name(s) == name) return s;
  }
  throw ValidationError("unknown subcommand '" + name + "'");
}

const std::vector<ParamSpec>& schema(Subcommand s) { return schemas().at(s); }

void validate(const RunConfig& config) {
  const auto& specs = schema(config.subcommand);
  for (const auto& [key, value] : config.parameters) {
    const auto it = std::find_if(specs.begin(), specs.end(), [&](const ParamSpec& p) { return p.key == key; });
    if (it == specs.end()) {
      throw ValidationError("unknown parameter '" + key + "' for " + subcommand_name(config.subcommand));
    }
    check_value(*it, value);
  }
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"pinem-beta10", "two-electron", "fiber-si3n4-1064", "fiber-si-1064"};
  return names;
}

RunConfig preset(const std::string& name) {
  RunConfig c;
  if (name == "pinem-beta10") {
    c.subcommand = Subcommand::pinem;
    c.parameters = {{"alpha-mag", "0.01,0.05,0.1,0.2,0.5"}, {"beta-mag", "10"}, {"preset", "figure"}};
  } else if (name == "two-electron") {
    c.subcommand = Subcommand::two_electron;
    c.parameters = {{"alpha1-mag", "0.1,0.3,0.5,1,1.5,2"}, {"alpha2-mag", "0.1,0.3,0.5,1,1.5,2"}};
  } else if (name == "fiber-si3n4-1064" || name == "fiber-si-1064") {
    c.subcommand = Subcommand::fiber_sweep;
    c.parameters = {{"wavelength-nm", "1064"},
                    {"core-index", name == "fiber-si3n4-1064" ? "2.0" : "3.5"},
                    {"clad-index", "1.0"},
                    {"diameter-min-nm", name == "fiber-si3n4-1064" ? "300" : "100"},
                    {"diameter-max-nm", name == "fiber-si3n4-1064" ? "800" : "500"},
                    {"diameter-step-nm", "5"},
                    {"length-um", "100"}};
  } else {
    throw ValidationError("unknown preset '" + name + "'");
  }
  return c;
}

RunConfig config_from_metadata(const Metadata& meta) {
  RunConfig c;
  c.subcommand = parse_subcommand(metadata_value(meta, "subcommand"));
  c.format = metadata_value(meta, "output_format") == "json" ? Format::json : Format::csv;
  for (const ParamSpec& spec : schema(c.subcommand)) {
    for (const auto& [k, v] : meta) {
      if (k == spec.key) c.parameters[k] = v;
    }
  }
  validate(c);
  return c;
}

RunOutcome run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  RunOutcome outcome;
  const auto start = std::chrono::steady_clock::now();
  try {
    validate(config);
    bool failed = false;
    std::vector<Artifact> artifacts;
    switch (config.subcommand) {
    case Subcommand::eels: artifacts = run_eels(config, outcome.warnings); break;
    case Subcommand::pinem: artifacts = run_pinem(config, outcome.warnings); break;
    case Subcommand::two_electron: artifacts = run_two_electron(config, outcome.warnings); break;
    case Subcommand::classical_limit: artifacts = run_classical(config, outcome.warnings); break;
    case Subcommand::oracle_check: artifacts = run_oracle_check(config, outcome.warnings, failed); break;
    case Subcommand::kinematics: artifacts = run_kinematics(config); break;
    case Subcommand::fiber_solve:
    case Subcommand::fiber_sweep: artifacts = run_fiber(config, outcome.warnings, failed); break;
    }
    for (std::size_t i = 0; i < artifacts.size(); ++i) {
      if (config.output_path.empty()) {
        if (i > 0) out << '\n';
        write_artifact(artifacts[i], config.format, out);
        continue;
      }
      const std::string path = artifacts.size() == 1 ? config.output_path : numbered_path(config.output_path, i);
      std::ofstream file(path, std::ios::binary);
      if (!file) throw ValidationError("cannot open output file '" + path + "'");
      write_artifact(artifacts[i], config.format, file);
      if (!file) throw NumericalError("failed writing '" + path + "'");
      outcome.files.push_back(path);
    }
    for (const std::string& w : outcome.warnings) err << "warning: " << w << '\n';
    if (failed) {
      outcome.exit_code = 2;
      outcome.error = "numerical check failed";
      err << "error: " << outcome.error << '\n';
    }
  } catch (const DomainError& e) {
    outcome.exit_code = 1;
    outcome.error = e.what();
    err << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    outcome.exit_code = 2;
    outcome.error = e.what();
    err << "error: " << e.what() << '\n';
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  err << "runtime: " << secs << " s\n";
  return outcome;
}

} // namespace qew::cli
