#include "cli.hpp"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <numbers>
#include <optional>
#include <sstream>

#include "aclab/error.hpp"
#include "aclab/evolution.hpp"
#include "aclab/ground_state.hpp"
#include "aclab/parallel.hpp"
#include "aclab/steady_catalog.hpp"
#include "aclab/verify.hpp"

namespace aclab::cli {
namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;
using numerics::SineSpectrum;
using numerics::TorusGrid;
using std::numbers::pi;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CheckFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string g17(double v) { return fmt::format("{:.17g}", v); }

fs::path output_dir(const std::string& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec || !fs::is_directory(out)) throw IoError(fmt::format("cannot create output directory '{}'", out));
  return fs::path(out);
}

// Write to a sibling temporary and rename, so readers never see a partial file.
void write_file(const fs::path& path, const std::string& body) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    f << body;
    if (!f) throw IoError(fmt::format("cannot write '{}'", tmp.string()));
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError(fmt::format("cannot move '{}' into place: {}", path.string(), ec.message()));
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json values_json(std::span<const double> v) { return json(std::vector<double>(v.begin(), v.end())); }

std::size_t pow2_for_kappa(double kappa, std::size_t floor_n) {
  std::size_t n = floor_n;
  while (ground::min_resolvable_kappa(n) > kappa && n < (std::size_t{1} << 20)) n *= 2;
  return n;
}

// ---- initial data -----------------------------------------------------------

SineSpectrum preset_state(const std::string& name) {
  if (name == "sin_x") return SineSpectrum({1.0});
  if (name == "half_sin_x") return SineSpectrum({0.5});
  if (name == "sin_2x") return SineSpectrum({0.0, 1.0});
  if (name == "mixed") return SineSpectrum({1.0, 0.0, 0.3});
  throw Error(ErrorKind::Usage, fmt::format("unknown preset '{}' (sin_x | half_sin_x | sin_2x | mixed)", name));
}

double parse_double(std::string_view s, std::string_view what) {
  std::string copy(s);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(copy, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != copy.size()) throw Error(ErrorKind::Usage, fmt::format("bad number '{}' in {}", s, what));
  return v;
}

/// "m:c,m:c,..." with m >= 1.
SineSpectrum parse_coeffs(const std::string& text) {
  std::vector<double> c;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw Error(ErrorKind::Usage, fmt::format("coefficient '{}' is not m:c", item));
    std::size_t m = 0;
    const auto head = std::string_view(item).substr(0, colon);
    const auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), m);
    if (ec != std::errc() || ptr != head.data() + head.size() || m == 0) {
      throw Error(ErrorKind::Usage, fmt::format("mode index in '{}' must be a positive integer", item));
    }
    if (c.size() < m) c.resize(m, 0.0);
    c[m - 1] += parse_double(std::string_view(item).substr(colon + 1), "--coeffs");
  }
  if (c.empty()) throw Error(ErrorKind::Usage, "--coeffs is empty");
  return SineSpectrum(std::move(c));
}

std::vector<double> parse_kappa_grid(const std::string& text) {
  std::vector<double> out;
  if (std::count(text.begin(), text.end(), ':') == 2) {
    const auto a = text.find(':'), b = text.rfind(':');
    const double lo = parse_double(std::string_view(text).substr(0, a), "--grid");
    const double hi = parse_double(std::string_view(text).substr(a + 1, b - a - 1), "--grid");
    const double step = parse_double(std::string_view(text).substr(b + 1), "--grid");
    if (!(step > 0.0) || hi < lo) throw Error(ErrorKind::Usage, "--grid needs lo:hi:step with step > 0 and lo <= hi");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) out.push_back(std::round((lo + step * i) * 1e12) / 1e12);
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(item, "--grid"));
  }
  if (out.empty()) throw Error(ErrorKind::Usage, "--grid is empty");
  return out;
}

// ---- ground-state -------------------------------------------------------------

struct GroundOptions {
  double kappa = 0.0;
  std::size_t n_points = 2048;
  std::string out = ".";
};

int cmd_ground_state(const GroundOptions& o, std::ostream& out) {
  const TorusGrid grid(o.n_points);
  const auto gs = ground::build_ground_state(o.kappa, grid);
  const auto ids = ground::energy_identities(gs);

  json j;
  j["kappa"] = o.kappa;
  j["N"] = gs.peak().N;
  j["one_minus_N"] = gs.peak().one_minus_N();
  j["energy"] = gs.energy();
  j["residual"] = gs.residual();
  j["n_points"] = o.n_points;
  j["energy_identities"] = {{"definition", ids.definition},
                            {"quarter", ids.quarter},
                            {"second_form", ids.second_form},
                            {"max_discrepancy", ids.max_discrepancy}};
  j["values"] = values_json(gs.field().values());

  std::string csv = "x,U,tanh\n";
  const double scale = std::numbers::sqrt2 * o.kappa;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    csv += fmt::format("{},{},{}\n", g17(grid.x(i)), g17(gs.field()[i]), g17(std::tanh(grid.x(i) / scale)));
  }
  const fs::path dir = output_dir(o.out);
  write_file(dir / "ground_state.json", dump(j));
  write_file(dir / "profile.csv", csv);

  out << fmt::format("N_kappa    {:.17g}\n", gs.peak().N);
  out << fmt::format("1 - N      {:.6e}\n", gs.peak().one_minus_N());
  out << fmt::format("E0_kappa   {:.17g}  ({} pi/2)\n", gs.energy(), gs.energy() < pi / 2 ? "<" : ">=");
  out << fmt::format("residual   {:.3e}\n", gs.residual());
  out << fmt::format("identities max discrepancy {:.3e}\n", ids.max_discrepancy);
  return kExitOk;
}

// ---- catalog -------------------------------------------------------------------

int cmd_catalog(const GroundOptions& o, std::ostream& out) {
  const TorusGrid grid(o.n_points);
  const auto cat = steady::build_catalog(o.kappa, grid);
  json j;
  j["kappa"] = o.kappa;
  j["m"] = cat.m;
  j["n_points"] = o.n_points;
  j["replicas"] = json::array();
  out << fmt::format("kappa = {}, m = {}\n{:>3}  {:>22}  {:>22}  {:>10}\n", o.kappa, cat.m, "j", "energy", "period",
                     "residual");
  for (const auto& r : cat.replicas) {
    j["replicas"].push_back({{"j", r.j},
                             {"energy", r.energy},
                             {"period", r.period},
                             {"residual", r.residual},
                             {"values", values_json(r.field.values())}});
    out << fmt::format("{:>3}  {:>22.17g}  {:>22.17g}  {:>10.3e}\n", r.j, r.energy, r.period, r.residual);
  }
  write_file(output_dir(o.out) / "catalog.json", dump(j));
  return kExitOk;
}

// ---- classify ------------------------------------------------------------------

struct ClassifyOptions {
  double u0 = 0.0, v0 = 0.0, kappa = 0.0;
  std::string out = ".";
};

int cmd_classify(const ClassifyOptions& o, std::ostream& out) {
  const auto oc = steady::classify_orbit(o.u0, o.v0, o.kappa);
  json j;
  j["u0"] = o.u0;
  j["v0"] = o.v0;
  j["kappa"] = o.kappa;
  j["C"] = oc.C;
  j["kind"] = std::string(steady::to_string(oc.kind));
  j["period"] = oc.period ? json(*oc.period) : json(nullptr);
  j["amplitude"] = oc.amplitude ? json(*oc.amplitude) : json(nullptr);
  j["near_boundary"] = oc.near_boundary;
  write_file(output_dir(o.out) / "classify.json", dump(j));
  out << fmt::format("C          {:.17g}\nkind       {}\n", oc.C, steady::to_string(oc.kind));
  if (oc.period) out << fmt::format("period     {:.17g}\n", *oc.period);
  if (oc.amplitude) out << fmt::format("amplitude  {:.17g}\n", *oc.amplitude);
  if (oc.near_boundary) out << "near a regime boundary (within 1e-8)\n";
  return kExitOk;
}

// ---- evolve --------------------------------------------------------------------

struct EvolveOptions {
  evolve::EvolveParams params;
  std::string filter = "none";
  std::string preset;
  std::string coeffs;
  std::string steady = "auto";
  bool snapshots = false;
  bool compare = false;
  std::string out = ".";
};

json fit_json(const diag::RateFit& f) {
  return {{"window", {f.window.first, f.window.second}},
          {"model", f.model == diag::FitModel::Exponential ? "exponential" : "algebraic"},
          {"rate_or_exponent", f.rate_or_exponent},
          {"prefactor", f.prefactor},
          {"residual", f.residual},
          {"points", f.points},
          {"rejected", f.rejected}};
}

// Runs a fit that may legitimately lack data on a short run; the reason is
// reported instead of aborting the command.
json try_fit(std::string_view label, const std::function<json()>& f, std::ostream& out) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Window && e.kind() != ErrorKind::Domain) throw;
    out << fmt::format("{:<10} skipped: {}\n", label, e.what());
    return {{"error", e.what()}};
  }
}

json compare_with_catalog(const evolve::Trajectory& tr, std::ostream& out) {
  const double kappa = tr.params.kappa;
  const TorusGrid grid(pow2_for_kappa(kappa, std::max<std::size_t>(2048, tr.params.n_points)));
  const auto u = numerics::synthesize(tr.final_state, grid);
  const double sup = u.max_abs();
  json j;
  if (sup < 1e-6) {
    j = {{"verdict", "zero"}, {"distance", sup}};
    out << fmt::format("converged: zero state (max |u| = {:.3e})\n", sup);
    return j;
  }
  const auto cat = steady::build_catalog(kappa, grid);
  double best = std::numeric_limits<double>::infinity();
  int best_j = 0;
  double best_sign = 1.0;
  for (const auto& r : cat.replicas) {
    for (double sign : {1.0, -1.0}) {
      double d = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) d = std::max(d, std::abs(u[i] - sign * r.field[i]));
      if (d < best) {
        best = d;
        best_j = r.j;
        best_sign = sign;
      }
    }
  }
  const bool converged = best < 1e-6;
  const std::string target = best_j == 1 ? fmt::format("{}U_kappa", best_sign > 0 ? "+" : "-")
                                         : fmt::format("{}replica j={}", best_sign > 0 ? "+" : "-", best_j);
  j = {{"verdict", converged ? "converged" : "not_converged"},
       {"nearest", target},
       {"j", best_j},
       {"sign", best_sign},
       {"max_norm_distance", best}};
  out << (converged ? fmt::format("converged: {} (max-norm distance {:.3e})\n", target, best)
                    : fmt::format("not converged: nearest {} at max-norm distance {:.3e}\n", target, best));
  return j;
}

int cmd_evolve(EvolveOptions o, std::ostream& out) {
  if (o.preset.empty() == o.coeffs.empty()) throw Error(ErrorKind::Usage, "give exactly one of --preset or --coeffs");
  const SineSpectrum u0 = o.preset.empty() ? parse_coeffs(o.coeffs) : preset_state(o.preset);
  o.params.filter = evolve::parse_filter(o.filter);
  if (o.steady == "on") o.params.detect_steady = true;
  else if (o.steady == "off") o.params.detect_steady = false;
  o.params.keep_snapshots = true;
  o.params.validate();
  const fs::path dir = output_dir(o.out);

  const evolve::Trajectory tr = evolve::evolve(u0, o.params);
  const auto& s = tr.diagnostics;

  std::string csv = "t,mass,energy,c1,hi_mass,linf\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    csv += fmt::format("{},{},{},{},{},{}\n", g17(s.times[i]), g17(s.mass[i]), g17(s.energy[i]), g17(s.c1[i]),
                       g17(s.hi_mass[i]), g17(s.linf[i]));
  }
  write_file(dir / "trajectory.csv", csv);

  const auto& p = tr.params;
  json j;
  j["params"] = {{"kappa", p.kappa},
                 {"gamma", p.gamma},
                 {"dt", p.dt},
                 {"t_end", p.t_end},
                 {"n_points", p.n_points},
                 {"modes", p.modes()},
                 {"filter", std::string(evolve::to_string(p.filter))},
                 {"record_every", p.record_every},
                 {"steady_tol", p.steady_tol},
                 {"steady_detection", p.steady_detection_enabled()}};
  j["initial_coeffs"] = values_json(u0.coeffs());
  j["terminal"] = std::string(evolve::to_string(tr.terminal));
  j["steps"] = tr.steps;
  j["final_time"] = tr.final_time;

  double rise = -std::numeric_limits<double>::infinity();
  double min_mass = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i > 0) rise = std::max(rise, s.energy[i] - s.energy[i - 1]);
    min_mass = std::min(min_mass, s.mass[i]);
  }
  j["energy_max_increase"] = s.size() > 1 ? json(rise) : json(nullptr);
  j["energy_dissipation_ok"] = !(rise > 1e-10);
  j["min_mass"] = min_mass;

  out << fmt::format("terminal   {} at t = {:.6g} after {} steps\n", evolve::to_string(tr.terminal), tr.final_time,
                     tr.steps);
  out << fmt::format("energy     {:.12g} -> {:.12g}\n", s.energy.front(), s.energy.back());

  std::vector<double> norm(s.size());
  std::transform(s.mass.begin(), s.mass.end(), norm.begin(), [](double m) { return std::sqrt(m); });
  const double k2 = p.kappa * p.kappa - 1.0;
  if (p.kappa > 1.0) {
    j["norm_decay"] = try_fit("rate", [&] {
      const auto w = diag::usable_window(s.times, norm, 1.0, tr.final_time);
      const auto f = diag::fit_rate(s.times, norm, diag::FitModel::Exponential, w);
      out << fmt::format("rate       {:.6f} on [{}, {:.3g}] (kappa^2 - 1 = {:.6g}, residual {:.2g})\n",
                         f.rate_or_exponent, w.first, w.second, k2, f.residual);
      json r = fit_json(f);
      r["expected"] = k2;
      return r;
    }, out);
    j["tail_decay"] = try_fit("tail rate", [&] {
      const auto w = diag::usable_window(s.times, s.hi_mass, 1.0, tr.final_time);
      const auto f = diag::fit_rate(s.times, s.hi_mass, diag::FitModel::Exponential, w);
      out << fmt::format("tail rate  {:.6f} on [{}, {:.3g}]\n", f.rate_or_exponent, w.first, w.second);
      return fit_json(f);
    }, out);
  } else if (p.kappa == 1.0) {
    j["norm_decay"] = try_fit("exponent", [&] {
      const auto f = diag::fit_rate(s.times, norm, diag::FitModel::Algebraic, {10.0, tr.final_time});
      out << fmt::format("exponent   -{:.5f} on [10, {}] (residual {:.2g})\n", f.rate_or_exponent, tr.final_time,
                         f.residual);
      json r = fit_json(f);
      r["expected"] = 0.5;
      return r;
    }, out);
  }
  if (p.kappa >= 1.0) {
    j["profile"] = try_fit("profile", [&] {
      const auto e = diag::extract_profile(s, p.kappa);
      const char* name = p.kappa > 1.0 ? "alpha*" : "beta*";
      if (e.vanishing) {
        out << fmt::format("{} = 0 (c1 identically zero)\n", name);
      } else {
        out << fmt::format("{} = {:.10g} (stability {:.2g})\n", name, e.value, e.stability);
      }
      return json{{"name", name}, {"value", e.value}, {"stability", e.stability}, {"vanishing", e.vanishing}};
    }, out);
  }
  if (o.compare) {
    if (p.kappa < 1.0 && p.gamma == 2.0) {
      j["comparison"] = compare_with_catalog(tr, out);
    } else {
      j["comparison"] = {{"verdict", "not_applicable"}, {"reason", "steady catalog needs kappa < 1 and gamma = 2"}};
      out << "comparison not applicable: the steady catalog needs kappa < 1 and gamma = 2\n";
    }
  }
  write_file(dir / "diagnostics.json", dump(j));

  if (o.snapshots) {
    json snaps = json::array();
    for (const auto& snap : tr.snapshots) snaps.push_back({{"t", snap.t}, {"coeffs", values_json(snap.state.coeffs())}});
    write_file(dir / "snapshots.json", dump(snaps));
  }
  return kExitOk;
}

// ---- verify --------------------------------------------------------------------

int cmd_verify(const std::string& suite, std::uint64_t seed, const std::string& out_dir, std::ostream& out) {
  if (!verify::is_suite(suite)) {
    throw Error(ErrorKind::Usage, fmt::format("unknown suite '{}' (steady | dynamics | all)", suite));
  }
  const fs::path dir = output_dir(out_dir);
  verify::Context ctx(seed);
  const auto reports = verify::run_suite(suite, ctx);
  json checks = json::array();
  bool all = true;
  for (const auto& r : reports) {
    all = all && r.pass;
    checks.push_back({{"check_name", r.check_name},
                      {"pass", r.pass},
                      {"observed", r.observed},
                      {"expected", r.expected},
                      {"tolerance", r.tolerance},
                      {"window", r.window ? json{r.window->first, r.window->second} : json(nullptr)},
                      {"detail", r.detail}});
    out << fmt::format("[{}] {}: {}\n", r.pass ? "PASS" : "FAIL", r.check_name, r.detail);
  }
  write_file(dir / "verify.json", dump({{"suite", suite}, {"seed", seed}, {"pass", all}, {"checks", checks}}));
  out << fmt::format("{} of {} checks passed\n", std::count_if(reports.begin(), reports.end(),
                                                               [](const auto& r) { return r.pass; }),
                     reports.size());
  return all ? kExitOk : kExitCheckFailed;
}

// ---- energy-table --------------------------------------------------------------

int cmd_energy_table(const std::string& grid_text, std::size_t n_points, const std::string& out_dir,
                     std::ostream& out) {
  const std::vector<double> kappas = parse_kappa_grid(grid_text);
  for (double k : kappas) {
    require(k > 0.0 && k < 1.0, ErrorKind::Domain, fmt::format("kappa must lie in (0, 1), got {}", k));
  }
  struct Row {
    double kappa, N, energy;
    std::size_t n;
  };
  std::vector<Row> rows(kappas.size());
  // Rows are independent; each is written to its own slot.
  parallel_for(kappas.size(), [&](std::size_t i) {
    const std::size_t n = pow2_for_kappa(kappas[i], n_points);
    const auto gs = ground::build_ground_state(kappas[i], TorusGrid(n));
    rows[i] = {kappas[i], gs.peak().N, gs.energy(), n};
  });

  std::string csv = "kappa,N,energy,energy_over_kappa\n";
  out << fmt::format("{:>8}  {:>20}  {:>20}  {:>14}  {:>6}\n", "kappa", "N", "E0", "E0/kappa", "n");
  for (const auto& r : rows) {
    csv += fmt::format("{},{},{},{}\n", g17(r.kappa), g17(r.N), g17(r.energy), g17(r.energy / r.kappa));
    out << fmt::format("{:>8.4g}  {:>20.15g}  {:>20.15g}  {:>14.10f}  {:>6}\n", r.kappa, r.N, r.energy,
                       r.energy / r.kappa, r.n);
  }
  write_file(output_dir(out_dir) / "energy_table.csv", csv);

  std::vector<Row> sorted = rows;
  std::sort(sorted.begin(), sorted.end(), [](const Row& a, const Row& b) { return a.kappa < b.kappa; });
  out << fmt::format("E0/kappa at kappa = {}: {:.10f} (kappa -> 0 limit 4 sqrt2 / 3 = {:.10f})\n", sorted.front().kappa,
                     sorted.front().energy / sorted.front().kappa, 4.0 * std::numbers::sqrt2 / 3.0);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (!(rows[i].kappa > rows[i - 1].kappa && rows[i].energy > rows[i - 1].energy)) {
      throw CheckFailed(fmt::format("energy not strictly increasing between kappa = {} and {}", rows[i - 1].kappa,
                                    rows[i].kappa));
    }
  }
  out << "energy strictly increasing across rows\n";
  return kExitOk;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain:
    case ErrorKind::Resolution:
    case ErrorKind::SymmetryViolation: return kExitDomain;
    case ErrorKind::Usage: return kExitUsage;
    default: return kExitNumerical;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Steady states and gradient-flow dynamics of the periodic Allen-Cahn equation", "ac-lab"};
  app.require_subcommand(1);
  std::uint64_t seed = 20240611;
  app.add_option("--seed", seed, "Seed for randomized checks");

  std::function<int()> action;

  GroundOptions gopt;
  auto* gs = app.add_subcommand("ground-state", "Ground state U_kappa: JSON record and profile CSV");
  gs->add_option("--kappa", gopt.kappa, "kappa in (0, 1)")->required();
  gs->add_option("--n-points", gopt.n_points, "Grid points (power of two)");
  gs->add_option("--out", gopt.out, "Output directory");
  gs->callback([&] { action = [&] { return cmd_ground_state(gopt, out); }; });

  GroundOptions copt;
  auto* cat = app.add_subcommand("catalog", "All odd steady states at one kappa");
  cat->add_option("--kappa", copt.kappa, "kappa in (0, 1)")->required();
  cat->add_option("--n-points", copt.n_points, "Grid points (power of two)");
  cat->add_option("--out", copt.out, "Output directory");
  cat->callback([&] { action = [&] { return cmd_catalog(copt, out); }; });

  ClassifyOptions kopt;
  auto* cls = app.add_subcommand("classify", "Classify the steady-ODE orbit through (u0, v0)");
  cls->add_option("--u0", kopt.u0, "u at x = 0")->required();
  cls->add_option("--v0", kopt.v0, "u' at x = 0")->required();
  cls->add_option("--kappa", kopt.kappa, "kappa > 0")->required();
  cls->add_option("--out", kopt.out, "Output directory");
  cls->callback([&] { action = [&] { return cmd_classify(kopt, out); }; });

  EvolveOptions eopt;
  eopt.params.t_end = 10.0;
  auto* ev = app.add_subcommand("evolve", "Integrate the fractional Allen-Cahn flow in the sine basis");
  ev->add_option("--kappa", eopt.params.kappa, "kappa > 0")->required();
  ev->add_option("--gamma", eopt.params.gamma, "Fractional order in (0, 2]");
  ev->add_option("--dt", eopt.params.dt, "Time step, at most 0.1");
  ev->add_option("--t-end", eopt.params.t_end, "Final time");
  ev->add_option("--n-points", eopt.params.n_points, "Grid points (power of two)");
  ev->add_option("--record-every", eopt.params.record_every, "Steps between records");
  ev->add_option("--steady-tol", eopt.params.steady_tol, "Steady-state threshold on ||du/dt||");
  ev->add_option("--steady", eopt.steady, "Steady detection")->check(CLI::IsMember({"auto", "on", "off"}));
  ev->add_option("--filter", eopt.filter, "none | odd | bandgap")->check(CLI::IsMember({"none", "odd", "bandgap"}));
  ev->add_option("--preset", eopt.preset, "sin_x | half_sin_x | sin_2x | mixed");
  ev->add_option("--coeffs", eopt.coeffs, "Sine coefficients as m:c,m:c,...");
  ev->add_flag("--snapshots", eopt.snapshots, "Also write snapshots.json");
  ev->add_flag("--compare", eopt.compare, "Compare the terminal state with the steady catalog");
  ev->add_option("--out", eopt.out, "Output directory");
  ev->callback([&] { action = [&] { return cmd_evolve(eopt, out); }; });

  std::string suite = "all";
  std::string vout = ".";
  auto* ver = app.add_subcommand("verify", "Run the acceptance suites");
  ver->add_option("--suite", suite, "steady | dynamics | all");
  ver->add_option("--out", vout, "Output directory");
  ver->callback([&] { action = [&] { return cmd_verify(suite, seed, vout, out); }; });

  std::string grid_text = "0.05:0.95:0.05";
  std::size_t tn = 2048;
  std::string tout = ".";
  auto* tab = app.add_subcommand("energy-table", "E0_kappa over a kappa grid");
  tab->add_option("--grid", grid_text, "lo:hi:step or a comma list of kappa values");
  tab->add_option("--n-points", tn, "Minimum grid points per row");
  tab->add_option("--out", tout, "Output directory");
  tab->callback([&] { action = [&] { return cmd_energy_table(grid_text, tn, tout, out); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    return action();
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const CheckFailed& e) {
    err << "check failed: " << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace aclab::cli
