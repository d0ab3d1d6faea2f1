#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "skewprod/conjugator.hpp"
#include "skewprod/cremer.hpp"
#include "skewprod/errors.hpp"
#include "skewprod/format.hpp"
#include "skewprod/io.hpp"
#include "skewprod/petals.hpp"
#include "skewprod/slice.hpp"
#include "skewprod/smalldiv.hpp"

#ifndef SKEWPROD_VERSION
#define SKEWPROD_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using namespace skewprod;
using cd = std::complex<double>;

namespace {

enum Exit { kOk = 0, kMalformed = 2, kDegenerate = 3, kBudget = 4 };

struct Options {
  std::string rotation;
  std::string germ;
  std::string out = ".";
  int trunc_z = 16;
  int trunc_w = 8;
  int depth = 2;
  int m_max = 4096;
  int brjuno_k = -1;
  std::string mode = "greedy";
  std::string phi0 = "0,0";
  std::string grid = "-1.5,0.5,-1,1,200";
  std::string z0 = "0,0";
  std::string w0 = "0.1,0";
  int n_max = 10000;
  double escape = 1e6;
  int threads = 0;
  std::optional<std::uint64_t> seed;
  int samples = 10000;
  double rho = 0.1;
  double eta = 0.25;
};

cd parse_complex(const std::string& text, const char* what) {
  const auto comma = text.find(',');
  try {
    std::size_t used = 0;
    if (comma == std::string::npos) {
      const double re = std::stod(text, &used);
      if (used == text.size()) return {re, 0.0};
    } else {
      const std::string a = text.substr(0, comma), b = text.substr(comma + 1);
      std::size_t ub = 0;
      const double re = std::stod(a, &used);
      const double im = std::stod(b, &ub);
      if (used == a.size() && ub == b.size()) return {re, im};
    }
  } catch (const std::logic_error&) {
  }
  throw MalformedInput(std::string(what) + " must be \"re,im\"");
}

OrbitConfig orbit_config(const Options& o) {
  if (o.n_max < 1) throw MalformedInput("--n-max must be positive");
  if (!(o.escape > 0.0)) throw MalformedInput("--escape must be positive");
  OrbitConfig c;
  c.n_max = o.n_max;
  c.escape_radius = o.escape;
  return c;
}

void require(bool ok, const char* message) {
  if (!ok) throw MalformedInput(message);
}

fs::path out_file(const Options& o, const std::string& name) {
  fs::create_directories(o.out);
  return fs::path(o.out) / name;
}

void write_text(const Options& o, const std::string& name, const std::string& text) {
  std::ofstream f(out_file(o, name), std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + name);
  f << text;
}

Json summary_header(const std::string& command, const Json& config) {
  Json j;
  j["tool"] = "skewprod";
  j["version"] = SKEWPROD_VERSION;
  j["command"] = command;
  j["config"] = config;
  return j;
}

void write_summary(const Options& o, const std::string& name, const Json& j) { write_text(o, name, j.dump(2) + "\n"); }

Json residual_list(const std::vector<StageResidual>& rs) {
  Json out = Json::array();
  for (const auto& r : rs) out.push_back({{"stage", r.stage}, {"residual", shortest(r.residual)}});
  return out;
}

Json change_to_json(const FiberChange& ch) {
  Json j;
  j["kind"] = kind_name(ch);
  if (const auto* s = std::get_if<Shift>(&ch)) j["phi"] = series_to_json(s->phi);
  if (const auto* g = std::get_if<Gauge>(&ch)) j["psi"] = series_to_json(g->psi);
  if (const auto* b = std::get_if<Bump>(&ch)) {
    j["k"] = b->k;
    j["h"] = series_to_json(b->h);
  }
  if (const auto* w = std::get_if<WScale>(&ch)) j["c"] = complex_to_json(w->c);
  return j;
}

GermFile load_germ(const Options& o) {
  require(!o.germ.empty(), "--germ is required");
  return germ_from_json(load_json(o.germ));
}

int cmd_brjuno(const Options& o) {
  require(!o.rotation.empty(), "--rotation is required");
  require(o.m_max >= 2, "--m-max must be at least 2");
  const auto rot = rotation_from_json(load_json(o.rotation));
  const auto table = divisor_table(rot, o.m_max);
  int K = o.brjuno_k;
  if (K < 0)
    while ((2L << (K + 1)) <= o.m_max) ++K;
  require(K >= 0 && K < 30 && (1L << (K + 1)) <= o.m_max, "--brjuno-k needs 2^(K+1) <= m-max");

  std::ostringstream csv;
  write_divisor_csv(csv, table);
  write_text(o, "divisors.csv", csv.str());

  Json config{{"rotation", rotation_to_json(rot)}, {"m_max", o.m_max}, {"brjuno_k", K}};
  Json j = summary_header("brjuno", config);
  Json sums = Json::array();
  for (int k = 0; k <= K; ++k) sums.push_back({{"K", k}, {"value", shortest(brjuno_partial_sum(table, k))}});
  j["frac_bits"] = table.frac_bits;
  j["possibly_rational"] = rot.possibly_rational();
  j["brjuno_partial_sums"] = sums;
  j["cremer_running_max"] = shortest(cremer_running_max(table, o.m_max));
  j["omega_min"] = shortest(table.omega[static_cast<std::size_t>(o.m_max)]);
  double worst = 0.0;
  for (int p = 1; p < o.m_max; ++p) worst = std::max(worst, table.error_bound[static_cast<std::size_t>(p)] / table.d1[static_cast<std::size_t>(p)]);
  j["residuals"] = Json::array({{{"stage", "divisor_relative_error_bound"}, {"residual", shortest(worst)}}});
  write_summary(o, "brjuno.json", j);
  return kOk;
}

int cmd_normalize(const Options& o) {
  const GermFile gf = load_germ(o);
  const auto r = normalize(gf.germ, o.depth, o.trunc_z, o.trunc_w, gf.base);
  Json config{{"germ", germ_to_json(gf.germ, gf.base)}, {"trunc_z", o.trunc_z}, {"trunc_w", o.trunc_w}, {"depth", o.depth}};
  Json j = summary_header("normalize", config);
  j["k"] = r.form.k;
  j["h"] = r.form.h;
  Json jet = Json::array();
  for (int m = r.form.k + 1; m <= r.form.k + r.form.h + 1; ++m)
    jet.push_back({{"w_degree", m}, {"value", scaled_to_json(r.form.jet_coefficient(m))}});
  j["jet"] = jet;
  j["tail_start"] = r.form.tail_start;
  Json tail = Json::array();
  for (const auto& s : r.form.tail) tail.push_back(series_to_json(s));
  j["tail"] = tail;
  Json changes = Json::array();
  if (r.log.sigma) changes.push_back({{"kind", "base_linearization"}, {"sigma", series_to_json(*r.log.sigma)}});
  for (const auto& ch : r.log.changes) changes.push_back(change_to_json(ch));
  j["changes"] = changes;
  auto residuals = r.log.residuals;
  if (r.form.h >= r.form.k && 2 * r.form.k + 1 <= o.trunc_w) {
    const auto red = reduce_parabolic_tail(r.form, o.trunc_w);
    Json pr;
    pr["c"] = complex_to_json(red.c);
    pr["b"] = complex_to_json(*red.form.b);
    Json qs = Json::array();
    for (const auto& [m, q] : red.q) qs.push_back({{"eliminated_degree", m}, {"q", scaled_to_json(q)}});
    pr["q"] = qs;
    Json rjet = Json::array();
    for (int m = red.form.k + 1; m <= 2 * red.form.k + 1; ++m)
      rjet.push_back({{"w_degree", m}, {"value", scaled_to_json(red.form.jet_coefficient(m))}});
    pr["jet"] = rjet;
    j["parabolic_reduction"] = pr;
    // the reduced form is checked against a fresh replay of all changes
    ChangeLog full = r.log;
    for (const auto& ch : red.changes) full.changes.push_back(ch);
    residuals.push_back({"reduction_replay", max_relative_difference(replay(gf.germ, full).g, red.form.germ.g)});
  }
  j["residuals"] = residual_list(residuals);
  j["normal_form_germ"] = germ_to_json(r.form.germ);
  write_summary(o, "normalize.json", j);
  return kOk;
}

int cmd_cremer(const Options& o) {
  require(!o.rotation.empty(), "--rotation is required");
  require(o.m_max >= 1, "--m-max must be positive");
  require(o.mode == "greedy" || o.mode == "linear", "--mode must be greedy or linear");
  const auto rot = rotation_from_json(load_json(o.rotation));
  Json config{{"rotation", rotation_to_json(rot)}, {"m_max", o.m_max}, {"mode", o.mode}};
  std::vector<ScaledComplex> phi;
  std::vector<int> bits;
  double min_numerator = NAN;
  if (o.mode == "greedy") {
    const auto g = greedy_quadratic(rot, o.m_max);
    phi = g.phi;
    bits = g.bits;
    min_numerator = INFINITY;
    for (int n = 1; n <= o.m_max; ++n) min_numerator = std::min(min_numerator, g.numerator_modulus[static_cast<std::size_t>(n)]);
  } else {
    const cd p0 = parse_complex(o.phi0, "--phi0");
    config["phi0"] = complex_to_json(p0);
    phi = linear_example_phi(rot, p0, o.m_max);
  }
  std::ostringstream csv;
  write_growth_csv(csv, rot, phi, bits);
  write_text(o, "growth.csv", csv.str());

  const auto prof = growth_profile(phi);
  Json j = summary_header("cremer", config);
  j["running_max"] = shortest(prof.running_max[static_cast<std::size_t>(o.m_max)]);
  Json conv = Json::array();
  for (const auto& q : rot.convergent_denominators(o.m_max)) {
    if (q > o.m_max) break;
    const int m = static_cast<int>(q);
    conv.push_back({{"q", m}, {"e_q", shortest(prof.exponent[static_cast<std::size_t>(m)])}});
  }
  j["convergents"] = conv;
  if (o.mode == "greedy") {
    std::string s;
    for (int n = 1; n <= o.m_max; ++n) s += static_cast<char>('0' + bits[static_cast<std::size_t>(n)]);
    j["bits"] = s;
    j["min_numerator"] = shortest(min_numerator);
  }
  j["residuals"] = Json::array();
  if (o.mode == "linear") {
    // recursion against the telescoped product
    const cd p0 = parse_complex(o.phi0, "--phi0");
    double worst = 0.0;
    ScaledComplex prod(1.0);
    for (int n = 1; n <= o.m_max; ++n) {
      prod *= rot.unit_power_minus_one(n);
      worst = std::max(worst, relative_difference(phi[static_cast<std::size_t>(n)], ScaledComplex(1.0 + p0) / prod));
    }
    j["residuals"].push_back({{"stage", "closed_form"}, {"residual", shortest(worst)}});
  }
  write_summary(o, "cremer.json", j);
  return kOk;
}

int cmd_orbit(const Options& o) {
  const GermFile gf = load_germ(o);
  const auto cfg = orbit_config(o);
  const cd z0 = parse_complex(o.z0, "--z0");
  const cd w0 = parse_complex(o.w0, "--w0");
  const auto rec = iterate_orbit(gf.germ, z0, w0, cfg);
  std::ostringstream csv;
  csv << "n,re_z,im_z,re_w,im_w,log_abs_deriv,deriv_sum\n";
  double sum = 0.0;
  for (std::size_t n = 0; n < rec.w.size(); ++n) {
    csv << n << ',' << shortest(rec.z[n].real()) << ',' << shortest(rec.z[n].imag()) << ','
        << shortest(rec.w[n].real()) << ',' << shortest(rec.w[n].imag()) << ',';
    if (n < rec.deriv_log.size()) {
      sum += rec.deriv_log[n];
      csv << shortest(rec.deriv_log[n]) << ',' << shortest(sum);
    } else {
      csv << ',';
    }
    csv << '\n';
  }
  write_text(o, "orbit.csv", csv.str());
  Json config{{"germ", germ_to_json(gf.germ, gf.base)}, {"z0", complex_to_json(z0)}, {"w0", complex_to_json(w0)},
              {"n_max", o.n_max}, {"escape", shortest(o.escape)}};
  Json j = summary_header("orbit", config);
  j["verdict"] = verdict_to_json(rec.verdict);
  j["n_stop"] = rec.n_stop;
  j["stop_reason"] = rec.stop_reason;
  j["steps"] = rec.deriv_log.size();
  j["residuals"] = Json::array();
  write_summary(o, "orbit.json", j);
  return kOk;
}

int cmd_slice(const Options& o) {
  const GermFile gf = load_germ(o);
  const auto cfg = orbit_config(o);
  const cd z0 = parse_complex(o.z0, "--z0");
  const GridSpec grid = parse_grid(o.grid);
  const auto fam = VerticalFamily::from_germ(gf.germ);
  const auto s = fatou_slice(fam, z0, grid, cfg, o.threads);
  std::ostringstream ppm, csv;
  write_ppm(ppm, s);
  write_slice_csv(csv, s);
  write_text(o, "slice.ppm", ppm.str());
  write_text(o, "slice.csv", csv.str());
  // thread count is left out of the echo: it does not affect any output
  Json config{{"germ", germ_to_json(gf.germ, gf.base)},
              {"z0", complex_to_json(z0)},
              {"grid", {shortest(grid.re0), shortest(grid.re1), shortest(grid.im0), shortest(grid.im1), grid.res}},
              {"n_max", o.n_max},
              {"escape", shortest(o.escape)}};
  Json j = summary_header("slice", config);
  std::map<std::string, int> counts;
  for (const auto& v : s.verdicts) ++counts[verdict_name(v.kind)];
  j["counts"] = counts;
  Json cycles = Json::array();
  for (std::size_t i = 0; i < s.cycles.size(); ++i)
    cycles.push_back({{"id", i}, {"point", complex_to_json(s.cycles[i])}});
  j["cycles"] = cycles;
  j["parabolic_k"] = fam.parabolic() ? fam.parabolic()->k : 0;
  j["residuals"] = Json::array();
  write_summary(o, "slice.json", j);
  return kOk;
}

int cmd_hypotheses(const Options& o) {
  require(o.seed.has_value(), "--seed is required for sampling subcommands");
  require(o.samples >= 1, "--samples must be positive");
  const GermFile gf = load_germ(o);
  const auto cfg = orbit_config(o);
  std::vector<cd> g0;
  for (int m = 0; m <= gf.germ.w_degree(); ++m) g0.push_back(gf.germ.g[m][0].to_complex());
  const auto rep = critical_orbit_check(g0, cfg);

  Json config{{"germ", germ_to_json(gf.germ, gf.base)}, {"n_max", o.n_max}, {"escape", shortest(o.escape)},
              {"seed", *o.seed}, {"samples", o.samples}, {"rho", shortest(o.rho)}, {"eta", shortest(o.eta)}};
  Json j = summary_header("hypotheses", config);
  Json cps = Json::array();
  for (const auto& cp : rep.critical_points)
    cps.push_back({{"point", complex_to_json(cp.point)},
                   {"root_converged", cp.root_converged},
                   {"verdict", verdict_to_json(cp.verdict)},
                   {"n_stop", cp.n_stop}});
  j["critical_points"] = cps;
  j["hypotheses_plausible"] = rep.plausible;
  j["residuals"] = Json::array();

  // Petal diagnostics when the fiber over z = 0 is parabolic at w = 0.
  if (gf.germ.parabolic_fiber(1e-12)) {
    const int k = detect_parabolic_order(gf.germ);
    const int D = std::max(gf.germ.w_degree(), 2 * k + 1);
    const auto r = normalize(gf.germ, k, gf.germ.z_order(), D, gf.base);
    const auto red = reduce_parabolic_tail(r.form, D);
    const auto local = parabolic_local(red, o.rho, o.eta);
    const auto inv = forward_invariance_check(local, 0.5 * gf.germ.radius, o.samples, *o.seed);
    const auto ex = repelling_expansion_check(local, o.samples, *o.seed);
    Json p;
    p["k"] = k;
    p["b"] = complex_to_json(local.b);
    p["invariance"] = {{"samples", inv.samples}, {"violations", inv.violations}, {"worst_margin", shortest(inv.worst_margin)}};
    p["expansion"] = {{"samples", ex.samples}, {"violations", ex.violations}, {"min_abs_derivative", shortest(ex.min_abs_derivative)}};
    j["petals"] = p;
    for (const auto& s : r.log.residuals) j["residuals"].push_back({{"stage", s.stage}, {"residual", shortest(s.residual)}});
  }
  write_summary(o, "hypotheses.json", j);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Skew-product germs over irrational rotations: small divisors, normal forms, petals"};
  app.set_version_flag("--version", SKEWPROD_VERSION);
  app.require_subcommand(1);
  Options o;

  auto add_rotation = [&](CLI::App* c) { c->add_option("--rotation", o.rotation, "rotation JSON file or inline JSON"); };
  auto add_germ = [&](CLI::App* c) { c->add_option("--germ", o.germ, "germ JSON file"); };
  auto add_out = [&](CLI::App* c) { c->add_option("--out", o.out, "output directory")->capture_default_str(); };
  auto add_orbit = [&](CLI::App* c) {
    c->add_option("--n-max", o.n_max, "iteration budget per orbit")->capture_default_str();
    c->add_option("--escape", o.escape, "escape radius")->capture_default_str();
  };

  auto* brjuno = app.add_subcommand("brjuno", "divisor table, Brjuno partial sums, Cremer exponents");
  add_rotation(brjuno);
  add_out(brjuno);
  brjuno->add_option("--m-max", o.m_max, "largest index m")->capture_default_str();
  brjuno->add_option("--brjuno-k", o.brjuno_k, "largest K of the partial sums (default: all that fit)");

  auto* norm = app.add_subcommand("normalize", "normal form of a germ with change log and residuals");
  add_germ(norm);
  add_out(norm);
  norm->add_option("--trunc-z", o.trunc_z, "z truncation N")->capture_default_str();
  norm->add_option("--trunc-w", o.trunc_w, "w truncation D_w")->capture_default_str();
  norm->add_option("--depth", o.depth, "normalization depth h")->capture_default_str();

  auto* cremer = app.add_subcommand("cremer", "coefficient growth of the divergent examples");
  add_rotation(cremer);
  add_out(cremer);
  cremer->add_option("--m-max", o.m_max, "number of coefficients")->capture_default_str();
  cremer->add_option("--mode", o.mode, "greedy or linear")->capture_default_str();
  cremer->add_option("--phi0", o.phi0, "phi_0 for the linear example, \"re,im\"")->capture_default_str();

  auto* orbit = app.add_subcommand("orbit", "iterate and classify one orbit");
  add_germ(orbit);
  add_out(orbit);
  add_orbit(orbit);
  orbit->add_option("--z0", o.z0, "base point \"re,im\"")->capture_default_str();
  orbit->add_option("--w0", o.w0, "fiber point \"re,im\"")->capture_default_str();

  auto* slice = app.add_subcommand("slice", "classify a grid in the fiber over z0");
  add_germ(slice);
  add_out(slice);
  add_orbit(slice);
  slice->add_option("--z0", o.z0, "base point \"re,im\"")->capture_default_str();
  slice->add_option("--grid", o.grid, "\"re0,re1,im0,im1,res\"")->capture_default_str();
  slice->add_option("--threads", o.threads, "worker threads (0 = hardware)")->capture_default_str();

  auto* hyp = app.add_subcommand("hypotheses", "critical orbits and petal diagnostics");
  add_germ(hyp);
  add_out(hyp);
  add_orbit(hyp);
  hyp->add_option("--seed", o.seed, "random seed for petal sampling");
  hyp->add_option("--samples", o.samples, "petal samples")->capture_default_str();
  hyp->add_option("--rho", o.rho, "petal radius")->capture_default_str();
  hyp->add_option("--eta", o.eta, "petal widening")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kMalformed;
  }

  try {
    if (*brjuno) return cmd_brjuno(o);
    if (*norm) return cmd_normalize(o);
    if (*cremer) return cmd_cremer(o);
    if (*orbit) return cmd_orbit(o);
    if (*slice) return cmd_slice(o);
    if (*hyp) return cmd_hypotheses(o);
  } catch (const DegenerateDivisor& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDegenerate;
  } catch (const InsufficientPrecision& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBudget;
  } catch (const std::invalid_argument& e) {
    std::cerr << "malformed input: " << e.what() << '\n';
    return kMalformed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kMalformed;
}
