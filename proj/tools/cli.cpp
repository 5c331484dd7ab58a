#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>

#include "nullfield/bateman.hpp"
#include "nullfield/evolve.hpp"
#include "nullfield/floquet.hpp"
#include "nullfield/flow.hpp"
#include "nullfield/legendrian.hpp"
#include "nullfield/sampling.hpp"

namespace nullfield::cli {

namespace {

using json = nlohmann::json;
constexpr double kPi = std::numbers::pi;

/// A failed numerical step (integration, degenerate geometry); exit code 1.
class RunFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Outcome {
  json report = json::object();
  std::string csv; // written to cfg.out when non-empty
  bool pass = true;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvTable {
public:
  explicit CsvTable(std::vector<std::string> header) : cols_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      os_ << (i ? "," : "") << header[i];
    }
    os_ << '\n';
  }
  void row(const std::vector<double>& v) {
    if (v.size() != cols_) {
      throw std::logic_error("CsvTable: row width mismatch");
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
      os_ << (i ? "," : "") << fmt(v[i]);
    }
    os_ << '\n';
  }
  std::string str() const { return os_.str(); }

private:
  std::size_t cols_;
  std::ostringstream os_;
};

/// max / mean accumulator with a pass tolerance.
struct Metric {
  double max = 0.0;
  double sum = 0.0;
  long count = 0;

  void add(double v) {
    max = std::max(max, v);
    sum += v;
    ++count;
  }
  json to_json(double tol) const {
    return {{"max", max}, {"mean", count ? sum / count : 0.0}, {"count", count},
            {"tol", tol}, {"pass", max <= tol}};
  }
};

Generator generator_of(const RunConfig& cfg) {
  try {
    return parse_generator(cfg.generator);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("generator: ") + e.what());
  }
}

FieldMode mode_of(const RunConfig& cfg, const Generator& h) {
  if (cfg.mode == "direct") {
    if (!h.is_holomorphic()) {
      throw ConfigError("generator must be holomorphic in direct mode");
    }
    return FieldMode::direct;
  }
  if (cfg.mode == "antiholomorphic") {
    if (!h.is_antiholomorphic()) {
      throw ConfigError("generator must be antiholomorphic in antiholomorphic mode");
    }
    return FieldMode::antiholomorphic;
  }
  if (cfg.mode != "auto") {
    throw ConfigError("mode must be auto, direct or antiholomorphic");
  }
  if (h.is_holomorphic()) {
    return FieldMode::direct;
  }
  if (h.is_antiholomorphic()) {
    return FieldMode::antiholomorphic;
  }
  throw ConfigError("generator mixes holomorphic and antiholomorphic terms");
}

std::vector<Variant> variants_of(const RunConfig& cfg) {
  if (cfg.variant == "hopf") return {Variant::hopf};
  if (cfg.variant == "tilde") return {Variant::tilde};
  if (cfg.variant == "both") return {Variant::hopf, Variant::tilde};
  throw ConfigError("variant must be hopf, tilde or both");
}

const char* name_of(Variant v) { return v == Variant::hopf ? "hopf" : "tilde"; }

Polarity polarity_of(const RunConfig& cfg) {
  if (cfg.polarity == "e") return Polarity::e_type;
  if (cfg.polarity == "b") return Polarity::b_type;
  throw ConfigError("polarity must be e or b");
}

SeifertSpec seifert_of(const RunConfig& cfg) {
  SeifertSpec s{cfg.p, cfg.q};
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return s;
}

int count_or(const RunConfig& cfg, int def) {
  if (cfg.n < 0) {
    throw ConfigError("n must be non-negative");
  }
  return cfg.n > 0 ? cfg.n : def;
}

double tol_or(const RunConfig& cfg, double def) { return cfg.tol ? *cfg.tol : def; }

TraceOptions trace_options(const RunConfig&) {
  TraceOptions o;
  o.integrator.atol = o.integrator.rtol = 1e-12;
  return o;
}

/// Torus start (sqrt(1 - a), sqrt(a)).
S3Point torus_start(double a) {
  if (!(a > 0.0 && a < 1.0)) {
    throw ConfigError("start-a must lie in (0, 1)");
  }
  return S3Point(Complex(std::sqrt(1.0 - a), 0.0), Complex(std::sqrt(a), 0.0));
}

S3Point sphere_start(const RunConfig& cfg) {
  if (cfg.start_a) {
    return torus_start(*cfg.start_a);
  }
  if (cfg.start.empty()) {
    return S3Point(Vec4(1, 0, 0, 0));
  }
  if (cfg.start.size() != 4) {
    throw ConfigError("start needs 4 values on S^3");
  }
  try {
    return S3Point(Vec4(cfg.start[0], cfg.start[1], cfg.start[2], cfg.start[3]));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::string curve_csv(const SphereCurve& c) {
  std::ostringstream os;
  write_curve_csv(os, c);
  return os.str();
}

std::string curve_csv(const SpaceCurve& c) {
  std::ostringstream os;
  write_curve_csv(os, c);
  return os.str();
}

SpaceCurve load_space_curve(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open curve file " + path);
  }
  try {
    return read_space_curve_csv(in);
  } catch (const std::runtime_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

SphereCurve load_sphere_curve(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open curve file " + path);
  }
  try {
    return read_sphere_curve_csv(in);
  } catch (const std::runtime_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

json vec_json(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }

// ------------------------------------------------------------ verify suites

Outcome suite_bateman_pde(const RunConfig& cfg) {
  Outcome o;
  const int n = count_or(cfg, 1000);
  const double tol_pde = tol_or(cfg, 1e-10);
  const double tol_sphere = 1e-12;
  CsvTable csv({"variant", "x", "y", "z", "t", "pde_residual", "sphere_constraint"});
  for (Variant v : variants_of(cfg)) {
    Rng rng(cfg.seed);
    Metric pde;
    Metric sphere;
    for (int i = 0; i < n; ++i) {
      const Vec3 x = random_box_point(rng, 2.0);
      const double t = rng.uniform(-1.0, 1.0);
      const SpacetimePoint p = SpacetimePoint::at(x, t);
      const double r = bateman_pde_residual(p, v).norm();
      const VariableJet j = variables(p, v);
      const double s = std::abs(std::norm(j.alpha) + std::norm(j.beta) - 1.0);
      pde.add(r);
      sphere.add(s);
      csv.row({v == Variant::hopf ? 0.0 : 1.0, x[0], x[1], x[2], t, r, s});
    }
    o.report[name_of(v)] = {{"pde_residual", pde.to_json(tol_pde)},
                            {"sphere_constraint", sphere.to_json(tol_sphere)}};
    o.pass = o.pass && pde.max <= tol_pde && sphere.max <= tol_sphere;
  }
  o.csv = csv.str();
  return o;
}

Outcome suite_null(const RunConfig& cfg) {
  Outcome o;
  const Generator h = generator_of(cfg);
  const FieldMode mode = mode_of(cfg, h);
  const int n = count_or(cfg, 1000);
  const double tol = tol_or(cfg, 1e-9);
  CsvTable csv({"variant", "x", "y", "z", "t", "e_dot_b", "norm_gap", "two_w"});
  for (Variant v : variants_of(cfg)) {
    Metric dot;
    Metric gap;
    for (double t : cfg.times) {
      Rng rng(cfg.seed);
      for (int i = 0; i < n; ++i) {
        const Vec3 x = random_box_point(rng, 2.0);
        const ComplexTriple F = rs_field(h, SpacetimePoint::at(x, t), v, mode);
        const NullDefect d = null_defect(F);
        const double two_w = 2.0 * em_sample(F).W;
        const double scale = two_w > 0.0 ? two_w : 1.0;
        dot.add(std::abs(d.e_dot_b) / scale);
        gap.add(std::abs(d.norm_gap) / scale);
        csv.row({v == Variant::hopf ? 0.0 : 1.0, x[0], x[1], x[2], t, d.e_dot_b, d.norm_gap, two_w});
      }
    }
    o.report[name_of(v)] = {{"e_dot_b_over_2w", dot.to_json(tol)},
                            {"norm_gap_over_2w", gap.to_json(tol)}};
    o.pass = o.pass && dot.max <= tol && gap.max <= tol;
  }
  o.report["generator"] = to_string(h);
  o.report["mode"] = mode == FieldMode::direct ? "direct" : "antiholomorphic";
  o.csv = csv.str();
  return o;
}

Outcome suite_maxwell(const RunConfig& cfg) {
  Outcome o;
  const Generator h = generator_of(cfg);
  const FieldMode mode = mode_of(cfg, h);
  const int n = count_or(cfg, 100);
  const double tol = tol_or(cfg, 1e-6);
  CsvTable csv({"variant", "x", "y", "z", "t", "ampere", "faraday", "div_e", "div_b", "abs_f"});
  for (Variant v : variants_of(cfg)) {
    Metric m;
    for (double t : cfg.times) {
      Rng rng(cfg.seed);
      for (int i = 0; i < n; ++i) {
        const Vec3 x = random_box_point(rng, 2.0);
        const SpacetimePoint p = SpacetimePoint::at(x, t);
        const MaxwellResidual r = maxwell_residual(h, p, v, mode);
        const double f = rs_field(h, p, v, mode).F.norm();
        m.add(r.max_norm() / (1.0 + f));
        csv.row({v == Variant::hopf ? 0.0 : 1.0, x[0], x[1], x[2], t, r.ampere.norm(),
                 r.faraday.norm(), std::abs(r.div_e), std::abs(r.div_b), f});
      }
    }
    o.report[name_of(v)] = {{"residual_over_1_plus_f", m.to_json(tol)}};
    o.pass = o.pass && m.max <= tol;
  }
  o.report["generator"] = to_string(h);
  o.csv = csv.str();
  return o;
}

Outcome suite_divergence(const RunConfig& cfg) {
  Outcome o;
  const Generator theta = generator_of(cfg);
  const int n = count_or(cfg, 200);
  const double tol = tol_or(cfg, 1e-12);
  Rng rng(cfg.seed);
  Metric e_gap;
  Metric b_gap;
  Metric div_abs;
  CsvTable csv({"x1", "y1", "x2", "y2", "div_e", "div_b", "two_re_lbar", "two_im_lbar"});
  for (int i = 0; i < n; ++i) {
    const S3Point p = random_sphere_point(rng);
    const DivergenceIdentities d = divergence_identities(theta, p);
    e_gap.add(std::abs(d.div_e - d.two_re_lbar));
    b_gap.add(std::abs(d.div_b - d.two_im_lbar));
    div_abs.add(std::max(std::abs(d.div_e), std::abs(d.div_b)));
    const Vec4& x = p.coords();
    csv.row({x[0], x[1], x[2], x[3], d.div_e, d.div_b, d.two_re_lbar, d.two_im_lbar});
  }
  o.report["generator"] = to_string(theta);
  o.report["div_e_minus_two_re_lbar"] = e_gap.to_json(tol);
  o.report["div_b_minus_two_im_lbar"] = b_gap.to_json(tol);
  o.pass = e_gap.max <= tol && b_gap.max <= tol;
  if (theta.is_holomorphic()) {
    o.report["divergence"] = div_abs.to_json(tol);
    o.pass = o.pass && div_abs.max <= tol;
  }
  o.csv = csv.str();
  return o;
}

Outcome suite_seifert(const RunConfig& cfg) {
  Outcome o;
  const SeifertSpec S = seifert_of(cfg);
  const int n = count_or(cfg, 100);
  const double tol_form = tol_or(cfg, 1e-12);
  const double tol_volume = 1e-6;
  Rng rng(cfg.seed);
  Metric form;
  Metric volume;
  CsvTable csv({"x1", "y1", "x2", "y2", "s", "alpha_of_x", "volume_ratio", "closed_form"});
  int taken = 0;
  while (taken < n) {
    const S3Point p = random_sphere_point(rng);
    const HopfCoords hc = hopf_coords(p);
    if (hc.s < 1e-3 || hc.s > kPi / 2 - 1e-3) {
      continue;
    }
    ++taken;
    const double a = std::abs(seifert_form(S, p).dot(seifert_field(S, p.coords())));
    const double ratio = contact_volume_ratio(S, p);
    const double closed = contact_volume_ratio_closed_form(S, hc.s);
    form.add(a);
    volume.add(std::abs(ratio - closed));
    const Vec4& x = p.coords();
    csv.row({x[0], x[1], x[2], x[3], hc.s, a, ratio, closed});
  }
  o.report["p"] = S.p;
  o.report["q"] = S.q;
  o.report["alpha_of_field"] = form.to_json(tol_form);
  o.report["volume_ratio_gap"] = volume.to_json(tol_volume);
  o.pass = form.max <= tol_form && volume.max <= tol_volume;
  o.csv = csv.str();
  return o;
}

Outcome suite_sphere_pushforward(const RunConfig& cfg) {
  Outcome o;
  const Generator h = generator_of(cfg);
  if (!h.is_holomorphic()) {
    throw ConfigError("sphere-pushforward needs a holomorphic generator");
  }
  const int n = count_or(cfg, 100);
  const double tol = tol_or(cfg, 1e-6);
  Metric m;
  CsvTable csv({"x1", "y1", "x2", "y2", "t", "defect"});
  for (double t : cfg.times) {
    Rng rng(cfg.seed);
    int taken = 0;
    while (taken < n) {
      const S3Point p = random_sphere_point(rng);
      if ((p.coords() - Vec4(1, 0, 0, 0)).norm() < 0.05 || std::abs(h(p.z1(), p.z2())) < 1e-6) {
        continue;
      }
      ++taken;
      const double d = sphere_pushforward_check(h, t, p);
      m.add(d);
      const Vec4& x = p.coords();
      csv.row({x[0], x[1], x[2], x[3], t, d});
    }
  }
  o.report["generator"] = to_string(h);
  o.report["defect"] = m.to_json(tol);
  o.pass = m.max <= tol;
  o.csv = csv.str();
  return o;
}

Outcome suite_roundtrip(const RunConfig& cfg) {
  Outcome o;
  const int n = count_or(cfg, 1000);
  const double tol = tol_or(cfg, 1e-12);
  Rng rng(cfg.seed);
  Metric m;
  CsvTable csv({"x", "y", "z", "error"});
  int taken = 0;
  while (taken < n) {
    const Vec3 q = random_box_point(rng, 10.0);
    if (q.norm() > 10.0) {
      continue;
    }
    ++taken;
    const double e = (stereo_project(stereo_lift(q)).coords() - q).norm();
    m.add(e);
    csv.row({q[0], q[1], q[2], e});
  }
  o.report["error"] = m.to_json(tol);
  o.pass = m.max <= tol;
  o.csv = csv.str();
  return o;
}

Outcome suite_first_integrals(const RunConfig& cfg) {
  Outcome o;
  const Generator h = generator_of(cfg);
  if (!h.is_holomorphic()) {
    throw ConfigError("first-integrals needs a holomorphic generator");
  }
  const MixedPoly G = torus_knot_potential(cfg.p, cfg.q);
  const int n = count_or(cfg, 10);
  const double tol = tol_or(cfg, 1e-8);
  const TraceOptions topt = trace_options(cfg);
  Rng rng(cfg.seed);
  Metric e_drift;
  Metric b_drift;
  CsvTable csv({"x1", "y1", "x2", "y2", "e_drift_im_g", "b_drift_re_g"});
  for (int i = 0; i < n; ++i) {
    const S3Point p = random_sphere_point(rng);
    const SphereCurve ce =
        trace_sphere(SphereFieldSpec::from_legendrian({h, Polarity::e_type}), p, cfg.tau, topt);
    const SphereCurve cb =
        trace_sphere(SphereFieldSpec::from_legendrian({h, Polarity::b_type}), p, cfg.tau, topt);
    const double de = integral_drift(ce, imag_part(G));
    const double db = integral_drift(cb, real_part(G));
    e_drift.add(de);
    b_drift.add(db);
    const Vec4& x = p.coords();
    csv.row({x[0], x[1], x[2], x[3], de, db});
  }
  o.report["generator"] = to_string(h);
  o.report["potential"] = to_string(G);
  o.report["tau"] = cfg.tau;
  o.report["e_lines_im_g_drift"] = e_drift.to_json(tol);
  o.report["b_lines_re_g_drift"] = b_drift.to_json(tol);
  o.pass = e_drift.max <= tol && b_drift.max <= tol;
  o.csv = csv.str();
  return o;
}

Outcome suite_tt_link(const RunConfig& cfg) {
  Outcome o;
  if (cfg.p < 1 || cfg.q < 1) {
    throw ConfigError("p and q must be positive");
  }
  const double tol = tol_or(cfg, 1e-8);
  const SphereCurve c = tt_torus_curve(cfg.p, cfg.q, cfg.samples);
  const TtLinkDefect d = tt_link_defect(torus_knot_potential(cfg.p, cfg.q), c);
  o.report["p"] = cfg.p;
  o.report["q"] = cfg.q;
  o.report["rho"] = torus_knot_rho(cfg.p, cfg.q);
  o.report["max_abs_g"] = {{"value", d.max_abs_g}, {"tol", tol}, {"pass", d.max_abs_g <= tol}};
  o.report["max_contact_gradient"] = {
      {"value", d.max_contact_gradient}, {"tol", tol}, {"pass", d.max_contact_gradient <= tol}};
  o.pass = d.max_abs_g <= tol && d.max_contact_gradient <= tol;
  o.csv = curve_csv(c);
  return o;
}

/// Smallest N <= 1000 with a = k / N within 1e-12.
std::pair<long, long> rational_torus(double a) {
  for (long N = 1; N <= 1000; ++N) {
    const long k = std::lround(a * static_cast<double>(N));
    if (std::abs(a - static_cast<double>(k) / static_cast<double>(N)) < 1e-12) {
      return {k, N};
    }
  }
  throw ConfigError("start-a must be a rational number with denominator <= 1000");
}

Outcome suite_torus_orbit(const RunConfig& cfg) {
  Outcome o;
  const double a = cfg.start_a ? *cfg.start_a : 0.4;
  const S3Point start = torus_start(a);
  const auto [k, N] = rational_torus(a);
  const double expected_period = 2.0 * kPi * static_cast<double>(N);
  const std::pair<int, int> expected_windings{static_cast<int>(-k), static_cast<int>(N - k)};
  const double tol_period = 1e-7;
  const double tol_drift = tol_or(cfg, 1e-9);

  const SphereCurve c =
      trace_sphere(SphereFieldSpec::torus(), start, expected_period + 1.0, trace_options(cfg));
  const auto period = detect_closure(c, 1e-6);
  if (!period) {
    throw RunFailure("torus orbit did not close");
  }
  const SphereCurve orbit = closed_orbit(c, *period, cfg.samples);
  const double d1 = integral_drift(c, [](const S3Point& p) { return std::norm(p.z1()); });
  const double d2 = integral_drift(c, [](const S3Point& p) { return std::norm(p.z2()); });
  const auto w = phase_windings(orbit);
  const int rot = rotation_number(orbit);

  const bool period_ok = std::abs(*period - expected_period) <= tol_period;
  const bool drift_ok = d1 <= tol_drift && d2 <= tol_drift;
  const bool windings_ok = w == expected_windings;
  const bool rotation_ok = rot == 0;
  o.report["start_a"] = a;
  o.report["period"] = {{"value", *period}, {"expected", expected_period}, {"tol", tol_period},
                        {"pass", period_ok}};
  o.report["drift"] = {{"abs_z1_squared", d1}, {"abs_z2_squared", d2}, {"tol", tol_drift},
                       {"pass", drift_ok}};
  o.report["windings"] = {{"value", {w.first, w.second}},
                          {"expected", {expected_windings.first, expected_windings.second}},
                          {"pass", windings_ok}};
  o.report["rotation_number"] = {{"value", rot}, {"expected", 0}, {"pass", rotation_ok}};
  o.pass = period_ok && drift_ok && windings_ok && rotation_ok;
  o.csv = curve_csv(orbit);
  return o;
}

Outcome run_verify(const RunConfig& cfg) {
  static const std::vector<std::pair<std::string, std::function<Outcome(const RunConfig&)>>>
      suites{{"bateman-pde", suite_bateman_pde},
             {"null", suite_null},
             {"maxwell", suite_maxwell},
             {"divergence", suite_divergence},
             {"seifert", suite_seifert},
             {"sphere-pushforward", suite_sphere_pushforward},
             {"roundtrip", suite_roundtrip},
             {"first-integrals", suite_first_integrals},
             {"tt-link", suite_tt_link},
             {"torus-orbit", suite_torus_orbit}};
  for (const auto& [name, fn] : suites) {
    if (name == cfg.suite) {
      Outcome o = fn(cfg);
      o.report["suite"] = name;
      o.report["seed"] = cfg.seed;
      return o;
    }
  }
  throw ConfigError("unknown verify suite '" + cfg.suite + "'");
}

// ------------------------------------------------------------ trace

Outcome trace_on_sphere(const RunConfig& cfg) {
  Outcome o;
  SphereFieldSpec f;
  if (cfg.field == "legendrian") {
    f = SphereFieldSpec::from_legendrian({generator_of(cfg), polarity_of(cfg)});
  } else if (cfg.field == "torus") {
    f = SphereFieldSpec::torus();
  } else {
    f = SphereFieldSpec::from_seifert(seifert_of(cfg));
  }
  const S3Point start = sphere_start(cfg);
  TraceOptions topt = trace_options(cfg);
  if (cfg.tol) {
    topt.integrator.atol = topt.integrator.rtol = *cfg.tol;
  }
  const SphereCurve c = trace_sphere(f, start, cfg.tau, topt);
  o.report["field"] = cfg.field;
  o.report["start"] = vec_json(start.coords());
  o.report["tau"] = cfg.tau;
  o.report["steps"] = c.size() - 1;
  o.report["renormalization_displacement"] = c.renormalization_displacement;
  o.csv = curve_csv(c);

  const bool wants_orbit = cfg.closure || cfg.windings || cfg.rotation || cfg.project ||
                           !cfg.link_with.empty();
  if (!wants_orbit) {
    return o;
  }
  const auto period = detect_closure(c, 1e-6);
  o.report["period"] = period ? json(*period) : json(nullptr);
  if (!period) {
    o.pass = false;
    return o;
  }
  const SphereCurve orbit = closed_orbit(c, *period, cfg.samples);
  o.csv = curve_csv(orbit);
  if (cfg.windings) {
    const auto w = phase_windings(orbit);
    o.report["windings"] = {w.first, w.second};
  }
  if (cfg.rotation) {
    o.report["rotation_number"] = rotation_number(orbit);
  }
  if (cfg.project || !cfg.link_with.empty()) {
    const SpaceCurve projected = project_curve(orbit);
    if (cfg.project) {
      o.csv = curve_csv(projected);
    }
    if (!cfg.link_with.empty()) {
      const LinkingResult lk = linking_number(projected, load_space_curve(cfg.link_with));
      o.report["linking"] = {{"value", lk.value}, {"raw", lk.raw}};
    }
  }
  return o;
}

Outcome trace_in_space(const RunConfig& cfg) {
  Outcome o;
  SpaceFieldSpec f;
  f.h = generator_of(cfg);
  f.mode = mode_of(cfg, f.h);
  const std::vector<Variant> vs = variants_of(cfg);
  if (vs.size() != 1) {
    throw ConfigError("trace needs a single variant");
  }
  f.variant = vs.front();
  f.t = cfg.time;
  f.kind = cfg.field == "electric" ? SpaceFieldSpec::Kind::electric
                                   : SpaceFieldSpec::Kind::magnetic;
  if (cfg.start.size() != 3) {
    throw ConfigError("start needs 3 values in R^3");
  }
  const Vec3 start(cfg.start[0], cfg.start[1], cfg.start[2]);
  TraceOptions topt = trace_options(cfg);
  if (cfg.tol) {
    topt.integrator.atol = topt.integrator.rtol = *cfg.tol;
  }
  const SpaceCurve c = trace_space(f, start, cfg.tau, topt);
  o.report["field"] = cfg.field;
  o.report["time"] = cfg.time;
  o.report["steps"] = c.size() - 1;
  o.csv = curve_csv(c);
  if (cfg.closure || !cfg.link_with.empty()) {
    const auto period = detect_closure(c, 1e-6);
    o.report["period"] = period ? json(*period) : json(nullptr);
    if (!period) {
      o.pass = false;
      return o;
    }
    const SpaceCurve orbit = closed_orbit(c, *period, cfg.samples);
    o.csv = curve_csv(orbit);
    if (!cfg.link_with.empty()) {
      const LinkingResult lk = linking_number(orbit, load_space_curve(cfg.link_with));
      o.report["linking"] = {{"value", lk.value}, {"raw", lk.raw}};
    }
  }
  return o;
}

Outcome trace_poynting(const RunConfig& cfg) {
  Outcome o;
  if (cfg.from_curve.empty() || !cfg.transport_to) {
    throw ConfigError("poynting tracing needs --from-curve and --transport-to");
  }
  TransportSpec ts;
  ts.h = generator_of(cfg);
  ts.mode = mode_of(cfg, ts.h);
  ts.t0 = cfg.time;
  ts.t1 = *cfg.transport_to;
  if (cfg.tol) {
    ts.integrator.atol = ts.integrator.rtol = *cfg.tol;
  }
  const SpaceCurve c = load_space_curve(cfg.from_curve);
  const TransportedCurve tc = transport_curve(ts, c, cfg.samples);
  SpaceFieldSpec f;
  f.h = ts.h;
  f.mode = ts.mode;
  f.kind = polarity_of(cfg) == Polarity::e_type ? SpaceFieldSpec::Kind::electric
                                                 : SpaceFieldSpec::Kind::magnetic;
  f.t = ts.t1;
  IntegratorOptions io;
  io.atol = io.rtol = 1e-12;
  o.report["t0"] = ts.t0;
  o.report["t1"] = ts.t1;
  o.report["tangency_defect"] = tangency_at_time(f, tc.curve, ts.t1);
  o.report["closure_defect"] = field_line_closure_defect(f, tc.curve, io);
  o.report["max_speed_defect"] = tc.max_speed_defect;
  if (!cfg.link_with.empty()) {
    const LinkingResult lk = linking_number(tc.curve, load_space_curve(cfg.link_with));
    o.report["linking"] = {{"value", lk.value}, {"raw", lk.raw}};
  }
  o.csv = curve_csv(tc.curve);
  return o;
}

Outcome run_trace(const RunConfig& cfg) {
  if (cfg.field == "legendrian" || cfg.field == "torus" || cfg.field == "seifert") {
    if (cfg.transport_to) {
      throw ConfigError("--transport-to applies to --field poynting");
    }
    return trace_on_sphere(cfg);
  }
  if (cfg.field == "electric" || cfg.field == "magnetic") {
    return trace_in_space(cfg);
  }
  if (cfg.field == "poynting") {
    return trace_poynting(cfg);
  }
  throw ConfigError("unknown field '" + cfg.field + "'");
}

// ------------------------------------------------------------ rotation / link

/// Legendrian loop of rotation number k on a Clifford-type torus.
SphereCurve synthetic_loop(int k, int samples) {
  const int w = k >= 0 ? k + 1 : 1;
  const int v = k >= 0 ? -1 : k - 1;
  const double a = std::sqrt(-static_cast<double>(v) / static_cast<double>(w - v));
  return torus_curve(a, w, v, samples);
}

/// Tangents of a closed S^3 polygon by periodic fourth-order differences,
/// with the Hopf component removed once it is below 1e-3 of the length.
void sphere_tangents(SphereCurve& c) {
  const int m = static_cast<int>(c.size());
  if (m < 5) {
    throw ConfigError("curve needs at least 5 samples");
  }
  auto P = [&](int i) -> const Vec4& { return c.points[static_cast<std::size_t>(((i % m) + m) % m)]; };
  c.tangents.assign(c.points.size(), Vec4::Zero());
  for (int i = 0; i < m; ++i) {
    Vec4 T = (P(i - 2) - 8.0 * P(i - 1) + 8.0 * P(i + 1) - P(i + 2)) / 12.0;
    const Vec4 x = P(i).normalized();
    T -= T.dot(x) * x;
    const Vec4 v4 = hopf_v4(x);
    if (std::abs(T.dot(v4)) > 1e-3 * T.norm()) {
      throw RunFailure("curve is not Legendrian");
    }
    T -= T.dot(v4) * v4;
    c.tangents[static_cast<std::size_t>(i)] = T;
  }
}

Outcome run_rotation(const RunConfig& cfg) {
  Outcome o;
  SphereCurve c;
  std::optional<int> expected;
  if (!cfg.curve.empty()) {
    c = load_sphere_curve(cfg.curve);
    sphere_tangents(c);
    o.report["input"] = cfg.curve;
  } else if (cfg.preset == "winding") {
    c = synthetic_loop(cfg.winding, cfg.samples);
    expected = cfg.winding;
    o.report["input"] = "winding";
  } else if (cfg.preset == "tt-unknot") {
    c = torus_curve(1.0 / std::sqrt(2.0), 1, -1, cfg.samples);
    expected = 0;
    o.report["input"] = "tt-unknot";
  } else if (cfg.preset == "tt") {
    if (cfg.p < 1 || cfg.q < 1) {
      throw ConfigError("p and q must be positive");
    }
    c = tt_torus_curve(cfg.p, cfg.q, cfg.samples);
    o.report["input"] = "tt";
  } else {
    throw ConfigError("rotation needs --curve or --preset winding|tt-unknot|tt");
  }
  const int r = rotation_number(c);
  o.report["rotation_number"] = r;
  if (expected) {
    o.report["expected"] = *expected;
    o.pass = r == *expected;
  }
  o.csv = curve_csv(c);
  return o;
}

SpaceCurve circle(const Vec3& centre, const Vec3& e1, const Vec3& e2, int n) {
  SpaceCurve c;
  c.closed = true;
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * kPi * k / n;
    c.params.push_back(t);
    c.points.push_back(centre + std::cos(t) * e1 + std::sin(t) * e2);
  }
  return c;
}

SpaceCurve hopf_fiber(Complex z1, Complex z2, int n) {
  SphereCurve s;
  s.closed = true;
  for (int k = 0; k < n; ++k) {
    const Complex e = std::polar(1.0, 2.0 * kPi * k / n);
    s.params.push_back(2.0 * kPi * k / n);
    s.points.push_back(S3Point(e * z1, e * z2).coords());
  }
  return project_curve(s);
}

Outcome run_link(const RunConfig& cfg) {
  Outcome o;
  SpaceCurve a;
  SpaceCurve b;
  std::optional<int> expected_abs;
  const int n = cfg.samples;
  if (!cfg.curve_a.empty() || !cfg.curve_b.empty()) {
    a = load_space_curve(cfg.curve_a);
    b = load_space_curve(cfg.curve_b);
  } else if (cfg.preset == "hopf-pair") {
    a = circle(Vec3::Zero(), Vec3::UnitX(), Vec3::UnitY(), n);
    b = circle(Vec3::UnitX(), Vec3::UnitX(), Vec3::UnitZ(), n);
    expected_abs = 1;
  } else if (cfg.preset == "hopf-fibers") {
    const double r = 1.0 / std::sqrt(2.0);
    a = hopf_fiber(Complex(0.0, 0.0), Complex(1.0, 0.0), n);
    b = hopf_fiber(Complex(r, 0.0), Complex(0.0, r), n);
    expected_abs = 1;
  } else if (cfg.preset == "split-pair") {
    a = circle(Vec3::Zero(), Vec3::UnitX(), Vec3::UnitY(), n);
    b = circle(Vec3(5.0, 0.0, 0.0), Vec3::UnitX(), Vec3::UnitZ(), n);
    expected_abs = 0;
  } else {
    throw ConfigError("link needs --curve-a/--curve-b or --preset hopf-pair|hopf-fibers|split-pair");
  }
  const LinkingResult lk = linking_number(a, b);
  o.report["linking_number"] = lk.value;
  o.report["raw"] = lk.raw;
  if (expected_abs) {
    o.report["expected_abs"] = *expected_abs;
    o.pass = std::abs(lk.value) == *expected_abs;
  }
  CsvTable csv({"curve", "x", "y", "z"});
  for (const Vec3& p : a.points) csv.row({0.0, p[0], p[1], p[2]});
  for (const Vec3& p : b.points) csv.row({1.0, p[0], p[1], p[2]});
  o.csv = csv.str();
  return o;
}

// ------------------------------------------------------------ floquet

Outcome run_monodromy(const RunConfig& cfg) {
  Outcome o;
  const double tol = tol_or(cfg, cfg.orbit.empty() ? 1e-9 : 1e-6);
  MonodromyReport r;
  if (!cfg.orbit.empty()) {
    SphereFieldSpec f;
    S3Point start(Vec4(1, 0, 0, 0));
    double tau_max = 0.0;
    if (cfg.orbit == "hopf" || cfg.orbit == "hopf2") {
      const double scale = cfg.orbit == "hopf" ? 1.0 : 2.0;
      f = SphereFieldSpec::from_legendrian({Generator::constant(scale), Polarity::b_type});
      tau_max = 2.0 * kPi / scale + 1.0;
    } else if (cfg.orbit == "torus") {
      const double a = cfg.start_a ? *cfg.start_a : 0.4;
      f = SphereFieldSpec::torus();
      start = torus_start(a);
      tau_max = 2.0 * kPi * static_cast<double>(rational_torus(a).second) + 1.0;
    } else {
      throw ConfigError("orbit must be hopf, hopf2 or torus");
    }
    const SphereCurve c = trace_sphere(f, start, tau_max, trace_options(cfg));
    const auto period = detect_closure(c, 1e-8);
    if (!period) {
      throw RunFailure("orbit did not close");
    }
    r = orbit_monodromy(f, closed_orbit(c, *period, cfg.samples), *period);
    const double gap = std::max(std::abs(r.multipliers[0] - 1.0), std::abs(r.multipliers[1] - 1.0));
    o.report["multiplier_gap"] = {{"value", gap}, {"tol", tol}, {"pass", gap <= tol}};
    o.pass = gap <= tol;
    o.report["orbit"] = cfg.orbit;
  } else {
    NveSpec spec;
    if (cfg.omega) {
      spec = NveSpec::from_omega(*cfg.omega);
    } else if (cfg.g0) {
      spec.g0 = *cfg.g0;
    } else {
      throw ConfigError("monodromy needs --omega, --g0 or --orbit");
    }
    spec.cos_coeffs = cfg.cos_coeffs;
    spec.sin_coeffs = cfg.sin_coeffs;
    spec.period = cfg.period;
    try {
      spec.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    r = monodromy(spec);
    const double det_gap = std::abs(r.M.determinant() - 1.0);
    o.report["det_gap"] = {{"value", det_gap}, {"tol", 1e-9}, {"pass", det_gap <= 1e-9}};
    o.pass = det_gap <= 1e-9;
    const bool closed_form = cfg.omega && *cfg.omega != 0.0 && cfg.period == 1.0 &&
                             cfg.cos_coeffs.empty() && cfg.sin_coeffs.empty();
    if (closed_form) {
      const double gap = (r.M - analytic_monodromy(*cfg.omega)).cwiseAbs().maxCoeff();
      o.report["analytic_gap"] = {{"value", gap}, {"tol", tol}, {"pass", gap <= tol}};
      o.pass = o.pass && gap <= tol;
    }
    if (r.omega) {
      r.diophantine = diophantine_check(*r.omega / (2.0 * kPi), cfg.gamma, cfg.exponent, cfg.qmax);
    }
  }
  o.report["monodromy"] = to_json(r);
  CsvTable csv({"m00", "m01", "m10", "m11"});
  csv.row({r.M(0, 0), r.M(0, 1), r.M(1, 0), r.M(1, 1)});
  o.csv = csv.str();
  return o;
}

Outcome run_diophantine(const RunConfig& cfg) {
  Outcome o;
  double w = 0.0;
  std::optional<bool> expected;
  if (cfg.w) {
    w = *cfg.w;
  } else if (cfg.preset == "golden") {
    w = (std::sqrt(5.0) - 1.0) / 2.0;
    expected = true;
  } else if (cfg.preset == "silver") {
    w = std::sqrt(2.0) - 1.0;
    expected = true;
  } else if (cfg.preset == "three-sevenths") {
    w = 3.0 / 7.0;
    expected = false;
  } else {
    throw ConfigError("diophantine needs --w or --preset golden|silver|three-sevenths");
  }
  DiophantineVerdict v;
  try {
    v = diophantine_check(w, cfg.gamma, cfg.exponent, cfg.qmax);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  o.report["w"] = w;
  o.report["gamma"] = cfg.gamma;
  o.report["exponent"] = cfg.exponent;
  o.report["verdict"] = to_json(v);
  if (expected) {
    o.report["expected_pass"] = *expected;
    o.pass = v.pass == *expected && (v.pass || v.fail_q == 7);
  }
  CsvTable csv({"w", "pass", "worst_p", "worst_q", "worst_ratio"});
  csv.row({w, v.pass ? 1.0 : 0.0, static_cast<double>(v.worst_p), static_cast<double>(v.worst_q),
           v.worst_ratio});
  o.csv = csv.str();
  return o;
}

// ------------------------------------------------------------ transport-check

Outcome run_transport_check(const RunConfig& cfg) {
  Outcome o;
  const double tol_tangency = tol_or(cfg, 1e-3);
  const double tol_closure = 1e-6;
  const int n = cfg.samples;
  TraceOptions topt = trace_options(cfg);
  IntegratorOptions io;
  io.atol = io.rtol = 1e-12;
  TransportSpec ts;
  ts.t1 = cfg.t1;
  const std::string preset = cfg.preset.empty() ? "hopfion" : cfg.preset;

  SpaceCurve a;
  SpaceCurve b;
  SpaceFieldSpec f;
  TransportSpec tb = ts;
  if (preset == "hopfion") {
    ts.h = Generator::constant(1.0);
    a = initial_field_line(ts.h, Polarity::e_type, S3Point(Vec4(0, 1, 0, 0)), 7.0, 2 * n, topt);
    b = initial_field_line(ts.h, Polarity::e_type, S3Point(Vec4(0, 0, 0.6, 0.8)), 7.0, 2 * n, topt);
    f.kind = SpaceFieldSpec::Kind::electric;
    tb.h = ts.h;
  } else if (preset == "torus-knot") {
    // The (2,3) knot is an electric line of 6i z1 z2^2.  It is paired with
    // the image of the circle z1 = 0, where that generator vanishes, so the
    // circle is moved by the h = 1 Poynting field (P does not depend on h).
    ts.h = parse_generator("6i*z1*z2^2");
    a = project_curve(tt_torus_curve(2, 3, 2 * n));
    SphereCurve core;
    core.closed = true;
    for (int k = 0; k < n; ++k) {
      core.points.push_back(S3Point(Complex(0.0, 0.0), std::polar(1.0, 2.0 * kPi * k / n)).coords());
    }
    b = project_curve(core);
    f.kind = SpaceFieldSpec::Kind::electric;
    tb.h = Generator::constant(1.0);
  } else {
    throw ConfigError("transport-check preset must be hopfion or torus-knot");
  }
  f.h = ts.h;
  const LinkingResult lk0 = linking_number(a, b);
  const TransportedCurve at = transport_curve(ts, a, n);
  const TransportedCurve bt = transport_curve(tb, b, n);
  const LinkingResult lk1 = linking_number(at.curve, bt.curve);
  f.t = ts.t1;
  const double tangency = tangency_at_time(f, at.curve, ts.t1);
  const double closure = field_line_closure_defect(f, at.curve, io);
  double tangency_b = 0.0;
  double closure_b = 0.0;
  if (preset == "hopfion") {
    tangency_b = tangency_at_time(f, bt.curve, ts.t1);
    closure_b = field_line_closure_defect(f, bt.curve, io);
  }
  const double tan_max = std::max(tangency, tangency_b);
  const double clo_max = std::max(closure, closure_b);
  o.report["preset"] = preset;
  o.report["t1"] = ts.t1;
  o.report["tangency_defect"] = {{"value", tan_max}, {"tol", tol_tangency},
                                 {"pass", tan_max <= tol_tangency}};
  o.report["closure_defect"] = {{"value", clo_max}, {"tol", tol_closure},
                                {"pass", clo_max <= tol_closure}};
  o.report["linking"] = {{"before", lk0.value}, {"after", lk1.value}, {"raw_after", lk1.raw},
                         {"pass", lk0.value == lk1.value && lk0.value != 0}};
  o.report["max_speed_defect"] = std::max(at.max_speed_defect, bt.max_speed_defect);
  o.pass = tan_max <= tol_tangency && clo_max <= tol_closure && lk0.value == lk1.value &&
           lk0.value != 0;
  CsvTable csv({"curve", "x", "y", "z"});
  for (const Vec3& p : at.curve.points) csv.row({0.0, p[0], p[1], p[2]});
  for (const Vec3& p : bt.curve.points) csv.row({1.0, p[0], p[1], p[2]});
  o.csv = csv.str();
  return o;
}

Outcome dispatch_one(const RunConfig& cfg);

// Runs each sub-configuration and folds the reports together.
Outcome aggregate(const std::vector<RunConfig>& subs) {
  Outcome o;
  CsvTable t({"run", "pass"});
  json runs = json::array();
  for (std::size_t i = 0; i < subs.size(); ++i) {
    Outcome s = dispatch_one(subs[i]);
    json r = s.report;
    r["pass"] = s.pass;
    r["config"] = to_json(subs[i]);
    r["config"].erase("out");
    runs.push_back(std::move(r));
    t.row({static_cast<double>(i), s.pass ? 1.0 : 0.0});
    o.pass = o.pass && s.pass;
  }
  o.report["runs"] = std::move(runs);
  o.csv = t.str();
  return o;
}

std::vector<RunConfig> expand(const RunConfig& cfg) {
  std::vector<RunConfig> subs;
  auto with = [&](auto edit) {
    RunConfig c = cfg;
    edit(c);
    subs.push_back(c);
  };
  const bool verify = cfg.command == "verify";
  const std::string suite = cfg.command == "seifert" ? "seifert" : cfg.suite;
  if (verify && cfg.generator == "battery" &&
      (suite == "null" || suite == "maxwell" || suite == "divergence")) {
    const char* hol[] = {"1", "z1", "6*z1*z2^2", "exp(z1*z2)"};
    for (const char* h : hol) with([&](RunConfig& c) { c.generator = h; });
    with([&](RunConfig& c) { c.generator = suite == "divergence" ? "zb1" : "zb1*zb2"; });
    return subs;
  }
  if (cfg.preset != "all") return subs;
  if (suite == "seifert" && (verify || cfg.command == "seifert")) {
    for (auto [p, q] : {std::pair{1, 1}, std::pair{2, 3}, std::pair{3, 5}}) {
      with([&](RunConfig& c) { c.p = p; c.q = q; });
    }
  } else if (verify && suite == "tt-link") {
    for (auto [p, q] : {std::pair{1, 1}, std::pair{2, 3}}) {
      with([&](RunConfig& c) { c.p = p; c.q = q; });
    }
  } else if (cfg.command == "rotation") {
    for (int k = -2; k <= 2; ++k) {
      with([&](RunConfig& c) { c.preset = "winding"; c.winding = k; });
    }
    with([](RunConfig& c) { c.preset = "tt-unknot"; });
  } else if (cfg.command == "link") {
    for (const char* s : {"hopf-pair", "hopf-fibers", "split-pair"}) {
      with([&](RunConfig& c) { c.preset = s; });
    }
  } else if (cfg.command == "monodromy") {
    for (double w : {0.5, 1.0, 2.0, 3.0, 5.0}) {
      with([&](RunConfig& c) { c.preset.clear(); c.omega = w; });
    }
    for (const char* s : {"hopf", "hopf2", "torus"}) {
      with([&](RunConfig& c) { c.preset.clear(); c.orbit = s; });
    }
  } else if (cfg.command == "diophantine") {
    for (const char* s : {"golden", "silver", "three-sevenths"}) {
      with([&](RunConfig& c) { c.preset = s; });
    }
  } else if (cfg.command == "transport-check") {
    for (const char* s : {"hopfion", "torus-knot"}) {
      with([&](RunConfig& c) { c.preset = s; });
    }
  } else {
    throw ConfigError("preset 'all' is not available here");
  }
  return subs;
}

Outcome dispatch(const RunConfig& cfg) {
  if (cfg.samples < 8) {
    throw ConfigError("samples must be at least 8");
  }
  const std::vector<RunConfig> subs = expand(cfg);
  if (!subs.empty()) return aggregate(subs);
  return dispatch_one(cfg);
}

Outcome dispatch_one(const RunConfig& cfg) {
  if (cfg.samples < 8) {
    throw ConfigError("samples must be at least 8");
  }
  if (cfg.command == "verify") return run_verify(cfg);
  if (cfg.command == "trace") return run_trace(cfg);
  if (cfg.command == "rotation") return run_rotation(cfg);
  if (cfg.command == "link") return run_link(cfg);
  if (cfg.command == "monodromy") return run_monodromy(cfg);
  if (cfg.command == "diophantine") return run_diophantine(cfg);
  if (cfg.command == "seifert") {
    RunConfig c = cfg;
    c.suite = "seifert";
    return run_verify(c);
  }
  if (cfg.command == "transport-check") return run_transport_check(cfg);
  throw ConfigError("unknown command '" + cfg.command + "'");
}

} // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Outcome o;
  try {
    o = dispatch(cfg);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return kExitFailure;
  }
  o.report["command"] = cfg.command;
  o.report["pass"] = o.pass;
  o.report["config"] = to_json(cfg);
  o.report["config"].erase("out");
  const std::string text = o.report.dump(2) + "\n";
  out << text;
  if (!cfg.out.empty()) {
    std::ofstream csv(cfg.out, std::ios::binary);
    std::ofstream side(cfg.out + ".json", std::ios::binary);
    if (!csv || !side) {
      err << "failure: cannot write " << cfg.out << '\n';
      return kExitFailure;
    }
    csv << o.csv;
    side << text;
  }
  return o.pass ? kExitOk : kExitFailure;
}

int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::optional<RunConfig> cfg;
  try {
    std::string help;
    cfg = parse_arguments(args, help);
    if (!cfg) {
      out << help;
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  return run(*cfg, out, err);
}

} // namespace nullfield::cli
