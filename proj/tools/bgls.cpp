// Command-line front end: norms and BGLS ratios of the radial test
// functions, sharpness scans near the critical exponent, upper-bound
// verification, the nu(q) transform, and the quadrature-vs-closed-form
// oracle sweep.  Outputs CSV or JSON (plus optional SVG plots) and is
// byte-deterministic across runs and thread counts.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bgls/bgls.hpp"
#include "svg.hpp"

using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitDivergence = 2;
constexpr int kExitInternal = 3;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void emit(const std::string& text, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output_path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file: " + output_path);
  out << text;
}

struct CommonOpts {
  int d = 2;
  double alpha = 0.0;
  double Delta = 2.0;
  std::string domain = "ball";
  std::string delta_model = "origin";
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  int max_depth = 60;
  int threads = 1;
  std::string format = "csv";
  std::string output;
  std::string plot;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_domain = true) {
  cmd->add_option("--d", o.d, "space dimension (>= 2)")->capture_default_str();
  cmd->add_option("--alpha", o.alpha, "weight exponent alpha (> -1)")->capture_default_str();
  if (with_domain) {
    cmd->add_option("--domain", o.domain, "domain: ball | exterior")
        ->check(CLI::IsMember({"ball", "exterior"}))
        ->capture_default_str();
    cmd->add_option("--delta-model", o.delta_model,
                    "delta on the ball: origin | boundary (exterior always uses |x|)")
        ->check(CLI::IsMember({"origin", "boundary"}))
        ->capture_default_str();
  }
  cmd->add_option("--rel-tol", o.rel_tol, "quadrature relative tolerance")
      ->capture_default_str();
  cmd->add_option("--abs-tol", o.abs_tol, "quadrature absolute tolerance")
      ->capture_default_str();
  cmd->add_option("--max-depth", o.max_depth, "quadrature bisection depth")
      ->capture_default_str();
  cmd->add_option("--threads", o.threads, "worker threads for scan rows")
      ->capture_default_str();
  cmd->add_option("--format", o.format, "output format: csv | json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--output", o.output, "write the table/report to this file");
  cmd->add_option("--plot", o.plot, "write an SVG line plot to this file");
}

bgls::QuadratureConfig quad_of(const CommonOpts& o) {
  bgls::QuadratureConfig quad;
  quad.rel_tol = o.rel_tol;
  quad.abs_tol = o.abs_tol;
  quad.max_depth = o.max_depth;
  quad.validate();
  return quad;
}

bgls::DomainSpec domain_of(const CommonOpts& o) {
  if (o.domain == "exterior") return bgls::DomainSpec::exterior_unit_ball(o.d);
  return bgls::DomainSpec::unit_ball(o.d, o.delta_model == "boundary"
                                              ? bgls::DeltaModel::distance_to_boundary
                                              : bgls::DeltaModel::distance_to_origin);
}

ordered_json quad_json(const bgls::QuadratureConfig& q) {
  return ordered_json{{"rel_tol", q.rel_tol}, {"abs_tol", q.abs_tol},
                      {"max_depth", q.max_depth}};
}

ordered_json common_json(const CommonOpts& o) {
  return ordered_json{{"d", o.d},
                      {"alpha", o.alpha},
                      {"domain", o.domain},
                      {"delta_model", o.delta_model},
                      {"quad", quad_json(quad_of(o))},
                      {"threads", o.threads},
                      {"format", o.format},
                      {"output", o.output},
                      {"plot", o.plot}};
}

struct PsiOpts {
  double a = 1.0;
  double b = 0.0;  // 0: default to the command's natural upper endpoint
  double beta = 0.0;
  double gamma = 0.0;
  bool any = false;
};

void add_psi(CLI::App* cmd, PsiOpts& o) {
  cmd->add_option_function<double>(
         "--psi-a", [&o](double v) { o.a = v; o.any = true; },
         "psi interval lower endpoint a (>= 1)");
  cmd->add_option_function<double>(
         "--psi-b", [&o](double v) { o.b = v; o.any = true; },
         "psi interval upper endpoint b (finite; ignored when psi-gamma < 0)");
  cmd->add_option_function<double>(
         "--psi-beta", [&o](double v) { o.beta = v; o.any = true; },
         "psi exponent beta at the a-endpoint");
  cmd->add_option_function<double>(
         "--psi-gamma", [&o](double v) { o.gamma = v; o.any = true; },
         "psi exponent gamma at the b-endpoint (< 0 selects the tail family)");
}

// psi == 1 on (1, inf); the do-nothing default generating function.
bgls::PsiFunction unit_psi() {
  return bgls::make_custom_psi(
      bgls::ExponentInterval(1.0, std::numeric_limits<double>::infinity()),
      [](double) { return 1.0; });
}

bgls::PsiFunction psi_of(const PsiOpts& o, double default_b) {
  if (!o.any) return unit_psi();
  if (o.gamma < 0.0) return bgls::make_tail_psi(o.a, o.beta, o.gamma);
  const double b = o.b > 0.0 ? o.b : default_b;
  return bgls::make_power_psi(o.a, b, o.beta, o.gamma);
}

ordered_json psi_json(const PsiOpts& o, double default_b) {
  if (!o.any) return ordered_json{{"family", "one"}};
  if (o.gamma < 0.0) {
    return ordered_json{{"family", "tail"}, {"a", o.a}, {"beta", o.beta},
                        {"gamma", o.gamma}};
  }
  return ordered_json{{"family", "power"},
                      {"a", o.a},
                      {"b", o.b > 0.0 ? o.b : default_b},
                      {"beta", o.beta},
                      {"gamma", o.gamma}};
}

// ---------------------------------------------------------------------------
// norm
// ---------------------------------------------------------------------------

struct NormOpts {
  CommonOpts common;
  std::string f = "const";
  double const_value = 1.0;
  bool core_only = false;
  bool do_center = false;
  double weight_exp = 0.0;
  bool gradient = false;
  double p = 0.0;  // single exponent; 0 means "use the grid"
  double p_min = 0.0, p_max = 0.0;
  int p_count = 0;
  std::string p_spacing = "linear";
  PsiOpts psi;
};

bgls::RadialProfile build_profile(const std::string& f, double const_value, double Delta,
                                  bool core_only, const bgls::DomainSpec& domain) {
  if (f == "const") return bgls::make_constant(const_value, domain);
  if (f == "u-delta") {
    if (!domain.bounded()) {
      throw std::invalid_argument("u-delta lives on the unit ball (--domain ball)");
    }
    return core_only ? bgls::make_u_delta_core(Delta) : bgls::make_u_delta(Delta);
  }
  if (f == "v-delta") {
    if (domain.bounded()) {
      throw std::invalid_argument("v-delta lives on the exterior domain (--domain exterior)");
    }
    return core_only ? bgls::make_v_delta_core(Delta) : bgls::make_v_delta(Delta);
  }
  throw std::invalid_argument("unknown test function: " + f);
}

std::vector<double> norm_p_grid(const NormOpts& o, double p0) {
  if (o.p > 0.0) return {o.p};
  if (!(o.p_min > 0.0) || !(o.p_max > o.p_min) || o.p_count < 2) {
    throw std::invalid_argument(
        "need either --p or a grid --p-min/--p-max/--p-count (count >= 2)");
  }
  std::vector<double> ps(o.p_count);
  if (o.p_spacing == "linear") {
    for (int i = 0; i < o.p_count; ++i) {
      ps[i] = o.p_min + (o.p_max - o.p_min) * i / (o.p_count - 1);
    }
    return ps;
  }
  // geometric-to-p0: |p - p0| log-spaced between the two endpoints, which
  // must lie on the same side of p0.
  const double e_min = o.p_min - p0;
  const double e_max = o.p_max - p0;
  if (e_min * e_max <= 0.0) {
    throw std::invalid_argument("geometric-to-p0 spacing needs p-range on one side of p0");
  }
  const double sign = e_min > 0.0 ? 1.0 : -1.0;
  const double lo = std::fabs(e_min), hi = std::fabs(e_max);
  for (int i = 0; i < o.p_count; ++i) {
    const double t = static_cast<double>(i) / (o.p_count - 1);
    ps[i] = p0 + sign * lo * std::pow(hi / lo, t);
  }
  std::sort(ps.begin(), ps.end());
  return ps;
}

int run_norm(const NormOpts& o) {
  const bgls::QuadratureConfig quad = quad_of(o.common);
  const bgls::DomainSpec domain = domain_of(o.common);
  const bgls::PoincareParams params(o.common.alpha, o.common.d);
  bgls::RadialProfile profile =
      build_profile(o.f, o.const_value, o.common.Delta, o.core_only, domain);
  if (o.do_center) profile = bgls::center(profile, domain, quad);
  const bgls::PsiFunction psi = psi_of(o.psi, o.common.d);
  const std::vector<double> ps = norm_p_grid(o, params.p0);
  for (double p : ps) {
    if (p < psi.interval().a - 1e-12 || p > psi.interval().b + 1e-12) {
      throw std::invalid_argument("exponent p = " + fmt(p) + " outside the psi interval");
    }
  }

  struct Row {
    double p, lp, psi, ratio;
    bool converged;
  };
  std::vector<Row> rows;
  bool any_diverged = false;
  for (double p : ps) {
    const bgls::NormResult n = bgls::lp_norm_weighted(
        profile, domain, p, o.weight_exp, quad,
        o.gradient ? bgls::Field::gradient : bgls::Field::value);
    const double psi_v = psi(p);
    const double ratio = std::isinf(psi_v) ? 0.0 : n.value / psi_v;
    rows.push_back({p, n.value, psi_v, ratio, n.converged});
    any_diverged = any_diverged || !n.converged;
  }
  double best = -1.0, best_p = ps.front();
  bool best_inf = false;
  for (const auto& row : rows) {
    if (!row.converged) continue;
    if (row.ratio > best) {
      best = row.ratio;
      best_p = row.p;
    }
    best_inf = best_inf || std::isinf(row.ratio);
  }

  ordered_json config = common_json(o.common);
  config["f"] = o.f;
  config["const_value"] = o.const_value;
  config["Delta"] = o.common.Delta;
  config["core_only"] = o.core_only;
  config["center"] = o.do_center;
  config["weight_exp"] = o.weight_exp;
  config["gradient"] = o.gradient;
  if (o.p > 0.0) {
    config["p"] = o.p;
  } else {
    config["p_grid"] = ordered_json{{"min", o.p_min},
                                    {"max", o.p_max},
                                    {"count", o.p_count},
                                    {"spacing", o.p_spacing}};
  }
  config["psi"] = psi_json(o.psi, o.common.d);

  if (o.common.format == "json") {
    ordered_json out{{"command", "norm"}, {"config", config}};
    ordered_json jrows = ordered_json::array();
    for (const auto& row : rows) {
      jrows.push_back(ordered_json{{"p", row.p},
                                   {"lp_norm", row.lp},
                                   {"psi", row.psi},
                                   {"ratio", row.ratio},
                                   {"converged", row.converged}});
    }
    out["rows"] = jrows;
    out["bgls"] = ordered_json{{"value", best},
                               {"is_infinite", best_inf},
                               {"argmax_p", best_p},
                               {"grid_size", static_cast<int>(rows.size())}};
    emit(out.dump(2) + "\n", o.common.output);
  } else {
    std::string csv = "p,lp_norm,psi,ratio\n";
    for (const auto& row : rows) {
      csv += fmt(row.p) + "," + fmt(row.lp) + "," + fmt(row.psi) + "," + fmt(row.ratio) +
             "\n";
    }
    csv += "bgls_norm," + fmt(best) + "\n";
    csv += "argmax_p," + fmt(best_p) + "\n";
    emit(csv, o.common.output);
  }
  if (!o.common.plot.empty()) {
    bgls_cli::SvgSeries series;
    for (const auto& row : rows) {
      if (!row.converged) continue;
      series.x.push_back(row.p);
      series.y.push_back(row.lp);
    }
    bgls_cli::write_svg_plot(o.common.plot, "L_p norm against p", "p", "|f|_p", {series},
                             false, false);
  }
  return any_diverged ? kExitDivergence : kExitOk;
}

// ---------------------------------------------------------------------------
// sharpness
// ---------------------------------------------------------------------------

struct SharpnessOpts {
  CommonOpts common;
  std::string scan_case = "bounded-below";
  double eps_min = 1e-3, eps_max = 0.3;
  int eps_count = 12;
  double p_min = 10.0, p_max = 200.0;
  int p_count = 12;
  std::string report = "v-slope";
};

int run_sharpness(const SharpnessOpts& o) {
  const bgls::QuadratureConfig quad = quad_of(o.common);
  const bgls::PoincareParams params(o.common.alpha, o.common.d);
  bgls::SharpnessCase scan_case;
  if (o.scan_case == "bounded-below") {
    scan_case = bgls::SharpnessCase::bounded_below;
  } else if (o.scan_case == "unbounded-above") {
    scan_case = bgls::SharpnessCase::unbounded_above;
  } else {
    scan_case = bgls::SharpnessCase::unbounded_infinity;
  }

  std::vector<double> grid;
  if (scan_case == bgls::SharpnessCase::unbounded_infinity) {
    if (!(o.p_min > params.p0) || !(o.p_max > o.p_min) || o.p_count < 2) {
      throw std::invalid_argument("infinity scan needs p0 < p-min < p-max, count >= 2");
    }
    for (int i = 0; i < o.p_count; ++i) {
      const double t = static_cast<double>(i) / (o.p_count - 1);
      grid.push_back(o.p_min * std::pow(o.p_max / o.p_min, t));
    }
  } else {
    if (!(o.eps_min > 0.0) || !(o.eps_max > o.eps_min) || o.eps_count < 2) {
      throw std::invalid_argument("scan needs 0 < eps-min < eps-max, count >= 2");
    }
    for (int i = 0; i < o.eps_count; ++i) {
      const double t = static_cast<double>(i) / (o.eps_count - 1);
      grid.push_back(o.eps_max * std::pow(o.eps_min / o.eps_max, t));
    }
  }

  const bgls::ScanResult scan =
      bgls::sharpness_scan(scan_case, o.common.Delta, params, quad, grid, o.common.threads);

  int converged_rows = 0;
  for (const auto& row : scan.rows) converged_rows += row.converged ? 1 : 0;
  if (converged_rows < 2) {
    throw std::runtime_error("sharpness scan: fewer than two rows converged");
  }
  const bgls::LineFit selected =
      o.report == "numerator-slope"
          ? bgls::fit_scan_series(scan, bgls::ScanSeries::numerator)
          : (o.report == "denominator-slope"
                 ? bgls::fit_scan_series(scan, bgls::ScanSeries::denominator)
                 : scan.fit);

  ordered_json config = common_json(o.common);
  config["case"] = o.scan_case;
  config["Delta"] = o.common.Delta;
  if (scan_case == bgls::SharpnessCase::unbounded_infinity) {
    config["p_grid"] =
        ordered_json{{"min", o.p_min}, {"max", o.p_max}, {"count", o.p_count}};
  } else {
    config["eps_grid"] =
        ordered_json{{"min", o.eps_min}, {"max", o.eps_max}, {"count", o.eps_count}};
  }
  config["report"] = o.report;

  if (o.common.format == "json") {
    ordered_json out{{"command", "sharpness"}, {"config", config}};
    ordered_json jrows = ordered_json::array();
    for (const auto& row : scan.rows) {
      jrows.push_back(ordered_json{{"p", row.p},
                                   {"eps", row.eps},
                                   {"num_norm", row.numerator_norm},
                                   {"den_norm", row.denominator_norm},
                                   {"V", row.ratio},
                                   {"converged", row.converged}});
    }
    out["rows"] = jrows;
    const auto fit_json = [](const bgls::LineFit& f) {
      return ordered_json{{"slope", f.slope},
                          {"intercept", f.intercept},
                          {"residual", f.residual},
                          {"points", f.points}};
    };
    out["fits"] = ordered_json{
        {"v", fit_json(scan.fit)},
        {"numerator", fit_json(bgls::fit_scan_series(scan, bgls::ScanSeries::numerator))},
        {"denominator",
         fit_json(bgls::fit_scan_series(scan, bgls::ScanSeries::denominator))}};
    out["report"] = ordered_json{{"series", o.report},
                                 {"slope", selected.slope},
                                 {"residual", selected.residual}};
    out["dropped"] = scan.dropped;
    out["meta"] = scan.meta;
    emit(out.dump(2) + "\n", o.common.output);
  } else {
    std::string csv = "p,eps,num_norm,den_norm,V\n";
    for (const auto& row : scan.rows) {
      if (!row.converged) continue;
      csv += fmt(row.p) + "," + fmt(row.eps) + "," + fmt(row.numerator_norm) + "," +
             fmt(row.denominator_norm) + "," + fmt(row.ratio) + "\n";
    }
    csv += "slope," + fmt(selected.slope) + "\n";
    csv += "residual," + fmt(selected.residual) + "\n";
    emit(csv, o.common.output);
  }
  if (scan.dropped > 0) {
    std::cerr << "sharpness: dropped " << scan.dropped << " divergent rows\n";
  }
  if (!o.common.plot.empty()) {
    bgls_cli::SvgSeries series;
    for (const auto& row : scan.rows) {
      if (!row.converged) continue;
      series.x.push_back(row.eps);
      series.y.push_back(row.ratio);
    }
    const bool infinity = scan_case == bgls::SharpnessCase::unbounded_infinity;
    bgls_cli::write_svg_plot(o.common.plot, "Poincare ratio V",
                             infinity ? "p" : "eps", "V", {series}, true, true);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// theorem1
// ---------------------------------------------------------------------------

struct Theorem1Opts {
  CommonOpts common;
  std::string f = "u-delta";
  double const_value = 1.0;
  int grid_count = 256;
  PsiOpts psi;
};

int run_theorem1(const Theorem1Opts& o) {
  const bgls::QuadratureConfig quad = quad_of(o.common);
  const bgls::DomainSpec domain = domain_of(o.common);
  const bgls::PoincareParams params(o.common.alpha, o.common.d);
  const bgls::RadialProfile profile =
      build_profile(o.f, o.const_value, o.common.Delta, false, domain);
  PsiOpts psi_opts = o.psi;
  if (!psi_opts.any) {
    // default generating function: (p-1)^{-1} (d-p)^{-1} on (1, d)
    psi_opts.any = true;
    psi_opts.a = 1.0;
    psi_opts.b = static_cast<double>(o.common.d);
    psi_opts.beta = 1.0;
    psi_opts.gamma = 1.0;
  }
  const bgls::PsiFunction psi = psi_of(psi_opts, o.common.d);
  bgls::GridSpec grid;
  grid.count = o.grid_count;
  const bgls::Theorem1Report report =
      bgls::theorem1_verify(profile, domain, params, psi, grid, quad);

  ordered_json config = common_json(o.common);
  config["f"] = o.f;
  config["const_value"] = o.const_value;
  config["Delta"] = o.common.Delta;
  config["grid_count"] = o.grid_count;
  config["psi"] = psi_json(psi_opts, o.common.d);

  ordered_json out{{"command", "theorem1"},
                   {"config", config},
                   {"report", ordered_json{{"estimated_c", report.estimated_c},
                                           {"argmax_p", report.argmax_p},
                                           {"grid_stable", report.grid_stable}}}};
  emit(out.dump(2) + "\n", o.common.output);
  return report.grid_stable ? kExitOk : kExitDivergence;
}

// ---------------------------------------------------------------------------
// nu
// ---------------------------------------------------------------------------

struct NuOpts {
  CommonOpts common;
  double q = 0.0;
  double q_min = 0.0, q_max = 0.0;
  int q_count = 0;
  int grid_points = 512;
  PsiOpts psi;
};

int run_nu(const NuOpts& o) {
  const bgls::PsiFunction psi = psi_of(o.psi, o.common.d);
  std::vector<double> qs;
  if (o.q > 0.0) {
    qs.push_back(o.q);
  } else {
    if (!(o.q_min > 0.0) || !(o.q_max > o.q_min) || o.q_count < 2) {
      throw std::invalid_argument("need --q or --q-min/--q-max/--q-count (count >= 2)");
    }
    for (int i = 0; i < o.q_count; ++i) {
      qs.push_back(o.q_min + (o.q_max - o.q_min) * i / (o.q_count - 1));
    }
  }

  ordered_json config = common_json(o.common);
  config["psi"] = psi_json(o.psi, o.common.d);
  config["grid_points"] = o.grid_points;
  if (o.q > 0.0) {
    config["q"] = o.q;
  } else {
    config["q_grid"] =
        ordered_json{{"min", o.q_min}, {"max", o.q_max}, {"count", o.q_count}};
  }

  ordered_json out{{"command", "nu"}, {"config", config}};
  ordered_json jrows = ordered_json::array();
  for (double q : qs) {
    const double nu = bgls::nu_transform(psi, o.common.alpha, q, o.grid_points);
    jrows.push_back(ordered_json{{"q", q}, {"nu", nu}});
  }
  out["rows"] = jrows;
  emit(out.dump(2) + "\n", o.common.output);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// oracle-check
// ---------------------------------------------------------------------------

struct OracleOpts {
  CommonOpts common;
  double s_min = 0.05, s_max = 5.0;
  int s_count = 8;
  double m_min = 0.0, m_max = 12.0;
  int m_count = 6;
  double threshold = 1e-6;
};

int run_oracle_check(const OracleOpts& o) {
  const bgls::QuadratureConfig quad = quad_of(o.common);
  if (!(o.s_min > 0.0) || !(o.s_max > o.s_min) || o.s_count < 2 || o.m_count < 2 ||
      !(o.m_max >= o.m_min) || o.m_min < 0.0) {
    throw std::invalid_argument("oracle-check: bad sweep ranges");
  }
  ordered_json config = common_json(o.common);
  config["s_grid"] = ordered_json{{"min", o.s_min}, {"max", o.s_max}, {"count", o.s_count}};
  config["m_grid"] = ordered_json{{"min", o.m_min}, {"max", o.m_max}, {"count", o.m_count}};
  config["threshold"] = o.threshold;

  ordered_json rows = ordered_json::array();
  double max_rel_err = 0.0;
  bool all_converged = true;
  for (int i = 0; i < o.s_count; ++i) {
    const double ts = static_cast<double>(i) / (o.s_count - 1);
    const double s = o.s_min * std::pow(o.s_max / o.s_min, ts);
    for (int j = 0; j < o.m_count; ++j) {
      const double m = o.m_min + (o.m_max - o.m_min) * j / (o.m_count - 1);
      const bgls::IntegralResult numeric = bgls::integrate_core_integrand(s, m, quad);
      const double closed = bgls::core_integral(s, m);
      const double rel_err = std::fabs(numeric.value - closed) / closed;
      max_rel_err = std::max(max_rel_err, rel_err);
      all_converged = all_converged && numeric.converged;
      rows.push_back(ordered_json{{"s", s},
                                  {"m", m},
                                  {"quadrature", numeric.value},
                                  {"closed_form", closed},
                                  {"rel_err", rel_err}});
    }
  }
  const bool pass = all_converged && max_rel_err <= o.threshold;
  ordered_json out{{"command", "oracle-check"},
                   {"config", config},
                   {"rows", rows},
                   {"max_rel_err", max_rel_err},
                   {"pass", pass}};
  emit(out.dump(2) + "\n", o.common.output);
  return pass ? kExitOk : kExitDivergence;
}

void report_error(const std::string& format, int code, const std::string& message) {
  if (format == "json") {
    ordered_json err{{"error", ordered_json{{"code", code}, {"message", message}}}};
    std::cerr << err.dump(2) << "\n";
  } else {
    std::cerr << "error: " << message << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grand-Lebesgue norms and Poincare-type ratio scans for radial test functions"};
  app.require_subcommand(1);

  NormOpts norm_opts;
  CLI::App* norm_cmd = app.add_subcommand(
      "norm", "weighted L_p norms, psi ratios and the BGLS supremum");
  add_common(norm_cmd, norm_opts.common);
  norm_cmd->add_option("--f", norm_opts.f, "test function: const | u-delta | v-delta")
      ->check(CLI::IsMember({"const", "u-delta", "v-delta"}))
      ->capture_default_str();
  norm_cmd->add_option("--value", norm_opts.const_value, "value of the constant function")
      ->capture_default_str();
  norm_cmd->add_option("--Delta", norm_opts.common.Delta, "log-power exponent (> 1)")
      ->capture_default_str();
  norm_cmd->add_flag("--core-only", norm_opts.core_only, "log-power core without the bridge");
  norm_cmd->add_flag("--center", norm_opts.do_center, "subtract the domain mean first");
  norm_cmd->add_option("--weight-exp", norm_opts.weight_exp,
                       "w in the weight delta^{-w} inside the norm")
      ->capture_default_str();
  norm_cmd->add_flag("--gradient", norm_opts.gradient, "norm of |f'| instead of f");
  norm_cmd->add_option("--p", norm_opts.p, "single Lebesgue exponent");
  norm_cmd->add_option("--p-min", norm_opts.p_min, "grid lower exponent");
  norm_cmd->add_option("--p-max", norm_opts.p_max, "grid upper exponent");
  norm_cmd->add_option("--p-count", norm_opts.p_count, "grid size");
  norm_cmd->add_option("--p-spacing", norm_opts.p_spacing, "linear | geometric-to-p0")
      ->check(CLI::IsMember({"linear", "geometric-to-p0"}))
      ->capture_default_str();
  add_psi(norm_cmd, norm_opts.psi);

  SharpnessOpts sharp_opts;
  CLI::App* sharp_cmd = app.add_subcommand(
      "sharpness", "V(f,p) scan of the extremal family near the critical exponent");
  add_common(sharp_cmd, sharp_opts.common, /*with_domain=*/false);
  sharp_cmd->add_option("--case", sharp_opts.scan_case,
                        "bounded-below | unbounded-above | unbounded-infinity")
      ->check(CLI::IsMember({"bounded-below", "unbounded-above", "unbounded-infinity"}))
      ->capture_default_str();
  sharp_cmd->add_option("--Delta", sharp_opts.common.Delta, "log-power exponent (> 1)")
      ->capture_default_str();
  sharp_cmd->add_option("--eps-min", sharp_opts.eps_min, "smallest |p - p0|")
      ->capture_default_str();
  sharp_cmd->add_option("--eps-max", sharp_opts.eps_max, "largest |p - p0|")
      ->capture_default_str();
  sharp_cmd->add_option("--eps-count", sharp_opts.eps_count, "rows in the eps grid")
      ->capture_default_str();
  sharp_cmd->add_option("--p-min", sharp_opts.p_min, "infinity scan: smallest p")
      ->capture_default_str();
  sharp_cmd->add_option("--p-max", sharp_opts.p_max, "infinity scan: largest p")
      ->capture_default_str();
  sharp_cmd->add_option("--p-count", sharp_opts.p_count, "infinity scan: rows")
      ->capture_default_str();
  sharp_cmd->add_option("--report", sharp_opts.report,
                        "footer fit: v-slope | numerator-slope | denominator-slope")
      ->check(CLI::IsMember({"v-slope", "numerator-slope", "denominator-slope"}))
      ->capture_default_str();

  Theorem1Opts thm_opts;
  CLI::App* thm_cmd = app.add_subcommand(
      "theorem1", "empirical constant of the BGLS upper bound with grid-doubling check");
  add_common(thm_cmd, thm_opts.common);
  thm_cmd->add_option("--f", thm_opts.f, "test function: const | u-delta | v-delta")
      ->check(CLI::IsMember({"const", "u-delta", "v-delta"}))
      ->capture_default_str();
  thm_cmd->add_option("--value", thm_opts.const_value, "value of the constant function")
      ->capture_default_str();
  thm_cmd->add_option("--Delta", thm_opts.common.Delta, "log-power exponent (> 1)")
      ->capture_default_str();
  thm_cmd->add_option("--grid-count", thm_opts.grid_count, "exponent grid size")
      ->capture_default_str();
  add_psi(thm_cmd, thm_opts.psi);

  NuOpts nu_opts;
  CLI::App* nu_cmd =
      app.add_subcommand("nu", "nu(q) = inf_p |q - p(1+alpha)|^{e(p,q)} psi(p)");
  add_common(nu_cmd, nu_opts.common, /*with_domain=*/false);
  nu_cmd->add_option("--q", nu_opts.q, "single q");
  nu_cmd->add_option("--q-min", nu_opts.q_min, "q grid lower end");
  nu_cmd->add_option("--q-max", nu_opts.q_max, "q grid upper end");
  nu_cmd->add_option("--q-count", nu_opts.q_count, "q grid size");
  nu_cmd->add_option("--grid-points", nu_opts.grid_points, "p grid size for the infimum")
      ->capture_default_str();
  add_psi(nu_cmd, nu_opts.psi);

  OracleOpts oracle_opts;
  CLI::App* oracle_cmd = app.add_subcommand(
      "oracle-check", "adaptive quadrature against the incomplete-gamma closed form");
  add_common(oracle_cmd, oracle_opts.common, /*with_domain=*/false);
  oracle_cmd->add_option("--s-min", oracle_opts.s_min, "sweep: smallest s")
      ->capture_default_str();
  oracle_cmd->add_option("--s-max", oracle_opts.s_max, "sweep: largest s")
      ->capture_default_str();
  oracle_cmd->add_option("--s-count", oracle_opts.s_count, "sweep: s points")
      ->capture_default_str();
  oracle_cmd->add_option("--m-min", oracle_opts.m_min, "sweep: smallest m")
      ->capture_default_str();
  oracle_cmd->add_option("--m-max", oracle_opts.m_max, "sweep: largest m")
      ->capture_default_str();
  oracle_cmd->add_option("--m-count", oracle_opts.m_count, "sweep: m points")
      ->capture_default_str();
  oracle_cmd->add_option("--threshold", oracle_opts.threshold, "max relative error allowed")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  std::string format = "csv";
  try {
    if (norm_cmd->parsed()) {
      format = norm_opts.common.format;
      return run_norm(norm_opts);
    }
    if (sharp_cmd->parsed()) {
      format = sharp_opts.common.format;
      return run_sharpness(sharp_opts);
    }
    if (thm_cmd->parsed()) {
      format = thm_opts.common.format;
      return run_theorem1(thm_opts);
    }
    if (nu_cmd->parsed()) {
      format = nu_opts.common.format;
      return run_nu(nu_opts);
    }
    format = oracle_opts.common.format;
    return run_oracle_check(oracle_opts);
  } catch (const std::invalid_argument& e) {
    report_error(format, kExitConfig, e.what());
    return kExitConfig;
  } catch (const std::out_of_range& e) {
    report_error(format, kExitConfig, e.what());
    return kExitConfig;
  } catch (const std::domain_error& e) {
    report_error(format, kExitConfig, e.what());
    return kExitConfig;
  } catch (const std::logic_error& e) {
    report_error(format, kExitInternal, e.what());
    return kExitInternal;
  } catch (const std::runtime_error& e) {
    report_error(format, kExitDivergence, e.what());
    return kExitDivergence;
  } catch (const std::exception& e) {
    report_error(format, kExitInternal, e.what());
    return kExitInternal;
  }
}
