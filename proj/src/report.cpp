#include "exitwell/report.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "exitwell/errors.hpp"
#include "exitwell/validate.hpp"

namespace exitwell {

namespace {

const char* curve_kind_name(CurveSpec::Kind k) {
  switch (k) {
    case CurveSpec::Kind::Circle: return "circle";
    case CurveSpec::Kind::Ellipse: return "ellipse";
    case CurveSpec::Kind::FourierStar: return "star";
  }
  return "?";
}

const char* potential_kind_name(PotentialSpec::Kind k) {
  switch (k) {
    case PotentialSpec::Kind::RadialPower: return "radial_power";
    case PotentialSpec::Kind::QuadraticForm: return "quadratic_form";
    case PotentialSpec::Kind::Polynomial: return "polynomial";
  }
  return "?";
}

ordered_json log_scalar_json(const LogScalar& v) {
  ordered_json j;
  if (v.sign == 0)
    j["log"] = nullptr;
  else
    j["log"] = v.logmag;
  j["sign"] = v.sign;
  if (v.representable())
    j["value"] = v.value();
  else
    j["value"] = nullptr;
  return j;
}

ordered_json error_json(const std::exception& e) {
  ordered_json j;
  const char* kind = "error";
  if (dynamic_cast<const ConfigError*>(&e)) kind = "config";
  else if (dynamic_cast<const AssumptionError*>(&e)) kind = "assumption";
  else if (dynamic_cast<const NumericalError*>(&e)) kind = "numerical";
  j["type"] = kind;
  j["message"] = e.what();
  return j;
}

ordered_json comparison_row(const std::string& name, double oracle,
                            double expansion) {
  ordered_json r;
  r["name"] = name;
  r["oracle"] = oracle;
  r["expansion"] = expansion;
  const double denom = std::max(std::fabs(oracle), 1e-300);
  r["rel_gap"] = std::fabs(oracle - expansion) / denom;
  return r;
}

bool is_disk(const DomainCurve& c) {
  return c.max_radius() - c.min_radius() <= 1e-9 * c.max_radius();
}

// true when V is exactly |x|^2/2 (the closed-form reference case)
bool is_unit_quadratic(const Potential& p) {
  if (!p.is_radial() || p.origin_degree() != 2) return false;
  return std::fabs(p.radial_value(0.7) - 0.245) <= 1e-14;
}

std::string iso_now() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt_log_scalar(const ordered_json& j) {
  if (j.contains("value") && j["value"].is_number())
    return fmt(j["value"].get<double>());
  if (!j.contains("log") || j["log"].is_null()) return "0";
  const double lg = j["log"].get<double>();
  const int sg = j.value("sign", 1);
  std::string s = sg < 0 ? "-" : "";
  return s + "exp(" + fmt(lg) + ")";
}

}  // namespace

Problem build_problem(const RunConfig& cfg) {
  return Problem{build_curve(cfg.domain.spec, cfg.domain.grid_size,
                             cfg.domain.collar_cap),
                 build_potential(cfg.potential)};
}

ordered_json inspect_report(const RunConfig& cfg) {
  Problem pr = build_problem(cfg);
  ordered_json doc;

  ordered_json d;
  d["kind"] = curve_kind_name(cfg.domain.spec.kind);
  d["grid_size"] = pr.curve.grid_size();
  d["length"] = pr.curve.length();
  d["area"] = pr.curve.area();
  d["collar_depth"] = pr.curve.collar_depth();
  d["max_abs_curvature"] = pr.curve.max_abs_curvature();
  d["min_radius"] = pr.curve.min_radius();
  d["max_radius"] = pr.curve.max_radius();
  doc["domain"] = d;

  ordered_json p;
  p["kind"] = potential_kind_name(cfg.potential.kind);
  p["origin_degree"] = pr.pot.origin_degree();
  p["radial"] = pr.pot.is_radial();
  ordered_json mons = ordered_json::array();
  for (const Monomial& mo : pr.pot.monomials())
    mons.push_back(ordered_json::array({mo.i, mo.j, mo.c}));
  p["monomials"] = mons;
  doc["potential"] = p;

  const AssumptionReport rep = check_assumptions(pr.pot, pr.curve);
  ordered_json a;
  a["rho1"] = rep.rho1;
  a["c1"] = rep.c1;
  a["c2"] = rep.c2;
  a["theta_min"] = rep.theta_min;
  a["v_min_off_origin"] = rep.v_min_off_origin;
  a["ok_origin"] = rep.ok_origin;
  a["ok_leading_form"] = rep.ok_leading_form;
  a["ok_gradient"] = rep.ok_gradient;
  a["ok_theta1"] = rep.ok_theta1;
  a["ok_theta_min"] = rep.ok_theta_min;
  a["ok_positive"] = rep.ok_positive;
  a["all_ok"] = rep.all_ok();
  doc["assumptions"] = a;
  return doc;
}

ordered_json expand_report(const RunConfig& cfg) {
  Problem pr = build_problem(cfg);
  const Expansion exp(pr.curve, pr.pot, cfg.expansion.order,
                      cfg.expansion.delta_scale);
  ordered_json doc;
  doc["order"] = exp.order();
  doc["cutoff_delta"] = exp.chi().delta();
  doc["theta_min"] = exp.traces().theta_min;
  doc["c2"] = exp.traces().c2;
  const auto [an, an1] = alpha_leading(pr.pot);
  doc["alpha_n"] = an;
  doc["alpha_n_plus_1"] = an1;

  ordered_json per = ordered_json::array();
  for (double eps : cfg.expansion.eps) {
    ordered_json e;
    e["eps"] = eps;
    try {
      const ScalarSet sc = exp.scalars(eps);
      e["volume"] = sc.table.volume;
      e["log_scale"] = sc.table.log_scale;
      e["mu_reduced"] = sc.table.mu_reduced;
      e["eta_reduced"] = sc.table.eta_reduced;
      e["lambda"] = log_scalar_json(sc.lambda);
      e["k_exp"] = log_scalar_json(sc.k_exp);
      e["k_pow"] = sc.k_pow;
      e["k_total"] = log_scalar_json(sc.k_total);
      if (!sc.truncation_note.empty()) e["truncation_note"] = sc.truncation_note;

      const LaplaceDiagnostic diag =
          laplace_leading_mu(exp.traces(), pr.curve.length(), eps);
      ordered_json lj;
      lj["available"] = diag.available;
      if (!diag.note.empty()) lj["note"] = diag.note;
      if (diag.available && sc.table.mu[0].sign != 0) {
        const LogScalar ratio = diag.value / sc.table.mu[0];
        if (ratio.representable()) lj["ratio_to_mu0"] = ratio.value();
      }
      e["boundary_laplace"] = lj;
    } catch (const std::exception& ex) {
      e["error"] = error_json(ex);
    }
    per.push_back(e);
  }
  doc["per_eps"] = per;
  return doc;
}

ordered_json evaluate_report(const RunConfig& cfg) {
  Problem pr = build_problem(cfg);
  const Expansion exp(pr.curve, pr.pot, cfg.expansion.order,
                      cfg.expansion.delta_scale);

  ordered_json probes = ordered_json::array();
  for (const Vec2& p : cfg.probes) {
    const CollarCoords cc = pr.curve.locate(p);
    if (cc.status == CollarStatus::Exterior && cc.tau < -1e-9 * pr.curve.length())
      throw ConfigError("probe (" + fmt(p.x) + ", " + fmt(p.y) +
                        ") lies outside the domain");
    probes.push_back(ordered_json{{"x", p.x}, {"y", p.y}});
  }

  ordered_json doc;
  doc["order"] = exp.order();
  doc["probes"] = probes;
  ordered_json per = ordered_json::array();
  for (double eps : cfg.expansion.eps) {
    ordered_json e;
    e["eps"] = eps;
    try {
      const ScalarSet sc = exp.scalars(eps);
      ordered_json vals = ordered_json::array();
      for (const Vec2& p : cfg.probes) {
        ordered_json v;
        v["psi"] = exp.eigenfunction(eps, p);
        v["u"] = exp.mean_exit_time(sc, p);
        vals.push_back(v);
      }
      e["values"] = vals;
    } catch (const std::exception& ex) {
      e["error"] = error_json(ex);
    }
    per.push_back(e);
  }
  doc["per_eps"] = per;
  return doc;
}

ordered_json validate_report(const RunConfig& cfg, const ReportOptions& opt) {
  Problem pr = build_problem(cfg);
  const Expansion exp(pr.curve, pr.pot, cfg.expansion.order,
                      cfg.expansion.delta_scale);
  const bool disk = is_disk(pr.curve);
  const double R = 0.5 * (pr.curve.min_radius() + pr.curve.max_radius());
  const std::uint64_t seed_base =
      opt.has_seed_override ? opt.seed_override : cfg.mc.seed;

  ordered_json per = ordered_json::array();
  for (double eps : cfg.expansion.eps) {
    ordered_json e;
    e["eps"] = eps;
    try {
      const ScalarSet sc = exp.scalars(eps);
      const Vec2 origin{0, 0};
      const double u0_pred = exp.mean_exit_time(sc, origin);
      ordered_json rows = ordered_json::array();

      if (cfg.validate.radial_bvp && pr.pot.is_radial() && disk) {
        const RadialBvpResult bvp =
            radial_bvp(pr.pot, R, eps, cfg.validate.bvp_grid);
        rows.push_back(comparison_row(
            "center exit time: graded radial solve vs expansion", bvp.u0,
            u0_pred));
        if (is_unit_quadratic(pr.pot) && std::fabs(R - 1.0) <= 1e-12)
          rows.push_back(comparison_row(
              "center exit time: closed form vs graded radial solve",
              exact_disk_quadratic_u0(eps), bvp.u0));
      }
      if (cfg.validate.radial_eigen && pr.pot.is_radial() && disk) {
        const RadialEigenResult eig =
            radial_eigen(pr.pot, R, eps, cfg.validate.eigen_cells);
        rows.push_back(comparison_row(
            "principal eigenvalue: finite-volume solve vs expansion",
            eig.lambda,
            sc.lambda.representable()
                ? sc.lambda.value()
                : std::numeric_limits<double>::quiet_NaN()));
      }
      e["rows"] = rows;

      if (cfg.mc.enabled && !cfg.mc.dt.empty()) {
        if (eps < cfg.mc.min_eps) {
          e["mc"] = ordered_json{
              {"skipped", "eps below mc min_eps cost guard"}};
        } else {
          const Vec2 x0 = cfg.probes.empty() ? origin : cfg.probes[0];
          const double u_pred = exp.mean_exit_time(sc, x0);
          std::vector<double> dts = cfg.mc.dt;
          std::sort(dts.begin(), dts.end(), std::greater<double>());
          ordered_json runs = ordered_json::array();
          std::vector<McResult> results;
          for (std::size_t lev = 0; lev < dts.size(); ++lev) {
            McSettings ms;
            ms.n_paths = cfg.mc.n_paths;
            ms.dt = dts[lev];
            ms.seed = seed_base + lev;  // independent stream per level
            ms.max_steps_per_path = cfg.mc.max_steps_per_path;
            ms.threads = opt.threads > 0 ? opt.threads : cfg.mc.threads;
            const McResult res = mc_exit(pr.pot, pr.curve, eps, x0, ms);
            results.push_back(res);
            ordered_json r;
            r["dt"] = res.dt;
            r["n_paths"] = res.n_paths;
            r["seed"] = res.seed;
            r["mean"] = res.mean;
            r["stderr"] = res.stderr_;
            r["total_steps"] = res.total_steps;
            r["budget_exceeded"] = res.budget_exceeded;
            r["z_vs_expansion"] =
                (res.mean - u_pred) / std::max(res.stderr_, 1e-300);
            runs.push_back(r);
          }
          ordered_json mc;
          mc["start"] = ordered_json{{"x", x0.x}, {"y", x0.y}};
          mc["expansion_value"] = u_pred;
          mc["runs"] = runs;
          if (results.size() == 2 &&
              std::fabs(dts[0] / dts[1] - 2.0) <= 1e-9) {
            // first-order-in-dt bias: eliminate with the sqrt(dt) pair rule
            const double c = 1.0 / (std::sqrt(2.0) - 1.0);
            const double t0 =
                results[1].mean + (results[1].mean - results[0].mean) * c;
            const double s0 = std::sqrt(
                std::pow((1 + c) * results[1].stderr_, 2) +
                std::pow(c * results[0].stderr_, 2));
            ordered_json rj;
            rj["mean"] = t0;
            rj["stderr"] = s0;
            rj["z_vs_expansion"] = (t0 - u_pred) / std::max(s0, 1e-300);
            mc["extrapolated"] = rj;
          }
          e["mc"] = mc;
        }
      }
    } catch (const std::exception& ex) {
      e["error"] = error_json(ex);
    }
    per.push_back(e);
  }
  ordered_json doc;
  doc["per_eps"] = per;
  return doc;
}

ordered_json full_report(const RunConfig& cfg, const ReportOptions& opt) {
  ordered_json doc;
  doc["generated_at"] = iso_now();
  doc["inspect"] = inspect_report(cfg);
  doc["expand"] = expand_report(cfg);
  if (!cfg.probes.empty()) doc["evaluate"] = evaluate_report(cfg);
  doc["validate"] = validate_report(cfg, opt);
  return doc;
}

namespace {

void render_inspect(const ordered_json& doc, std::ostringstream& os) {
  const ordered_json& d = doc["domain"];
  os << "domain: " << d["kind"].get<std::string>()
     << "  grid=" << d["grid_size"].get<int>()
     << "  length=" << fmt(d["length"].get<double>())
     << "  area=" << fmt(d["area"].get<double>()) << "\n"
     << "        collar_depth=" << fmt(d["collar_depth"].get<double>())
     << "  max|curvature|=" << fmt(d["max_abs_curvature"].get<double>())
     << "\n";
  const ordered_json& p = doc["potential"];
  os << "potential: " << p["kind"].get<std::string>()
     << "  origin_degree=" << p["origin_degree"].get<int>()
     << (p["radial"].get<bool>() ? "  (radial)" : "") << "\n";
  const ordered_json& a = doc["assumptions"];
  os << "assumptions: " << (a["all_ok"].get<bool>() ? "all satisfied" : "VIOLATED")
     << "  theta_min=" << fmt(a["theta_min"].get<double>())
     << "  c1=" << fmt(a["c1"].get<double>())
     << "  c2=" << fmt(a["c2"].get<double>()) << "\n";
}

void render_expand(const ordered_json& doc, std::ostringstream& os) {
  os << "expansion order " << doc["order"].get<int>()
     << ", cutoff delta=" << fmt(doc["cutoff_delta"].get<double>())
     << ", alpha_n=" << fmt(doc["alpha_n"].get<double>())
     << ", alpha_{n+1}=" << fmt(doc["alpha_n_plus_1"].get<double>()) << "\n";
  for (const ordered_json& e : doc["per_eps"]) {
    os << "  eps=" << fmt(e["eps"].get<double>());
    if (e.contains("error")) {
      os << "  ERROR(" << e["error"]["type"].get<std::string>()
         << "): " << e["error"]["message"].get<std::string>() << "\n";
      continue;
    }
    os << "  lambda=" << fmt_log_scalar(e["lambda"])
       << "  K=" << fmt_log_scalar(e["k_total"])
       << "  (K_exp=" << fmt_log_scalar(e["k_exp"])
       << ", K_pow=" << fmt(e["k_pow"].get<double>()) << ")\n";
    if (e.contains("truncation_note"))
      os << "    note: " << e["truncation_note"].get<std::string>() << "\n";
  }
}

void render_evaluate(const ordered_json& doc, std::ostringstream& os) {
  for (const ordered_json& e : doc["per_eps"]) {
    os << "  eps=" << fmt(e["eps"].get<double>()) << "\n";
    if (e.contains("error")) {
      os << "    ERROR: " << e["error"]["message"].get<std::string>() << "\n";
      continue;
    }
    const ordered_json& probes = doc["probes"];
    for (std::size_t i = 0; i < probes.size(); ++i) {
      const ordered_json& v = e["values"][i];
      os << "    (" << fmt(probes[i]["x"].get<double>()) << ", "
         << fmt(probes[i]["y"].get<double>())
         << "): psi=" << fmt(v["psi"].get<double>())
         << "  u=" << fmt(v["u"].get<double>()) << "\n";
    }
  }
}

void render_validate(const ordered_json& doc, std::ostringstream& os) {
  for (const ordered_json& e : doc["per_eps"]) {
    os << "  eps=" << fmt(e["eps"].get<double>()) << "\n";
    if (e.contains("error")) {
      os << "    ERROR(" << e["error"]["type"].get<std::string>()
         << "): " << e["error"]["message"].get<std::string>() << "\n";
      continue;
    }
    for (const ordered_json& r : e["rows"])
      os << "    " << r["name"].get<std::string>() << ": oracle="
         << fmt(r["oracle"].get<double>())
         << " expansion=" << fmt(r["expansion"].get<double>())
         << " rel_gap=" << fmt(r["rel_gap"].get<double>()) << "\n";
    if (e.contains("mc")) {
      const ordered_json& mc = e["mc"];
      if (mc.contains("skipped")) {
        os << "    mc: " << mc["skipped"].get<std::string>() << "\n";
      } else {
        for (const ordered_json& r : mc["runs"])
          os << "    mc dt=" << fmt(r["dt"].get<double>())
             << ": mean=" << fmt(r["mean"].get<double>()) << " +/- "
             << fmt(r["stderr"].get<double>())
             << "  z=" << fmt(r["z_vs_expansion"].get<double>()) << "\n";
        if (mc.contains("extrapolated")) {
          const ordered_json& r = mc["extrapolated"];
          os << "    mc extrapolated: mean=" << fmt(r["mean"].get<double>())
             << " +/- " << fmt(r["stderr"].get<double>())
             << "  z=" << fmt(r["z_vs_expansion"].get<double>()) << "\n";
        }
      }
    }
  }
}

}  // namespace

std::string render_text(const ordered_json& doc) {
  std::ostringstream os;
  if (doc.contains("domain")) render_inspect(doc, os);
  if (doc.contains("inspect")) render_inspect(doc["inspect"], os);
  if (doc.contains("alpha_n")) render_expand(doc, os);
  if (doc.contains("expand")) {
    os << "-- expansion --\n";
    render_expand(doc["expand"], os);
  }
  if (doc.contains("probes") && doc.contains("per_eps") &&
      !doc.contains("alpha_n"))
    render_evaluate(doc, os);
  if (doc.contains("evaluate")) {
    os << "-- evaluation --\n";
    render_evaluate(doc["evaluate"], os);
  }
  if (doc.contains("per_eps") && !doc.contains("alpha_n") &&
      !doc.contains("probes"))
    render_validate(doc, os);
  if (doc.contains("validate")) {
    os << "-- validation --\n";
    render_validate(doc["validate"], os);
  }
  if (os.str().empty()) os << doc.dump(2) << "\n";
  return os.str();
}

namespace {

std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write output file '" + path + "'");
  out << body;
}

const ordered_json* find_section(const ordered_json& doc, const char* nested,
                                 const char* marker) {
  if (doc.contains(nested)) return &doc[nested];
  if (doc.contains(marker)) return &doc;
  return nullptr;
}

}  // namespace

void emit_output(const ordered_json& doc, const OutputConfig& out) {
  if (!out.json.empty()) write_file(out.json, doc.dump(2) + "\n");
  if (out.csv_prefix.empty()) return;

  if (const ordered_json* ex = find_section(doc, "expand", "alpha_n")) {
    std::ostringstream sc, tb;
    sc << "eps,volume,log_scale,lambda_log,lambda_sign,k_exp_log,k_pow,"
          "k_total_log,k_total_sign\n";
    tb << "eps,j,mu_reduced,eta_reduced\n";
    for (const ordered_json& e : (*ex)["per_eps"]) {
      if (e.contains("error")) continue;
      const double eps = e["eps"].get<double>();
      auto lg = [](const ordered_json& j) {
        return j["log"].is_null() ? "nan" : csv_num(j["log"].get<double>());
      };
      sc << csv_num(eps) << ',' << csv_num(e["volume"].get<double>()) << ','
         << csv_num(e["log_scale"].get<double>()) << ',' << lg(e["lambda"])
         << ',' << e["lambda"]["sign"].get<int>() << ',' << lg(e["k_exp"])
         << ',' << csv_num(e["k_pow"].get<double>()) << ','
         << lg(e["k_total"]) << ',' << e["k_total"]["sign"].get<int>() << '\n';
      const auto& mu = e["mu_reduced"];
      const auto& eta = e["eta_reduced"];
      for (std::size_t j = 0; j < mu.size(); ++j)
        tb << csv_num(eps) << ',' << j << ',' << csv_num(mu[j].get<double>())
           << ',' << csv_num(eta[j].get<double>()) << '\n';
    }
    write_file(out.csv_prefix + "scalars.csv", sc.str());
    write_file(out.csv_prefix + "tables.csv", tb.str());
  }

  const ordered_json* ev = nullptr;
  if (doc.contains("evaluate")) ev = &doc["evaluate"];
  else if (doc.contains("probes")) ev = &doc;
  if (ev) {
    std::ostringstream ps;
    ps << "eps,x,y,psi,u\n";
    for (const ordered_json& e : (*ev)["per_eps"]) {
      if (e.contains("error")) continue;
      for (std::size_t i = 0; i < (*ev)["probes"].size(); ++i) {
        const ordered_json& v = e["values"][i];
        ps << csv_num(e["eps"].get<double>()) << ','
           << csv_num((*ev)["probes"][i]["x"].get<double>()) << ','
           << csv_num((*ev)["probes"][i]["y"].get<double>()) << ','
           << csv_num(v["psi"].get<double>()) << ','
           << csv_num(v["u"].get<double>()) << '\n';
      }
    }
    write_file(out.csv_prefix + "probes.csv", ps.str());
  }
}

}  // namespace exitwell
