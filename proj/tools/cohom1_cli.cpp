// cohom1: shooting and classification of cohomogeneity one steady / expanding solitons
//
// exit codes: 0 ok, 2 config error, 3 numerical failure, 4 verification failure

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "cohom1/io.hpp"
#include "cohom1/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cohom1;

namespace {

constexpr int kOk = 0, kConfig = 2, kNumerical = 3, kVerify = 4;

std::uint64_t rng_seed() {
  const char* s = std::getenv("COHOM1_SEED");
  if (!s || !*s) return 20240601ULL;
  try {
    return std::stoull(s);
  } catch (...) {
    throw ConfigError(0, std::string("COHOM1_SEED is not an unsigned integer: ") + s);
  }
}

// run parameters shared by integrate / classify
struct RunOpts {
  std::string config;
  int m = 1, k = 1, epsilon = 0;
  std::string theta = "0";
  double s4 = 0, s5 = 0;
  double eta0 = NAN, eta_max = 60;
  std::string out;
  bool force = false, no_profile = false;
};

void add_run_opts(CLI::App* c, RunOpts& o) {
  c->add_option("--config", o.config, "key = value run file; flags given explicitly override it");
  c->add_option("--m", o.m, "quaternionic dimension, n = 4m+3");
  c->add_option("--k", o.k, "lens space order");
  c->add_option("--epsilon", o.epsilon, "0 steady, 1 expanding");
  c->add_option("--theta", o.theta, "arc angle in radians; pi, pi/2, 3*pi/4 accepted");
  c->add_option("--s4", o.s4);
  c->add_option("--s5", o.s5);
  c->add_option("--eta0", o.eta0, "seeding depth (default from the seed scale)");
  c->add_option("--eta-max", o.eta_max);
}

RunConfig resolve(CLI::App* c, const RunOpts& o) {
  RunConfig r;
  if (!o.config.empty()) r = load_run_config(o.config);
  auto given = [&](const char* name) { return c->count(name) > 0; };
  if (given("--m")) r.m = o.m;
  if (given("--k")) r.k = o.k;
  if (given("--epsilon")) r.epsilon = o.epsilon;
  if (given("--theta")) {
    try {
      r.theta = parse_angle(o.theta);
    } catch (const std::exception& e) {
      throw ConfigError(0, std::string("--theta: ") + e.what());
    }
  }
  if (given("--s4")) r.s4 = o.s4;
  if (given("--s5")) r.s5 = o.s5;
  if (given("--eta0")) r.eta0 = o.eta0;
  if (given("--eta-max")) r.eta_max = o.eta_max;
  if (c->get_option_no_throw("--out") && given("--out")) r.output_dir = o.out;
  try {
    make_model(r.m, r.k, r.epsilon);
  } catch (const std::exception& e) {
    throw ConfigError(0, e.what());
  }
  return r;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << text;
}

void prepare_dir(const fs::path& dir, const std::vector<std::string>& files, bool force) {
  fs::create_directories(dir);
  if (force) return;
  for (const auto& f : files)
    if (fs::exists(dir / f)) throw ConfigError(0, (dir / f).string() + " exists (use --force to overwrite)");
}

void emit(const json& j, const std::string& out) {
  const std::string s = j.dump(2);
  if (out.empty() || out == "-") {
    std::cout << s << '\n';
  } else {
    write_file(out, s + "\n");
  }
}

std::vector<double> parse_grid(const std::string& spec, bool angles) {
  // "a:b:n" is n evenly spaced points, otherwise a comma separated list
  auto val = [&](const std::string& s) { return angles ? parse_angle(s) : std::stod(s); };
  std::vector<double> g;
  const auto c1 = spec.find(':');
  if (c1 != std::string::npos) {
    const auto c2 = spec.find(':', c1 + 1);
    if (c2 == std::string::npos) throw ConfigError(0, "grid '" + spec + "': expected a:b:n");
    const double a = val(spec.substr(0, c1)), b = val(spec.substr(c1 + 1, c2 - c1 - 1));
    const int n = std::stoi(spec.substr(c2 + 1));
    if (n < 1) throw ConfigError(0, "grid '" + spec + "': n must be positive");
    for (int i = 0; i < n; ++i) g.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
  } else {
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) g.push_back(val(item));
  }
  if (g.empty()) throw ConfigError(0, "grid '" + spec + "' is empty");
  for (double x : g)
    if (!std::isfinite(x)) throw ConfigError(0, "grid '" + spec + "' has a non-finite value");
  return g;
}

int cmd_integrate(CLI::App* c, const RunOpts& o, bool write) {
  const RunConfig rc = resolve(c, o);
  const ModelParams mp = rc.model();
  const IntegratorConfig cfg = rc.integrator();
  const Shot shot = shoot(mp, rc.shoot(), cfg);
  const json summary = run_summary(rc, shot);
  if (write) {
    const fs::path dir = rc.output_dir;
    prepare_dir(dir, {"trajectory.csv", "summary.json"}, o.force);
    {
      std::ofstream f(dir / "trajectory.csv");
      if (!f) throw std::runtime_error("cannot write " + (dir / "trajectory.csv").string());
      write_trajectory_csv(f, shot.tr, mp, !o.no_profile, cfg.region_tol);
    }
    write_file(dir / "summary.json", summary.dump(2) + "\n");
    write_file(dir / "run.cfg", dump_run_config(rc));
    std::cout << "label " << summary["label"].get<std::string>() << ", outcome " << summary["outcome"].get<std::string>()
              << ", status " << summary["status"].get<std::string>() << "\nwrote " << (dir / "trajectory.csv").string()
              << " and " << (dir / "summary.json").string() << '\n';
  } else {
    std::cout << summary.dump(2) << '\n';
  }
  return shot.tr.status == Status::NumericalFailure ? kNumerical : kOk;
}

int cmd_verify(const std::string& replay, long samples, int jobs) {
  if (!replay.empty()) {
    const fs::path dir = replay;
    std::ifstream sf(dir / "summary.json");
    if (!sf) throw ConfigError(0, "cannot open " + (dir / "summary.json").string());
    const json summary = json::parse(sf);
    ModelParams mp;
    ShootParams sp;
    const Trajectory tr = trajectory_from_files((dir / "trajectory.csv").string(), summary, mp, sp);
    const Classification cls = classify(tr, mp, sp);
    const json now = to_json(cls);
    const json& was = summary.at("classification");
    bool same = true;
    for (const char* key : {"label", "outcome", "limit_point", "base_label"}) same = same && now[key] == was[key];
    json out = {{"replay", dir.string()}, {"identical", same}, {"stored", was}, {"replayed", now}};
    std::cout << out.dump(2) << '\n';
    return same ? kOk : kVerify;
  }
  const VerifyReport r = run_verify(samples, rng_seed(), jobs);
  json j = {{"ok", r.ok},
            {"catalog_ok", r.catalog_ok},
            {"audit_ok", r.audit_ok},
            {"drift_ok", r.drift_ok},
            {"qflow_ok", r.qflow_ok},
            {"max_constraint_residual", r.max_constraint},
            {"max_einstein_defect", r.max_einstein},
            {"max_q_flow_consistency_random", r.max_qflow_random}};
  j["audits"] = json::array();
  for (std::size_t i = 0; i < r.audits.size(); ++i) {
    json a = to_json(r.audits[i]);
    a["m"] = i + 1;
    j["audits"].push_back(a);
  }
  j["catalogs"] = json::array();
  for (const auto& c : r.catalogs) j["catalogs"].push_back({{"ok", c.ok}, {"rows", c.rows.size()}});
  j["runs"] = json::array();
  for (const auto& row : r.runs)
    j["runs"].push_back({{"name", row.name},
                         {"status", row.status},
                         {"label", to_string(row.cls.label)},
                         {"outcome", to_string(row.cls.outcome)},
                         {"drift", to_json(row.drift)},
                         {"ok", row.ok}});
  std::cout << j.dump(2) << '\n';
  return r.ok ? kOk : kVerify;
}

int cmd_critical_points(int m, int k, int eps, bool as_json) {
  const ModelParams mp = make_model(m, k, eps);
  const CatalogAudit a = catalog_audit(mp);
  if (as_json) {
    std::cout << to_json(a).dump(2) << '\n';
  } else {
    std::printf("# m = %d, n = %d, epsilon = %d\n", m, mp.n(), eps);
    std::printf("%-8s %5s  %-72s %10s %10s %10s %10s\n", "id", "z1", "point (X1 X2 X3 Z1 Z2 Z3 Z4 W)", "|V|", "Q", "H-1",
                "Z4^2-Z2Z3");
    for (const auto& r : a.rows) {
      std::string pt;
      for (double v : r.point) {
        char b[16];
        std::snprintf(b, sizeof b, "%.6g ", v);
        pt += b;
      }
      std::printf("%-8s %5.2f  %-72s %10.2e %10.2e %10.2e %10.2e%s\n", r.id.c_str(), r.z1, pt.c_str(), r.v_norm, r.Q,
                  r.Hm1, r.residual, r.ok ? "" : "  FAIL");
    }
  }
  return a.ok ? kOk : kVerify;
}

int cmd_atlas(int m, int k, int eps, const std::string& tg, const std::string& s4g, const std::string& s5g,
              double eta_max, int jobs, bool plots, const std::string& out, bool force) {
  const ModelParams mp = make_model(m, k, eps);
  const auto th = parse_grid(tg, true), s4 = parse_grid(s4g, false), s5 = parse_grid(s5g, false);
  IntegratorConfig cfg;
  cfg.eta_max = eta_max;
  const fs::path dir = out;
  prepare_dir(dir, {"atlas.json", "atlas.csv"}, force);
  const auto nodes = atlas(mp, th, s4, s5, cfg, jobs);

  json j = {{"m", m}, {"k", k}, {"epsilon", eps}, {"theta_grid", th}, {"s4_grid", s4}, {"s5_grid", s5}};
  j["nodes"] = json::array();
  std::ofstream csv(dir / "atlas.csv");
  csv << "theta,s4,s5,ok,status,label,outcome,eta_exit,mu2,nu2,limit_point,base_label,error\n";
  char buf[512];
  for (const auto& n : nodes) {
    json e = {{"theta", n.sp.theta}, {"s4", n.sp.s4}, {"s5", n.sp.s5}, {"ok", n.ok}, {"status", n.status}};
    if (n.ok) e["classification"] = to_json(n.cls);
    else e["error"] = n.error;
    j["nodes"].push_back(e);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%d,%s,%s,%s,%.17g,%.17g,%.17g,%s,%s,\"%s\"\n", n.sp.theta, n.sp.s4,
                  n.sp.s5, n.ok, n.status.c_str(), n.ok ? to_string(n.cls.label).c_str() : "error",
                  to_string(n.cls.outcome).c_str(), n.cls.eta_exit, n.cls.mu2, n.cls.nu2, n.cls.limit_point.c_str(),
                  to_string(n.cls.base).c_str(), n.error.c_str());
    csv << buf;
  }
  write_file(dir / "atlas.json", j.dump(2) + "\n");

  // one heat map per s5 value: theta across, s4 up
  auto label = [](double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.3g", v);
    return std::string(b);
  };
  std::vector<std::string> xl, yl;
  for (double t : th) xl.push_back(label(t));
  for (double s : s4) yl.push_back(label(s));
  for (std::size_t q = 0; q < s5.size(); ++q) {
    std::vector<std::vector<std::string>> cells(s4.size(), std::vector<std::string>(th.size()));
    for (const auto& n : nodes) {
      const std::size_t ti = std::find(th.begin(), th.end(), n.sp.theta) - th.begin();
      const std::size_t si = std::find(s4.begin(), s4.end(), n.sp.s4) - s4.begin();
      if (n.sp.s5 != s5[q] || ti >= th.size() || si >= s4.size()) continue;
      cells[si][ti] = n.ok ? to_string(n.cls.label) : "error";
    }
    write_file(dir / ("atlas_s5_" + std::to_string(q) + ".svg"),
               svg_heatmap("labels, m=" + std::to_string(m) + " k=" + std::to_string(k) + " s5=" + label(s5[q]) +
                               " (theta across, s4 up)",
                           xl, yl, cells));
  }
  if (plots) {
    fs::create_directories(dir / "plots");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const auto& n = nodes[i];
      if (!n.ok) continue;
      const std::string tag = "theta=" + label(n.sp.theta) + " s4=" + label(n.sp.s4) + " s5=" + label(n.sp.s5);
      write_file(dir / "plots" / ("run_" + std::to_string(i) + "_z1.svg"),
                 svg_line_plot("Z1, " + tag, "eta", "Z1", {{"Z1", n.eta, n.z1}}));
      write_file(dir / "plots" / ("run_" + std::to_string(i) + "_nu.svg"),
                 svg_line_plot("sqrt(Z3/Z2), " + tag, "eta", "sqrt(Z3/Z2)", {{"sqrt(Z3/Z2)", n.eta, n.nu}}));
    }
  }
  std::cout << "wrote " << nodes.size() << " nodes to " << (dir / "atlas.json").string() << '\n';
  int failed = 0;
  for (const auto& n : nodes) failed += !n.ok;
  return failed ? kNumerical : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cohom1: shooting, classification and threshold search for cohomogeneity one solitons"};
  app.require_subcommand(1);

  RunOpts ri, rc;
  auto* integ = app.add_subcommand("integrate", "integrate one run, write trajectory.csv and summary.json");
  add_run_opts(integ, ri);
  integ->add_option("--out", ri.out, "output directory (config key output_dir)");
  integ->add_flag("--force", ri.force, "overwrite existing output");
  integ->add_flag("--no-profile", ri.no_profile, "leave t,a,b,c,f empty");

  auto* cls = app.add_subcommand("classify", "integrate one run and print its summary");
  add_run_opts(cls, rc);

  int m = 1, k = 1, eps = 0, jobs = 1;
  std::string theta = "0", out;
  double lo = 0, hi = 100, tol = 1e-4, eta_max = 60;
  auto* alpha = app.add_subcommand("search-alpha", "steady s4 threshold for avoiding C");
  alpha->add_option("--m", m);
  alpha->add_option("--k", k);
  alpha->add_option("--theta", theta);
  alpha->add_option("--lo", lo);
  alpha->add_option("--hi", hi);
  alpha->add_option("--tol", tol);
  alpha->add_option("--eta-max", eta_max);
  alpha->add_option("--jobs", jobs);
  alpha->add_option("--out", out, "JSON file (default stdout)");

  std::string s5grid;
  auto* beta = app.add_subcommand("search-beta", "expanding s4 threshold, max over an s5 grid");
  beta->add_option("--m", m);
  beta->add_option("--k", k);
  beta->add_option("--theta", theta);
  beta->add_option("--lo", lo);
  beta->add_option("--hi", hi);
  beta->add_option("--tol", tol);
  beta->add_option("--s5-grid", s5grid, "a:b:n or comma list (default 8 log-spaced points in [1e-2, 1e2])");
  beta->add_option("--eta-max", eta_max);
  beta->add_option("--jobs", jobs);
  beta->add_option("--out", out);

  double ttol = 0;
  auto* ths = app.add_subcommand("search-theta", "angle whose Ricci-flat run stays in B");
  ths->add_option("--m", m);
  ths->add_option("--k", k);
  ths->add_option("--tol", ttol, "bracket width, 0 bisects to machine resolution");
  ths->add_option("--eta-max", eta_max);
  ths->add_option("--out", out);

  std::string tg = "0:pi:5", s4g = "0,1,10", s5g = "0";
  bool plots = false, force = false;
  out = "";
  auto* atl = app.add_subcommand("atlas", "classify a (theta, s4, s5) grid");
  atl->add_option("--m", m);
  atl->add_option("--k", k);
  atl->add_option("--epsilon", eps);
  atl->add_option("--theta-grid", tg);
  atl->add_option("--s4-grid", s4g);
  atl->add_option("--s5-grid", s5g);
  atl->add_option("--eta-max", eta_max);
  atl->add_option("--jobs", jobs);
  atl->add_flag("--plots", plots, "per-run SVG line plots");
  atl->add_option("--out", out, "output directory")->required();
  atl->add_flag("--force", force);

  std::string replay;
  long samples = 10000;
  auto* ver = app.add_subcommand("verify", "catalog, boundary sign and drift audits; or --replay DIR");
  ver->add_option("--replay", replay, "directory holding trajectory.csv and summary.json");
  ver->add_option("--samples", samples, "boundary audit samples per stratum");
  ver->add_option("--jobs", jobs);

  bool as_json = false;
  auto* cps = app.add_subcommand("critical-points", "critical point catalog with residuals");
  cps->add_option("--m", m);
  cps->add_option("--k", k);
  cps->add_option("--epsilon", eps);
  cps->add_flag("--json", as_json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (*integ) return cmd_integrate(integ, ri, true);
    if (*cls) return cmd_integrate(cls, rc, false);
    if (*alpha) {
      IntegratorConfig cfg;
      cfg.eta_max = eta_max;
      const ThresholdResult r = find_alpha(make_model(m, k, 0), parse_angle(theta), {lo, hi}, tol, cfg, jobs);
      json j = to_json(r);
      j["m"] = m;
      j["k"] = k;
      j["theta"] = parse_angle(theta);
      emit(j, out);
      return kOk;
    }
    if (*beta) {
      IntegratorConfig cfg;
      cfg.eta_max = eta_max;
      const auto grid = s5grid.empty() ? default_s5_grid() : parse_grid(s5grid, false);
      const BetaResult r = find_beta(make_model(m, k, 1), parse_angle(theta), grid, {lo, hi}, tol, cfg, jobs);
      json j = to_json(r);
      j["m"] = m;
      j["k"] = k;
      j["theta"] = parse_angle(theta);
      emit(j, out);
      return kOk;
    }
    if (*ths) {
      IntegratorConfig cfg;
      cfg.eta_max = eta_max;
      const ModelParams mp = make_model(m, k, 0);
      const ThetaStarResult r = find_theta_star(mp, ttol, cfg);
      ShootParams sp;
      sp.theta = r.theta;
      // stops once the run settles at p2
      const Shot s = shoot(mp, sp, cfg);
      json j = to_json(r);
      j["m"] = m;
      j["k"] = k;
      j["classification"] = to_json(s.cls);
      j["nu2"] = s.cls.nu2;
      j["mu2"] = s.cls.mu2;
      emit(j, out);
      return kOk;
    }
    if (*atl) return cmd_atlas(m, k, eps, tg, s4g, s5g, eta_max, jobs, plots, out, force);
    if (*ver) return cmd_verify(replay, samples, jobs);
    if (*cps) return cmd_critical_points(m, k, eps, as_json);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const BracketError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const json::exception& e) {
    std::cerr << "bad JSON: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
  return kOk;
}
