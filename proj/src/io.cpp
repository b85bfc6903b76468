#include "cohom1/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace cohom1 {

using nlohmann::json;

ModelParams RunConfig::model() const { return make_model(m, k, epsilon); }

ShootParams RunConfig::shoot() const {
  ShootParams sp;
  sp.theta = theta;
  sp.s4 = s4;
  sp.s5 = s5;
  sp.eta0 = eta0;
  return sp;
}

IntegratorConfig RunConfig::integrator() const {
  IntegratorConfig c;
  c.eta_max = eta_max;
  c.rtol = rtol;
  c.atol = atol;
  c.event_tol = event_tol;
  c.constraint_tol = constraint_tol;
  return c;
}

ConfigError::ConfigError(int line, const std::string& msg)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_number(const std::string& text) {
  const std::string s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty number");
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("trailing characters in '" + s + "'");
  if (!std::isfinite(v)) throw std::invalid_argument("value is not finite");
  return v;
}

int parse_int(const std::string& text) {
  const double v = parse_number(text);
  if (v != std::floor(v) || std::fabs(v) > 1e9) throw std::invalid_argument("expected an integer, got '" + trim(text) + "'");
  return (int)v;
}

}  // namespace

double parse_angle(const std::string& text) {
  std::string s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty angle");
  double sign = 1;
  if (s[0] == '-') {
    sign = -1;
    s = trim(s.substr(1));
  }
  const auto p = s.find("pi");
  if (p == std::string::npos) return sign * parse_number(s);
  const double pi = 3.14159265358979323846;
  double num = 1, den = 1;
  std::string head = trim(s.substr(0, p)), tail = trim(s.substr(p + 2));
  if (!head.empty()) {
    if (head.back() != '*') throw std::invalid_argument("bad angle '" + text + "'");
    num = parse_number(head.substr(0, head.size() - 1));
  }
  if (!tail.empty()) {
    if (tail[0] != '/') throw std::invalid_argument("bad angle '" + text + "'");
    den = parse_number(tail.substr(1));
    if (den == 0) throw std::invalid_argument("division by zero in angle");
  }
  return sign * num * pi / den;
}

RunConfig parse_run_config(std::istream& in) {
  RunConfig c;
  std::set<std::string> seen;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq)), val = trim(s.substr(eq + 1));
    if (key.empty()) throw ConfigError(line, "missing key");
    if (!seen.insert(key).second) throw ConfigError(line, "duplicate key '" + key + "'");
    try {
      if (key == "m") c.m = parse_int(val);
      else if (key == "k") c.k = parse_int(val);
      else if (key == "epsilon") c.epsilon = parse_int(val);
      else if (key == "theta") c.theta = parse_angle(val);
      else if (key == "s4") c.s4 = parse_number(val);
      else if (key == "s5") c.s5 = parse_number(val);
      else if (key == "eta0") c.eta0 = parse_number(val);
      else if (key == "eta_max") c.eta_max = parse_number(val);
      else if (key == "rtol") c.rtol = parse_number(val);
      else if (key == "atol") c.atol = parse_number(val);
      else if (key == "event_tol") c.event_tol = parse_number(val);
      else if (key == "constraint_tol") c.constraint_tol = parse_number(val);
      else if (key == "output_dir") {
        if (val.empty()) throw std::invalid_argument("empty output_dir");
        c.output_dir = val;
      } else
        throw ConfigError(line, "unknown key '" + key + "'");
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(line, key + ": " + e.what());
    }
  }
  try {
    make_model(c.m, c.k, c.epsilon);
  } catch (const std::exception& e) {
    throw ConfigError(0, e.what());
  }
  if (c.rtol <= 0 || c.atol <= 0 || c.event_tol <= 0 || c.constraint_tol <= 0)
    throw ConfigError(0, "tolerances must be positive");
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError(0, "cannot open " + path);
  return parse_run_config(f);
}

std::string dump_run_config(const RunConfig& c) {
  char buf[1024];
  std::snprintf(buf, sizeof buf,
                "m = %d\nk = %d\nepsilon = %d\ntheta = %.17g\ns4 = %.17g\ns5 = %.17g\n%seta_max = %.17g\n"
                "rtol = %.17g\natol = %.17g\nevent_tol = %.17g\nconstraint_tol = %.17g\noutput_dir = %s\n",
                c.m, c.k, c.epsilon, c.theta, c.s4, c.s5,
                std::isnan(c.eta0) ? "" : ("eta0 = " + std::to_string(c.eta0) + "\n").c_str(), c.eta_max, c.rtol,
                c.atol, c.event_tol, c.constraint_tol, c.output_dir.c_str());
  return buf;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

const char* kHeader = "eta,X1,X2,X3,Z1,Z2,Z3,Z4,W,G,H,Q,inF,inA,inB,inC,t,a,b,c,f";

void put(std::ostream& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& tr, const ModelParams& mp, bool with_profile,
                          double region_tol) {
  out << kHeader << '\n';
  MetricProfile prof;
  if (with_profile) {
    try {
      prof = reconstruct(tr, mp);
    } catch (const DomainError&) {
      prof.clear();
    }
  }
  for (std::size_t i = 0; i < tr.samples.size(); ++i) {
    const Sample& s = tr.samples[i];
    const PhasePoint p = s.p();
    put(out, s.eta);
    for (double v : p) out << ',', put(out, v);
    out << ',';
    put(out, s.d.G);
    out << ',';
    put(out, s.d.H);
    out << ',';
    put(out, s.d.Q);
    const RegionState r = region_of(p, mp, region_tol);
    out << ',' << r.in_F << ',' << r.in_A << ',' << r.in_B << ',' << r.in_C;
    if (!prof.empty()) {
      const ProfileRow& q = prof[i];
      for (double v : {q.t, q.a, q.b, q.c, q.f}) out << ',', put(out, v);
    } else {
      out << ",,,,,";
    }
    out << '\n';
  }
}

std::vector<Sample> read_trajectory_csv(std::istream& in, const ModelParams& mp) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV");
  if (trim(line) != kHeader) throw std::runtime_error("unexpected CSV header");
  std::vector<Sample> out;
  int row = 1;
  double last_lw = std::nan("");
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 21) throw std::runtime_error("row " + std::to_string(row) + ": expected 21 fields");
    auto num = [&](int i) { return f[i].empty() ? std::nan("") : std::stod(f[i]); };
    Sample s;
    s.eta = num(0);
    PhasePoint p;
    for (int i = 0; i < 8; ++i) p[i] = num(1 + i);
    s.y = to_shifted(p);
    s.d = derived_scalars(p, mp);
    s.t = num(16);
    s.f = num(20);
    const double b = num(18), c = num(19);
    double lw = std::nan("");
    if (std::isfinite(b) && p[iZ2] > 0) lw = std::log(b * b * p[iZ2]);
    else if (std::isfinite(c) && p[iZ4] > 0) lw = std::log(c * c * p[iZ4]);
    if (!std::isfinite(lw)) lw = last_lw;
    s.ln_wt = lw;
    last_lw = lw;
    out.push_back(s);
  }
  return out;
}

std::vector<Event> events_from_samples(const std::vector<Sample>& samples, double band) {
  std::vector<Event> ev;
  const auto ws = region_watchers(band);
  if (samples.empty()) return ev;
  std::vector<double> prev;
  for (const auto& w : ws) prev.push_back(w.fn(samples[0].p()));
  std::vector<bool> active(ws.size(), true);
  for (std::size_t j = 1; j < samples.size(); ++j) {
    const PhasePoint p = samples[j].p();
    for (std::size_t i = 0; i < ws.size(); ++i) {
      if (!active[i]) continue;
      const double now = ws[i].fn(p);
      if (prev[i] > 0 && now <= 0) {
        ev.push_back({samples[j].eta, ws[i].name, (int)i, ws[i].terminal});
        for (std::size_t q = 0; q < ws.size(); ++q)
          if (ws[q].group == ws[i].group) active[q] = false;
        break;
      }
      prev[i] = now;
    }
  }
  return ev;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

// NaN and inf are not JSON numbers
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json outcome_json(Outcome o) { return to_string(o); }

json probe_json(const Probe& p) {
  return {{"x", p.x}, {"outcome", to_string(p.outcome)}, {"eta_exit", num(p.eta_exit)}};
}

}  // namespace

json to_json(const Classification& c) {
  return {{"outcome", to_string(c.outcome)},
          {"eta_exit", num(c.eta_exit)},
          {"ambiguous", c.ambiguous},
          {"label", to_string(c.label)},
          {"mu2", num(c.mu2)},
          {"nu2", num(c.nu2)},
          {"limit_point", c.limit_point.empty() ? json(nullptr) : json(c.limit_point)},
          {"base_label", to_string(c.base)},
          {"a_growth", num(c.a_growth)},
          {"note", c.note}};
}

json to_json(const DriftReport& d) {
  return {{"max_constraint_residual", num(d.max_constraint)},
          {"max_q_flow_consistency", num(d.max_qflow)},
          {"max_einstein_defect", num(d.max_einstein)},
          {"max_abs_w", num(d.max_abs_w)},
          {"einstein", d.einstein}};
}

json to_json(const Event& e) { return {{"eta", e.eta}, {"name", e.name}, {"terminal", e.terminal}}; }

json to_json(const ThresholdResult& r) {
  json j = {{"estimate", r.estimate},     {"lo", r.lo},
            {"hi", r.hi},                 {"width", r.width},
            {"lo_outcome", outcome_json(r.lo_outcome)},
            {"hi_outcome", outcome_json(r.hi_outcome)},
            {"monotone", r.monotone},     {"warning", r.warning}};
  j["probes"] = json::array();
  for (const auto& p : r.probes) j["probes"].push_back(probe_json(p));
  j["audit"] = json::array();
  for (const auto& p : r.audit) j["audit"].push_back(probe_json(p));
  return j;
}

json to_json(const ThetaStarResult& r) {
  json j = {{"theta", r.theta}, {"lo", r.lo}, {"hi", r.hi}, {"stays_in_B", r.stays_in_B}};
  j["probes"] = json::array();
  for (const auto& p : r.probes) j["probes"].push_back(probe_json(p));
  return j;
}

json to_json(const BetaResult& r) {
  json j = {{"beta", r.beta}, {"s5_grid", r.s5_grid}, {"note", r.note}};
  j["per_s5"] = json::array();
  for (std::size_t i = 0; i < r.per_s5.size(); ++i) {
    json t = to_json(r.per_s5[i]);
    t["s5"] = i == 0 ? 0.0 : r.s5_grid[i - 1];
    j["per_s5"].push_back(t);
  }
  return j;
}

json to_json(const AuditReport& r) {
  json j = {{"ok", r.ok}};
  j["strata"] = json::array();
  for (const auto& s : r.strata)
    j["strata"].push_back({{"name", s.name},
                           {"gating", s.gating},
                           {"accepted", s.accepted},
                           {"attempts", s.attempts},
                           {"min_value", num(s.min_value)},
                           {"argmin", s.argmin}});
  return j;
}

json to_json(const CatalogAudit& r) {
  json j = {{"ok", r.ok}};
  j["rows"] = json::array();
  for (const auto& c : r.rows)
    j["rows"].push_back({{"id", c.id},
                         {"z1", c.z1},
                         {"point", c.point},
                         {"v_norm", c.v_norm},
                         {"Q", c.Q},
                         {"H_minus_1", c.Hm1},
                         {"residual", c.residual},
                         {"ok", c.ok}});
  return j;
}

json run_summary(const RunConfig& cfg, const Shot& shot) {
  const Trajectory& tr = shot.tr;
  const ModelParams mp = cfg.model();
  json j;
  j["config"] = {{"m", cfg.m},         {"k", cfg.k},           {"epsilon", cfg.epsilon},
                 {"theta", cfg.theta}, {"s4", cfg.s4},         {"s5", cfg.s5},
                 {"eta0", shot.seed.eta0}, {"eta_max", cfg.eta_max}, {"rtol", cfg.rtol},
                 {"atol", cfg.atol},   {"event_tol", cfg.event_tol}, {"constraint_tol", cfg.constraint_tol}};
  j["n"] = mp.n();
  j["seed"] = {{"eta0", shot.seed.eta0}, {"u", shot.seed.u}, {"einstein", shot.seed.einstein}};
  j["status"] = to_string(tr.status);
  j["message"] = tr.message;
  j["converged_to"] = tr.converged_to;
  j["steps"] = tr.steps;
  j["rejected"] = tr.rejected;
  j["samples"] = tr.samples.size();
  j["events"] = json::array();
  for (const auto& e : tr.events) j["events"].push_back(to_json(e));
  j["classification"] = to_json(shot.cls);
  j["label"] = to_string(shot.cls.label);
  j["outcome"] = to_string(shot.cls.outcome);
  j["limit_point"] = shot.cls.limit_point.empty() ? json(nullptr) : json(shot.cls.limit_point);
  j["mu2"] = num(shot.cls.mu2);
  j["nu2"] = num(shot.cls.nu2);
  j["drift"] = to_json(monitor_drift(tr));
  const WitnessReport w = monotone_witnesses(tr, mp, cfg.s4);
  j["witnesses"] = {{"h_applicable", w.h_applicable},   {"h_violation", w.h_violation},
                    {"z1_applicable", w.z1_applicable}, {"z1_violation", w.z1_violation},
                    {"z_applicable", w.z_applicable},   {"z_violation", w.z_violation},
                    {"diagnostics", w.diagnostics}};
  return j;
}

Trajectory trajectory_from_files(const std::string& csv_path, const json& summary, ModelParams& mp,
                                 ShootParams& sp) {
  const json& c = summary.at("config");
  mp = make_model(c.at("m").get<int>(), c.at("k").get<int>(), c.at("epsilon").get<int>());
  sp = ShootParams{};
  sp.theta = c.at("theta").get<double>();
  sp.s4 = c.at("s4").get<double>();
  sp.s5 = c.at("s5").get<double>();
  std::ifstream f(csv_path);
  if (!f) throw std::runtime_error("cannot open " + csv_path);
  Trajectory tr;
  tr.mp = mp;
  tr.samples = read_trajectory_csv(f, mp);
  tr.events = events_from_samples(tr.samples);
  const std::string st = summary.at("status").get<std::string>();
  for (Status s : {Status::ReachedHorizon, Status::ConvergedToCriticalPoint, Status::LeftRS, Status::NumericalFailure,
                   Status::StoppedByEvent, Status::Escaped})
    if (to_string(s) == st) tr.status = s;
  tr.message = summary.value("message", "");
  tr.converged_to = summary.value("converged_to", "");
  tr.einstein = summary.at("seed").at("einstein").get<bool>();
  return tr;
}

// ---------------------------------------------------------------------------
// SVG

namespace {

std::string esc(const std::string& s) {
  std::string o;
  for (char ch : s) {
    if (ch == '<') o += "&lt;";
    else if (ch == '>') o += "&gt;";
    else if (ch == '&') o += "&amp;";
    else o += ch;
  }
  return o;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string fmt(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.4g", v);
  return b;
}

}  // namespace

std::string svg_line_plot(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                          const std::vector<Series>& series) {
  const double W = 640, H = 420, L = 70, R = 20, T = 40, B = 50;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series)
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;
  auto X = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto Y = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << esc(title) << "</text>\n";
  o << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4, yv = y0 + (y1 - y0) * i / 4;
    o << "<text x=\"" << X(xv) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">" << fmt(xv) << "</text>\n";
    o << "<text x=\"" << L - 6 << "\" y=\"" << Y(yv) + 4 << "\" text-anchor=\"end\">" << fmt(yv) << "</text>\n";
  }
  o << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << esc(xlabel) << "</text>\n";
  o << "<text transform=\"translate(16," << (T + H - B) / 2 << ") rotate(-90)\" text-anchor=\"middle\">" << esc(ylabel)
    << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* col = kPalette[k % 8];
    o << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
      if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) o << X(s.x[i]) << ',' << Y(s.y[i]) << ' ';
    o << "\"/>\n";
    if (!s.name.empty())
      o << "<text x=\"" << L + 8 << "\" y=\"" << T + 16 + 14 * k << "\" fill=\"" << col << "\">" << esc(s.name)
        << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string svg_heatmap(const std::string& title, const std::vector<std::string>& xlabels,
                        const std::vector<std::string>& ylabels, const std::vector<std::vector<std::string>>& cells) {
  static const std::map<std::string, std::string> colors = {
      {"AC", "#1f77b4"},        {"ALC", "#2ca02c"},      {"AP", "#9467bd"},   {"ACP", "#ff7f0e"},
      {"AH", "#17becf"},        {"Incomplete", "#d62728"}, {"Undetermined", "#bbbbbb"}, {"error", "#000000"}};
  const double cw = 48, ch = 28, L = 90, T = 40, B = 60;
  const std::size_t nx = xlabels.size(), ny = ylabels.size();
  const double W = L + cw * nx + 140, H = T + ch * ny + B;
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << esc(title) << "</text>\n";
  std::set<std::string> used;
  for (std::size_t r = 0; r < ny && r < cells.size(); ++r)
    for (std::size_t c = 0; c < nx && c < cells[r].size(); ++c) {
      const std::string& lab = cells[r][c];
      used.insert(lab);
      const auto it = colors.find(lab);
      const double x = L + cw * c, y = T + ch * (ny - 1 - r);
      o << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cw << "\" height=\"" << ch << "\" fill=\""
        << (it == colors.end() ? "#dddddd" : it->second) << "\" stroke=\"white\"><title>" << esc(lab)
        << "</title></rect>\n";
    }
  for (std::size_t c = 0; c < nx; ++c)
    o << "<text x=\"" << L + cw * (c + 0.5) << "\" y=\"" << T + ch * ny + 16 << "\" text-anchor=\"middle\">"
      << esc(xlabels[c]) << "</text>\n";
  for (std::size_t r = 0; r < ny; ++r)
    o << "<text x=\"" << L - 6 << "\" y=\"" << T + ch * (ny - 1 - r) + ch / 2 + 4 << "\" text-anchor=\"end\">"
      << esc(ylabels[r]) << "</text>\n";
  int k = 0;
  for (const auto& lab : used) {
    const auto it = colors.find(lab);
    const double y = T + 16 * k;
    o << "<rect x=\"" << L + cw * nx + 20 << "\" y=\"" << y << "\" width=\"12\" height=\"12\" fill=\""
      << (it == colors.end() ? "#dddddd" : it->second) << "\"/>\n";
    o << "<text x=\"" << L + cw * nx + 38 << "\" y=\"" << y + 10 << "\">" << esc(lab) << "</text>\n";
    ++k;
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace cohom1
