#include <cmath>
#include <sstream>

#include "doctest.h"

#include "cohom1/io.hpp"

using namespace cohom1;

namespace {
const double pi = 3.14159265358979323846;

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_run_config(in);
}

int error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return 0;
}
}  // namespace

TEST_CASE("angles") {
  CHECK(parse_angle("pi") == pi);
  CHECK(parse_angle("pi/2") == pi / 2);
  CHECK(parse_angle("3*pi/4") == doctest::Approx(3 * pi / 4));
  CHECK(parse_angle("-pi/3") == doctest::Approx(-pi / 3));
  CHECK(parse_angle("0.25") == 0.25);
  CHECK_THROWS(parse_angle("pie"));
  CHECK_THROWS(parse_angle(""));
}

TEST_CASE("run config parsing") {
  const RunConfig c = parse("# run\nm = 2\nk = 5\nepsilon = 1\ntheta = pi/2  # comment\ns4 = 0.5\ns5 = 2\n");
  CHECK(c.m == 2);
  CHECK(c.k == 5);
  CHECK(c.epsilon == 1);
  CHECK(c.theta == pi / 2);
  CHECK(c.s4 == 0.5);
  CHECK(c.s5 == 2);
  CHECK(std::isnan(c.eta0));

  const RunConfig back = parse(dump_run_config(c));
  CHECK(back.m == c.m);
  CHECK(back.theta == c.theta);
  CHECK(back.s5 == c.s5);
  CHECK(back.rtol == c.rtol);

  CHECK(error_line("m = 1\nbogus = 3\n") == 2);
  CHECK(error_line("m = 1\nk = 2\nk = 3\n") == 3);
  CHECK(error_line("m = 1\ns4 = nan\n") == 2);
  CHECK(error_line("theta\n") == 1);
  CHECK(error_line("m = one\n") == 1);
}

TEST_CASE("trajectory CSV round trip") {
  RunConfig cfg = parse("m = 1\nk = 2\ntheta = 1\ns4 = 0.5\n");
  const ModelParams mp = cfg.model();
  const Shot s = shoot(mp, cfg.shoot(), cfg.integrator());
  std::stringstream io;
  write_trajectory_csv(io, s.tr, mp);
  std::string header;
  std::getline(io, header);
  CHECK(header == "eta,X1,X2,X3,Z1,Z2,Z3,Z4,W,G,H,Q,inF,inA,inB,inC,t,a,b,c,f");
  io.seekg(0);
  const std::vector<Sample> back = read_trajectory_csv(io, mp);
  REQUIRE(back.size() == s.tr.samples.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    const PhasePoint a = back[i].p(), b = s.tr.samples[i].p();
    CHECK(back[i].eta == s.tr.samples[i].eta);
    for (int j = 0; j < 8; ++j) CHECK(a[j] == doctest::Approx(b[j]).epsilon(1e-15).scale(1e-300));
    CHECK(back[i].ln_wt == doctest::Approx(s.tr.samples[i].ln_wt).epsilon(1e-12));
  }

  const auto ev = events_from_samples(back);
  REQUIRE(ev.size() == s.tr.events.size());
  for (std::size_t i = 0; i < ev.size(); ++i) {
    CHECK(ev[i].name == s.tr.events[i].name);
    CHECK(ev[i].eta == doctest::Approx(s.tr.events[i].eta).epsilon(1e-12));
  }

  const nlohmann::json j = run_summary(cfg, s);
  CHECK(j["label"] == to_string(s.cls.label));
  CHECK(j["config"]["k"] == 2);
  CHECK(j["drift"]["max_constraint_residual"].get<double>() < 1e-9);
}

TEST_CASE("NaN goes out as null") {
  Classification c;
  c.eta_exit = std::nan("");
  CHECK(to_json(c)["eta_exit"].is_null());
}

TEST_CASE("svg emitters") {
  const std::string a = svg_line_plot("t", "x", "y", {{"s", {0, 1, 2}, {1, 4, 9}}});
  CHECK(a.rfind("<svg", 0) == 0);
  CHECK(a.find("</svg>") != std::string::npos);
  const std::string b = svg_heatmap("h", {"a", "b"}, {"0"}, {{"AC", "ALC"}});
  CHECK(b.find("ALC") != std::string::npos);
}
