#pragma once

#include <iosfwd>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "cohom1/search.hpp"

namespace cohom1 {

// key = value run description, '#' starts a comment
struct RunConfig {
  int m = 1;
  int k = 1;
  int epsilon = 0;
  double theta = 0;
  double s4 = 0;
  double s5 = 0;
  double eta0 = std::numeric_limits<double>::quiet_NaN();  // NaN: default depth
  double eta_max = 60;
  double rtol = 1e-16;
  double atol = 1e-26;
  double event_tol = 1e-10;
  double constraint_tol = 1e-9;
  std::string output_dir = "out";

  ModelParams model() const;
  ShootParams shoot() const;
  IntegratorConfig integrator() const;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& msg);
  int line() const { return line_; }

 private:
  int line_;
};

// radians, plus "pi", "pi/N", "N*pi", "N*pi/M" and a leading minus
double parse_angle(const std::string& text);

RunConfig parse_run_config(std::istream& in);
RunConfig load_run_config(const std::string& path);
std::string dump_run_config(const RunConfig& c);

// eta,X1..W,G,H,Q,inF,inA,inB,inC,t,a,b,c,f at 17 significant digits.
// t..f are left empty when with_profile is false.
void write_trajectory_csv(std::ostream& out, const Trajectory& tr, const ModelParams& mp, bool with_profile = true,
                          double region_tol = 1e-9);

// Rebuilds samples from a CSV written above. W~ comes back from b^2 Z2 (or c^2 Z4).
std::vector<Sample> read_trajectory_csv(std::istream& in, const ModelParams& mp);

// Re-detects the region events on stored samples (the integrator truncates steps at
// events, so the first sample past a crossing is the event point).
std::vector<Event> events_from_samples(const std::vector<Sample>& samples, double band = 1e-9);

nlohmann::json to_json(const Classification& c);
nlohmann::json to_json(const DriftReport& d);
nlohmann::json to_json(const Event& e);
nlohmann::json to_json(const ThresholdResult& r);
nlohmann::json to_json(const ThetaStarResult& r);
nlohmann::json to_json(const BetaResult& r);
nlohmann::json to_json(const AuditReport& r);
nlohmann::json to_json(const CatalogAudit& r);

// summary.json content for a single run
nlohmann::json run_summary(const RunConfig& cfg, const Shot& shot);

// Trajectory rebuilt from trajectory.csv and summary.json, for replay
Trajectory trajectory_from_files(const std::string& csv_path, const nlohmann::json& summary, ModelParams& mp,
                                 ShootParams& sp);

// plain SVG emitters
struct Series {
  std::string name;
  std::vector<double> x, y;
};
std::string svg_line_plot(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                          const std::vector<Series>& series);

// cells[row][col] holds a label name; rows run over ylabels (bottom to top)
std::string svg_heatmap(const std::string& title, const std::vector<std::string>& xlabels,
                        const std::vector<std::string>& ylabels, const std::vector<std::vector<std::string>>& cells);

}  // namespace cohom1
