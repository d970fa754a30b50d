// Command-line front end: `analyze` runs the uncertainty-region analysis
// on a user CSV, `simulate` runs the Monte Carlo coverage experiment.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mnarcor/csv.hpp"
#include "mnarcor/errors.hpp"
#include "mnarcor/estimators.hpp"
#include "mnarcor/inference.hpp"
#include "mnarcor/simulation.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace mnarcor;

constexpr int kExitUnreadable = 2;
constexpr int kExitBadConfig = 3;
constexpr int kExitMechanism = 4;
constexpr int kExitEstimation = 5;

std::vector<std::string> split_csv_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw error("cannot open '" + out_path + "' for writing");
  f << text;
}

json interval_json(double lower, double upper) {
  return json{{"lower", lower}, {"upper", upper}};
}

json trace_json(const UncertaintyRegion& ur) {
  json trace = json::array();
  for (const GridPoint& pt : ur.grid)
    trace.push_back(json{{"gamma1", pt.gamma1},
                         {"gamma2", pt.gamma2},
                         {"rho", pt.rho_hat},
                         {"lower", pt.lower},
                         {"upper", pt.upper},
                         {"status", pt.status}});
  return trace;
}

std::string trace_csv(const UncertaintyRegion& ur) {
  std::string out = "gamma1,gamma2,rho,lower,upper,status\n";
  for (const GridPoint& pt : ur.grid) {
    out += format_double(pt.gamma1) + "," + format_double(pt.gamma2) + "," +
           format_double(pt.rho_hat) + "," + format_double(pt.lower) + "," +
           format_double(pt.upper) + "," + pt.status + "\n";
  }
  return out;
}

struct AnalyzeConfig {
  std::string input, target, partner, adjust;
  std::string mechanism = "A";
  double gamma_min = 0.0, gamma_max = 0.0;
  double gamma2_min = 0.0, gamma2_max = 0.0;
  double alpha = 0.05;
  int grid = 101;
  std::string format = "json";
  std::string out;
};

int run_analyze(const AnalyzeConfig& cfg) {
  Mechanism mech;
  GammaBox box{0, 0};
  try {
    mech = mechanism_from_string(cfg.mechanism);
    box = GammaBox(cfg.gamma_min, cfg.gamma_max, cfg.gamma2_min, cfg.gamma2_max);
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw error("alpha must be in (0, 1)");
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadConfig;
  }

  CsvTable table;
  try {
    table = read_csv(cfg.input);
  } catch (const design_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUnreadable;
  }

  try {
    const Dataset data =
        dataset_from_table(table, cfg.target, cfg.partner, split_csv_list(cfg.adjust));

    MnarAnalysis analysis(data, mech);
    const UncertaintyRegion ur = uncertainty_region(analysis, box, cfg.alpha, cfg.grid);
    const RegularityReport reg = analysis.regularity(box.gamma1_max, box.gamma2_max);

    if (cfg.format == "csv") {
      write_output(trace_csv(ur), cfg.out);
    } else {
      json reg_json = json::array();
      for (const RegularityCheck& c : reg.checks)
        reg_json.push_back(
            json{{"name", c.name}, {"pass", c.pass}, {"diagnostic", c.diagnostic}});
      json doc{
          {"mechanism", mechanism_name(mech)},
          {"n_rows", data.n_rows()},
          {"p", data.p()},
          {"n_complete", analysis.n_complete()},
          {"n2", analysis.n2()},
          {"alpha", cfg.alpha},
          {"grid_points", cfg.grid},
          {"gamma_box",
           json{{"gamma1_min", box.gamma1_min},
                {"gamma1_max", box.gamma1_max},
                {"gamma2_min", box.gamma2_min},
                {"gamma2_max", box.gamma2_max}}},
          {"uncertainty_region",
           json{{"lower", ur.lower},
                {"upper", ur.upper},
                {"argmin_gamma1", ur.argmin_gamma1},
                {"argmin_gamma2", ur.argmin_gamma2},
                {"argmax_gamma1", ur.argmax_gamma1},
                {"argmax_gamma2", ur.argmax_gamma2},
                {"failures", ur.failures},
                {"exceeds_logical_range", ur.exceeds_logical_range}}},
          {"regularity", reg_json},
          {"trace", trace_json(ur)}};
      write_output(doc.dump(1) + "\n", cfg.out);
    }
    return 0;
  } catch (const mechanism_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMechanism;
  } catch (const design_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitEstimation;
  }
}

struct SimulateConfig {
  int n = 250;
  double gamma0 = 0.5;
  double gamma20 = 0.0;
  std::string mechanism = "A";
  int reps = 1000;
  std::uint64_t seed = 1;
  double alpha = 0.05;
  std::string ur = "0,0.5";
  std::string ur2;
  int grid = 101;
  std::string out;
};

int run_simulate(const SimulateConfig& cfg) {
  SimulationDesign design;
  GammaBox box{0, 0};
  try {
    design.mechanism = mechanism_from_string(cfg.mechanism);
    design.N = cfg.n;
    design.gamma10 = cfg.gamma0;
    design.gamma20 = cfg.gamma20;
    design.seed = cfg.seed;
    if (std::fabs(cfg.gamma0) > 1.0 || std::fabs(cfg.gamma20) > 1.0)
      throw error("gamma0 must lie in [-1, 1]");
    const auto parts = split_csv_list(cfg.ur);
    if (parts.size() != 2) throw error("--ur expects 'lo,hi'");
    double g2lo = 0.0, g2hi = 0.0;
    if (!cfg.ur2.empty()) {
      const auto p2 = split_csv_list(cfg.ur2);
      if (p2.size() != 2) throw error("--ur2 expects 'lo,hi'");
      g2lo = std::stod(p2[0]);
      g2hi = std::stod(p2[1]);
    }
    box = GammaBox(std::stod(parts[0]), std::stod(parts[1]), g2lo, g2hi);
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw error("alpha must be in (0, 1)");
    if (cfg.reps < 1) throw error("--reps must be >= 1");
  } catch (const std::invalid_argument&) {
    std::cerr << "error: malformed --ur value\n";
    return kExitBadConfig;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadConfig;
  }

  try {
    const CoverageReport report =
        run_coverage_experiment(design, cfg.reps, cfg.alpha, box, cfg.grid);

    auto method_json = [](const CoverageMethodStats& s) {
      return json{{"replicates", s.replicates},
                  {"covered_count", s.covered_count},
                  {"empirical_coverage", s.empirical_coverage},
                  {"width_q1", s.width_q1},
                  {"width_median", s.width_median},
                  {"width_q3", s.width_q3}};
    };
    json doc{{"mechanism", mechanism_name(design.mechanism)},
             {"n", design.N},
             {"gamma0", design.gamma10},
             {"gamma20", design.gamma20},
             {"seed", design.seed},
             {"replicates", report.replicates},
             {"failed", report.failed},
             {"alpha", report.alpha},
             {"grid_points", report.grid_points},
             {"ur_box",
              json{{"gamma1_min", box.gamma1_min},
                   {"gamma1_max", box.gamma1_max},
                   {"gamma2_min", box.gamma2_min},
                   {"gamma2_max", box.gamma2_max}}},
             {"true_rho", report.true_rho_value},
             {"cc_ci", method_json(report.cc)},
             {"oracle_ci", method_json(report.oracle)},
             {"ur", method_json(report.ur)}};

    std::string csv = "replicate,method,lower,upper,width,covered\n";
    for (const ReplicateRecord& r : report.records) {
      if (!r.ok) continue;
      const std::string rep = std::to_string(r.replicate);
      csv += rep + ",cc," + format_double(r.cc_ci.lower) + "," +
             format_double(r.cc_ci.upper) + "," + format_double(r.cc_ci.width()) + "," +
             (r.cc_covered ? "1" : "0") + "\n";
      csv += rep + ",oracle," + format_double(r.oracle_ci.lower) + "," +
             format_double(r.oracle_ci.upper) + "," + format_double(r.oracle_ci.width()) +
             "," + (r.oracle_covered ? "1" : "0") + "\n";
      csv += rep + ",ur," + format_double(r.ur_lower) + "," + format_double(r.ur_upper) +
             "," + format_double(r.ur_upper - r.ur_lower) + "," +
             (r.ur_covered ? "1" : "0") + "\n";
    }

    if (cfg.out.empty()) {
      std::cout << doc.dump(1) << "\n";
    } else {
      write_output(doc.dump(1) + "\n", cfg.out + ".json");
      write_output(csv, cfg.out + ".csv");
    }

    auto line = [&](const char* name, const CoverageMethodStats& s) {
      std::cout << name << ": coverage=" << format_double(s.empirical_coverage)
                << " median_width=" << format_double(s.width_median) << " ("
                << s.replicates << " replicates)\n";
    };
    line("cc_ci", report.cc);
    line("oracle_ci", report.oracle);
    line("ur", report.ur);
    return 0;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitEstimation;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partial correlation inference under missing-not-at-random data"};
  app.require_subcommand(1);

  AnalyzeConfig ac;
  CLI::App* analyze = app.add_subcommand("analyze", "uncertainty region for a CSV dataset");
  analyze->add_option("--input", ac.input, "input CSV path")->required();
  analyze->add_option("--target", ac.target, "target column (X1)")->required();
  analyze->add_option("--partner", ac.partner, "partner column (X2)")->required();
  analyze->add_option("--adjust", ac.adjust, "comma list of adjuster columns")->required();
  analyze->add_option("--mechanism", ac.mechanism, "missing data mechanism A|B|C");
  analyze->add_option("--gamma-min", ac.gamma_min, "lower gamma bound");
  analyze->add_option("--gamma-max", ac.gamma_max, "upper gamma bound");
  analyze->add_option("--gamma2-min", ac.gamma2_min, "lower gamma2 bound (mechanism C)");
  analyze->add_option("--gamma2-max", ac.gamma2_max, "upper gamma2 bound (mechanism C)");
  analyze->add_option("--alpha", ac.alpha, "significance level (default 0.05)");
  analyze->add_option("--grid", ac.grid, "grid points per gamma dimension (default 101)");
  analyze->add_option("--format", ac.format, "json|csv (default json)")
      ->check(CLI::IsMember({"json", "csv"}));
  analyze->add_option("--out", ac.out, "output path (default stdout)");

  SimulateConfig sc;
  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo coverage experiment");
  simulate->add_option("--n", sc.n, "sample size per replicate (default 250)");
  simulate->add_option("--gamma0", sc.gamma0, "true gamma used for generation");
  simulate->add_option("--gamma20", sc.gamma20, "true gamma2 (mechanism C)");
  simulate->add_option("--mechanism", sc.mechanism, "missing data mechanism A|B|C");
  simulate->add_option("--reps", sc.reps, "number of replicates (default 1000)");
  simulate->add_option("--seed", sc.seed, "base RNG seed");
  simulate->add_option("--alpha", sc.alpha, "significance level (default 0.05)");
  simulate->add_option("--ur", sc.ur, "gamma interval for the UR, 'lo,hi'");
  simulate->add_option("--ur2", sc.ur2, "gamma2 interval for the UR (mechanism C)");
  simulate->add_option("--grid", sc.grid, "grid points per gamma dimension");
  simulate->add_option("--out", sc.out, "output base path (<out>.json, <out>.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitBadConfig;
  }

  if (analyze->parsed()) return run_analyze(ac);
  return run_simulate(sc);
}
