#include "nbody/scan.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

namespace {

int run_with_output(const std::string& path,
                    const std::function<void(std::ostream&)>& writer) {
  if (path.empty() || path == "-") {
    writer(std::cout);
    return 0;
  }
  std::ofstream os(path);
  if (!os) {
    std::cerr << "nbody: cannot open '" << path << "' for writing\n";
    return 1;
  }
  writer(os);
  os.flush();
  if (!os) {
    std::cerr << "nbody: failed while writing '" << path << "'\n";
    return 1;
  }
  return 0;
}

std::string read_input(const std::string& path) {
  std::stringstream buf;
  if (path == "-") {
    buf << std::cin.rdbuf();
  } else {
    std::ifstream is(path);
    if (!is) throw nbody::ParseError("cannot open input file '" + path + "'");
    buf << is.rdbuf();
  }
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace nbody;

  CLI::App app{"Linear stability of homographic N-body motions"};
  app.require_subcommand(1);

  auto* check = app.add_subcommand(
      "check-paper", "run the closed-form regression battery for the "
                     "equilateral three-body configuration");
  std::string check_out;
  check->add_option("--out", check_out, "write the report to a file");

  auto* scan = app.add_subcommand(
      "scan", "classify the elliptic equilateral motion over a (mu, e) grid");
  std::vector<double> mu_values, e_values, masses_opt;
  std::string scan_out, scan_format = "csv";
  double scan_tol = 1e-12, scan_kappa = 1.0;
  int jobs = 0;
  scan->add_option("--mu", mu_values,
                   "Gascheau constants, realized by the family (1, m, m)");
  scan->add_option("--masses", masses_opt, "explicit mass triple m1 m2 m3")
      ->expected(3);
  scan->add_option("--e", e_values, "eccentricities in [0, 1)")->required();
  scan->add_option("--out", scan_out, "output path (default: stdout)");
  scan->add_option("--format", scan_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  scan->add_option("--tol", scan_tol, "integration tolerance");
  scan->add_option("--kappa", scan_kappa, "potential exponent (must be 1)");
  scan->add_option("--jobs", jobs, "worker threads (default: all cores)");

  auto* analyze = app.add_subcommand(
      "analyze", "analyze a configuration described by a JSON job file");
  std::string analyze_in, analyze_out;
  analyze->add_option("input", analyze_in, "job file, or - for stdin")
      ->required();
  analyze->add_option("--out", analyze_out, "output path (default: stdout)");

  auto* threshold = app.add_subcommand(
      "threshold", "bisect the sign change of the deformation-form "
                   "determinant along a one-parameter mass family");
  std::string family_pattern = "1,m,m", threshold_out,
              threshold_format = "text";
  std::vector<double> range{0.01, 1.0};
  double width = 1e-9;
  threshold->add_option("--family", family_pattern,
                        "family entries: constants or multiples of m");
  threshold->add_option("--range", range, "parameter interval")->expected(2);
  threshold->add_option("--width", width, "target bracket width in mu");
  threshold->add_option("--out", threshold_out, "output path");
  threshold->add_option("--format", threshold_format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*check) {
      int failures = 0;
      const int io = run_with_output(check_out, [&](std::ostream& os) {
        failures = check_closed_forms(os);
      });
      return io != 0 ? io : (failures == 0 ? 0 : 1);
    }

    if (*scan) {
      if (!masses_opt.empty() && !mu_values.empty())
        throw InvalidInput("give either --mu values or one --masses triple");
      ScanSpec spec;
      spec.mu_values = mu_values;
      if (!masses_opt.empty()) {
        VecX m(3);
        m << masses_opt[0], masses_opt[1], masses_opt[2];
        spec.mass_triples.push_back(m);
      }
      spec.e_values = e_values;
      spec.kappa = scan_kappa;
      spec.tol = scan_tol;
      spec.jobs = jobs;
      const std::vector<ScanRow> rows = run_scan(spec);
      return run_with_output(scan_out, [&](std::ostream& os) {
        if (scan_format == "csv")
          write_scan_csv(os, rows);
        else
          write_scan_json(os, rows);
      });
    }

    if (*analyze) {
      const std::string report = analyze_json(read_input(analyze_in));
      return run_with_output(analyze_out,
                             [&](std::ostream& os) { os << report; });
    }

    if (*threshold) {
      const MassFamily family = parse_mass_family(family_pattern);
      const ThresholdResult res =
          threshold_search(family, range[0], range[1], width);
      if (!res.found) {
        std::cerr << "nbody: no determinant sign change on the interval\n";
        return 1;
      }
      return run_with_output(threshold_out, [&](std::ostream& os) {
        if (threshold_format == "json") {
          os << "{\"mu\": " << format17(res.mu_estimate)
             << ", \"mu_low\": " << format17(res.mu_low)
             << ", \"mu_high\": " << format17(res.mu_high)
             << ", \"param_low\": " << format17(res.param_low)
             << ", \"param_high\": " << format17(res.param_high) << "}\n";
        } else {
          os << "family " << family_pattern
             << ": determinant sign change at mu = "
             << format17(res.mu_estimate) << "\n"
             << "bracket [" << format17(res.mu_low) << ", "
             << format17(res.mu_high) << "], width "
             << format17(res.mu_high - res.mu_low) << "\n";
        }
      });
    }
  } catch (const ParseError& e) {
    std::cerr << "nbody: " << e.what() << "\n";
    return 2;
  } catch (const InvalidInput& e) {
    std::cerr << "nbody: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "nbody: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
