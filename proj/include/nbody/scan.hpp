#pragma once

#include "nbody/linstab.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace nbody {

/// Mass triple (1, m, m) realizing the Gascheau constant mu >= 3, with the
/// branch m <= 1: m = 1 / (mu - 2 + sqrt(mu^2 - 3 mu)).
VecX masses_for_mu(double mu);

/// Grid job over the (mu, e) rectangle. When mass_triples is non-empty it
/// overrides the mu parameterization.
struct ScanSpec {
  std::vector<double> mu_values;
  std::vector<VecX> mass_triples;
  std::vector<double> e_values;
  double kappa = 1.0;  // only the gravitational case is scannable
  double tol = 1e-12;
  int jobs = 0;  // 0: all hardware threads
};

struct ScanRow {
  double mu = 0.0;
  double e = 0.0;
  VecX masses;
  double detAD = 0.0;
  double trAD = 0.0;
  CVecX multipliers;  // 4 deformation-block multipliers, sorted by (Re, Im)
  std::string classification;
  double min_margin = 0.0;
};

/// Stability of the elliptic equilateral motion per grid cell. Cells run in
/// parallel; rows come back in deterministic mu-major order.
std::vector<ScanRow> run_scan(const ScanSpec& spec);

void write_scan_csv(std::ostream& os, const std::vector<ScanRow>& rows);
void write_scan_json(std::ostream& os, const std::vector<ScanRow>& rows);

/// One-parameter mass family: each entry is either a positive constant or
/// a positive constant times the literal parameter 'm' (e.g. "1,m,2m").
struct MassFamily {
  std::array<double, 3> coeff;
  std::array<bool, 3> scaled;  // entry = coeff * m when true
  VecX masses(double m) const;
};

MassFamily parse_mass_family(const std::string& pattern);

struct ThresholdResult {
  bool found = false;
  double param_low = 0.0, param_high = 0.0;
  double mu_low = 0.0, mu_high = 0.0;  // det sign change bracketed in mu
  double mu_estimate = 0.0;
};

/// Bisect the sign change of the deformation-form determinant along the
/// family, parameter in [param_lo, param_hi], until the bracket in mu is
/// narrower than mu_width.
ThresholdResult threshold_search(const MassFamily& family, double param_lo,
                                 double param_hi, double mu_width = 1e-9);

/// Regression battery for the closed-form equilateral identities. Writes
/// one line per check; returns the number of failures.
int check_closed_forms(std::ostream& os);

/// Analyze a JSON job (see README for the schema) and return a JSON report.
std::string analyze_json(const std::string& input_text);

/// %.17g rendering used by the CSV writer.
std::string format17(double v);

}  // namespace nbody
