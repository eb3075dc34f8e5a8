#include "nbody/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace nbody {

namespace {

int log_level() {
  static const int level = [] {
    const char* env = std::getenv("NBODY_LOG");
    if (!env) return 1;
    const std::string v(env);
    if (v == "quiet") return 0;
    if (v == "debug") return 2;
    return 1;
  }();
  return level;
}

void log_info(const std::string& msg) {
  if (log_level() >= 2) std::fputs(("nbody: " + msg + "\n").c_str(), stderr);
}

}  // namespace

std::string format17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

VecX masses_for_mu(double mu) {
  if (mu < 3.0)
    throw InvalidInput("the Gascheau constant of three positive masses "
                       "is at least 3");
  const double m = 1.0 / (mu - 2.0 + std::sqrt(mu * (mu - 3.0)));
  VecX masses(3);
  masses << 1.0, m, m;
  return masses;
}

std::vector<ScanRow> run_scan(const ScanSpec& spec) {
  if (spec.kappa != 1.0)
    throw InvalidInput("scan covers the gravitational case (kappa = 1)");
  if (spec.e_values.empty())
    throw InvalidInput("scan needs at least one eccentricity");
  for (double e : spec.e_values)
    if (!(e >= 0.0 && e < 1.0))
      throw InvalidInput("eccentricities must lie in [0, 1)");

  std::vector<VecX> triples = spec.mass_triples;
  if (triples.empty()) {
    if (spec.mu_values.empty())
      throw InvalidInput("scan needs mu values or explicit mass triples");
    triples.reserve(spec.mu_values.size());
    for (double mu : spec.mu_values) triples.push_back(masses_for_mu(mu));
  }

  struct Cell {
    VecX masses;
    double e;
  };
  std::vector<Cell> cells;
  for (const VecX& masses : triples)
    for (double e : spec.e_values) cells.push_back({masses, e});

  std::vector<ScanRow> rows(cells.size());
  std::atomic<size_t> cursor{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const size_t i = cursor.fetch_add(1);
      if (i >= cells.size() || failed.load()) return;
      try {
        const Cell& cell = cells[i];
        MassSystem sys(cell.masses, 2);
        Potential U{spec.kappa};
        ScanRow row;
        row.masses = cell.masses;
        row.mu = gascheau(cell.masses).mu;
        row.e = cell.e;
        const DeformationForm form = deformation_form(cell.masses);
        row.detAD = form.det;
        row.trAD = form.trace;
        VecX x0 = equilateral_configuration(sys);
        x0 /= mass_norm(sys, x0);
        const HomographicMotion motion = make_homographic(sys, U, x0, cell.e);
        const SimilarityFrame frame = build_subspaces(sys, x0);
        const MonodromyReport rep = monodromy(motion, frame.D, spec.tol);
        row.multipliers = rep.multipliers;
        row.classification = to_string(rep.classification);
        row.min_margin = rep.min_margin;
        rows[i] = std::move(row);
      } catch (...) {
        const std::scoped_lock lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };

  int jobs = spec.jobs > 0 ? spec.jobs
                           : int(std::thread::hardware_concurrency());
  jobs = std::max(1, std::min<int>(jobs, int(cells.size())));
  log_info("scan: " + std::to_string(cells.size()) + " cells on " +
           std::to_string(jobs) + " threads");
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
  return rows;
}

void write_scan_csv(std::ostream& os, const std::vector<ScanRow>& rows) {
  os << "mu,e,m1,m2,m3,detAD,trAD,mult_re_1,mult_re_2,mult_re_3,mult_re_4,"
        "mult_im_1,mult_im_2,mult_im_3,mult_im_4,class,min_margin\n";
  for (const ScanRow& r : rows) {
    os << format17(r.mu) << ',' << format17(r.e) << ',' << format17(r.masses[0])
       << ',' << format17(r.masses[1]) << ',' << format17(r.masses[2]) << ','
       << format17(r.detAD) << ',' << format17(r.trAD);
    for (int i = 0; i < 4; ++i) os << ',' << format17(r.multipliers[i].real());
    for (int i = 0; i < 4; ++i) os << ',' << format17(r.multipliers[i].imag());
    os << ',' << r.classification << ',' << format17(r.min_margin) << '\n';
  }
}

VecX MassFamily::masses(double m) const {
  if (m <= 0.0) throw InvalidInput("family parameter must be positive");
  VecX out(3);
  for (int i = 0; i < 3; ++i) out[i] = scaled[size_t(i)] ? coeff[size_t(i)] * m
                                                         : coeff[size_t(i)];
  return out;
}

MassFamily parse_mass_family(const std::string& pattern) {
  MassFamily fam{};
  std::stringstream ss(pattern);
  std::string item;
  int i = 0;
  while (std::getline(ss, item, ',')) {
    if (i >= 3) throw ParseError("mass family needs exactly three entries");
    // strip spaces
    item.erase(std::remove(item.begin(), item.end(), ' '), item.end());
    if (item.empty()) throw ParseError("empty mass family entry");
    bool scaled = false;
    if (item.back() == 'm') {
      scaled = true;
      item.pop_back();
      if (!item.empty() && item.back() == '*') item.pop_back();
      if (item.empty()) item = "1";
    }
    size_t used = 0;
    double c;
    try {
      c = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ParseError("cannot parse mass family entry '" + item + "'");
    }
    if (used != item.size() || c <= 0.0)
      throw ParseError("mass family entries must be positive numbers or "
                       "positive multiples of m");
    fam.coeff[size_t(i)] = c;
    fam.scaled[size_t(i)] = scaled;
    ++i;
  }
  if (i != 3) throw ParseError("mass family needs exactly three entries");
  if (!(fam.scaled[0] || fam.scaled[1] || fam.scaled[2]))
    throw ParseError("mass family must depend on m");
  return fam;
}

ThresholdResult threshold_search(const MassFamily& family, double param_lo,
                                 double param_hi, double mu_width) {
  // bisect the numerically assembled form, not its closed expression
  auto det_at = [&](double m) {
    return deformation_form(family.masses(m)).det;
  };
  auto mu_at = [&](double m) { return gascheau(family.masses(m)).mu; };

  double lo = param_lo, hi = param_hi;
  double det_lo = det_at(lo), det_hi = det_at(hi);
  ThresholdResult res;
  if (det_lo == 0.0 || det_hi == 0.0 || (det_lo > 0.0) == (det_hi > 0.0))
    return res;  // not found
  for (int it = 0; it < 200; ++it) {
    if (std::abs(mu_at(hi) - mu_at(lo)) <= mu_width) break;
    const double mid = 0.5 * (lo + hi);
    const double det_mid = det_at(mid);
    if (det_mid == 0.0) {
      lo = hi = mid;
      break;
    }
    if ((det_mid > 0.0) == (det_lo > 0.0)) {
      lo = mid;
      det_lo = det_mid;
    } else {
      hi = mid;
      det_hi = det_mid;
    }
  }
  res.found = true;
  res.param_low = lo;
  res.param_high = hi;
  res.mu_low = std::min(mu_at(lo), mu_at(hi));
  res.mu_high = std::max(mu_at(lo), mu_at(hi));
  res.mu_estimate = 0.5 * (res.mu_low + res.mu_high);
  return res;
}

}  // namespace nbody
