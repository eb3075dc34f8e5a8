// Acceptance suite: every criterion prints one pass/fail line with its
// measured figure and tolerance; the process exits nonzero if any fails.

#include "nbody/linstab.hpp"
#include "nbody/scan.hpp"
#include "support.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

using namespace nbody;
using namespace nbody::testing;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& name, bool ok,
               const std::string& detail, double seconds) {
  std::printf("%s  criterion %d: %s  [%s, %.2fs]\n", ok ? "PASS" : "FAIL",
              number, name.c_str(), detail.c_str(), seconds);
  if (!ok) ++g_failures;
}

double run_timed(const std::function<bool()>& body, bool& ok) {
  const auto start = std::chrono::steady_clock::now();
  ok = body();
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(stop - start).count();
}

VecX unit_lagrange_config(const MassSystem& sys) {
  VecX x0 = equilateral_configuration(sys);
  return x0 / mass_norm(sys, x0);
}

MatX scaled_hessian_closed(const VecX& m) {
  const double m1 = m[0], m2 = m[1], m3 = m[2];
  const double s = 3.0 * std::sqrt(3.0);
  MatX A(6, 6);
  A << 5 * (m2 + m3), -s * (m2 - m3), -5 * m2, s * m2, -5 * m3, -s * m3,
      -s * (m2 - m3), -(m2 + m3), s * m2, m2, -s * m3, m3,
      -5 * m1, s * m1, 5 * m1 - 4 * m3, -s * m1, 4 * m3, 0,
      s * m1, m1, -s * m1, -m1 + 8 * m3, 0, -8 * m3,
      -5 * m1, -s * m1, 4 * m2, 0, 5 * m1 - 4 * m2, s * m1,
      -s * m1, m1, 0, -8 * m2, s * m1, -m1 + 8 * m2;
  return A;
}

// 1. entrywise match of 12 sqrt(3) HU at the unit equilateral triangle
// with its closed form, masses (1,2,3), relative 1e-12
void criterion_1() {
  bool ok;
  std::string detail;
  const double secs = run_timed([&] {
    VecX masses(3);
    masses << 1, 2, 3;
    MassSystem sys(masses, 2);
    const HessianOperator H =
        hessian(sys, Potential{1.0}, unit_equilateral_config());
    const MatX numeric = 12.0 * std::sqrt(3.0) * H.hu;
    const MatX closed = scaled_hessian_closed(masses);
    const double err = (numeric - closed).cwiseAbs().maxCoeff() /
                       closed.cwiseAbs().maxCoeff();
    detail = "entrywise rel err " + format17(err);
    return err <= 1e-12;
  }, ok);
  criterion(1, "closed-form equilateral Hessian matrix", ok, detail, secs);
  if (secs >= 1.0) criterion(1, "runtime under 1 s", false, "", secs);
}

// 2. numeric deformation form vs closed forms, 100 random triples, 1e-10
void criterion_2() {
  bool ok;
  std::string detail;
  const double secs = run_timed([&] {
    std::mt19937_64 rng(20160807);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const VecX masses = random_masses(rng);
      const DeformationForm f = deformation_form(masses);  // self-checked
      const DeformationForm c = deformation_form_closed(masses);
      const double scale = std::max({std::abs(c.a), std::abs(c.d), 1.0});
      worst = std::max(
          {worst, std::abs(f.a - c.a) / scale, std::abs(f.b - c.b) / scale,
           std::abs(f.c - c.c) / scale, std::abs(f.d - c.d) / scale});
      const double m1 = masses[0], m2 = masses[1], m3 = masses[2];
      const double tr_closed = 16.0 * m1 * m2 * m3 * (m1 + m2 + m3) *
                               (m1 * m2 + m1 * m3 + m2 * m3);
      worst = std::max(worst,
                       std::abs(f.trace - tr_closed) / std::abs(tr_closed));
    }
    detail = "worst rel err " + format17(worst) + " over 100 triples";
    return worst <= 1e-10;
  }, ok);
  criterion(2, "deformation form closed expressions", ok, detail, secs);
  if (secs >= 5.0) criterion(2, "runtime under 5 s", false, "", secs);
}

// 3. threshold bisection along two families brackets mu = 27/8 within 1e-8
void criterion_3() {
  bool ok;
  std::string detail;
  const double secs = run_timed([&] {
    bool good = true;
    detail.clear();
    for (const char* pattern : {"1,m,m", "1,m,2m"}) {
      const ThresholdResult res =
          threshold_search(parse_mass_family(pattern), 0.01, 1.0, 1e-9);
      if (!res.found) return false;
      const double err = std::abs(res.mu_estimate - 27.0 / 8.0);
      detail += std::string(pattern) + ": |mu* - 27/8| = " + format17(err) +
                "  ";
      good = good && err <= 1e-8 && (res.mu_high - res.mu_low) <= 1e-8;
    }
    return good;
  }, ok);
  criterion(3, "determinant sign change at mu = 27/8", ok, detail, secs);
  if (secs >= 5.0) criterion(3, "runtime under 5 s", false, "", secs);
}

// 4. hyperbolic deformation block for mu in {3.0, 3.2, 3.37} and
// e in {0, 0.2, 0.5, 0.8}; every multiplier margin above 1e-4
void criterion_4() {
  bool ok;
  std::string detail;
  const double secs = run_timed([&] {
    double worst_margin = std::numeric_limits<double>::infinity();
    for (double mu : {3.0, 3.2, 3.37}) {
      const VecX masses = masses_for_mu(mu);
      MassSystem sys(masses, 2);
      Potential U{1.0};
      const VecX x0 = unit_lagrange_config(sys);
      const SimilarityFrame frame = build_subspaces(sys, x0);
      for (double e : {0.0, 0.2, 0.5, 0.8}) {
        const HomographicMotion motion = make_homographic(sys, U, x0, e);
        const MonodromyReport rep = monodromy(motion, frame.D, 1e-12);
        if (rep.classification != FloquetClass::Hyperbolic) return false;
        worst_margin = std::min(worst_margin, rep.min_margin);
      }
    }
    detail = "smallest | |mult| - 1 | = " + format17(worst_margin);
    return worst_margin > 1e-4;
  }, ok);
  criterion(4, "instability of eccentric motions for mu < 27/8", ok, detail,
            secs);
  if (secs >= 120.0) criterion(4, "runtime under 2 min", false, "", secs);
}

// 5. circular case: multipliers on the circle for mu = 30 (within 1e-6),
// off it for mu = 20 (margin above 1e-3); stability transition bisected
// to 27 +- 0.01
void criterion_5() {
  bool ok;
  std::string detail;
  const double secs = run_timed([&] {
    auto d_report = [](double mu) {
      const VecX masses = masses_for_mu(mu);
      MassSystem sys(masses, 2);
      Potential U{1.0};
      const VecX x0 = unit_lagrange_config(sys);
      const SimilarityFrame frame = build_subspaces(sys, x0);
      const HomographicMotion motion = make_homographic(sys, U, x0, 0.0);
      return monodromy(motion, frame.D, 1e-12);
    };
    const MonodromyReport stable = d_report(30.0);
    const MonodromyReport unstable = d_report(20.0);
    const bool endpoints_ok =
        stable.margins.maxCoeff() <= 1e-6 &&
        unstable.margins.maxCoeff() > 1e-3;

    double lo = 20.0, hi = 30.0;  // unstable .. stable
    while (hi - lo > 0.005) {
      const double mid = 0.5 * (lo + hi);
      if (d_report(mid).margins.maxCoeff() <= 1e-6)
        hi = mid;
      else
        lo = mid;
    }
    const double transition = 0.5 * (lo + hi);
    detail = "stable spread " + format17(stable.margins.maxCoeff()) +
             ", unstable margin " + format17(unstable.margins.maxCoeff()) +
             ", transition at mu = " + format17(transition);
    return endpoints_ok && std::abs(transition - 27.0) <= 0.01;
  }, ok);
  criterion(5, "circular stability boundary at mu = 27", ok, detail, secs);
  if (secs >= 120.0) criterion(5, "runtime under 2 min", false, "", secs);
}

// 6. splitting property over four invariant families, 100 random
// configurations each, coupling below 1e-10, plus one non-invariant
// negative control per family above 1e-3
void criterion_6() {
  bool ok;
  std::string detail;
  const double secs = run_timed([&] {
    std::mt19937_64 rng(19520613);
    Potential U{1.0};
    double worst_coupling = 0.0;
    double weakest_control = std::numeric_limits<double>::infinity();

    auto control = [&](const MassSystem& sys, const VecX& x, int dim) {
      // a random subspace through x is generically not invariant
      MatX cand(sys.dof(), dim);
      cand.col(0) = x;
      for (int j = 1; j < dim; ++j) cand.col(j) = random_vector(sys.dof(), rng);
      const Subspace v{SubspaceLabel::Custom, mass_orthonormalize(sys, cand)};
      weakest_control = std::min(weakest_control,
                                 splitting_verify(sys, U, x, v));
    };

    {  // centered configurations, d = 2
      MassSystem sys((VecX(4) << 1.0, 0.7, 1.4, 2.1).finished(), 2);
      const Subspace e0 = centered_subspace(sys);
      for (int t = 0; t < 100; ++t) {
        const VecX x = centered(sys, random_configuration(sys, rng));
        worst_coupling =
            std::max(worst_coupling, splitting_verify(sys, U, x, e0));
      }
      control(sys, centered(sys, random_configuration(sys, rng)), 3);
    }
    {  // coplanar configurations, d = 3
      MassSystem sys((VecX(3) << 1.0, 1.6, 0.8).finished(), 3);
      const Subspace plane = coplanar_subspace(sys, Vec3::UnitZ());
      int done = 0;
      while (done < 100) {
        VecX x = random_configuration(sys, rng);
        for (int i = 0; i < sys.count(); ++i) x[3 * i + 2] = 0.0;
        if (min_pair_distance(sys, x) < 0.2) continue;
        worst_coupling =
            std::max(worst_coupling, splitting_verify(sys, U, x, plane));
        ++done;
      }
      VecX x = random_configuration(sys, rng);
      for (int i = 0; i < sys.count(); ++i) x[3 * i + 2] = 0.0;
      control(sys, x, 4);
    }
    {  // similarity plane of the equilateral configuration
      MassSystem sys((VecX(3) << 1.0, 0.5, 1.9).finished(), 2);
      const VecX x0 = unit_lagrange_config(sys);
      const SimilarityFrame frame = build_subspaces(sys, x0);
      Subspace sim;
      sim.basis = MatX(sys.dof(), 4);
      sim.basis << frame.delta.basis, frame.K.basis;
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      for (int t = 0; t < 100; ++t) {
        const Complex z(1.2 + u(rng), u(rng));
        const VecX x =
            complex_scale(sys, z, x0) +
            delta_embed(sys, (VecX(2) << u(rng), u(rng)).finished());
        worst_coupling =
            std::max(worst_coupling, splitting_verify(sys, U, x, sim));
      }
      control(sys, complex_scale(sys, Complex(1.4, 0.3), x0), 4);
    }
    {  // isosceles configurations, d = 3
      MassSystem sys((VecX(3) << 1.0, 1.0, 1.3).finished(), 3);
      const Subspace iso = isosceles_subspace(sys, Vec3::UnitZ());
      std::uniform_real_distribution<double> u(0.4, 1.2);
      for (int t = 0; t < 100; ++t) {
        MatX pos(3, 3);
        const double half = u(rng), zp = u(rng) - 0.8, z3 = u(rng);
        pos << -half, 0, zp, half, 0, zp, 0, 0, z3;
        const VecX x = centered(sys, flatten(sys, pos));
        if (min_pair_distance(sys, x) < 0.2) continue;
        worst_coupling =
            std::max(worst_coupling, splitting_verify(sys, U, x, iso));
      }
      MatX pos(3, 3);
      pos << -0.8, 0, 0, 0.8, 0, 0, 0, 0, 0.9;
      control(sys, centered(sys, flatten(sys, pos)), 3);
    }

    detail = "worst coupling " + format17(worst_coupling) +
             ", weakest negative control " + format17(weakest_control);
    return worst_coupling <= 1e-10 && weakest_control > 1e-3;
  }, ok);
  criterion(6, "splitting of the Hessian over invariant subspaces", ok,
            detail, secs);
  if (secs >= 10.0) criterion(6, "runtime under 10 s", false, "", secs);
}

// 7. strong-minimizer flag coincides with strong non-degeneracy on 50
// random triples; the two spectra differ by exactly U(a), within 1e-10
void criterion_7() {
  bool ok;
  std::string detail;
  const double secs = run_timed([&] {
    std::mt19937_64 rng(18090128);
    Potential U{1.0};
    double worst_shift = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      VecX masses = random_masses(rng);
      if (trial % 2 == 0) masses[0] *= 9.0;  // sample both verdicts
      MassSystem sys(masses, 2);
      const VecX x0 = unit_lagrange_config(sys);
      const CentralConfiguration cc = make_central(sys, U, x0);
      const SpectrumFlag snd = strong_nondegeneracy(cc);
      const SpectrumFlag sm = strong_minimizer(cc);
      if (snd.flag != sm.flag) return false;
      const double u = value(sys, U, x0);
      for (int i = 0; i < snd.spectrum.size(); ++i)
        worst_shift = std::max(
            worst_shift, std::abs(sm.spectrum[i] - snd.spectrum[i] - u));
    }
    detail = "flags agree on 50 triples, worst spectral shift error " +
             format17(worst_shift);
    return worst_shift <= 1e-10;
  }, ok);
  criterion(7, "strong minimizer coincides with strong non-degeneracy", ok,
            detail, secs);
}

// 8. comparison bound along the e = 0.3 equal-mass motion with
// alpha = k^{-3} mu for 20 random initial velocities, and equality to
// 1e-10 for the constant isotropic control
void criterion_8() {
  bool ok;
  std::string detail;
  const double secs = run_timed([&] {
    MassSystem sys((VecX(3) << 1, 1, 1).finished(), 2);
    Potential U{1.0};
    const VecX x0 = unit_lagrange_config(sys);
    const HomographicMotion motion = make_homographic(sys, U, x0, 0.3);
    const SimilarityFrame frame = build_subspaces(sys, x0);
    const HessianOperator H = hessian(sys, U, x0);
    Eigen::SelfAdjointEigenSolver<MatX> eig(
        restrict_hessian(sys, H, frame.D), Eigen::EigenvaluesOnly);
    const double k = motion.orbit.max_radius();
    const double alpha = eig.eigenvalues().minCoeff() / (k * k * k);
    const ComparisonReport rep =
        comparison_check(block_matrix_source(motion, frame.D), frame.D.dim(),
                         alpha, motion.period(), 20, 1e-12);
    if (!rep.pass) return false;

    // equality control: B = alpha Id integrated directly
    const double sq = std::sqrt(alpha);
    auto rhs = [alpha](double, const VecX& y, VecX& dy) {
      dy[0] = y[1];
      dy[1] = alpha * y[0];
    };
    VecX y0(2);
    y0 << 0.0, 1.0;
    double worst_eq = 0.0;
    const int n = 32;
    std::vector<double> times(n + 1);
    for (int i = 0; i <= n; ++i) times[size_t(i)] = motion.period() * i / n;
    const auto states = integrate_sampled(rhs, times, y0, {});
    for (int i = 0; i <= n; ++i) {
      const double exact = std::sinh(sq * times[size_t(i)]) / sq;
      worst_eq = std::max(worst_eq,
                          std::abs(states[size_t(i)][0] - exact));
    }
    detail = "worst slack " + format17(rep.worst_slack) +
             ", control equality error " + format17(worst_eq);
    return worst_eq <= 1e-10;
  }, ok);
  criterion(8, "growth bound for deformation Jacobi fields", ok, detail,
            secs);
  if (secs >= 30.0) criterion(8, "runtime under 30 s", false, "", secs);
}

// 9. numerical hygiene: derivative checks against finite differences on
// 100 random configurations, multiplier stability under tolerance halving,
// reciprocal pairing and unit product on every report
void criterion_9() {
  bool ok;
  std::string detail;
  const double secs = run_timed([&] {
    std::mt19937_64 rng(17070404);
    double worst_fd = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      MassSystem sys(random_masses(rng), 2);
      Potential U{trial % 2 == 0 ? 1.0 : 2.0};
      const VecX x = random_configuration(sys, rng);
      const double h = 1e-5 * mass_norm(sys, x);
      const VecX g = gradient(sys, U, x);
      worst_fd = std::max(worst_fd,
                          (g - fd_gradient(sys, U, x, h)).cwiseAbs()
                              .maxCoeff());
      const VecX u = random_unit(sys, rng);
      const HessianOperator H = hessian(sys, U, x);
      worst_fd = std::max(worst_fd,
                          (H.apply(u) - fd_hessian_apply(sys, U, x, u, h))
                              .cwiseAbs()
                              .maxCoeff());
    }
    if (worst_fd > 1e-5) {
      detail = "finite-difference deviation " + format17(worst_fd);
      return false;
    }

    MassSystem sys((VecX(3) << 1, 0.4, 0.4).finished(), 2);
    Potential U{1.0};
    const VecX x0 = unit_lagrange_config(sys);
    const SimilarityFrame frame = build_subspaces(sys, x0);
    double worst_drift = 0.0, worst_pairing = 0.0, worst_product = 0.0;
    for (double e : {0.0, 0.4, 0.7}) {
      const HomographicMotion motion = make_homographic(sys, U, x0, e);
      const MonodromyReport coarse = monodromy(motion, frame.D, 1e-12);
      const MonodromyReport fine = monodromy(motion, frame.D, 5e-13);
      std::vector<Complex> pool(fine.multipliers.data(),
                                fine.multipliers.data() + 4);
      for (long i = 0; i < 4; ++i) {
        size_t best = 0;
        double bd = std::numeric_limits<double>::infinity();
        for (size_t j = 0; j < pool.size(); ++j)
          if (std::abs(coarse.multipliers[i] - pool[j]) < bd) {
            bd = std::abs(coarse.multipliers[i] - pool[j]);
            best = j;
          }
        worst_drift = std::max(worst_drift, bd);
        pool.erase(pool.begin() + long(best));
      }
      worst_pairing = std::max({worst_pairing, coarse.pairing_error,
                                fine.pairing_error});
      worst_product = std::max({worst_product, coarse.product_error,
                                fine.product_error});
    }
    detail = "fd " + format17(worst_fd) + ", multiplier drift " +
             format17(worst_drift) + ", pairing " + format17(worst_pairing) +
             ", product " + format17(worst_product);
    return worst_drift < 1e-7 && worst_pairing <= 1e-8 &&
           worst_product <= 1e-8;
  }, ok);
  criterion(9, "numerical hygiene of derivatives and multipliers", ok,
            detail, secs);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  if (g_failures == 0)
    std::printf("acceptance: all criteria passed\n");
  else
    std::printf("acceptance: %d criterion check(s) FAILED\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
