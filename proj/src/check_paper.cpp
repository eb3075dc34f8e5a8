#include "nbody/scan.hpp"

#include <cmath>
#include <ostream>

namespace nbody {

namespace {

/// Explicit 6x6 matrix equal to 12 sqrt(3) HU at the unit equilateral
/// triangle, entrywise linear in the masses.
MatX scaled_equilateral_hessian_closed(const VecX& m) {
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

VecX unit_equilateral() {
  const Complex w(-0.5, std::sqrt(3.0) / 2.0);
  VecX t(6);
  t << 1.0, 0.0, w.real(), w.imag(), (w * w).real(), (w * w).imag();
  return t;
}

struct Battery {
  std::ostream& os;
  int failures = 0;

  void check(const std::string& name, bool ok, double measured,
             double bound) {
    os << (ok ? "pass" : "FAIL") << "  " << name << "  (|err| = " << measured
       << ", bound " << bound << ")\n";
    if (!ok) ++failures;
  }
};

void matrix_identity(Battery& b, const VecX& masses) {
  MassSystem sys(masses, 2);
  const HessianOperator H = hessian(sys, Potential{1.0}, unit_equilateral());
  const MatX numeric = 12.0 * std::sqrt(3.0) * H.hu;
  const MatX closed = scaled_equilateral_hessian_closed(masses);
  const double scale = closed.cwiseAbs().maxCoeff();
  const double err = (numeric - closed).cwiseAbs().maxCoeff() / scale;
  b.check("scaled equilateral Hessian matrix, masses (" +
              format17(masses[0]) + ", " + format17(masses[1]) + ", " +
              format17(masses[2]) + ")",
          err <= 1e-12, err, 1e-12);
}

void pair_blocks_identity(Battery& b, const VecX& masses) {
  MassSystem sys(masses, 2);
  const HessianOperator H = hessian(sys, Potential{1.0}, unit_equilateral());
  const double f = 1.0 / (12.0 * std::sqrt(3.0));
  const double m1 = masses[0], m2 = masses[1], m3 = masses[2];
  const double r3 = 3.0 * std::sqrt(3.0);
  MatX B(2, 2), C(2, 2), D(2, 2);
  B << -5, r3, r3, 1;
  B *= f * m1 * m2;
  C << -5, -r3, -r3, 1;
  C *= f * m1 * m3;
  D << 4, 0, 0, -8;
  D *= f * m2 * m3;
  const double scale = std::max({B.cwiseAbs().maxCoeff(),
                                 C.cwiseAbs().maxCoeff(),
                                 D.cwiseAbs().maxCoeff()});
  const double err =
      std::max({(H.d2u.block(0, 2, 2, 2) - B).cwiseAbs().maxCoeff(),
                (H.d2u.block(0, 4, 2, 2) - C).cwiseAbs().maxCoeff(),
                (H.d2u.block(2, 4, 2, 2) - D).cwiseAbs().maxCoeff()}) /
      scale;
  b.check("pairwise second-derivative blocks at the equilateral triangle",
          err <= 1e-12, err, 1e-12);
}

void orthogonality_identity(Battery& b, const VecX& masses) {
  MassSystem sys(masses, 2);
  const VecX S = orthogonal_triangle(masses);
  const VecX T = unit_equilateral();
  const VecX ones = delta_embed(sys, (VecX(2) << 1, 0).finished());
  const double scale = mass_norm(sys, S) * mass_norm(sys, T);
  const double e1 = std::abs(complex_mass_inner(sys, S, T)) / scale;
  const double e2 = std::abs(complex_mass_inner(sys, S, ones)) /
                    (mass_norm(sys, S) * mass_norm(sys, ones));
  b.check("orthogonal triangle is Hermitian-orthogonal to the equilateral "
          "line and centered",
          e1 <= 1e-12 && e2 <= 1e-12, std::max(e1, e2), 1e-12);
}

void distances_identity(Battery& b, const VecX& masses) {
  MassSystem sys(masses, 2);
  const VecX S = orthogonal_triangle(masses);
  double err = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const int k = 3 - i - j;
      const double mi = masses[i], mj = masses[j], mk = masses[k];
      const double expected = mk * mk * (mi * mi + mj * mj + mi * mj);
      const double got = (sys.body(S, j) - sys.body(S, i)).squaredNorm();
      err = std::max(err, std::abs(got - expected) / expected);
    }
  b.check("squared distances of the orthogonal triangle", err <= 1e-12, err,
          1e-12);
}

void form_identities(Battery& b, const VecX& masses) {
  const DeformationForm numeric = deformation_form(masses);
  const DeformationForm closed = deformation_form_closed(masses);
  const double scale = std::max({std::abs(closed.a), std::abs(closed.d),
                                 std::abs(closed.b), 1.0});
  const double err =
      std::max({std::abs(numeric.a - closed.a), std::abs(numeric.b - closed.b),
                std::abs(numeric.c - closed.c),
                std::abs(numeric.d - closed.d)}) /
      scale;
  b.check("deformation-form entries vs closed forms", err <= 1e-10, err,
          1e-10);

  const double m1 = masses[0], m2 = masses[1], m3 = masses[2];
  const double pairwise = m1 * m2 + m1 * m3 + m2 * m3;
  const double tr_expected = 16.0 * m1 * m2 * m3 * (m1 + m2 + m3) * pairwise;
  const double tr_err = std::abs(numeric.trace - tr_expected) / tr_expected;
  b.check("deformation-form trace identity", tr_err <= 1e-10, tr_err, 1e-10);

  const double nu = m1 * m2 * m3 * pairwise;
  const double det_expected =
      nu * nu * (-512.0 * (m1 * m1 + m2 * m2 + m3 * m3) + 704.0 * pairwise);
  const double det_err =
      std::abs(numeric.det - det_expected) / std::max(1.0, std::abs(det_expected));
  b.check("deformation-form determinant identity", det_err <= 1e-10, det_err,
          1e-10);
}

void threshold_identity(Battery& b) {
  // det > 0, mu < 27/8 and lambda_ratio > 8/11 must agree across the range
  bool coherent = true;
  for (int i = 0; i <= 40; ++i) {
    const double m = 0.05 + 0.95 * i / 40.0;
    VecX masses(3);
    masses << 1.0, m, m;
    const GascheauParams g = gascheau(masses);
    const DeformationForm f = deformation_form_closed(masses);
    const bool mu_side = g.mu < 27.0 / 8.0;
    const bool ratio_side = g.lambda_ratio > 8.0 / 11.0;
    const bool det_side = f.det > 0.0;
    if (mu_side != ratio_side || mu_side != det_side) coherent = false;
  }
  b.check("threshold equivalence mu < 27/8 <=> lambda ratio > 8/11 <=> "
          "det > 0",
          coherent, coherent ? 0.0 : 1.0, 0.0);
}

void named_values(Battery& b) {
  VecX equal(3);
  equal << 1, 1, 1;
  const DeformationForm f = deformation_form(equal);
  const double err =
      std::max({std::abs(f.a - 72.0), std::abs(f.d - 72.0), std::abs(f.b),
                std::abs(f.c), std::abs(f.trace - 144.0),
                std::abs(f.det - 5184.0)});
  b.check("equal masses: form = diag(72, 72), trace 144, det 5184",
          err <= 1e-8, err, 1e-8);

  VecX m123(3);
  m123 << 1, 2, 3;
  const GascheauParams g = gascheau(m123);
  const double mu_err = std::abs(g.mu - 36.0 / 11.0);
  b.check("masses (1,2,3): mu = 36/11", mu_err <= 1e-14, mu_err, 1e-14);

  MassSystem sys(m123, 2);
  VecX x0 = equilateral_configuration(sys);
  const CentralConfiguration cc = make_central(sys, Potential{1.0}, x0);
  b.check("masses (1,2,3): equilateral is strongly non-degenerate "
          "(mu < 27/8)",
          cc.strongly_nondegenerate, cc.spectrum_D.minCoeff(), 0.0);
}

}  // namespace

int check_closed_forms(std::ostream& os) {
  Battery b{os};
  const std::vector<VecX> triples = {
      (VecX(3) << 1, 2, 3).finished(),
      (VecX(3) << 1, 1, 1).finished(),
      (VecX(3) << 0.7, 1.3, 2.1).finished(),
  };
  for (const VecX& masses : triples) {
    matrix_identity(b, masses);
    pair_blocks_identity(b, masses);
    orthogonality_identity(b, masses);
    distances_identity(b, masses);
    form_identities(b, masses);
  }
  threshold_identity(b);
  named_values(b);
  os << (b.failures == 0 ? "all checks passed\n"
                         : std::to_string(b.failures) + " check(s) failed\n");
  return b.failures;
}

}  // namespace nbody
