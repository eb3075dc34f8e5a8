#include "nbody/linstab.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace nbody {

const char* to_string(FloquetClass c) {
  switch (c) {
    case FloquetClass::Hyperbolic: return "hyperbolic";
    case FloquetClass::Elliptic: return "elliptic";
    case FloquetClass::Mixed: return "mixed";
    case FloquetClass::Degenerate: return "degenerate";
  }
  return "?";
}

BlockMatrixFn block_matrix_source(const HomographicMotion& motion,
                                  const Subspace& block) {
  if (gram_deviation(motion.sys, block.basis) > 1e-10)
    throw InvalidSubspace("block basis is not mass-orthonormal");
  // capture by value: the source must survive the caller's frame
  return [motion, basis = block.basis](double t) {
    const VecX x = complex_scale(motion.sys, kepler_position(motion.orbit, t),
                                 motion.x0);
    const HessianOperator H = hessian(motion.sys, motion.pot, x);
    MatX b = basis.transpose() * H.d2u * basis;
    return MatX(0.5 * (b + b.transpose()));
  };
}

std::vector<JacobiSample> jacobi_integrate(const HomographicMotion& motion,
                                           const Subspace& block,
                                           const VecX& J0, const VecX& Jdot0,
                                           const std::vector<double>& times,
                                           double tol) {
  const MassSystem& sys = motion.sys;
  const double scale = std::max({mass_norm(sys, J0), mass_norm(sys, Jdot0),
                                 1e-300});
  if (mass_norm(sys, J0 - project(sys, J0, block)) > 1e-10 * scale ||
      mass_norm(sys, Jdot0 - project(sys, Jdot0, block)) > 1e-10 * scale)
    throw InvalidInput("jacobi_integrate: initial data outside the block");

  const int k = block.dim();
  const BlockMatrixFn B = block_matrix_source(motion, block);
  VecX y0(2 * k);
  y0 << block_coordinates(sys, J0, block),
      block_coordinates(sys, Jdot0, block);
  auto rhs = [&B, k](double t, const VecX& y, VecX& dy) {
    dy.head(k) = y.tail(k);
    dy.tail(k) = B(t) * y.head(k);
  };
  OdeOptions opt;
  opt.rel_tol = tol;
  opt.abs_tol = tol;
  const std::vector<VecX> states = integrate_sampled(rhs, times, y0, opt);
  std::vector<JacobiSample> out;
  out.reserve(states.size());
  for (size_t i = 0; i < states.size(); ++i)
    out.push_back({times[i], block.basis * states[i].head(k),
                   block.basis * states[i].tail(k)});
  return out;
}

namespace {

CVecX sorted_multipliers(const MatX& monodromy) {
  Eigen::EigenSolver<MatX> eig(monodromy);
  CVecX mult = eig.eigenvalues();
  std::vector<Complex> v(mult.data(), mult.data() + mult.size());
  std::sort(v.begin(), v.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return Eigen::Map<const CVecX>(v.data(), long(v.size()));
}

/// geometric multiplicity of near-coincident eigenvalue clusters matches
/// their size
bool semisimple(const MatX& m, const CVecX& mult, double tol) {
  const long n = mult.size();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  std::vector<bool> seen(size_t(n), false);
  for (long i = 0; i < n; ++i) {
    if (seen[size_t(i)]) continue;
    std::vector<long> cluster{i};
    for (long j = i + 1; j < n; ++j)
      if (std::abs(mult[j] - mult[i]) <= tol) {
        cluster.push_back(j);
        seen[size_t(j)] = true;
      }
    if (cluster.size() == 1) continue;
    Complex center(0, 0);
    for (long j : cluster) center += mult[j];
    center /= double(cluster.size());
    Eigen::MatrixXcd shifted = m.cast<Complex>();
    shifted.diagonal().array() -= center;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(shifted);
    const double cutoff = 10.0 * tol * scale;
    long null_dim = 0;
    for (long j = 0; j < n; ++j)
      if (svd.singularValues()[j] <= cutoff) ++null_dim;
    if (null_dim < long(cluster.size())) return false;
  }
  return true;
}

FloquetClass classify(const CVecX& mult, const VecX& margins, const MatX& m,
                      double circle_tol, int forced_units) {
  const long n = mult.size();
  bool all_off = true, all_on = true;
  int units_at_one = 0;
  for (long i = 0; i < n; ++i) {
    if (margins[i] <= circle_tol) all_off = false;
    if (margins[i] > circle_tol) all_on = false;
    if (std::abs(mult[i] - Complex(1.0, 0.0)) <= circle_tol) ++units_at_one;
  }
  if (all_off) return FloquetClass::Hyperbolic;
  if (units_at_one > forced_units) return FloquetClass::Degenerate;
  if (all_on) {
    // ignore the structural cluster at +1 when judging semisimplicity
    if (units_at_one == n) return FloquetClass::Degenerate;
    return semisimple(m, mult, circle_tol) ? FloquetClass::Elliptic
                                           : FloquetClass::Degenerate;
  }
  return FloquetClass::Mixed;
}

}  // namespace

MonodromyReport monodromy_of(const BlockMatrixFn& B, int block_dim,
                             double period, double tol, double circle_tol,
                             int forced_units) {
  if (period <= 0.0) throw InvalidInput("monodromy needs a positive period");
  const int k = block_dim;
  const int n = 2 * k;
  // integrate the full fundamental matrix: columns share the B(t) evaluations
  VecX y0(n * n);
  Eigen::Map<MatX>(y0.data(), n, n) = MatX::Identity(n, n);
  auto rhs = [&B, k, n](double t, const VecX& y, VecX& dy) {
    const Eigen::Map<const MatX> phi(y.data(), n, n);
    Eigen::Map<MatX> dphi(dy.data(), n, n);
    const MatX b = B(t);
    dphi.topRows(k) = phi.bottomRows(k);
    dphi.bottomRows(k) = b * phi.topRows(k);
  };
  OdeOptions opt;
  opt.rel_tol = tol;
  opt.abs_tol = tol;
  Dop853 solver(rhs, 0.0, y0, opt);
  solver.advance_to(period);

  MonodromyReport rep;
  rep.matrix = Eigen::Map<const MatX>(solver.state().data(), n, n);
  rep.multipliers = sorted_multipliers(rep.matrix);
  rep.margins.resize(n);
  rep.dim_stable = rep.dim_unstable = rep.dim_center = 0;
  Complex prod(1.0, 0.0);
  for (int i = 0; i < n; ++i) {
    const double r = std::abs(rep.multipliers[i]);
    rep.margins[i] = std::abs(r - 1.0);
    prod *= rep.multipliers[i];
    if (rep.margins[i] <= circle_tol)
      ++rep.dim_center;
    else if (r < 1.0)
      ++rep.dim_stable;
    else
      ++rep.dim_unstable;
  }
  rep.min_margin = rep.margins.minCoeff();
  rep.forced_units = forced_units;
  rep.product_error = std::abs(prod - Complex(1.0, 0.0));
  // reciprocal pairing: greedily match each multiplier with its inverse
  std::vector<bool> used(size_t(n), false);
  double pairing = 0.0;
  for (int i = 0; i < n; ++i) {
    if (used[size_t(i)]) continue;
    double best = std::numeric_limits<double>::infinity();
    int best_j = -1;
    for (int j = i; j < n; ++j) {
      if (used[size_t(j)]) continue;
      const double dev = std::abs(rep.multipliers[i] * rep.multipliers[j] -
                                  Complex(1.0, 0.0));
      if (dev < best) {
        best = dev;
        best_j = j;
      }
    }
    used[size_t(i)] = used[size_t(best_j)] = true;
    pairing = std::max(pairing, best);
  }
  rep.pairing_error = pairing;
  rep.classification =
      classify(rep.multipliers, rep.margins, rep.matrix, circle_tol,
               forced_units);
  return rep;
}

MonodromyReport monodromy(const HomographicMotion& motion,
                          const Subspace& block, double tol,
                          double circle_tol) {
  int forced = 0;
  if (block.label == SubspaceLabel::Delta || block.label == SubspaceLabel::K)
    forced = 2;
  if (block.label == SubspaceLabel::Full) forced = 4;
  return monodromy_of(block_matrix_source(motion, block), block.dim(),
                      motion.period(), tol, circle_tol, forced);
}

double splitting_verify(const MassSystem& sys, const Potential& U,
                        const VecX& x, const Subspace& V) {
  const double scale = mass_norm(sys, x);
  if (mass_norm(sys, x - project(sys, x, V)) > 1e-10 * scale)
    throw InvalidInput("splitting_verify: configuration not inside V");
  const Subspace W = complement(sys, V);
  const HessianOperator H = hessian(sys, U, x);
  // cross blocks <HU v_i, w_j> in mass-orthonormal bases; the coupling norm
  // is their spectral norm
  const MatX cross_vw = V.basis.transpose() * H.d2u * W.basis;
  const MatX cross_wv = W.basis.transpose() * H.d2u * V.basis;
  const double c1 = cross_vw.jacobiSvd().singularValues()[0];
  const double c2 = cross_wv.jacobiSvd().singularValues()[0];
  return std::max(c1, c2) / operator_norm(sys, H);
}

ComparisonReport comparison_check(const BlockMatrixFn& B, int dim,
                                  double alpha, double t_end, int trials,
                                  double tol, unsigned long seed) {
  if (alpha <= 0.0) throw InvalidInput("comparison bound needs alpha > 0");
  const int n_samples = 64;
  std::vector<double> times(size_t(n_samples) + 1);
  for (int i = 0; i <= n_samples; ++i) times[size_t(i)] = t_end * i / n_samples;

  ComparisonReport rep;
  rep.min_eig_B = std::numeric_limits<double>::infinity();
  for (double t : times) {
    Eigen::SelfAdjointEigenSolver<MatX> eig(B(t), Eigen::EigenvaluesOnly);
    rep.min_eig_B = std::min(rep.min_eig_B, eig.eigenvalues().minCoeff());
  }
  if (rep.min_eig_B < alpha - 1e-12 * std::max(1.0, std::abs(alpha)))
    throw HypothesisError("comparison hypothesis fails: min eig B(t) = " +
                          std::to_string(rep.min_eig_B) + " < alpha");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  const double sq = std::sqrt(alpha);
  rep.worst_slack = std::numeric_limits<double>::infinity();
  rep.pass = true;
  OdeOptions opt;
  opt.rel_tol = tol;
  opt.abs_tol = tol;
  for (int trial = 0; trial < trials; ++trial) {
    VecX v0(dim);
    for (int i = 0; i < dim; ++i) v0[i] = gauss(rng);
    v0.normalize();
    VecX y0(2 * dim);
    y0 << VecX::Zero(dim), v0;
    auto rhs = [&B, dim](double t, const VecX& y, VecX& dy) {
      dy.head(dim) = y.tail(dim);
      dy.tail(dim) = B(t) * y.head(dim);
    };
    const std::vector<VecX> states = integrate_sampled(rhs, times, y0, opt);
    for (size_t i = 0; i < states.size(); ++i) {
      const double bound = std::sinh(sq * times[i]) / sq;
      const double slack = states[i].head(dim).norm() - (bound - 1e-8);
      rep.worst_slack = std::min(rep.worst_slack, slack);
      if (slack < 0.0) rep.pass = false;
    }
  }
  return rep;
}

MotionClassification classify_motion(const HomographicMotion& motion,
                                     double tol, double circle_tol) {
  const SimilarityFrame frame = build_subspaces(motion.sys, motion.x0);
  MotionClassification out;
  out.delta_block = monodromy(motion, frame.delta, tol, circle_tol);
  out.k_block = monodromy(motion, frame.K, tol, circle_tol);
  out.d_block = monodromy(motion, frame.D, tol, circle_tol);

  auto leaves_circle = [circle_tol](const MonodromyReport& rep) {
    return rep.margins.maxCoeff() > circle_tol;
  };
  const bool any_off_circle = leaves_circle(out.delta_block) ||
                              leaves_circle(out.k_block) ||
                              leaves_circle(out.d_block);
  if (out.d_block.classification == FloquetClass::Hyperbolic ||
      any_off_circle)
    out.verdict = "linearly unstable";
  else if (out.d_block.classification == FloquetClass::Degenerate)
    out.verdict = "degenerate - refine";
  else
    out.verdict = "spectrally stable";
  return out;
}

}  // namespace nbody
