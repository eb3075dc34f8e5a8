#include "nbody/mass_system.hpp"

namespace nbody {

MassSystem::MassSystem(VecX masses, int dim)
    : masses_(std::move(masses)), dim_(dim) {
  if (masses_.size() < 2)
    throw InvalidInput("MassSystem: need at least two bodies");
  if ((masses_.array() <= 0.0).any())
    throw InvalidInput("MassSystem: all masses must be strictly positive");
  if (dim_ != 2 && dim_ != 3)
    throw InvalidInput("MassSystem: ambient dimension must be 2 or 3");
  total_ = masses_.sum();
  weights_.resize(dof());
  for (int i = 0; i < count(); ++i)
    weights_.segment(i * dim_, dim_).setConstant(masses_[i]);
}

void MassSystem::check_config(const VecX& x) const {
  if (x.size() != dof())
    throw InvalidInput("configuration has length " + std::to_string(x.size()) +
                       ", expected " + std::to_string(dof()));
}

double mass_inner(const MassSystem& sys, const VecX& x, const VecX& y) {
  sys.check_config(x);
  sys.check_config(y);
  return (x.array() * sys.weights().array() * y.array()).sum();
}

double mass_norm(const MassSystem& sys, const VecX& x) {
  return std::sqrt(mass_inner(sys, x, x));
}

Complex complex_mass_inner(const MassSystem& sys, const VecX& x,
                           const VecX& y) {
  if (sys.dim() != 2)
    throw InvalidInput("complex mass inner product needs a planar system");
  sys.check_config(x);
  sys.check_config(y);
  double re = 0.0, im = 0.0;
  for (int i = 0; i < sys.count(); ++i) {
    const double a = x[2 * i], b = x[2 * i + 1];
    const double c = y[2 * i], d = y[2 * i + 1];
    re += sys.mass(i) * (a * c + b * d);
    im += sys.mass(i) * (b * c - a * d);
  }
  return {re, im};
}

VecX rot90(const MassSystem& sys, const VecX& x) {
  if (sys.dim() != 2)
    throw InvalidInput("rot90 needs a planar system");
  sys.check_config(x);
  VecX out(x.size());
  for (int i = 0; i < sys.count(); ++i) {
    out[2 * i] = -x[2 * i + 1];
    out[2 * i + 1] = x[2 * i];
  }
  return out;
}

VecX complex_scale(const MassSystem& sys, Complex z, const VecX& x) {
  if (sys.dim() != 2)
    throw InvalidInput("complex scaling needs a planar system");
  sys.check_config(x);
  VecX out(x.size());
  for (int i = 0; i < sys.count(); ++i) {
    const double a = x[2 * i], b = x[2 * i + 1];
    out[2 * i] = z.real() * a - z.imag() * b;
    out[2 * i + 1] = z.imag() * a + z.real() * b;
  }
  return out;
}

VecX center_of_mass(const MassSystem& sys, const VecX& x) {
  sys.check_config(x);
  VecX g = VecX::Zero(sys.dim());
  for (int i = 0; i < sys.count(); ++i) g += sys.mass(i) * sys.body(x, i);
  return g / sys.total_mass();
}

VecX delta_embed(const MassSystem& sys, const VecX& r) {
  if (r.size() != sys.dim())
    throw InvalidInput("delta_embed: ambient vector has wrong dimension");
  VecX out(sys.dof());
  for (int i = 0; i < sys.count(); ++i) out.segment(i * sys.dim(), sys.dim()) = r;
  return out;
}

VecX centered(const MassSystem& sys, const VecX& x) {
  return x - delta_embed(sys, center_of_mass(sys, x));
}

VecX flatten(const MassSystem& sys, const MatX& positions) {
  if (positions.rows() != sys.count() || positions.cols() != sys.dim())
    throw InvalidInput("flatten: positions must be N x dim");
  VecX out(sys.dof());
  for (int i = 0; i < sys.count(); ++i)
    out.segment(i * sys.dim(), sys.dim()) = positions.row(i).transpose();
  return out;
}

}  // namespace nbody
