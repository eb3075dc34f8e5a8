#include "nbody/scan.hpp"

#include <json.hpp>

#include <ostream>

namespace nbody {

namespace {

using nlohmann::json;

json vec_to_json(const VecX& v) {
  json out = json::array();
  for (long i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json positions_to_json(const MassSystem& sys, const VecX& x) {
  json out = json::array();
  for (int i = 0; i < sys.count(); ++i) {
    json body = json::array();
    for (int k = 0; k < sys.dim(); ++k) body.push_back(x[i * sys.dim() + k]);
    out.push_back(body);
  }
  return out;
}

json monodromy_to_json(const MonodromyReport& rep) {
  json out;
  json re = json::array(), im = json::array();
  for (long i = 0; i < rep.multipliers.size(); ++i) {
    re.push_back(rep.multipliers[i].real());
    im.push_back(rep.multipliers[i].imag());
  }
  out["multipliers_re"] = re;
  out["multipliers_im"] = im;
  out["margins"] = vec_to_json(rep.margins);
  out["min_margin"] = rep.min_margin;
  out["classification"] = to_string(rep.classification);
  out["dim_stable"] = rep.dim_stable;
  out["dim_unstable"] = rep.dim_unstable;
  out["dim_center"] = rep.dim_center;
  out["product_error"] = rep.product_error;
  out["pairing_error"] = rep.pairing_error;
  return out;
}

VecX parse_positions(const json& arr, int n, int d) {
  if (!arr.is_array() || int(arr.size()) != n)
    throw ParseError("field \"positions\" must list one entry per body");
  VecX x(n * d);
  for (int i = 0; i < n; ++i) {
    const json& body = arr[size_t(i)];
    if (!body.is_array() || int(body.size()) != d)
      throw ParseError("field \"positions\": body " + std::to_string(i + 1) +
                       " must have " + std::to_string(d) + " coordinates");
    for (int k = 0; k < d; ++k) {
      if (!body[size_t(k)].is_number())
        throw ParseError("field \"positions\" must contain numbers");
      x[i * d + k] = body[size_t(k)].get<double>();
    }
  }
  return x;
}

}  // namespace

std::string analyze_json(const std::string& input_text) {
  json in;
  try {
    in = json::parse(input_text);
  } catch (const json::parse_error& err) {
    throw ParseError(std::string("invalid JSON: ") + err.what());
  }
  if (!in.is_object()) throw ParseError("job must be a JSON object");
  if (!in.contains("masses"))
    throw ParseError("missing field \"masses\"");
  if (!in["masses"].is_array() || in["masses"].size() < 2)
    throw ParseError("field \"masses\" must be an array of at least two "
                     "positive numbers");
  VecX masses(long(in["masses"].size()));
  for (size_t i = 0; i < in["masses"].size(); ++i) {
    if (!in["masses"][i].is_number())
      throw ParseError("field \"masses\" must contain numbers");
    masses[long(i)] = in["masses"][i].get<double>();
  }
  if (in.contains("kappa") && !in["kappa"].is_number())
    throw ParseError("field \"kappa\" must be a number");
  const double kappa = in.value("kappa", 1.0);
  if (kappa <= 0.0) throw ParseError("field \"kappa\" must be positive");

  const bool has_named = in.contains("named");
  const bool has_positions = in.contains("positions");
  if (has_named == has_positions)
    throw ParseError("provide exactly one of \"named\" or \"positions\"");

  int dim = 2;
  std::string named;
  if (has_named) {
    if (!in["named"].is_string())
      throw ParseError("field \"named\" must be a string");
    named = in["named"].get<std::string>();
    if (named == "isosceles") dim = 3;
    else if (named != "equilateral" && named != "collinear")
      throw ParseError("field \"named\" must be one of \"equilateral\", "
                       "\"collinear\", \"isosceles\"");
  } else {
    if (!in["positions"].is_array() || in["positions"].empty() ||
        !in["positions"][0].is_array())
      throw ParseError("field \"positions\" must be an array of coordinate "
                       "arrays");
    dim = int(in["positions"][0].size());
    if (dim != 2 && dim != 3)
      throw ParseError("bodies must have 2 or 3 coordinates");
  }

  MassSystem sys(masses, dim);
  Potential U{kappa};

  VecX x;
  if (has_positions) {
    x = centered(sys, parse_positions(in["positions"], sys.count(), dim));
  } else if (named == "equilateral") {
    x = equilateral_configuration(sys);
  } else if (named == "collinear") {
    x = find_central(sys, U, collinear_seed(sys)).config *
        mass_norm(sys, collinear_seed(sys));
  } else {  // isosceles
    if (sys.count() != 3)
      throw ParseError("named \"isosceles\" needs three masses");
    MatX pos(3, 3);
    pos << -1, 0, 0, 1, 0, 0, 0, 0, 1;
    x = centered(sys, flatten(sys, pos));
  }
  check_collision(sys, x);

  json out;
  out["masses"] = vec_to_json(masses);
  out["kappa"] = kappa;
  out["dim"] = dim;
  out["positions"] = positions_to_json(sys, x);
  out["scale"] = mass_norm(sys, x);

  const auto [residual, lambda] = central_residual(sys, U, x);
  out["central"] = {{"residual", residual}, {"lambda", lambda}};

  if (sys.count() == 3) {
    const GascheauParams g = gascheau(masses);
    out["gascheau"] = {{"mu", g.mu}, {"lambda_ratio", g.lambda_ratio}};
  }

  if (dim == 2) {
    const CentralConfiguration cc = make_central(sys, U, x);
    const SimilarityFrame frame = build_subspaces(sys, x);
    const HessianOperator H = hessian(sys, U, x);
    Eigen::SelfAdjointEigenSolver<MatX> eig_k(restrict_hessian(sys, H, frame.K),
                                              Eigen::EigenvaluesOnly);
    out["spectra"] = {
        {"delta", vec_to_json(VecX::Zero(frame.delta.dim()))},
        {"K", vec_to_json(eig_k.eigenvalues())},
        {"D", vec_to_json(cc.spectrum_D)}};
    out["strongly_nondegenerate"] = cc.strongly_nondegenerate;
    out["strong_minimizer"] = cc.strong_minimizer;
    if (sys.count() == 3 && kappa == 1.0) {
      const DeformationForm f = deformation_form(masses);
      out["deformation_form"] = {{"a", f.a}, {"b", f.b}, {"c", f.c},
                                 {"d", f.d}, {"trace", f.trace},
                                 {"det", f.det}};
    }
  } else {
    // d = 3: report the isosceles block structure when it applies
    if (sys.count() == 3 &&
        std::abs(sys.mass(0) - sys.mass(1)) <= 1e-12 * sys.mass(0)) {
      const Subspace iso = isosceles_subspace(sys, Vec3::UnitZ());
      const VecX inside = project(sys, x, iso);
      if (mass_norm(sys, x - inside) <= 1e-10 * mass_norm(sys, x))
        out["isosceles_coupling"] = splitting_verify(sys, U, x, iso);
    }
  }

  if (in.contains("orbit")) {
    if (dim != 2)
      throw InvalidInput("orbit analysis is planar");
    if (kappa != 1.0)
      throw InvalidInput("orbit analysis needs the gravitational case");
    const json& orb = in["orbit"];
    if (!orb.is_object() || !orb.contains("e") || !orb["e"].is_number())
      throw ParseError("field \"orbit\" must be an object with numeric "
                       "\"e\"");
    if (orb.contains("a") && !orb["a"].is_number())
      throw ParseError("field \"orbit\".\"a\" must be a number");
    const double e = orb["e"].get<double>();
    const double a = orb.value("a", 1.0);
    VecX x0 = x / mass_norm(sys, x);
    const HomographicMotion motion = make_homographic(sys, U, x0, e, a);
    out["orbit"] = {{"e", e}, {"a", a}, {"period", motion.period()},
                    {"gravitational_parameter",
                     motion.orbit.gravitational_parameter}};
    const MotionClassification mc = classify_motion(motion);
    out["monodromy"] = {{"delta", monodromy_to_json(mc.delta_block)},
                        {"K", monodromy_to_json(mc.k_block)},
                        {"D", monodromy_to_json(mc.d_block)},
                        {"verdict", mc.verdict}};
  }
  return out.dump(2) + "\n";
}

void write_scan_json(std::ostream& os, const std::vector<ScanRow>& rows) {
  json out = json::array();
  for (const ScanRow& r : rows) {
    json re = json::array(), im = json::array();
    for (long i = 0; i < r.multipliers.size(); ++i) {
      re.push_back(r.multipliers[i].real());
      im.push_back(r.multipliers[i].imag());
    }
    out.push_back({{"mu", r.mu},
                   {"e", r.e},
                   {"masses", vec_to_json(r.masses)},
                   {"detAD", r.detAD},
                   {"trAD", r.trAD},
                   {"multipliers_re", re},
                   {"multipliers_im", im},
                   {"class", r.classification},
                   {"min_margin", r.min_margin}});
  }
  os << out.dump(2) << "\n";
}

}  // namespace nbody
