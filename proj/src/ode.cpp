#include "nbody/ode.hpp"

#include <cmath>

namespace nbody {

namespace {

// Prince-Dormand 8(5,3) tableau, full double precision.
constexpr double c2 = 0.05260015195876773187856, c3 = 0.07890022793815159781784,
  c4 = 0.11835034190722739672676, c5 = 0.28164965809277260327324,
  c6 = 0.33333333333333333333333, c7 = 0.25, c8 = 0.30769230769230769230769,
  c9 = 0.65128205128205128205128, c10 = 0.6, c11 = 0.85714285714285714285714;

constexpr double b1 = 0.05429373411656876223805, b6 = 4.45031289275240888144114,
  b7 = 1.89151789931450038304282, b8 = -5.80120396001058478146721,
  b9 = 0.31116436695781989440892, b10 = -0.15216094966251607855618,
  b11 = 0.20136540080403034837478, b12 = 0.04471061572777259051769;

constexpr double bhh1 = 0.24409448818897637795276,
  bhh2 = 0.73384668828161185734136, bhh3 = 0.02205882352941176470588;

constexpr double er1 = 0.01312004499419488073250,
  er6 = -1.22515644637620444072057, er7 = -0.49575894965725019152141,
  er8 = 1.66437718245498653696153, er9 = -0.35032884874997368168865,
  er10 = 0.33417911871301747902973, er11 = 0.08192320648511571246571,
  er12 = -0.02235530786388629525884;

constexpr double a21 = 0.05260015195876773187856,
  a31 = 0.01972505698453789945446, a32 = 0.05917517095361369836338,
  a41 = 0.02958758547680684918169, a43 = 0.08876275643042054754507,
  a51 = 0.24136513415926668550237, a53 = -0.88454947932828608534486,
  a54 = 0.92483400326179200311574, a61 = 0.03703703703703703703704,
  a64 = 0.17082860872947387127960, a65 = 0.12546768756682242501669,
  a71 = 0.037109375, a74 = 0.17025221101954403931498,
  a75 = 0.06021653898045596068502, a76 = -0.017578125,
  a81 = 0.03709200011850479271088, a84 = 0.17038392571223999381021,
  a85 = 0.10726203044637328465181, a86 = -0.01531943774862440175279,
  a87 = 0.00827378916381402288758, a91 = 0.62411095871607571711443,
  a94 = -3.36089262944694129406857, a95 = -0.86821934684172600681819,
  a96 = 27.5920996994467083049416, a97 = 20.1540675504778934086187,
  a98 = -43.4898841810699588477366, a101 = 0.47766253643826436589043,
  a104 = -2.48811461997166764192642, a105 = -0.59029082683684299637145,
  a106 = 21.2300514481811942347289, a107 = 15.2792336328824235832597,
  a108 = -33.2882109689848629194453, a109 = -0.02033120170850862613582,
  a111 = -0.93714243008598732571704, a114 = 5.18637242884406370830024,
  a115 = 1.09143734899672957818500, a116 = -8.14978701074692612513997,
  a117 = -18.5200656599969598641566, a118 = 22.7394870993505042818970,
  a119 = 2.49360555267965238987089, a1110 = -3.04676447189821950038237,
  a121 = 2.27331014751653820792360, a124 = -10.5344954667372501984067,
  a125 = -2.00087205822486249909676, a126 = -17.9589318631187989172766,
  a127 = 27.9488845294199600508500, a128 = -2.85899827713502369474066,
  a129 = -8.87285693353062954433549, a1210 = 12.3605671757943030647266,
  a1211 = 0.64339274601576353035597;

// 6th-order continuous extension (uses the derivative at both endpoints,
// no extra stages)
constexpr double d41 = -5.40685903845352664250302, d46 = 367.268892700041893590281,
  d47 = 154.609958204083905482676, d48 = -505.920283865412564024766,
  d49 = 15.5975154819608130688200, d410 = -26.1936204184402805956691,
  d411 = -0.74003512364122230844721, d412 = 1.11776539319431476294221,
  d413 = -0.33333333333333333333333, d51 = 6.51987095363079615048119,
  d56 = -1066.34956011730205278592, d57 = -351.864047514639508625601,
  d58 = 1363.51955696662884408368, d59 = -112.727669432657582669864,
  d510 = 159.796191868560289612921, d511 = -2.13865100308788816220259,
  d512 = -3.75569172113289760348584, d513 = 7.0,
  d61 = 10.4698004763293477204238, d66 = -1380.01473607038123167155,
  d67 = -531.219827862514074379012, d68 = 1866.98964341870892451324,
  d69 = -53.3302605020547902574560, d610 = 82.4147560258671369782481,
  d611 = 7.38443654502992069572676, d612 = 0.41729908012587751149843,
  d613 = -3.11111111111111111111111, d71 = -16.6338582677165354330709,
  d76 = 4516.16568914956011730205, d77 = 1393.85185384057776465219,
  d78 = -5687.52042419481539670071, d79 = 473.965563750151263163661,
  d710 = -661.810776942355889724311, d711 = -18.0180473354013232598119;

constexpr double kSafe = 0.9, kFac1 = 0.333, kFac2 = 6.0;

}  // namespace

Dop853::Dop853(Rhs rhs, double t0, VecX y0, OdeOptions opt)
    : rhs_(std::move(rhs)), opt_(opt), t_(t0), t_prev_(t0), y_(std::move(y0)) {
  const auto n = y_.size();
  for (auto& k : k_) k.resize(n);
  stage_.resize(n);
  ynew_.resize(n);
  bsum_.resize(n);
  cont_.resize(n, 8);
  rhs_(t_, y_, k_[0]);
  ++rhs_evals;
}

double Dop853::error_norm(double h, const VecX& ynew) const {
  double err5 = 0.0, err3 = 0.0;
  const auto n = y_.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sk =
        opt_.abs_tol +
        opt_.rel_tol * std::max(std::abs(y_[i]), std::abs(ynew[i]));
    double e = bsum_[i] - bhh1 * k_[0][i] - bhh2 * k_[8][i] - bhh3 * k_[11][i];
    err3 += (e / sk) * (e / sk);
    e = er1 * k_[0][i] + er6 * k_[5][i] + er7 * k_[6][i] + er8 * k_[7][i] +
        er9 * k_[8][i] + er10 * k_[9][i] + er11 * k_[10][i] +
        er12 * k_[11][i];
    err5 += (e / sk) * (e / sk);
  }
  double deno = err5 + 0.01 * err3;
  if (deno <= 0.0) deno = 1.0;
  return std::abs(h) * err5 / std::sqrt(deno * double(n));
}

double Dop853::initial_step_size(double t_limit) const {
  const auto n = y_.size();
  double d0 = 0.0, d1 = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sk = opt_.abs_tol + opt_.rel_tol * std::abs(y_[i]);
    d0 += (y_[i] / sk) * (y_[i] / sk);
    d1 += (k_[0][i] / sk) * (k_[0][i] / sk);
  }
  double h = (d1 <= 1e-10 || d0 <= 1e-10) ? 1e-6 : 0.01 * std::sqrt(d0 / d1);
  h = std::min(h, t_limit - t_);
  // one explicit Euler probe to estimate the second derivative
  VecX y1 = y_ + h * k_[0];
  VecX f1(n);
  rhs_(t_ + h, y1, f1);
  double d2 = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sk = opt_.abs_tol + opt_.rel_tol * std::abs(y_[i]);
    d2 += ((f1[i] - k_[0][i]) / sk) * ((f1[i] - k_[0][i]) / sk);
  }
  d2 = std::sqrt(d2) / h;
  const double der = std::max(std::sqrt(d1), d2);
  double h1 = (der <= 1e-15) ? std::max(1e-6, h * 1e-3)
                             : std::pow(0.01 / der, 1.0 / 8.0);
  return std::min({100.0 * h, h1, t_limit - t_});
}

double Dop853::step(double t_limit) {
  if (t_ >= t_limit) return 0.0;
  if (h_next_ <= 0.0) {
    try {
      h_next_ = opt_.initial_step > 0.0 ? opt_.initial_step
                                        : initial_step_size(t_limit);
    } catch (const CollisionError&) {
      h_next_ = 1e-6 * std::min(1.0, t_limit - t_);
    }
    ++rhs_evals;
  }
  if (opt_.max_step > 0.0) h_next_ = std::min(h_next_, opt_.max_step);

  for (;;) {
    double h = std::min(h_next_, t_limit - t_);
    const bool clamped = h < h_next_;
    if (h <= std::abs(t_) * 1e-14 || h <= 1e-300 || !std::isfinite(h))
      throw StepUnderflow(t_, y_);

    try {
      attempt_step(h, clamped, t_limit);
      return h;
    } catch (const CollisionError&) {
      // the right-hand side refused a probed state: shrink and retry
      h_next_ = 0.5 * h;
      ++steps_rejected;
    } catch (const StepRejected&) {
      // h_next_ already reduced
    }
  }
}

void Dop853::attempt_step(double h, bool clamped, double t_limit) {
  stage_ = y_ + h * a21 * k_[0];
  rhs_(t_ + c2 * h, stage_, k_[1]);
  stage_ = y_ + h * (a31 * k_[0] + a32 * k_[1]);
  rhs_(t_ + c3 * h, stage_, k_[2]);
  stage_ = y_ + h * (a41 * k_[0] + a43 * k_[2]);
  rhs_(t_ + c4 * h, stage_, k_[3]);
  stage_ = y_ + h * (a51 * k_[0] + a53 * k_[2] + a54 * k_[3]);
  rhs_(t_ + c5 * h, stage_, k_[4]);
  stage_ = y_ + h * (a61 * k_[0] + a64 * k_[3] + a65 * k_[4]);
  rhs_(t_ + c6 * h, stage_, k_[5]);
  stage_ = y_ + h * (a71 * k_[0] + a74 * k_[3] + a75 * k_[4] + a76 * k_[5]);
  rhs_(t_ + c7 * h, stage_, k_[6]);
  stage_ = y_ + h * (a81 * k_[0] + a84 * k_[3] + a85 * k_[4] + a86 * k_[5] +
                     a87 * k_[6]);
  rhs_(t_ + c8 * h, stage_, k_[7]);
  stage_ = y_ + h * (a91 * k_[0] + a94 * k_[3] + a95 * k_[4] + a96 * k_[5] +
                     a97 * k_[6] + a98 * k_[7]);
  rhs_(t_ + c9 * h, stage_, k_[8]);
  stage_ = y_ + h * (a101 * k_[0] + a104 * k_[3] + a105 * k_[4] +
                     a106 * k_[5] + a107 * k_[6] + a108 * k_[7] +
                     a109 * k_[8]);
  rhs_(t_ + c10 * h, stage_, k_[9]);
  stage_ = y_ + h * (a111 * k_[0] + a114 * k_[3] + a115 * k_[4] +
                     a116 * k_[5] + a117 * k_[6] + a118 * k_[7] +
                     a119 * k_[8] + a1110 * k_[9]);
  rhs_(t_ + c11 * h, stage_, k_[10]);
  stage_ = y_ + h * (a121 * k_[0] + a124 * k_[3] + a125 * k_[4] +
                     a126 * k_[5] + a127 * k_[6] + a128 * k_[7] +
                     a129 * k_[8] + a1210 * k_[9] + a1211 * k_[10]);
  rhs_(t_ + h, stage_, k_[11]);
  rhs_evals += 11;

  bsum_ = b1 * k_[0] + b6 * k_[5] + b7 * k_[6] + b8 * k_[7] + b9 * k_[8] +
          b10 * k_[9] + b11 * k_[10] + b12 * k_[11];
  ynew_ = y_ + h * bsum_;

  const double err = error_norm(h, ynew_);
  double fac = std::pow(err, 1.0 / 8.0);
  fac = std::max(1.0 / kFac2, std::min(1.0 / kFac1, fac / kSafe));

  if (err <= 1.0) {
    rhs_(t_ + h, ynew_, k_[12]);
    ++rhs_evals;
    cont_.col(0) = y_;
    cont_.col(1) = ynew_ - y_;
    cont_.col(2) = h * k_[0] - cont_.col(1);
    cont_.col(3) = cont_.col(1) - h * k_[12] - cont_.col(2);
    cont_.col(4) =
        h * (d41 * k_[0] + d46 * k_[5] + d47 * k_[6] + d48 * k_[7] +
             d49 * k_[8] + d410 * k_[9] + d411 * k_[10] + d412 * k_[11] +
             d413 * k_[12]);
    cont_.col(5) =
        h * (d51 * k_[0] + d56 * k_[5] + d57 * k_[6] + d58 * k_[7] +
             d59 * k_[8] + d510 * k_[9] + d511 * k_[10] + d512 * k_[11] +
             d513 * k_[12]);
    cont_.col(6) =
        h * (d61 * k_[0] + d66 * k_[5] + d67 * k_[6] + d68 * k_[7] +
             d69 * k_[8] + d610 * k_[9] + d611 * k_[10] + d612 * k_[11] +
             d613 * k_[12]);
    cont_.col(7) =
        h * (d71 * k_[0] + d76 * k_[5] + d77 * k_[6] + d78 * k_[7] +
             d79 * k_[8] + d710 * k_[9] + d711 * k_[10]);
    have_cont_ = true;

    k_[0] = k_[12];
    t_prev_ = t_;
    t_ = clamped ? t_limit : t_ + h;
    y_ = ynew_;
    if (!clamped) h_next_ = h / fac;
    ++steps_accepted;
    return;
  }
  h_next_ = h / std::min(1.0 / kFac1, fac / kSafe);
  ++steps_rejected;
  throw StepRejected{};
}

void Dop853::advance_to(double t_end) {
  if (t_end < t_) throw InvalidInput("Dop853 integrates forward only");
  long n = 0;
  while (t_ < t_end) {
    step(t_end);
    if (++n > opt_.max_steps)
      throw Error("Dop853: step budget exhausted");
  }
}

VecX Dop853::sample(double t) const {
  if (!have_cont_ || t < t_prev_ - 1e-14 || t > t_ + 1e-14)
    throw InvalidInput("Dop853::sample outside the last step");
  const double h = t_ - t_prev_;
  const double s = h == 0.0 ? 0.0 : (t - t_prev_) / h;
  const double s1 = 1.0 - s;
  return cont_.col(0) +
         s * (cont_.col(1) +
              s1 * (cont_.col(2) +
                    s * (cont_.col(3) +
                         s1 * (cont_.col(4) +
                               s * (cont_.col(5) +
                                    s1 * (cont_.col(6) +
                                          s * cont_.col(7)))))));
}

std::vector<VecX> integrate_sampled(const Dop853::Rhs& rhs,
                                    const std::vector<double>& times,
                                    const VecX& y0, OdeOptions opt) {
  if (times.empty()) return {};
  for (size_t i = 1; i < times.size(); ++i)
    if (times[i] < times[i - 1])
      throw InvalidInput("sample times must be non-decreasing");
  Dop853 solver(rhs, times.front(), y0, opt);
  std::vector<VecX> out;
  out.reserve(times.size());
  out.push_back(y0);
  size_t next = 1;
  const double t_end = times.back();
  long n = 0;
  while (next < times.size()) {
    solver.step(t_end);
    if (++n > opt.max_steps) throw Error("Dop853: step budget exhausted");
    while (next < times.size() && times[next] <= solver.time() + 1e-14) {
      out.push_back(times[next] >= solver.time() ? solver.state()
                                                 : solver.sample(times[next]));
      ++next;
    }
  }
  return out;
}

}  // namespace nbody
