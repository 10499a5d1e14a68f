#pragma once

// Adaptive Dormand-Prince 8(5,3) integrator for small fixed-size systems.
// Tableau and step-size controller follow Hairer & Wanner's DOP853.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <utility>

#include "sitnikov/errors.hpp"

namespace sitnikov::ode {

struct IntegratorOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  long max_steps = 5'000'000;
};

template <std::size_t Dim, class Rhs>
class Dop853 {
 public:
  using State = std::array<double, Dim>;

  Dop853(Rhs rhs, IntegratorOptions opt) : rhs_(std::move(rhs)), opt_(opt) {}

  /// Advances (t, y) to exactly t_end. Successive calls reuse the last step
  /// size and the FSAL derivative, so dense sampling is done by calling this
  /// once per output time. Throws IntegrationFailure on step underflow.
  void advance(double& t, State& y, double t_end) {
    if (t_end == t) return;
    const double dir = t_end > t ? 1.0 : -1.0;
    if (!(have_k1_ && t == t_cache_ && y == y_cache_)) {
      rhs_(t, y, k1_);
      have_k1_ = true;
    }
    const double span = std::abs(t_end - t);
    double h = (h_ > 0.0) ? std::min(h_, span) : initial_step(t, y, span, dir);
    bool reject = false;

    while (true) {
      if (++steps_ > opt_.max_steps) throw IntegrationFailure("step cap exceeded", t);
      if (0.1 * h <= std::abs(t) * kUround || h < 1e-300) {
        throw IntegrationFailure("step size underflow", t);
      }
      bool last = false;
      double h_unclipped = h;
      if (std::abs(t_end - t) <= 1.01 * h) {
        h = std::abs(t_end - t);
        last = true;
      }

      State y_new;
      step12(t, y, dir * h, y_new);
      const double err = h * error_estimate(y, y_new);
      const double fac11 = std::pow(err, 1.0 / 8.0);
      double fac = std::max(kFacc2, std::min(kFacc1, fac11 / kSafe));
      double h_new = h / fac;

      if (err <= 1.0) {
        t = last ? t_end : t + dir * h;
        y = y_new;
        rhs_(t, y, k1_);
        t_cache_ = t;
        y_cache_ = y;
        if (reject) h_new = std::min(h_new, h);
        if (last) {
          h_ = std::max(h_new, h_unclipped);
          return;
        }
        reject = false;
      } else {
        h_new = h / std::min(kFacc1, fac11 / kSafe);
        reject = true;
      }
      h = h_new;
    }
  }

  long steps() const { return steps_; }

 private:
  static constexpr double kUround = 2.3e-16;
  static constexpr double kSafe = 0.9;
  static constexpr double kFacc1 = 3.0;        // 1 / fac1
  static constexpr double kFacc2 = 1.0 / 6.0;  // 1 / fac2

  double weight(double a, double b) const {
    return opt_.abs_tol + opt_.rel_tol * std::max(std::abs(a), std::abs(b));
  }

  double initial_step(double t, const State& y, double hmax, double dir) {
    double dnf = 0.0, dny = 0.0;
    for (std::size_t i = 0; i < Dim; ++i) {
      const double sk = weight(y[i], y[i]);
      dnf += (k1_[i] / sk) * (k1_[i] / sk);
      dny += (y[i] / sk) * (y[i] / sk);
    }
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * std::sqrt(dny / dnf);
    h = std::min(h, hmax);
    State y1, f1;
    for (std::size_t i = 0; i < Dim; ++i) y1[i] = y[i] + dir * h * k1_[i];
    rhs_(t + dir * h, y1, f1);
    double der2 = 0.0;
    for (std::size_t i = 0; i < Dim; ++i) {
      const double sk = weight(y[i], y[i]);
      der2 += ((f1[i] - k1_[i]) / sk) * ((f1[i] - k1_[i]) / sk);
    }
    der2 = std::sqrt(der2) / h;
    const double der12 = std::max(der2, std::sqrt(dnf));
    const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 1.0 / 8.0);
    return std::min({100.0 * h, h1, hmax});
  }

  void step12(double t, const State& y, double h, State& out) {
    constexpr double c2 = 0.526001519587677318785587544488E-01, c3 = 0.789002279381515978178381316732E-01,
                     c4 = 0.118350341907227396726757197510E+00, c5 = 0.281649658092772603273242802490E+00,
                     c6 = 0.333333333333333333333333333333E+00, c7 = 0.25E+00,
                     c8 = 0.307692307692307692307692307692E+00, c9 = 0.651282051282051282051282051282E+00,
                     c10 = 0.6E+00, c11 = 0.857142857142857142857142857142E+00;
    constexpr double b1 = 5.42937341165687622380535766363E-2, b6 = 4.45031289275240888144113950566E0,
                     b7 = 1.89151789931450038304281599044E0, b8 = -5.8012039600105847814672114227E0,
                     b9 = 3.1116436695781989440891606237E-1, b10 = -1.52160949662516078556178806805E-1,
                     b11 = 2.01365400804030348374776537501E-1, b12 = 4.47106157277725905176885569043E-2;
    constexpr double a21 = 5.26001519587677318785587544488E-2, a31 = 1.97250569845378994544595329183E-2,
                     a32 = 5.91751709536136983633785987549E-2, a41 = 2.95875854768068491816892993775E-2,
                     a43 = 8.87627564304205475450678981324E-2, a51 = 2.41365134159266685502369798665E-1,
                     a53 = -8.84549479328286085344864962717E-1, a54 = 9.24834003261792003115737966543E-1,
                     a61 = 3.7037037037037037037037037037E-2, a64 = 1.70828608729473871279604482173E-1,
                     a65 = 1.25467687566822425016691814123E-1, a71 = 3.7109375E-2,
                     a74 = 1.70252211019544039314978060272E-1, a75 = 6.02165389804559606850219397283E-2,
                     a76 = -1.7578125E-2;
    constexpr double a81 = 3.70920001185047927108779319836E-2, a84 = 1.70383925712239993810214054705E-1,
                     a85 = 1.07262030446373284651809199168E-1, a86 = -1.53194377486244017527936158236E-2,
                     a87 = 8.27378916381402288758473766002E-3, a91 = 6.24110958716075717114429577812E-1,
                     a94 = -3.36089262944694129406857109825E0, a95 = -8.68219346841726006818189891453E-1,
                     a96 = 2.75920996994467083049415600797E1, a97 = 2.01540675504778934086186788979E1,
                     a98 = -4.34898841810699588477366255144E1, a101 = 4.77662536438264365890433908527E-1,
                     a104 = -2.48811461997166764192642586468E0, a105 = -5.90290826836842996371446475743E-1,
                     a106 = 2.12300514481811942347288949897E1, a107 = 1.52792336328824235832596922938E1,
                     a108 = -3.32882109689848629194453265587E1, a109 = -2.03312017085086261358222928593E-2;
    constexpr double a111 = -9.3714243008598732571704021658E-1, a114 = 5.18637242884406370830023853209E0,
                     a115 = 1.09143734899672957818500254654E0, a116 = -8.14978701074692612513997267357E0,
                     a117 = -1.85200656599969598641566180701E1, a118 = 2.27394870993505042818970056734E1,
                     a119 = 2.49360555267965238987089396762E0, a1110 = -3.0467644718982195003823669022E0,
                     a121 = 2.27331014751653820792359768449E0, a124 = -1.05344954667372501984066689879E1,
                     a125 = -2.00087205822486249909675718444E0, a126 = -1.79589318631187989172765950534E1,
                     a127 = 2.79488845294199600508499808837E1, a128 = -2.85899827713502369474065508674E0,
                     a129 = -8.87285693353062954433549289258E0, a1210 = 1.23605671757943030647266201528E1,
                     a1211 = 6.43392746015763530355970484046E-1;

    State w;
    auto stage = [&](double c, auto&& combine, State& k) {
      for (std::size_t i = 0; i < Dim; ++i) w[i] = y[i] + h * combine(i);
      rhs_(t + c * h, w, k);
    };
    const State& k1 = k1_;
    stage(c2, [&](std::size_t i) { return a21 * k1[i]; }, k2_);
    stage(c3, [&](std::size_t i) { return a31 * k1[i] + a32 * k2_[i]; }, k3_);
    stage(c4, [&](std::size_t i) { return a41 * k1[i] + a43 * k3_[i]; }, k4_);
    stage(c5, [&](std::size_t i) { return a51 * k1[i] + a53 * k3_[i] + a54 * k4_[i]; }, k5_);
    stage(c6, [&](std::size_t i) { return a61 * k1[i] + a64 * k4_[i] + a65 * k5_[i]; }, k6_);
    stage(c7, [&](std::size_t i) { return a71 * k1[i] + a74 * k4_[i] + a75 * k5_[i] + a76 * k6_[i]; }, k7_);
    stage(c8, [&](std::size_t i) {
      return a81 * k1[i] + a84 * k4_[i] + a85 * k5_[i] + a86 * k6_[i] + a87 * k7_[i];
    }, k8_);
    stage(c9, [&](std::size_t i) {
      return a91 * k1[i] + a94 * k4_[i] + a95 * k5_[i] + a96 * k6_[i] + a97 * k7_[i] + a98 * k8_[i];
    }, k9_);
    stage(c10, [&](std::size_t i) {
      return a101 * k1[i] + a104 * k4_[i] + a105 * k5_[i] + a106 * k6_[i] + a107 * k7_[i] + a108 * k8_[i] +
             a109 * k9_[i];
    }, k10_);
    stage(c11, [&](std::size_t i) {
      return a111 * k1[i] + a114 * k4_[i] + a115 * k5_[i] + a116 * k6_[i] + a117 * k7_[i] + a118 * k8_[i] +
             a119 * k9_[i] + a1110 * k10_[i];
    }, k11_);
    stage(1.0, [&](std::size_t i) {
      return a121 * k1[i] + a124 * k4_[i] + a125 * k5_[i] + a126 * k6_[i] + a127 * k7_[i] + a128 * k8_[i] +
             a129 * k9_[i] + a1210 * k10_[i] + a1211 * k11_[i];
    }, k12_);
    for (std::size_t i = 0; i < Dim; ++i) {
      incr_[i] = b1 * k1[i] + b6 * k6_[i] + b7 * k7_[i] + b8 * k8_[i] + b9 * k9_[i] + b10 * k10_[i] +
                 b11 * k11_[i] + b12 * k12_[i];
      out[i] = y[i] + h * incr_[i];
    }
  }

  // Combined 5th/3rd-order error estimate, normalized so that <= 1 means accept.
  double error_estimate(const State& y, const State& y_new) const {
    constexpr double bhh1 = 0.244094488188976377952755905512E+00, bhh2 = 0.733846688281611857341361741547E+00,
                     bhh3 = 0.220588235294117647058823529412E-01;
    constexpr double er1 = 0.1312004499419488073250102996E-01, er6 = -0.1225156446376204440720569753E+01,
                     er7 = -0.4957589496572501915214079952E+00, er8 = 0.1664377182454986536961530415E+01,
                     er9 = -0.3503288487499736816886487290E+00, er10 = 0.3341791187130174790297318841E+00,
                     er11 = 0.8192320648511571246570742613E-01, er12 = -0.2235530786388629525884427845E-01;
    double err5 = 0.0, err3 = 0.0;
    for (std::size_t i = 0; i < Dim; ++i) {
      const double sk = 1.0 / weight(y[i], y_new[i]);
      double e3 = (incr_[i] - bhh1 * k1_[i] - bhh2 * k9_[i] - bhh3 * k12_[i]) * sk;
      err3 += e3 * e3;
      double e5 = (er1 * k1_[i] + er6 * k6_[i] + er7 * k7_[i] + er8 * k8_[i] + er9 * k9_[i] + er10 * k10_[i] +
                   er11 * k11_[i] + er12 * k12_[i]) *
                  sk;
      err5 += e5 * e5;
    }
    double deno = err5 + 0.01 * err3;
    if (deno <= 0.0) deno = 1.0;
    return err5 / std::sqrt(deno * static_cast<double>(Dim));
  }

  Rhs rhs_;
  IntegratorOptions opt_;
  double h_ = 0.0;
  long steps_ = 0;
  bool have_k1_ = false;
  double t_cache_ = 0.0;
  State y_cache_{};
  State k1_{}, k2_{}, k3_{}, k4_{}, k5_{}, k6_{}, k7_{}, k8_{}, k9_{}, k10_{}, k11_{}, k12_{}, incr_{};
};

template <std::size_t Dim, class Rhs>
Dop853<Dim, Rhs> make_dop853(Rhs rhs, IntegratorOptions opt) {
  return Dop853<Dim, Rhs>(std::move(rhs), opt);
}

}  // namespace sitnikov::ode
