#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace fucik::detail {

/// Dormand-Prince 5(4) stepper with FSAL and the fourth-order continuous
/// extension. The caller owns the stepping loop; this class only advances
/// one trial step at a time and interpolates inside the last accepted step.
template <std::size_t N>
class Dopri5 {
 public:
  using State = std::array<double, N>;

  /// Starts a new trajectory at (x, y). Must be called again whenever the
  /// right-hand side changes discontinuously.
  template <class Rhs>
  void reset(Rhs&& rhs, double x, const State& y) {
    x_ = x;
    y_ = y;
    k_[0] = rhs(x, y);
  }

  double x() const noexcept { return x_; }
  const State& y() const noexcept { return y_; }
  const State& slope() const noexcept { return k_[0]; }

  /// Computes a trial step of size h and returns the scaled error norm
  /// (<= 1 means acceptable). The trial result is kept until `accept`.
  template <class Rhs>
  double attempt(Rhs&& rhs, double h, double rtol, double atol) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    static constexpr double e1 = -71.0 / 57600, e3 = 71.0 / 16695, e4 = -71.0 / 1920,
                            e5 = 17253.0 / 339200, e6 = -22.0 / 525, e7 = 1.0 / 40;

    h_ = h;
    State tmp;
    auto stage = [&](auto&& combine) {
      for (std::size_t i = 0; i < N; ++i) tmp[i] = y_[i] + h * combine(i);
    };
    stage([&](std::size_t i) { return a21 * k_[0][i]; });
    k_[1] = rhs(x_ + c2 * h, tmp);
    stage([&](std::size_t i) { return a31 * k_[0][i] + a32 * k_[1][i]; });
    k_[2] = rhs(x_ + c3 * h, tmp);
    stage([&](std::size_t i) { return a41 * k_[0][i] + a42 * k_[1][i] + a43 * k_[2][i]; });
    k_[3] = rhs(x_ + c4 * h, tmp);
    stage([&](std::size_t i) {
      return a51 * k_[0][i] + a52 * k_[1][i] + a53 * k_[2][i] + a54 * k_[3][i];
    });
    k_[4] = rhs(x_ + c5 * h, tmp);
    stage([&](std::size_t i) {
      return a61 * k_[0][i] + a62 * k_[1][i] + a63 * k_[2][i] + a64 * k_[3][i] + a65 * k_[4][i];
    });
    k_[5] = rhs(x_ + h, tmp);
    stage([&](std::size_t i) {
      return b1 * k_[0][i] + b3 * k_[2][i] + b4 * k_[3][i] + b5 * k_[4][i] + b6 * k_[5][i];
    });
    y_new_ = tmp;
    k_[6] = rhs(x_ + h, y_new_);

    double norm = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double err = h * (e1 * k_[0][i] + e3 * k_[2][i] + e4 * k_[3][i] + e5 * k_[4][i] +
                              e6 * k_[5][i] + e7 * k_[6][i]);
      const double scale = atol + rtol * std::max(std::fabs(y_[i]), std::fabs(y_new_[i]));
      norm = std::max(norm, std::fabs(err) / scale);
    }
    return norm;
  }

  const State& trial() const noexcept { return y_new_; }

  /// Commits the last trial step, keeping the data needed by `dense`.
  void accept() {
    y_old_ = y_;
    x_old_ = x_;
    for (std::size_t s = 0; s < 7; ++s) k_old_[s] = k_[s];
    h_old_ = h_;
    x_ = x_old_ + h_;
    y_ = y_new_;
    k_[0] = k_[6];
  }

  /// Interpolates the last accepted step at x in [x_old, x].
  State dense(double x) const {
    static constexpr double p[7][4] = {
        {1.0, -8048581381.0 / 2820520608.0, 8663915743.0 / 2820520608.0, -12715105075.0 / 11282082432.0},
        {0.0, 0.0, 0.0, 0.0},
        {0.0, 131558114200.0 / 32700410799.0, -68118460800.0 / 10900136933.0, 87487479700.0 / 32700410799.0},
        {0.0, -1754552775.0 / 470086768.0, 14199869525.0 / 1410260304.0, -10690763975.0 / 1880347072.0},
        {0.0, 127303824393.0 / 49829197408.0, -318862633887.0 / 49829197408.0, 701980252875.0 / 199316789632.0},
        {0.0, -282668133.0 / 205662961.0, 2019193451.0 / 616988883.0, -1453857185.0 / 822651844.0},
        {0.0, 40617522.0 / 29380423.0, -110615467.0 / 29380423.0, 69997945.0 / 29380423.0},
    };
    const double theta = (x - x_old_) / h_old_;
    const double powers[4] = {theta, theta * theta, theta * theta * theta, theta * theta * theta * theta};
    State out = y_old_;
    for (std::size_t s = 0; s < 7; ++s) {
      const double w = p[s][0] * powers[0] + p[s][1] * powers[1] + p[s][2] * powers[2] + p[s][3] * powers[3];
      if (w == 0.0) continue;
      for (std::size_t i = 0; i < N; ++i) out[i] += h_old_ * w * k_old_[s][i];
    }
    return out;
  }

  double step_start() const noexcept { return x_old_; }

  /// Fifth-order solution of a fresh step of size h taken from the start of
  /// the last accepted step. Leaves the stepper untouched.
  template <class Rhs>
  State step_from_start(Rhs&& rhs, double h) const {
    Dopri5 probe;
    probe.x_ = x_old_;
    probe.y_ = y_old_;
    probe.k_[0] = k_old_[0];
    probe.attempt(rhs, h, 1.0, 1.0);
    return probe.y_new_;
  }

 private:
  double x_ = 0.0;
  double h_ = 0.0;
  State y_{};
  State y_new_{};
  std::array<State, 7> k_{};

  double x_old_ = 0.0;
  double h_old_ = 1.0;
  State y_old_{};
  std::array<State, 7> k_old_{};
};

/// PI step-size controller in the form used by Hairer's DOPRI5 code.
class StepController {
 public:
  /// Factor for the next step after an accepted step with error `err`.
  double accepted(double err) {
    const double e = std::max(err, 1e-10);
    double fac = 0.9 * std::pow(e, -0.17) * std::pow(prev_err_, 0.04);
    prev_err_ = std::max(err, 1e-4);
    return std::clamp(fac, 0.2, 10.0);
  }

  /// Factor for retrying after a rejected step.
  double rejected(double err) const { return std::max(0.2, 0.9 * std::pow(err, -0.2)); }

 private:
  double prev_err_ = 1e-4;
};

}  // namespace fucik::detail
