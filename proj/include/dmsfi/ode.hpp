#pragma once

#include <Eigen/Dense>

#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace dmsfi::ode {

using Vec = Eigen::VectorXcd;
using Rhs = std::function<void(double t, const Vec& y, Vec& dydt)>;

class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  double rtol = 1e-8;
  double atol = 1e-10;
  double max_step = std::numeric_limits<double>::infinity();
  double first_step = 0.0;  // 0: automatic
  long max_steps = 50'000'000;
};

struct Stats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evals = 0;
};

/// Dormand-Prince 5(4) with the standard quartic dense output and FSAL.
/// Error norm is the RMS of |err_i| / (atol + rtol max(|y_i|, |y_new_i|)).
class Dopri5 {
 public:
  Dopri5(Rhs f, double t0, Vec y0, const Options& opt = {});

  /// One accepted step, not going past t_limit. Throws IntegrationError when
  /// the step size underflows.
  void step(double t_limit);

  double t() const { return t_; }
  const Vec& y() const { return y_; }
  double t_previous() const { return t_old_; }
  double last_step() const { return t_ - t_old_; }
  /// Interpolated state inside the last step [t_previous, t].
  Vec dense(double t) const;
  const Stats& stats() const { return stats_; }

 private:
  double initial_step();

  Rhs f_;
  Options opt_;
  double t_, t_old_, h_;
  Vec y_, y_old_;
  Vec k_[7];
  Eigen::MatrixXcd Q_;  // dense-output coefficients of the last step
  Stats stats_;
};

/// Integrates from t0 through every time in t_out (ascending, >= t0) and calls
/// out(t, y) at each one from the dense output. The solver is restarted at
/// every breakpoint (ascending), where the right-hand side may have a kink.
Stats integrate(const Rhs& f, double t0, const Vec& y0, const std::vector<double>& t_out,
                const std::function<void(double, const Vec&)>& out, const Options& opt = {},
                const std::vector<double>& breakpoints = {});

}  // namespace dmsfi::ode
