#include "dmsfi/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dmsfi::ode {

namespace {

constexpr double C[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double A[7][6] = {
    {0, 0, 0, 0, 0, 0},
    {1.0 / 5, 0, 0, 0, 0, 0},
    {3.0 / 40, 9.0 / 40, 0, 0, 0, 0},
    {44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0, 0},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656, 0},
    {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
// 5th-order minus embedded 4th-order weights (7 stages, FSAL)
constexpr double E[7] = {-71.0 / 57600, 0,  71.0 / 16695, -71.0 / 1920,
                         17253.0 / 339200, -22.0 / 525, 1.0 / 40};
// dense output: y(t_old + x h) = y_old + h sum_j (K^T P)_j x^(j+1)
constexpr double P[7][4] = {
    {1, -8048581381.0 / 2820520608, 8663915743.0 / 2820520608, -12715105075.0 / 11282082432},
    {0, 0, 0, 0},
    {0, 131558114200.0 / 32700410799, -68118460800.0 / 10900136933,
     87487479700.0 / 32700410799},
    {0, -1754552775.0 / 470086768, 14199869525.0 / 1410260304, -10690763975.0 / 1880347072},
    {0, 127303824393.0 / 49829197408, -318862633887.0 / 49829197408,
     701980252875.0 / 199316789632},
    {0, -282668133.0 / 205662961, 2019193451.0 / 616988883, -1453857185.0 / 822651844},
    {0, 40617522.0 / 29380423, -110615467.0 / 29380423, 69997945.0 / 29380423}};

double rms_norm(const Vec& err, const Vec& y0, const Vec& y1, double rtol, double atol) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = std::abs(err[i]) / sc;
    s += r * r;
  }
  return err.size() ? std::sqrt(s / err.size()) : 0.0;
}

}  // namespace

Dopri5::Dopri5(Rhs f, double t0, Vec y0, const Options& opt)
    : f_(std::move(f)), opt_(opt), t_(t0), t_old_(t0), y_(std::move(y0)) {
  for (auto& k : k_) k.resize(y_.size());
  f_(t_, y_, k_[0]);
  stats_.rhs_evals = 1;
  y_old_ = y_;
  h_ = opt_.first_step > 0.0 ? opt_.first_step : initial_step();
  h_ = std::min(h_, opt_.max_step);
}

double Dopri5::initial_step() {
  // Hairer, Norsett & Wanner, starting step heuristic
  const Vec zero = Vec::Zero(y_.size());
  const double d0 = rms_norm(y_, zero, y_, opt_.rtol, opt_.atol);
  const double d1 = rms_norm(k_[0], zero, y_, opt_.rtol, opt_.atol);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, opt_.max_step);
  Vec y1 = y_ + h0 * k_[0];
  Vec f1(y_.size());
  f_(t_ + h0, y1, f1);
  ++stats_.rhs_evals;
  const double d2 = rms_norm(f1 - k_[0], zero, y_, opt_.rtol, opt_.atol) / h0;
  const double h1 = std::max(d1, d2) <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                                              : std::pow(0.01 / std::max(d1, d2), 1.0 / 5);
  return std::min(100 * h0, h1);
}

void Dopri5::step(double t_limit) {
  const double span = t_limit - t_;
  if (span <= 0.0) throw IntegrationError("Dopri5::step: t_limit must lie ahead of t");
  const long budget = opt_.max_steps;
  Vec ytmp(y_.size()), y_new(y_.size());
  double h = std::min({h_, span, opt_.max_step});
  while (true) {
    const double min_step = 10.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t_));
    if (h < min_step) {
      std::ostringstream os;
      os << "step size underflow at t = " << t_ << " (h = " << h << ")";
      throw IntegrationError(os.str());
    }
    if (stats_.accepted + stats_.rejected >= budget)
      throw IntegrationError("maximum number of steps exceeded");
    for (int s = 1; s < 6; ++s) {
      ytmp = y_;
      for (int j = 0; j < s; ++j)
        if (A[s][j] != 0.0) ytmp.noalias() += (h * A[s][j]) * k_[j];
      f_(t_ + C[s] * h, ytmp, k_[s]);
    }
    y_new = y_;
    for (int j = 0; j < 6; ++j)
      if (A[6][j] != 0.0) y_new.noalias() += (h * A[6][j]) * k_[j];
    const double t_new = (h == span) ? t_limit : t_ + h;
    f_(t_new, y_new, k_[6]);
    stats_.rhs_evals += 6;
    Vec err = Vec::Zero(y_.size());
    for (int j = 0; j < 7; ++j)
      if (E[j] != 0.0) err.noalias() += (h * E[j]) * k_[j];
    const double en = rms_norm(err, y_, y_new, opt_.rtol, opt_.atol);
    if (en <= 1.0) {
      const double fac = en == 0.0 ? 10.0 : std::min(10.0, 0.9 * std::pow(en, -0.2));
      Q_.resize(y_.size(), 4);
      for (int c = 0; c < 4; ++c) {
        Q_.col(c).setZero();
        for (int j = 0; j < 7; ++j)
          if (P[j][c] != 0.0) Q_.col(c).noalias() += P[j][c] * k_[j];
      }
      y_old_ = y_;
      t_old_ = t_;
      y_ = y_new;
      t_ = t_new;
      k_[0] = k_[6];
      h_ = std::min(h * fac, opt_.max_step);
      ++stats_.accepted;
      return;
    }
    ++stats_.rejected;
    h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
  }
}

Vec Dopri5::dense(double t) const {
  const double h = t_ - t_old_;
  if (h == 0.0) return y_;
  const double x = (t - t_old_) / h;
  Vec out = y_old_;
  double p = x;
  for (int c = 0; c < 4; ++c) {
    out.noalias() += (h * p) * Q_.col(c);
    p *= x;
  }
  return out;
}

Stats integrate(const Rhs& f, double t0, const Vec& y0, const std::vector<double>& t_out,
                const std::function<void(double, const Vec&)>& out, const Options& opt,
                const std::vector<double>& breakpoints) {
  Dopri5 solver(f, t0, y0, opt);
  Stats total;
  std::size_t k = 0;
  while (k < t_out.size() && t_out[k] <= t0) out(t_out[k++], y0);
  if (k == t_out.size()) return solver.stats();
  const double t_end = t_out.back();
  auto b = std::upper_bound(breakpoints.begin(), breakpoints.end(), t0);
  while (k < t_out.size()) {
    const double stop = (b != breakpoints.end() && *b < t_end) ? *b : t_end;
    solver.step(stop);
    while (k < t_out.size() && t_out[k] <= solver.t()) {
      if (t_out[k] == solver.t())
        out(t_out[k], solver.y());
      else
        out(t_out[k], solver.dense(t_out[k]));
      ++k;
    }
    if (solver.t() == stop && stop < t_end) {
      // restart so no step straddles the kink
      const Stats& s = solver.stats();
      total.accepted += s.accepted;
      total.rejected += s.rejected;
      total.rhs_evals += s.rhs_evals;
      solver = Dopri5(f, stop, solver.y(), opt);
      while (b != breakpoints.end() && *b <= stop) ++b;
    }
  }
  total.accepted += solver.stats().accepted;
  total.rejected += solver.stats().rejected;
  total.rhs_evals += solver.stats().rhs_evals;
  return total;
}

}  // namespace dmsfi::ode
