#include "ddestab/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ddestab/error.hpp"
#include "ddestab/kernels.hpp"

namespace ddestab {

DelayLine::DelayLine(std::size_t length) : buf_(2 * length, 0.0), len_(length) {
  if (length == 0) throw Error(ErrorCode::InvalidArgument, "delay line needs at least one sample");
}

void DelayLine::push(double value) noexcept {
  head_ = (head_ == 0 ? len_ : head_) - 1;
  buf_[head_] = value;
  buf_[head_ + len_] = value;
}

Simulator::Simulator(const SystemParams& p, const SimConfig& cfg) : p_(p), cfg_(cfg) {
  if (cfg.nx < 2) throw Error(ErrorCode::InvalidArgument, "nx must be >= 2");
  if (!(cfg.t_final > 0.0)) throw Error(ErrorCode::InvalidArgument, "t_final must be > 0");
  if (!(cfg.gamma > 0.0)) throw Error(ErrorCode::InvalidArgument, "gamma must be > 0");
  if (cfg.output_stride < 1) throw Error(ErrorCode::InvalidArgument, "output_stride must be >= 1");

  dx_ = p.l() / cfg.nx;
  dt_ = dx_ / p.f();
  n_tau_ = static_cast<int>(std::lround(p.tau() / dt_));

  const double d = p.delta();
  c_decay_ = std::exp(-d * dt_);
  c_source_ = std::abs(d * dt_) < 1e-12 ? dt_ : -std::expm1(-d * dt_) / d;

  const double al = p.alpha();
  const double one_minus = -std::expm1(-al * dt_);
  a_decay_ = 1.0 - one_minus;
  w_new_ = (al * dt_ - one_minus) / (al * al * dt_);
  w_old_ = one_minus / al - w_new_;

  const std::size_t len = static_cast<std::size_t>(n_tau_) + 1;
  energy_weights_.assign(len, 0.0);
  norm_weights_.assign(len, 0.0);
  if (n_tau_ > 0) {
    const double tau_eff = n_tau_ * dt_;
    for (std::size_t k = 0; k < len; ++k) {
      const double trap = (k == 0 || k + 1 == len) ? 0.5 : 1.0;
      norm_weights_[k] = trap;
      energy_weights_[k] = trap * std::exp(tau_eff - static_cast<double>(k) * dt_);
    }
  }
}

double Simulator::delay_rounding_error() const noexcept { return std::abs(n_tau_ * dt_ - p_.tau()); }

SimState Simulator::init(const InitialData& data) const {
  if (!data.c0 || !data.history) throw Error(ErrorCode::InvalidArgument, "initial data functions are required");
  if (std::abs(data.c0(0.0)) > 1e-12) {
    throw Error(ErrorCode::IncompatibleBoundary, "c0(0) must vanish");
  }
  const double c0_l = data.c0(p_.l());
  if (std::abs(data.history(0.0) - c0_l) > 1e-10) {
    throw Error(ErrorCode::HistoryMismatch, "history(0) must equal c0(l)");
  }

  SimState s;
  s.t = 0.0;
  s.a = data.a0;
  s.c.resize(static_cast<std::size_t>(cfg_.nx) + 1);
  for (int j = 0; j <= cfg_.nx; ++j) s.c[j] = data.c0(j * dx_);
  s.c.front() = 0.0;

  s.history = DelayLine(static_cast<std::size_t>(n_tau_) + 1);
  for (int k = n_tau_; k >= 1; --k) {
    s.history.push(data.history(std::max(-k * dt_, -p_.tau())));
  }
  s.history.push(s.c.back());
  return s;
}

void Simulator::step(SimState& s) const {
  const double beta = p_.beta();
  const double u_old = s.history.oldest();  // c(l, t - tau)
  double u_new = n_tau_ >= 1 ? s.history.at(static_cast<std::size_t>(n_tau_) - 1)
                             : s.c[s.c.size() - 2] * c_decay_ + beta * s.a * c_source_;

  const double a_pred = s.a * a_decay_ + u_old * w_old_ + u_new * w_new_;
  const double a_mid = 0.5 * (s.a + a_pred);

  std::vector<double> next(s.c.size());
  kernels::transport_step(s.c, next, c_decay_, beta * a_mid * c_source_);
  s.c.swap(next);

  if (n_tau_ == 0) {
    u_new = s.c.back();
    s.a = s.a * a_decay_ + u_old * w_old_ + u_new * w_new_;
  } else {
    s.a = a_pred;
  }
  s.history.push(s.c.back());
  s.t += dt_;
}

double Simulator::delay_integral(const SimState& s, std::span<const double> weights) const {
  if (n_tau_ == 0) return 0.0;
  return dt_ * kernels::weighted_sum_squares(s.history.window(), weights);
}

double Simulator::energy(const SimState& s, double gamma) const {
  const double spatial = dx_ * kernels::trapezoid_sum_squares(s.c);
  return 0.5 * spatial + 0.5 * s.a * s.a + 0.5 * gamma * delay_integral(s, energy_weights_);
}

double Simulator::norm_sq(const SimState& s) const {
  const double spatial = dx_ * kernels::trapezoid_sum_squares(s.c);
  return spatial + s.a * s.a + p_.f() * delay_integral(s, norm_weights_);
}

SimResult Simulator::run(const InitialData& data) const {
  SimState s = init(data);
  SimResult out;
  const long steps = std::lround(std::ceil(cfg_.t_final / dt_ - 1e-9));
  auto record = [&](long k) {
    const double t = static_cast<double>(k) * dt_;
    s.t = t;
    out.states.push_back(SimSnapshot{t, s.c, s.a, {s.history.window().begin(), s.history.window().end()}});
    out.energy.samples.push_back(EnergySample{t, energy(s, cfg_.gamma), s.a * s.a, s.c.back()});
  };
  record(0);
  for (long k = 1; k <= steps; ++k) {
    step(s);
    if (k % cfg_.output_stride == 0 || k == steps) record(k);
  }
  return out;
}

DecayFit fit_decay_rate(const EnergyTrace& trace, double t_start, double t_end) {
  double n = 0.0, st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0, syy = 0.0;
  bool nonpositive = false;
  for (const EnergySample& e : trace.samples) {
    if (e.t < t_start || e.t > t_end) continue;
    n += 1.0;
    if (!(e.energy > 0.0)) {
      nonpositive = true;
      continue;
    }
    const double y = std::log(e.energy);
    st += e.t;
    sy += y;
    stt += e.t * e.t;
    sty += e.t * y;
    syy += y * y;
  }
  if (n < 10.0) throw Error(ErrorCode::DegenerateWindow, "fewer than 10 samples in the fit window");
  DecayFit fit;
  if (nonpositive) {
    fit.rate = std::numeric_limits<double>::infinity();
    fit.decayed_to_zero = true;
    return fit;
  }
  const double vt = stt - st * st / n;
  const double vy = syy - sy * sy / n;
  const double cov = sty - st * sy / n;
  const double slope = cov / vt;
  fit.rate = -slope;
  fit.r_squared = vy > 0.0 ? cov * cov / (vt * vy) : 1.0;
  return fit;
}

}  // namespace ddestab
