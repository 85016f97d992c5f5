#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ddestab/params.hpp"

namespace ddestab {

struct SimConfig {
  int nx = 100;            // cells on [0, l]
  double t_final = 10.0;
  double gamma = 1.0;      // weight of the delay term in the energy
  int output_stride = 1;   // record every output_stride steps
};

/// Samples of the outflow c(l, s) over the last delay interval, newest first.
/// Backed by a mirrored ring buffer so the window is always one contiguous span.
class DelayLine {
 public:
  explicit DelayLine(std::size_t length = 1);

  void push(double value) noexcept;
  std::size_t size() const noexcept { return len_; }
  double newest() const noexcept { return buf_[head_]; }
  double oldest() const noexcept { return buf_[head_ + len_ - 1]; }
  /// k steps back: at(0) is c(l, t), at(size()-1) is c(l, t - n_tau dt).
  double at(std::size_t k) const noexcept { return buf_[head_ + k]; }
  std::span<const double> window() const noexcept { return {buf_.data() + head_, len_}; }

 private:
  std::vector<double> buf_;
  std::size_t len_;
  std::size_t head_ = 0;
};

struct SimState {
  double t = 0.0;
  std::vector<double> c;  // c(x_j, t), x_j = j l / nx, j = 0..nx
  double a = 0.0;
  DelayLine history;      // history.newest() == c.back()
};

struct EnergySample {
  double t;
  double energy;
  double a_sq;
  double c_l;
};

struct EnergyTrace {
  std::vector<EnergySample> samples;
};

struct SimSnapshot {
  double t;
  std::vector<double> c;
  double a;
  std::vector<double> history;
};

struct SimResult {
  std::vector<SimSnapshot> states;
  EnergyTrace energy;
};

struct InitialData {
  std::function<double(double)> c0;       // on [0, l], c0(0) = 0
  double a0 = 1.0;
  std::function<double(double)> history;  // c(l, s) for s in [-tau, 0]
};

/// Time stepper for the coupled system on a uniform grid with dt = dx / f, so the
/// transport characteristic crosses exactly one cell per step. The delay is
/// rounded to n_tau = round(tau / dt) steps.
class Simulator {
 public:
  Simulator(const SystemParams& p, const SimConfig& cfg);

  const SystemParams& params() const noexcept { return p_; }
  const SimConfig& config() const noexcept { return cfg_; }
  double dt() const noexcept { return dt_; }
  double dx() const noexcept { return dx_; }
  int delay_steps() const noexcept { return n_tau_; }
  /// |n_tau dt - tau|
  double delay_rounding_error() const noexcept;

  SimState init(const InitialData& data) const;
  void step(SimState& s) const;
  SimResult run(const InitialData& data) const;

  double energy(const SimState& s, double gamma) const;
  /// Squared state-space norm: int c^2 dx + a^2 + f int_{t-tau}^t c(l,s)^2 ds.
  double norm_sq(const SimState& s) const;

 private:
  double delay_integral(const SimState& s, std::span<const double> weights) const;

  SystemParams p_;
  SimConfig cfg_;
  double dx_;
  double dt_;
  int n_tau_;
  double c_decay_;      // exp(-delta dt)
  double c_source_;     // int_0^dt exp(-delta s) ds
  double a_decay_;      // exp(-alpha dt)
  double w_old_;        // integrating-factor weights for a linearly varying input
  double w_new_;
  std::vector<double> energy_weights_;  // trapezoid weights times exp(tau - k dt)
  std::vector<double> norm_weights_;    // plain trapezoid weights
};

struct DecayFit {
  double rate = 0.0;        // -slope of ln E
  double r_squared = 0.0;
  bool decayed_to_zero = false;  // some E <= 0 in the window; rate is +inf
};

/// Least-squares slope of ln E over samples with t in [t_start, t_end].
DecayFit fit_decay_rate(const EnergyTrace& trace, double t_start, double t_end);

}  // namespace ddestab
