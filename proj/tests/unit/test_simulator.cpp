#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ddestab/error.hpp"
#include "ddestab/params.hpp"
#include "ddestab/simulator.hpp"

using namespace ddestab;

namespace {

InitialData sine_data(double l, double a0 = 1.0) {
  InitialData d;
  d.c0 = [l](double x) { return std::sin(std::numbers::pi * x / l); };
  d.a0 = a0;
  d.history = [](double) { return 0.0; };
  return d;
}

InitialData zero_data(double a0) {
  InitialData d;
  d.c0 = [](double) { return 0.0; };
  d.a0 = a0;
  d.history = [](double) { return 0.0; };
  return d;
}

}  // namespace

TEST_CASE("delay line") {
  DelayLine line(3);
  for (double v : {1.0, 2.0, 3.0, 4.0}) line.push(v);
  CHECK(line.newest() == 4.0);
  CHECK(line.at(1) == 3.0);
  CHECK(line.oldest() == 2.0);
  const auto w = line.window();
  REQUIRE(w.size() == 3);
  CHECK(w[0] == 4.0);
  CHECK(w[2] == 2.0);
  for (int i = 0; i < 10; ++i) line.push(10.0 + i);
  CHECK(line.window()[0] == 19.0);
  CHECK(line.window()[2] == 17.0);
}

TEST_CASE("init") {
  const SystemParams p = SystemParams::validate({1, 1, 1, 1, 1, 0.3});
  const Simulator sim(p, SimConfig{100, 1.0, 1.0, 1});
  CHECK(sim.dt() == doctest::Approx(0.01));
  CHECK(sim.delay_steps() == 30);
  const SimState z = sim.init(zero_data(1.0));
  CHECK(z.a == 1.0);
  for (double v : z.c) CHECK(v == 0.0);
  CHECK_NOTHROW(sim.init(sine_data(1.0)));

  InitialData bad = zero_data(0.0);
  bad.c0 = [](double) { return 1.0; };
  CHECK_THROWS_AS(sim.init(bad), Error);
  InitialData mismatch = zero_data(0.0);
  mismatch.history = [](double) { return 0.5; };
  CHECK_THROWS_AS(sim.init(mismatch), Error);
  CHECK_THROWS_AS(Simulator(p, SimConfig{0, 1.0, 1.0, 1}), Error);
  CHECK_THROWS_AS(Simulator(p, SimConfig{10, -1.0, 1.0, 1}), Error);
}

TEST_CASE("pure transport is an exact shift") {
  const SystemParams p = SystemParams::validate({1, 0, 0, 2, 1.5, 0.4});
  const Simulator sim(p, SimConfig{50, 1.0, 1.0, 1});
  InitialData d = sine_data(2.0, 0.0);
  SimState s = sim.init(d);
  for (int k = 0; k < 7; ++k) {
    const auto before = s.c;
    sim.step(s);
    CHECK(s.c[0] == 0.0);
    for (std::size_t j = 1; j < s.c.size(); ++j) CHECK(s.c[j] == before[j - 1]);
  }
}

TEST_CASE("decoupled activation decays exactly") {
  const SystemParams p = SystemParams::validate({1.7, 0, 0.4, 1, 1, 0.25});
  const Simulator sim(p, SimConfig{40, 2.0, 1.0, 1});
  SimState s = sim.init(zero_data(1.3));
  for (int k = 1; k <= 120; ++k) {
    sim.step(s);
    for (double v : s.c) CHECK(v == 0.0);
  }
  CHECK(s.a == doctest::Approx(1.3 * std::exp(-1.7 * s.t)).epsilon(1e-10));
}

TEST_CASE("transport with decay and constant source") {
  // a stays 0 with beta > 0 only if c(l, .) = 0 earlier; use beta = 0 and check c decay
  const SystemParams p = SystemParams::validate({1, 0, 0.8, 1, 1, 0});
  const Simulator sim(p, SimConfig{20, 1.0, 1.0, 1});
  SimState s = sim.init(sine_data(1.0, 0.0));
  const auto c0 = s.c;
  for (int k = 0; k < 5; ++k) sim.step(s);
  for (std::size_t j = 5; j < s.c.size(); ++j) {
    CHECK(s.c[j] == doctest::Approx(c0[j - 5] * std::exp(-0.8 * s.t)).epsilon(1e-13));
  }
}

TEST_CASE("linearity") {
  const SystemParams p = SystemParams::validate({1, 0.5, 1, 1, 1, 0.3});
  const Simulator sim(p, SimConfig{60, 3.0, 1.0, 1});
  SimState a = sim.init(sine_data(1.0, 1.0));
  SimState b = sim.init(zero_data(-2.0));
  InitialData sum = sine_data(1.0, 1.0);
  sum.c0 = [](double x) { return 3.0 * std::sin(std::numbers::pi * x); };
  sum.a0 = 3.0 * 1.0 + 2.0 * -2.0;
  SimState c = sim.init(sum);
  for (int k = 0; k < 150; ++k) {
    sim.step(a);
    sim.step(b);
    sim.step(c);
  }
  CHECK(c.a == doctest::Approx(3.0 * a.a + 2.0 * b.a).epsilon(1e-12));
  for (std::size_t j = 0; j < c.c.size(); ++j) {
    CHECK(c.c[j] == doctest::Approx(3.0 * a.c[j] + 2.0 * b.c[j]).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("self-convergence at t = 1") {
  const SystemParams p = SystemParams::validate({1, 0.5, 1, 1, 1, 0.3});
  auto final_state = [&](int nx) {
    const Simulator sim(p, SimConfig{nx, 1.0, 1.0, 1});
    return sim.run(sine_data(1.0)).states.back();
  };
  const SimSnapshot coarse = final_state(100), fine = final_state(400);
  CHECK(coarse.t == doctest::Approx(1.0));
  CHECK(fine.t == doctest::Approx(1.0));
  CHECK(std::abs(coarse.a - fine.a) <= 1e-4 * std::abs(fine.a));
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < coarse.c.size(); ++j) {
    const double d = coarse.c[j] - fine.c[4 * j];
    num += d * d;
    den += fine.c[4 * j] * fine.c[4 * j];
  }
  CHECK(std::sqrt(num / den) <= 1e-4);
}

TEST_CASE("energy") {
  const SystemParams p = SystemParams::validate({1, 0.5, 1, 1, 1, 0});
  const Simulator sim(p, SimConfig{200, 1.0, 1.0, 1});
  CHECK(sim.energy(sim.init(zero_data(0.0)), 1.0) == 0.0);
  CHECK(sim.energy(sim.init(zero_data(2.0)), 0.7) == doctest::Approx(2.0));

  SimState s = sim.init(zero_data(0.0));
  for (std::size_t j = 1; j < s.c.size(); ++j) s.c[j] = 1.0;
  // (1/2) dx (sum_{j>=1} 1 - 1/2) = 1/2 - dx/4
  CHECK(sim.energy(s, 1.0) == doctest::Approx(0.5 - sim.dx() / 4.0).epsilon(1e-14));

  // delay term: constant outflow 1 over the window gives (gamma/2) int_0^tau e^{-(r - tau)} dr
  const SystemParams q = SystemParams::validate({1, 0.5, 1, 1, 1, 0.5});
  const Simulator sq(q, SimConfig{400, 1.0, 1.0, 1});
  InitialData hist = zero_data(0.0);
  SimState h = sq.init(hist);
  for (std::size_t k = 0; k < h.history.size(); ++k) h.history.push(1.0);
  h.c.assign(h.c.size(), 0.0);
  const double want = 0.5 * 0.8 * (std::exp(0.5) - 1.0);
  CHECK(sq.energy(h, 0.8) == doctest::Approx(want).epsilon(1e-5));
}

TEST_CASE("run records on the stride and at the end") {
  const SystemParams p = SystemParams::validate({1, 0.5, 1, 1, 1, 0.3});
  const Simulator sim(p, SimConfig{10, 1.05, 1.0, 4});
  const SimResult r = sim.run(sine_data(1.0));
  CHECK(r.energy.samples.front().t == 0.0);
  CHECK(r.energy.samples.back().t == doctest::Approx(1.1));
  CHECK(r.energy.samples.size() == r.states.size());
  CHECK(r.energy.samples[1].t == doctest::Approx(0.4));
}

TEST_CASE("fit_decay_rate") {
  EnergyTrace synthetic;
  for (int k = 0; k <= 100; ++k) synthetic.samples.push_back({0.1 * k, std::exp(-0.05 * k), 0, 0});
  const DecayFit fit = fit_decay_rate(synthetic, 0.0, 10.0);
  CHECK(fit.rate == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(fit_decay_rate(synthetic, 3.0, 3.5), Error);

  EnergyTrace zeros = synthetic;
  zeros.samples[50].energy = 0.0;
  CHECK(fit_decay_rate(zeros, 0.0, 10.0).decayed_to_zero);

  const SystemParams p = SystemParams::validate({0.8, 0, 1, 1, 1, 0.2});
  const Simulator sim(p, SimConfig{50, 5.0, 1.0, 5});
  const DecayFit decoupled = fit_decay_rate(sim.run(zero_data(1.0)).energy, 1.0, 5.0);
  CHECK(decoupled.rate == doctest::Approx(1.6).epsilon(1e-8));
}

TEST_CASE("energy decays under the certificate") {
  const SystemParams p = SystemParams::validate({1, 0.5, 1, 1, 1, 0.3});
  const double gamma = std::exp(-0.3);
  const auto cert = decay_certificate(p);
  REQUIRE(cert);
  const Simulator sim(p, SimConfig{100, 200.0, gamma, 20});
  const SimResult r = sim.run(sine_data(1.0));
  for (const EnergySample& e : r.energy.samples) CHECK(e.energy > 0.0);
  CHECK(fit_decay_rate(r.energy, 50.0, 200.0).rate >= 0.95 * cert->rate);
}
