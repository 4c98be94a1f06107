#include <doctest.h>

#include <cmath>

#include "planta/powerchain.hpp"
#include "support.hpp"

using namespace planta;
using namespace planta::power;
using test::error_code_of;

namespace {
constexpr double kDay = 86400.0;
// Energy one reading draws at 1 mA for 0.935 s starting from 3.3 V:
// V_end = 3.3 - I t / C, E = C/2 (3.3^2 - V_end^2).
constexpr double kReadEnergy = 2.58878125e-3;
}  // namespace

TEST_CASE("stored energy at the wake voltage") {
  const PowerChainConfig cfg;
  CHECK(std::abs(cfg.wake_energy() - 4.7916e-3) <= 1e-9);
  CHECK(cfg.usable_energy() == doctest::Approx(0.5 * 880e-6 * (3.3 * 3.3 - 1.8 * 1.8)));
  CHECK(3.3 * 1e-3 * 0.935 <= cfg.usable_energy());
}

TEST_CASE("config validation") {
  PowerChainConfig cfg;
  cfg.brownout_voltage = 3.5;
  CHECK(error_code_of([&] { cfg.validate(); }) == ErrorCode::InvalidArgument);
  cfg = {};
  cfg.capacitance = 0;
  CHECK(error_code_of([&] { cfg.validate(); }) == ErrorCode::NonPositive);
  cfg = {};
  cfg.converter_efficiency = 1.2;
  CHECK(error_code_of([&] { cfg.validate(); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("step with no harvest only advances time") {
  const PowerChainConfig cfg;
  auto s = initial_state(cfg);
  s.cap_voltage = 2.0;
  const auto out = step(cfg, s, 0.0);
  CHECK(out.state.time == 1.0);
  CHECK(out.state.cap_voltage == 2.0);
  CHECK(out.state.mode == Mode::Charging);
  CHECK(out.events.empty());
  CHECK(error_code_of([&] { step(cfg, s, -1.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("one reading from a full bank") {
  PowerChainConfig cfg;
  cfg.initial_voltage = 3.3;
  const auto r = simulate_constant(cfg, 0.0, 10.0);
  REQUIRE(r.events.size() == 1);
  const auto& ev = r.events.front();
  CHECK(ev.completed);
  CHECK(ev.start_time == 0.0);
  CHECK(ev.energy_used == doctest::Approx(kReadEnergy).epsilon(1e-12));
  CHECK(ev.end_voltage == doctest::Approx(3.3 - 1e-3 * 0.935 / 880e-6).epsilon(1e-12));
  CHECK(ev.energy_used <= cfg.usable_energy());
}

TEST_CASE("brownout aborts the reading") {
  PowerChainConfig cfg;
  cfg.initial_voltage = 3.3;
  cfg.active_current = 2e-3;  // 1.87 mC from 880 uF drops 2.125 V
  const auto r = simulate_constant(cfg, 0.0, 10.0);
  REQUIRE(r.events.size() == 1);
  CHECK_FALSE(r.events.front().completed);
  CHECK(r.events.front().end_voltage == doctest::Approx(1.8).epsilon(1e-12));
  CHECK(r.completed_readings() == 0);
}

TEST_CASE("0.25 uW for 24 h gives five readings") {
  const PowerChainConfig cfg;
  const auto r = simulate_constant(cfg, 0.25e-6, kDay);
  CHECK(r.completed_readings() == 5);
  CHECK(std::abs(r.ledger_residual(cfg)) <= 1e-9);
  for (const auto& ev : r.events) {
    CHECK(ev.start_voltage == doctest::Approx(cfg.wake_voltage).epsilon(1e-12));
    if (ev.completed) CHECK(ev.end_voltage >= cfg.brownout_voltage);
  }
  CHECK(r.final_state.energy_delivered <= r.final_state.energy_harvested);
}

TEST_CASE("zero and huge harvest") {
  const PowerChainConfig cfg;
  CHECK(simulate_constant(cfg, 0.0, kDay).completed_readings() == 0);
  const auto r = simulate_constant(cfg, 1.0, kDay);
  // Latency-bound: each cycle is the reading plus a millisecond-scale refill.
  const double refill = kReadEnergy / (0.8 * 1.0);
  CHECK(r.completed_readings() <= static_cast<std::size_t>(kDay / 0.935));
  CHECK(r.completed_readings() >= static_cast<std::size_t>(kDay / (0.935 + refill)) - 1);
  CHECK(std::abs(r.ledger_residual(cfg)) <= 1e-9 * std::max(1.0, r.final_state.energy_delivered));
}

TEST_CASE("ledger is conserved over a 40 day run") {
  const PowerChainConfig cfg;
  const auto r = simulate_constant(cfg, 0.25e-6, 40 * kDay);
  CHECK(std::abs(r.ledger_residual(cfg)) <= 40e-9);
  CHECK(r.completed_readings() == 266);
}

TEST_CASE("minimum power for five readings in a day") {
  const PowerChainConfig cfg;
  const double expected =
      (cfg.wake_energy() + 4 * kReadEnergy) / (0.8 * (kDay - 5 * 0.935));
  CHECK(expected == doctest::Approx(2.19149e-7).epsilon(1e-5));
  const double tol = 1e-12;
  const double p = min_power_for_readings(cfg, 5, kDay, tol);
  CHECK(std::abs(p - expected) <= 2 * tol);
  CHECK(simulate_constant(cfg, p, kDay).completed_readings() >= 5);
  CHECK(simulate_constant(cfg, p - 2 * tol, kDay).completed_readings() < 5);
  CHECK(min_power_for_readings(cfg, 0, kDay) == 0.0);
  CHECK(error_code_of([&] { min_power_for_readings(cfg, 1, 0.5); }) == ErrorCode::Infeasible);
  CHECK(min_power_for_readings(cfg, 6, kDay) > p);
}

TEST_CASE("property: readings are monotone in harvest power") {
  const PowerChainConfig cfg;
  test::Rng rng(21);
  std::size_t prev = 0;
  double p = 0;
  for (int i = 0; i < 40; ++i) {
    p += rng.uniform(0, 5e-8);
    const auto n = simulate_constant(cfg, p, kDay).completed_readings();
    CHECK(n >= prev);
    prev = n;
  }
}

TEST_CASE("property: halving the timestep changes readings by at most one") {
  test::Rng rng(23);
  for (int i = 0; i < 20; ++i) {
    PowerChainConfig a;
    a.timestep = rng.uniform(0.5, 60);
    PowerChainConfig b = a;
    b.timestep = a.timestep / 2;
    const double p = rng.uniform(1e-8, 2e-6);
    const auto na = simulate_constant(a, p, kDay).completed_readings();
    const auto nb = simulate_constant(b, p, kDay).completed_readings();
    CHECK(std::max(na, nb) - std::min(na, nb) <= 1);
  }
}

TEST_CASE("harvest profiles are sampled zero-order hold") {
  const PowerChainConfig cfg;
  // Daytime-only harvest: 0.5 uW for 12 h then nothing.
  const auto prof =
      test::make_series({0, 12 * 3600.0}, {0.5e-6, 0.0}, Unit::Watt);
  const auto r = simulate(cfg, prof, kDay);
  const auto split = count_day_night(r.events, 0, 12);
  CHECK(split.night == 0);
  CHECK(split.day == r.completed_readings());
  CHECK(std::abs(r.ledger_residual(cfg)) <= 1e-9);
}

TEST_CASE("day and night split") {
  std::vector<ReadingEvent> ev(4);
  ev[0].start_time = 5 * 3600.0;
  ev[1].start_time = 6 * 3600.0;
  ev[2].start_time = 17.99 * 3600;
  ev[3].start_time = kDay + 18 * 3600.0;
  for (auto& e : ev) e.completed = true;
  const auto s = count_day_night(ev);
  CHECK(s.day == 2);
  CHECK(s.night == 2);
}

TEST_CASE("event log csv") {
  ReadingEvent e;
  e.start_time = 12.5;
  e.completed = true;
  e.energy_used = 0.001;
  CHECK(event_log_to_csv({e}) == "start_time,completed,energy_used_joules\n12.5,true,0.001\n");
}
