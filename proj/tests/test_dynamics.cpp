#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pulsespec/dynamics.hpp"
#include "pulsespec/sequences.hpp"

using namespace pulsespec;

namespace {

SimParams params_for(double t_end, double dt, double delta = 0.0, double gamma = 2.0) {
  SimParams p;
  p.delta = delta;
  p.gamma = gamma;
  p.t_end = t_end;
  p.dt = dt;
  return p;
}

TwoLevelOperator random_operator(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return {cplx(n(rng), n(rng)), cplx(n(rng), n(rng)), cplx(n(rng), n(rng)), cplx(n(rng), n(rng))};
}

}  // namespace

TEST_CASE("free_derivative examples") {
  const auto d = free_derivative(TwoLevelOperator::excited(), 0.0, 2.0);
  CHECK(d == TwoLevelOperator{-2.0, 0.0, 0.0, 2.0});
  const auto c = free_derivative({0.0, 0.0, 1.0, 0.0}, 3.0, 2.0);
  CHECK(c.ge == cplx(-1.0, 3.0));
  CHECK(c.ee == 0.0);
  CHECK(c.eg == 0.0);
  CHECK(free_derivative({}, 3.0, 2.0) == TwoLevelOperator{});
}

TEST_CASE("free_propagator_exact examples") {
  const auto a = free_propagator_exact(TwoLevelOperator::excited(), 1.0, 0.0, 2.0);
  CHECK(a.ee.real() == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
  CHECK(a.gg.real() == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-14));
  const auto b = free_propagator_exact({0.0, 0.0, 1.0, 0.0}, 0.5, 3.0, 2.0);
  CHECK(std::abs(b.ge) == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
  CHECK(std::arg(b.ge) == doctest::Approx(1.5).epsilon(1e-14));
  const TwoLevelOperator op{0.3, cplx(0.1, 0.2), cplx(0.1, -0.2), 0.7};
  CHECK(free_propagator_exact(op, 0.0, 3.0, 2.0) == op);
}

TEST_CASE("rk4_step examples") {
  const auto a = rk4_step(TwoLevelOperator::excited(), 1e-3, 0.0, 2.0);
  CHECK(std::abs(a.ee.real() - std::exp(-2e-3)) < 1e-12);
  CHECK(rk4_step({}, 1e-3, 4.0, 2.0) == TwoLevelOperator{});
}

TEST_CASE("rk4_step converges with fourth order") {
  // Error after a fixed horizon against the exact propagator, halving dt.
  const TwoLevelOperator op{0.6, cplx(0.2, 0.3), cplx(0.2, -0.3), 0.4};
  const double horizon = 2.0;
  const double delta = 6.0;
  std::vector<double> errors;
  for (double dt : {0.1, 0.05, 0.025, 0.0125}) {
    auto s = op;
    const int steps = static_cast<int>(std::lround(horizon / dt));
    for (int i = 0; i < steps; ++i) s = rk4_step(s, dt, delta, 2.0);
    errors.push_back(max_abs_diff(s, free_propagator_exact(op, horizon, delta, 2.0)));
  }
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    CHECK(oracle::observed_order(errors[i], errors[i + 1]) >= 3.9);
  }
}

TEST_CASE("apply_pulse examples") {
  CHECK(apply_pulse(TwoLevelOperator::excited(), PulseAxis::X) == TwoLevelOperator::ground());
  const auto z = apply_pulse({0.3, 0.5, 0.5, 0.7}, PulseAxis::Z);
  CHECK(z == TwoLevelOperator{0.3, -0.5, -0.5, 0.7});

  // sigma_y op sigma_y as an explicit matrix product.
  const TwoLevelOperator op{0.3, cplx(0.0, 0.2), cplx(0.0, -0.2), 0.7};
  const auto expect = oracle::from_mat(oracle::mul(oracle::mul(oracle::sigma_y(), oracle::to_mat(op)), oracle::sigma_y()));
  CHECK(max_abs_diff(expect, TwoLevelOperator{0.7, cplx(0.0, 0.2), cplx(0.0, -0.2), 0.3}) < 1e-15);
  CHECK(max_abs_diff(apply_pulse(op, PulseAxis::Y), expect) == 0.0);
}

TEST_CASE("apply_pulse matches sigma_i op sigma_i and is an involution") {
  std::mt19937_64 rng(5);
  const oracle::Mat2 sig[] = {oracle::sigma_x(), oracle::sigma_y(), oracle::sigma_z()};
  for (int trial = 0; trial < 100; ++trial) {
    const auto op = random_operator(rng);
    for (int a = 0; a < 3; ++a) {
      const auto axis = static_cast<PulseAxis>(a);
      const auto expect = oracle::from_mat(oracle::mul(oracle::mul(sig[a], oracle::to_mat(op)), sig[a]));
      CHECK(max_abs_diff(apply_pulse(op, axis), expect) == 0.0);
      CHECK(apply_pulse(apply_pulse(op, axis), axis) == op);
    }
  }
}

TEST_CASE("evolve_operator: free decay and a single X pulse") {
  const auto p = params_for(2.0, 1e-3);
  const auto none = no_drive_schedule(2.0);
  const auto free = evolve_operator(TwoLevelOperator::excited(), 0.0, 2.0, none, p);
  CHECK(std::abs(free.ee.real() - std::exp(-4.0)) < 1e-10);

  // Oracle: two exact segments with the pulse in between.
  const PulseSchedule one({{1.0, PulseAxis::X}}, 2.0);
  auto oracle_state = free_propagator_exact(TwoLevelOperator::excited(), 1.0, 0.0, 2.0);
  oracle_state = free_propagator_exact(apply_pulse(oracle_state, PulseAxis::X), 1.0, 0.0, 2.0);
  CHECK(oracle_state.ee.real() == doctest::Approx((1.0 - std::exp(-2.0)) * std::exp(-2.0)).epsilon(1e-14));
  CHECK(oracle_state.ee.real() == doctest::Approx(0.117019).epsilon(1e-5));
  const auto got = evolve_operator(TwoLevelOperator::excited(), 0.0, 2.0, one, p);
  CHECK(max_abs_diff(got, oracle_state) < 1e-10);
  CHECK(max_abs_diff(evolve_operator(TwoLevelOperator::excited(), 0.0, 2.0, one, p, Stepper::Exact), oracle_state) <
        1e-13);
}

TEST_CASE("evolve_operator: boundary pulse convention") {
  const PulseSchedule s({{0.5, PulseAxis::X}}, 1.0);
  const auto p = params_for(1.0, 1e-2);
  const auto e = TwoLevelOperator::excited();
  // Pulse at t_to is applied, pulse at t_from is not.
  CHECK(evolve_operator(e, 0.5, 0.5, s, p) == e);
  const auto up_to = evolve_operator(e, 0.0, 0.5, s, p, Stepper::Exact);
  CHECK(up_to.gg.real() == doctest::Approx(std::exp(-1.0)).epsilon(1e-13));
  const auto from = evolve_operator(e, 0.5, 0.6, s, p, Stepper::Exact);
  CHECK(from.ee.real() == doctest::Approx(std::exp(-0.2)).epsilon(1e-13));
  CHECK_THROWS_AS(evolve_operator(e, 0.6, 0.5, s, p), InvalidInterval);
}

TEST_CASE("evolve_operator: chained halves equal one pass") {
  std::mt19937_64 rng(13);
  const auto sched = uhrig_schedule(7, 2.0);
  const auto p = params_for(2.0, 1e-3, 3.0);
  for (int trial = 0; trial < 5; ++trial) {
    const auto op = random_operator(rng);
    const auto whole = evolve_operator(op, 0.0, 2.0, sched, p);
    const auto halves = evolve_operator(evolve_operator(op, 0.0, 1.0, sched, p), 1.0, 2.0, sched, p);
    CHECK(max_abs_diff(whole, halves) < 1e-12);
    // Split points off the grid and at a pulse time.
    const double tp = sched.events()[2].time;
    const auto at_pulse = evolve_operator(evolve_operator(op, 0.0, tp, sched, p), tp, 2.0, sched, p);
    CHECK(max_abs_diff(whole, at_pulse) < 1e-12);
    const auto off = evolve_operator(evolve_operator(op, 0.0, 0.12345, sched, p), 0.12345, 2.0, sched, p);
    CHECK(max_abs_diff(whole, off) < 1e-10);
  }
}

TEST_CASE("evolution is linear in the operator") {
  std::mt19937_64 rng(17);
  const auto sched = periodic_schedule({PulseAxis::X, PulseAxis::Y}, 0.2, 6);
  const auto p = params_for(1.2, 1e-3, 4.0);
  const auto a = random_operator(rng);
  const auto b = random_operator(rng);
  const cplx alpha(0.3, -1.2), beta(-2.0, 0.5);
  const auto lhs = evolve_operator(alpha * a + beta * b, 0.0, 1.2, sched, p);
  const auto rhs = alpha * evolve_operator(a, 0.0, 1.2, sched, p) + beta * evolve_operator(b, 0.0, 1.2, sched, p);
  CHECK(max_abs_diff(lhs, rhs) < 1e-12);
}

TEST_CASE("density_trajectory examples") {
  SUBCASE("free decay") {
    const auto traj = density_trajectory(no_drive_schedule(2.0), params_for(2.0, 1e-3));
    REQUIRE(traj.states.size() == traj.grid.points());
    CHECK(traj.states[0] == TwoLevelOperator::excited());
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
      CHECK(std::abs(traj.states[k].ee.real() - std::exp(-2.0 * traj.grid.at(k))) < 1e-9);
    }
  }
  SUBCASE("periodic X swaps populations at each pulse") {
    const auto sched = periodic_schedule({PulseAxis::X}, 0.2, 5);
    const auto p = params_for(1.0, 1e-3);
    const auto traj = density_trajectory(sched, p);
    for (const auto& e : sched.events()) {
      const auto k = grid_index_of(traj.grid, e.time);
      const auto before = traj.states[k - 1];
      const auto after = traj.states[k];
      const auto pre = rk4_step(before, traj.grid.step, 0.0, 2.0);
      CHECK(max_abs_diff(after, apply_pulse(pre, PulseAxis::X)) < 1e-15);
    }
  }
  SUBCASE("Z pulses never touch populations") {
    const auto p = params_for(2.4, 1e-3, 3.0);
    const auto z = density_trajectory(periodic_schedule({PulseAxis::Z}, 0.2, 12), p);
    const auto none = density_trajectory(no_drive_schedule(2.4), p);
    for (std::size_t k = 0; k < z.states.size(); ++k) CHECK(std::abs(z.states[k].ee - none.states[k].ee) < 1e-14);
  }
}

TEST_CASE("trajectories stay physical under every protocol") {
  const std::vector<PulseSchedule> schedules = {
      no_drive_schedule(2.0),
      periodic_schedule({PulseAxis::X}, 0.2, 10),
      periodic_schedule({PulseAxis::X, PulseAxis::Y}, 0.2, 10),
      periodic_schedule({PulseAxis::Z}, 0.2, 10),
      uhrig_schedule(12, 2.0),
  };
  for (const auto& s : schedules) {
    auto p = params_for(s.window_end(), 1e-3, 3.0);
    const auto traj = density_trajectory(s, p);
    for (const auto& st : traj.states) {
      CHECK(validate_density(st));
      CHECK(st.ee.real() >= 0.0);
      CHECK(st.ee.real() <= 1.0);
    }
  }
}

TEST_CASE("trajectory from a coherent state: rk4 against exact") {
  const auto p = params_for(2.0, 1e-3, 6.0);
  const auto s = no_drive_schedule(2.0);
  const TwoLevelOperator coherent{0.5, 0.5, 0.5, 0.5};
  const auto rk = evolve_path(coherent, 0, s, p, Stepper::Rk4);
  const auto ex = evolve_path(coherent, 0, s, p, Stepper::Exact);
  double worst = 0.0;
  for (std::size_t k = 0; k < rk.size(); ++k) {
    worst = std::max(worst, max_abs_diff(rk[k], ex[k]));
    CHECK(validate_density(rk[k]));
  }
  CHECK(worst < 1e-10);
}
