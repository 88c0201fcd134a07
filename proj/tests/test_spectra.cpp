#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "pulsespec/sequences.hpp"
#include "pulsespec/spectra.hpp"

using namespace pulsespec;

namespace {

SimParams params_for(double t_end, double delta, std::vector<double> omega) {
  SimParams p;
  p.delta = delta;
  p.t_end = t_end;
  p.dt = 1e-3;
  p.omega_grid = std::move(omega);
  return p;
}

std::vector<double> default_grid() { return uniform_omega_grid(-40.0, 40.0, 0.025); }

double nearest(const std::vector<double>& grid, double v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (std::abs(grid[i] - v) < std::abs(grid[best] - v)) best = i;
  }
  return grid[best];
}

}  // namespace

TEST_CASE("free decay is Lorentzian") {
  const auto grid = default_grid();
  const auto res = compute_spectrum(no_drive_schedule(10.0), params_for(10.0, 0.0, grid));
  const std::size_t zero = 1600;
  REQUIRE(std::abs(grid[zero]) < 1e-12);
  const std::size_t one = 1640;
  REQUIRE(grid[one] == doctest::Approx(1.0));
  CHECK(res.emission[zero] / res.emission[one] == doctest::Approx(2.0).epsilon(0.03));
}

TEST_CASE("detuned line sits at the detuning") {
  const auto grid = default_grid();
  const auto res = compute_spectrum(no_drive_schedule(10.0), params_for(10.0, 3.0, grid));
  CHECK(std::abs(res.omega[argmax(res.emission)] - 3.0) <= 0.025 + 1e-9);
}

TEST_CASE("zero kernel gives zero spectra and a zero sum rule") {
  CorrelationKernel k;
  k.theta = TimeGrid::make(1.0, 1e-2);
  k.g1.assign(k.theta.points(), cplx{});
  k.g2.assign(k.theta.points(), cplx{});
  const auto res = spectrum_from_kernel(k, default_grid());
  for (std::size_t i = 0; i < res.omega.size(); ++i) {
    CHECK(res.emission[i] == 0.0);
    CHECK(res.net_absorption[i] == 0.0);
  }
  const auto rule = emission_sum_rule(res, k);
  CHECK(rule.lhs == 0.0);
  CHECK(rule.rhs == 0.0);
}

TEST_CASE("spectrum_from_kernel matches a direct exponential sum") {
  const auto sched = uhrig_schedule(6, 1.0);
  auto p = params_for(1.0, 2.0, uniform_omega_grid(-30.0, 30.0, 0.37));
  const auto kern = accumulate_kernel(sched, p);
  const auto res = spectrum_from_kernel(kern, p.omega_grid);
  const auto e = oracle::direct_fourier(kern.g1, kern.theta.step, p.omega_grid);
  const auto a = oracle::direct_fourier(kern.g2, kern.theta.step, p.omega_grid);
  for (std::size_t i = 0; i < e.size(); ++i) {
    CHECK(res.emission[i] == doctest::Approx(e[i]).epsilon(1e-11).scale(1.0));
    CHECK(res.direct_absorption[i] == doctest::Approx(a[i]).epsilon(1e-11).scale(1.0));
    CHECK(res.net_absorption[i] == res.direct_absorption[i] - res.emission[i]);
  }
}

TEST_CASE("emission sum rule on the free decay") {
  const auto sched = no_drive_schedule(10.0);
  const auto p = params_for(10.0, 0.0, default_grid());
  const auto kern = accumulate_kernel(sched, p);
  const auto res = spectrum_from_kernel(kern, p.omega_grid);
  const auto rule = emission_sum_rule(res, kern);
  CHECK(rule.rhs == doctest::Approx((1.0 - std::exp(-20.0)) / 2.0).epsilon(1e-6));
  CHECK(rule.lhs == doctest::Approx(0.5).epsilon(0.02));
  CHECK(rule.lhs / rule.rhs >= 0.95);
  CHECK(rule.lhs / rule.rhs <= 1.05);

  auto narrow = res;
  narrow.omega = uniform_omega_grid(-10.0, 10.0, 0.025);
  CHECK_THROWS_AS(emission_sum_rule(narrow, kern), InvalidParameter);
}

TEST_CASE("sum rule holds for every protocol on a wide grid") {
  // Pulse trains put weight into harmonics of pi / tau well beyond |omega| = 40.
  const auto wide = uniform_omega_grid(-400.0, 400.0, 0.05);
  const std::vector<PulseSchedule> schedules = {
      periodic_schedule({PulseAxis::X}, 0.2, 12),
      periodic_schedule({PulseAxis::X, PulseAxis::Y}, 0.2, 12),
      periodic_schedule({PulseAxis::Z}, 0.2, 12),
      uhrig_schedule(12, 2.0),
  };
  for (const auto& s : schedules) {
    const auto p = params_for(s.window_end(), 3.0, wide);
    const auto kern = accumulate_kernel(s, p);
    const auto rule = emission_sum_rule(spectrum_from_kernel(kern, wide), kern);
    CHECK(rule.lhs / rule.rhs == doctest::Approx(1.0).epsilon(0.02));
  }
}

TEST_CASE("pi_z spectra mirror under delta -> -delta") {
  const auto grid = uniform_omega_grid(-40.0, 40.0, 0.05);
  const auto sched = periodic_schedule({PulseAxis::Z}, 0.2, 12);
  const auto plus = compute_spectrum(sched, params_for(2.4, 3.0, grid));
  const auto minus = compute_spectrum(sched, params_for(2.4, -3.0, grid));
  const double scale = *std::max_element(plus.emission.begin(), plus.emission.end());
  const std::size_t n = grid.size();
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(std::abs(plus.emission[i] - minus.emission[n - 1 - i]) < 1e-9 * scale);
    CHECK(std::abs(plus.direct_absorption[i] - minus.direct_absorption[n - 1 - i]) < 1e-9 * scale);
  }
}

TEST_CASE("detuning_average") {
  const auto grid = uniform_omega_grid(-40.0, 40.0, 0.05);
  SUBCASE("single member equals a direct run") {
    const auto sched = uhrig_schedule(6, 1.0);
    const auto p = params_for(1.0, 2.0, grid);
    const auto avg = detuning_average(sched, p, {2.0}, {1.0});
    const auto direct = compute_spectrum(sched, p);
    CHECK(avg.emission == direct.emission);
    CHECK(avg.net_absorption == direct.net_absorption);
  }
  SUBCASE("free decay ensemble of narrow lines resolves every line") {
    // Lines one unit apart only separate once the linewidth is well below one.
    auto p = params_for(20.0, 0.0, grid);
    p.gamma = 0.25;
    p.dt = 2e-3;
    const auto avg = detuning_average(no_drive_schedule(20.0), p, {3.0, 4.0, 5.0, 6.0}, {0.25, 0.25, 0.25, 0.25});
    std::vector<double> found;
    const double peak = *std::max_element(avg.emission.begin(), avg.emission.end());
    for (auto i : local_maxima(avg.emission)) {
      if (avg.emission[i] > 0.5 * peak) found.push_back(avg.omega[i]);
    }
    REQUIRE(found.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(found[i] - (3.0 + i)) <= 0.1);
  }
  SUBCASE("uhrig ensemble keeps one dominant central peak") {
    const auto p = params_for(2.0, 0.0, grid);
    const auto avg = detuning_average(uhrig_schedule(12, 2.0), p, {3.0, 4.0, 5.0, 6.0}, {0.25, 0.25, 0.25, 0.25});
    double central = 0.0, outer = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (std::abs(grid[i]) < 1.0) central = std::max(central, avg.emission[i]);
    }
    for (auto i : local_maxima(avg.emission)) {
      if (std::abs(grid[i]) > 1.0) outer = std::max(outer, avg.emission[i]);
    }
    CHECK(central > outer);
  }
  SUBCASE("weights must be normalised") {
    const auto p = params_for(1.0, 0.0, grid);
    const auto s = no_drive_schedule(1.0);
    CHECK_THROWS_AS(detuning_average(s, p, {1.0, 2.0}, {0.5, 0.6}), WeightNormalizationError);
    CHECK_THROWS_AS(detuning_average(s, p, {1.0, 2.0}, {1.5, -0.5}), WeightNormalizationError);
    CHECK_THROWS_AS(detuning_average(s, p, {1.0}, {0.5, 0.5}), WeightNormalizationError);
  }
}

TEST_CASE("peak helpers") {
  const std::vector<double> v = {0.0, 1.0, 3.0, 1.0, 0.0, 2.0, 5.0, 2.0, 0.0};
  CHECK(argmax(v) == 6);
  CHECK(argmax({1.0, 2.0, 2.0}) == 1);
  CHECK(local_maxima(v) == std::vector<std::size_t>{2, 6});
  CHECK(local_minima(v) == std::vector<std::size_t>{4});
  const auto s = smooth3({3.0, 0.0, 3.0});
  CHECK(s[0] == 1.5);
  CHECK(s[1] == 2.0);
  CHECK(nearest(default_grid(), 3.01) == doctest::Approx(3.0));
}
