#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "bhgl/integrator.hpp"

using namespace bhgl;

namespace {

void decay(double, std::span<const Complex> y, std::span<Complex> dy) {
  for (std::size_t i = 0; i < y.size(); ++i) dy[i] = -y[i];
}

double decay_error(double tol) {
  StepperOptions opt;
  opt.abs_tol = tol;
  opt.rel_tol = tol;
  DormandPrince s(decay, opt);
  s.initialize(0.0, ComplexVector{1.0});
  while (s.t() < 10.0) REQUIRE(s.step(10.0).status == StepStatus::kAccepted);
  return std::abs(s.state()[0] - std::exp(-10.0));
}

// Two-level Rabi problem, H = -J sigma_x; returns |c0|^2 at t.
double rabi_population(double tol, double J, double t) {
  StepperOptions opt;
  opt.abs_tol = tol;
  opt.rel_tol = tol;
  DormandPrince s(
      [J](double, std::span<const Complex> y, std::span<Complex> dy) {
        dy[0] = kI * J * y[1];
        dy[1] = kI * J * y[0];
      },
      opt);
  s.initialize(0.0, ComplexVector{1.0, 0.0});
  while (s.t() < t) REQUIRE(s.step(t).status == StepStatus::kAccepted);
  return std::norm(s.state()[0]);
}

}  // namespace

TEST_CASE("linear decay over [0, 10]") {
  const double e = decay_error(1e-10);
  CHECK(e < 1e-10);
  CHECK(decay_error(1e-6) < 1e-6);
  // Tighter tolerances do not make it worse.
  CHECK(decay_error(1e-12) <= e);
}

TEST_CASE("steps land exactly on the limit") {
  StepperOptions opt;
  DormandPrince s(decay, opt);
  s.initialize(0.0, ComplexVector{1.0, 2.0});
  const double limits[] = {0.05, 0.1, 0.15, 0.35, 1.0};
  for (double lim : limits) {
    while (s.t() < lim) REQUIRE(s.step(lim).status == StepStatus::kAccepted);
    CHECK(s.t() == lim);
  }
  CHECK(s.evaluations() > 0);
}

TEST_CASE("Rabi period error shrinks with the tolerance") {
  const double J = 1.3;
  const double period = std::numbers::pi / J;
  const double coarse = std::abs(rabi_population(1e-5, J, 3 * period) - 1.0);
  const double fine = std::abs(rabi_population(1e-9, J, 3 * period) - 1.0);
  CHECK(fine < 1e-8);
  CHECK(fine < coarse);
}

TEST_CASE("global norm integrates long vectors with small entries") {
  StepperOptions opt;
  opt.abs_tol = 1e-10;
  opt.rel_tol = 1e-10;
  opt.norm = ErrorNorm::kGlobal;
  DormandPrince s(decay, opt);
  ComplexVector y0(1000, Complex(1e-3, -1e-3));
  s.initialize(0.0, y0);
  while (s.t() < 2.0) REQUIRE(s.step(2.0).status == StepStatus::kAccepted);
  for (const auto& v : s.state()) CHECK(std::abs(v - y0[0] * std::exp(-2.0)) < 1e-12);
}

TEST_CASE("breakdown inside a stage is reported with its cause") {
  StepperOptions opt;
  DormandPrince s(
      [](double t, std::span<const Complex> y, std::span<Complex> dy) {
        if (t > 0.5) throw BreakdownError(BreakdownCause::kCurrent23);
        dy[0] = y[0];
      },
      opt);
  s.initialize(0.0, ComplexVector{1.0});
  StepReport r;
  do r = s.step(5.0);
  while (r.status == StepStatus::kAccepted);
  CHECK(r.status == StepStatus::kBreakdown);
  CHECK(r.cause == BreakdownCause::kCurrent23);
  CHECK(s.t() <= 0.5);
  CHECK(s.t() > 0.5 - 1e-9);
  // The state stays at the last accepted point.
  CHECK(std::abs(s.state()[0] - std::exp(s.t())) < 1e-6);
}

TEST_CASE("non-finite derivatives end in step underflow") {
  StepperOptions opt;
  DormandPrince s(
      [](double t, std::span<const Complex>, std::span<Complex> dy) {
        dy[0] = t > 0.25 ? std::numeric_limits<double>::quiet_NaN() : 1.0;
      },
      opt);
  s.initialize(0.0, ComplexVector{0.0});
  StepReport r;
  do r = s.step(1.0);
  while (r.status == StepStatus::kAccepted);
  CHECK(r.status == StepStatus::kUnderflow);
  CHECK(r.cause == BreakdownCause::kNone);
  CHECK(s.t() <= 0.25);
}

TEST_CASE("state_modified refreshes the cached derivative") {
  StepperOptions opt;
  opt.abs_tol = 1e-12;
  opt.rel_tol = 1e-12;
  DormandPrince s(decay, opt);
  s.initialize(0.0, ComplexVector{1.0});
  while (s.t() < 1.0) s.step(1.0);
  s.mutable_state()[0] = 2.0;
  s.state_modified();
  while (s.t() < 2.0) s.step(2.0);
  CHECK(std::abs(s.state()[0] - 2.0 * std::exp(-1.0)) < 1e-10);
}

TEST_CASE("single adaptive step helper") {
  StepperOptions opt;
  const StepOutcome o = step_control(decay, ComplexVector{1.0}, 0.0, 0.1, opt);
  CHECK(o.status == StepStatus::kAccepted);
  CHECK(o.t > 0.0);
  CHECK(o.t <= 0.1);
  CHECK(std::abs(o.state[0] - std::exp(-o.t)) < 1e-8);
  CHECK(o.h_next > 0.0);
}
