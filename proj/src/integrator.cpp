#include "bhgl/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bhgl {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr double kSafety = 0.9;
constexpr double kBeta = 0.04;
constexpr double kExpo = 0.2 - kBeta * 0.75;
constexpr double kMaxGrow = 5.0;
constexpr double kMaxShrink = 0.1;
constexpr double kBreakdownShrink = 0.25;

}  // namespace

DormandPrince::DormandPrince(RhsFunction rhs, StepperOptions options)
    : rhs_(std::move(rhs)), opt_(options) {
  if (!(opt_.abs_tol > 0.0) || !(opt_.rel_tol > 0.0))
    throw std::invalid_argument("integrator tolerances must be positive");
}

void DormandPrince::eval(double t, std::span<const Complex> y, std::span<Complex> k) {
  ++evaluations_;
  rhs_(t, y, k);
}

void DormandPrince::initialize(double t0, std::span<const Complex> y0) {
  t_ = t0;
  const std::size_t n = y0.size();
  y_.assign(y0.begin(), y0.end());
  y_new_.resize(n);
  stage_.resize(n);
  for (auto& k : k_) k.resize(n);
  eval(t_, y_, k_[0]);
  h_ = opt_.h_initial > 0.0 ? opt_.h_initial : initial_step();
  if (opt_.h_max > 0.0) h_ = std::min(h_, opt_.h_max);
  h_prev_ratio_ = 1e-4;
}

void DormandPrince::state_modified() { eval(t_, y_, k_[0]); }

double DormandPrince::error_norm(std::span<const Complex> y_old,
                                 std::span<const Complex> y_new) const {
  const std::size_t n = y_old.size();
  const double h = h_;
  if (opt_.norm == ErrorNorm::kGlobal) {
    double e2 = 0.0, yo = 0.0, yn = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex e = h * (e1 * k_[0][i] + e3 * k_[2][i] + e4 * k_[3][i] + e5 * k_[4][i] +
                             e6 * k_[5][i] + e7 * k_[6][i]);
      e2 += std::norm(e);
      yo += std::norm(y_old[i]);
      yn += std::norm(y_new[i]);
    }
    const double scale = opt_.abs_tol + opt_.rel_tol * std::sqrt(std::max(yo, yn));
    return std::sqrt(e2) / scale;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Complex e = h * (e1 * k_[0][i] + e3 * k_[2][i] + e4 * k_[3][i] + e5 * k_[4][i] +
                           e6 * k_[5][i] + e7 * k_[6][i]);
    const double sc =
        opt_.abs_tol + opt_.rel_tol * std::max(std::abs(y_old[i]), std::abs(y_new[i]));
    sum += std::norm(e) / (sc * sc);
  }
  return std::sqrt(sum / static_cast<double>(std::max<std::size_t>(n, 1)));
}

double DormandPrince::initial_step() {
  const std::size_t n = y_.size();
  auto scaled = [&](std::span<const Complex> v) {
    if (opt_.norm == ErrorNorm::kGlobal) {
      double v2 = 0.0, y2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        v2 += std::norm(v[i]);
        y2 += std::norm(y_[i]);
      }
      return std::sqrt(v2) / (opt_.abs_tol + opt_.rel_tol * std::sqrt(y2));
    }
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = opt_.abs_tol + opt_.rel_tol * std::abs(y_[i]);
      s += std::norm(v[i]) / (sc * sc);
    }
    return std::sqrt(s / static_cast<double>(std::max<std::size_t>(n, 1)));
  };
  const double d0 = scaled(y_);
  const double d1 = scaled(k_[0]);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  for (std::size_t i = 0; i < n; ++i) stage_[i] = y_[i] + h0 * k_[0][i];
  try {
    eval(t_ + h0, stage_, k_[1]);
  } catch (const BreakdownError&) {
    return h0;
  }
  for (std::size_t i = 0; i < n; ++i) y_new_[i] = k_[1][i] - k_[0][i];
  const double d2 = scaled(y_new_) / h0;
  const double dmax = std::max(d1, d2);
  const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
  return std::min(100.0 * h0, h1);
}

StepReport DormandPrince::step(double t_limit) {
  StepReport report;
  const std::size_t n = y_.size();
  BreakdownCause last_cause = BreakdownCause::kNone;
  while (true) {
    const double h_min = opt_.h_min * std::max(1.0, std::abs(t_));
    if (h_ < h_min) {
      if (last_cause != BreakdownCause::kNone) {
        report.status = StepStatus::kBreakdown;
        report.cause = last_cause;
      } else {
        report.status = StepStatus::kUnderflow;
      }
      return report;
    }
    const double natural_h = h_;
    const bool clamped = t_ + h_ >= t_limit;
    const double h = clamped ? t_limit - t_ : h_;
    h_ = h;
    const double t_new = clamped ? t_limit : t_ + h;

    try {
      auto& k1 = k_[0];
      auto& k2 = k_[1];
      auto& k3 = k_[2];
      auto& k4 = k_[3];
      auto& k5 = k_[4];
      auto& k6 = k_[5];
      auto& k7 = k_[6];
      for (std::size_t i = 0; i < n; ++i) stage_[i] = y_[i] + h * a21 * k1[i];
      eval(t_ + c2 * h, stage_, k2);
      for (std::size_t i = 0; i < n; ++i) stage_[i] = y_[i] + h * (a31 * k1[i] + a32 * k2[i]);
      eval(t_ + c3 * h, stage_, k3);
      for (std::size_t i = 0; i < n; ++i)
        stage_[i] = y_[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      eval(t_ + c4 * h, stage_, k4);
      for (std::size_t i = 0; i < n; ++i)
        stage_[i] = y_[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      eval(t_ + c5 * h, stage_, k5);
      for (std::size_t i = 0; i < n; ++i)
        stage_[i] =
            y_[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
      eval(t_ + h, stage_, k6);
      for (std::size_t i = 0; i < n; ++i)
        y_new_[i] =
            y_[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
      eval(t_new, y_new_, k7);
    } catch (const BreakdownError& e) {
      last_cause = e.cause();
      h_ = h * kBreakdownShrink;
      ++report.rejected;
      continue;
    }

    const double err = error_norm(y_, y_new_);
    if (!std::isfinite(err)) {
      h_ = h * kMaxShrink;
      ++report.rejected;
      continue;
    }
    const double fac11 = std::pow(std::max(err, 1e-300), kExpo);
    if (err <= 1.0) {
      double fac = fac11 / std::pow(h_prev_ratio_, kBeta) / kSafety;
      fac = std::clamp(fac, 1.0 / kMaxGrow, 1.0 / kMaxShrink);
      double h_next = h / fac;
      if (report.rejected > 0) h_next = std::min(h_next, h);
      if (clamped) h_next = std::max(h_next, natural_h);
      if (opt_.h_max > 0.0) h_next = std::min(h_next, opt_.h_max);
      h_prev_ratio_ = std::max(err, 1e-4);
      t_ = t_new;
      std::swap(y_, y_new_);
      std::swap(k_[0], k_[6]);
      h_ = h_next;
      report.error = err;
      return report;
    }
    h_ = h / std::min(1.0 / kMaxShrink, fac11 / kSafety);
    ++report.rejected;
  }
}

StepOutcome step_control(const RhsFunction& rhs, std::span<const Complex> y, double t, double h,
                         const StepperOptions& options) {
  if (!(h > 0.0)) throw std::invalid_argument("step_control: h must be positive");
  StepperOptions opt = options;
  opt.h_initial = h;
  DormandPrince stepper(rhs, opt);
  stepper.initialize(t, y);
  const StepReport r = stepper.step(std::numeric_limits<double>::infinity());
  StepOutcome out;
  out.state.assign(stepper.state().begin(), stepper.state().end());
  out.t = stepper.t();
  out.h_next = stepper.h();
  out.error = r.error;
  out.status = r.status;
  out.cause = r.cause;
  return out;
}

}  // namespace bhgl
