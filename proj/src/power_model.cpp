#include "sleepscale/power_model.hpp"

#include <cmath>
#include <stdexcept>

namespace sleepscale {

namespace {

constexpr double kBisectWidth = 1e-12;
constexpr int kBisectMaxIter = 200;

void require_speed(double s) {
  if (s < 0.0) throw std::domain_error("speed must be non-negative");
}

void require_work(double x) {
  if (x < 0.0) throw std::domain_error("work must be non-negative");
}

// Bisection on [lo, hi] with fn(lo) and fn(hi) of opposite sign.
template <typename Fn>
double bisect(Fn&& fn, double lo, double hi) {
  double flo = fn(lo);
  for (int it = 0; it < kBisectMaxIter && (hi - lo) > kBisectWidth; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = fn(mid);
    if ((fmid < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

PowerModel::PowerModel(double scale_, double exponent_, double static_power_)
    : scale(scale_), exponent(exponent_), static_power(static_power_) {
  if (!(scale > 0.0)) throw std::invalid_argument("power model: scale must be > 0");
  if (!(exponent > 1.0)) throw std::invalid_argument("power model: exponent must be > 1");
  if (!(static_power > 0.0)) throw std::invalid_argument("power model: static power must be > 0");
}

double power(const PowerModel& m, double s) {
  require_speed(s);
  return m.scale * std::pow(s, m.exponent) + m.static_power;
}

double power_deriv(const PowerModel& m, double s) {
  require_speed(s);
  return m.scale * m.exponent * std::pow(s, m.exponent - 1.0);
}

double power_second_deriv(const PowerModel& m, double s) {
  require_speed(s);
  // pow(0, negative) = +inf covers the exponent < 2 case at s = 0.
  return m.scale * m.exponent * (m.exponent - 1.0) * std::pow(s, m.exponent - 2.0);
}

double critical_speed_numeric(const PowerModel& m) {
  // s P'(s) - P(s) = scale (exponent-1) s^exponent - static: negative at 0,
  // positive past the minimizer of P(s)/s.
  auto fn = [&m](double s) { return s * power_deriv(m, s) - power(m, s); };
  const double guess = std::pow(m.static_power / (m.scale * (m.exponent - 1.0)), 1.0 / m.exponent);
  double hi = 2.0 * guess;
  while (fn(hi) <= 0.0) hi *= 2.0;
  return bisect(fn, 0.0, hi);
}

CriticalPoint critical_speed(const PowerModel& m) {
  const double s_closed = std::pow(m.static_power / (m.scale * (m.exponent - 1.0)), 1.0 / m.exponent);
  const double s_numeric = critical_speed_numeric(m);
  if (std::abs(s_closed - s_numeric) > 1e-10 * s_closed)
    throw std::logic_error("critical speed: closed form and bracketed root disagree");
  const double p_star = power(m, s_closed);
  return CriticalPoint{s_closed, p_star, p_star / s_closed};
}

double r_func(const PowerModel& m, const CriticalPoint& c, double s) {
  return power(m, s) - c.ratio * s;
}

double r_deriv(const PowerModel& m, const CriticalPoint& c, double s) {
  return power_deriv(m, s) - c.ratio;
}

double f_line(const CriticalPoint& c, double c_wake, double x) {
  require_work(x);
  return c.ratio * x + c_wake;
}

double h_curve(const PowerModel& m, double gap_length, double x) {
  if (!(gap_length > 0.0)) throw std::domain_error("gap length must be positive");
  require_work(x);
  return power(m, x / gap_length) * gap_length;
}

double lower_envelope(const PowerModel& m, const CriticalPoint& c, double c_wake,
                      double gap_length, double x) {
  return std::min(f_line(c, c_wake, x), h_curve(m, gap_length, x));
}

std::pair<double, double> intersection_roots(const PowerModel& m, const CriticalPoint& c,
                                             double c_wake, double gap_length) {
  if (!(gap_length > 0.0)) throw std::domain_error("gap length must be positive");
  auto g = [&](double x) { return h_curve(m, gap_length, x) - f_line(c, c_wake, x); };
  if (!(g(0.0) > 0.0)) throw std::domain_error("gap too short for two crossings");

  // G decreases to -c_wake at knee = L*s_star, then grows without bound.
  const double knee = gap_length * c.s_star;
  const double root_low = bisect(g, 0.0, knee);

  double hi = knee + std::max(knee, 1.0);
  const double cap = std::ldexp(knee, 60);
  while (g(hi) <= 0.0) {
    hi = knee + 2.0 * (hi - knee);
    if (hi > cap) throw std::runtime_error("no second crossing found within bracket cap");
  }
  const double root_high = bisect(g, knee, hi);
  return {root_low, root_high};
}

GapCurves make_gap_curves(const PowerModel& m, const CriticalPoint& c, double c_wake,
                          double gap_length, int gap_index) {
  const auto [lo, hi] = intersection_roots(m, c, c_wake, gap_length);
  const double knee = gap_length * c.s_star;
  if (!(0.0 < lo && lo < knee && knee < hi))
    throw std::logic_error("gap curves: crossings do not straddle the knee");
  for (double root : {lo, hi}) {
    const double dev = std::abs(h_curve(m, gap_length, root) - f_line(c, c_wake, root));
    if (dev > 1e-9 * std::max(1.0, f_line(c, c_wake, root)))
      throw std::logic_error("gap curves: crossing point is off the curves");
  }
  return GapCurves{gap_index, gap_length, c_wake, lo, hi};
}

double slope_from(const PowerModel& m, const CriticalPoint& c, double c_wake,
                  double gap_length, double anchor, double x) {
  require_work(anchor);
  if (!(x > anchor)) throw std::domain_error("slope_from requires x > anchor");
  const double le_a = lower_envelope(m, c, c_wake, gap_length, anchor);
  const double le_x = lower_envelope(m, c, c_wake, gap_length, x);
  return (le_x - le_a) / (x - anchor);
}

}  // namespace sleepscale
