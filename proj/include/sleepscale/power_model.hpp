#pragma once

#include <utility>

namespace sleepscale {

/// Convex power curve P(s) = scale * s^exponent + static_power.
/// P(0) = static_power > 0 and P is strictly increasing for s >= 0.
struct PowerModel {
  double scale;
  double exponent;
  double static_power;

  /// Throws std::invalid_argument unless scale > 0, exponent > 1, static_power > 0.
  PowerModel(double scale, double exponent, double static_power);
};

/// The speed minimizing energy per unit of work, P(s)/s.
/// ratio = p_at_star / s_star is the best achievable energy-per-work rate.
struct CriticalPoint {
  double s_star;
  double p_at_star;
  double ratio;
};

/// Crossing data for one gap: the two work amounts at which running the whole
/// gap (H) costs the same as running at the critical speed and sleeping (F).
struct GapCurves {
  int gap_index;
  double gap_length;
  double c_wake;
  double root_low;
  double root_high;
};

double power(const PowerModel& m, double s);
double power_deriv(const PowerModel& m, double s);

/// d2P/ds2; for exponent < 2 this is +infinity at s = 0.
double power_second_deriv(const PowerModel& m, double s);

/// Closed-form critical speed (static/(scale*(exponent-1)))^(1/exponent),
/// cross-checked against the bracketed root of s*P'(s) - P(s) = 0; throws
/// std::logic_error if the two disagree beyond relative 1e-10.
CriticalPoint critical_speed(const PowerModel& m);

/// The bracketed-bisection root of s*P'(s) - P(s) = 0 (the numeric side of
/// the critical_speed cross-check).
double critical_speed_numeric(const PowerModel& m);

/// R(s) = P(s) - ratio*s, the running premium over the best per-work rate.
/// R(0) = P(0), R(s_star) = 0, R'(s_star) = 0.
double r_func(const PowerModel& m, const CriticalPoint& c, double s);
double r_deriv(const PowerModel& m, const CriticalPoint& c, double s);

/// F(x) = ratio*x + c_wake: x units of work at the critical speed plus one wake-up.
double f_line(const CriticalPoint& c, double c_wake, double x);

/// H(x) = P(x/gap_length) * gap_length: x units spread over the whole gap.
double h_curve(const PowerModel& m, double gap_length, double x);

/// min(F(x), H(x)).
double lower_envelope(const PowerModel& m, const CriticalPoint& c, double c_wake,
                      double gap_length, double x);

/// The two solutions of F(x) = H(x), bracketed around gap_length * s_star.
/// Requires P(0)*gap_length > c_wake ("gap too short for two crossings" otherwise).
std::pair<double, double> intersection_roots(const PowerModel& m, const CriticalPoint& c,
                                             double c_wake, double gap_length);

GapCurves make_gap_curves(const PowerModel& m, const CriticalPoint& c, double c_wake,
                          double gap_length, int gap_index);

/// Chord slope of the lower envelope between anchor and x; requires x > anchor >= 0.
double slope_from(const PowerModel& m, const CriticalPoint& c, double c_wake,
                  double gap_length, double anchor, double x);

}  // namespace sleepscale
