#pragma once

// Exponential integral E1 for positive arguments and Ei for negative
// arguments, to near machine accuracy:
//
//          inf
//           /   -t
//          |   e
// E (x) =  |  ---- dt ,   x > 0,      Ei(-x) = -E1(x).
//  1       |    t
//          /
//          x
//
// Only elementary host functions (exp, log) are used, so results are
// reproducible across platforms within the documented tolerance.

namespace esr {

// Euler-Mascheroni constant to 20 significant digits.
inline constexpr double kEulerGamma = 0.57721566490153286061;

struct ExpIntResult {
  double value = 0.0;
  double est_rel_error = 0.0;  // <= 1e-12 for arguments in [1e-8, 700]
  bool underflowed = false;    // e^-x no longer representable at full precision
};

// E1(x) for x > 0. Underflow to zero (x beyond ~740) is reported through
// the result, not as an error. Throws InvalidParameter for x <= 0.
ExpIntResult exp_int_e1(double x);

// Ei(x) = -E1(-x) for x < 0; always negative. Throws InvalidParameter for
// x >= 0.
ExpIntResult exp_int_ei_neg(double x);

// Scaled form e^x * E1(x) for x > 0. Safe over the whole double range: the
// scaled value neither overflows nor underflows, which is what the
// closed-form evaluators use to pair growing exponentials with shrinking
// exponential integrals.
double exp_int_e1_scaled(double x);

}  // namespace esr
