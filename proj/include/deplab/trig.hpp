#pragma once

#include "deplab/bigfloat.hpp"
#include "deplab/config.hpp"
#include "deplab/errors.hpp"
#include "deplab/exact.hpp"

namespace deplab {

// The trigonometric quantities the library needs, evaluated to the working
// precision.  Each value is computed with 64 guard bits and rounded once at
// the end, so the result is correctly rounded to within 2 units in the last
// place of the target precision.
enum class TrigExpr {
  tan2_halfpi_over_n,  // tan(pi / (2n))^2        argument: n >= 2
  cos_pi_times,        // cos(pi * t)             argument: rational t
  cosn_halfpi_over_n,  // cos(pi / (2n))^n        argument: n >= 1
};

inline BigFloat trig_scalar(TrigExpr expr, const Rational& arg, mpfr_prec_t prec = 0) {
  const mpfr_prec_t target = prec > 0 ? prec : config::precision();
  const mpfr_prec_t work = target + 64;

  BigFloat pi(Precision{work});
  mpfr_const_pi(pi.raw(), MPFR_RNDN);

  BigFloat wide(Precision{work});
  switch (expr) {
    case TrigExpr::tan2_halfpi_over_n: {
      if (denominator(arg) != 1 || arg < 2)
        throw usage_error("tan^2(pi/2n) needs an integer n >= 2");
      const BigFloat angle = pi / (BigFloat(2L, work) * BigFloat(arg, work));
      BigFloat t(Precision{work});
      mpfr_tan(t.raw(), angle.raw(), MPFR_RNDN);
      wide = t * t;
      break;
    }
    case TrigExpr::cos_pi_times: {
      const BigFloat angle = pi * BigFloat(arg, work);
      mpfr_cos(wide.raw(), angle.raw(), MPFR_RNDN);
      break;
    }
    case TrigExpr::cosn_halfpi_over_n: {
      if (denominator(arg) != 1 || arg < 1)
        throw usage_error("cos^n(pi/2n) needs an integer n >= 1");
      const BigFloat angle = pi / (BigFloat(2L, work) * BigFloat(arg, work));
      BigFloat c(Precision{work});
      mpfr_cos(c.raw(), angle.raw(), MPFR_RNDN);
      mpfr_pow_z(wide.raw(), c.raw(), numerator(arg).backend().data(), MPFR_RNDN);
      break;
    }
  }

  BigFloat out(Precision{target});
  mpfr_set(out.raw(), wide.raw(), MPFR_RNDN);
  return out;
}

}  // namespace deplab
