#pragma once

#include "tlft/error.hpp"

namespace tlft {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
inline constexpr double kLn2Pi = 1.83787706640934548356065947281123527;
inline constexpr double kZetaPrimeM1 = -0.16542114370045092921391966024278064;

// True when z lies on the branch cut (-inf, 0].
bool on_cut(Complex z);

// Principal logarithm, arg in [-pi, pi). Throws DomainCut on (-inf, 0].
Complex plog(Complex z);
// z^w := exp(w log z) on the cut plane.
Complex ppow(Complex z, Complex w);

// Pi(z): analytic logarithm of Gamma on C \ (-inf, 0], real on (0, inf).
Complex log_gamma(Complex z);
// Gamma(z)^w := exp(w Pi(z)).
Complex gamma_power(Complex z, Complex w);
// Gamma on the whole plane minus the poles (PoleAt there).
Complex cgamma(Complex z);
// 1/Gamma, entire.
Complex rgamma(Complex z);
// Some logarithm of Gamma(z); the branch is unspecified off the cut plane.
// Only meant for terms that are exponentiated with integer multiplicity.
Complex log_gamma_any(Complex z);

Complex digamma(Complex z);

// Theta(z): analytic logarithm of the Barnes G-function on the cut plane.
Complex log_barnes_g(Complex z);
Complex barnes_g(Complex z);
// Counterpart of log_gamma_any for G.
Complex log_barnes_g_any(Complex z);

// Gauss hypergeometric function for |z| < 1.
Complex hyp2f1(Complex a, Complex b, Complex c, Complex z);

// Power series part of hyp2f1 with the accumulated sum of |terms|, exposed for
// conditioning diagnostics.
struct SeriesSum {
    Complex value;
    double abs_sum = 0.0;
    int terms = 0;
};
SeriesSum hyp2f1_series(Complex a, Complex b, Complex c, Complex z);

// Nearest-integer test used for pole detection.
bool near_nonpositive_integer(Complex z, double tol = 1e-12);

}  // namespace tlft
