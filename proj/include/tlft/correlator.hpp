#pragma once

#include "tlft/coulomb.hpp"

#include <cstdint>
#include <limits>

namespace tlft {

struct SeriesSpec {
    int max_terms = 1500;
    double tail_tol = 1e-14;
};

struct QuadratureSpec {
    double truncation_Y = 60.0;
    double rel_tol = 1e-10;
    std::uint64_t max_evals = 4000000;
};

// Analytic interpolant f with f(n) = coeff(case, n).
Complex f_eval(const CorrelatorCase& c, Complex z);

// Gamma(-z) f(z) exp(z log_x), assembled in the log domain so large |Im z| neither
// overflows nor underflows early.
Complex mellin_integrand(const CorrelatorCase& c, Complex z, Complex log_x);
// Same integrand at z = w + d.
Complex mellin_integrand_offset(const CorrelatorCase& c, Complex d, Complex log_x);

struct SeriesResult {
    Complex value;
    double tail_bound = 0.0;
    double max_term = 0.0;
    int terms = 0;
    // working precision used for the sum
    int digits = 16;
};

// C(case, mu, c) at fixed zero mode, prefactor included. Complex c is allowed.
SeriesResult series_correlator_ex(const CorrelatorCase& cs, double mu, Complex c, const SeriesSpec& spec = {});
// sum_n (-mu)^n a_n / (n! sqrt2 (n - w)), prefactor included
SeriesResult segment_series(const CorrelatorCase& cs, double mu, const SeriesSpec& spec = {});
Complex series_correlator(const CorrelatorCase& cs, double mu, Complex c, const SeriesSpec& spec = {});

// Default vertical line used by the contour evaluator.
double contour_line(const CorrelatorCase& cs);

struct ContourResult {
    Complex value;
    double quad_error = 0.0;
    double tail_bound = 0.0;
    double x0 = 0.0;
};

// Mellin-Barnes value of C(case, mu, c). x0 overrides the default line; for the
// two-point case with Re(w) = 0 it is the shift q in (0, 1) and the residue at z = 0 is added.
ContourResult contour_correlator_ex(const CorrelatorCase& cs, double mu, double c, const QuadratureSpec& spec = {},
                                    double x0 = std::numeric_limits<double>::quiet_NaN());
Complex contour_correlator(const CorrelatorCase& cs, double mu, double c, const QuadratureSpec& spec = {});

// |Gamma(-z) f(z)| on z = x0 + iy, bounded by C1 (2+|y|)^C2 exp(-|y| arg(1+i|y|) / 2).
struct IntegrandBound {
    double C1 = 0.0;
    double C2 = 4.0;
    double operator()(double y) const;
    // integral of the bound over |y| > Y
    double tail(double Y) const;
};
IntegrandBound fit_integrand_bound(const CorrelatorCase& cs, double x0);
double integrand_bound(const CorrelatorCase& cs, double x0, double y);

// Regions where the contour representations apply; throws HypothesisViolation otherwise.
void check_contour_hypotheses(const CorrelatorCase& cs);
bool is_imaginary_w(const CorrelatorCase& cs);

}  // namespace tlft
