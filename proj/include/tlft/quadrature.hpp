#pragma once

#include "tlft/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <functional>
#include <vector>

namespace tlft {

using ComplexFn = std::function<Complex(double)>;

// Sum in a fixed binary tree so the result does not depend on who computed what.
Complex pairwise_sum(const std::vector<Complex>& v);

// Adaptive Gauss-Kronrod (30/61) on [a, b].
Complex integrate_gk(const ComplexFn& f, double a, double b, double rel_tol, double* err = nullptr,
                     unsigned max_depth = 12);

// Tanh-sinh on [a, b]; tolerates integrable endpoint singularities.
Complex integrate_ts(const ComplexFn& f, double a, double b, double rel_tol, double* err = nullptr);

// Composite Gauss-Kronrod over panels of at most `width`, reduced pairwise.
Complex integrate_panels(const ComplexFn& f, double a, double b, double width, double rel_tol,
                         double* err = nullptr);

}  // namespace tlft
