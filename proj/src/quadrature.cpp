#include "tlft/quadrature.hpp"

#include <algorithm>

namespace tlft {

Complex pairwise_sum(const std::vector<Complex>& v) {
    if (v.empty()) return 0.0;
    std::vector<Complex> cur = v;
    while (cur.size() > 1) {
        std::vector<Complex> next((cur.size() + 1) / 2);
        for (std::size_t i = 0; i < next.size(); ++i) {
            next[i] = cur[2 * i];
            if (2 * i + 1 < cur.size()) next[i] += cur[2 * i + 1];
        }
        cur.swap(next);
    }
    return cur[0];
}

Complex integrate_gk(const ComplexFn& f, double a, double b, double rel_tol, double* err,
                     unsigned max_depth) {
    double e = 0.0;
    Complex r = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, max_depth,
                                                                              rel_tol, &e);
    if (!std::isfinite(r.real()) || !std::isfinite(r.imag()))
        throw Error(Errc::QuadratureFailure, "non-finite Gauss-Kronrod result");
    if (err) *err = e;
    return r;
}

Complex integrate_ts(const ComplexFn& f, double a, double b, double rel_tol, double* err) {
    // one integrator per thread: construction builds the abscissa tables
    thread_local boost::math::quadrature::tanh_sinh<double> ts(12);
    double e = 0.0;
    double l1 = 0.0;
    std::size_t levels = 0;
    Complex r = ts.integrate(f, a, b, rel_tol, &e, &l1, &levels);
    if (!std::isfinite(r.real()) || !std::isfinite(r.imag()))
        throw Error(Errc::QuadratureFailure, "non-finite tanh-sinh result");
    if (err) *err = e;
    return r;
}

Complex integrate_panels(const ComplexFn& f, double a, double b, double width, double rel_tol,
                         double* err) {
    int n = std::max(1, int(std::ceil((b - a) / width)));
    double h = (b - a) / n;
    std::vector<Complex> parts(n);
    double e_total = 0.0;
    for (int i = 0; i < n; ++i) {
        double e = 0.0;
        parts[i] = integrate_gk(f, a + i * h, a + (i + 1) * h, rel_tol, &e, 8);
        e_total += e;
    }
    if (err) *err = e_total;
    return pairwise_sum(parts);
}

}  // namespace tlft
