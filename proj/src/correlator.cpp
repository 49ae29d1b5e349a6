#include "tlft/correlator.hpp"

#include "tlft/quadrature.hpp"
#include "tlft/specfun.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include <algorithm>
#include <limits>
#include <type_traits>
#include <cmath>
#include <vector>

namespace tlft {

namespace {

const double kLn4Pi = std::log(4.0 * kPi);
const double kLn2PiPlain = std::log(2.0 * kPi);

// f = exp(log_main) * bracket; bracket is 1 except in the three-point case.
struct LogF {
    Complex log_main;
    Complex bracket = 1.0;
    bool zero = false;
};

// d = z - w is passed separately so points close to z = w keep their offset exactly.
LogF log_f(const CorrelatorCase& cs, Complex z, Complex d) {
    LogF r;
    const Complex w = cs.w();
    switch (cs.kind) {
    case CorrelatorCase::Kind::Zero: {
        Complex u = z + 1.0;
        if (u == 0.0) {
            r.log_main = 1.0 - kLn4Pi;
            return r;
        }
        if (on_cut(u)) throw Error(Errc::DomainCut, "zero-point f needs z off (-inf, -1]");
        Complex base = z * kLn4Pi + 0.5 * z * (z - 1.0);
        if (std::abs(u) < 0.25)
            r.log_main = base + 2.0 * log_barnes_g(z + 2.0) - u * log_gamma(u);
        else
            r.log_main = base + 2.0 * log_barnes_g(u) - (z - 1.0) * log_gamma(u);
        return r;
    }
    case CorrelatorCase::Kind::One: {
        Complex u = d;
        if (on_cut(u)) throw Error(Errc::DomainCut, "one-point f needs z - w off (-inf, 0]");
        // Gamma(z+1)G(z+1) = G(z+2) is entire; it vanishes at z = -2, -3, ...
        if (near_nonpositive_integer(z + 2.0)) {
            r.zero = true;
            return r;
        }
        // Gamma(z+1)G(z+1) = G(z+3)/Gamma(z+2) and G(u)Gamma(u)^{-z} = G(u+2) u^{z+1} Gamma(u+1)^{-z-2}
        r.log_main = z * kLn4Pi + 0.5 * z * (z - 3.0 - 2.0 * w) + log_barnes_g_any(z + 3.0) -
                     log_gamma_any(z + 2.0) + log_barnes_g(u + 2.0) + (z + 1.0) * std::log(u) -
                     (z + 2.0) * log_gamma(u + 1.0) - log_barnes_g_any(-w);
        return r;
    }
    case CorrelatorCase::Kind::Two: {
        Complex u = d;
        if (on_cut(u)) throw Error(Errc::DomainCut, "two-point f needs z - w off (-inf, 0]");
        if (near_nonpositive_integer(z + 1.0)) throw Error(Errc::PoleAt, "two-point f at a negative integer");
        if (near_nonpositive_integer(z + cs.beta1()) || near_nonpositive_integer(z + cs.beta2())) {
            r.zero = true;
            return r;
        }
        r.log_main = z * kLn4Pi + 0.5 * z * (z - 3.0 - 2.0 * w) + log_gamma_any(z + 1.0) +
                     log_barnes_g_any(z + cs.beta1()) + log_barnes_g_any(z + cs.beta2()) - z * log_gamma(u) -
                     log_barnes_g_any(cs.beta1()) - log_barnes_g_any(cs.beta2());
        return r;
    }
    case CorrelatorCase::Kind::Three: {
        Complex u = d;
        const Complex x1 = kSqrt2 * cs.alpha1, x3 = kSqrt2 * cs.alpha3;
        if (on_cut(u)) throw Error(Errc::DomainCut, "three-point f needs z - w off (-inf, 0]");
        if (near_nonpositive_integer(z + 1.0) || near_nonpositive_integer(z + 2.0 + x1))
            throw Error(Errc::PoleAt, "three-point f outside its domain");
        if (near_nonpositive_integer(z + 2.0 + x3)) {
            r.zero = true;
            return r;
        }
        r.log_main = z * kLn2PiPlain + 0.5 * z * (z - 3.0 - 2.0 * w) + log_gamma_any(z + 1.0) +
                     log_barnes_g_any(z + 2.0 + x1) + log_barnes_g_any(z + 2.0 + x3) - z * log_gamma(u) -
                     log_barnes_g_any(1.0 + x1) - log_barnes_g_any(1.0 + x3);
        Complex b = u - 1.0;
        r.bracket = 0.5 * hyp2f1(1.0, b, 1.0 + x1, 0.5) * rgamma(1.0 + x1) * rgamma(z + 1.0 + x3) -
                    0.5 * x3 * hyp2f1(1.0, b, z + 2.0 + x1, 0.5) * rgamma(z + 2.0 + x1) * rgamma(1.0 + x3);
        return r;
    }
    }
    return r;
}

template <class R>
R rconst(double v) { return R(v); }

// log Gamma for the series kernel; the branch is irrelevant since results are
// exponentiated with integer multiplicity.
template <class R, class C>
C lgamma_k(const C& z) {
    if constexpr (std::is_same_v<R, double>) {
        return log_gamma_any(z);
    } else {
        using std::log;
        const int digits = std::numeric_limits<R>::digits10;
        const R shift_to = R(digits) * R(0.6) + R(10);
        C x = z;
        C prod = C(1);
        while (x.real() < shift_to) {
            prod *= x;
            x += C(1);
        }
        const R half_ln2pi = log(R(2) * boost::math::constants::pi<R>()) / R(2);
        C s = (x - C(R(0.5))) * log(x) - x + C(half_ln2pi);
        C inv = C(1) / x;
        C inv2 = inv * inv;
        C p = inv;
        for (int k = 1; k <= digits / 2 + 10; ++k) {
            R b = boost::math::bernoulli_b2n<R>(k);
            s += p * C(b / (R(2 * k) * R(2 * k - 1)));
            p *= inv2;
        }
        return s - log(prod);
    }
}

template <class C>
struct KernelOut {
    C value;
    double max_log = 0.0;
    double tail = 0.0;
    int terms = 0;
};

template <class R, class C>
C to_c(Complex z) {
    return C(R(z.real()), R(z.imag()));
}

template <class R, class C>
double log_abs(const C& z) {
    using std::abs;
    using std::log;
    R a = abs(z);
    if (a == R(0)) return -INFINITY;
    return static_cast<double>(log(a));
}

// Sum of (-x)^n a_n / n! without the prefactor, terms built in log form.
template <class R, class C>
KernelOut<C> sum_series(const CorrelatorCase& cs, double mu, Complex c, const SeriesSpec& spec, bool segment = false) {
    using std::exp;
    using std::log;
    using std::sqrt;
    const R pi = boost::math::constants::pi<R>();
    const C L = C(log(R(mu))) + to_c<R, C>(c) * C(sqrt(R(2)));
    const C w = to_c<R, C>(cs.w());
    const C x1 = to_c<R, C>(kSqrt2 * cs.alpha1);
    const C x3 = to_c<R, C>(kSqrt2 * cs.alpha3);
    const C b1 = to_c<R, C>(cs.beta1()), b2 = to_c<R, C>(cs.beta2());
    const R ln4pi = log(R(4) * pi), ln2pi = log(R(2) * pi);
    const auto kind = cs.kind;

    C K = C(0);
    if (kind == CorrelatorCase::Kind::Two)
        K = lgamma_k<R, C>(b1) + lgamma_k<R, C>(b2) - lgamma_k<R, C>(-w);
    else if (kind == CorrelatorCase::Kind::Three)
        K = lgamma_k<R, C>(C(1) + x1) + lgamma_k<R, C>(C(1) + x3) - lgamma_k<R, C>(-w);

    // running pieces
    R lnfact = R(0);        // ln n!
    R sum_lnfact = R(0);    // sum_{k=1}^{n-1} ln k!
    C one_acc = C(0);       // sum_{j<n} (j+1) log(j - w)
    C lp1 = C(0), lp2 = C(0), sum_lp = C(0);  // log Pochhammers of beta_j
    C lpw = C(0);           // log (-w)_n
    C lq1 = C(0), lq3 = C(0), sum_lq = C(0);  // log (1+x)_k, sum over k <= n
    std::vector<C> P1{C(1)}, P3{C(1)};        // 1/(1+x)_j

    const C inv_sqrt2 = C(R(1) / sqrt(R(2)));
    std::vector<C> terms{segment ? inv_sqrt2 / (-w) : C(1)};
    KernelOut<C> out;
    double prev_log = 0.0, prev_ratio = INFINITY;
    int decreasing = 0;
    sum_lq = C(0);
    for (int n = 1; n <= spec.max_terms; ++n) {
        const R dn = R(n);
        const C quad = C(dn * (dn - R(3)) / R(2)) - C(dn) * w;
        C lt;
        C extra = C(1);
        switch (kind) {
        case CorrelatorCase::Kind::Zero:
            sum_lnfact += lnfact;
            lnfact += log(dn);
            lt = C(dn * ln4pi + dn * (dn - R(1)) / R(2) + R(2) * sum_lnfact - dn * lnfact);
            break;
        case CorrelatorCase::Kind::One:
            sum_lnfact += lnfact;
            lnfact += log(dn);
            one_acc += C(dn) * log(C(dn - R(1)) - w);
            lt = C(dn * ln4pi + sum_lnfact) + quad - one_acc;
            break;
        case CorrelatorCase::Kind::Two:
            sum_lp += lp1 + lp2;
            lp1 += log(b1 + C(dn - R(1)));
            lp2 += log(b2 + C(dn - R(1)));
            lpw += log(C(dn - R(1)) - w);
            lt = C(dn * ln4pi) + quad + C(dn) * K + sum_lp - C(dn) * lpw;
            break;
        case CorrelatorCase::Kind::Three: {
            if (n == 1) sum_lq = C(0);  // k = 0 terms vanish
            lq1 += log(C(1) + x1 + C(dn - R(1)));
            lq3 += log(C(1) + x3 + C(dn - R(1)));
            sum_lq += lq1 + lq3;
            lpw += log(C(dn - R(1)) - w);
            P1.push_back(P1.back() / (C(1) + x1 + C(dn - R(1))));
            P3.push_back(P3.back() / (C(1) + x3 + C(dn - R(1))));
            C s = C(0);
            for (int j = 0; j <= n; ++j) s += P1[j] * P3[n - j];
            extra = s;
            lt = C(dn * ln2pi) + quad + C(dn) * K + sum_lq - C(dn) * lpw;
            break;
        }
        }
        lt += C(dn) * L;
        if (segment) extra *= inv_sqrt2 / (C(dn) - w);
        C t = exp(lt) * extra;
        if (n % 2) t = -t;
        terms.push_back(t);
        double la = static_cast<double>(lt.real()) + log_abs<R, C>(extra);
        out.max_log = std::max(out.max_log, la);
        double ratio = std::exp(la - prev_log);
        decreasing = (ratio < prev_ratio) ? decreasing + 1 : 0;
        prev_log = la;
        prev_ratio = ratio;
        out.terms = n + 1;
        if (n >= 8 && decreasing >= 3 && ratio < 1.0) {
            double tail = std::exp(la) * ratio / (1.0 - ratio);
            if (tail <= spec.tail_tol) {
                out.tail = tail;
                // pairwise reduction in the working precision
                while (terms.size() > 1) {
                    std::vector<C> next((terms.size() + 1) / 2);
                    for (std::size_t i = 0; i + 1 < terms.size(); i += 2) next[i / 2] = terms[i] + terms[i + 1];
                    if (terms.size() % 2) next.back() = terms.back();
                    terms.swap(next);
                }
                out.value = terms[0];
                return out;
            }
        }
    }
    throw Error(Errc::TruncationFailure, "series tail not certified within max_terms");
}

double shape(double C2, double y) {
    double a = std::abs(y);
    return std::pow(2.0 + a, C2) * std::exp(-0.5 * a * std::atan(a));
}

}  // namespace

Complex mellin_integrand(const CorrelatorCase& cs, Complex z, Complex log_x) {
    return mellin_integrand_offset(cs, z - cs.w(), log_x);
}

Complex mellin_integrand_offset(const CorrelatorCase& cs, Complex d, Complex log_x) {
    const Complex z = cs.w() + d;
    LogF l = log_f(cs, z, d);
    if (l.zero) return 0.0;
    return std::exp(log_gamma_any(-z) + l.log_main + z * log_x) * l.bracket;
}

Complex f_eval(const CorrelatorCase& cs, Complex z) {
    LogF l = log_f(cs, z, z - cs.w());
    if (l.zero) return 0.0;
    Complex v = std::exp(l.log_main) * l.bracket;
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw Error(Errc::Overflow, "f_eval overflow");
    return v;
}

namespace {

SeriesResult run_series(const CorrelatorCase& cs, double mu, Complex c, const SeriesSpec& spec, bool segment) {
    if (!(mu > 0.0)) throw Error(Errc::DomainError, "mu must be positive");
    if (spec.max_terms < 8 || !(spec.tail_tol > 0.0)) throw Error(Errc::DomainError, "invalid series spec");
    if (cs.kind != CorrelatorCase::Kind::Zero && near_nonpositive_integer(-cs.w(), 1e-8))
        throw Error(Errc::PoleAt, "w is a nonnegative integer");
    using namespace boost::multiprecision;
    // double first; its magnitude profile decides whether cancellation needs more digits
    auto d = sum_series<double, Complex>(cs, mu, c, spec, segment);
    double loss = d.max_log - std::log(std::max(std::abs(d.value), 1e-300));
    SeriesResult r;
    r.terms = d.terms;
    r.tail_bound = d.tail;
    r.max_term = std::exp(std::min(d.max_log, 700.0));
    if (d.max_log < 700.0 && loss < 3.0 * std::log(10.0)) {
        r.value = cs.prefactor() * d.value;
        r.digits = 16;
        return r;
    }
    auto m = sum_series<cpp_bin_float_50, cpp_complex_50>(cs, mu, c, spec, segment);
    Complex v(static_cast<double>(m.value.real()), static_cast<double>(m.value.imag()));
    loss = m.max_log - std::log(std::max(std::abs(v), 1e-300));
    r.digits = 50;
    if (loss > 33.0 * std::log(10.0)) {
        auto h = sum_series<cpp_bin_float_100, cpp_complex_100>(cs, mu, c, spec, segment);
        v = Complex(static_cast<double>(h.value.real()), static_cast<double>(h.value.imag()));
        loss = h.max_log - std::log(std::max(std::abs(v), 1e-300));
        r.digits = 100;
        if (loss > 83.0 * std::log(10.0)) throw Error(Errc::TruncationFailure, "cancellation beyond working precision");
    }
    r.value = cs.prefactor() * v;
    return r;
}

}  // namespace

SeriesResult series_correlator_ex(const CorrelatorCase& cs, double mu, Complex c, const SeriesSpec& spec) {
    return run_series(cs, mu, c, spec, false);
}

SeriesResult segment_series(const CorrelatorCase& cs, double mu, const SeriesSpec& spec) {
    return run_series(cs, mu, 0.0, spec, true);
}

Complex series_correlator(const CorrelatorCase& cs, double mu, Complex c, const SeriesSpec& spec) {
    return series_correlator_ex(cs, mu, c, spec).value;
}

bool is_imaginary_w(const CorrelatorCase& cs) {
    return cs.kind == CorrelatorCase::Kind::Two && std::abs(cs.w().real()) < 1e-12;
}

void check_contour_hypotheses(const CorrelatorCase& cs) {
    const Complex w = cs.w();
    switch (cs.kind) {
    case CorrelatorCase::Kind::Zero: return;
    case CorrelatorCase::Kind::One:
        if (cs.alpha1.real() > 0.0) throw Error(Errc::HypothesisViolation, "one-point needs Re(alpha) <= 0");
        return;
    case CorrelatorCase::Kind::Two:
        if (is_imaginary_w(cs)) {
            if (w.imag() == 0.0) throw Error(Errc::HypothesisViolation, "two-point with w = 0");
            return;
        }
        if (!(w.real() > -0.5 && w.real() < 0.0))
            throw Error(Errc::HypothesisViolation, "two-point needs Re(w) in (-1/2, 0) or Re(w) = 0");
        return;
    case CorrelatorCase::Kind::Three:
        if (!(w.real() > -0.5 && w.real() < 0.0))
            throw Error(Errc::HypothesisViolation, "three-point needs Re(w) in (-1/2, 0)");
        return;
    }
}

double contour_line(const CorrelatorCase& cs) {
    if (cs.kind == CorrelatorCase::Kind::Zero) return -0.5;
    if (is_imaginary_w(cs)) return 0.5;
    return 0.5 * cs.w().real();
}

double IntegrandBound::operator()(double y) const { return C1 * shape(C2, y); }

double IntegrandBound::tail(double Y) const {
    auto g = [this](double y) { return Complex((*this)(y), 0.0); };
    double err = 0.0;
    return 2.0 * integrate_gk(g, Y, Y + 400.0, 1e-8, &err).real();
}

IntegrandBound fit_integrand_bound(const CorrelatorCase& cs, double x0) {
    IntegrandBound b;
    double worst = 0.0;
    for (int k = -320; k <= 320; ++k) {
        double y = 0.25 * k;
        Complex z(x0, y);
        double v = 0.0;
        if (!(is_imaginary_w(cs) && y == 0.0 && x0 == 0.0)) {
            LogF l = log_f(cs, z, z - cs.w());
            if (!l.zero) v = std::abs(std::exp(log_gamma_any(-z) + l.log_main) * l.bracket);
        }
        worst = std::max(worst, v / shape(b.C2, y));
    }
    // margin for values between samples
    b.C1 = 2.0 * worst;
    return b;
}

double integrand_bound(const CorrelatorCase& cs, double x0, double y) { return fit_integrand_bound(cs, x0)(y); }

ContourResult contour_correlator_ex(const CorrelatorCase& cs, double mu, double c, const QuadratureSpec& spec,
                                    double x0) {
    if (!(mu > 0.0)) throw Error(Errc::DomainError, "mu must be positive");
    if (!(spec.truncation_Y > 0.0) || !(spec.rel_tol > 0.0 && spec.rel_tol < 1e-2))
        throw Error(Errc::DomainError, "invalid quadrature spec");
    if (std::abs(c) > 5.0) throw Error(Errc::HypothesisViolation, "|c| > 5: use the series evaluator");
    check_contour_hypotheses(cs);
    const Complex w = cs.w();
    const bool imag_w = is_imaginary_w(cs);
    if (std::isnan(x0)) x0 = contour_line(cs);
    if (cs.kind == CorrelatorCase::Kind::Zero) {
        if (!(x0 > -1.0 && x0 < 0.0)) throw Error(Errc::HypothesisViolation, "zero-point line needs x0 in (-1, 0)");
    } else if (imag_w) {
        if (!(x0 > 0.0 && x0 < 1.0)) throw Error(Errc::HypothesisViolation, "shift q must lie in (0, 1)");
    } else if (!(x0 > w.real() && x0 < 0.0)) {
        throw Error(Errc::HypothesisViolation, "line must lie in (Re w, 0)");
    }

    const double L = std::log(mu) + kSqrt2 * c;
    auto integrand = [&](double y) -> Complex { return mellin_integrand(cs, Complex(x0, y), L); };
    const double Y = spec.truncation_Y;
    const double width = kPi / (kSqrt2 * std::abs(c) + std::abs(std::log(mu)) + 1.0);
    const double panels = std::ceil(2.0 * Y / width);
    if (panels * 61.0 > double(spec.max_evals)) throw Error(Errc::QuadratureFailure, "evaluation budget too small");

    ContourResult r;
    r.x0 = x0;
    double err = 0.0;
    Complex I = integrate_panels(integrand, -Y, Y, width, spec.rel_tol * 1e-2, &err) / (2.0 * kPi);
    if (imag_w) I += 1.0;
    const Complex pref = cs.prefactor();
    r.value = pref * I;
    r.quad_error = std::abs(pref) * err / (2.0 * kPi);
    IntegrandBound b = fit_integrand_bound(cs, x0);
    r.tail_bound = std::abs(pref) * std::exp(x0 * L) * b.tail(Y) / (2.0 * kPi);
    double scale = std::abs(r.value);
    if (r.tail_bound > 0.1 * spec.rel_tol * scale || r.quad_error > spec.rel_tol * scale)
        throw Error(Errc::QuadratureFailure, "contour value not certified to rel_tol");
    return r;
}

Complex contour_correlator(const CorrelatorCase& cs, double mu, double c, const QuadratureSpec& spec) {
    return contour_correlator_ex(cs, mu, c, spec).value;
}

}  // namespace tlft
