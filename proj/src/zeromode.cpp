#include "tlft/zeromode.hpp"

#include "tlft/parallel.hpp"
#include "tlft/quadrature.hpp"
#include "tlft/specfun.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace tlft {

namespace {

const double kSqrtPi = std::sqrt(kPi);

void check_eps(double eps) {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw Error(Errc::DomainError, "epsilon must be positive");
}

void check_mu(double mu) {
    if (!(mu > 0.0) || !std::isfinite(mu)) throw Error(Errc::DomainError, "mu must be positive");
}

// Indentation profile for the Re(w) = 0 path: plateau r on [a, b], Gaussian roll-off outside.
struct Indent {
    double a, b, r = 0.5;
    double h(double t) const {
        if (t < a) return r * std::exp(-0.5 * (t - a) * (t - a));
        if (t > b) return r * std::exp(-0.5 * (t - b) * (t - b));
        return r;
    }
    double dh(double t) const {
        if (t < a) return -(t - a) * h(t);
        if (t > b) return -(t - b) * h(t);
        return 0.0;
    }
};

// int_0^inf exp(-k s - eps^2 s^2) ds for Re k >= 0, on a ray rotated by arg(k)/4
Complex gauss_laplace(Complex k, double eps, double rel_tol) {
    const double th = std::arg(k) / 4.0;
    const Complex rot = std::polar(1.0, -th);
    const Complex kr = k * rot;
    const Complex e2 = eps * eps * rot * rot;
    double decay = std::max(kr.real(), 1e-300);
    double R = std::min(60.0 / decay, 9.0 / (eps * std::sqrt(std::max(e2.real() / (eps * eps), 1e-3))));
    R = std::max(R, 1e-6);
    auto g = [&](double r) { return std::exp(-kr * r - e2 * r * r); };
    double err = 0.0;
    double width = std::max(R / 64.0, 2.0 * kPi / (std::abs(kr.imag()) + std::abs(e2.imag()) * R + 1.0));
    return rot * integrate_panels(g, 0.0, R, width, rel_tol, &err);
}

// int_{-inf}^0 e^{-sqrt2 w c - eps^2 c^2} C(c) dc through the Mellin-Barnes line; eps = 0 gives the limit.
Complex negative_half(const CorrelatorCase& cs, double mu, double eps, const QuadratureSpec& spec) {
    const Complex w = cs.w();
    const double x0 = contour_line(cs);
    const double L = std::log(mu);
    auto kern = [&](Complex k) -> Complex { return eps == 0.0 ? 1.0 / k : gauss_laplace(k, eps, 1e-12); };
    auto g = [&](double y) -> Complex {
        Complex z(x0, y);
        return mellin_integrand(cs, z, L) * kern(kSqrt2 * (z - w));
    };
    const double width = kPi / (std::abs(L) + 1.0);
    double err = 0.0;
    Complex I = integrate_panels(g, -spec.truncation_Y, spec.truncation_Y, width, spec.rel_tol * 1e-2, &err) /
                (2.0 * kPi);
    if (is_imaginary_w(cs)) I += kern(-kSqrt2 * w);
    return cs.prefactor() * I;
}

Complex sin_pi_c(Complex z) {
    // exact zeros at integers
    double n = std::round(z.real());
    Complex d = z - n;
    Complex s = std::sin(kPi * d);
    return (static_cast<long long>(n) % 2 == 0) ? s : -s;
}

double bump_profile(double r2) {
    if (r2 >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - r2));
}

// Fourier transform int phi(x) e^{itx} dx of a one-dimensional test function, tabulated on
// composite Gauss-Legendre nodes fine enough for every |t| <= t_max.
class BumpFourier {
public:
    BumpFourier(const TestFunction& phi, double t_max) {
        using GL = boost::math::quadrature::gauss<double, 20>;
        // GL stores the nonnegative half of the symmetric rule
        std::vector<double> xs, ws;
        for (std::size_t k = 0; k < GL::abscissa().size(); ++k) {
            double x = GL::abscissa()[k], w = GL::weights()[k];
            xs.push_back(x);
            ws.push_back(w);
            if (x != 0.0) {
                xs.push_back(-x);
                ws.push_back(w);
            }
        }
        for (const auto& b : phi.bumps) {
            // about two periods per 20-point panel
            double periods = t_max * b.radius / kPi;
            int panels = 8 + int(std::ceil(periods / 2.0));
            double h = 2.0 * b.radius / panels;
            for (int p = 0; p < panels; ++p) {
                double mid = -b.radius + (p + 0.5) * h;
                for (std::size_t k = 0; k < xs.size(); ++k) {
                    double u = mid + 0.5 * h * xs[k];
                    double r = u / b.radius;
                    double v = b.scale * bump_profile(r * r) * 0.5 * h * ws[k];
                    if (v != 0.0) nodes_.push_back({b.center[0] + u, v});
                }
            }
        }
    }

    Complex operator()(double t) const {
        double re = 0.0, im = 0.0;
        for (const auto& [x, v] : nodes_) {
            re += v * std::cos(t * x);
            im += v * std::sin(t * x);
        }
        return {re, im};
    }

    // values at t = k dt for k = 0..steps, by phasor rotation with periodic resync
    std::vector<Complex> sweep(double dt, int steps) const {
        std::vector<Complex> out(steps + 1);
        std::vector<Complex> ph(nodes_.size()), rot(nodes_.size());
        for (std::size_t j = 0; j < nodes_.size(); ++j) rot[j] = std::polar(1.0, dt * nodes_[j].first);
        for (int k = 0; k <= steps; ++k) {
            Complex s = 0.0;
            for (std::size_t j = 0; j < nodes_.size(); ++j) {
                if (k % 256 == 0)
                    ph[j] = std::polar(1.0, k * dt * nodes_[j].first);
                else
                    ph[j] *= rot[j];
                s += nodes_[j].second * ph[j];
            }
            out[k] = s;
        }
        return out;
    }

private:
    std::vector<std::pair<double, double>> nodes_;
};

double fourier_cutoff(const TestFunction& phi) {
    double rmin = INFINITY;
    for (const auto& b : phi.bumps) rmin = std::min(rmin, b.radius);
    return 800.0 / rmin;
}

double oscillation_scale(const TestFunction& phi) {
    double m = 0.0;
    for (const auto& b : phi.bumps) m = std::max(m, std::abs(b.center[0]) + b.radius);
    return m;
}

// J(k, eps) - 1/k from its asymptotic series when that reaches double precision.
bool gauss_laplace_correction(Complex k, double eps, Complex& out) {
    const Complex ik2 = 1.0 / (k * k);
    Complex term = -2.0 * eps * eps * ik2 / k;
    Complex sum = 0.0;
    for (int m = 1; m < 200; ++m) {
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(1.0 / k)) {
            out = sum;
            return true;
        }
        Complex next = term * (-2.0 * (2.0 * m + 1.0) * eps * eps) * ik2;
        if (std::abs(next) >= std::abs(term)) return false;
        term = next;
    }
    return false;
}

// -pref sum_n (-mu)^n a_n / n! (J(sqrt2 (n - w), eps) - 1/(sqrt2 (n - w))) in double precision.
// peak is the largest term, a proxy for the rounding error.
bool series_difference(const CorrelatorCase& cs, double mu, double eps, Complex& out, double& peak) {
    const Complex w = cs.w();
    const double lmu = std::log(mu);
    std::vector<Complex> terms;
    peak = 0.0;
    int decreasing = 0;
    double prev = INFINITY;
    for (int n = 0; n < 1500; ++n) {
        Complex k = kSqrt2 * (double(n) - w);
        if (std::abs(k) == 0.0) return false;
        Complex d;
        if (!gauss_laplace_correction(k, eps, d)) d = gauss_laplace(k, eps, 1e-13) - 1.0 / k;
        Complex la = log_coeff(cs, n);
        if (std::isinf(la.real()) && la.real() < 0) {
            terms.push_back(0.0);
            continue;
        }
        Complex t = std::exp(la + n * lmu - std::lgamma(n + 1.0)) * d;
        if (n % 2) t = -t;
        terms.push_back(t);
        double a = std::abs(t);
        if (!std::isfinite(a)) return false;
        peak = std::max(peak, a);
        decreasing = a < prev ? decreasing + 1 : 0;
        prev = a;
        if (n >= 8 && decreasing >= 3 && a < 1e-17 * peak) {
            out = -cs.prefactor() * pairwise_sum(terms);
            peak *= std::abs(cs.prefactor());
            return true;
        }
    }
    return false;
}

}  // namespace

RegularizationSchedule RegularizationSchedule::standard() {
    RegularizationSchedule s;
    for (int k = 0; k < 8; ++k) s.epsilons.push_back(0.4 * std::ldexp(1.0, -k));
    s.richardson_order = 2;
    return s;
}

void RegularizationSchedule::validate() const {
    if (epsilons.empty()) throw Error(Errc::DomainError, "empty schedule");
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        if (!(epsilons[i] >= 1e-4)) throw Error(Errc::DomainError, "schedule epsilon below 1e-4");
        if (i > 0 && !(epsilons[i] < epsilons[i - 1]))
            throw Error(Errc::DomainError, "schedule must be strictly decreasing");
    }
    if (richardson_order < 0 || richardson_order > 2) throw Error(Errc::DomainError, "order must be 0, 1 or 2");
}

Complex regularized_correlator(const CorrelatorCase& cs, double mu, double eps, const QuadratureSpec& spec) {
    check_mu(mu);
    check_eps(eps);
    check_contour_hypotheses(cs);
    const Complex w = cs.w();
    const double L = std::log(mu);
    const Complex pref = cs.prefactor();
    constexpr double U = 12.0;
    if (!is_imaginary_w(cs)) {
        // z = w + i eps u; the Gaussian weight comes from the c-integral
        auto g = [&](double u) -> Complex {
            Complex d(0.0, eps * u);
            return (mellin_integrand_offset(cs, d, L) + mellin_integrand_offset(cs, -d, L)) * std::exp(-0.5 * u * u);
        };
        double err = 0.0;
        Complex I = integrate_ts(g, 0.0, U, spec.rel_tol, &err);
        if (!(err <= 1e3 * spec.rel_tol * std::max(std::abs(I), 1e-300)))
            throw Error(Errc::QuadratureFailure, "regularized integral did not converge");
        return pref * I / (2.0 * kSqrtPi);
    }
    // Re(w) = 0: residue term plus an indented path right of z = 0 and z = w
    const double tp = -w.imag() / eps;
    Indent ind{std::min(0.0, tp) - 1.0, std::max(0.0, tp) + 1.0};
    auto g = [&](double t) -> Complex {
        double h = ind.h(t);
        Complex s(h, t);
        return mellin_integrand_offset(cs, eps * s, L) * std::exp(0.5 * s * s) * Complex(1.0, -ind.dh(t));
    };
    std::vector<double> cuts{-U, U};
    for (double c : {ind.a, ind.b})
        if (c > -U && c < U) cuts.push_back(c);
    std::sort(cuts.begin(), cuts.end());
    Complex I = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double err = 0.0;
        I += integrate_panels(g, cuts[i], cuts[i + 1], 1.0, spec.rel_tol, &err);
    }
    Complex E = (kSqrtPi / eps) * std::exp(w * w / (2.0 * eps * eps));
    return pref * (E + I / (2.0 * kSqrtPi));
}

Complex renormalization_exponent(const CorrelatorCase& cs) {
    switch (cs.kind) {
    case CorrelatorCase::Kind::Zero: return 0.0;
    case CorrelatorCase::Kind::One: return kSqrt2 * cs.alpha1;
    default: return -cs.w();
    }
}

Complex closed_form_limit(const CorrelatorCase& cs, double mu) {
    check_mu(mu);
    const Complex w = cs.w();
    const double lnbase4 = std::log(4.0 * kSqrt2 * kPi * mu);
    switch (cs.kind) {
    case CorrelatorCase::Kind::Zero: return std::exp(1.0) / (4.0 * kPi * kSqrt2 * mu);
    case CorrelatorCase::Kind::One: {
        if (!(cs.alpha1.real() <= 0.0)) throw Error(Errc::HypothesisViolation, "one-point limit needs Re(alpha) <= 0");
        Complex v = std::exp(w * lnbase4 - 0.5 * w * (w + 3.0)) * barnes_g(w + 2.0) * std::cos(0.5 * kPi * (w + 1.0)) *
                    cgamma(-w) * cgamma(0.5 * w + 1.0) / (kSqrtPi * barnes_g(-w));
        return v;
    }
    case CorrelatorCase::Kind::Two: {
        if (!(w.real() > -0.5 && w.real() < 0.0))
            throw Error(Errc::HypothesisViolation, "two-point limit needs Re(w) in (-1/2, 0)");
        Complex e = std::exp(w * lnbase4 + 2.0 * cs.alpha1 * cs.alpha2 - 0.5 * w * w - 1.5 * w);
        return e * cgamma(-w) * cgamma(w + 1.0) * barnes_g(w + cs.beta1()) * barnes_g(w + cs.beta2()) *
               std::cos(0.5 * kPi * w) * cgamma(0.5 * (w + 1.0)) /
               (std::sqrt(2.0 * kPi) * barnes_g(cs.beta1()) * barnes_g(cs.beta2()));
    }
    case CorrelatorCase::Kind::Three: {
        if (!(w.real() > -0.5 && w.real() < 0.0))
            throw Error(Errc::HypothesisViolation, "three-point limit needs Re(w) in (-1/2, 0)");
        const Complex x1 = kSqrt2 * cs.alpha1, x3 = kSqrt2 * cs.alpha3;
        Complex e = std::exp(x1 + x3 + 2.0 * cs.alpha1 * cs.alpha3 - 0.5 * w * (w + 3.0) +
                             (-(x1 + x3) + 0.5 * (w + 1.0)) * std::log(2.0) + w * std::log(2.0 * kPi * mu));
        Complex main = e * cgamma(-w) * cgamma(w + 1.0) * barnes_g(-x1) * barnes_g(-x3) * std::cos(0.5 * kPi * w) *
                       cgamma(0.5 * (w + 1.0)) / (2.0 * kSqrtPi * barnes_g(1.0 + x1) * barnes_g(1.0 + x3));
        Complex s = (1.0 + 2.0 * x1) * sin_pi_c(x1) + (1.0 + 2.0 * x3) * sin_pi_c(x3);
        return main * s / (4.0 * kPi);
    }
    }
    return 0.0;
}

Complex extrapolate_to_zero(const std::vector<double>& eps, const std::vector<Complex>& values, int order) {
    if (eps.size() != values.size() || eps.empty()) throw Error(Errc::DomainError, "size mismatch");
    if (order == 0) return values.back();
    std::vector<std::function<double(double)>> basis{[](double) { return 1.0; },
                                                     [](double e) { return e * std::log(e); },
                                                     [](double e) { return e; }};
    if (order >= 2) {
        basis.push_back([](double e) { return e * e * std::log(e) * std::log(e); });
        basis.push_back([](double e) { return e * e * std::log(e); });
        basis.push_back([](double e) { return e * e; });
    }
    const Eigen::Index m = Eigen::Index(eps.size()), p = Eigen::Index(basis.size());
    if (m < p) throw Error(Errc::DomainError, "schedule too short for the extrapolation order");
    Eigen::MatrixXd A(m, p);
    Eigen::MatrixXcd b(m, 1);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < p; ++j) A(i, j) = basis[j](eps[i]);
        b(i, 0) = values[i];
    }
    // column scaling keeps the QR well conditioned
    Eigen::VectorXd scale = A.colwise().norm();
    for (Eigen::Index j = 0; j < p; ++j) A.col(j) /= scale(j);
    Eigen::MatrixXcd x = A.cast<Complex>().colPivHouseholderQr().solve(b);
    return x(0, 0) / scale(0);
}

LimitResult renormalized_limit_ex(const CorrelatorCase& cs, double mu, const RegularizationSchedule& sched,
                                  ContourKind kind) {
    check_mu(mu);
    sched.validate();
    const Complex rho = renormalization_exponent(cs);
    LimitResult r;
    r.samples.resize(sched.epsilons.size());
    parallel_for(sched.epsilons.size(), [&](std::size_t i) {
        double e = sched.epsilons[i];
        Complex v = kind == ContourKind::RealLine ? regularized_correlator(cs, mu, e) : hankel_correlator(cs, mu, e);
        r.samples[i] = std::exp(rho * std::log(e)) * v;
    });
    // Only the smallest epsilons are in the asymptotic regime: fit exactly through the last p points
    // and compare with the fit shifted one point toward larger epsilon.
    const int order = sched.richardson_order;
    const std::size_t n = sched.epsilons.size();
    const std::size_t p = order == 0 ? 1 : (order == 1 ? 3 : 6);
    auto fit = [&](std::size_t first, std::size_t count) {
        std::vector<double> e(sched.epsilons.begin() + first, sched.epsilons.begin() + first + count);
        std::vector<Complex> v(r.samples.begin() + first, r.samples.begin() + first + count);
        return extrapolate_to_zero(e, v, order);
    };
    if (n < p) throw Error(Errc::DomainError, "schedule too short for the extrapolation order");
    r.value = fit(n - p, p);
    if (n > p) {
        r.spread = std::abs(fit(n - p - 1, p) - r.value);
        // a vanishing limit is judged against the smallest-epsilon sample
        double scale = std::max(std::abs(r.value), std::abs(r.samples.back()));
        if (r.spread > 5e-2 * scale)
            throw Error(Errc::ExtrapolationUnstable, "shifted extrapolants disagree");
    }
    return r;
}

Complex renormalized_limit(const CorrelatorCase& cs, double mu, const RegularizationSchedule& sched,
                           ContourKind kind) {
    return renormalized_limit_ex(cs, mu, sched, kind).value;
}

Complex hankel_factor(Complex w) {
    // 1 - e^{-2 pi i w} = 2i e^{-pi i w} sin(pi w)
    return Complex(0.0, 2.0) * std::exp(Complex(0.0, -kPi) * w) * sin_pi_c(w);
}

Complex vertical_segment(const CorrelatorCase& cs, double mu, const SeriesSpec& spec) {
    check_mu(mu);
    const Complex w = cs.w();
    if (near_nonpositive_integer(-w, 1e-12)) throw Error(Errc::PoleAt, "w is a nonnegative integer");
    const Complex H = hankel_factor(w);
    if (H == 0.0) return 0.0;
    return H * segment_series(cs, mu, spec).value;
}

Complex vertical_segment_quadrature(const CorrelatorCase& cs, double mu, double rel_tol) {
    check_mu(mu);
    const Complex w = cs.w();
    auto g = [&](double t) {
        return std::exp(Complex(0.0, -kSqrt2 * t) * w) * series_correlator(cs, mu, Complex(0.0, t));
    };
    // the integrand peaks where mu e^{sqrt2 i t} = -mu and the integral cancels against that
    // peak; the series value only sizes the cancellation, so refuse before integrating
    const double peak = std::abs(g(kPi / kSqrt2)) * kSqrt2 * kPi;
    const double size = std::abs(hankel_factor(w) * segment_series(cs, mu).value);
    if (peak > 1e5 * size) throw Error(Errc::QuadratureFailure, "segment quadrature loses too many digits to cancellation");
    double err = 0.0;
    Complex I = Complex(0.0, -1.0) * integrate_gk(g, 0.0, kSqrt2 * kPi, rel_tol, &err);
    if (peak > 1e5 * std::abs(I) || !(err <= rel_tol * 1e3 * std::abs(I)))
        throw Error(Errc::QuadratureFailure, "segment quadrature loses too many digits to cancellation");
    return I;
}

Complex hankel_correlator(const CorrelatorCase& cs, double mu, double eps, const QuadratureSpec& spec) {
    check_mu(mu);
    check_eps(eps);
    const Complex w = cs.w();
    const Complex H = hankel_factor(w);
    if (H == 0.0) return 0.0;
    Complex Ce = regularized_correlator(cs, mu, eps, spec);
    // term by term: vertical segment minus negative half-line = -pref sum t_n (J_n - 1/k_n)
    Complex R;
    double peak = 0.0;
    if (series_difference(cs, mu, eps, R, peak) && peak * 1e-16 < 1e-12 * std::max(std::abs(Ce), std::abs(R)))
        return H * (Ce + R);
    Complex D = negative_half(cs, mu, eps, spec);
    Complex V;
    try {
        V = vertical_segment(cs, mu);
    } catch (const Error& e) {
        if (e.code() != Errc::TruncationFailure) throw;
        // the segment equals H times the eps = 0 negative half-line integral
        V = H * negative_half(cs, mu, 0.0, spec);
    }
    return H * (Ce - D) + V;
}

Complex half_gaussian_moment(Complex w) {
    if (!(w.real() > -1.0)) throw Error(Errc::DomainError, "half_gaussian_moment needs Re(w) > -1");
    return std::exp(0.5 * (w + 1.0) * std::log(2.0)) * std::cos(0.5 * kPi * w) * cgamma(0.5 * (w + 1.0));
}

std::size_t TestFunction::dim() const { return bumps.empty() ? 0 : bumps.front().center.size(); }

double TestFunction::operator()(const std::vector<double>& x) const {
    double s = 0.0;
    for (const auto& b : bumps) {
        if (b.center.size() != x.size()) throw Error(Errc::DomainError, "test function dimension mismatch");
        double r2 = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            double d = (x[i] - b.center[i]) / b.radius;
            r2 += d * d;
        }
        s += b.scale * bump_profile(r2);
    }
    return s;
}

std::vector<std::pair<double, double>> TestFunction::support() const {
    std::vector<std::pair<double, double>> box(dim(), {INFINITY, -INFINITY});
    for (const auto& b : bumps)
        for (std::size_t i = 0; i < box.size(); ++i) {
            box[i].first = std::min(box[i].first, b.center[i] - b.radius);
            box[i].second = std::max(box[i].second, b.center[i] + b.radius);
        }
    return box;
}

Complex heaviside_pairing(const TestFunction& phi, double eps) {
    check_eps(eps);
    if (phi.dim() != 1) throw Error(Errc::DomainError, "heaviside_pairing needs a one-dimensional test function");
    const double T = std::min(9.0 / eps, fourier_cutoff(phi));
    const double width = kPi / (oscillation_scale(phi) + 1.0);
    BumpFourier fourier(phi, T);
    auto g = [&](double t) { return std::exp(-eps * eps * t * t) * fourier(t); };
    // the integrand is entire and under one oscillation per panel, so a fixed rule is exact to rounding;
    // adaptive refinement would stall on the negligible far panels
    using GL = boost::math::quadrature::gauss<double, 30>;
    const int n = std::max(1, int(std::ceil(T / width)));
    const double h = T / n;
    std::vector<Complex> parts(n);
    for (int i = 0; i < n; ++i) parts[i] = GL::integrate(g, i * h, (i + 1) * h);
    return pairwise_sum(parts);
}

Complex heaviside_limit(const TestFunction& phi) {
    if (phi.dim() != 1) throw Error(Errc::DomainError, "heaviside_limit needs a one-dimensional test function");
    double X = 0.0;
    for (const auto& [lo, hi] : phi.support()) X = std::max({X, std::abs(lo), std::abs(hi)});
    auto g = [&](double x) { return Complex((phi(x) - phi(-x)) / x, 0.0); };
    double err = 0.0;
    Complex odd = X > 0.0 ? integrate_panels(g, 0.0, X, 0.05, 1e-12, &err) : 0.0;
    return kPi * phi(0.0) + Complex(0.0, 1.0) * odd;
}

double heaviside_bound(const TestFunction& phi) {
    const double width = kPi / (oscillation_scale(phi) + 1.0);
    const double T = fourier_cutoff(phi);
    BumpFourier fourier(phi, T);
    // |phi^| has kinks at its zeros; a fine trapezoid rule handles them without refinement
    const double dt = width / 64.0;
    const auto vals = fourier.sweep(dt, int(std::ceil(T / dt)));
    double total = 0.5 * std::abs(vals.front());
    for (std::size_t k = 1; k + 1 < vals.size(); ++k) total += std::abs(vals[k]);
    total += 0.5 * std::abs(vals.back());
    return total * dt;
}

CorrelatorCase pairing_case(double P1, double P2) {
    const double a = -0.5 * kInvSqrt2;
    CorrelatorCase c = CorrelatorCase::two_point(Complex(a, P1), Complex(a, P2));
    // exact imaginary w
    return c;
}

PairingResult two_point_pairing(const TestFunction& phi, double eps, const PairingSpec& spec) {
    check_eps(eps);
    check_mu(spec.mu);
    if (phi.dim() != 2) throw Error(Errc::DomainError, "two_point_pairing needs a two-dimensional test function");
    double h = spec.step > 0.0 ? spec.step : eps / 3.0;
    if (eps / kSqrt2 < 2.0 * h) throw Error(Errc::GridTooCoarse, "grid step does not resolve the kernel width");
    auto box = phi.support();
    const int n1 = int(std::ceil((box[0].second - box[0].first) / h));
    const int n2 = int(std::ceil((box[1].second - box[1].first) / h));
    // offsets keep nodes off the line P1 + P2 = 0
    const double o1 = 0.5 * h, o2 = 0.5 * h + h / 3.0;
    struct Node {
        double p1, p2, phi;
    };
    std::vector<Node> nodes;
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j <= n2; ++j) {
            double p1 = box[0].first + o1 + i * h, p2 = box[1].first - h + o2 + j * h;
            double v = phi({p1, p2});
            if (v != 0.0) nodes.push_back({p1, p2, v});
        }
    std::vector<Complex> vals(nodes.size());
    parallel_for(nodes.size(), [&](std::size_t k) {
        const auto& nd = nodes[k];
        CorrelatorCase cs = pairing_case(nd.p1, nd.p2);
        Complex c = spec.kind == ContourKind::RealLine ? regularized_correlator(cs, spec.mu, eps)
                                                       : hankel_correlator(cs, spec.mu, eps);
        vals[k] = nd.phi * c * h * h;
    });
    PairingResult r;
    r.value = pairwise_sum(vals);
    r.nodes = nodes.size();
    r.step = h;
    return r;
}

double delta_target(const TestFunction& phi) {
    if (phi.dim() != 2) throw Error(Errc::DomainError, "delta_target needs a two-dimensional test function");
    auto box = phi.support();
    double lo = std::max(box[0].first, -box[1].second), hi = std::min(box[0].second, -box[1].first);
    if (!(hi > lo)) return 0.0;
    auto g = [&](double p) { return Complex(std::exp(0.25 + 2.0 * p * p) * phi({p, -p}), 0.0); };
    double err = 0.0;
    return kPi * integrate_panels(g, lo, hi, 0.05, 1e-12, &err).real();
}

AcValue ac_zero_point(double b, double mu) {
    check_mu(mu);
    if (!(b > 0.0 && b < 1.0)) throw Error(Errc::DomainError, "ac_zero_point needs b in (0, 1)");
    const double b2 = b * b;
    const double q = 1.0 / b - b;
    const Complex gb = cgamma(-b2) * rgamma(1.0 + b2);
    // 1/gamma(-1/b^2) vanishes where gamma(-1/b^2) has a pole
    // b = 1/sqrt2 in double gives 1/b^2 a few ulps off 2, so snap near-integers
    double inv_b2 = 1.0 / b2;
    if (std::abs(inv_b2 - std::round(inv_b2)) < 8.0 * std::numeric_limits<double>::epsilon() * inv_b2)
        inv_b2 = std::round(inv_b2);
    const Complex inv_gB = cgamma(1.0 + inv_b2) * rgamma(-inv_b2);
    const Complex base = kPi * mu * gb;
    // arg in [-pi, pi): the negative real axis sits at -pi
    Complex lb(std::log(std::abs(base)), std::arg(base));
    if (base.imag() == 0.0 && base.real() < 0.0) lb = Complex(std::log(-base.real()), -kPi);
    AcValue r;
    r.value = Complex(0.0, 1.0) * std::exp((1.0 - inv_b2) * lb) * (1.0 + b2) * inv_gB /
              (kPi * kPi * kPi * q * gb) * std::exp(q * q - q * q * std::log(4.0));
    r.magnitude = std::abs(r.value);
    r.phase = std::arg(r.value);
    return r;
}

}  // namespace tlft
