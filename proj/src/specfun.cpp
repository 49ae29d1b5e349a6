#include "tlft/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace tlft {

const char* errc_name(Errc e) {
    switch (e) {
    case Errc::DomainCut: return "DomainCut";
    case Errc::PoleAt: return "PoleAt";
    case Errc::DomainRadius: return "DomainRadius";
    case Errc::DomainError: return "DomainError";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::Overflow: return "Overflow";
    case Errc::CoincidentPoints: return "CoincidentPoints";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::DivergentIntegral: return "DivergentIntegral";
    case Errc::TruncationFailure: return "TruncationFailure";
    case Errc::HypothesisViolation: return "HypothesisViolation";
    case Errc::QuadratureFailure: return "QuadratureFailure";
    case Errc::ExtrapolationUnstable: return "ExtrapolationUnstable";
    case Errc::GridTooCoarse: return "GridTooCoarse";
    case Errc::UsageError: return "UsageError";
    case Errc::IoError: return "IoError";
    }
    return "Unknown";
}

namespace {

constexpr double kShiftTarget = 16.0;

// B_{2k} / (2k (2k-1)), k = 1..10
constexpr std::array<double, 10> kStirling = {
    1.0 / 12.0,          -1.0 / 360.0,          1.0 / 1260.0,     -1.0 / 1680.0,
    1.0 / 1188.0,        -691.0 / 360360.0,     1.0 / 156.0,      -3617.0 / 122400.0,
    43867.0 / 244188.0,  -174611.0 / 125400.0,
};

// B_{2k} / (2k), k = 1..10
constexpr std::array<double, 10> kDigammaAsym = {
    1.0 / 12.0,         -1.0 / 120.0,       1.0 / 252.0,     -1.0 / 240.0,
    1.0 / 132.0,        -691.0 / 32760.0,   1.0 / 12.0,      -3617.0 / 8160.0,
    43867.0 / 14364.0,  -174611.0 / 6600.0,
};

// B_{2k+2} / (4k(k+1)), k = 1..8
constexpr std::array<double, 8> kBarnesAsym = {
    -1.0 / 240.0,       1.0 / 1008.0,      -1.0 / 1440.0,    1.0 / 1056.0,
    -691.0 / 327600.0,  1.0 / 144.0,       -3617.0 / 114240.0, 43867.0 / 229824.0,
};

// Bernoulli numbers B_2, B_4, ..., B_10 for Euler-Maclaurin tails.
constexpr std::array<double, 5> kB2n = {1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0};

Complex stirling_log_gamma(Complex x) {
    Complex lx = std::log(x);
    Complex inv = 1.0 / x;
    Complex inv2 = inv * inv;
    Complex series = 0.0;
    Complex p = inv;
    for (double c : kStirling) {
        series += c * p;
        p *= inv2;
    }
    return (x - 0.5) * lx - x + 0.5 * kLn2Pi + series;
}

// log G(u + 1) for large Re u.
Complex barnes_asymptotic(Complex u) {
    Complex lu = std::log(u);
    Complex inv2 = 1.0 / (u * u);
    Complex series = 0.0;
    Complex p = inv2;
    for (double c : kBarnesAsym) {
        series += c * p;
        p *= inv2;
    }
    return 0.5 * u * u * lu - 0.75 * u * u + 0.5 * u * kLn2Pi - lu / 12.0 + kZetaPrimeM1 + series;
}

Complex sin_pi(Complex z) {
    // reduce the real part first so large arguments keep their zeros exact
    double r = std::fmod(z.real(), 2.0);
    return std::sin(kPi * Complex(r, z.imag()));
}

bool is_nonpositive_integer(Complex z) {
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

Complex check_finite(Complex v, const char* what) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw Error(Errc::Overflow, what);
    return v;
}

// sum_{k > K} k^{-s} by Euler-Maclaurin
double zeta_tail(double s, double K) {
    double r = std::pow(K, 1.0 - s) / (s - 1.0) - 0.5 * std::pow(K, -s);
    double rising = s;  // (s)_{2j-1}
    double fact = 2.0;  // (2j)!
    for (std::size_t j = 1; j <= kB2n.size(); ++j) {
        r += kB2n[j - 1] / fact * rising * std::pow(K, -s - 2.0 * j + 1.0);
        rising *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
        fact *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
    }
    return r;
}

// G(z + 1) from the Weierstrass product
Complex barnes_product(Complex z) {
    constexpr int K = 64;
    Complex prod = 1.0;
    for (int k = 1; k <= K; ++k) {
        Complex f = std::pow(1.0 + z / double(k), k) * std::exp(z * z / (2.0 * k) - z);
        prod *= f;
        if (prod == 0.0) return 0.0;
    }
    // log of the remaining factors: sum_{m>=3} (-1)^{m+1} z^m/m * zeta_K(m-1)
    Complex tail = 0.0;
    Complex zm = z * z * z;
    for (int m = 3; m <= 40; ++m) {
        Complex t = zm / double(m) * zeta_tail(m - 1.0, K);
        tail += (m % 2 == 1) ? t : -t;
        if (std::abs(t) < 1e-18 * (1.0 + std::abs(tail))) break;
        zm *= z;
    }
    Complex pre = std::exp(0.5 * z * kLn2Pi - 0.5 * (z + z * z * (1.0 + kEulerGamma)));
    return pre * prod * std::exp(tail);
}

}  // namespace

bool on_cut(Complex z) { return z.imag() == 0.0 && z.real() <= 0.0; }

bool near_nonpositive_integer(Complex z, double tol) {
    if (std::abs(z.imag()) > tol || z.real() > tol) return false;
    return std::abs(z.real() - std::round(z.real())) <= tol;
}

Complex plog(Complex z) {
    if (on_cut(z)) throw Error(Errc::DomainCut, "log on (-inf, 0]");
    return std::log(z);
}

Complex ppow(Complex z, Complex w) { return std::exp(w * plog(z)); }

Complex log_gamma(Complex z) {
    if (on_cut(z)) throw Error(Errc::DomainCut, "log_gamma on (-inf, 0]");
    Complex shift = 0.0;
    Complex x = z;
    while (x.real() < kShiftTarget) {
        shift += std::log(x);
        x += 1.0;
    }
    return stirling_log_gamma(x) - shift;
}

Complex gamma_power(Complex z, Complex w) {
    if (w == 0.0) {
        if (on_cut(z)) throw Error(Errc::DomainCut, "gamma_power on (-inf, 0]");
        return 1.0;
    }
    return check_finite(std::exp(w * log_gamma(z)), "gamma_power");
}

Complex cgamma(Complex z) {
    if (is_nonpositive_integer(z)) throw Error(Errc::PoleAt, "gamma at nonpositive integer");
    if (z.real() >= 0.5) return check_finite(std::exp(log_gamma(z)), "gamma");
    return check_finite(kPi / (sin_pi(z) * std::exp(log_gamma(1.0 - z))), "gamma");
}

Complex rgamma(Complex z) {
    if (is_nonpositive_integer(z)) return 0.0;
    if (z.real() >= 0.5) return check_finite(std::exp(-log_gamma(z)), "rgamma");
    return check_finite(sin_pi(z) * std::exp(log_gamma(1.0 - z)) / kPi, "rgamma");
}

Complex log_gamma_any(Complex z) {
    if (!on_cut(z)) return log_gamma(z);
    return std::log(cgamma(z));
}

Complex digamma(Complex z) {
    if (is_nonpositive_integer(z)) throw Error(Errc::PoleAt, "digamma at nonpositive integer");
    Complex shift = 0.0;
    Complex x = z;
    while (x.real() < kShiftTarget) {
        shift += 1.0 / x;
        x += 1.0;
    }
    Complex inv2 = 1.0 / (x * x);
    Complex series = 0.0;
    Complex p = inv2;
    for (double c : kDigammaAsym) {
        series += c * p;
        p *= inv2;
    }
    return std::log(x) - 0.5 / x - series - shift;
}

Complex log_barnes_g(Complex z) {
    if (on_cut(z)) throw Error(Errc::DomainCut, "log_barnes_g on (-inf, 0]");
    // Theta(z) = Theta(z+N) - N Pi(z+N) + sum_j (j+1) log(z+j)
    Complex weighted = 0.0;
    Complex x = z;
    int n = 0;
    while (x.real() < kShiftTarget + 1.0) {
        weighted += double(n + 1) * std::log(x);
        x += 1.0;
        ++n;
    }
    Complex theta = barnes_asymptotic(x - 1.0);
    if (n == 0) return theta;
    return theta - double(n) * stirling_log_gamma(x) + weighted;
}

Complex log_barnes_g_any(Complex z) {
    if (!on_cut(z)) return log_barnes_g(z);
    Complex g = barnes_g(z);
    if (g == 0.0) throw Error(Errc::PoleAt, "log of Barnes G at a zero");
    return std::log(g);
}

Complex barnes_g(Complex z) {
    if (is_nonpositive_integer(z)) return 0.0;
    if (std::abs(z) <= 6.0) return barnes_product(z - 1.0);
    if (z.real() > 0.0 || std::abs(z.imag()) > 1.0)
        return check_finite(std::exp(log_barnes_g(z)), "barnes_g");
    // G(z) = G(z+m) prod_{k<m} 1/Gamma(z+k)
    int m = int(std::ceil(-z.real()));
    Complex r = barnes_product(z + double(m) - 1.0);
    for (int k = 0; k < m; ++k) r *= rgamma(z + double(k));
    return check_finite(r, "barnes_g");
}

SeriesSum hyp2f1_series(Complex a, Complex b, Complex c, Complex z) {
    constexpr int kMaxTerms = 200000;
    SeriesSum s;
    Complex t = 1.0;
    s.value = 1.0;
    s.abs_sum = 1.0;
    double az = std::abs(z);
    for (int k = 0; k < kMaxTerms; ++k) {
        t *= (a + double(k)) * (b + double(k)) / ((c + double(k)) * double(k + 1)) * z;
        s.value += t;
        double at = std::abs(t);
        s.abs_sum += at;
        s.terms = k + 1;
        if (at == 0.0) return s;
        double r = std::abs((a + double(k + 1)) * (b + double(k + 1)) / ((c + double(k + 1)) * double(k + 2))) * az;
        if (r < 1.0) {
            double tail = at * r / (1.0 - r);
            double scale = std::max(std::abs(s.value), 1e-14 * s.abs_sum);
            if (tail <= 1e-17 * scale) return s;
        }
    }
    throw Error(Errc::NoConvergence, "hyp2f1 series did not converge");
}

Complex hyp2f1(Complex a, Complex b, Complex c, Complex z) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (std::abs(z) >= 1.0) throw Error(Errc::DomainRadius, "hyp2f1 requires |z| < 1");
    if (near_nonpositive_integer(c)) throw Error(Errc::PoleAt, "hyp2f1 with c a nonpositive integer");
    if (z == 0.0) return 1.0;

    SeriesSum d = hyp2f1_series(a, b, c, z);
    Complex best = d.value;
    double best_err = eps * d.abs_sum;
    auto good_enough = [&] { return best_err <= 1e-14 * std::abs(best); };
    if (good_enough()) return best;

    Complex zp = z / (z - 1.0);
    if (std::abs(zp) < 0.9) {
        Complex pre_a = std::exp(-a * std::log(1.0 - z));
        SeriesSum pa = hyp2f1_series(a, c - b, c, zp);
        double err = eps * std::abs(pre_a) * pa.abs_sum * 4.0;
        if (err < best_err) {
            best = pre_a * pa.value;
            best_err = err;
        }
        Complex pre_b = std::exp(-b * std::log(1.0 - z));
        SeriesSum pb = hyp2f1_series(c - a, b, c, zp);
        err = eps * std::abs(pre_b) * pb.abs_sum * 4.0;
        if (err < best_err) {
            best = pre_b * pb.value;
            best_err = err;
        }
        if (good_enough()) return best;
    }

    Complex s = c - a - b;
    bool s_integer = std::abs(s.imag()) < 1e-9 && std::abs(s.real() - std::round(s.real())) < 1e-9;
    if (std::abs(1.0 - z) < 0.9 && !s_integer) {
        Complex gc = cgamma(c);
        Complex A = gc * cgamma(s) * rgamma(c - a) * rgamma(c - b);
        Complex B = gc * cgamma(-s) * rgamma(a) * rgamma(b) * std::exp(s * std::log(1.0 - z));
        double err = 0.0;
        Complex val = 0.0;
        if (A != 0.0) {
            SeriesSum f1 = hyp2f1_series(a, b, 1.0 - s, 1.0 - z);
            val += A * f1.value;
            err += std::abs(A) * (eps * f1.abs_sum + 1e-14 * std::abs(f1.value));
        }
        if (B != 0.0) {
            SeriesSum f2 = hyp2f1_series(c - a, c - b, 1.0 + s, 1.0 - z);
            val += B * f2.value;
            err += std::abs(B) * (eps * f2.abs_sum + 1e-14 * std::abs(f2.value));
        }
        if (err < best_err) {
            best = val;
            best_err = err;
        }
    }
    return best;
}

}  // namespace tlft
