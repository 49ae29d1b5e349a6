#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "tlft/correlator.hpp"
#include "tlft/specfun.hpp"
#include "tlft/zeromode.hpp"

#include <cmath>

using namespace tlft;
using C = Complex;

namespace {

const double kPiT = 3.14159265358979323846;
const double kE = 2.71828182845904523536;

double rel(C a, C b) { return std::abs(a - b) / std::abs(b); }

std::vector<CorrelatorCase> panel() {
    return {CorrelatorCase::zero_point(),
            CorrelatorCase::one_point(-0.3),
            CorrelatorCase::one_point(C(-0.1, 0.2)),
            CorrelatorCase::two_point(-0.25, C(-0.15, 0.1)),
            pairing_case(0.3, -0.1),
            CorrelatorCase::three_point(C(-0.8, 0.1) / kSqrt2, C(-0.8, 0.1) / kSqrt2),
            CorrelatorCase::three_point(-0.7 / kSqrt2, C(-0.9, 0.2) / kSqrt2)};
}

Errc code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return Errc::UsageError;
}

}  // namespace

TEST_CASE("f_eval examples") {
    auto z = CorrelatorCase::zero_point();
    CHECK(rel(f_eval(z, 1.0), 4.0 * kPiT) < 1e-12);
    CHECK(rel(f_eval(z, -1.0), kE / (4.0 * kPiT)) < 1e-13);
    // continuity through the rewritten form near -1
    CHECK(rel(f_eval(z, C(-1.0 + 0.2499, 0.0)), f_eval(z, C(-1.0 + 0.2501, 0.0))) < 1e-3);
    CHECK(rel(f_eval(z, C(-1.0 + 1e-7, 1e-7)), kE / (4.0 * kPiT)) < 1e-5);
    CHECK(rel(f_eval(CorrelatorCase::two_point(-0.25, C(-0.15, 0.1)), 0.0), 1.0) < 1e-13);
    CHECK(rel(f_eval(CorrelatorCase::three_point(C(-0.8, 0.1) / kSqrt2, C(-0.8, 0.1) / kSqrt2), 0.0), 1.0) < 1e-13);
}

TEST_CASE("f_eval interpolates the coefficients") {
    for (const auto& cs : panel())
        for (int n = 0; n <= 8; ++n) {
            INFO(cs.name(), " n=", n);
            CHECK(rel(f_eval(cs, double(n)), coeff(cs, n)) < 1e-9);
        }
}

TEST_CASE("f_eval domain errors") {
    CHECK(code_of([] { f_eval(CorrelatorCase::zero_point(), -2.5); }) == Errc::DomainCut);
    CHECK_THROWS_AS(f_eval(CorrelatorCase::one_point(-0.3), CorrelatorCase::one_point(-0.3).w() - 0.5), Error);
}

TEST_CASE("series_correlator small-mu expansion") {
    auto z = CorrelatorCase::zero_point();
    for (double mu : {1e-3, 1e-4}) {
        C v = series_correlator(z, mu, 0.0);
        CHECK(std::abs(v - (1.0 - 4.0 * kPiT * mu)) < 200.0 * mu * mu);
    }
}

TEST_CASE("series_correlator is periodic in the imaginary direction") {
    auto z = CorrelatorCase::zero_point();
    // the shifted phase n * 2 pi carries n ulps of rounding, amplified by the peak term
    for (double c : {-1.0, -0.5, 0.0}) {
        C a = series_correlator(z, 1.0, c);
        C b = series_correlator(z, 1.0, C(c, kSqrt2 * kPiT));
        CHECK(rel(b, a) < 1e-10);
    }
}

TEST_CASE("series_correlator reduction two-point to one-point") {
    CHECK(rel(series_correlator(CorrelatorCase::two_point(0.0, 0.0), 1.0, 0.0), series_correlator(CorrelatorCase::one_point(0.0), 1.0, 0.0)) < 1e-13);
    CHECK(rel(series_correlator(CorrelatorCase::two_point(0.0, -0.3), 0.7, 0.2), series_correlator(CorrelatorCase::one_point(-0.3), 0.7, 0.2)) < 1e-12);
}

TEST_CASE("series refuses when mu e^{sqrt2 c} is too large") {
    // the peak term grows like exp(e^{2 ln x}) in x = mu e^{sqrt2 c}; at x = 2 it exceeds every tier
    CHECK(code_of([] { series_correlator(CorrelatorCase::zero_point(), 2.0, 0.0); }) == Errc::TruncationFailure);
    CHECK_NOTHROW(series_correlator(CorrelatorCase::zero_point(), 1.5, 0.0));
}

TEST_CASE("series spec validation and truncation failure") {
    auto z = CorrelatorCase::zero_point();
    CHECK_THROWS_AS(series_correlator(z, 1.0, 0.0, SeriesSpec{4, 1e-14}), Error);
    CHECK_THROWS_AS(series_correlator(z, 1.0, 0.0, SeriesSpec{100, 0.0}), Error);
    CHECK(code_of([&] { series_correlator(z, 1.0, 4.0, SeriesSpec{10, 1e-14}); }) == Errc::TruncationFailure);
}

TEST_CASE("series result carries a certified tail") {
    auto s = series_correlator_ex(CorrelatorCase::one_point(-0.3), 2.0, -1.0);
    CHECK(s.tail_bound < 1e-14 * std::max(1.0, s.max_term));
    CHECK(s.terms > 8);
}

TEST_CASE("contour equals series: spec examples") {
    auto z = CorrelatorCase::zero_point();
    CHECK(rel(contour_correlator(z, 1.0, 0.0), series_correlator(z, 1.0, 0.0)) < 1e-8);
    auto o = CorrelatorCase::one_point(-0.3);
    CHECK(rel(contour_correlator(o, 1.0, 0.2), series_correlator(o, 1.0, 0.2)) < 1e-8);
    auto t = CorrelatorCase::three_point(C(-0.8, 0.1) / kSqrt2, C(-0.8, 0.1) / kSqrt2);
    CHECK(rel(contour_correlator(t, 1.0, 0.0), series_correlator(t, 1.0, 0.0)) < 1e-8);
}

TEST_CASE("contour equals series on the panel") {
    for (const auto& cs : panel())
        for (auto [mu, c] : {std::pair{0.5, -1.0}, {0.5, 0.0}, {1.0, -1.0}, {1.0, 0.0}, {2.0, -1.0}}) {
            INFO(cs.name(), " mu=", mu, " c=", c);
            CHECK(rel(contour_correlator(cs, mu, c), series_correlator(cs, mu, c)) < 1e-7);
        }
}

TEST_CASE("contour shift independence for the zero-point case") {
    auto z = CorrelatorCase::zero_point();
    for (double mu : {0.5, 2.0}) {
        C a = contour_correlator_ex(z, mu, 0.0, {}, -0.5).value;
        C b = contour_correlator_ex(z, mu, 0.0, {}, -0.9).value;
        CHECK(std::abs(a - b) < 1e-8 * std::abs(a));
    }
}

TEST_CASE("residue bookkeeping for imaginary w") {
    auto cs = pairing_case(0.3, -0.1);
    CHECK(is_imaginary_w(cs));
    std::vector<C> v;
    for (double q : {0.25, 0.5, 0.75}) v.push_back(contour_correlator_ex(cs, 1.0, 0.0, {}, q).value);
    CHECK(rel(v[0], v[1]) < 1e-8);
    CHECK(rel(v[2], v[1]) < 1e-8);
}

TEST_CASE("contour hypotheses") {
    CHECK(code_of([] { contour_correlator(CorrelatorCase::zero_point(), 1.0, 5.5); }) == Errc::HypothesisViolation);
    CHECK(code_of([] { contour_correlator(CorrelatorCase::two_point(0.3, 0.2), 1.0, 0.0); }) == Errc::HypothesisViolation);
    CHECK(code_of([] { contour_correlator(CorrelatorCase::one_point(0.2), 1.0, 0.0); }) == Errc::HypothesisViolation);
    CHECK(code_of([] { contour_correlator_ex(CorrelatorCase::zero_point(), 1.0, 0.0, {}, -1.2); }) == Errc::HypothesisViolation);
    CHECK_THROWS_AS(contour_correlator(CorrelatorCase::zero_point(), 1.0, 0.0, QuadratureSpec{60.0, 0.5, 1000}), Error);
    CHECK_NOTHROW(check_contour_hypotheses(CorrelatorCase::three_point(C(-0.8, 0.1) / kSqrt2, C(-0.8, 0.1) / kSqrt2)));
}

TEST_CASE("integrand bound") {
    for (const auto& cs : panel()) {
        double x0 = contour_line(cs);
        IntegrandBound b = fit_integrand_bound(cs, x0);
        // monotone beyond |y| = 10
        for (double y = 10.0; y < 100.0; y += 0.5) CHECK(b(y + 0.5) < b(y));
        // dominates the actual integrand on an offset grid
        for (double y = -79.9; y < 80.0; y += 0.37) {
            C z(x0, y);
            double actual = std::abs(mellin_integrand(cs, z, 0.0));
            CHECK(actual <= b(std::abs(y)));
        }
        CHECK(integrand_bound(cs, x0, 20.0) == b(20.0));
    }
}

TEST_CASE("default truncation is certified by the bound") {
    for (const auto& cs : panel()) {
        QuadratureSpec spec;
        auto r = contour_correlator_ex(cs, 1.0, 0.0, spec);
        CHECK(r.tail_bound < spec.rel_tol / 10.0 * std::abs(r.value));
    }
}

TEST_CASE("mellin_integrand and its offset form agree") {
    auto cs = CorrelatorCase::one_point(C(-0.1, 0.2));
    C d(0.3, 2.0);
    CHECK(rel(mellin_integrand_offset(cs, d, 0.4), mellin_integrand(cs, cs.w() + d, 0.4)) < 1e-12);
}

TEST_CASE("segment_series matches a direct sum") {
    // at mu = 0.5 the terms already peak near 1e7, which the double oracle cannot resolve
    auto cs = CorrelatorCase::one_point(-0.3);
    const double mu = 0.2;
    C w = cs.w(), direct = 0.0;
    for (int n = 0; n < 250; ++n) {
        C t = std::exp(log_coeff(cs, n) - std::lgamma(n + 1.0) + n * std::log(mu)) / (kSqrt2 * (double(n) - w));
        direct += (n % 2 ? -t : t);
    }
    direct *= cs.prefactor();
    CHECK(rel(segment_series(cs, mu).value, direct) < 1e-10);
}
