// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include "cli.hpp"
#include "tlft/coulomb.hpp"
#include "tlft/specfun.hpp"
#include "tlft/zeromode.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

using namespace tlft;
using C = Complex;

namespace {

double rel(C a, C b) { return std::abs(a - b) / std::abs(b); }

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "[failed: " << what << "] ";
        }
    }
};

int failures = 0;

void criterion(int id, const char* title, double limit_s, const std::function<void(Outcome&)>& body) {
    Outcome o;
    o.detail.precision(3);
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail << "[error: " << e.what() << "] ";
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (dt > limit_s) {
        o.pass = false;
        o.detail << "[over time limit " << limit_s << " s] ";
    }
    if (!o.pass) ++failures;
    std::printf("criterion %2d %-4s %-46s %7.2f s  %s\n", id, o.pass ? "PASS" : "FAIL", title, dt, o.detail.str().c_str());
    std::fflush(stdout);
}

C integrate_inf(const std::function<C(double)>& f) {
    boost::math::quadrature::exp_sinh<double> es;
    double re = es.integrate([&](double x) { return f(x).real(); }, 0.0, INFINITY);
    double im = es.integrate([&](double x) { return f(x).imag(); }, 0.0, INFINITY);
    return {re, im};
}

}  // namespace

int main() {
    const cli::Panel panel = cli::load_panel(cli::default_panel_path());
    const auto sched = RegularizationSchedule::standard();
    const double kE = std::exp(1.0);

    criterion(1, "zero-point renormalized limit", 10.0, [&](Outcome& o) {
        double worst = 0.0;
        for (double mu : {0.5, 1.0, 2.0}) {
            C v = renormalized_limit(CorrelatorCase::zero_point(), mu, sched);
            worst = std::max(worst, rel(v, kE / (4.0 * kPi * kSqrt2 * mu)));
        }
        o.detail << "max rel " << worst << " (tol 1e-4) ";
        o.require(worst < 1e-4, "rel < 1e-4");
    });

    criterion(2, "Hankel zero-point vanishes", 5.0, [&](Outcome& o) {
        double worst = 0.0;
        for (double mu : panel.mu)
            for (double e : sched.epsilons) worst = std::max(worst, std::abs(hankel_correlator(CorrelatorCase::zero_point(), mu, e)));
        o.detail << "max abs " << worst << " (tol 1e-9) ";
        o.require(worst < 1e-9, "abs < 1e-9");
    });

    criterion(3, "coefficient oracles", 60.0, [&](Outcome& o) {
        SphereOracleSpec mc;
        mc.samples = 1000000;
        SphereOracleSpec grid;
        grid.method = SphereOracleSpec::Method::StereographicGrid;
        const auto& tp = panel.two_point.front();
        const auto& th = panel.three_point.front();
        struct Item {
            const char* label;
            CorrelatorCase cs;
            int n;
            SphereOracleSpec spec;
        };
        // three-point: Re(alpha) < -1/(2 sqrt2) gives the Monte Carlo estimator infinite variance
        std::vector<Item> items{{"zero,1", CorrelatorCase::zero_point(), 1, mc},
                                {"zero,2", CorrelatorCase::zero_point(), 2, mc},
                                {"one,1", CorrelatorCase::one_point(panel.one_point.front()), 1, mc},
                                {"two,1", CorrelatorCase::two_point(tp.first, tp.second), 1, mc},
                                {"three,1", CorrelatorCase::three_point(th.first, th.second), 1, grid}};
        std::uint64_t seed = 1001;
        for (auto& it : items) {
            it.spec.seed = seed++;
            C a = coeff(it.cs, it.n);
            OracleEstimate e = oracle_coeff(it.cs, it.n, it.spec);
            double dev = std::abs(e.estimate - a);
            double tol = std::max(3.0 * e.stderr_, 0.01 * std::abs(a));
            o.detail << it.label << ": dev/tol " << dev / tol << "  ";
            o.require(dev < tol, it.label);
        }
    });

    criterion(4, "series/contour identity", 30.0, [&](Outcome& o) {
        double worst = 0.0;
        int count = 0;
        for (const auto& cs : cli::panel_cases(panel))
            for (auto [mu, c] : panel.points) {
                worst = std::max(worst, rel(contour_correlator(cs, mu, c), series_correlator(cs, mu, c)));
                ++count;
            }
        o.detail << count << " points, max rel " << worst << " (tol 1e-7) ";
        o.require(worst < 1e-7, "rel < 1e-7");
    });

    criterion(5, "one-point renormalized limit", 20.0, [&](Outcome& o) {
        for (C a : {C(-0.3, 0.0), C(-0.1, 0.2)}) {
            auto cs = CorrelatorCase::one_point(a);
            double d = rel(renormalized_limit(cs, 1.0, sched), closed_form_limit(cs, 1.0));
            o.detail << "alpha " << a << ": " << d << "  ";
            o.require(d < 1e-3, "rel < 1e-3");
        }
    });

    criterion(6, "two-point limit and degeneracy", 20.0, [&](Outcome& o) {
        for (auto [a1, a2] : panel.two_point) {
            auto cs = CorrelatorCase::two_point(a1, a2);
            double d = rel(renormalized_limit(cs, 1.0, sched), closed_form_limit(cs, 1.0));
            o.detail << "rel " << d << "  ";
            o.require(d < 1e-3, "rel < 1e-3");
        }
        auto dg = CorrelatorCase::two_point(0.0, panel.two_point_degenerate.second);
        C cf = closed_form_limit(dg, 1.0);
        double lim = std::abs(renormalized_limit(dg, 1.0, sched));
        o.detail << "degenerate closed " << std::abs(cf) << ", extrapolated " << lim;
        o.require(cf == C(0.0), "closed form exactly 0");
        o.require(lim < 1e-3, "extrapolated |limit| < 1e-3");
    });

    criterion(7, "three-point limit and Hankel ratio", 30.0, [&](Outcome& o) {
        for (auto [a1, a3] : panel.three_point) {
            auto cs = CorrelatorCase::three_point(a1, a3);
            C cf = closed_form_limit(cs, 1.0);
            C real = renormalized_limit(cs, 1.0, sched);
            C hank = renormalized_limit(cs, 1.0, sched, ContourKind::Hankel);
            double d = rel(real, cf), h = rel(hank / real, hankel_factor(cs.w()));
            o.detail << "|limit| " << std::abs(cf) << " rel " << d << " ratio " << h << "  ";
            o.require(std::abs(cf) > 0.0, "nonzero");
            o.require(d < 1e-3, "limit rel < 1e-3");
            o.require(h < 1e-3, "Hankel ratio rel < 1e-3");
        }
    });

    criterion(8, "distributional delta pairing", 300.0, [&](Outcome& o) {
        const auto& pp = panel.pairing;
        TestFunction on{{Bump{pp.on_center, pp.radius, 1.0}}};
        TestFunction off{{Bump{pp.off_center, pp.radius, 1.0}}};
        PairingSpec spec;
        spec.mu = pp.mu;
        double target = delta_target(on);
        C a = two_point_pairing(on, pp.eps, spec).value;
        C b = two_point_pairing(off, pp.eps, spec).value;
        o.detail << "on " << a << " vs " << target << " (rel " << rel(a, target) << "), off |" << std::abs(b) << "|  ";
        o.require(rel(a, target) < 3e-2, "on-diagonal within 3%");
        o.require(std::abs(b) < 1e-3, "off-diagonal < 1e-3");
        spec.kind = ContourKind::Hankel;
        C ha = two_point_pairing(on, pp.eps, spec).value;
        C hb = two_point_pairing(off, pp.eps, spec).value;
        o.detail << "Hankel on |" << std::abs(ha) << "| off |" << std::abs(hb) << "|  ";
        o.require(std::abs(ha) < 1e-3 && std::abs(hb) < 1e-3, "Hankel < 1e-3");
    });

    criterion(9, "special-function properties", 10.0, [&](Outcome& o) {
        std::mt19937_64 rng(9);
        std::uniform_real_distribution<double> re(0.05, 30.0), im(-30.0, 30.0), u(-2.0, 2.0), v(0.0, 1.0);
        double rec = 0.0, brec = 0.0;
        for (int i = 0; i < 1000; ++i) {
            C z(re(rng), im(rng));
            rec = std::max(rec, std::abs(log_gamma(z + 1.0) - log_gamma(z) - std::log(z)));
            brec = std::max(brec, std::abs(log_barnes_g(z + 1.0) - log_barnes_g(z) - log_gamma(z)));
        }
        o.require(rec < 1e-11, "log_gamma recurrence");
        o.require(brec < 1e-10, "Barnes recurrence");
        double sf = 1.0, fact = 1.0, super = 0.0;
        for (int n = 2; n <= 12; ++n) {
            fact *= (n - 1);
            sf *= fact;
            super = std::max(super, rel(barnes_g(double(n + 1)), sf));
        }
        o.require(super < 1e-11, "superfactorial");
        double pfaff = 0.0;
        C z(0.3, 0.2);
        for (int i = 0; i < 200; ++i) {
            C a(u(rng), u(rng)), b(u(rng), u(rng)), c(u(rng) + 3.0, u(rng));
            pfaff = std::max(pfaff, rel(hyp2f1(a, b, c, z), std::pow(1.0 - z, -a) * hyp2f1(a, c - b, c, z / (z - 1.0))));
        }
        o.require(pfaff < 1e-9, "Pfaff");
        boost::math::quadrature::tanh_sinh<double> ts;
        double euler = 0.0;
        for (int i = 0; i < 20; ++i) {
            C b(0.3 + 1.5 * v(rng), v(rng) - 0.5);
            C c = b + C(0.4 + 1.5 * v(rng), v(rng) - 0.5);
            C a(2.0 * v(rng) - 1.0, 2.0 * v(rng) - 1.0);
            C x(0.9 * v(rng) - 0.45, 0.9 * v(rng) - 0.45);
            auto part = [&](bool imag) {
                return ts.integrate(
                    [&](double t, double tc) {
                        double one_minus = t > 0.5 ? tc : 1.0 - t;
                        C w = std::exp((b - 1.0) * std::log(t) + (c - b - 1.0) * std::log(one_minus) - a * std::log(1.0 - x * t));
                        return imag ? w.imag() : w.real();
                    },
                    0.0, 1.0);
            };
            C integral(part(false), part(true));
            euler = std::max(euler, rel(hyp2f1(a, b, c, x), cgamma(c) / (cgamma(b) * cgamma(c - b)) * integral));
        }
        o.require(euler < 1e-8, "Euler integral");
        o.detail << "recurrence " << rec << ", Barnes " << brec << ", superfactorial " << super << ", Pfaff " << pfaff
                 << ", Euler " << euler;
    });

    criterion(10, "identity suite", 30.0, [&](Outcome& o) {
        GammaSum g1 = gamma_sum_identity(2, 1.0, 1.0), g2 = gamma_sum_identity(1, 1.0, 1.0),
                 g3 = gamma_sum_identity(3, C(1.3, 0.4), 0.7);
        o.require(std::abs(g1.lhs - 2.0) < 1e-14 && std::abs(g1.rhs - 2.0) < 1e-10, "gamma sum n=2");
        o.require(std::abs(g2.lhs - 2.0) < 1e-14 && std::abs(g2.rhs - 2.0) < 1e-10, "gamma sum n=1");
        o.require(std::abs(g3.lhs - g3.rhs) < 1e-10, "gamma sum n=3");
        double disk = 0.0;
        for (auto [al, be] : {std::pair{0.0, 2.0}, {2.0, 3.0}, {0.5, 1.7}, {-1.2, 1.5}}) {
            // radial oracle with r = t / (1 - t)
            auto f = [&](double t) {
                double r = t / (1.0 - t);
                return 2.0 * kPi * std::pow(r, al + 1.0) * std::pow(1.0 + r * r, -be) / ((1.0 - t) * (1.0 - t));
            };
            double q = boost::math::quadrature::tanh_sinh<double>().integrate(f, 0.0, 1.0);
            disk = std::max(disk, rel(disk_moment(al, be), q));
        }
        o.require(disk < 1e-9, "disk_moment");
        double hg = 0.0;
        for (double r = -0.85; r < 2.0; r += 0.35)
            for (double i : {-0.6, 0.0, 0.45}) {
                C w(r, i);
                C direct = integrate_inf([&](double x) { return (std::pow(C(0.0, x), w) + std::pow(C(0.0, -x), w)) * std::exp(-0.5 * x * x); });
                hg = std::max(hg, std::abs(half_gaussian_moment(w) - direct) / std::max(1.0, std::abs(direct)));
            }
        o.require(hg < 1e-9, "half_gaussian_moment");
        double hv = 0.0;
        bool bounded = true;
        for (const TestFunction& phi : {TestFunction{{Bump{{0.0}, 0.5, 1.0}}},
                                        TestFunction{{Bump{{0.3}, 0.25, 1.0}, Bump{{-0.3}, 0.25, -1.0}}}}) {
            C lim = heaviside_limit(phi);
            double bound = heaviside_bound(phi);
            double prev = INFINITY;
            for (double e : {0.05, 0.02, 0.01, 0.005}) {
                C v = heaviside_pairing(phi, e);
                bounded = bounded && std::abs(v) <= bound;
                double d = std::abs(v - lim) / std::abs(lim);
                bounded = bounded && d < prev;
                prev = d;
            }
            hv = std::max(hv, prev);
        }
        o.require(bounded, "Heaviside bound and monotone approach");
        o.require(hv < 5e-3, "Heaviside limit at eps = 0.005");
        o.detail << "gamma sum " << std::abs(g3.lhs - g3.rhs) << ", disk " << disk << ", half-Gaussian " << hg
                 << ", Heaviside " << hv;
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
