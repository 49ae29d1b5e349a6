#include "tlft/coulomb.hpp"

#include "tlft/parallel.hpp"
#include "tlft/quadrature.hpp"
#include "tlft/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace tlft {

namespace {

constexpr double kPoleTol = 1e-8;
const double kLn4Pi = std::log(4.0 * kPi);
const double kLn2PiPlain = std::log(2.0 * kPi);

void check_alpha(Complex a) {
    if (!(a.real() > -kInvSqrt2))
        throw Error(Errc::DomainError, "insertion needs Re(alpha) > -1/sqrt2");
}

Complex lg_checked(Complex z) {
    if (near_nonpositive_integer(z, kPoleTol)) throw Error(Errc::PoleAt, "Gamma pole in coefficient");
    return log_gamma_any(z);
}

double log_factorial(int k) { return std::lgamma(double(k) + 1.0); }

struct Insertion {
    Vec3 at;
    Complex x;  // sqrt2 * alpha
};

std::vector<Insertion> insertions(const CorrelatorCase& c) {
    const Vec3 north(0, 0, 1), south(0, 0, -1), east(1, 0, 0);
    switch (c.kind) {
    case CorrelatorCase::Kind::Zero: return {};
    case CorrelatorCase::Kind::One: return {{north, kSqrt2 * c.alpha1}};
    case CorrelatorCase::Kind::Two: return {{south, kSqrt2 * c.alpha1}, {north, kSqrt2 * c.alpha2}};
    case CorrelatorCase::Kind::Three:
        return {{south, kSqrt2 * c.alpha1}, {east, 1.0}, {north, kSqrt2 * c.alpha3}};
    }
    return {};
}

// exp(-2x G(p, y)) = (d/2)^{2x} e^{x}; returns the log.
Complex one_body_log(const std::vector<Insertion>& ins, const Vec3& y) {
    Complex s = 0.0;
    for (const auto& in : ins) {
        double d = (in.at - y).norm();
        s += in.x * (2.0 * std::log(0.5 * d) + 1.0);
    }
    return s;
}

// product over pairs of e |y-y'|^2 / 4
double pair_factor(const Eigen::Matrix3Xd& y) {
    double p = 1.0;
    for (Eigen::Index i = 0; i < y.cols(); ++i)
        for (Eigen::Index j = i + 1; j < y.cols(); ++j)
            p *= std::exp(1.0) * 0.25 * (y.col(i) - y.col(j)).squaredNorm();
    return p;
}

OracleEstimate monte_carlo(const CorrelatorCase& c, int n, const SphereOracleSpec& spec) {
    const auto ins = insertions(c);
    constexpr std::uint64_t kBatch = 1 << 16;
    const std::uint64_t nb = (spec.samples + kBatch - 1) / kBatch;
    std::vector<Complex> sums(nb);
    std::vector<Complex> sq(nb);
    parallel_for(nb, [&](std::size_t b) {
        std::seed_seq seq{std::uint32_t(spec.seed), std::uint32_t(spec.seed >> 32), std::uint32_t(b),
                          std::uint32_t(std::uint64_t(b) >> 32)};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> g;
        std::uint64_t count = std::min<std::uint64_t>(kBatch, spec.samples - b * kBatch);
        Eigen::Matrix3Xd y(3, n);
        std::vector<Complex> vals(count);
        std::vector<Complex> vals2(count);
        for (std::uint64_t s = 0; s < count; ++s) {
            Complex lw = 0.0;
            for (int l = 0; l < n; ++l) {
                Vec3 v(g(rng), g(rng), g(rng));
                y.col(l) = v / v.norm();
                lw += one_body_log(ins, y.col(l));
            }
            Complex f = std::exp(lw) * pair_factor(y);
            vals[s] = f;
            vals2[s] = std::norm(f);
        }
        sums[b] = pairwise_sum(vals);
        sq[b] = pairwise_sum(vals2);
    });
    const double N = double(spec.samples);
    Complex mean = pairwise_sum(sums) / N;
    double m2 = pairwise_sum(sq).real() / N;
    double var = std::max(0.0, m2 - std::norm(mean)) * N / std::max(1.0, N - 1.0);
    double vol = std::pow(4.0 * kPi, n);
    OracleEstimate e;
    e.estimate = vol * mean;
    e.stderr_ = vol * std::sqrt(var / N);
    e.evaluations = spec.samples;
    return e;
}

struct GridNode {
    Vec3 y;
    Complex weighted;  // area weight times one-body factor
    bool coarse = false;
};

OracleEstimate grid(const CorrelatorCase& c, int n, const SphereOracleSpec& spec) {
    const auto ins = insertions(c);
    const int R = spec.radial + (spec.radial % 2);
    const int A = spec.angular + (spec.angular % 2);
    double p = 0.0;
    for (const auto& in : ins)
        if (std::abs(std::abs(in.at.z()) - 1.0) < 1e-15) p = std::min(p, in.x.real());
    const double S = std::clamp(14.0 / (4.0 * (p + 1.0)), 4.0, 20.0);
    const double h = 2.0 * S / R;
    const std::uint64_t M = std::uint64_t(R + 1) * A;
    double total = std::pow(double(M), n);
    if (total > double(spec.max_evaluations))
        throw Error(Errc::BudgetExceeded, "tensor grid exceeds evaluation budget");

    std::vector<GridNode> nodes;
    nodes.reserve(M);
    for (int i = 0; i <= R; ++i) {
        double s = -S + i * h;
        double e = std::exp(-2.0 * std::abs(s));
        // theta measured from e3 and from -e3, both kept accurate near their pole
        double small = kPi * e / (1.0 + e);
        double large = kPi / (1.0 + e);
        double th = s < 0 ? small : large;
        double thc = s < 0 ? large : small;
        double dth = 2.0 * kPi * e / ((1.0 + e) * (1.0 + e));
        double wi = (i == 0 || i == R) ? 0.5 : 1.0;
        double sin_t = std::sin(small);
        double dn = 2.0 * std::sin(0.5 * th);   // distance to e3
        double ds = 2.0 * std::sin(0.5 * thc);  // distance to -e3
        for (int j = 0; j < A; ++j) {
            double ph = 2.0 * kPi * j / A;
            Vec3 y(sin_t * std::cos(ph), sin_t * std::sin(ph), std::cos(th));
            Complex lw = 0.0;
            for (const auto& in : ins) {
                double d;
                if (in.at.z() > 0.5) d = dn;
                else if (in.at.z() < -0.5) d = ds;
                else d = (in.at - y).norm();
                lw += in.x * (2.0 * std::log(0.5 * d) + 1.0);
            }
            GridNode g;
            g.y = y;
            g.weighted = wi * h * dth * sin_t * (2.0 * kPi / A) * std::exp(lw);
            g.coarse = (i % 2 == 0) && (j % 2 == 0);
            nodes.push_back(g);
        }
    }

    // coarse grid uses every other node with doubled steps; endpoint halves still apply
    auto coarse_weight = [&](std::size_t k) { return nodes[k].coarse ? 4.0 * nodes[k].weighted : Complex(0.0); };

    std::vector<Complex> fine_rows(M), coarse_rows(M);
    if (n == 1) {
        for (std::size_t k = 0; k < M; ++k) {
            fine_rows[k] = nodes[k].weighted;
            coarse_rows[k] = coarse_weight(k);
        }
    } else {
        parallel_for(M, [&](std::size_t k0) {
            std::vector<std::size_t> idx(n, 0);
            idx[0] = k0;
            Eigen::Matrix3Xd y(3, n);
            std::vector<Complex> fv, cv;
            // enumerate the remaining n-1 indices
            std::uint64_t inner = 1;
            for (int l = 1; l < n; ++l) inner *= M;
            fv.reserve(inner);
            cv.reserve(inner);
            for (std::uint64_t t = 0; t < inner; ++t) {
                std::uint64_t r = t;
                Complex wf = nodes[k0].weighted;
                bool co = nodes[k0].coarse;
                y.col(0) = nodes[k0].y;
                for (int l = 1; l < n; ++l) {
                    std::size_t k = r % M;
                    r /= M;
                    wf *= nodes[k].weighted;
                    co = co && nodes[k].coarse;
                    y.col(l) = nodes[k].y;
                }
                Complex v = wf * pair_factor(y);
                fv.push_back(v);
                cv.push_back(co ? std::pow(4.0, n) * v : Complex(0.0));
            }
            fine_rows[k0] = pairwise_sum(fv);
            coarse_rows[k0] = pairwise_sum(cv);
        });
    }
    OracleEstimate e;
    e.estimate = pairwise_sum(fine_rows);
    Complex coarse = pairwise_sum(coarse_rows);
    e.stderr_ = std::abs(e.estimate - coarse);
    e.evaluations = std::uint64_t(total);
    return e;
}

}  // namespace

CorrelatorCase CorrelatorCase::zero_point() { return {}; }

CorrelatorCase CorrelatorCase::one_point(Complex alpha) {
    check_alpha(alpha);
    CorrelatorCase c;
    c.kind = Kind::One;
    c.alpha1 = alpha;
    return c;
}

CorrelatorCase CorrelatorCase::two_point(Complex a1, Complex a2) {
    check_alpha(a1);
    check_alpha(a2);
    CorrelatorCase c;
    c.kind = Kind::Two;
    c.alpha1 = a1;
    c.alpha2 = a2;
    return c;
}

CorrelatorCase CorrelatorCase::three_point(Complex a1, Complex a3) {
    check_alpha(a1);
    check_alpha(a3);
    CorrelatorCase c;
    c.kind = Kind::Three;
    c.alpha1 = a1;
    c.alpha2 = kInvSqrt2;
    c.alpha3 = a3;
    return c;
}

Complex CorrelatorCase::w() const { return -1.0 - kSqrt2 * (alpha1 + alpha2 + alpha3); }

Complex CorrelatorCase::prefactor() const {
    switch (kind) {
    case Kind::Two: return std::exp(2.0 * alpha1 * alpha2);
    case Kind::Three: {
        Complex s = kSqrt2 * (alpha1 + alpha3);
        return std::exp(s + 2.0 * alpha1 * alpha3 - s * std::log(2.0));
    }
    default: return 1.0;
    }
}

std::string CorrelatorCase::name() const {
    switch (kind) {
    case Kind::Zero: return "zero";
    case Kind::One: return "one";
    case Kind::Two: return "two";
    case Kind::Three: return "three";
    }
    return "?";
}

double green_sphere(const Vec3& x, const Vec3& y) {
    if (std::abs(x.norm() - 1.0) > 1e-12 || std::abs(y.norm() - 1.0) > 1e-12)
        throw Error(Errc::DomainError, "green_sphere needs unit vectors");
    double d = (x - y).norm();
    if (d < 1e-10) throw Error(Errc::CoincidentPoints, "green_sphere at coincident points");
    return -std::log(d) - 0.5 + std::log(2.0);
}

Complex log_coeff(const CorrelatorCase& c, int n) {
    if (n < 0) throw Error(Errc::DomainError, "negative coefficient index");
    if (n == 0) return 0.0;
    const double dn = n;
    const Complex w = c.w();
    switch (c.kind) {
    case CorrelatorCase::Kind::Zero: {
        double s = dn * kLn4Pi + 0.5 * dn * (dn - 1.0) - (dn - 1.0) * log_factorial(n);
        for (int k = 1; k < n; ++k) s += 2.0 * log_factorial(k);
        return s;
    }
    case CorrelatorCase::Kind::One: {
        Complex s = dn * kLn4Pi + 0.5 * dn * (dn - 3.0 - 2.0 * w) + log_factorial(n);
        for (int k = 1; k < n; ++k) s += log_factorial(k);
        for (int j = 0; j < n; ++j) {
            Complex t = double(j) - w;
            if (std::abs(t) < kPoleTol) throw Error(Errc::PoleAt, "one-point coefficient at resonant w");
            s -= double(j + 1) * std::log(t);
        }
        return s;
    }
    case CorrelatorCase::Kind::Two: {
        Complex s = dn * kLn4Pi + 0.5 * dn * (dn - 3.0 - 2.0 * w) + log_factorial(n);
        for (int k = 0; k < n; ++k) s += lg_checked(double(k) + c.beta1()) + lg_checked(double(k) + c.beta2());
        s -= dn * lg_checked(dn - w);
        return s;
    }
    case CorrelatorCase::Kind::Three: {
        const Complex x1 = kSqrt2 * c.alpha1, x3 = kSqrt2 * c.alpha3;
        Complex s = dn * kLn2PiPlain + 0.5 * dn * (dn - 3.0 - 2.0 * w) + log_factorial(n);
        for (int k = 1; k <= n + 1; ++k) s += lg_checked(double(k) + x1) + lg_checked(double(k) + x3);
        s -= dn * lg_checked(dn - w);
        Complex sum = 0.0;
        for (int j = 0; j <= n; ++j) sum += rgamma(double(j + 1) + x1) * rgamma(double(n - j + 1) + x3);
        if (sum == 0.0) return Complex(-std::numeric_limits<double>::infinity(), 0.0);
        return s + std::log(sum);
    }
    }
    return 0.0;
}

Complex coeff(const CorrelatorCase& c, int n) {
    Complex l = log_coeff(c, n);
    if (std::isinf(l.real()) && l.real() < 0) return 0.0;
    Complex v = std::exp(l);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw Error(Errc::Overflow, "coefficient overflow");
    return v;
}

Complex coulomb_integrand(const CorrelatorCase& c, const Eigen::Matrix3Xd& y) {
    const auto ins = insertions(c);
    Complex lw = 0.0;
    for (Eigen::Index l = 0; l < y.cols(); ++l) lw += one_body_log(ins, y.col(l));
    return std::exp(lw) * pair_factor(y);
}

OracleEstimate oracle_coeff(const CorrelatorCase& c, int n, const SphereOracleSpec& spec) {
    if (n < 0 || n > 4) throw Error(Errc::DomainError, "oracle supports 0 <= n <= 4");
    if (n == 0) return {1.0, 0.0, 0};
    OracleEstimate e;
    if (spec.method == SphereOracleSpec::Method::MonteCarlo) {
        if (spec.samples < 1000) throw Error(Errc::DomainError, "Monte Carlo needs at least 1000 samples");
        if (spec.samples > spec.max_evaluations) throw Error(Errc::BudgetExceeded, "sample count over budget");
        e = monte_carlo(c, n, spec);
    } else {
        if (spec.radial < 64 || spec.angular < 64) throw Error(Errc::DomainError, "grid needs at least 64x64 nodes");
        e = grid(c, n, spec);
    }
    if (spec.target_rel > 0.0 && e.stderr_ > spec.target_rel * std::abs(e.estimate))
        throw Error(Errc::BudgetExceeded, "requested tolerance not reached within budget");
    return e;
}

Complex disk_moment(Complex alpha, Complex beta) {
    if (!(alpha.real() > -2.0) || !((2.0 * beta - alpha).real() > 2.0))
        throw Error(Errc::DivergentIntegral, "disk moment diverges");
    return kPi * cgamma(beta - 0.5 * alpha - 1.0) * cgamma(0.5 * alpha + 1.0) * rgamma(beta);
}

GammaSum gamma_sum_identity(int n, Complex a, Complex b) {
    if (n < 1) throw Error(Errc::DomainError, "gamma_sum_identity needs n >= 1");
    if (near_nonpositive_integer(a, kPoleTol) || near_nonpositive_integer(b, kPoleTol))
        throw Error(Errc::PoleAt, "gamma_sum_identity parameters at a pole");
    GammaSum r;
    for (int j = 0; j <= n; ++j) r.lhs += rgamma(double(j) + a) * rgamma(double(n - j) + b);
    const Complex top = double(n) + a + b - 1.0;
    r.rhs = 0.5 * hyp2f1(1.0, top, a, 0.5) * rgamma(a) * rgamma(double(n) + b) -
            0.5 * (b - 1.0) * hyp2f1(1.0, top, double(n) + a + 1.0, 0.5) * rgamma(double(n) + a + 1.0) * rgamma(b);
    return r;
}

double fit_growth_constant(const CorrelatorCase& c, int nmax) {
    double C = -std::numeric_limits<double>::infinity();
    for (int n = 1; n <= nmax; ++n) {
        double la = log_coeff(c, n).real();
        if (std::isinf(la)) continue;
        C = std::max(C, (la - 0.5 * n * std::log(double(n))) / n);
    }
    return C;
}

}  // namespace tlft
