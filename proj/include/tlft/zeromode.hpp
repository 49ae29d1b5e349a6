#pragma once

#include "tlft/correlator.hpp"

#include <functional>
#include <string>
#include <vector>

namespace tlft {

struct RegularizationSchedule {
    std::vector<double> epsilons;
    // 0 disables extrapolation (the smallest-epsilon value is returned)
    int richardson_order = 2;

    static RegularizationSchedule standard();
    void validate() const;
};

enum class ContourKind { RealLine, Hankel };

// Gaussian-regularized zero-mode integral C_eps.
Complex regularized_correlator(const CorrelatorCase& cs, double mu, double eps, const QuadratureSpec& spec = {});

// Exponent rho with eps^rho C_eps convergent.
Complex renormalization_exponent(const CorrelatorCase& cs);

Complex closed_form_limit(const CorrelatorCase& cs, double mu);

struct LimitResult {
    Complex value;
    // spread between fits on nested subsets of the schedule
    double spread = 0.0;
    std::vector<Complex> samples;  // eps^rho C_eps per schedule entry
};

LimitResult renormalized_limit_ex(const CorrelatorCase& cs, double mu, const RegularizationSchedule& sched,
                                  ContourKind kind = ContourKind::RealLine);
Complex renormalized_limit(const CorrelatorCase& cs, double mu, const RegularizationSchedule& sched,
                           ContourKind kind = ContourKind::RealLine);

// Least-squares extrapolation to eps = 0 of values with corrections eps^m log^k eps.
Complex extrapolate_to_zero(const std::vector<double>& eps, const std::vector<Complex>& values, int order);

// 1 - exp(-2 pi i w), exact zero at integer w.
Complex hankel_factor(Complex w);

Complex hankel_correlator(const CorrelatorCase& cs, double mu, double eps, const QuadratureSpec& spec = {});
Complex vertical_segment(const CorrelatorCase& cs, double mu, const SeriesSpec& spec = {});
// -i int_0^{sqrt2 pi} e^{-sqrt2 i w t} C(it) dt evaluated by quadrature of the series.
Complex vertical_segment_quadrature(const CorrelatorCase& cs, double mu, double rel_tol = 1e-11);

Complex half_gaussian_moment(Complex w);

struct Bump {
    std::vector<double> center;
    double radius = 1.0;
    double scale = 1.0;
};

// Finite sum of signed bumps scale * exp(-1/(1-r^2)), r = |x - center| / radius.
struct TestFunction {
    std::vector<Bump> bumps;

    std::size_t dim() const;
    double operator()(const std::vector<double>& x) const;
    double operator()(double x) const { return (*this)(std::vector<double>{x}); }
    // bounding box of the support, per coordinate
    std::vector<std::pair<double, double>> support() const;
};

Complex heaviside_pairing(const TestFunction& phi, double eps);
// pi phi(0) + i int_0^inf (phi(x) - phi(-x)) / x dx
Complex heaviside_limit(const TestFunction& phi);
// int_0^inf |phi_hat(t)| dt
double heaviside_bound(const TestFunction& phi);

struct PairingSpec {
    double mu = 1.0;
    // grid step; 0 picks eps / 3
    double step = 0.0;
    ContourKind kind = ContourKind::RealLine;
};

struct PairingResult {
    Complex value;
    std::size_t nodes = 0;
    double step = 0.0;
};

// Two-point pairing with alpha_j = -1/(2 sqrt2) + i P_j.
PairingResult two_point_pairing(const TestFunction& phi, double eps, const PairingSpec& spec = {});
// pi int e^{1/4 + 2 P^2} phi(P, -P) dP
double delta_target(const TestFunction& phi);
CorrelatorCase pairing_case(double P1, double P2);

struct AcValue {
    Complex value;
    double magnitude = 0.0;
    double phase = 0.0;
    std::string branch = "+i";
};

AcValue ac_zero_point(double b, double mu);

}  // namespace tlft
