#pragma once

#include "tlft/error.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <string>

namespace tlft {

inline constexpr double kSqrt2 = 1.41421356237309504880168872420969808;
inline constexpr double kInvSqrt2 = 0.70710678118654752440084436210484904;

// Insertion data for the four supported configurations on the sphere.
// Two-point: alpha1 at -e3, alpha2 at e3.
// Three-point: alpha1 at -e3, alpha2 = 1/sqrt2 at e1, alpha3 at e3.
// One-point: alpha1 at e3.
struct CorrelatorCase {
    enum class Kind { Zero, One, Two, Three };

    Kind kind = Kind::Zero;
    Complex alpha1 = 0.0;
    Complex alpha2 = 0.0;
    Complex alpha3 = 0.0;

    static CorrelatorCase zero_point();
    static CorrelatorCase one_point(Complex alpha);
    static CorrelatorCase two_point(Complex alpha1, Complex alpha2);
    static CorrelatorCase three_point(Complex alpha1, Complex alpha3);

    // w = -1 - sqrt2 * (sum of alphas)
    Complex w() const;
    // beta_j = 1 + sqrt2 alpha_j (two-point)
    Complex beta1() const { return 1.0 + kSqrt2 * alpha1; }
    Complex beta2() const { return 1.0 + kSqrt2 * alpha2; }
    // Constant in front of the Coulomb-gas series (insertion self-interaction).
    Complex prefactor() const;
    std::string name() const;
};

using Vec3 = Eigen::Vector3d;

double green_sphere(const Vec3& x, const Vec3& y);

// Closed-form coefficient a_n; a_0 = 1.
Complex coeff(const CorrelatorCase& c, int n);
// A logarithm of a_n (branch unspecified); throws PoleAt like coeff. Returns
// -inf real part when a_n vanishes.
Complex log_coeff(const CorrelatorCase& c, int n);

struct SphereOracleSpec {
    enum class Method { MonteCarlo, StereographicGrid };
    Method method = Method::MonteCarlo;
    std::uint64_t samples = 1000000;
    std::uint64_t seed = 20240607;
    int radial = 64;
    int angular = 64;
    // optional: fail with BudgetExceeded if stderr/|estimate| stays above this
    double target_rel = 0.0;
    std::uint64_t max_evaluations = 200000000;
};

struct OracleEstimate {
    Complex estimate;
    double stderr_ = 0.0;
    std::uint64_t evaluations = 0;
};

OracleEstimate oracle_coeff(const CorrelatorCase& c, int n, const SphereOracleSpec& spec);

// Sphere-form integrand of a_n at points y (3 x n), the definition used by the oracle.
Complex coulomb_integrand(const CorrelatorCase& c, const Eigen::Matrix3Xd& y);

// int_C |z|^alpha (1+|z|^2)^{-beta} d^2z
Complex disk_moment(Complex alpha, Complex beta);

struct GammaSum {
    Complex lhs;
    Complex rhs;
};
GammaSum gamma_sum_identity(int n, Complex a, Complex b);

// Smallest C with |a_n| <= n^{n/2} e^{C n} for 1 <= n <= nmax.
double fit_growth_constant(const CorrelatorCase& c, int nmax);

}  // namespace tlft
