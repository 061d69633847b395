#ifndef VCH_PHYSICS_HPP
#define VCH_PHYSICS_HPP

#include "vch/spectral.hpp"

#include <array>

namespace vch {

/// W(u) = gamma (u - u_plus)^2 (u - u_minus)^2.
struct QuarticWell {
    double gamma = 1.0;
    double u_minus = -1.0;
    double u_plus = 1.0;
};

enum class PotentialKind {
    quartic,
    zero,  ///< W = 0; test mode for the linear closed-form system
};

struct Potential {
    PotentialKind kind = PotentialKind::quartic;
    QuarticWell well;
};

enum class MobilityKind {
    degenerate,  ///< M(u) = max(u, 0)
    cutoff,      ///< M_theta(u) = max(u, theta)
    constant,    ///< M = theta everywhere; test mode
};

struct MobilitySpec {
    MobilityKind kind = MobilityKind::cutoff;
    double theta = 0.1;
};

struct EntropySpec {
    double theta = 0.1;
};

struct PhysicsSpec {
    Potential potential;
    MobilitySpec mobility;
};

void validate(const QuarticWell& w);
void validate(const MobilitySpec& m);

double w_eval(const QuarticWell& w, double z);
double w_prime(const QuarticWell& w, double z);
double w_double_prime(const QuarticWell& w, double z);

double w_eval(const Potential& p, double z);
double w_prime(const Potential& p, double z);
double w_double_prime(const Potential& p, double z);

double mobility_eval(const MobilitySpec& m, double z);

/// Phi(z) = z ln z - z + 1, defined for z > 0.
double entropy_phi(double z);
/// Phi_theta: Phi at and above theta, the C^2 quadratic continuation below.
double entropy_eval(const EntropySpec& e, double z);
double entropy_prime(const EntropySpec& e, double z);
/// Quadrature of Phi_theta(u) over the box.
double entropy_total(const EntropySpec& e, const GridField& u);

/// Constants of the growth sandwich for the quartic, exponent r = 3:
///   C1 |z|^4 - C2 <= W(z)   <= C3 |z|^4 + C4
///                   |W'(z)| <= C5 |z|^3 + C6
///   C7 |z|^2 - C8 <= W''(z) <= C9 |z|^2 + C10
/// c[j] holds C_j; c[0] is unused.
struct GrowthConstants {
    int r = 3;
    std::array<double, 11> c{};
};

GrowthConstants growth_constants(const QuarticWell& w);

}  // namespace vch

#endif  // VCH_PHYSICS_HPP
