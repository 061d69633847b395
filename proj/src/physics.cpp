#include "vch/physics.hpp"

#include "vch/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vch {

void validate(const QuarticWell& w) {
    if (!(w.gamma > 0.0)) throw PreconditionError("quartic well needs gamma > 0");
    if (!(w.u_minus < w.u_plus)) throw PreconditionError("quartic well needs u_minus < u_plus");
}

void validate(const MobilitySpec& m) {
    if (m.kind == MobilityKind::cutoff && !(m.theta > 0.0 && m.theta < 1.0)) {
        throw PreconditionError("cutoff mobility requires 0 < theta < 1, got " + std::to_string(m.theta));
    }
    if (m.kind == MobilityKind::constant && !(m.theta > 0.0)) {
        throw PreconditionError("constant mobility requires theta > 0");
    }
}

double w_eval(const QuarticWell& w, double z) {
    const double a = z - w.u_plus;
    const double b = z - w.u_minus;
    return w.gamma * a * a * b * b;
}

double w_prime(const QuarticWell& w, double z) {
    const double a = z - w.u_plus;
    const double b = z - w.u_minus;
    return 2.0 * w.gamma * a * b * (a + b);
}

double w_double_prime(const QuarticWell& w, double z) {
    const double a = z - w.u_plus;
    const double b = z - w.u_minus;
    return 2.0 * w.gamma * (a * a + 4.0 * a * b + b * b);
}

double w_eval(const Potential& p, double z) {
    return p.kind == PotentialKind::quartic ? w_eval(p.well, z) : 0.0;
}

double w_prime(const Potential& p, double z) {
    return p.kind == PotentialKind::quartic ? w_prime(p.well, z) : 0.0;
}

double w_double_prime(const Potential& p, double z) {
    return p.kind == PotentialKind::quartic ? w_double_prime(p.well, z) : 0.0;
}

double mobility_eval(const MobilitySpec& m, double z) {
    switch (m.kind) {
        case MobilityKind::degenerate:
            return z > 0.0 ? z : 0.0;
        case MobilityKind::cutoff:
            return z > m.theta ? z : m.theta;
        case MobilityKind::constant:
            return m.theta;
    }
    return 0.0;
}

double entropy_phi(double z) {
    if (!(z > 0.0)) throw DomainError("entropy Phi is defined only for u > 0");
    return z * std::log(z) - z + 1.0;
}

double entropy_eval(const EntropySpec& e, double z) {
    const double t = e.theta;
    if (z >= t) return z * std::log(z) - z + 1.0;
    return z * z / (2.0 * t) + (std::log(t) - 1.0) * z + 1.0 - 0.5 * t;
}

double entropy_prime(const EntropySpec& e, double z) {
    const double t = e.theta;
    if (z >= t) return std::log(z);
    return z / t + std::log(t) - 1.0;
}

double entropy_total(const EntropySpec& e, const GridField& u) {
    double s = 0.0;
    for (double v : u.values()) s += entropy_eval(e, v);
    return s * u.basis()->cell_volume();
}

namespace {

// max over a >= 0 of a^j - delta a^4, for j < 4
double young_remainder(int j, double delta) {
    const double q = j / 4.0;
    return (1.0 - q) * std::pow(j / (4.0 * delta), double(j) / (4 - j));
}

}  // namespace

GrowthConstants growth_constants(const QuarticWell& w) {
    validate(w);
    // W = gamma (z^4 - 2 s z^3 + (s^2 + 2p) z^2 - 2 s p z + p^2)
    const double g = w.gamma;
    const double s = w.u_plus + w.u_minus;
    const double p = w.u_plus * w.u_minus;
    const double b3 = 2.0 * std::abs(s);
    const double b2 = std::abs(s * s + 2.0 * p);
    const double b1 = 2.0 * std::abs(s * p);

    GrowthConstants k;
    auto& c = k.c;

    // Upper bounds use |z|^j <= (j/4) z^4 + (1 - j/4).
    c[3] = g * (1.0 + 0.75 * b3 + 0.5 * b2 + 0.25 * b1);
    c[4] = g * (p * p + 0.25 * b3 + 0.5 * b2 + 0.75 * b1);

    // Lower bound spends half of the leading term on the odd and mixed terms.
    c[1] = 0.5 * g;
    double rem = 0.0;
    const std::array<double, 4> coef{0.0, b1, b2, b3};
    for (int j = 1; j <= 3; ++j) {
        if (coef[j] > 0.0) rem += coef[j] * young_remainder(j, 1.0 / (6.0 * coef[j]));
    }
    c[2] = g * rem;

    // |W'| <= gamma (4|z|^3 + 6|s| z^2 + 2 b2 |z| + 2|s p|), |z|^j <= (j/3)|z|^3 + (1 - j/3)
    c[5] = g * (4.0 + 4.0 * std::abs(s) + 2.0 * b2 / 3.0);
    c[6] = g * (2.0 * std::abs(s) + 4.0 * b2 / 3.0 + 2.0 * std::abs(s * p));

    // W'' = gamma (12 z^2 - 12 s z + 2 (s^2 + 2p))
    c[9] = g * (12.0 + 6.0 * std::abs(s));
    c[10] = g * (6.0 * std::abs(s) + 2.0 * b2);
    if (s == 0.0) {
        c[7] = 12.0 * g;
        c[8] = g * std::max(-4.0 * p, 0.0);
    } else {
        // 12|s||z| <= 6 z^2 + 6 s^2
        c[7] = 6.0 * g;
        c[8] = g * (4.0 * s * s - 4.0 * p);
    }
    return k;
}

}  // namespace vch
