#pragma once

#include <cmath>
#include <vector>

#include "qnmsusy/common.hpp"
#include "qnmsusy/potential.hpp"
#include "qnmsusy/tortoise.hpp"

namespace qnmsusy {

// Rate constant n(n+1)/3m appearing in the axial/polar superpotential; it is
// both the asymptotic value of W on each side and i times the algebraically
// special frequency.
inline double bh_special_rate(double mass, int l) {
    if (l < 2) throw InvalidParameter("black-hole sector needs l >= 2");
    if (!(mass > 0)) throw InvalidParameter("black-hole mass must be positive");
    const double n = BHParams{mass, l}.n();
    return n * (n + 1) / (3 * mass);
}

// Algebraically special frequency Omega = -i n(n+1)/3m.
inline cplx bh_special_frequency(double mass, int l) {
    return cplx(0, -bh_special_rate(mass, l));
}

// Superpotential linking the axial (Regge-Wheeler) and polar (Zerilli)
// potentials:  W = n(n+1)/3m + 3m(r - 2m)/(r^2 (n r + 3m)), evaluated at the
// radius r(x) of the tortoise coordinate x.
inline double bh_superpotential(double mass, int l, double x) {
    const double n = BHParams{mass, l}.n();
    TortoiseMap map(mass);
    const double r = map.r_of_x(x);
    return bh_special_rate(mass, l)
           + 3 * mass * (r - 2 * mass) / (r * r * (n * r + 3 * mass));
}

// dW/dx assembled analytically through the tortoise map:
// dW/dx = dW/dr * (1 - 2m/r).
inline double bh_superpotential_deriv(double mass, int l, double x) {
    const double n = BHParams{mass, l}.n();
    TortoiseMap map(mass);
    const double r = map.r_of_x(x);
    const double num = 3 * mass * (r - 2 * mass);
    const double den = r * r * (n * r + 3 * mass);
    const double dnum = 3 * mass;
    const double dden = 3 * n * r * r + 6 * mass * r;
    const double dWdr = (dnum * den - num * dden) / (den * den);
    return dWdr * map.drdx(r);
}

// Residuals of the factorization identities
//   V_RW = W^2 - W' + Omega^2   and   V_Z = W^2 + W' + Omega^2
// over a grid of tortoise positions.  Both identities are exact; the report
// records the largest violation alongside the potential peaks for scale.
struct BhRiccatiReport {
    double max_residual_rw = 0;
    double max_residual_z = 0;
    double peak_rw = 0;
    double peak_z = 0;
};

inline BhRiccatiReport verify_bh_riccati(double mass, int l,
                                         const std::vector<double>& grid) {
    if (grid.empty()) throw InvalidParameter("Riccati check needs a nonempty grid");
    auto rw = regge_wheeler(mass, l);
    auto z = zerilli(mass, l);
    const double k = bh_special_rate(mass, l);
    const double omega2 = -k * k;  // Omega = -ik
    BhRiccatiReport rep;
    for (double x : grid) {
        const double W = bh_superpotential(mass, l, x);
        const double Wp = bh_superpotential_deriv(mass, l, x);
        rep.max_residual_rw =
            std::max(rep.max_residual_rw, std::abs(rw(x) - (W * W - Wp + omega2)));
        rep.max_residual_z =
            std::max(rep.max_residual_z, std::abs(z(x) - (W * W + Wp + omega2)));
        rep.peak_rw = std::max(rep.peak_rw, std::abs(rw(x)));
        rep.peak_z = std::max(rep.peak_z, std::abs(z(x)));
    }
    return rep;
}

inline BhRiccatiReport verify_bh_riccati(double mass, int l, double span = 50.0,
                                         std::size_t npoints = 2001) {
    return verify_bh_riccati(mass, l, linspace(-span * mass, span * mass, npoints));
}

}  // namespace qnmsusy
