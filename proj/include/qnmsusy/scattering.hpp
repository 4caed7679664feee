#pragma once

#include <cmath>

#include "qnmsusy/common.hpp"
#include "qnmsusy/spectral.hpp"
#include "qnmsusy/susy.hpp"

namespace qnmsusy {

// Scattering amplitudes for V that vanishes (or is negligible) beyond the
// truncation radius; defined by phi = e^{iwx} + R_L e^{-iwx} (left),
// T_L e^{iwx} (right) for a left-incident wave, and mirrored for R_R, T_R.
struct Amplitudes {
    cplx r_left, t_left, r_right, t_right;
};

inline Amplitudes scattering_amplitudes(const Potential& p, double omega,
                                        const WronskianOptions& opt_in = {}) {
    if (omega == 0.0) throw InvalidParameter("scattering amplitudes need omega != 0");
    WronskianOptions opt = opt_in;
    ScaledComplex jq = wronskian_scaled(p, omega, WronskianType::Quasinormal, opt);
    if (std::abs(jq.to_cplx()) < 1e-12 * std::abs(omega))
        throw AtModeFrequency("transmission diverges: omega sits on a Wronskian zero");
    ScaledComplex jl = wronskian_scaled(p, omega, WronskianType::LeftTotal, opt).rebased(jq.log2s);
    ScaledComplex jr = wronskian_scaled(p, omega, WronskianType::RightTotal, opt).rebased(jq.log2s);

    Amplitudes a;
    a.t_left = -2.0 * cplx(0, 1) * omega / jq.to_cplx();
    a.t_right = a.t_left;
    a.r_left = -jl.m / jq.m;
    // J with g(-omega) is the left-total Wronskian evaluated at -omega
    a.r_right = -jr.m / jq.m;
    return a;
}

// Amplitudes of the SUSY partner from those of the base system: the map
// multiplies by boundary factors built from the asymptotic superpotential.
inline Amplitudes transform_amplitudes(const Generator& g, double omega, const Amplitudes& a) {
    const cplx i(0, 1);
    const double wm = g.w_minus(), wp = g.w_plus();
    cplx den_l = i * omega + wm;
    cplx den_r = -i * omega + wp;
    if (std::abs(den_l) < 1e-12 * (1 + std::abs(omega))
        || std::abs(den_r) < 1e-12 * (1 + std::abs(omega)))
        throw PrefactorPole("amplitude transform prefactor has a pole at this frequency");
    Amplitudes out;
    out.r_left = (-i * omega + wm) / den_l * a.r_left;
    out.t_left = (i * omega + wp) / den_l * a.t_left;
    // right-incidence factors: swap W+- and reverse omega
    out.r_right = (i * omega + wp) / den_r * a.r_right;
    out.t_right = (-i * omega + wm) / den_r * a.t_right;
    return out;
}

// |R|^2 + |T|^2 - 1 for a real potential at real frequency.
inline double unitarity_defect(const Amplitudes& a) {
    double l = std::norm(a.r_left) + std::norm(a.t_left) - 1.0;
    double r = std::norm(a.r_right) + std::norm(a.t_right) - 1.0;
    return std::max(std::abs(l), std::abs(r));
}

}  // namespace qnmsusy
