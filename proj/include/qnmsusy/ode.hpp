#pragma once

#include <cmath>
#include <functional>

#include "qnmsusy/common.hpp"

namespace qnmsusy {

// State of phi'' = (V(x) - omega^2) phi, carried as (phi, phi') with a
// separate power-of-two log scale so exponentially growing quasinormal
// solutions never overflow.  True values are ldexp(phi, log2scale) etc.
struct WaveState {
    cplx phi{};
    cplx dphi{};
    double log2scale = 0.0;

    cplx value() const { return scale_up(phi); }
    cplx deriv() const { return scale_up(dphi); }

private:
    cplx scale_up(cplx v) const {
        double s = std::exp2(log2scale);
        return {v.real() * s, v.imag() * s};
    }
};

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
};

namespace detail {

// Dormand-Prince 5(4) coefficients.
struct Dopri5 {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // embedded 4th-order weights
    static constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                            e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;
};

struct Vec2c {
    cplx a, b;
    Vec2c operator+(const Vec2c& o) const { return {a + o.a, b + o.b}; }
    Vec2c operator*(double s) const { return {a * s, b * s}; }
};

}  // namespace detail

// Adaptive RK integration of the 1-d wave/KG equation in x from s.phi at
// position `from` to position `to` (either direction).  V must be smooth on
// the open interval; callers split at jumps.
inline void integrate_wave(const std::function<double(double)>& V, cplx omega2,
                           WaveState& s, double from, double to,
                           const OdeOptions& opt = {}) {
    using detail::Vec2c;
    if (from == to) return;
    const double dir = (to > from) ? 1.0 : -1.0;
    auto rhs = [&](double x, const Vec2c& y) -> Vec2c {
        return {y.b, (V(x) - omega2) * y.a};
    };

    Vec2c y{s.phi, s.dphi};
    double x = from;
    double span = std::abs(to - from);
    double h = dir * std::min(span, 0.05 * (1.0 + span));
    int rejects_in_row = 0;

    for (int iter = 0; iter < 2000000; ++iter) {
        if ((x - to) * dir >= 0) break;
        if (std::abs(h) > std::abs(to - x)) h = to - x;

        using D = detail::Dopri5;
        Vec2c k1 = rhs(x, y);
        Vec2c k2 = rhs(x + D::c2 * h, y + k1 * (D::a21 * h));
        Vec2c k3 = rhs(x + D::c3 * h, y + k1 * (D::a31 * h) + k2 * (D::a32 * h));
        Vec2c k4 = rhs(x + D::c4 * h, y + k1 * (D::a41 * h) + k2 * (D::a42 * h) + k3 * (D::a43 * h));
        Vec2c k5 = rhs(x + D::c5 * h, y + k1 * (D::a51 * h) + k2 * (D::a52 * h) + k3 * (D::a53 * h)
                                        + k4 * (D::a54 * h));
        Vec2c k6 = rhs(x + h, y + k1 * (D::a61 * h) + k2 * (D::a62 * h) + k3 * (D::a63 * h)
                               + k4 * (D::a64 * h) + k5 * (D::a65 * h));
        Vec2c y5 = y + k1 * (D::b1 * h) + k3 * (D::b3 * h) + k4 * (D::b4 * h)
                     + k5 * (D::b5 * h) + k6 * (D::b6 * h);
        Vec2c k7 = rhs(x + h, y5);
        Vec2c y4 = y + k1 * (D::e1 * h) + k3 * (D::e3 * h) + k4 * (D::e4 * h)
                     + k5 * (D::e5 * h) + k6 * (D::e6 * h) + k7 * (D::e7 * h);

        double err = 0.0;
        {
            double s1 = opt.atol + opt.rtol * std::max(std::abs(y.a), std::abs(y5.a));
            double s2 = opt.atol + opt.rtol * std::max(std::abs(y.b), std::abs(y5.b));
            err = std::max(std::abs(y5.a - y4.a) / s1, std::abs(y5.b - y4.b) / s2);
        }

        if (err <= 1.0 || std::abs(h) < 1e-14 * (1.0 + std::abs(x))) {
            x += h;
            y = y5;
            rejects_in_row = 0;
            // dynamic-range guard: renormalize by a power of two
            double mag = std::max(std::abs(y.a), std::abs(y.b));
            if (mag > 0x1p100) {
                int k = std::ilogb(mag);
                y.a = std::ldexp(y.a.real(), -k) + cplx(0, 1) * std::ldexp(y.a.imag(), -k);
                y.b = std::ldexp(y.b.real(), -k) + cplx(0, 1) * std::ldexp(y.b.imag(), -k);
                s.log2scale += k;
                if (!std::isfinite(mag)) throw OverflowError("wave integration overflow");
            }
        } else if (++rejects_in_row > 60) {
            throw NonConvergence("adaptive step-size control failed");
        }
        double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
        h *= std::min(5.0, std::max(0.2, fac));
    }
    if ((x - to) * dir < 0) throw NonConvergence("wave integration ran out of iterations");
    s.phi = y.a;
    s.dphi = y.b;
}

// Exact propagation of (phi, phi') across a constant-V segment.  With
// alpha = sqrt(V - omega^2) the map is [cosh a dx, sinh a dx / a; a sinh, cosh];
// the branch of alpha is irrelevant (entries are even/odd in alpha).
struct TransferMatrix {
    cplx m11, m12, m21, m22;
    cplx det() const { return m11 * m22 - m12 * m21; }
    void apply(cplx& phi, cplx& dphi) const {
        cplx p = m11 * phi + m12 * dphi;
        cplx dp = m21 * phi + m22 * dphi;
        phi = p;
        dphi = dp;
    }
};

inline TransferMatrix transfer_matrix(double v_seg, cplx omega, double dx) {
    if (!(dx != 0)) throw InvalidParameter("transfer_matrix: dx must be nonzero");
    cplx a2 = cplx(v_seg, 0) - omega * omega;
    cplx a = std::sqrt(a2);
    cplx ad = a * dx;
    if (std::abs(ad) < 1e-6) {
        // series: cosh(ad) and sinh(ad)/a, stable in the a -> 0 limit
        cplx ad2 = ad * ad;
        cplx ch = 1.0 + ad2 * (0.5 + ad2 * (1.0 / 24.0 + ad2 / 720.0));
        cplx shoa = dx * (1.0 + ad2 * (1.0 / 6.0 + ad2 * (1.0 / 120.0 + ad2 / 5040.0)));
        return {ch, shoa, a2 * shoa, ch};
    }
    cplx ch = std::cosh(ad), sh = std::sinh(ad);
    return {ch, sh / a, a * sh, ch};
}

}  // namespace qnmsusy
