#pragma once

#include <cmath>

#include "qnmsusy/common.hpp"

namespace qnmsusy {

// Schwarzschild tortoise coordinate.  The radial coordinate r > 2m maps to
// x = r + 2m log(r/2m - 1), a monotone bijection onto the real line.
// (The paper's notation uses x_* for r; we keep "r" to avoid stars in code.)
class TortoiseMap {
public:
    explicit TortoiseMap(double mass) : m_(mass) {
        if (!(mass > 0)) throw InvalidParameter("TortoiseMap: mass must be positive");
    }

    double mass() const { return m_; }

    double x_of_r(double r) const {
        return r + 2 * m_ * std::log(r / (2 * m_) - 1);
    }

    // Inverse map: r(x).  Newton on u = r/2m - 1 > 0 with a bracketing
    // bisection fallback; converges to 1e-12 relative.
    double r_of_x(double x) const {
        const double tm = 2 * m_;
        // bracket u: x/2m = (u+1) + log u
        double t = x / tm;
        double ulo = std::exp(std::min(t - 1.0, 0.0)) * 1e-8;
        double uhi = std::max(t, 1.0) + 1.0;
        while (f(ulo) > t) ulo *= 0.5;
        while (f(uhi) < t) uhi *= 2.0;
        double u = (t > 1.0) ? t - 1.0 : std::exp(t - 1.0);
        u = std::min(std::max(u, ulo), uhi);
        for (int it = 0; it < 200; ++it) {
            double fu = f(u) - t;
            double dfu = 1.0 + 1.0 / u;
            double step = fu / dfu;
            double un = u - step;
            if (!(un > ulo && un < uhi)) un = 0.5 * (ulo + uhi);  // bisect
            if (fu > 0) uhi = u; else ulo = u;
            if (std::abs(un - u) <= 1e-15 * (1.0 + un)) { u = un; break; }
            u = un;
        }
        return tm * (u + 1.0);
    }

    // dr/dx = 1 - 2m/r
    double drdx(double r) const { return 1.0 - 2 * m_ / r; }

private:
    static double f(double u) { return (u + 1.0) + std::log(u); }
    double m_;
};

}  // namespace qnmsusy
