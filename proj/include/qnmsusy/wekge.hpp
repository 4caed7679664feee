#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <cstddef>
#include <vector>

#include "qnmsusy/bilinear.hpp"
#include "qnmsusy/common.hpp"
#include "qnmsusy/potential.hpp"

namespace qnmsusy {

namespace detail {

// Local 4-point Lagrange interpolation on a strictly increasing abscissa.
template <class T>
inline T interp_cubic(const std::vector<double>& xs, const std::vector<T>& ys, double x) {
    const std::size_t n = xs.size();
    if (n < 2) throw InvalidParameter("interpolation needs at least two samples");
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    std::size_t k = (it == xs.begin()) ? 0 : std::size_t(it - xs.begin()) - 1;
    std::size_t i0 = (k == 0) ? 0 : k - 1;
    if (i0 + 4 > n) i0 = n - std::min<std::size_t>(4, n);
    const std::size_t m = std::min<std::size_t>(4, n);
    T acc{};
    for (std::size_t i = 0; i < m; ++i) {
        double w = 1.0;
        for (std::size_t j = 0; j < m; ++j)
            if (j != i) w *= (x - xs[i0 + j]) / (xs[i0 + i] - xs[i0 + j]);
        acc += w * ys[i0 + i];
    }
    return acc;
}

}  // namespace detail

// A positive density profile rho(z) sampled on a uniform grid; the square
// root n = sqrt(rho) drives the change of variables to the Klein-Gordon form.
struct WEProfile {
    std::vector<double> zs;   // uniform, increasing
    std::vector<double> rho;  // positive samples
    std::vector<double> n;    // sqrt(rho)

    double spacing() const { return zs.size() > 1 ? zs[1] - zs[0] : 0.0; }
};

// Strictly validated construction: positive density approaching 1 at both
// ends (step-like densities make the transformed potential distributionally
// undefined and are rejected upstream by the smoothness check).
inline WEProfile make_we_profile(std::vector<double> zs, std::vector<double> rho) {
    if (zs.size() != rho.size() || zs.size() < 9)
        throw InvalidParameter("density profile needs matching grids, >= 9 samples");
    for (double r : rho)
        if (!(r > 0)) throw NonPositiveDensity("density must be positive everywhere");
    if (std::abs(rho.front() - 1.0) > 1e-8 || std::abs(rho.back() - 1.0) > 1e-8)
        throw InvalidParameter("density must approach 1 at both grid ends");
    WEProfile p;
    p.n.resize(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) p.n[i] = std::sqrt(rho[i]);
    p.zs = std::move(zs);
    p.rho = std::move(rho);
    // smoothness: 2nd- and 4th-order curvature estimates must agree; a near
    // step makes the difference blow up with the grid scale
    const double h = p.spacing();
    double scale = 0.0, disagree = 0.0;
    for (std::size_t i = 2; i + 2 < p.n.size(); ++i) {
        double d2a = (p.n[i + 1] - 2 * p.n[i] + p.n[i - 1]) / (h * h);
        double d2b = (-p.n[i + 2] + 16 * p.n[i + 1] - 30 * p.n[i] + 16 * p.n[i - 1]
                      - p.n[i - 2]) / (12 * h * h);
        scale = std::max(scale, std::abs(d2b));
        disagree = std::max(disagree, std::abs(d2a - d2b));
    }
    if (scale > 0 && disagree > 0.5 * scale + 1.0)
        throw InsufficientSmoothness("density curvature estimates disagree under refinement");
    return p;
}

inline WEProfile make_we_profile(const std::function<double(double)>& rho_of_z,
                                 double halfwidth, std::size_t npoints = 4001) {
    auto zs = linspace(-halfwidth, halfwidth, npoints);
    std::vector<double> rho(npoints);
    for (std::size_t i = 0; i < npoints; ++i) rho[i] = rho_of_z(zs[i]);
    return make_we_profile(std::move(zs), std::move(rho));
}

// Image of a density profile under the wave-equation -> Klein-Gordon map:
// coordinates x(z) = int n dz (anchored x(0) = 0), field prefactor sqrt(n),
// and the potential V = n''/(2 n^3) - 3 (n')^2 / (4 n^4).
struct KgeImage {
    std::vector<double> z;  // the profile grid
    std::vector<double> x;  // x(z_i)
    std::vector<double> v;  // V at x(z_i)
    Potential potential;    // resampled on a uniform x grid
};

inline KgeImage we_to_kge(const WEProfile& prof) {
    const std::size_t np = prof.zs.size();
    if (np < 9) throw InvalidParameter("profile too short");
    const double h = prof.spacing();

    // x(z) by RK4 on dx/dz = n(z) with midpoints from local interpolation
    std::vector<double> x(np, 0.0);
    for (std::size_t i = 1; i < np; ++i) {
        double zm = 0.5 * (prof.zs[i - 1] + prof.zs[i]);
        double nm = detail::interp_cubic(prof.zs, prof.n, zm);
        x[i] = x[i - 1] + h / 6.0 * (prof.n[i - 1] + 4.0 * nm + prof.n[i]);
    }
    // anchor x = 0 at z = 0
    double x0 = detail::interp_cubic(prof.zs, x, 0.0);
    for (double& xi : x) xi -= x0;

    // V from 4th-order stencils on n; one-sided near the edges where the
    // profile is required to be asymptotically flat
    std::vector<double> v(np, 0.0);
    auto d1 = [&](std::size_t i) {
        if (i >= 2 && i + 2 < np)
            return (-prof.n[i + 2] + 8 * prof.n[i + 1] - 8 * prof.n[i - 1]
                    + prof.n[i - 2]) / (12 * h);
        if (i == 0) return (prof.n[1] - prof.n[0]) / h;
        if (i + 1 == np) return (prof.n[np - 1] - prof.n[np - 2]) / h;
        return (prof.n[i + 1] - prof.n[i - 1]) / (2 * h);
    };
    auto d2 = [&](std::size_t i) {
        if (i >= 2 && i + 2 < np)
            return (-prof.n[i + 2] + 16 * prof.n[i + 1] - 30 * prof.n[i]
                    + 16 * prof.n[i - 1] - prof.n[i - 2]) / (12 * h * h);
        if (i == 0 || i + 1 == np) return 0.0;
        return (prof.n[i + 1] - 2 * prof.n[i] + prof.n[i - 1]) / (h * h);
    };
    for (std::size_t i = 0; i < np; ++i) {
        double ni = prof.n[i], np1 = d1(i), np2 = d2(i);
        v[i] = np2 / (2 * ni * ni * ni) - 3 * np1 * np1 / (4 * ni * ni * ni * ni);
    }

    // resample V onto a uniform x grid for the generic machinery
    auto xg = linspace(x.front(), x.back(), np);
    std::vector<double> vg(np);
    for (std::size_t i = 0; i < np; ++i) vg[i] = detail::interp_cubic(x, v, xg[i]);
    SupportInfo sup;
    sup.type = SupportInfo::Type::Finite;
    sup.halfwidth = std::max(std::abs(x.front()), std::abs(x.back()));
    KgeImage out{prof.zs, std::move(x), std::move(v),
                 numeric_potential(std::move(xg), std::move(vg), sup)};
    return out;
}

// Inverse map.  The zero-frequency solution q with q -> 1 on the right
// determines the density rho = q^4 and the coordinate map dz/dx = q^{-2}.
// A node of q signals a bound state (the map breaks down); without a node
// the potential either supports a zero-frequency mode (q flat on the left,
// full-line image) or q grows linearly and the image is a semi-infinite
// z-interval.
enum class InverseOutcome { FullLine, SemiInfiniteInterval };

struct WEInverse {
    InverseOutcome outcome = InverseOutcome::FullLine;
    std::vector<double> x;    // uniform, increasing
    std::vector<double> q;    // zero-frequency solution
    std::vector<double> z;    // z(x_i), anchored z = 0 at x = 0
    std::vector<double> rho;  // q^4
};

inline WEInverse kge_to_we(const Potential& p, double halfwidth,
                           std::size_t npoints = 8001) {
    if (!(halfwidth > 0) || npoints < 9)
        throw InvalidParameter("inverse map needs positive range, >= 9 samples");
    WEInverse out;
    out.x = linspace(-halfwidth, halfwidth, npoints);
    out.q.assign(npoints, 0.0);
    out.z.assign(npoints, 0.0);
    out.rho.assign(npoints, 0.0);

    // integrate (q, q', z) right-to-left with RK4: q'' = V q, z' = q^{-2}
    const double h = out.x[1] - out.x[0];
    double q = 1.0, qp = 0.0, z = 0.0;
    out.q[npoints - 1] = q;
    out.z[npoints - 1] = z;
    for (std::size_t i = npoints - 1; i-- > 0;) {
        const double xr = out.x[i + 1];
        auto f = [&](double xx, double qq, double pp) {
            return std::array<double, 3>{pp, p(xx) * qq, 1.0 / (qq * qq)};
        };
        auto k1 = f(xr, q, qp);
        auto k2 = f(xr - h / 2, q - h / 2 * k1[0], qp - h / 2 * k1[1]);
        auto k3 = f(xr - h / 2, q - h / 2 * k2[0], qp - h / 2 * k2[1]);
        auto k4 = f(xr - h, q - h * k3[0], qp - h * k3[1]);
        q -= h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
        qp -= h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
        z -= h / 6 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2]);
        if (!(q > 0))
            throw BoundStateObstruction(
                "zero-frequency solution has a node: the system has a bound state");
        out.q[i] = q;
        out.z[i] = z;
    }
    for (std::size_t i = 0; i < npoints; ++i) out.rho[i] = std::pow(out.q[i], 4);
    // anchor z = 0 at x = 0
    const double z0 = detail::interp_cubic(out.x, out.z, 0.0);
    for (double& zi : out.z) zi -= z0;
    // flat vs linearly growing tail on the left
    out.outcome = std::abs(qp) * halfwidth < 1e-6 * std::abs(q)
                      ? InverseOutcome::FullLine
                      : InverseOutcome::SemiInfiniteInterval;
    return out;
}

// Resample an inverse-map result onto a uniform z grid as a density profile
// (restricted to a window where the map is regular).
inline WEProfile inverse_to_profile(const WEInverse& inv, double z_lo, double z_hi,
                                    std::size_t npoints = 4001) {
    if (z_lo < inv.z.front() || z_hi > inv.z.back() || !(z_lo < z_hi))
        throw InvalidParameter("profile window outside the mapped z-range");
    WEProfile prof;
    prof.zs = linspace(z_lo, z_hi, npoints);
    prof.rho.resize(npoints);
    prof.n.resize(npoints);
    for (std::size_t i = 0; i < npoints; ++i) {
        prof.rho[i] = detail::interp_cubic(inv.z, inv.rho, prof.zs[i]);
        if (!(prof.rho[i] > 0)) throw NonPositiveDensity("resampled density not positive");
        prof.n[i] = std::sqrt(prof.rho[i]);
    }
    return prof;
}

// Push a two-component state through the map: phi^1 = sqrt(n) psi^1,
// phi^2 = n^{-3/2} psi^2, at positions x(z); resampled on a uniform x grid.
inline TwoComponentState map_state(const WEProfile& prof, const KgeImage& img,
                                   const TwoComponentState& psi) {
    if (psi.grid.size() != prof.zs.size())
        throw GridMismatch("state grid does not match the profile grid");
    const std::size_t np = prof.zs.size();
    std::vector<cplx> c1(np), c2(np);
    for (std::size_t i = 0; i < np; ++i) {
        const double rn = std::sqrt(prof.n[i]);
        c1[i] = rn * psi.c1[i];
        c2[i] = psi.c2[i] / (prof.n[i] * rn);
    }
    TwoComponentState out;
    out.grid = linspace(img.x.front(), img.x.back(), np);
    out.c1.resize(np);
    out.c2.resize(np);
    for (std::size_t i = 0; i < np; ++i) {
        out.c1[i] = detail::interp_cubic(img.x, c1, out.grid[i]);
        out.c2[i] = detail::interp_cubic(img.x, c2, out.grid[i]);
    }
    return out;
}

// | (mapped u, mapped v)_KGE - (u, v)_WE |: the bilinear map is invariant
// under the change of representation.
inline double bilinear_invariance_residual(const WEProfile& prof, const KgeImage& img,
                                           const TwoComponentState& u,
                                           const TwoComponentState& v) {
    cplx we = bilinear(u, v);
    cplx kge = bilinear(map_state(prof, img, u), map_state(prof, img, v));
    return std::abs(kge - we);
}

}  // namespace qnmsusy
