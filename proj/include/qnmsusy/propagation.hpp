#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "qnmsusy/common.hpp"
#include "qnmsusy/ode.hpp"
#include "qnmsusy/potential.hpp"

namespace qnmsusy {

enum class Side { Left, Right };

struct PropagationOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    std::size_t npoints = 1201;  // grid resolution for stored solutions
    double truncation_radius = 0.0;  // 0 => choose from the potential's support
    bool check_band = true;
};

// e^w with the real exponent split off as a power of two.
inline WaveState exp_scaled(cplx w) {
    constexpr double ln2 = 0.6931471805599453;
    double k = std::floor(w.real() / ln2);
    WaveState s;
    s.log2scale = k;
    s.phi = std::exp(w - k * ln2);
    return s;
}

// Radius beyond which the potential is negligible (|V| < 1e-12 of its peak).
inline double default_truncation_radius(const Potential& p) {
    const SupportInfo sup = p.support();
    if (sup.type == SupportInfo::Type::Finite)
        return std::max(sup.halfwidth, 1.0);
    const double lam = sup.decay_rate;
    if (!(lam > 0)) throw InvalidParameter("potential tail has no decay rate");
    const double cap = sup.halfwidth + 80.0 / lam;
    double vmax = 0.0;
    const int nscan = 4000;
    for (int i = 0; i <= nscan; ++i) {
        double x = -cap + 2.0 * cap * i / nscan;
        vmax = std::max(vmax, std::abs(p(x)));
    }
    if (vmax == 0.0) return std::max(sup.halfwidth, 1.0);
    for (int i = 0; i <= nscan; ++i) {
        double x = sup.halfwidth + (cap - sup.halfwidth) * i / nscan;
        if (std::abs(p(x)) < 1e-12 * vmax && std::abs(p(-x)) < 1e-12 * vmax) return x;
    }
    return cap;
}

// Truncating an exponential tail at finite radius only reproduces modes with
// Im(omega) above roughly -lambda/2; refuse frequencies outside that band.
inline void check_frequency_band(const Potential& p, cplx omega) {
    const SupportInfo sup = p.support();
    if (sup.type == SupportInfo::Type::ExponentialTail) {
        double floor_im = -0.45 * sup.decay_rate;
        if (omega.imag() <= floor_im)
            throw BandViolation("Im(omega) below the truncation-validity band of the tail");
    } else if (sup.type == SupportInfo::Type::AlgebraicTail) {
        if (omega.imag() < -1e-12)
            throw BandViolation("algebraically decaying tails only support Im(omega) >= 0");
    }
}

namespace detail {

inline std::vector<double> build_grid(const Potential& p, double xn, std::size_t npoints) {
    std::vector<double> g = linspace(-xn, xn, npoints);
    for (double s : p.singularities())
        if (s > -xn && s < xn) g.push_back(s);
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end(),
                        [xn](double a, double b) { return std::abs(a - b) < 1e-13 * (1 + xn); }),
            g.end());
    return g;
}

// Advance the state from x0 to x1 (no interior singularities) choosing the
// exact constant-segment map when available.
inline void advance(const Potential& p, cplx omega, WaveState& s, double x0, double x1,
                    const OdeOptions& opt) {
    if (x0 == x1) return;
    if (p.kind() == PotentialKind::PiecewiseConstant || p.kind() == PotentialKind::Free) {
        double v = p(0.5 * (x0 + x1));
        transfer_matrix(v, omega, x1 - x0).apply(s.phi, s.dphi);
        double mag = std::max(std::abs(s.phi), std::abs(s.dphi));
        if (mag > 0x1p100) {
            int k = std::ilogb(mag);
            s.phi = {std::ldexp(s.phi.real(), -k), std::ldexp(s.phi.imag(), -k)};
            s.dphi = {std::ldexp(s.dphi.real(), -k), std::ldexp(s.dphi.imag(), -k)};
            s.log2scale += k;
        }
        return;
    }
    auto V = [&p](double x) { return p(x); };
    integrate_wave(V, omega * omega, s, x0, x1, opt);
}

}  // namespace detail

// An outgoing canonical solution: f(omega,x) = e^{-i omega x} for x <= -X
// (Side::Left) or g(omega,x) = e^{+i omega x} for x >= +X (Side::Right),
// continued across the potential and tabulated with values and derivatives
// so cubic Hermite interpolation is available everywhere on the grid.
class OutgoingSolution {
public:
    Side side;
    cplx omega;
    std::vector<double> grid;
    std::vector<cplx> val, der;           // mantissas
    std::vector<double> scale;            // log2 of the true-value scale

    double x_min() const { return grid.front(); }
    double x_max() const { return grid.back(); }

    // true value and derivative at x (cubic Hermite within a cell)
    std::pair<cplx, cplx> at(double x) const {
        auto [v, d, s] = at_scaled(x);
        double f = std::exp2(s);
        return {v * f, d * f};
    }
    cplx value(double x) const { return at(x).first; }
    cplx deriv(double x) const { return at(x).second; }

    // value/derivative with the power-of-two scale kept separate
    std::tuple<cplx, cplx, double> at_scaled(double x) const {
        if (x < grid.front() - 1e-12 || x > grid.back() + 1e-12)
            throw InvalidParameter("evaluation point outside the tabulated range");
        x = std::clamp(x, grid.front(), grid.back());
        std::size_t j = std::upper_bound(grid.begin(), grid.end(), x) - grid.begin();
        if (j == 0) j = 1;
        if (j == grid.size()) j = grid.size() - 1;
        std::size_t i = j - 1;
        double h = grid[j] - grid[i];
        double t = (x - grid[i]) / h;
        double smax = std::max(scale[i], scale[j]);
        double fi = std::exp2(scale[i] - smax), fj = std::exp2(scale[j] - smax);
        cplx p0 = val[i] * fi, p1 = val[j] * fj;
        cplx m0 = der[i] * fi * h, m1 = der[j] * fj * h;
        double t2 = t * t, t3 = t2 * t;
        cplx v = (2 * t3 - 3 * t2 + 1) * p0 + (t3 - 2 * t2 + t) * m0
               + (-2 * t3 + 3 * t2) * p1 + (t3 - t2) * m1;
        cplx d = ((6 * t2 - 6 * t) * p0 + (3 * t2 - 4 * t + 1) * m0
                + (-6 * t2 + 6 * t) * p1 + (3 * t2 - 2 * t) * m1) / h;
        return {v, d, smax};
    }

    cplx log_derivative(double x) const {
        auto [v, d, s] = at_scaled(x);
        (void)s;
        if (std::abs(v) < 1e-280) throw NodeAtPoint("solution vanishes at the requested point");
        return d / v;
    }
};

// Propagate only to a single point; no grid fill.  Used by root scans.
inline WaveState propagate_to_point(const Potential& p, cplx omega, Side side,
                                    double xn, double x_target,
                                    const OdeOptions& opt = {}) {
    double x0 = (side == Side::Left) ? -xn : xn;
    cplx iw(0, 1);
    WaveState s = exp_scaled((side == Side::Left ? -iw : iw) * omega * x0);
    s.dphi = (side == Side::Left ? -iw : iw) * omega * s.phi;

    std::vector<double> stops;
    stops.push_back(x0);
    for (double sv : p.singularities())
        if ((sv - x0) * (x_target - sv) > 0) stops.push_back(sv);
    stops.push_back(x_target);
    std::sort(stops.begin(), stops.end());
    if (side == Side::Right) std::reverse(stops.begin(), stops.end());
    for (std::size_t k = 1; k < stops.size(); ++k)
        detail::advance(p, omega, s, stops[k - 1], stops[k], opt);
    return s;
}

inline OutgoingSolution propagate_outgoing(const Potential& p, cplx omega, Side side,
                                           const PropagationOptions& opts = {}) {
    if (opts.check_band) check_frequency_band(p, omega);
    double xn = opts.truncation_radius > 0 ? opts.truncation_radius
                                           : default_truncation_radius(p);
    OutgoingSolution sol;
    sol.side = side;
    sol.omega = omega;
    sol.grid = detail::build_grid(p, xn, opts.npoints);

    const std::size_t n = sol.grid.size();
    sol.val.resize(n);
    sol.der.resize(n);
    sol.scale.resize(n);

    OdeOptions oopt{opts.rtol, opts.atol};
    cplx iw(0, 1);
    cplx slope = (side == Side::Left ? -iw : iw) * omega;

    auto fill = [&](std::size_t idx, const WaveState& s) {
        sol.val[idx] = s.phi;
        sol.der[idx] = s.dphi;
        sol.scale[idx] = s.log2scale;
    };

    if (side == Side::Left) {
        WaveState s = exp_scaled(slope * sol.grid.front());
        s.dphi = slope * s.phi;
        fill(0, s);
        for (std::size_t k = 1; k < n; ++k) {
            detail::advance(p, omega, s, sol.grid[k - 1], sol.grid[k], oopt);
            fill(k, s);
        }
    } else {
        WaveState s = exp_scaled(slope * sol.grid.back());
        s.dphi = slope * s.phi;
        fill(n - 1, s);
        for (std::size_t k = n - 1; k-- > 0;) {
            detail::advance(p, omega, s, sol.grid[k + 1], sol.grid[k], oopt);
            fill(k, s);
        }
    }
    return sol;
}

}  // namespace qnmsusy
