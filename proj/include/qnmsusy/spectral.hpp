#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "qnmsusy/common.hpp"
#include "qnmsusy/potential.hpp"
#include "qnmsusy/propagation.hpp"

namespace qnmsusy {

enum class ModeKind { Normal, Quasinormal, TotalTransmissionLeft, TotalTransmissionRight };

struct Mode {
    cplx omega;
    ModeKind kind;
    int order = 1;       // multiplicity of the Wronskian zero
    double residual = 0; // |J(omega)| relative to the local scale of J
};

// Which pair of canonical solutions the Wronskian is built from:
//   Quasinormal:  J(w) = f'(w) g(w)  - f(w) g'(w)    (zeros: NMs & QNMs)
//   LeftTotal:    J(w) = f'(-w) g(w) - f(-w) g'(w)   (zeros: TTMs, left)
//   RightTotal:   J(w) = f'(w) g(-w) - f(w) g'(-w)   (zeros: TTMs, right)
enum class WronskianType { Quasinormal, LeftTotal, RightTotal };

// Complex value carried with a power-of-two exponent so that Wronskians of
// exponentially large solutions never overflow.
struct ScaledComplex {
    cplx m;
    double log2s = 0;
    cplx to_cplx() const { return m * std::exp2(log2s); }
    double log_abs() const { return std::log(std::abs(m)) + log2s * 0.6931471805599453; }
    ScaledComplex rebased(double s) const { return {m * std::exp2(log2s - s), s}; }
};

struct WronskianOptions {
    double truncation_radius = 0.0;  // 0 => default from the potential's support
    double rtol = 1e-10;
    double atol = 1e-12;
    double x_eval = 0.0;             // matching point where J is formed
    bool check_band = true;
};

inline ScaledComplex wronskian_scaled(const Potential& p, cplx omega, WronskianType type,
                                      const WronskianOptions& opt = {}) {
    cplx wl = (type == WronskianType::LeftTotal) ? -omega : omega;
    cplx wr = (type == WronskianType::RightTotal) ? -omega : omega;
    if (opt.check_band) {
        check_frequency_band(p, wl);
        check_frequency_band(p, wr);
    }
    double xn = opt.truncation_radius > 0 ? opt.truncation_radius
                                          : default_truncation_radius(p);
    OdeOptions oo{opt.rtol, opt.atol};
    WaveState f = propagate_to_point(p, wl, Side::Left, xn, opt.x_eval, oo);
    WaveState g = propagate_to_point(p, wr, Side::Right, xn, opt.x_eval, oo);
    return {f.dphi * g.phi - f.phi * g.dphi, f.log2scale + g.log2scale};
}

inline cplx wronskian(const Potential& p, cplx omega, WronskianType type,
                      const WronskianOptions& opt = {}) {
    return wronskian_scaled(p, omega, type, opt).to_cplx();
}

// dJ/domega by central differences, returned on the same power-of-two base
// as the J sample at omega.
inline std::pair<ScaledComplex, ScaledComplex> wronskian_with_derivative(
        const Potential& p, cplx omega, WronskianType type,
        const WronskianOptions& opt = {}, double h_rel = 1e-6) {
    double h = h_rel * (1.0 + std::abs(omega));
    ScaledComplex j = wronskian_scaled(p, omega, type, opt);
    ScaledComplex jp = wronskian_scaled(p, omega + h, type, opt).rebased(j.log2s);
    ScaledComplex jm = wronskian_scaled(p, omega - h, type, opt).rebased(j.log2s);
    ScaledComplex dj{(jp.m - jm.m) / (2 * h), j.log2s};
    return {j, dj};
}

struct SearchRegion {
    double re_min, re_max, im_min, im_max;
};

struct SearchOptions {
    std::size_t nre = 80, nim = 80;  // scan resolution
    double scan_rtol = 1e-8;         // cheaper tolerance for the seeding scan
    double rtol = 1e-10;
    double truncation_radius = 0.0;
    double dedup_rel = 1e-6;         // merge roots within 1e-6 (1+|w|)
    double residual_cut = 1e-8;      // acceptance threshold on |J| vs local scale
    int max_newton = 60;
    // winding-circle radius for multiplicity counting; zeros closer together
    // than this are certified as one multiple zero (0 => 50*dedup_rel*(1+|w|))
    double order_radius = 0.0;
};

namespace detail {

inline ModeKind classify(cplx omega, WronskianType type) {
    switch (type) {
        case WronskianType::LeftTotal: return ModeKind::TotalTransmissionLeft;
        case WronskianType::RightTotal: return ModeKind::TotalTransmissionRight;
        default: return omega.imag() > 0 ? ModeKind::Normal : ModeKind::Quasinormal;
    }
}

// Multiplicity of the zero at the center of a small circle: winding number of
// J around it (J is analytic in omega).
inline int winding_order(const Potential& p, cplx omega, WronskianType type,
                         const WronskianOptions& opt, double radius) {
    const int npts = 32;
    double total = 0.0, prev = 0.0;
    for (int k = 0; k <= npts; ++k) {
        double th = 2 * pi * k / npts;
        cplx w = omega + radius * cplx(std::cos(th), std::sin(th));
        cplx j = wronskian_scaled(p, w, type, opt).m;  // scale drops out of arg
        double a = std::arg(j);
        if (k > 0) {
            double d = a - prev;
            while (d > pi) d -= 2 * pi;
            while (d < -pi) d += 2 * pi;
            total += d;
        }
        prev = a;
    }
    return int(std::lround(total / (2 * pi)));
}

}  // namespace detail

// Locate zeros of the chosen Wronskian inside a rectangle of the complex
// frequency plane: coarse |J| scan for seeds, then damped Newton polish.
inline std::vector<Mode> find_modes(const Potential& p, const SearchRegion& region,
                                    WronskianType type = WronskianType::Quasinormal,
                                    const SearchOptions& opt = {}) {
    WronskianOptions scan_wopt;
    scan_wopt.rtol = opt.scan_rtol;
    scan_wopt.atol = 1e-10;
    scan_wopt.truncation_radius = opt.truncation_radius;
    WronskianOptions wopt;
    wopt.rtol = opt.rtol;
    wopt.truncation_radius = opt.truncation_radius;

    auto res = linspace(region.re_min, region.re_max, opt.nre);
    auto ims = linspace(region.im_min, region.im_max, opt.nim);
    std::vector<double> la(opt.nre * opt.nim, std::numeric_limits<double>::infinity());
    auto idx = [&](std::size_t i, std::size_t j) { return j * opt.nre + i; };
    for (std::size_t jj = 0; jj < opt.nim; ++jj)
        for (std::size_t ii = 0; ii < opt.nre; ++ii) {
            try {
                la[idx(ii, jj)] = wronskian_scaled(p, {res[ii], ims[jj]}, type, scan_wopt).log_abs();
            } catch (const BandViolation&) {
                // leave +inf: outside the trustworthy band
            }
        }

    // local scale of |J| for residual normalization: median of finite samples
    std::vector<double> finite;
    for (double v : la)
        if (std::isfinite(v)) finite.push_back(v);
    if (finite.empty()) return {};
    std::nth_element(finite.begin(), finite.begin() + finite.size() / 2, finite.end());
    const double log_scale = finite[finite.size() / 2];

    // seeds: strict local minima of log|J| on the scan grid
    std::vector<cplx> seeds;
    for (std::size_t jj = 0; jj < opt.nim; ++jj)
        for (std::size_t ii = 0; ii < opt.nre; ++ii) {
            double v = la[idx(ii, jj)];
            if (!std::isfinite(v)) continue;
            bool min = true;
            for (int dj = -1; dj <= 1 && min; ++dj)
                for (int di = -1; di <= 1 && min; ++di) {
                    if (!di && !dj) continue;
                    long i2 = long(ii) + di, j2 = long(jj) + dj;
                    if (i2 < 0 || j2 < 0 || i2 >= long(opt.nre) || j2 >= long(opt.nim)) continue;
                    if (la[idx(std::size_t(i2), std::size_t(j2))] < v) min = false;
                }
            if (min && v < log_scale) seeds.push_back({res[ii], ims[jj]});
        }

    std::vector<Mode> out;
    for (cplx w : seeds) {
        bool ok = false;
        double resid = 0;
        for (int it = 0; it < opt.max_newton; ++it) {
            ScaledComplex j, dj;
            try {
                std::tie(j, dj) = wronskian_with_derivative(p, w, type, wopt);
            } catch (const BandViolation&) {
                break;
            }
            resid = std::exp(j.log_abs() - log_scale);
            if (std::abs(dj.m) == 0) break;
            cplx step = j.m / dj.m;
            if (resid < 1e-2 * opt.residual_cut
                || std::abs(step) < 1e-13 * (1 + std::abs(w))) {
                ok = resid < opt.residual_cut;
                break;
            }
            // damping: never jump more than a scan cell
            double cell = std::max(res.size() > 1 ? res[1] - res[0] : 1.0,
                                   ims.size() > 1 ? ims[1] - ims[0] : 1.0);
            if (std::abs(step) > cell) step *= cell / std::abs(step);
            w -= step;
            if (it == opt.max_newton - 1) ok = resid < opt.residual_cut;
        }
        if (!ok) continue;
        if (w.real() < region.re_min - 1e-9 || w.real() > region.re_max + 1e-9
            || w.imag() < region.im_min - 1e-9 || w.imag() > region.im_max + 1e-9)
            continue;
        bool dup = false;
        for (const Mode& m : out)
            if (std::abs(m.omega - w) < opt.dedup_rel * (1 + std::abs(w))) dup = true;
        if (dup) continue;
        Mode m;
        m.omega = w;
        m.kind = detail::classify(w, type);
        m.residual = resid;
        double rad = opt.order_radius > 0 ? opt.order_radius
                                          : 50 * opt.dedup_rel * (1 + std::abs(w));
        try {
            m.order = std::max(1, detail::winding_order(p, w, type, wopt, rad));
        } catch (const BandViolation&) {
            m.order = 1;
        }
        if (m.order >= 2) {
            // at a multiple zero J' has a zero of order - 1; for the common
            // double case polish on J' (simple there) to restore accuracy
            for (int it = 0; it < 12; ++it) {
                double h = 1e-4 * (1 + std::abs(m.omega));
                cplx jp = wronskian_scaled(p, m.omega + h, type, wopt).to_cplx();
                cplx jm = wronskian_scaled(p, m.omega - h, type, wopt).to_cplx();
                cplx jc = wronskian_scaled(p, m.omega, type, wopt).to_cplx();
                cplx d1 = (jp - jm) / (2 * h);
                cplx d2 = (jp - 2.0 * jc + jm) / (h * h);
                if (std::abs(d2) == 0) break;
                cplx step = d1 / d2 * double(m.order - 1);
                m.omega -= step;
                if (std::abs(step) < 1e-12 * (1 + std::abs(m.omega))) break;
            }
        }
        out.push_back(m);
    }
    // polishing multiple zeros can collapse nearby candidates onto one point
    std::vector<Mode> merged;
    for (const Mode& m : out) {
        bool dup = false;
        for (const Mode& o : merged) {
            double r = 10 * opt.dedup_rel * (1 + std::abs(m.omega));
            if (std::max(o.order, m.order) >= 2) r = std::max(r, opt.order_radius);
            if (std::abs(o.omega - m.omega) < r) dup = true;
        }
        if (!dup) merged.push_back(m);
    }
    std::sort(merged.begin(), merged.end(), [](const Mode& a, const Mode& b) {
        if (a.omega.imag() != b.omega.imag()) return a.omega.imag() > b.omega.imag();
        return a.omega.real() < b.omega.real();
    });
    return merged;
}

// J restricted to the imaginary axis omega = i*kappa is real for real
// potentials, so sign changes bracket simple zeros.  kappa may be negative
// (zero modes live on the negative imaginary axis).
inline std::vector<Mode> find_axis_modes(const Potential& p, double kappa_min, double kappa_max,
                                         WronskianType type = WronskianType::Quasinormal,
                                         std::size_t nscan = 600,
                                         const WronskianOptions& wopt_in = {}) {
    if (!(kappa_max > kappa_min)) throw InvalidParameter("empty axis scan interval");
    WronskianOptions wopt = wopt_in;
    auto Jre = [&](double k) -> std::optional<double> {
        try {
            ScaledComplex j = wronskian_scaled(p, cplx(0, k), type, wopt);
            return j.m.real() * std::exp2(std::min(j.log2s, 900.0));
        } catch (const BandViolation&) {
            return std::nullopt;
        }
    };
    auto ks = linspace(kappa_min, kappa_max, nscan);
    std::vector<Mode> out;
    std::optional<double> prev = Jre(ks[0]);
    for (std::size_t i = 1; i < ks.size(); ++i) {
        std::optional<double> cur = Jre(ks[i]);
        if (prev && cur && *prev * *cur < 0) {
            double a = ks[i - 1], b = ks[i], fa = *prev;
            for (int it = 0; it < 80; ++it) {
                double mid = 0.5 * (a + b);
                double fm = *Jre(mid);
                if (fa * fm <= 0) b = mid; else { a = mid; fa = fm; }
                if (b - a < 1e-13 * (1 + std::abs(mid))) break;
            }
            Mode m;
            m.omega = cplx(0, 0.5 * (a + b));
            m.kind = detail::classify(m.omega, type);
            m.order = 1;
            m.residual = std::abs(*Jre(0.5 * (a + b)));
            out.push_back(m);
        }
        prev = cur;
    }
    return out;
}

// Bisect a one-parameter family of potentials for the critical parameter at
// which the number of imaginary-axis zeros in [kappa_min, kappa_max] changes.
template <typename MakePotential>
double critical_parameter(MakePotential&& make, double p_lo, double p_hi,
                          double kappa_min, double kappa_max,
                          WronskianType type = WronskianType::Quasinormal,
                          double tol = 1e-4, std::size_t nscan = 600) {
    auto count = [&](double prm) {
        return find_axis_modes(make(prm), kappa_min, kappa_max, type, nscan).size();
    };
    std::size_t c_lo = count(p_lo), c_hi = count(p_hi);
    if (c_lo == c_hi) throw InvalidParameter("mode count does not change across the bracket");
    while (p_hi - p_lo > tol) {
        double mid = 0.5 * (p_lo + p_hi);
        if (count(mid) == c_lo) p_lo = mid; else p_hi = mid;
    }
    return 0.5 * (p_lo + p_hi);
}

// Eigenfunction at a mode frequency: the right canonical solution (which is
// proportional to the left one there).  Verifies that omega is actually a
// zero of the quasinormal Wronskian.
inline OutgoingSolution eigenfunction(const Potential& p, cplx omega,
                                      const PropagationOptions& popt = {}) {
    WronskianOptions wopt;
    wopt.truncation_radius = popt.truncation_radius;
    ScaledComplex j = wronskian_scaled(p, omega, WronskianType::Quasinormal, wopt);
    ScaledComplex jr = wronskian_scaled(p, omega + cplx(0.1, 0.07) * (1.0 + std::abs(omega)) * 0.5,
                                        WronskianType::Quasinormal, wopt).rebased(j.log2s);
    if (!(std::abs(j.m) < 1e-5 * std::abs(jr.m)))
        throw NotAnEigenvalue("quasinormal Wronskian does not vanish at this frequency");
    return propagate_outgoing(p, omega, Side::Right, popt);
}

// Count interior zeros of a (phase-aligned) mode function on [a, b].
inline int node_count(const OutgoingSolution& sol, double a, double b) {
    if (!(b > a)) throw InvalidParameter("empty node-count interval");
    const std::size_t n = 2001;
    // align the global phase using the largest sample
    double best = -1;
    cplx ref = 1.0;
    auto xs = linspace(a, b, n);
    std::vector<cplx> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto [vv, dd, ss] = sol.at_scaled(xs[i]);
        (void)dd;
        (void)ss;  // positive scale factors never move a zero or the phase
        v[i] = vv;
        double m = std::abs(v[i]);
        if (m > best) { best = m; ref = v[i] / m; }
    }
    int nodes = 0;
    double prev = (v[0] / ref).real();
    for (std::size_t i = 1; i < n; ++i) {
        double cur = (v[i] / ref).real();
        if (prev * cur < 0) ++nodes;
        prev = (cur != 0) ? cur : prev;
    }
    return nodes;
}

}  // namespace qnmsusy
