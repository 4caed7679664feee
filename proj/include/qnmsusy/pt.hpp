#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "qnmsusy/common.hpp"
#include "qnmsusy/potential.hpp"
#include "qnmsusy/spectral.hpp"

namespace qnmsusy {

namespace detail {

// log Gamma for complex argument (Lanczos approximation, g = 7).
inline cplx lgamma_c(cplx z) {
    static const double g = 7.0;
    static const double coef[9] = {
        0.99999999999980993,  676.5203681218851,   -1259.1392167224028,
        771.32342877765313,   -176.61502916214059, 12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    if (z.real() < 0.5) {
        // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
        return std::log(pi / std::sin(pi * z)) - lgamma_c(1.0 - z);
    }
    z -= 1.0;
    cplx x = coef[0];
    for (int k = 1; k < 9; ++k) x += coef[k] / (z + double(k));
    cplx t = z + g + 0.5;
    return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

inline bool near_nonpositive_integer(cplx c, double tol = 1e-9) {
    double r = std::round(c.real());
    return r <= 0.0 && std::abs(c.real() - r) < tol && std::abs(c.imag()) < tol;
}

// threshold sits well below the 1e-6 nudge so the offset evaluations land
// outside the degenerate window
inline bool near_integer(cplx s, double tol = 3e-8) {
    return std::abs(s.real() - std::round(s.real())) < tol && std::abs(s.imag()) < tol;
}

// Gauss series, valid for |xi| <= 1/2 (and convergent up to |xi| < 1).
inline cplx hyp2f1_series(cplx a, cplx b, cplx c, double xi) {
    cplx term = 1.0, sum = 1.0;
    for (int k = 0; k < 5000; ++k) {
        term *= (a + double(k)) * (b + double(k)) / ((c + double(k)) * double(k + 1)) * xi;
        sum += term;
        if (std::abs(term) < 1e-17 * (1.0 + std::abs(sum))) return sum;
    }
    throw NonConvergence("hypergeometric series did not converge");
}

inline cplx hyp2f1_impl(cplx a, cplx b, cplx c, double xi, double omxi) {
    // terminating (polynomial) cases converge for any argument
    bool poly_a = near_nonpositive_integer(a), poly_b = near_nonpositive_integer(b);
    if (near_nonpositive_integer(c)) {
        // still fine if the series terminates before the pole in c
        double cr = std::round(c.real());
        double deg = poly_a && poly_b ? std::max(std::round(a.real()), std::round(b.real()))
                     : poly_a          ? std::round(a.real())
                     : poly_b          ? std::round(b.real())
                                       : 1.0;
        if (!(poly_a || poly_b) || deg <= cr)
            throw DegenerateParameters(
                "hypergeometric c parameter at a nonpositive integer");
    }
    if (poly_a || poly_b) return hyp2f1_series(a, b, c, xi);
    if (xi <= 0.5) return hyp2f1_series(a, b, c, xi);
    // linear transformation to the argument 1 - xi
    cplx s = c - a - b;
    if (near_integer(s)) {
        // parameters sit on the degenerate set where the two transformed
        // terms have cancelling poles; nudge c off it and average out the
        // leading odd error term
        const double d = 1e-6;
        cplx up = hyp2f1_impl(a, b, c + d, xi, omxi);
        cplx dn = hyp2f1_impl(a, b, c - d, xi, omxi);
        return 0.5 * (up + dn);
    }
    cplx lg_c = lgamma_c(c);
    // 1/Gamma has zeros at the nonpositive integers; kill the term instead
    // of evaluating log Gamma at its pole
    cplx t1 = (near_nonpositive_integer(c - a) || near_nonpositive_integer(c - b))
                  ? cplx(0)
                  : std::exp(lg_c + lgamma_c(s) - lgamma_c(c - a) - lgamma_c(c - b))
                        * hyp2f1_series(a, b, 1.0 - s, omxi);
    cplx t2 = (near_nonpositive_integer(a) || near_nonpositive_integer(b))
                  ? cplx(0)
                  : std::exp(lg_c + lgamma_c(-s) - lgamma_c(a) - lgamma_c(b)
                             + s * std::log(cplx(omxi)))
                        * hyp2f1_series(c - a, c - b, 1.0 + s, omxi);
    return t1 + t2;
}

}  // namespace detail

// Gauss hypergeometric function 2F1(a, b; c; xi) for real xi in [0, 1).
inline cplx hyp2f1(cplx a, cplx b, cplx c, double xi) {
    if (!(xi >= 0.0 && xi < 1.0))
        throw InvalidParameter("hyp2f1 argument must lie in [0, 1)");
    return detail::hyp2f1_impl(a, b, c, xi, 1.0 - xi);
}

// ---- closed-form machinery for V = 𝒱 sech^2(x/b) --------------------------

// Index parameter q = sqrt(1/4 - b^2 𝒱); real for b^2 𝒱 <= 1/4.
inline cplx pt_q(double vb2) { return std::sqrt(cplx(0.25 - vb2)); }

// Wave outgoing to the left (phi -> e^{-i w x} as x -> -infty), with its
// x-derivative.  Uses the compressed coordinate xi = 1/(1 + e^{-2x/b}).
inline std::pair<cplx, cplx> pt_outgoing_wave(cplx q, double b, cplx omega, double x) {
    const cplx iwb = cplx(0, 1) * omega * b;
    const double u = 2.0 * x / b;
    // accurate xi, 1-xi, and log xi(1-xi) for large |x|
    double xi, omxi, log_xi, log_omxi;
    if (u >= 0) {
        double e = std::exp(-u);
        xi = 1.0 / (1.0 + e);
        omxi = e / (1.0 + e);
        log_xi = -std::log1p(e);
        log_omxi = -u + log_xi;
    } else {
        double e = std::exp(u);
        omxi = 1.0 / (1.0 + e);
        xi = e / (1.0 + e);
        log_omxi = -std::log1p(e);
        log_xi = u + log_omxi;
    }
    const cplx a = 0.5 + q - iwb, bb = 0.5 - q - iwb, c = 1.0 - iwb;
    cplx pre = std::exp(-0.5 * iwb * (log_xi + log_omxi));
    cplx F = detail::hyp2f1_impl(a, bb, c, xi, omxi);
    cplx Fp = a * bb / c * detail::hyp2f1_impl(a + 1.0, bb + 1.0, c + 1.0, xi, omxi);
    cplx val = pre * F;
    cplx der = (2.0 / b) * pre * (-0.5 * iwb * (1.0 - 2.0 * xi) * F + xi * omxi * Fp);
    return {val, der};
}

// One ladder entry: omega_n^{sign} = -(i/b)(n + 1/2 + sign*q).
struct PtMode {
    cplx omega;
    int n = 0;
    int sign = +1;    // which of the two strings
    int parity = +1;  // (-1)^n
    ModeKind kind = ModeKind::Quasinormal;
};

inline cplx pt_ladder_frequency(cplx q, double b, int n, int sign) {
    if (n < 0 || (sign != 1 && sign != -1))
        throw InvalidParameter("ladder index must have n >= 0, sign = +-1");
    return -cplx(0, 1) / b * (double(n) + 0.5 + double(sign) * q);
}

// The full (Q)NM ladder up to n_max.  For half-integer q = l + 1/2 the two
// strings annihilate where they overlap and only i w b = -l..l survives.
inline std::vector<PtMode> pt_spectrum(cplx q, double b, int n_max) {
    if (n_max < 0) throw InvalidParameter("pt_spectrum needs n_max >= 0");
    std::vector<PtMode> out;
    auto push = [&](int n, int sign) {
        PtMode m;
        m.omega = pt_ladder_frequency(q, b, n, sign);
        m.n = n;
        m.sign = sign;
        m.parity = (n % 2 == 0) ? +1 : -1;
        m.kind = m.omega.imag() > 1e-14 ? ModeKind::Normal : ModeKind::Quasinormal;
        out.push_back(m);
    };
    double l2 = 2.0 * q.real() - 1.0;  // 2l if q = l + 1/2
    int l2i = int(std::round(l2));
    bool half_integer = std::abs(q.imag()) < 1e-12 && l2i >= 0
                        && std::abs(l2 - l2i) < 1e-12 && l2i % 2 == 0;
    if (half_integer) {
        int l = l2i / 2;
        for (int n = 0; n <= std::min(n_max, 2 * l); ++n) push(n, -1);
        return out;
    }
    for (int n = 0; n <= n_max; ++n) {
        push(n, -1);
        push(n, +1);
    }
    return out;
}

// Coefficients of the sampled partner expression for a ladder generator.
struct PtPartnerCoeffs {
    int n = 0;
    int sign = +1;
    double a_n = 0, b_n = 0, c_n = 0;  // per-width-squared amplitudes
};

inline PtPartnerCoeffs pt_partner_coeffs(double q, double b, int n, int sign) {
    if (n < 0 || (sign != 1 && sign != -1))
        throw InvalidParameter("partner index must have n >= 0, sign = +-1");
    PtPartnerCoeffs k;
    k.n = n;
    k.sign = sign;
    double s = double(sign), nn = n;
    double b2 = b * b;
    // with h = i omega_n b = n + 1/2 + s q and hypergeometric parameters
    // al = 1/2 + q - h, be = 1/2 - q - h, c = 1 - h:
    //   a_n = -2h / b^2,  b_n = al be / (2 b^2 c),  c_n = (al+1)(be+1) / (2(c+1))
    k.a_n = (-2 * nn - 1 - s * 2 * q) / b2;
    double den_b = -2 * nn + 1 - s * 2 * q;
    double den_c = 3 - 2 * nn - s * 2 * q;
    if (std::abs(den_b) < 1e-12 || std::abs(den_c) < 1e-12)
        throw DegenerateParameters("partner coefficient denominator vanishes");
    k.b_n = nn * (nn + s * 2 * q) / b2 / den_b;
    k.c_n = (nn - 1) * (nn - 1 + s * 2 * q) / den_c;
    return k;
}

// SUSY partner generated by the nodeless ladder state Phi_n^{sign}.  The
// n = 0 partners close within the family: q~ = |1 + sign*q| exactly.
inline Potential pt_partner(double q, double b, int n, int sign,
                            std::size_t npoints = 8001) {
    if (q < 0) {  // canonical labeling: flip to q >= 0 and swap the strings
        q = -q;
        sign = -sign;
    }
    if (n % 2 == 1) throw NodefulGenerator("odd ladder states have a node at x = 0");
    double vb2 = 0.25 - q * q;
    if (n == 0) {
        double qt = std::abs(1.0 + sign * q);
        return poschl_teller((0.25 - qt * qt) / (b * b), b);
    }
    cplx Om = pt_ladder_frequency(q, b, n, sign);
    if (vb2 < 0) {
        // attractive family: only even states verified nodeless for n = 0;
        // screen higher generators empirically
        const double span = 20.0 * b;
        double prev = pt_outgoing_wave(q, b, Om, -span).first.real();
        for (int i = 1; i <= 400; ++i) {
            double cur =
                pt_outgoing_wave(q, b, Om, -span + 2 * span * i / 400.0).first.real();
            if (prev * cur < 0)
                throw NodefulGenerator("ladder generator changes sign");
            prev = cur;
        }
    }
    auto k = pt_partner_coeffs(q, b, n, sign);
    auto ratio = [=](int p, double xi, double omxi) {
        // G_p = F_{n,p} / F_{n,0}, the generator's own contiguous family
        double iwb = double(n) + 0.5 + sign * q;  // i omega b, real on the axis
        auto args = [&](int pp) {
            return std::array<cplx, 3>{0.5 + q - iwb + pp, 0.5 - q - iwb + pp,
                                       1.0 - iwb + pp};
        };
        auto top = args(p), bot = args(0);
        return detail::hyp2f1_impl(top[0], top[1], top[2], xi, omxi)
               / detail::hyp2f1_impl(bot[0], bot[1], bot[2], xi, omxi);
    };
    const double hw = 40.0 * b;
    auto xs = linspace(-hw, hw, npoints);
    std::vector<double> vs(npoints);
    double v0 = vb2 / (b * b);
    for (std::size_t i = 0; i < npoints; ++i) {
        double x = xs[i];
        double u = 2.0 * x / b;
        double e = std::exp(-std::abs(u));
        double xi = u >= 0 ? 1.0 / (1.0 + e) : e / (1.0 + e);
        double omxi = 1.0 - xi;
        if (u >= 0) omxi = e / (1.0 + e);
        double sech2 = 1.0 / sq(std::cosh(x / b));
        double g1 = ratio(1, xi, omxi).real();
        double g2 = ratio(2, xi, omxi).real();
        vs[i] = (v0 + k.a_n + 4 * k.b_n * g1 * std::tanh(x / b)
                 + sech2 * (2 * b * b * k.b_n * k.b_n * g1 * g1
                            - 2 * k.b_n * k.c_n * g2))
                * sech2;
    }
    SupportInfo sup;
    sup.type = SupportInfo::Type::ExponentialTail;
    sup.halfwidth = hw;
    sup.decay_rate = 2.0 / b;
    return numeric_potential(std::move(xs), std::move(vs), sup);
}

// Wronskian of the outgoing solutions for the hyperbolic potential truncated
// to |x| <= a, in closed form.  Direct integration cannot resolve the deeper
// zero modes of a wide truncation: the Wronskian sits a factor ~e^{-2|Im w|a}
// below the solution product, under the double-precision noise floor.  Here
// the interior solution is split into its two exponential branches with the
// hypergeometric connection formula and the boundary projections
//   B = (d/dx + iw) f |_{-a},   A = (-d/dx + iw) f |_{+a}
// are assembled branch by branch, so no catastrophic cancellation occurs and
//   J(w) = e^{2iwa} (A^2 - B^2) / W(f(x), f(-x))
// is accurate to machine precision in relative terms.
inline cplx truncated_pt_wronskian(cplx q, double b, double a, cplx omega) {
    const cplx i(0, 1);
    const cplx iwb = i * omega * b;
    const cplx al = 0.5 + q - iwb, be = 0.5 - q - iwb, c = 1.0 - iwb;
    const cplx s = iwb;  // = c - al - be
    if (detail::near_integer(s))
        throw DegenerateParameters("truncated hyperbolic Wronskian at a branch degeneracy");

    // left edge x = -a: xi is exponentially small, series converge directly
    const double u = 2.0 * a / b;
    const double e = std::exp(-u);
    const double xi = e / (1.0 + e), eta = 1.0 / (1.0 + e);
    const double log_xi = -u - std::log1p(e), log_eta = -std::log1p(e);
    cplx preL = std::exp(-0.5 * iwb * (log_xi + log_eta));
    cplx F = detail::hyp2f1_series(al, be, c, xi);
    cplx Fd = al * be / c * detail::hyp2f1_series(al + 1.0, be + 1.0, c + 1.0, xi);
    cplx B = 2.0 * xi * preL * (i * omega * F + eta / b * Fd);

    // right edge x = +a: 1 - xi is exponentially small; connection formula
    // splits f into the e^{+iwx} branch (coefficient G1) and the e^{-iwx}
    // branch (coefficient G2), each projected without cancellation
    const double xiR = eta, etaR = xi;  // xi(+a) = 1 - xi(-a)
    const double log_xiR = log_eta, log_etaR = log_xi;
    cplx G1 = std::exp(detail::lgamma_c(c) + detail::lgamma_c(s) - detail::lgamma_c(c - al)
                       - detail::lgamma_c(c - be));
    cplx G2 = std::exp(detail::lgamma_c(c) + detail::lgamma_c(-s) - detail::lgamma_c(al)
                       - detail::lgamma_c(be));
    cplx Fs = detail::hyp2f1_series(al, be, 1.0 - s, etaR);
    cplx Fsd = al * be / (1.0 - s) * detail::hyp2f1_series(al + 1.0, be + 1.0, 2.0 - s, etaR);
    cplx Ft = detail::hyp2f1_series(c - al, c - be, 1.0 + s, etaR);
    cplx Ftd = (c - al) * (c - be) / (1.0 + s)
               * detail::hyp2f1_series(c - al + 1.0, c - be + 1.0, 2.0 + s, etaR);
    cplx xm = std::exp(-0.5 * iwb * log_xiR);
    cplx A = etaR * G1 * xm * std::exp(-0.5 * iwb * log_etaR)
                 * (2.0 * i * omega * Fs + 2.0 * xiR / b * Fsd)
             + G2 * xm * std::exp(0.5 * iwb * log_etaR)
                   * (2.0 * i * omega * Ft + 2.0 / b * xiR * etaR * Ftd);

    auto [f0, df0] = pt_outgoing_wave(q, b, omega, 0.0);
    cplx w0 = -2.0 * f0 * df0;  // W(f(x), f(-x)), evaluated at the origin
    if (std::abs(w0) == 0.0)
        throw DegenerateParameters("interior basis degenerates at a symmetric mode");
    cplx P2 = std::exp(2.0 * i * omega * a);
    return P2 * (A - B) * (A + B) / w0;
}

// Zero modes of the truncated hyperbolic potential on the negative imaginary
// axis, from sign changes of the closed-form Wronskian.
inline std::vector<cplx> truncated_pt_axis_modes(cplx q, double b, double a,
                                                 double kappa_min, double kappa_max,
                                                 int nscan = 800) {
    if (!(kappa_min < kappa_max) || nscan < 2)
        throw InvalidParameter("bad axis scan range");
    auto jre = [&](double k) {
        // the closed form degenerates exactly at the full-potential ladder
        // frequencies; the truncated zeros sit exponentially close to them,
        // so a tiny nudge stays well inside any bracketing interval
        try {
            return truncated_pt_wronskian(q, b, a, cplx(0, k)).real();
        } catch (const DegenerateParameters&) {
            try {
                return truncated_pt_wronskian(q, b, a, cplx(0, k + 1e-9)).real();
            } catch (const DegenerateParameters&) {
                return truncated_pt_wronskian(q, b, a, cplx(0, k + 1e-6)).real();
            }
        }
    };
    std::vector<cplx> roots;
    double prev_k = kappa_min, prev_j = jre(prev_k);
    for (int n = 1; n <= nscan; ++n) {
        double k = kappa_min + (kappa_max - kappa_min) * n / nscan;
        double j = jre(k);
        if (prev_j == 0.0) roots.push_back(cplx(0, prev_k));
        else if (prev_j * j < 0) {
            double lo = prev_k, hi = k, jlo = prev_j;
            for (int it = 0; it < 80; ++it) {
                double mid = 0.5 * (lo + hi), jm = jre(mid);
                if (jlo * jm <= 0) hi = mid;
                else { lo = mid; jlo = jm; }
            }
            roots.push_back(cplx(0, 0.5 * (lo + hi)));
        }
        prev_k = k;
        prev_j = j;
    }
    return roots;
}

// Members of the chain of potentials sharing the free field's transmission:
// b^2 V = -l(l+1), q = l + 1/2, carrying l bound states.
inline Potential free_field_ladder(int l, double b = 1.0) {
    if (l < 1) throw InvalidParameter("free-field ladder starts at l = 1");
    return poschl_teller(-double(l) * (l + 1) / (b * b), b);
}

}  // namespace qnmsusy
