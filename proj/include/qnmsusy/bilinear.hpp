#pragma once

#include <cmath>
#include <vector>

#include "qnmsusy/common.hpp"
#include "qnmsusy/propagation.hpp"
#include "qnmsusy/spectral.hpp"
#include "qnmsusy/susy.hpp"

namespace qnmsusy {

// Two-component state (psi, dt psi) sampled on a uniform grid [-a, a]
// (odd point count, so composite Simpson applies directly).
struct TwoComponentState {
    std::vector<double> grid;
    std::vector<cplx> c1, c2;

    double a() const { return grid.back(); }
    std::size_t size() const { return grid.size(); }
};

namespace detail {

inline void require_compatible(const TwoComponentState& u, const TwoComponentState& v) {
    if (u.size() != v.size() || u.grid.front() != v.grid.front()
        || u.grid.back() != v.grid.back())
        throw GridMismatch("bilinear map needs states on identical grids");
}

template <typename F>
cplx simpson(const std::vector<double>& xs, F&& f) {
    std::size_t n = xs.size();
    if (n < 3 || n % 2 == 0)
        throw InvalidParameter("quadrature needs an odd number of grid points");
    double h = (xs.back() - xs.front()) / double(n - 1);
    cplx s = f(0) + f(n - 1);
    for (std::size_t i = 1; i + 1 < n; ++i) s += f(i) * (i % 2 ? 4.0 : 2.0);
    return s * (h / 3.0);
}

}  // namespace detail

// Eigenstate at frequency omega as a two-component vector: dt phi = -i w phi.
inline TwoComponentState eigenstate(const OutgoingSolution& sol, cplx omega, double a,
                                    std::size_t npoints = 2001) {
    if (npoints % 2 == 0) ++npoints;
    TwoComponentState st;
    st.grid = linspace(-a, a, npoints);
    st.c1.resize(npoints);
    st.c2.resize(npoints);
    const cplx miw = cplx(0, -1) * omega;
    for (std::size_t i = 0; i < npoints; ++i) {
        st.c1[i] = sol.value(st.grid[i]);
        st.c2[i] = miw * st.c1[i];
    }
    return st;
}

// The open-system surrogate inner product: symmetric, complex bilinear, with
// surface terms that absorb the outgoing boundary flux.
inline cplx bilinear(const TwoComponentState& u, const TwoComponentState& v) {
    detail::require_compatible(u, v);
    cplx integral = detail::simpson(u.grid, [&](std::size_t i) {
        return u.c1[i] * v.c2[i] + u.c2[i] * v.c1[i];
    });
    cplx surface = u.c1.front() * v.c1.front() + u.c1.back() * v.c1.back();
    return cplx(0, 1) * (integral + surface);
}

// Zeldovich normalization of a mode: 2 w int phi^2 + i [phi(-a)^2 + phi(a)^2].
inline cplx mode_norm(const OutgoingSolution& sol, cplx omega, double a,
                      std::size_t npoints = 2001) {
    auto st = eigenstate(sol, omega, a, npoints);
    cplx n = bilinear(st, st);
    if (std::abs(n) < 1e-10 * (1.0 + std::norm(omega)))
        throw ZeroNorm("mode has vanishing bilinear norm (doubled-mode candidate)");
    return n;
}

// First-order frequency shift under V -> V + dV: dw = int phi^2 dV / (phi, phi).
// The bilinear norm already carries the 2w of the quadratic eigenproblem.
template <typename DV>
cplx perturbation_shift(const OutgoingSolution& sol, cplx omega, double a, DV&& dv,
                        std::size_t npoints = 2001) {
    auto st = eigenstate(sol, omega, a, npoints);
    cplx num = detail::simpson(st.grid, [&](std::size_t i) {
        return st.c1[i] * st.c1[i] * dv(st.grid[i]);
    });
    cplx den = bilinear(st, st);
    if (std::abs(den) == 0.0) throw ZeroNorm("perturbation theory fails at zero norm");
    return num / den;
}

// Expansion coefficient of psi on the mode phi_n: (phi_n, psi)/(phi_n, phi_n).
inline cplx project(const TwoComponentState& mode, const TwoComponentState& psi) {
    cplx den = bilinear(mode, mode);
    if (std::abs(den) == 0.0) throw ZeroNorm("cannot project on a zero-norm mode");
    return bilinear(mode, psi) / den;
}

// Residual of the symmetry (Hu, v) = (u, Hv) of the first-order evolution
// operator H = i [[0, 1], [d_xx - V, 0]] under the bilinear map.
inline double evolution_symmetry_residual(const Potential& p, const TwoComponentState& u,
                                          const TwoComponentState& v) {
    detail::require_compatible(u, v);
    const std::size_t n = u.size();
    const double h = (u.grid.back() - u.grid.front()) / double(n - 1);
    auto apply_h = [&](const TwoComponentState& s) {
        TwoComponentState r = s;
        for (std::size_t i = 0; i < n; ++i) {
            cplx lap;
            if (i >= 2 && i + 2 < n)  // fourth-order interior stencil
                lap = (-s.c1[i - 2] + 16.0 * s.c1[i - 1] - 30.0 * s.c1[i]
                       + 16.0 * s.c1[i + 1] - s.c1[i + 2]) / (12.0 * h * h);
            else if (i >= 1 && i + 1 < n)
                lap = (s.c1[i - 1] - 2.0 * s.c1[i] + s.c1[i + 1]) / (h * h);
            else  // one-sided second difference at the edges
                lap = (i == 0)
                        ? (s.c1[0] - 2.0 * s.c1[1] + s.c1[2]) / (h * h)
                        : (s.c1[n - 3] - 2.0 * s.c1[n - 2] + s.c1[n - 1]) / (h * h);
            r.c1[i] = cplx(0, 1) * s.c2[i];
            r.c2[i] = cplx(0, 1) * (lap - p(u.grid[i]) * s.c1[i]);
        }
        return r;
    };
    cplx lhs = bilinear(apply_h(u), v);
    cplx rhs = bilinear(u, apply_h(v));
    return std::abs(lhs - rhs);
}

// (f(w_n), g(w_n)) = -dJ_q/dw at an eigenfrequency; both sides returned for
// verification purposes.
struct WronskianDerivativeCheck {
    cplx bilinear_fg;
    cplx minus_dj;
};

inline WronskianDerivativeCheck wronskian_derivative_identity(
        const Potential& p, cplx omega, double a, std::size_t npoints = 4001,
        double xn = 0.0) {
    PropagationOptions popt;
    popt.truncation_radius = xn > 0 ? xn : std::max(a, default_truncation_radius(p));
    auto f = propagate_outgoing(p, omega, Side::Left, popt);
    auto g = propagate_outgoing(p, omega, Side::Right, popt);
    auto sf = eigenstate(f, omega, a, npoints);
    auto sg = eigenstate(g, omega, a, npoints);
    WronskianDerivativeCheck out;
    out.bilinear_fg = bilinear(sf, sg);
    WronskianOptions wopt;
    wopt.truncation_radius = popt.truncation_radius;
    auto [j, dj] = wronskian_with_derivative(p, omega, WronskianType::Quasinormal, wopt);
    (void)j;
    out.minus_dj = -dj.to_cplx();
    return out;
}

// Norm ratio between a mode pushed through the intertwiner and itself:
// (A phi, A phi)/(phi, phi) = w^2 - Omega^2.
inline cplx susy_norm_ratio(const Generator& gen, cplx omega, double a,
                            std::size_t npoints = 4001, double xn = 0.0) {
    if (std::abs(omega * omega - gen.Omega * gen.Omega) < 1e-12 * (1.0 + std::norm(omega)))
        throw DegenerateEigenvalue("mode shares the generator eigenvalue");
    PropagationOptions popt;
    popt.truncation_radius = xn > 0 ? xn : std::max(a, default_truncation_radius(gen.base));
    auto sol = propagate_outgoing(gen.base, omega, Side::Right, popt);

    TwoComponentState base = eigenstate(sol, omega, a, npoints);
    TwoComponentState mapped = base;
    const cplx miw = cplx(0, -1) * omega;
    for (std::size_t i = 0; i < base.size(); ++i) {
        auto [pv, pd] = sol.at(base.grid[i]);
        auto [tv, td] = apply_intertwiner(gen, base.grid[i], omega, pv, pd);
        (void)td;
        mapped.c1[i] = tv;
        mapped.c2[i] = miw * tv;
    }
    cplx den = bilinear(base, base);
    if (std::abs(den) == 0.0) throw ZeroNorm("zero-norm mode");
    return bilinear(mapped, mapped) / den;
}

// ---- Jordan-block machinery at a doubled partner mode --------------------

// Unnormalized partner Wronskian built by pushing f and g through A; the
// power-of-two scale is dropped because only ratios at nearby frequencies
// are ever formed.
inline cplx intertwined_wronskian(const Generator& gen, cplx omega, double xn,
                                  double x_eval = 0.0) {
    WaveState f = propagate_to_point(gen.base, omega, Side::Left, xn, x_eval);
    WaveState g = propagate_to_point(gen.base, omega, Side::Right, xn, x_eval);
    auto [fv, fd] = apply_intertwiner(gen, x_eval, omega, f.value(), f.deriv());
    auto [gv, gd] = apply_intertwiner(gen, x_eval, omega, g.value(), g.deriv());
    return fd * gv - fv * gd;
}

struct JordanBlockRatios {
    cplx norm_ratio;   // (Psi~_{j,1}, Psi~_{j,0}) / (Psi_j, Psi_j); equals -2 Omega
    cplx chain_ratio;  // reverse-block norm over the cross term; also -2 Omega
    // Norm of the reverse-transformed state over the original: 4 Omega^2.
    cplx reverse_ratio() const { return norm_ratio * chain_ratio; }
};

// Ratios characterizing the doubled mode the transformation creates at
// omega = -Omega when the base system has a QNM there.
inline JordanBlockRatios jordan_block_ratios(const Generator& gen, double xn,
                                             double h_rel = 1e-3) {
    const cplx Om = gen.Omega;  // iK
    const cplx w0 = -Om;        // doubled-mode frequency
    const double h = h_rel * (1.0 + std::abs(w0));

    auto ju = [&](cplx w) { return intertwined_wronskian(gen, w, xn); };
    WronskianOptions wopt;
    wopt.truncation_radius = xn;
    auto jq = [&](cplx w) { return wronskian(gen.base, w, WronskianType::Quasinormal, wopt); };

    cplx jup = ju(w0 + h), jum = ju(w0 - h), ju0 = ju(w0);
    cplx d2ju = (jup - 2.0 * ju0 + jum) / (h * h);
    cplx djq = (jq(w0 + h) - jq(w0 - h)) / (2.0 * h);
    if (std::abs(djq) == 0.0) throw NotADoubleZero("base Wronskian is not simple at -Omega");
    JordanBlockRatios out;
    out.norm_ratio = (-0.5 * d2ju) / (-djq);

    // reverse transform: Ju_bar(w) = (w^2 - Omega^2) Jq~(w) with the factor
    // (w + Omega)^2 removed, against -1/2 d2 of Jq~ = Ju/(w - Omega)^2
    auto jqt = [&](cplx w) { return ju(w) / sq(w - Om); };
    auto jbar_red = [&](cplx w) { return (w - Om) / (w + Om) * ju(w) / sq(w - Om); };
    cplx djbar = (jbar_red(w0 + h) - jbar_red(w0 - h)) / (2.0 * h);
    cplx d2jqt = (jqt(w0 + h) - 2.0 * jqt(w0) + jqt(w0 - h)) / (h * h);
    if (std::abs(d2jqt) == 0.0) throw NotADoubleZero("partner Wronskian lacks a double zero");
    out.chain_ratio = (-djbar) / (-0.5 * d2jqt);
    return out;
}

// Two-component Jordan-block basis at the doubled partner mode -Omega:
// the mode itself and its frequency-derivative companion, which carries the
// t e^{i Omega t} time dependence. Momenta: mode -> i Omega * mode;
// companion -> -i(-Omega * companion + mode).
struct JordanBlockPair {
    TwoComponentState mode;       // A f(-Omega, x)
    TwoComponentState companion;  // d/dw [A f(w, x)] at -Omega
};

inline JordanBlockPair jordan_block_pair(const Generator& gen, double xn, double a,
                                         std::size_t npoints = 2001,
                                         double h_omega = 1e-5) {
    if (npoints % 2 == 0) ++npoints;
    const cplx Om = gen.Omega;
    const cplx w0 = -Om;
    JordanBlockPair out;
    out.mode.grid = out.companion.grid = linspace(-a, a, npoints);
    out.mode.c1.resize(npoints);
    out.mode.c2.resize(npoints);
    out.companion.c1.resize(npoints);
    out.companion.c2.resize(npoints);
    PropagationOptions popt;
    popt.truncation_radius = xn;
    popt.npoints = npoints;  // keep interpolation error below quadrature error
    auto s0 = propagate_outgoing(gen.base, w0, Side::Left, popt);
    auto sp = propagate_outgoing(gen.base, w0 + h_omega, Side::Left, popt);
    auto sm = propagate_outgoing(gen.base, w0 - h_omega, Side::Left, popt);
    auto mapped = [&](const OutgoingSolution& s, cplx w, double x) {
        auto [v, d] = s.at(x);
        return apply_intertwiner(gen, x, w, v, d).first;
    };
    for (std::size_t i = 0; i < npoints; ++i) {
        double x = out.mode.grid[i];
        cplx m0 = mapped(s0, w0, x);
        cplx dm = (mapped(sp, w0 + h_omega, x) - mapped(sm, w0 - h_omega, x))
                  / (2.0 * h_omega);
        out.mode.c1[i] = m0;
        out.mode.c2[i] = cplx(0, 1) * Om * m0;
        out.companion.c1[i] = dm;
        out.companion.c2[i] = cplx(0, -1) * (-Om * dm + m0);
    }
    return out;
}

// Direct two-component evaluation of (Psi~_{j,1}, Psi~_{j,0}) / (Psi_j, Psi_j),
// with the pre-image mode normalized as the left-outgoing solution itself.
inline cplx jordan_norm_direct(const Generator& gen, double xn, double a,
                               std::size_t npoints = 2001) {
    auto pair = jordan_block_pair(gen, xn, a, npoints);
    PropagationOptions popt;
    popt.truncation_radius = xn;
    popt.npoints = npoints;
    auto base = propagate_outgoing(gen.base, -gen.Omega, Side::Left, popt);
    auto st = eigenstate(base, -gen.Omega, a, npoints);
    cplx den = bilinear(st, st);
    if (std::abs(den) == 0.0) throw ZeroNorm("pre-image mode has zero norm");
    return bilinear(pair.companion, pair.mode) / den;
}

}  // namespace qnmsusy
