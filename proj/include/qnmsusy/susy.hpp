#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <utility>

#include "qnmsusy/common.hpp"
#include "qnmsusy/potential.hpp"
#include "qnmsusy/propagation.hpp"
#include "qnmsusy/spectral.hpp"

namespace qnmsusy {

// Asymptotic behavior of the generator on one side: purely decaying, purely
// increasing, or a genuine mixture of e^{+-Kx}.
enum class BoundaryClass { Decaying, Increasing, Mixed };

enum class SusyType {
    Type1,   // generator is a normal mode (decaying/decaying)
    Type2,   // generator is a zero-mode QNM (increasing/increasing)
    Type3L,  // generator is a left total-transmission mode (D/I)
    Type3R,  // generator is a right total-transmission mode (I/D)
    Type4,   // mixed boundary conditions, continuous family
};

// Signed real value with a separate power-of-two exponent.
struct ScaledReal {
    double m = 0.0;
    double log2s = 0.0;
    bool zero() const { return m == 0.0; }
    double to_double() const { return m * std::exp2(log2s); }
};

inline double scaled_ratio(const ScaledReal& num, const ScaledReal& den) {
    if (den.zero()) throw InvalidParameter("scaled ratio with zero denominator");
    return (num.m / den.m) * std::exp2(num.log2s - den.log2s);
}

struct SpectralDelta {
    int nm = 0, qnm = 0, ttm_left = 0, ttm_right = 0;
};

namespace detail {

// Dense generator data: the tabulated eigenfunction plus its exact tail
// coefficients Phi = grow * e^{+Kx} + decay * e^{-Kx} on each side.
struct PhiData {
    OutgoingSolution sol;
    double xn = 0, K = 0;
    // right tail: Phi = Cr e^{Kx} + Dr e^{-Kx};  left: Phi = Al e^{Kx} + Bl e^{-Kx}
    ScaledReal Cr, Dr, Al, Bl;

    double w_at(double x) const {
        if (x > xn) {
            if (Cr.zero()) return K;
            if (Dr.zero()) return -K;
            double u = (Dr.m / Cr.m) * std::exp2(Dr.log2s - Cr.log2s) * std::exp(-2 * K * x);
            return -K * (1 - u) / (1 + u);
        }
        if (x < -xn) {
            if (Bl.zero()) return -K;
            if (Al.zero()) return K;
            double t = (Al.m / Bl.m) * std::exp2(Al.log2s - Bl.log2s) * std::exp(2 * K * x);
            return K * (1 - t) / (1 + t);
        }
        auto [v, d, s] = sol.at_scaled(x);
        (void)s;
        if (std::abs(v.real()) < 1e-280)
            throw SingularPoint("superpotential evaluated at a node of the generator");
        return -d.real() / v.real();
    }
};

inline ScaledReal exp_scaled_real(double w) {
    WaveState s = exp_scaled(cplx(w, 0));
    return {s.phi.real(), s.log2scale};
}

}  // namespace detail

// A Darboux/SUSY generator: nodeless real solution Phi of H Phi = Omega^2 Phi
// with Omega^2 = -K^2, carried as its superpotential W = -Phi'/Phi.
class Generator {
public:
    Potential base;
    cplx Omega;
    double K = 0;
    SusyType type = SusyType::Type1;
    BoundaryClass left = BoundaryClass::Decaying, right = BoundaryClass::Decaying;
    std::function<double(double)> w_fun;
    std::shared_ptr<const detail::PhiData> phi;  // null for inverted generators

    double w(double x) const { return w_fun(x); }
    // exact Riccati derivative: W' = W^2 + Omega^2 - V
    double w_prime(double x) const { return sq(w(x)) - K * K - base(x); }

    // asymptotic superpotential constants controlling boundary transforms
    double w_minus() const { return left == BoundaryClass::Decaying ? -K : K; }
    double w_plus() const { return right == BoundaryClass::Decaying ? K : -K; }

    // mixed-boundary coefficient ratio d/c on the right tail
    double mix_ratio() const {
        if (!phi || phi->Cr.zero())
            throw InvalidParameter("mix ratio only defined for mixed-tail generators");
        return scaled_ratio(phi->Dr, phi->Cr);
    }

    Potential partner() const;
    Generator inverted() const;
};

inline SpectralDelta spectral_delta(SusyType t) {
    switch (t) {
        case SusyType::Type1: return {-1, +1, 0, 0};
        case SusyType::Type2: return {+1, -1, 0, 0};
        case SusyType::Type3L: return {0, 0, -1, +1};
        case SusyType::Type3R: return {0, 0, +1, -1};
        default:
            throw Type4NotTabulated("mixed-boundary transformations have no fixed spectral delta");
    }
}

inline Potential Generator::partner() const {
    const double K2 = K * K;
    Generator self = *this;  // cheap: shared potential impl + shared phi data
    auto val = [self, K2](double x) { return 2 * (sq(self.w(x)) - K2) - self.base(x); };
    auto der = [self](double x) { return 4 * self.w(x) * self.w_prime(x) - self.base.derivative(x); };

    SupportInfo bs = base.support();
    SupportInfo sup = bs;
    bool pure = left != BoundaryClass::Mixed && right != BoundaryClass::Mixed;
    if (bs.type == SupportInfo::Type::Finite) {
        if (!pure) sup = {SupportInfo::Type::ExponentialTail, bs.halfwidth, 2 * K};
    } else if (bs.type == SupportInfo::Type::ExponentialTail) {
        if (!pure) sup.decay_rate = std::min(bs.decay_rate, 2 * K);
    }
    return function_potential(val, der, sup, base.singularities());
}

inline Generator Generator::inverted() const {
    Generator inv;
    inv.base = partner();
    inv.Omega = Omega;
    inv.K = K;
    auto fwd = w_fun;
    inv.w_fun = [fwd](double x) { return -fwd(x); };
    auto flip = [](BoundaryClass c) {
        return c == BoundaryClass::Mixed ? BoundaryClass::Decaying
             : c == BoundaryClass::Decaying ? BoundaryClass::Increasing
                                            : BoundaryClass::Decaying;
    };
    inv.left = flip(left);
    inv.right = flip(right);
    switch (type) {
        case SusyType::Type1: inv.type = SusyType::Type2; break;
        case SusyType::Type2: inv.type = SusyType::Type1; break;
        case SusyType::Type3L: inv.type = SusyType::Type3R; break;
        case SusyType::Type3R: inv.type = SusyType::Type3L; break;
        case SusyType::Type4: inv.type = SusyType::Type1; break;  // 1/Phi decays both ways
    }
    return inv;
}

struct GeneratorOptions {
    double truncation_radius = 0.0;
    std::size_t npoints = 2401;
    double eig_tol = 1e-5;  // |J(Omega)| relative to a nearby reference value
};

namespace detail {

inline void screen_nodes(const OutgoingSolution& sol) {
    double prev = 0;
    double peak = 0;
    for (std::size_t i = 0; i < sol.grid.size(); ++i)
        peak = std::max(peak, std::abs(sol.val[i].real()));
    for (std::size_t i = 0; i < sol.grid.size(); ++i) {
        double cur = sol.val[i].real();
        if (prev * cur < 0.0)
            throw NodefulGenerator("generator changes sign; a nodeless function is required");
        if (cur != 0.0) prev = cur;
    }
}

inline void extract_tails(PhiData& d, SusyType type) {
    const double K = d.K, xn = d.xn;
    {
        auto [v, dv, s] = d.sol.at_scaled(xn);
        double phi = v.real(), dphi = dv.real();
        ScaledReal em = exp_scaled_real(-K * xn), ep = exp_scaled_real(K * xn);
        d.Cr = {(dphi + K * phi) / (2 * K) * em.m, s + em.log2s};
        d.Dr = {(K * phi - dphi) / (2 * K) * ep.m, s + ep.log2s};
    }
    {
        auto [v, dv, s] = d.sol.at_scaled(-xn);
        double phi = v.real(), dphi = dv.real();
        ScaledReal em = exp_scaled_real(-K * xn), ep = exp_scaled_real(K * xn);
        d.Al = {(dphi + K * phi) / (2 * K) * ep.m, s + ep.log2s};
        d.Bl = {(K * phi - dphi) / (2 * K) * em.m, s + em.log2s};
    }
    // boundary classes known exactly by construction: zero the dead component
    // so roundoff admixtures cannot pollute the tails
    switch (type) {
        case SusyType::Type1: d.Cr = {}; d.Bl = {}; break;   // D/D
        case SusyType::Type2: d.Dr = {}; d.Al = {}; break;   // I/I
        case SusyType::Type3L: d.Dr = {}; d.Bl = {}; break;  // D . I
        case SusyType::Type3R: d.Cr = {}; d.Al = {}; break;  // I . D
        case SusyType::Type4: break;
    }
}

inline Generator finish_generator(const Potential& V, cplx Omega, SusyType type,
                                  BoundaryClass lc, BoundaryClass rc,
                                  OutgoingSolution&& sol, double xn) {
    screen_nodes(sol);
    auto data = std::make_shared<PhiData>();
    data->sol = std::move(sol);
    data->xn = xn;
    data->K = std::abs(Omega.imag());
    extract_tails(*data, type);

    Generator g;
    g.base = V;
    g.Omega = Omega;
    g.K = data->K;
    g.type = type;
    g.left = lc;
    g.right = rc;
    g.phi = data;
    g.w_fun = [data](double x) { return data->w_at(x); };
    return g;
}

inline void check_eigenvalue(const Potential& V, cplx omega, WronskianType wtype,
                             double xn, double tol) {
    WronskianOptions wopt;
    wopt.truncation_radius = xn;
    ScaledComplex j = wronskian_scaled(V, omega, wtype, wopt);
    cplx probe = omega + cplx(0.13, 0.11) * 0.5 * (1.0 + std::abs(omega));
    ScaledComplex jr = wronskian_scaled(V, probe, wtype, wopt).rebased(j.log2s);
    if (!(std::abs(j.m) < tol * std::abs(jr.m)))
        throw NotAnEigenvalue("the requested frequency is not a zero of the relevant Wronskian");
}

}  // namespace detail

// Build a generator of Types 1-3 from an eigenfrequency on the imaginary axis.
inline Generator make_generator(const Potential& V, cplx omega, SusyType type,
                                const GeneratorOptions& opt = {}) {
    if (type == SusyType::Type4)
        throw InvalidParameter("mixed generators are built with make_symmetric_generator");
    if (std::abs(omega.real()) > 1e-10 * (1.0 + std::abs(omega)))
        throw ComplexOmegaSquared("generator eigenvalue must be real: omega must be imaginary");
    double K = std::abs(omega.imag());
    if (K < 1e-12) throw OmegaZeroUnsupported("omega = 0 is not usable as a generator");
    omega = cplx(0.0, omega.imag());

    double xn = opt.truncation_radius > 0 ? opt.truncation_radius
                                          : default_truncation_radius(V);
    PropagationOptions popt;
    popt.truncation_radius = xn;
    popt.npoints = opt.npoints;

    switch (type) {
        case SusyType::Type1: {
            if (!(omega.imag() > 0))
                throw InvalidParameter("a Type-1 generator is a normal mode: Im(omega) > 0");
            detail::check_eigenvalue(V, omega, WronskianType::Quasinormal, xn, opt.eig_tol);
            auto sol = propagate_outgoing(V, omega, Side::Right, popt);
            return detail::finish_generator(V, omega, type, BoundaryClass::Decaying,
                                            BoundaryClass::Decaying, std::move(sol), xn);
        }
        case SusyType::Type2: {
            if (!(omega.imag() < 0))
                throw InvalidParameter("a Type-2 generator is a zero mode: Im(omega) < 0");
            detail::check_eigenvalue(V, omega, WronskianType::Quasinormal, xn, opt.eig_tol);
            auto sol = propagate_outgoing(V, omega, Side::Right, popt);
            return detail::finish_generator(V, omega, type, BoundaryClass::Increasing,
                                            BoundaryClass::Increasing, std::move(sol), xn);
        }
        case SusyType::Type3L: {
            if (!(omega.imag() < 0))
                throw InvalidParameter("a total-transmission generator needs Im(omega) < 0");
            detail::check_eigenvalue(V, omega, WronskianType::LeftTotal, xn, opt.eig_tol);
            auto sol = propagate_outgoing(V, omega, Side::Right, popt);
            return detail::finish_generator(V, omega, type, BoundaryClass::Decaying,
                                            BoundaryClass::Increasing, std::move(sol), xn);
        }
        case SusyType::Type3R: {
            if (!(omega.imag() < 0))
                throw InvalidParameter("a total-transmission generator needs Im(omega) < 0");
            detail::check_eigenvalue(V, omega, WronskianType::RightTotal, xn, opt.eig_tol);
            auto sol = propagate_outgoing(V, omega, Side::Left, popt);
            return detail::finish_generator(V, omega, type, BoundaryClass::Increasing,
                                            BoundaryClass::Decaying, std::move(sol), xn);
        }
        default: throw InvalidParameter("unknown generator type");
    }
}

// Type-4 generator with symmetric mixed tails: the even real solution of
// H Phi = -K^2 Phi for a symmetric potential, normalized to Phi(0) = 1.
inline Generator make_symmetric_generator(const Potential& V, double K,
                                          const GeneratorOptions& opt = {}) {
    if (!(K > 0)) throw OmegaZeroUnsupported("mixing construction needs K > 0");
    for (double x : {0.31, 0.77, 1.13})
        if (std::abs(V(x) - V(-x)) > 1e-10 * (1.0 + std::abs(V(x))))
            throw InvalidParameter("symmetric mixed generator requires an even potential");

    double xn = opt.truncation_radius > 0 ? opt.truncation_radius
                                          : default_truncation_radius(V);
    cplx omega(0.0, -K);

    OutgoingSolution sol;
    sol.side = Side::Right;
    sol.omega = omega;
    sol.grid = detail::build_grid(V, xn, opt.npoints);
    const std::size_t n = sol.grid.size();
    sol.val.assign(n, 0);
    sol.der.assign(n, 0);
    sol.scale.assign(n, 0);

    // locate x = 0 (present in the symmetric grid by construction)
    std::size_t i0 = std::size_t(std::lower_bound(sol.grid.begin(), sol.grid.end(), -1e-14)
                                 - sol.grid.begin());
    if (std::abs(sol.grid[i0]) > 1e-12)
        throw InvalidParameter("symmetric grid does not contain the origin");

    OdeOptions oo;
    WaveState s;
    s.phi = 1.0;
    s.dphi = 0.0;
    sol.val[i0] = s.phi;
    for (std::size_t k = i0 + 1; k < n; ++k) {
        detail::advance(V, omega, s, sol.grid[k - 1], sol.grid[k], oo);
        sol.val[k] = s.phi;
        sol.der[k] = s.dphi;
        sol.scale[k] = s.log2scale;
    }
    s = WaveState{1.0, 0.0, 0.0};
    for (std::size_t k = i0; k-- > 0;) {
        detail::advance(V, omega, s, sol.grid[k + 1], sol.grid[k], oo);
        sol.val[k] = s.phi;
        sol.der[k] = s.dphi;
        sol.scale[k] = s.log2scale;
    }
    return detail::finish_generator(V, omega, SusyType::Type4, BoundaryClass::Mixed,
                                    BoundaryClass::Mixed, std::move(sol), xn);
}

// The intertwiner A = d/dx + W maps H-solutions at omega to partner solutions:
// returns (A phi, (A phi)') given (phi, phi') at x.
inline std::pair<cplx, cplx> apply_intertwiner(const Generator& g, double x, cplx omega,
                                               cplx phi, cplx dphi) {
    double W = g.w(x), Wp = g.w_prime(x);
    cplx tphi = dphi + W * phi;
    cplx tdphi = (g.base(x) - omega * omega + Wp) * phi + W * dphi;
    return {tphi, tdphi};
}

// Exact transform law for the Wronskians under the Darboux map.
inline cplx wronskian_prefactor(const Generator& g, cplx omega, WronskianType type) {
    const cplx i(0, 1);
    const double K = g.K, Wm = g.w_minus(), Wp = g.w_plus();
    cplx num = (omega + i * K) * (omega - i * K);
    cplx den;
    switch (type) {
        case WronskianType::Quasinormal: den = (omega + i * Wm) * (omega - i * Wp); break;
        case WronskianType::LeftTotal: den = (-omega + i * Wm) * (omega - i * Wp); break;
        case WronskianType::RightTotal: den = (omega + i * Wm) * (-omega - i * Wp); break;
    }
    if (std::abs(den) < 1e-12 * sq(1.0 + std::abs(omega)))
        throw PrefactorPole("Wronskian transform prefactor has a pole at this frequency");
    return num / den;
}

inline cplx transform_wronskian(const Generator& g, cplx omega, cplx j, WronskianType type) {
    return wronskian_prefactor(g, omega, type) * j;
}

// One-parameter family of potentials mapped onto scaled copies of themselves,
// V~ = alpha V: W = -K tanh(K beta x) with beta = (alpha-1)/(alpha+1).
struct SelfReplicatingPair {
    double alpha, beta, K;
    Potential v, v_partner;
    std::function<double(double)> phi;  // generator, (cosh K beta x)^{1/beta}
};

inline SelfReplicatingPair self_replicating_pair(double alpha, double K) {
    if (std::abs(alpha - 1.0) < 1e-12)
        throw AlphaOne("alpha = 1 makes the scaling map degenerate");
    if (!(K > 0)) throw InvalidParameter("K must be positive");
    double beta = (alpha - 1.0) / (alpha + 1.0);
    SelfReplicatingPair out;
    out.alpha = alpha;
    out.beta = beta;
    out.K = K;
    double s = (beta - 1.0) * K * K;   // strength of V = (beta-1) K^2 sech^2(K beta x)
    double width = 1.0 / (K * std::abs(beta));
    out.v = poschl_teller(s, width);
    out.v_partner = poschl_teller((-beta - 1.0) * K * K, width);
    out.phi = [K, beta](double x) { return std::pow(std::cosh(K * beta * x), 1.0 / beta); };
    return out;
}

}  // namespace qnmsusy
