#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "qnmsusy/common.hpp"
#include "qnmsusy/tortoise.hpp"

namespace qnmsusy {

enum class PotentialKind {
    Free,
    PiecewiseConstant,
    PoschlTeller,
    TruncatedPoschlTeller,
    ReggeWheeler,
    Zerilli,
    Numeric,
};

struct SupportInfo {
    enum class Type { Finite, ExponentialTail, AlgebraicTail };
    Type type = Type::Finite;
    double halfwidth = 0.0;   // Finite: V == 0 for |x| > halfwidth
    double decay_rate = 0.0;  // ExponentialTail: |V| ~ e^{-decay_rate |x|}
};

struct PTParams {
    double strength;  // cal-V
    double width;     // b
    // q^2 + b^2 V = 1/4; q reported with nonnegative real part, purely
    // imaginary when b^2 V > 1/4.
    cplx q() const {
        double s = 0.25 - width * width * strength;
        return s >= 0 ? cplx(std::sqrt(s), 0) : cplx(0, std::sqrt(-s));
    }
};

struct BHParams {
    double mass;
    int l;
    double n() const { return 0.5 * (l - 1) * (l + 2); }
};

namespace detail {

struct PiecewiseData {
    // vals[i] is the value on [breaks[i-1], breaks[i]); vals.front() holds for
    // x < breaks.front(), vals.back() for x >= breaks.back().  Value at a jump
    // is taken from the right segment.
    std::vector<double> breaks;
    std::vector<double> vals;

    std::size_t segment(double x) const {
        return std::size_t(std::upper_bound(breaks.begin(), breaks.end(), x) - breaks.begin());
    }
    double value(double x) const { return vals[segment(x)]; }
};

struct PotentialImpl {
    PotentialKind kind;
    SupportInfo support;
    std::vector<double> singularities;

    virtual ~PotentialImpl() = default;
    virtual double value(double x) const = 0;
    virtual double deriv(double x) const = 0;
    virtual const PiecewiseData* piecewise() const { return nullptr; }
};

struct FreeImpl final : PotentialImpl {
    FreeImpl() {
        kind = PotentialKind::Free;
        support = {SupportInfo::Type::Finite, 0.0, 0.0};
    }
    double value(double) const override { return 0.0; }
    double deriv(double) const override { return 0.0; }
};

struct PiecewiseImpl final : PotentialImpl {
    PiecewiseData data;
    explicit PiecewiseImpl(PiecewiseData d) : data(std::move(d)) {
        kind = PotentialKind::PiecewiseConstant;
        singularities = data.breaks;
        double hw = std::max(std::abs(data.breaks.front()), std::abs(data.breaks.back()));
        support = {SupportInfo::Type::Finite, hw, 0.0};
    }
    double value(double x) const override { return data.value(x); }
    double deriv(double x) const override {
        for (double s : singularities)
            if (std::abs(x - s) < 1e-12 * (1.0 + std::abs(s)))
                throw SingularPoint("derivative at a jump of a piecewise potential");
        return 0.0;
    }
    const PiecewiseData* piecewise() const override { return &data; }
};

struct PoschlTellerImpl final : PotentialImpl {
    PTParams p;
    explicit PoschlTellerImpl(PTParams params) : p(params) {
        kind = PotentialKind::PoschlTeller;
        support = {SupportInfo::Type::ExponentialTail, 0.0, 2.0 / p.width};
    }
    double value(double x) const override {
        double c = std::cosh(x / p.width);
        return p.strength / (c * c);
    }
    double deriv(double x) const override {
        double u = x / p.width;
        double c = std::cosh(u);
        return -2.0 * p.strength * std::tanh(u) / (p.width * c * c);
    }
};

struct TruncatedPTImpl final : PotentialImpl {
    PTParams p;
    double a;
    TruncatedPTImpl(PTParams params, double cutoff) : p(params), a(cutoff) {
        kind = PotentialKind::TruncatedPoschlTeller;
        support = {SupportInfo::Type::Finite, a, 0.0};
        singularities = {-a, a};
    }
    double value(double x) const override {
        if (std::abs(x) >= a) return 0.0;
        double c = std::cosh(x / p.width);
        return p.strength / (c * c);
    }
    double deriv(double x) const override {
        for (double s : singularities)
            if (std::abs(x - s) < 1e-12 * (1.0 + std::abs(s)))
                throw SingularPoint("derivative at the truncation radius");
        if (std::abs(x) > a) return 0.0;
        double u = x / p.width;
        double c = std::cosh(u);
        return -2.0 * p.strength * std::tanh(u) / (p.width * c * c);
    }
};

// Black-hole potentials, parameterized by the tortoise coordinate x.
struct BlackHoleImpl final : PotentialImpl {
    BHParams p;
    TortoiseMap map;
    bool zerilli;
    BlackHoleImpl(BHParams params, bool polar)
        : p(params), map(params.mass), zerilli(polar) {
        kind = polar ? PotentialKind::Zerilli : PotentialKind::ReggeWheeler;
        // left tail (horizon side) ~ e^{x/2m}, right tail algebraic ~ 1/x^2
        support = {SupportInfo::Type::AlgebraicTail, 0.0, 0.0};
    }
    double value_at_r(double r) const {
        const double m = p.mass, n = p.n();
        const double fac = 1.0 - 2 * m / r;
        if (!zerilli)
            return 2.0 * fac * (r * (n + 1) - 3 * m) / (r * r * r);
        const double num = 2 * n * n * (n + 1) * r * r * r + 6 * n * n * m * r * r
                         + 18 * n * m * m * r + 18 * m * m * m;
        const double den = r * r * r * sq(n * r + 3 * m);
        return fac * num / den;
    }
    double value(double x) const override { return value_at_r(map.r_of_x(x)); }
    double deriv(double x) const override {
        const double r = map.r_of_x(x);
        const double h = 1e-6 * std::max(1.0, std::abs(r));
        // chain rule through the tortoise map, dr/dx = 1 - 2m/r
        double dVdr = (value_at_r(r + h) - value_at_r(r - h)) / (2 * h);
        return dVdr * map.drdx(r);
    }
};

// Sampled potential on a uniform grid with cubic interpolation; segments
// between recorded singularities are interpolated independently so jumps are
// reproduced exactly at segment boundaries (half-open [left, right)).
struct NumericImpl final : PotentialImpl {
    std::vector<double> xs;  // uniform
    std::vector<double> vs;
    double x0, h;

    NumericImpl(std::vector<double> grid, std::vector<double> samples,
                SupportInfo sup, std::vector<double> jumps)
        : xs(std::move(grid)), vs(std::move(samples)) {
        if (xs.size() < 4 || xs.size() != vs.size())
            throw InvalidParameter("numeric potential needs >= 4 samples");
        kind = PotentialKind::Numeric;
        support = sup;
        singularities = std::move(jumps);
        x0 = xs.front();
        h = (xs.back() - xs.front()) / double(xs.size() - 1);
    }

    double value(double x) const override {
        if (x < xs.front() || x > xs.back())
            return 0.0;  // outside the sampled window the tail is below resolution
        // clamp the 4-point stencil to the segment containing x
        double lo = xs.front(), hi = xs.back();
        for (double s : singularities) {
            if (s <= x && s > lo) lo = s;
            if (s > x && s < hi) hi = s;
        }
        long i = long(std::floor((x - x0) / h));
        long ilo = long(std::ceil((lo - x0) / h - 1e-9));
        long ihi = long(std::floor((hi - x0) / h + 1e-9));
        // a sample exactly on the right boundary belongs to the next segment
        if (hi < xs.back() && std::abs(xs[std::size_t(std::max(ihi, 0L))] - hi) < 1e-6 * h) --ihi;
        long j = std::clamp(i - 1, ilo, std::max(ilo, ihi - 3));
        if (ihi - ilo < 3) return vs[std::size_t(std::clamp(i, ilo, ihi))];
        // cubic Lagrange on nodes j..j+3
        double r = 0.0;
        for (int k = 0; k < 4; ++k) {
            double lk = 1.0;
            for (int m = 0; m < 4; ++m)
                if (m != k) lk *= (x - xs[std::size_t(j + m)]) / (xs[std::size_t(j + k)] - xs[std::size_t(j + m)]);
            r += lk * vs[std::size_t(j + k)];
        }
        return r;
    }

    double deriv(double x) const override {
        for (double s : singularities)
            if (std::abs(x - s) < 1e-12 * (1.0 + std::abs(s)))
                throw SingularPoint("derivative at a recorded jump");
        double step = 1e-6 * std::max(1.0, std::abs(x));
        for (double s : singularities)  // keep the stencil inside one segment
            step = std::min(step, std::max(0.45 * std::abs(x - s), 1e-9));
        return (value(x + step) - value(x - step)) / (2 * step);
    }
};

// Closure-backed potential (used for SUSY partner potentials, which are exact
// functions of the generator rather than resampled data).
struct FunctionImpl final : PotentialImpl {
    std::function<double(double)> val, der;
    FunctionImpl(std::function<double(double)> v, std::function<double(double)> d,
                 SupportInfo sup, std::vector<double> jumps)
        : val(std::move(v)), der(std::move(d)) {
        kind = PotentialKind::Numeric;
        support = sup;
        singularities = std::move(jumps);
    }
    double value(double x) const override { return val(x); }
    double deriv(double x) const override {
        for (double s : singularities)
            if (std::abs(x - s) < 1e-12 * (1.0 + std::abs(s)))
                throw SingularPoint("derivative at a recorded jump");
        return der(x);
    }
};

}  // namespace detail

// Immutable value type; cheap to copy, safe for concurrent reads.
class Potential {
public:
    Potential() : impl_(std::make_shared<detail::FreeImpl>()) {}
    explicit Potential(std::shared_ptr<const detail::PotentialImpl> impl)
        : impl_(std::move(impl)) {}

    double evaluate(double x) const { return impl_->value(x); }
    double operator()(double x) const { return impl_->value(x); }
    double derivative(double x) const { return impl_->deriv(x); }

    PotentialKind kind() const { return impl_->kind; }
    const SupportInfo& support() const { return impl_->support; }
    const std::vector<double>& singularities() const { return impl_->singularities; }
    const detail::PiecewiseData* piecewise() const { return impl_->piecewise(); }

private:
    std::shared_ptr<const detail::PotentialImpl> impl_;
};

// ---- constructors ----------------------------------------------------------

inline Potential free_field() { return Potential(); }

inline Potential square_well(double v0, double a) {
    if (!(a > 0)) throw InvalidParameter("square_well: a must be positive");
    detail::PiecewiseData d{{-a, a}, {0.0, v0, 0.0}};
    return Potential(std::make_shared<detail::PiecewiseImpl>(std::move(d)));
}

inline Potential square_barrier(double v0, double a) { return square_well(v0, a); }

inline Potential multi_step(double v1, double v0, double b, double a) {
    if (!(0 < b && b < a)) throw InvalidParameter("multi_step: need 0 < b < a");
    detail::PiecewiseData d{{-a, -b, b, a}, {0.0, v0, v1, v0, 0.0}};
    return Potential(std::make_shared<detail::PiecewiseImpl>(std::move(d)));
}

inline Potential piecewise_constant(std::vector<double> breaks, std::vector<double> vals) {
    if (breaks.size() + 1 != vals.size() || breaks.size() < 1)
        throw InvalidParameter("piecewise_constant: need n breaks and n+1 values");
    if (!std::is_sorted(breaks.begin(), breaks.end()))
        throw InvalidParameter("piecewise_constant: breaks must be sorted");
    detail::PiecewiseData d{std::move(breaks), std::move(vals)};
    return Potential(std::make_shared<detail::PiecewiseImpl>(std::move(d)));
}

inline Potential poschl_teller(double strength, double width) {
    if (!(width > 0)) throw InvalidParameter("poschl_teller: width must be positive");
    return Potential(std::make_shared<detail::PoschlTellerImpl>(PTParams{strength, width}));
}

inline Potential truncated_poschl_teller(double strength, double width, double a) {
    if (!(width > 0 && a > 0))
        throw InvalidParameter("truncated_poschl_teller: width and cutoff must be positive");
    return Potential(std::make_shared<detail::TruncatedPTImpl>(PTParams{strength, width}, a));
}

inline Potential regge_wheeler(double mass, int l) {
    if (l < 2) throw InvalidParameter("regge_wheeler: l must be >= 2");
    if (!(mass > 0)) throw InvalidParameter("regge_wheeler: mass must be positive");
    return Potential(std::make_shared<detail::BlackHoleImpl>(BHParams{mass, l}, false));
}

inline Potential zerilli(double mass, int l) {
    if (l < 2) throw InvalidParameter("zerilli: l must be >= 2");
    if (!(mass > 0)) throw InvalidParameter("zerilli: mass must be positive");
    return Potential(std::make_shared<detail::BlackHoleImpl>(BHParams{mass, l}, true));
}

inline Potential numeric_potential(std::vector<double> grid, std::vector<double> samples,
                                   SupportInfo sup, std::vector<double> jumps = {}) {
    return Potential(std::make_shared<detail::NumericImpl>(
        std::move(grid), std::move(samples), sup, std::move(jumps)));
}

// Sample a callable on a uniform grid (default spacing 1e-3 of the window).
inline Potential numeric_potential(const std::function<double(double)>& f, double halfwidth,
                                   SupportInfo sup, std::vector<double> jumps = {},
                                   double spacing = 0.0) {
    if (spacing <= 0) spacing = 2e-3 * halfwidth;
    std::size_t n = std::size_t(std::ceil(2 * halfwidth / spacing)) + 1;
    if (n % 2 == 0) ++n;
    auto xs = linspace(-halfwidth, halfwidth, n);
    std::vector<double> vs(n);
    for (std::size_t i = 0; i < n; ++i) vs[i] = f(xs[i]);
    return numeric_potential(std::move(xs), std::move(vs), sup, std::move(jumps));
}

inline Potential function_potential(std::function<double(double)> v,
                                    std::function<double(double)> d,
                                    SupportInfo sup, std::vector<double> jumps = {}) {
    return Potential(std::make_shared<detail::FunctionImpl>(
        std::move(v), std::move(d), sup, std::move(jumps)));
}

}  // namespace qnmsusy
