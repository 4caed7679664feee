#include <catch2/catch_amalgamated.hpp>

#include "qnmsusy/propagation.hpp"

using namespace qnmsusy;
using Catch::Approx;

namespace {
double cdist(cplx a, cplx b) { return std::abs(a - b); }
}

TEST_CASE("transfer matrix agrees with adaptive integration on a constant segment") {
    double v = -5.0;
    cplx omega(2.0, -1.0);
    double dx = 0.7;
    auto M = transfer_matrix(v, omega, dx);
    CHECK(std::abs(M.det() - 1.0) < 1e-12);

    WaveState s;
    s.phi = cplx(1.0, 0.0);
    s.dphi = cplx(0.0, 0.3);
    cplx expect_v = M.m11 * s.phi + M.m12 * s.dphi;
    cplx expect_d = M.m21 * s.phi + M.m22 * s.dphi;

    auto V = [v](double) { return v; };
    integrate_wave(V, omega * omega, s, 0.0, dx);
    CHECK(cdist(s.value(), expect_v) < 1e-9 * std::abs(expect_v));
    CHECK(cdist(s.deriv(), expect_d) < 1e-9 * std::abs(expect_d));
}

TEST_CASE("transfer matrix small-alpha limit is smooth") {
    cplx omega(2.0, 0.0);
    auto M0 = transfer_matrix(4.0, omega, 0.5);  // alpha exactly zero
    CHECK(std::abs(M0.m11 - 1.0) < 1e-15);
    CHECK(std::abs(M0.m12 - 0.5) < 1e-15);
    CHECK(std::abs(M0.m21) < 1e-15);
    // continuity across the series/closed-form switch
    auto Ma = transfer_matrix(4.0 + 1e-13, omega, 0.5);
    auto Mb = transfer_matrix(4.0 + 1e-5, omega, 0.5);
    CHECK(std::abs(Ma.m12 - M0.m12) < 1e-12);
    CHECK(std::abs(Mb.m12 - M0.m12) < 1e-5);
    CHECK(std::abs(Mb.det() - 1.0) < 1e-12);
}

TEST_CASE("free field outgoing solutions are plane waves") {
    auto p = free_field();
    cplx omega(1.0, 0.5);
    PropagationOptions opt;
    opt.truncation_radius = 2.0;
    auto f = propagate_outgoing(p, omega, Side::Left, opt);
    auto g = propagate_outgoing(p, omega, Side::Right, opt);
    cplx iw(0, 1);
    for (double x : {-2.0, -0.3, 0.55, 2.0}) {
        cplx ef = std::exp(-iw * omega * x);
        cplx eg = std::exp(iw * omega * x);
        CHECK(cdist(f.value(x), ef) < 1e-9 * std::abs(ef));
        CHECK(cdist(g.value(x), eg) < 1e-9 * std::abs(eg));
        CHECK(cdist(f.log_derivative(x), -iw * omega) < 1e-9);
        CHECK(cdist(g.log_derivative(x), iw * omega) < 1e-9);
    }
}

TEST_CASE("outgoing wave of the reflectionless sech^2 well matches the closed form") {
    // V = -2 sech^2 x has the exact outgoing solution
    // g(omega,x) = e^{i omega x}(tanh x - i omega)/(1 - i omega)
    auto p = poschl_teller(-2.0, 1.0);
    cplx omega(1.2, -0.3);
    cplx iw(0, 1);
    auto exact = [&](double x) {
        return std::exp(iw * omega * x) * (std::tanh(x) - iw * omega) / (1.0 - iw * omega);
    };
    auto dexact = [&](double x) {
        double s = 1.0 / sq(std::cosh(x));
        return std::exp(iw * omega * x)
             * (iw * omega * (std::tanh(x) - iw * omega) + s) / (1.0 - iw * omega);
    };
    PropagationOptions opt;
    opt.truncation_radius = 20.0;
    auto g = propagate_outgoing(p, omega, Side::Right, opt);
    for (double x : {-3.0, -0.5, 0.0, 0.3, 2.0, 10.0}) {
        CHECK(cdist(g.value(x), exact(x)) < 1e-8 * std::abs(exact(x)));
        CHECK(cdist(g.deriv(x), dexact(x)) < 1e-8 * std::abs(dexact(x)));
    }
    // mirror symmetry of the even potential: f(omega,x) = g(omega,-x)
    auto f = propagate_outgoing(p, omega, Side::Left, opt);
    CHECK(cdist(f.value(-0.7), g.value(0.7)) < 1e-8 * std::abs(g.value(0.7)));
}

TEST_CASE("Wronskian of f and g is independent of position") {
    auto p = multi_step(9.5, 10.0, 0.5, 1.0);
    cplx omega(2.3, -0.8);
    PropagationOptions opt;
    opt.truncation_radius = 1.0;
    auto f = propagate_outgoing(p, omega, Side::Left, opt);
    auto g = propagate_outgoing(p, omega, Side::Right, opt);
    auto J = [&](double x) {
        auto [fv, fd] = f.at(x);
        auto [gv, gd] = g.at(x);
        return fd * gv - fv * gd;
    };
    cplx j0 = J(0.0);
    for (double x : {-0.9, -0.5, 0.2, 0.5, 0.77})
        CHECK(cdist(J(x), j0) < 1e-8 * std::abs(j0));
}

TEST_CASE("single-point propagation matches the tabulated solution") {
    auto p = square_well(-16.0, 1.0);
    cplx omega(0.0, 2.5);
    PropagationOptions opt;
    opt.truncation_radius = 1.0;
    auto f = propagate_outgoing(p, omega, Side::Left, opt);
    WaveState s = propagate_to_point(p, omega, Side::Left, 1.0, 0.37);
    CHECK(cdist(s.value(), f.value(0.37)) < 1e-9 * std::abs(s.value()));
    CHECK(cdist(s.deriv(), f.deriv(0.37)) < 1e-9 * std::abs(s.deriv()));
}

TEST_CASE("dynamic-range guard keeps mantissas finite for deep modes") {
    auto p = square_well(-4.0, 1.0);
    cplx omega(1.0, -200.0);
    WaveState s = propagate_to_point(p, omega, Side::Left, 1.0, 1.0);
    CHECK(std::isfinite(std::abs(s.phi)));
    CHECK(std::isfinite(std::abs(s.dphi)));
    CHECK(s.log2scale > 100.0);  // |f| ~ e^{200 x} was renormalized along the way
}

TEST_CASE("frequency-band guard on exponential tails") {
    auto p = poschl_teller(-2.0, 1.0);  // decay rate 2, band floor at Im omega = -0.9
    CHECK_THROWS_AS(propagate_outgoing(p, cplx(0.0, -2.0), Side::Right), BandViolation);
    CHECK_NOTHROW(propagate_outgoing(p, cplx(1.0, -0.5), Side::Right));
    auto bh = regge_wheeler(0.5, 2);
    PropagationOptions opt;
    opt.truncation_radius = 30.0;
    CHECK_THROWS_AS(propagate_outgoing(bh, cplx(1.0, -0.1), Side::Right, opt), BandViolation);
}

TEST_CASE("default truncation radius tracks the tail decay") {
    auto p = poschl_teller(-2.0, 1.0);
    double xn = default_truncation_radius(p);
    CHECK(std::abs(p(xn)) <= 1.2e-12 * std::abs(p(0.0)));
    CHECK(xn < 40.0);  // capped well below the hard ceiling for unit width
    CHECK(default_truncation_radius(square_well(-5, 1.5)) == Approx(1.5));
}
