#include <catch2/catch_amalgamated.hpp>

#include "qnmsusy/potential.hpp"

using namespace qnmsusy;
using Catch::Approx;

TEST_CASE("square well geometry and jump convention") {
    auto p = square_well(-5.0, 1.0);
    CHECK(p(-1.5) == 0.0);
    CHECK(p(0.0) == -5.0);
    CHECK(p(0.999) == -5.0);
    CHECK(p(1.0) == 0.0);   // value at a jump comes from the right segment
    CHECK(p(-1.0) == -5.0);
    CHECK(p.support().type == SupportInfo::Type::Finite);
    CHECK(p.support().halfwidth == 1.0);
    CHECK_THROWS_AS(p.derivative(1.0), SingularPoint);
    CHECK(p.derivative(0.5) == 0.0);
}

TEST_CASE("multi-step layout") {
    auto p = multi_step(9.5, 10.0, 0.5, 1.0);
    CHECK(p(-2.0) == 0.0);
    CHECK(p(-0.8) == 10.0);
    CHECK(p(0.0) == 9.5);
    CHECK(p(0.8) == 10.0);
    CHECK(p(2.0) == 0.0);
    CHECK(p.singularities().size() == 4);
    CHECK_THROWS_AS(multi_step(1.0, 1.0, 2.0, 1.0), InvalidParameter);
}

TEST_CASE("piecewise constant validation") {
    CHECK_THROWS_AS(piecewise_constant({1.0, -1.0}, {0.0, 1.0, 0.0}), InvalidParameter);
    CHECK_THROWS_AS(piecewise_constant({0.0}, {1.0}), InvalidParameter);
    auto p = piecewise_constant({-1.0, 0.0, 2.0}, {0.0, 3.0, -2.0, 0.0});
    CHECK(p(-0.5) == 3.0);
    CHECK(p(1.0) == -2.0);
}

TEST_CASE("Poschl-Teller values, derivative, and index q") {
    auto p = poschl_teller(-2.0, 1.0);
    CHECK(p(0.0) == Approx(-2.0));
    CHECK(p(1.0) == Approx(-2.0 / sq(std::cosh(1.0))));
    // centered-difference check of the analytic derivative
    double h = 1e-6;
    CHECK(p.derivative(0.7) == Approx((p(0.7 + h) - p(0.7 - h)) / (2 * h)).margin(1e-7));
    CHECK(p.support().type == SupportInfo::Type::ExponentialTail);
    CHECK(p.support().decay_rate == Approx(2.0));

    CHECK(PTParams{-2.0, 1.0}.q().real() == Approx(1.5));       // 1/4 + 2 = 9/4
    CHECK(PTParams{-6.0, 1.0}.q().real() == Approx(2.5));       // 1/4 + 6 = 25/4
    CHECK(PTParams{10.0, 1.0}.q().imag() == Approx(std::sqrt(9.75)));
    CHECK(PTParams{10.0, 1.0}.q().real() == 0.0);
}

TEST_CASE("truncated Poschl-Teller cuts the tail") {
    auto p = truncated_poschl_teller(5.0, 1.0, 2.0);
    auto full = poschl_teller(5.0, 1.0);
    CHECK(p(1.5) == Approx(full(1.5)));
    CHECK(p(2.0) == 0.0);
    CHECK(p(2.5) == 0.0);
    CHECK(p.support().halfwidth == 2.0);
    CHECK_THROWS_AS(p.derivative(2.0), SingularPoint);
}

TEST_CASE("black-hole potentials in the tortoise coordinate") {
    TortoiseMap map(0.5);  // 2m = 1
    double r = 3.0;
    double x = map.x_of_r(r);
    CHECK(map.r_of_x(x) == Approx(r).epsilon(1e-12));
    CHECK(map.drdx(r) == Approx(1.0 - 1.0 / r));

    auto rw = regge_wheeler(0.5, 2);
    // axial l=2: V = (1 - 2m/r)(l(l+1)/r^2 - 6m/r^3)
    double expect = (1.0 - 1.0 / r) * (6.0 / (r * r) - 3.0 / (r * r * r));
    CHECK(rw(x) == Approx(expect).epsilon(1e-10));

    auto z = zerilli(0.5, 2);
    // both families share the l(l+1)/r^2 leading tail
    double rfar = 200.0;
    double xfar = map.x_of_r(rfar);
    CHECK(z(xfar) == Approx(rw(xfar)).epsilon(1e-2));
    CHECK(z(x) != Approx(rw(x)).epsilon(1e-4));  // but differ in the strong field

    CHECK_THROWS_AS(regge_wheeler(0.5, 1), InvalidParameter);
    CHECK_THROWS_AS(zerilli(-1.0, 2), InvalidParameter);
}

TEST_CASE("numeric potential reproduces a smooth model") {
    auto model = poschl_teller(-3.0, 0.8);
    auto p = numeric_potential([&](double x) { return model(x); }, 12.0,
                               {SupportInfo::Type::ExponentialTail, 0.0, 2.5}, {}, 1e-2);
    for (double x : {-4.3, -0.77, 0.0, 1.234, 6.6})
        CHECK(p(x) == Approx(model(x)).margin(1e-8));
    CHECK(p(20.0) == 0.0);  // outside the sampled window
    CHECK(p.derivative(0.9) == Approx(model.derivative(0.9)).margin(1e-5));
}

TEST_CASE("numeric potential respects recorded jumps") {
    // sample a step: -1 on [-1, 1), 0 outside
    std::size_t n = 2001;
    auto xs = linspace(-2.0, 2.0, n);
    std::vector<double> vs(n);
    for (std::size_t i = 0; i < n; ++i) vs[i] = (xs[i] >= -1.0 && xs[i] < 1.0) ? -1.0 : 0.0;
    auto p = numeric_potential(xs, vs, {SupportInfo::Type::Finite, 2.0, 0.0}, {-1.0, 1.0});
    CHECK(p(0.9995) == Approx(-1.0));
    CHECK(p(1.0005) == Approx(0.0));
    CHECK_THROWS_AS(p.derivative(1.0), SingularPoint);
}

TEST_CASE("function-backed potential") {
    auto p = function_potential([](double x) { return x * x * std::exp(-x * x); },
                                [](double x) { return (2 * x - 2 * x * x * x) * std::exp(-x * x); },
                                {SupportInfo::Type::ExponentialTail, 0.0, 2.0});
    double h = 1e-6;
    CHECK(p.derivative(0.6) == Approx((p(0.6 + h) - p(0.6 - h)) / (2 * h)).margin(1e-8));
}
