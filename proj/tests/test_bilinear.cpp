#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "qnmsusy/bilinear.hpp"
#include "qnmsusy/spectral.hpp"
#include "qnmsusy/susy.hpp"

using namespace qnmsusy;
using Catch::Approx;

namespace {

TwoComponentState eigenstate_of(const Potential& p, cplx omega, double a,
                                std::size_t npts = 4001) {
    auto sol = eigenfunction(p, omega);
    return eigenstate(sol, omega, a, npts);
}

}  // namespace

TEST_CASE("distinct modes of the deep well are mutually orthogonal") {
    auto p = square_well(-20.0, 1.0);
    std::vector<cplx> freqs;
    for (const auto& m : find_axis_modes(p, 0.5, 4.6)) freqs.push_back(m.omega);
    REQUIRE(freqs.size() == 3);
    // add a quasinormal pair from the lower half-plane
    auto qnms = find_modes(p, {-4.0, 4.0, -1.5, -0.1});
    REQUIRE(qnms.size() >= 2);
    freqs.push_back(qnms[0].omega);
    freqs.push_back(qnms[1].omega);

    std::vector<TwoComponentState> states;
    for (cplx w : freqs) states.push_back(eigenstate_of(p, w, 1.0));

    for (std::size_t m = 0; m < states.size(); ++m) {
        cplx nm = bilinear(states[m], states[m]);
        CHECK(std::abs(nm) > 0.0);
        for (std::size_t n = 0; n < m; ++n) {
            cplx nn = bilinear(states[n], states[n]);
            double scale = std::sqrt(std::abs(nm) * std::abs(nn));
            CHECK(std::abs(bilinear(states[m], states[n])) < 1e-6 * scale);
        }
    }
}

TEST_CASE("mode norm matches the slope of the spectral determinant") {
    auto p = square_well(-20.0, 1.0);
    auto modes = find_axis_modes(p, 0.5, 4.6);
    REQUIRE(modes.size() == 3);
    for (const auto& m : modes) {
        auto chk = wronskian_derivative_identity(p, m.omega, 1.0);
        CHECK(std::abs(chk.bilinear_fg - chk.minus_dj)
              < 1e-5 * std::abs(chk.minus_dj));
    }
}

TEST_CASE("evolution operator is symmetric under the bilinear map") {
    auto p = poschl_teller(-2.0, 1.0);
    const double a = 4.0;
    const std::size_t n = 4001;
    TwoComponentState u, v;
    u.grid = v.grid = linspace(-a, a, n);
    u.c1.resize(n); u.c2.resize(n); v.c1.resize(n); v.c2.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double x = u.grid[i];
        double env = std::exp(-2.0 * x * x);
        u.c1[i] = env * std::exp(cplx(0, 1.7 * x));
        u.c2[i] = env * cplx(0.3 * x, -0.4);
        v.c1[i] = env * std::cos(2.1 * x);
        v.c2[i] = env * std::exp(cplx(0, -0.9 * x)) * x;
    }
    double scale = std::abs(bilinear(u, u)) + std::abs(bilinear(v, v));
    CHECK(evolution_symmetry_residual(p, u, v) < 1e-6 * scale);
}

TEST_CASE("partner modes rescale by the eigenvalue gap") {
    auto p = square_well(-20.0, 1.0);
    auto modes = find_axis_modes(p, 0.5, 4.6);
    REQUIRE(modes.size() == 3);
    cplx Om = modes[2].omega;  // ground state, about 4.28i
    auto gen = make_generator(p, Om, SusyType::Type1);
    for (int k : {0, 1}) {
        cplx w = modes[k].omega;
        cplx expected = w * w - Om * Om;
        cplx got = susy_norm_ratio(gen, w, 1.0);
        CHECK(std::abs(got - expected) < 1e-5 * std::abs(expected));
    }
    CHECK_THROWS_AS(susy_norm_ratio(gen, Om, 1.0), DegenerateEigenvalue);
}

TEST_CASE("first-order perturbation shift tracks an exact re-solve") {
    auto p = square_well(-20.0, 1.0);
    auto modes = find_axis_modes(p, 2.0, 3.0);
    REQUIRE(modes.size() == 1);
    const double eps = 1e-3;
    // deepen the well slightly: dV = -eps inside |x|<1
    auto sol = eigenfunction(p, modes[0].omega);
    cplx dw = perturbation_shift(sol, modes[0].omega, 1.0,
                                 [&](double x) { return std::abs(x) < 1.0 ? -eps : 0.0; });
    auto p2 = square_well(-20.0 - eps, 1.0);
    auto m2 = find_axis_modes(p2, 2.0, 3.0);
    REQUIRE(m2.size() == 1);
    cplx exact = m2[0].omega - modes[0].omega;
    CHECK(std::abs(dw - exact) < 1e-3 * std::abs(exact) + 1e-12);
}

TEST_CASE("projection recovers expansion coefficients") {
    auto p = square_well(-20.0, 1.0);
    auto modes = find_axis_modes(p, 0.5, 4.6);
    REQUIRE(modes.size() == 3);
    auto s0 = eigenstate_of(p, modes[0].omega, 1.0);
    auto s1 = eigenstate_of(p, modes[1].omega, 1.0);
    TwoComponentState mix = s0;
    for (std::size_t i = 0; i < mix.size(); ++i) {
        mix.c1[i] = 0.7 * s0.c1[i] + cplx(0, 2.0) * s1.c1[i];
        mix.c2[i] = 0.7 * s0.c2[i] + cplx(0, 2.0) * s1.c2[i];
    }
    CHECK(std::abs(project(s0, mix) - 0.7) < 1e-6);
    CHECK(std::abs(project(s1, mix) - cplx(0, 2.0)) < 1e-6);
}

TEST_CASE("hyperbolic well with unit index develops a doubled partner mode") {
    // V = -3/4 sech^2 x has a bound state at i/2 and a resonance at -i/2;
    // removing the bound state makes the partner resonance a double zero.
    auto p = poschl_teller(-0.75, 1.0);
    auto gen = make_generator(p, cplx(0, 0.5), SusyType::Type1);
    const double xn = default_truncation_radius(p);
    const cplx Om(0, 0.5);

    SECTION("transform law for the unnormalized determinant") {
        WronskianOptions wopt;
        wopt.truncation_radius = xn;
        for (int k = 0; k < 20; ++k) {
            double th = 2 * pi * k / 20.0;
            cplx w = cplx(0.15, -0.1) + 0.65 * std::exp(cplx(0, th));
            cplx ju = intertwined_wronskian(gen, w, xn);
            cplx jq = wronskian(p, w, WronskianType::Quasinormal, wopt);
            cplx expected = (w * w - Om * Om) * jq;
            CHECK(std::abs(ju - expected) < 1e-6 * (std::abs(expected) + std::abs(jq)));
        }
    }

    SECTION("partner determinant has a certified double zero at -i/2") {
        // reduced partner determinant (w - Om)^{-2} Ju near -Om
        auto jqt = [&](cplx w) { return intertwined_wronskian(gen, w, xn) / sq(w - Om); };
        cplx w0(0, -0.5);
        double j0 = std::abs(jqt(w0));
        // quadratic model: |J| ~ 0.5 |J''| |w-w0|^2
        cplx d2 = (jqt(w0 + 1e-3) - 2.0 * jqt(w0) + jqt(w0 - 1e-3)) / 1e-6;
        for (double h : {3e-3, 1e-2}) {
            for (cplx dir : {cplx(1, 0), cplx(0, 1), cplx(M_SQRT1_2, M_SQRT1_2),
                             cplx(-M_SQRT1_2, M_SQRT1_2)}) {
                double model = 0.5 * std::abs(d2) * h * h;
                CHECK(std::abs(std::abs(jqt(w0 + h * dir)) - model) < 0.05 * model + j0);
            }
        }
    }

    SECTION("block normalization ratios from determinant derivatives") {
        auto jb = jordan_block_ratios(gen, xn);
        CHECK(std::abs(jb.norm_ratio - cplx(0, -1)) < 1e-4);
        CHECK(std::abs(jb.chain_ratio - cplx(0, -1)) < 1e-4);
        CHECK(std::abs(jb.reverse_ratio() - cplx(-1, 0)) < 2e-4);
    }

    SECTION("direct two-component evaluation agrees") {
        // keep the integration window tighter than the truncation radius:
        // the norm terms grow like e^a while the result is O(1)
        cplx direct = jordan_norm_direct(gen, xn, 10.0, 8001);
        CHECK(std::abs(direct - cplx(0, -1)) < 1e-3);
    }

    SECTION("the doubled mode itself has zero norm") {
        auto pair = jordan_block_pair(gen, xn, xn, 8001);
        cplx nrm = bilinear(pair.mode, pair.mode);
        // compare against the natural magnitude of the surface terms
        double scale = std::norm(pair.mode.c1.front()) + std::norm(pair.mode.c1.back());
        CHECK(std::abs(nrm) < 1e-6 * scale);
    }
}
