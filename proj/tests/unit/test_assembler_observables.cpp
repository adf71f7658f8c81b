#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "cbs/assembler.hpp"
#include "cbs/observables.hpp"
#include "cbs/oracle.hpp"

using namespace cbs;

namespace {

ModelParams params(const char* Jg, double Omega, double delta) {
    ModelParams p;
    p.Jg = HalfInt::parse(Jg);
    p.Omega = Omega;
    p.delta = delta;
    p.quad.rel_tol = 1e-8;
    return p;
}

bool contains(const std::vector<DiagramContribution>& v, BlockLabel a, BlockLabel b) {
    return std::any_of(v.begin(), v.end(), [&](const DiagramContribution& d) { return d.left == a && d.right == b; });
}

}  // namespace

TEST_CASE("enumeration excludes the forbidden diagram") {
    const auto all = enumerate_contributions(ChannelConfig::hh());
    CHECK(all.size() == 18);
    CHECK_FALSE(contains(all, BlockLabel::c2, BlockLabel::d2));
    CHECK(contains(all, BlockLabel::c3, BlockLabel::d3));
    CHECK(contains(all, BlockLabel::a2, BlockLabel::b5));
}

TEST_CASE("active set in the helicity-preserving channel") {
    const CBSModel m(params("1", 2.0, 0.0));
    const auto& act = m.active_contributions();
    for (auto [a, b] : {std::pair{BlockLabel::a1, BlockLabel::b3}, std::pair{BlockLabel::a1, BlockLabel::b5},
                        std::pair{BlockLabel::a2, BlockLabel::b3}, std::pair{BlockLabel::a2, BlockLabel::b5},
                        std::pair{BlockLabel::c1, BlockLabel::d1}, std::pair{BlockLabel::c1, BlockLabel::d3},
                        std::pair{BlockLabel::c3, BlockLabel::d1}, std::pair{BlockLabel::c3, BlockLabel::d3}})
        CHECK(contains(act, a, b));
    CHECK(act.size() == 8);
    for (BlockLabel b : {BlockLabel::b1, BlockLabel::b2, BlockLabel::b4, BlockLabel::c2, BlockLabel::d2})
        CHECK(m.block_vanishes(b));
}

TEST_CASE("elastic intensities follow the closed form") {
    for (const char* j : {"0", "1", "3/2"}) {
        const CBSModel m(params(j, 2.0, 1.0));
        const double ref = elastic_intensity_analytic(HalfInt::parse(j), 1.0, saturation(2.0, 1.0));
        CHECK(m.ladder_elastic() == doctest::Approx(ref).epsilon(1e-9));
        CHECK(m.crossed_elastic() == doctest::Approx(m.ladder_elastic()).epsilon(1e-12));
    }
}

TEST_CASE("Jg = 0 double-scattering pieces match the scalar model") {
    ModelParams p = params("0", 2.0, 0.0);
    p.quad.rel_tol = 1e-10;
    ChannelConfig ch;
    ch.detect_pol = 1;
    ch.q = ch.qprime = ch.r = ch.rprime = 1;
    p.channel = ch;
    const CBSModel m(p);
    const oracle::ScalarTwoLevel s(2.0, 0.0);
    for (const auto& c : enumerate_contributions(ch)) {
        if (c.left == BlockLabel::a2 && c.right == BlockLabel::b5)
            for (double nu : {-2.0, 0.3, 4.0})
                CHECK(std::abs(m.evaluate(c, nu) / m.geometric_weight() - s.ladder_inelastic_a2b5(nu)) <
                      1e-6 * std::abs(s.ladder_inelastic_a2b5(nu)));
        if (c.left == BlockLabel::c2 && c.right == BlockLabel::d3)
            CHECK(std::abs(m.evaluate(c, 0.0) / m.geometric_weight() - s.fig_diagram()) < 1e-6 * std::abs(s.fig_diagram()));
    }
}

TEST_CASE("ladder total equals the integrated spectrum") {
    ModelParams p = params("0", 3.0, 0.0);
    p.quad.rel_tol = 1e-7;
    const CBSModel m(p);
    std::vector<double> grid, L;
    for (int i = -800; i <= 800; ++i) grid.push_back(0.05 * i);
    for (double nu : grid) L.push_back(m.ladder_inelastic(nu));
    CHECK(integrate_spectrum(grid, L) == doctest::Approx(m.ladder_inelastic_total()).epsilon(2e-5));
    double imag = 0.0;
    m.crossed_inelastic(1.5, nullptr, &imag);
    CHECK(std::abs(imag) < 1e-10 * std::abs(m.crossed_inelastic(1.5)));
}

TEST_CASE("enhancement limits") {
    ModelParams pw = params("0", std::sqrt(2e-4), 0.0);
    pw.quad.rel_tol = 1e-6;
    const CBSModel weak(pw);
    CHECK(assemble_totals(weak).alpha == doctest::Approx(2.0).epsilon(1e-4));
    ModelParams ps = params("0", 18.0, 0.0);
    ps.quad.rel_tol = 1e-6;
    const CBSModel strong(ps);
    CHECK(assemble_totals(strong).alpha == doctest::Approx(1.095).epsilon(0.01));
}

TEST_CASE("parallel evaluation is deterministic") {
    ModelParams p = params("0", 4.0, 0.7);
    p.quad.rel_tol = 1e-5;
    const std::vector<double> grid{-6.0, -1.0, 0.0, 2.5};
    p.threads = 1;
    const auto a = assemble_spectra(p, grid, true);
    p.threads = 3;
    const auto b = assemble_spectra(p, grid, true);
    CHECK(a.ladder_in == b.ladder_in);
    CHECK(a.crossed_in == b.crossed_in);
    CHECK(a.alpha == b.alpha);
}

TEST_CASE("enhancement factor from totals") {
    SpectrumResult r;
    r.L_el = 0.3;
    r.C_el = 0.3;
    r.L_in = 0.1;
    r.C_in = 0.02;
    CHECK(enhancement(r) == doctest::Approx(1.8));
}

TEST_CASE("saturation parameter") {
    CHECK(saturation(18.0, 0.0) == doctest::Approx(162.0));
    CHECK(saturation(2.0, 1.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(saturation(0.0, 0.0), DomainError);
}

TEST_CASE("integrate_spectrum on a Lorentzian") {
    std::vector<double> g, v;
    for (int i = -4000; i <= 4000; ++i) {
        g.push_back(0.01 * i);
        v.push_back(1.0 / (kPi * (1.0 + g.back() * g.back())));
    }
    CHECK(integrate_spectrum(g, v) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("dressed resonance predictor") {
    const auto d1 = dressed_resonances(HalfInt::integer(1), 10.0, 0.0);
    CHECK(d1.nu[2] == doctest::Approx(2.96).epsilon(0.004));
    CHECK(d1.nu[3] == doctest::Approx(7.04).epsilon(0.002));
    CHECK(d1.nu[0] == doctest::Approx(-d1.nu[3]));
    const auto d3 = dressed_resonances(HalfInt::integer(3), 10.0, 0.0);
    CHECK(std::abs(d3.nu[2] - 1.34) < 0.01);
    CHECK(std::abs(d3.nu[3] - 8.66) < 0.01);
    CHECK_THROWS_AS(dressed_resonances(HalfInt(0), 10.0, 0.0), DomainError);
}

TEST_CASE("find_peaks bins") {
    std::vector<double> g, v;
    for (int i = -1000; i <= 1000; ++i) {
        const double x = 0.01 * i;
        g.push_back(x);
        v.push_back(std::exp(-(x - 2.83) * (x - 2.83) / 0.5) + std::exp(-(x + 2.83) * (x + 2.83) / 0.5));
    }
    const auto p = find_peaks(g, v, 0.1);
    REQUIRE(p.size() == 2);
    CHECK(p[0] == doctest::Approx(-2.8));
    CHECK(p[1] == doctest::Approx(2.8));
}
