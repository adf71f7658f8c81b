#include <doctest.h>

#include <cmath>

#include "cbs/bloch.hpp"
#include "cbs/oracle.hpp"
#include "cbs/quadrature.hpp"
#include "cbs/regression.hpp"

using namespace cbs;

namespace {
HalfInt H(const char* s) { return HalfInt::parse(s); }
}

TEST_CASE("level schemes") {
    const auto full = build_level_scheme(H("3/2"), LevelMode::full);
    CHECK(full.n_ground() == 4);
    CHECK(full.n_excited() == 6);
    CHECK(full.Je == H("5/2"));
    const auto eff = build_level_scheme(H("7"), LevelMode::effective);
    CHECK(eff.n_ground() == 3);
    CHECK(eff.n_excited() == 3);
    CHECK(eff.ground_index(H("7")) >= 0);
    CHECK(eff.ground_index(H("4")) == -1);
    CHECK_THROWS_AS(build_level_scheme(H("1/2"), LevelMode::effective), DomainError);
    CHECK_THROWS_AS(build_level_scheme(H("-1"), LevelMode::full), DomainError);
}

TEST_CASE("operator basis duality and round trip") {
    for (int n0 : {2, 4, 7}) {
        const OperatorBasis b(n0);
        for (int i = 0; i < b.size(); ++i)
            for (int j = 0; j < b.size(); ++j) {
                const cplx t = (b.op(i) * b.dual(j)).trace();
                CHECK(std::abs(t - (i == j ? 1.0 : 0.0)) < 1e-13);
            }
        CMatrix rho = CMatrix::Random(n0, n0);
        rho = rho * rho.adjoint();
        rho /= rho.trace();
        CHECK((b.density(b.coordinates(rho)) - rho).norm() < 1e-13);
        CHECK(b.op(b.transition_index(1, 0))(1, 0) == cplx(1.0));
    }
}

TEST_CASE("dipole selection rules and closure") {
    for (const char* j : {"0", "1/2", "2"}) {
        const auto s = build_level_scheme(H(j), LevelMode::full);
        const auto d = dipole_components(s);
        for (int q : kSphericalValues) {
            const CMatrix& D = d.lower(q);
            for (int e = 0; e < s.n_excited(); ++e)
                for (int g = 0; g < s.n_ground(); ++g) {
                    const cplx v = D(g, s.n_ground() + e);
                    if (s.excited_m[e].twice - s.ground_m[g].twice != 2 * q) CHECK(v == cplx(0.0));
                }
            CHECK((d.raise(q) - D.adjoint()).norm() < 1e-15);
        }
        // sum_q D†_q D_q is the excited projector for Je = Jg + 1
        CMatrix P = CMatrix::Zero(s.n_levels(), s.n_levels());
        for (int q : kSphericalValues) P += d.raise(q) * d.lower(q);
        CHECK((P - excited_projector(s)).norm() < 1e-13);
    }
}

TEST_CASE("Bloch matrix is stable and preserves trace") {
    for (const char* j : {"0", "1", "3/2"}) {
        const auto sys = make_system(H(j), LevelMode::full, 2.0, 1.0);
        const auto& ev = sys->resolvent.eigenvalues();
        for (int i = 0; i < ev.size(); ++i) CHECK(ev(i).real() < 0.0);
        const CMatrix rho = sys->basis.density(sys->Q0);
        CHECK(std::abs(rho.trace() - 1.0) < 1e-12);
        CHECK((rho - rho.adjoint()).norm() < 1e-12);
        Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
        CHECK(es.eigenvalues().minCoeff() > -1e-12);
        // steady state solves M Q + L = 0
        CHECK((sys->M * sys->Q0 + sys->L).norm() < 1e-12);
    }
    CHECK_THROWS_AS(make_system(H("0"), LevelMode::full, 0.0, 0.0), DomainError);
}

TEST_CASE("resolvent residual") {
    const auto sys = make_system(H("1"), LevelMode::full, 3.0, 0.5);
    // sigma+ drive conserves coherence order, so M splits into blocks
    CHECK(sys->resolvent.block_count() > 1);
    CHECK(sys->resolvent.eigenvalues().size() == sys->dimension());
    const CVector v = CVector::Random(sys->dimension());
    for (cplx z : {cplx(0, 0.3), cplx(0, -4.2), cplx(0.1, 7.0)}) {
        const CVector x = resolvent_apply(*sys, z, v);
        CHECK((z * x - sys->M * x - v).norm() < 1e-10 * v.norm());
        const CVector y = sys->resolvent.apply_left(z, v);
        const CVector direct = (z * CMatrix::Identity(sys->dimension(), sys->dimension()) - sys->M)
                                   .transpose()
                                   .partialPivLu()
                                   .solve(v);
        CHECK((y - direct).norm() < 1e-10 * direct.norm());
    }
}

TEST_CASE("steady state of strong drive") {
    // Saturated cycling transition: stretched ground and excited sublevels share the population.
    const auto sys = make_system(H("1"), LevelMode::full, 100.0, 0.0);
    const CMatrix rho = sys->basis.density(sys->Q0);
    const int g = sys->scheme.ground_index(H("1"));
    const int e = sys->scheme.excited_index(H("2"));
    CHECK(rho(g, g).real() == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(rho(e, e).real() == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("Jg = 0 elastic blocks match the scalar 3x3 model") {
    for (auto [Omega, delta] : {std::pair{1.0, 0.0}, std::pair{5.0, 2.0}}) {
        const auto sys = make_system(H("0"), LevelMode::full, Omega, delta);
        const oracle::ScalarTwoLevel s(Omega, delta);
        const SphericalIndex p(1);
        const auto blocks = elastic_blocks(*sys, 1.3, p, p);
        CHECK(std::abs(elastic_amplitude(*sys, blocks, p, Order::zeroth, false) - s.sigma_minus()) < 1e-12);
        CHECK(std::abs(elastic_amplitude(*sys, blocks, p, Order::minus, false) - s.Qminus(1.3)(0)) < 1e-12);
        CHECK(std::abs(elastic_amplitude(*sys, blocks, p, Order::plus, false) - s.Qplus(1.3)(0)) < 1e-12);
        CHECK(std::abs(elastic_amplitude(*sys, blocks, p, Order::pm, false) - s.Qpm(1.3)(0)) < 1e-12);
        CHECK(std::abs(elastic_amplitude(*sys, blocks, p, Order::pm, true) - s.Qpm(1.3)(1)) < 1e-12);
    }
}

TEST_CASE("scalar elastic amplitude at s = 1") {
    const oracle::ScalarTwoLevel s(std::sqrt(2.0), 0.0);
    CHECK(std::abs(s.sigma_minus()) == doctest::Approx(std::sqrt(0.5) / 2.0).epsilon(1e-12));
}

TEST_CASE("time-domain harmonics match elastic blocks") {
    const auto sys = make_system(H("1/2"), LevelMode::full, 2.0, 0.5);
    const SphericalIndex r(-1), rp(-1);
    const double w = 0.8;
    const auto blocks = elastic_blocks(*sys, w, r, rp);

    const auto free = oracle::integrate_obe(*sys, 0.0, w, r, rp, 150.0, 0.01);
    CHECK((sys->basis.coordinates(free.rho_mean) - sys->Q0).norm() < 1e-8);

    const double g = 1e-3;
    const auto run = oracle::integrate_obe(*sys, g, w, r, rp, 150.0, 0.01);
    const CVector minus = sys->basis.coordinates(run.rho_minus) / g;
    const CVector plus = sys->basis.coordinates(run.rho_plus) / g;
    const CVector second = (sys->basis.coordinates(run.rho_mean) - sys->Q0) / (g * g);
    CHECK((minus - blocks.Qminus).norm() < 1e-3 * blocks.Qminus.norm());
    CHECK((plus - blocks.Qplus).norm() < 1e-3 * blocks.Qplus.norm());
    CHECK((second - blocks.Qpm).norm() < 1e-3 * blocks.Qpm.norm());
}

TEST_CASE("regression initial conditions from direct traces") {
    const auto sys = make_system(H("1"), LevelMode::full, 2.0, 0.3);
    const SphericalIndex q(1), qp(-1);
    const auto blocks = elastic_blocks(*sys, 0.9, -1, -1);
    const auto init = regression_initials(*sys, blocks, q, qp);
    const CMatrix rho = sys->basis.density(sys->Q0);
    const CMatrix& Dq = sys->dipoles.lower(q);
    const CMatrix& Dd = sys->dipoles.raise(qp);
    // f0_i = <mu_i D_q> - <mu_i><D_q>, h0_i = <D†_q' mu_i> - <mu_i><D†_q'>
    const CVector f0 = sys->basis.coordinates(Dq * rho) - sys->Q0 * (Dq * rho).trace();
    const CVector h0 = sys->basis.coordinates(rho * Dd) - sys->Q0 * (Dd * rho).trace();
    CHECK((init.f0 - f0).norm() < 1e-12);
    CHECK((init.h0 - h0).norm() < 1e-12);
}

TEST_CASE("block evaluator matches the generic block formula") {
    const auto sys = make_system(H("1"), LevelMode::full, 2.5, 0.0);
    const SphericalIndex q(1), qp(1), r(-1), rp(-1);
    const BlockEvaluator ev(*sys, q, qp);
    const double w = 1.1;
    const auto init = regression_initials(*sys, elastic_blocks(*sys, w, r, rp), q, qp);
    for (double nu : {-2.0, 0.4, 3.3}) {
        InelasticBlockRequest req{BlockKind::P0, w, r, rp, nu, q, qp};
        CHECK(std::abs(ev.p0(nu) - inelastic_block(*sys, init, req)) < 1e-12);
        req.kind = BlockKind::Pminus;
        CHECK(std::abs(ev.pminus(w, r, nu) - inelastic_block(*sys, init, req)) < 1e-12);
        req.kind = BlockKind::Pplus;
        CHECK(std::abs(ev.pplus(w, rp, nu) - inelastic_block(*sys, init, req)) < 1e-12);
        req.kind = BlockKind::Ppm;
        CHECK(std::abs(ev.ppm(w, r, rp, nu) - inelastic_block(*sys, init, req)) < 1e-12);
    }
}

TEST_CASE("Jg = 0 inelastic blocks match the scalar 3x3 model") {
    const auto sys = make_system(H("0"), LevelMode::full, 5.0, 0.0);
    const oracle::ScalarTwoLevel s(5.0, 0.0);
    const SphericalIndex p(1);
    const BlockEvaluator ev(*sys, p, p);
    for (double nu : {-3.0, 0.5, 4.0}) {
        CHECK(std::abs(ev.p0(nu) - s.P0(nu)) < 1e-12);
        CHECK(std::abs(ev.pminus(1.3, p, nu) - s.Pminus(1.3, nu)) < 1e-12);
        CHECK(std::abs(ev.pplus(1.3, p, nu) - s.Pplus(1.3, nu)) < 1e-12);
        CHECK(std::abs(ev.ppm(1.3, p, p, nu) - s.Ppm(1.3, nu)) < 1e-12);
    }
}

TEST_CASE("Ppm integrates to the second-order fluctuation") {
    const auto sys = make_system(H("1/2"), LevelMode::full, 3.0, 0.0);
    const SphericalIndex q(1), r(-1);
    const BlockEvaluator ev(*sys, q, q);
    const QuadOptions opt{1e-10, 0.0, 400000};
    const auto res = integrate_line<cplx>([&](double nu) { return ev.ppm(0.7, r, r, nu); },
                                          {-12.0, -3.0, -0.7, 0.0, 0.7, 3.0, 12.0}, opt);
    CHECK(std::abs(res.value - ev.ppm_integrated(0.7, r, r)) < 1e-6 * std::abs(res.value));
}

TEST_CASE("inelastic blocks vanish faster than elastic at weak drive") {
    const SphericalIndex p(1);
    double prev_ratio = 0.0;
    for (double Omega : {0.02, 0.01}) {
        const auto sys = make_system(H("0"), LevelMode::full, Omega, 0.0);
        const BlockEvaluator ev(*sys, p, p);
        const double el = std::norm(bilinear(sys->proj.v(p), sys->Q0));
        const double ratio = std::abs(ev.fluctuation_strength()) / el;
        if (prev_ratio > 0.0) CHECK(ratio == doctest::Approx(prev_ratio / 4.0).epsilon(1e-2));
        prev_ratio = ratio;
    }
}
