#include "cbs/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "cbs/assembler.hpp"
#include "cbs/io.hpp"
#include "cbs/observables.hpp"
#include "cbs/oracle.hpp"

namespace cbs {

namespace {

using Clock = std::chrono::steady_clock;

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

std::string fix(double x, int digits) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Collects named checks; the first failure becomes the detail string.
struct Checker {
    CriterionResult& r;
    void measure(const std::string& name, const std::string& value) { r.measured.push_back(name + "=" + value); }
    void require(bool ok, const std::string& what) {
        if (!ok && r.passed) {
            r.passed = false;
            r.detail = what;
        }
    }
};

ModelParams params(HalfInt Jg, LevelMode mode, double Omega, double delta, int threads) {
    ModelParams p;
    p.Jg = Jg;
    p.mode = mode;
    p.Omega = Omega;
    p.delta = delta;
    p.quad.rel_tol = 1e-6;
    p.threads = threads;
    return p;
}

double omega_for(double s, double delta) { return std::sqrt(2.0 * s * (1.0 + delta * delta)); }

double alpha_of(HalfInt Jg, LevelMode mode, double s, const AcceptanceOptions& opt) {
    const CBSModel m(params(Jg, mode, omega_for(s, 0.0), 0.0, opt.threads));
    return assemble_totals(m).alpha;
}

std::vector<double> uniform_grid(double a, double b, double h) {
    std::vector<double> g;
    const long n = std::lround((b - a) / h);
    for (long i = 0; i <= n; ++i) g.push_back(a + i * h);
    return g;
}

void run_a1(Checker& c, const AcceptanceOptions&) {
    double worst_analytic = 0.0, worst_lc = 0.0;
    for (const char* j : {"0", "1/2", "1", "3/2", "3"})
        for (double delta : {0.0, 5.0})
            for (double Omega : {0.3, 2.0, 10.0}) {
                const HalfInt Jg = HalfInt::parse(j);
                const CBSModel m(params(Jg, LevelMode::full, Omega, delta, 1));
                const double L = m.ladder_elastic(), C = m.crossed_elastic();
                const double ref = elastic_intensity_analytic(Jg, delta, saturation(Omega, delta));
                const double e = std::max(rel(L, ref), rel(C, ref));
                worst_analytic = std::max(worst_analytic, e);
                worst_lc = std::max(worst_lc, rel(L, C));
                const std::string tag = "Jg=" + std::string(j) + " delta=" + fix(delta, 0) + " Omega=" + fix(Omega, 1);
                c.require(e <= 1e-6, tag + ": elastic rel error " + sci(e));
                c.require(rel(L, C) <= 1e-12, tag + ": L_el vs C_el rel " + sci(rel(L, C)));
            }
    c.measure("max_rel_vs_analytic", sci(worst_analytic));
    c.measure("max_rel_L_vs_C", sci(worst_lc));
}

void run_a2(Checker& c, const AcceptanceOptions& opt) {
    const auto grid = uniform_grid(-15.0, 15.0, 0.25);
    double worst = 0.0;
    for (auto [Omega, delta] : {std::pair{2.0, 0.0}, std::pair{10.0, 1.5}}) {
        const CBSModel m0(params(HalfInt(0), LevelMode::full, Omega, delta, opt.threads));
        const CBSModel mh(params(HalfInt::parse("1/2"), LevelMode::full, Omega, delta, opt.threads));
        std::vector<double> l0(grid.size()), c0(grid.size()), lh(grid.size()), ch(grid.size());
        parallel_for(static_cast<int>(grid.size()), opt.threads, [&](int i) {
            l0[i] = m0.ladder_inelastic(grid[i]);
            c0[i] = m0.crossed_inelastic(grid[i]);
            lh[i] = mh.ladder_inelastic(grid[i]);
            ch[i] = mh.crossed_inelastic(grid[i]);
        });
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double el = rel(lh[i], l0[i] / 9.0), ec = rel(ch[i], c0[i] / 9.0);
            worst = std::max({worst, el, ec});
            c.require(el <= 1e-6 && ec <= 1e-6, "Omega=" + fix(Omega, 1) + " nu=" + fix(grid[i], 2) +
                                                    ": rel deviation from 1/9 scaling " + sci(std::max(el, ec)));
        }
    }
    c.measure("max_rel_vs_scaled", sci(worst));
}

void run_a3(Checker& c, const AcceptanceOptions& opt) {
    const auto grid = uniform_grid(-12.0, 12.0, 0.01);
    struct Case {
        const char* Jg;
        LevelMode mode;
        std::array<double, 4> binned, predicted;
    };
    const Case cases[] = {
        {"1", LevelMode::full, {-7.1, -2.8, 2.8, 7.1}, {-7.04, -2.96, 2.96, 7.04}},
        {"3", LevelMode::effective, {-8.6, -1.3, 1.3, 8.6}, {-8.66, -1.34, 1.34, 8.66}},
    };
    for (const auto& k : cases) {
        const HalfInt Jg = HalfInt::parse(k.Jg);
        const CBSModel m(params(Jg, k.mode, 10.0, 0.0, opt.threads));
        std::vector<double> L(grid.size());
        parallel_for(static_cast<int>(grid.size()), opt.threads, [&](int i) { L[i] = m.ladder_inelastic(grid[i]); });
        const auto peaks = find_peaks(grid, L, 0.1);
        std::string list;
        for (double p : peaks) list += (list.empty() ? "" : " ") + fix(p, 1);
        c.measure("peaks_Jg" + std::string(k.Jg), "[" + list + "]");
        for (double target : k.binned) {
            const bool found =
                std::any_of(peaks.begin(), peaks.end(), [&](double p) { return std::abs(p - target) <= 0.1 + 1e-9; });
            c.require(found, "Jg=" + std::string(k.Jg) + ": no binned maximum within 0.1 of " + fix(target, 1));
        }
        const DressedResonances d = dressed_resonances(Jg, 10.0, 0.0);
        std::string pred;
        for (int i = 0; i < 4; ++i) {
            pred += (i ? " " : "") + fix(d.nu[i], 3);
            c.require(std::abs(d.nu[i] - k.predicted[i]) <= 0.01,
                      "Jg=" + std::string(k.Jg) + ": predictor " + fix(d.nu[i], 4) + " vs " + fix(k.predicted[i], 2));
        }
        c.measure("predicted_Jg" + std::string(k.Jg), "[" + pred + "]");
    }
}

void run_a4(Checker& c, const AcceptanceOptions&) {
    const SphericalIndex m1(-1), p1(1);
    const cplx a = configuration_average(m1, p1, p1, m1);
    const cplx q = oracle::quad_configuration_average(m1, p1, p1, m1, 64);
    c.measure("analytic", fix(a.real(), 15));
    c.measure("quadrature", fix(q.real(), 15));
    c.require(std::abs(a - 2.0 / 15.0) <= 1e-15, "analytic value differs from 2/15 by " + sci(std::abs(a - 2.0 / 15.0)));
    c.require(std::abs(q - a) <= 1e-10, "quadrature differs by " + sci(std::abs(q - a)));
    double worst = 0.0;
    for (int r : kSphericalValues)
        for (int qq : kSphericalValues)
            for (int qp : kSphericalValues)
                for (int rp : kSphericalValues) {
                    const cplx x = configuration_average(r, qq, qp, rp);
                    const cplx y = oracle::quad_configuration_average(r, qq, qp, rp, 64);
                    worst = std::max(worst, std::abs(x - y));
                }
    c.measure("max_abs_all_81", sci(worst));
    c.require(worst <= 1e-10, "some index combination differs from quadrature by " + sci(worst));
}

void run_a5(Checker& c, const AcceptanceOptions& opt) {
    const HalfInt J0(0), Jh = HalfInt::parse("1/2"), J1 = HalfInt::integer(1), J3 = HalfInt::integer(3);
    // Jg = 3 runs on the truncated manifold, which A7 shows to be exact.
    for (auto [Jg, mode] : {std::pair{J0, LevelMode::full}, std::pair{Jh, LevelMode::full},
                            std::pair{J1, LevelMode::full}, std::pair{J3, LevelMode::effective}}) {
        const double a = alpha_of(Jg, mode, 1e-4, opt);
        c.measure("alpha(Jg=" + Jg.str() + ",s=1e-4)", fix(a, 6));
        c.require(std::abs(a - 2.0) <= 1e-3, "alpha(Jg=" + Jg.str() + ", s=1e-4) = " + fix(a, 6));
    }
    const double a162 = alpha_of(J0, LevelMode::full, 162.0, opt);
    c.measure("alpha(Jg=0,s=162)", fix(a162, 6));
    c.require(std::abs(a162 - 1.095) <= 0.010, "alpha(Jg=0, s=162) = " + fix(a162, 6));

    double worst = 0.0;
    for (double s : {0.05, 0.1, 0.2, 0.3, 1.0, 10.0}) {
        const double a0 = alpha_of(J0, LevelMode::full, s, opt);
        const double ah = alpha_of(Jh, LevelMode::full, s, opt);
        worst = std::max(worst, rel(ah, a0));
        c.require(rel(ah, a0) <= 1e-6, "alpha(1/2) vs alpha(0) at s=" + fix(s, 2) + ": rel " + sci(rel(ah, a0)));
        if (s <= 0.3) {
            const double a1 = alpha_of(J1, LevelMode::full, s, opt);
            const double a3 = alpha_of(J3, LevelMode::effective, s, opt);
            c.measure("alpha(s=" + fix(s, 2) + ") Jg=0,1,3", fix(a0, 6) + "," + fix(a1, 6) + "," + fix(a3, 6));
            c.require(a1 <= a0 && a3 <= a0, "ordering violated at s=" + fix(s, 2));
        }
    }
    c.measure("max_rel_alpha_half_vs_0", sci(worst));
}

bool has_label(const DiagramContribution& d, BlockLabel b) { return d.left == b || d.right == b; }

void run_a6(Checker& c, const AcceptanceOptions&) {
    const auto all = enumerate_contributions(ChannelConfig::hh());
    const bool forbidden = std::any_of(all.begin(), all.end(), [](const DiagramContribution& d) {
        return has_label(d, BlockLabel::c2) && has_label(d, BlockLabel::d2);
    });
    c.require(!forbidden, "(c2)(d2) present in the enumeration");
    c.measure("enumerated", std::to_string(all.size()));
    const BlockLabel zero[] = {BlockLabel::b1, BlockLabel::b2, BlockLabel::b4, BlockLabel::c2, BlockLabel::d2};
    double worst = 0.0;
    int checked = 0;
    for (const char* j : {"0", "1/2", "1", "3/2", "2"})
        for (double Omega : {0.3, 2.0, 10.0})
            for (double delta : {0.0, 2.0}) {
                const CBSModel m(params(HalfInt::parse(j), LevelMode::full, Omega, delta, 1));
                const double scale = CBSModel::kIntensityScale / m.geometric_weight();
                for (const auto& d : all) {
                    if (std::none_of(std::begin(zero), std::end(zero), [&](BlockLabel b) { return has_label(d, b); }))
                        continue;
                    for (double nu : {-3.0, 0.7, 5.0}) {
                        const double v = std::abs(m.evaluate(d, nu)) * scale;
                        worst = std::max(worst, v);
                        ++checked;
                        c.require(v < 1e-12, d.name() + " at Jg=" + std::string(j) + " Omega=" + fix(Omega, 1) +
                                                 ": " + sci(v));
                        if (d.component == Component::elastic) break;
                    }
                }
            }
    c.measure("evaluations", std::to_string(checked));
    c.measure("max_abs", sci(worst));
}

void run_a7(Checker& c, const AcceptanceOptions& opt) {
    const std::vector<double> grid{-9.0, -6.5, -4.0, -2.0, -0.6, -0.05, 0.0, 0.02, 0.4, 1.2, 3.0, 5.0, 7.5, 11.0};
    double worst = 0.0;
    for (int j : {3, 4, 5}) {
        const HalfInt Jg = HalfInt::integer(j);
        const CBSModel full(params(Jg, LevelMode::full, 10.0, 0.0, opt.threads));
        const CBSModel eff(params(Jg, LevelMode::effective, 10.0, 0.0, opt.threads));
        std::vector<double> lf(grid.size()), le(grid.size()), cf(grid.size()), ce(grid.size());
        parallel_for(static_cast<int>(grid.size()), opt.threads, [&](int i) {
            lf[i] = full.ladder_inelastic(grid[i]);
            le[i] = eff.ladder_inelastic(grid[i]);
            cf[i] = full.crossed_inelastic(grid[i]);
            ce[i] = eff.crossed_inelastic(grid[i]);
        });
        double w = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            w = std::max({w, rel(le[i], lf[i]), rel(ce[i], cf[i])});
            c.require(rel(le[i], lf[i]) <= 1e-3 && rel(ce[i], cf[i]) <= 1e-3,
                      "Jg=" + std::to_string(j) + " nu=" + fix(grid[i], 2) + ": effective vs full rel " +
                          sci(std::max(rel(le[i], lf[i]), rel(ce[i], cf[i]))));
        }
        c.measure("max_rel_Jg" + std::to_string(j), sci(w));
        worst = std::max(worst, w);
    }
    const double a40 = alpha_of(HalfInt::integer(40), LevelMode::effective, 162.0, opt);
    const double a500 = alpha_of(HalfInt::integer(500), LevelMode::effective, 162.0, opt);
    c.measure("alpha(Jg=40,s=162)", fix(a40, 6));
    c.measure("alpha(Jg=500,s=162)", fix(a500, 6));
    c.require(std::abs(a40 - 1.0073) <= 0.003, "alpha(Jg=40) = " + fix(a40, 6));
    c.require(std::abs(a500 - 1.017) <= 0.005, "alpha(Jg=500) = " + fix(a500, 6));
}

double rel_l2(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(b[i]);
    }
    return std::sqrt(num / std::max(den, 1e-300));
}

void run_a8(Checker& c, const AcceptanceOptions& opt) {
    struct Case {
        const char* Jg;
        double Omega, omega;
        std::vector<double> grid;
    };
    std::vector<double> fine = uniform_grid(-4.0, 4.0, 0.05);
    for (double x : uniform_grid(-0.2, 0.2, 0.005)) fine.push_back(x);
    std::sort(fine.begin(), fine.end());
    fine.erase(std::unique(fine.begin(), fine.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
               fine.end());
    const Case cases[] = {{"0", 5.0, 1.3, uniform_grid(-12.0, 12.0, 0.1)}, {"1", 0.3, 0.4, fine}};
    const SphericalIndex r(-1), rp(-1);
    for (const auto& k : cases) {
        const HalfInt Jg = HalfInt::parse(k.Jg);
        const auto sys = make_system(Jg, LevelMode::full, k.Omega, 0.0);
        const CBSModel model(sys, params(Jg, LevelMode::full, k.Omega, 0.0, 1));
        std::vector<std::pair<SphericalIndex, SphericalIndex>> channels{{1, 1}, {-1, -1}, {1, -1}};
        double worst = 0.0;
        for (auto [q, qp] : channels) {
            const BlockEvaluator ev(*sys, q, qp);
            for (BlockKind kind : {BlockKind::P0, BlockKind::Pminus, BlockKind::Pplus, BlockKind::Ppm}) {
                InelasticBlockRequest req;
                req.kind = kind;
                req.omega = k.omega;
                req.r = r;
                req.rprime = rp;
                req.q = q;
                req.qprime = qp;
                const auto td = oracle::regression_spectrum(*sys, req, k.grid, oracle::RegressionOptions{});
                std::vector<cplx> rs(k.grid.size());
                for (std::size_t i = 0; i < k.grid.size(); ++i) {
                    const double nu = k.grid[i];
                    switch (kind) {
                        case BlockKind::P0: rs[i] = ev.p0(nu); break;
                        case BlockKind::Pminus: rs[i] = ev.pminus(k.omega, r, nu); break;
                        case BlockKind::Pplus: rs[i] = ev.pplus(k.omega, rp, nu); break;
                        case BlockKind::Ppm: rs[i] = ev.ppm(k.omega, r, rp, nu); break;
                    }
                }
                double norm = 0.0;
                for (const auto& x : rs) norm = std::max(norm, std::abs(x));
                if (norm < 1e-12) continue;  // block vanishes in this channel
                const double e = rel_l2(rs, td);
                worst = std::max(worst, e);
                c.require(e <= 1e-3, "Jg=" + std::string(k.Jg) + " block " + std::to_string(static_cast<int>(kind)) +
                                         " q=" + std::to_string(q.q) + " q'=" + std::to_string(qp.q) +
                                         ": rel L2 " + sci(e));
            }
            // Sum rule against the steady-state density matrix.
            const QuadOptions qo{1e-9, 0.0, 400000};
            const auto integral = integrate_line<cplx>([&](double nu) { return ev.p0(nu); }, model.breakpoints({0.0}), qo);
            const CMatrix rho = sys->basis.density(sys->Q0);
            const CMatrix& Dq = sys->dipoles.lower(q);
            const CMatrix& Dd = sys->dipoles.raise(qp);
            const cplx expected = (Dd * Dq * rho).trace() - (Dd * rho).trace() * (Dq * rho).trace();
            if (std::abs(expected) > 1e-12) {
                const double e = std::abs(integral.value - expected) / std::abs(expected);
                c.require(e <= 1e-4, "Jg=" + std::string(k.Jg) + " sum rule rel " + sci(e));
                c.measure("sum_rule_rel_Jg" + std::string(k.Jg) + "_q" + std::to_string(q.q) + std::to_string(qp.q),
                          sci(e));
            }
        }
        c.measure("max_rel_L2_Jg" + std::string(k.Jg), sci(worst));
    }
    (void)opt;
}

void run_a9(Checker& c, const AcceptanceOptions& opt) {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const char* shapes[] = {"0", "1/2", "1", "3/2"};
    double worst_herm = 0.0, worst_trace = 0.0, min_eig = 1.0, worst_neg = 0.0, max_alpha = 0.0, worst_even = 0.0;
    for (int n = 0; n < 30; ++n) {
        const HalfInt Jg = HalfInt::parse(shapes[static_cast<int>(unit(rng) * 4) % 4]);
        const double Omega = std::exp(std::log(0.5) + unit(rng) * std::log(30.0));
        const double delta = n % 2 == 0 ? 0.0 : -3.0 + 6.0 * unit(rng);
        const std::string tag = "set " + std::to_string(n) + " (Jg=" + Jg.str() + " Omega=" + fix(Omega, 3) +
                                " delta=" + fix(delta, 3) + ")";
        const CBSModel m(params(Jg, LevelMode::full, Omega, delta, opt.threads));

        const CMatrix rho = m.system().basis.density(m.system().Q0);
        const double herm = (rho - rho.adjoint()).norm();
        const double tr = std::abs(rho.trace() - 1.0);
        Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
        const double emin = es.eigenvalues().minCoeff();
        worst_herm = std::max(worst_herm, herm);
        worst_trace = std::max(worst_trace, tr);
        min_eig = std::min(min_eig, emin);
        c.require(herm < 1e-10 && tr < 1e-10 && emin >= -1e-10, tag + ": steady state not a density matrix");

        const double W = m.outer_width() - 15.0;
        const auto grid = uniform_grid(-W, W, 2.0 * W / 40.0);
        std::vector<double> L(grid.size()), C(grid.size()), Lm(grid.size()), Cm(grid.size());
        parallel_for(static_cast<int>(grid.size()), opt.threads, [&](int i) {
            L[i] = m.ladder_inelastic(grid[i]);
            if (delta == 0.0 && grid[i] > 0.0) {
                C[i] = m.crossed_inelastic(grid[i]);
                Lm[i] = m.ladder_inelastic(-grid[i]);
                Cm[i] = m.crossed_inelastic(-grid[i]);
            }
        });
        double lmax = 0.0, lmin = 0.0;
        for (double x : L) {
            lmax = std::max(lmax, std::abs(x));
            lmin = std::min(lmin, x);
        }
        worst_neg = std::max(worst_neg, -lmin / lmax);
        c.require(lmin >= -1e-10 * lmax, tag + ": negative ladder density " + sci(lmin));
        if (delta == 0.0) {
            double cmax = 0.0;
            for (std::size_t i = 0; i < grid.size(); ++i) cmax = std::max(cmax, std::abs(C[i]));
            for (std::size_t i = 0; i < grid.size(); ++i) {
                if (grid[i] <= 0.0) continue;
                const double el = rel(Lm[i], L[i]);
                const double ec = std::abs(Cm[i] - C[i]) / std::max(std::abs(C[i]), 1e-300);
                worst_even = std::max({worst_even, el, ec});
                c.require(el <= 1e-8 && ec <= 1e-8, tag + ": asymmetry at nu=" + fix(grid[i], 3) + " rel " +
                                                         sci(std::max(el, ec)));
            }
        }
        const double a = assemble_totals(m).alpha;
        max_alpha = std::max(max_alpha, a);
        c.require(a <= 2.0 + 1e-9, tag + ": alpha = " + fix(a, 12));
    }
    c.measure("max_hermiticity_defect", sci(worst_herm));
    c.measure("max_trace_defect", sci(worst_trace));
    c.measure("min_population_eigenvalue", sci(min_eig));
    c.measure("max_negative_fraction", sci(worst_neg));
    c.measure("max_alpha", fix(max_alpha, 9));
    c.measure("max_rel_asymmetry", sci(worst_even));
}

struct Entry {
    const char* id;
    double limit;
    void (*fn)(Checker&, const AcceptanceOptions&);
};

const Entry kEntries[] = {
    {"A1", 120, run_a1},  {"A2", 300, run_a2},   {"A3", 600, run_a3},   {"A4", 60, run_a4},   {"A5", 1800, run_a5},
    {"A6", 60, run_a6},   {"A7", 1800, run_a7},  {"A8", 1200, run_a8},  {"A9", 1200, run_a9},
};

}  // namespace

std::vector<std::string> acceptance_ids() {
    std::vector<std::string> ids;
    for (const auto& e : kEntries) ids.emplace_back(e.id);
    return ids;
}

CriterionResult run_criterion(const std::string& id, const AcceptanceOptions& opt) {
    const Entry* entry = nullptr;
    for (const auto& e : kEntries)
        if (id == e.id) entry = &e;
    if (!entry) throw std::invalid_argument("unknown acceptance criterion '" + id + "'");
    CriterionResult r;
    r.id = id;
    r.passed = true;
    r.limit_seconds = entry->limit;
    Checker c{r};
    const auto t0 = Clock::now();
    try {
        entry->fn(c, opt);
    } catch (const std::exception& e) {
        c.require(false, std::string("exception: ") + e.what());
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    c.require(r.seconds <= r.limit_seconds, "runtime " + fix(r.seconds, 1) + " s exceeds " + fix(r.limit_seconds, 0) + " s");
    return r;
}

std::vector<CriterionResult> run_acceptance(const std::vector<std::string>& ids, const AcceptanceOptions& opt,
                                            const std::function<void(const CriterionResult&)>& on_result) {
    std::vector<CriterionResult> out;
    for (const auto& id : ids) {
        out.push_back(run_criterion(id, opt));
        if (on_result) on_result(out.back());
    }
    return out;
}

std::string format_result_line(const CriterionResult& r) {
    std::string s = r.id + (r.passed ? " PASS" : " FAIL");
    for (const auto& m : r.measured) s += " " + m;
    s += " time=" + fix(r.seconds, 1) + "s/" + fix(r.limit_seconds, 0) + "s";
    if (!r.passed) s += " :: " + r.detail;
    return s;
}

std::string acceptance_report_json(const std::vector<CriterionResult>& results) {
    nlohmann::ordered_json j;
    j["version"] = version();
    bool all = true;
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : results) {
        nlohmann::ordered_json e;
        e["id"] = r.id;
        e["passed"] = r.passed;
        e["measured"] = r.measured;
        e["detail"] = r.detail;
        e["seconds"] = r.seconds;
        e["limit_seconds"] = r.limit_seconds;
        arr.push_back(std::move(e));
        all = all && r.passed;
    }
    j["all_passed"] = all;
    j["criteria"] = std::move(arr);
    return j.dump(1) + "\n";
}

}  // namespace cbs
