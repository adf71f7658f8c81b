#include "cbs/assembler.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace cbs {

namespace {

std::string pol_name(SphericalIndex q) { return q.q > 0 ? "+1" : (q.q < 0 ? "-1" : "0"); }

}  // namespace

std::string ChannelConfig::name() const {
    if (*this == ChannelConfig::hh()) return "hh";
    return "q=" + pol_name(q) + ",q'=" + pol_name(qprime) + ",r=" + pol_name(r) + ",r'=" + pol_name(rprime) +
           ",qD=" + pol_name(detect_pol);
}

std::string label_name(BlockLabel b) {
    static const char* names[] = {"a1", "a2", "b1", "b2", "b3", "b4", "b5", "c1", "c2", "c3", "d1", "d2", "d3"};
    return names[static_cast<int>(b)];
}

std::string DiagramContribution::name() const { return "(" + label_name(left) + ")(" + label_name(right) + ")"; }

std::vector<DiagramContribution> enumerate_contributions(const ChannelConfig& ch) {
    using B = BlockLabel;
    const cplx w = configuration_average(ch.r, ch.q, ch.qprime, ch.rprime);
    std::vector<DiagramContribution> out;
    auto add = [&](DiagramKind k, Component c, B l, B r, bool integral) {
        out.push_back(DiagramContribution{k, c, l, r, w, integral});
    };
    const auto L = DiagramKind::ladder, C = DiagramKind::crossed;
    const auto el = Component::elastic, in = Component::inelastic;
    add(L, el, B::a1, B::b1, false);
    add(L, el, B::a1, B::b2, false);
    add(L, el, B::a1, B::b3, false);
    add(L, el, B::a1, B::b4, false);
    add(L, el, B::a2, B::b1, true);
    add(L, el, B::a2, B::b2, true);
    add(L, in, B::a1, B::b5, false);
    add(L, in, B::a2, B::b3, false);
    add(L, in, B::a2, B::b4, false);
    add(L, in, B::a2, B::b5, true);
    add(C, el, B::c1, B::d1, false);
    add(C, el, B::c1, B::d2, false);
    add(C, el, B::c2, B::d1, false);
    add(C, el, B::c2, B::d3, true);
    add(C, el, B::c3, B::d2, true);
    add(C, in, B::c1, B::d3, false);
    add(C, in, B::c3, B::d1, false);
    add(C, in, B::c3, B::d3, true);
    return out;
}

CBSModel::CBSModel(const ModelParams& p) : sys_(make_system(p.Jg, p.mode, p.Omega, p.delta)), p_(p) { init(); }

CBSModel::CBSModel(std::shared_ptr<const BlochSystem> sys, const ModelParams& p) : sys_(std::move(sys)), p_(p) {
    init();
}

void CBSModel::init() {
    const ChannelConfig& ch = p_.channel;
    if (!(ch.pump_pol == sys_->drive.laser_pol)) throw DomainError("channel pump polarization differs from drive");
    weight_ = configuration_average(ch.r, ch.q, ch.qprime, ch.rprime);
    atom1_ = std::make_unique<BlockEvaluator>(*sys_, ch.q, ch.qprime);
    ladder2_ = std::make_unique<BlockEvaluator>(*sys_, ch.detect_pol, ch.detect_pol);
    crossC_ = std::make_unique<BlockEvaluator>(*sys_, ch.q, ch.detect_pol);
    crossD_ = std::make_unique<BlockEvaluator>(*sys_, ch.detect_pol, ch.qprime);

    // Resonance centers |Im lambda| of M. A center closer to the previous one
    // than a quarter of the narrower width (or 1e-3) is merged into it.
    std::vector<std::pair<double, double>> feats;
    const CVector& ev = sys_->resolvent.eigenvalues();
    for (int i = 0; i < ev.size(); ++i) feats.emplace_back(std::abs(ev(i).imag()), std::abs(ev(i).real()));
    feats.emplace_back(0.0, 1e9);
    std::sort(feats.begin(), feats.end());
    for (const auto& [c, w] : feats) {
        if (!centers_.empty() && c - centers_.back() < std::max(1e-3, 1.0 * std::min(w, slow_widths_.back()))) {
            slow_widths_.back() = std::min(slow_widths_.back(), w);
            continue;
        }
        centers_.push_back(c);
        slow_widths_.push_back(w);
    }
    // Absolute floor tied to the single-atom emission scale, so that negligible
    // inner integrals do not drive refinement.
    quad_ = p_.quad;
    const double t1 = std::abs(atom1_->fluctuation_strength()) + std::abs(a1());
    const double t2 = std::abs(ladder2_->fluctuation_strength()) +
                      std::abs(bilinear(sys_->proj.u(ch.detect_pol), sys_->Q0) *
                               bilinear(sys_->proj.v(ch.detect_pol), sys_->Q0));
    quad_.abs_tol = std::max(quad_.abs_tol, 1e-4 * quad_.rel_tol * t1 * t2 * std::abs(weight_));
    active_ = prune(1e-13);
}

double CBSModel::outer_width() const { return std::hypot(p_.Omega, p_.delta) + 25.0; }

std::vector<double> CBSModel::breakpoints(const std::vector<double>& shifts) const {
    std::vector<double> pts;
    const double W = outer_width();
    for (double s : shifts) {
        pts.push_back(s - W);
        pts.push_back(s + W);
        for (std::size_t i = 0; i < centers_.size(); ++i) {
            const double w = slow_widths_[i];
            for (double sign : {-1.0, 1.0}) {
                const double p = s + sign * centers_[i];
                pts.push_back(p);
                if (w < 0.5)
                    for (double k : {1.0, 4.0, 16.0})
                        if (w * k < 3.0) {
                            pts.push_back(p - w * k);
                            pts.push_back(p + w * k);
                        }
            }
        }
    }
    std::sort(pts.begin(), pts.end());
    std::vector<double> out;
    for (double x : pts)
        if (out.empty() || x - out.back() > 1e-9 * std::max(1.0, std::abs(x))) out.push_back(x);
    return out;
}

cplx CBSModel::integrate(const std::function<cplx(double)>& f, const std::vector<double>& shifts,
                         QuadDiagnostics* diag) const {
    auto r = integrate_line<cplx>(f, breakpoints(shifts), quad_);
    if (diag) {
        diag->evals += r.evals;
        if (!r.converged) ++diag->unconverged;
        diag->max_error_estimate = std::max(diag->max_error_estimate, r.error / std::max(std::abs(r.value), 1e-300));
    }
    return r.value;
}

cplx CBSModel::a1() const {
    const ChannelConfig& ch = p_.channel;
    return bilinear(sys_->proj.u(ch.qprime), sys_->Q0) * bilinear(sys_->proj.v(ch.q), sys_->Q0);
}

cplx CBSModel::a2(double w) const { return atom1_->p0(w); }

cplx CBSModel::b_elastic(BlockLabel b, double w) const {
    const ChannelConfig& ch = p_.channel;
    const CVector& U = sys_->proj.u(ch.detect_pol);
    const CVector& V = sys_->proj.v(ch.detect_pol);
    const CVector& Q0 = sys_->Q0;
    switch (b) {
        case BlockLabel::b1: {
            auto s = ladder2_->full_order(w, ch.r, ch.rprime);
            return bilinear(U, Q0) * bilinear(V, s.Q);
        }
        case BlockLabel::b2: {
            auto s = ladder2_->full_order(w, ch.r, ch.rprime);
            return bilinear(U, s.Q) * bilinear(V, Q0);
        }
        case BlockLabel::b3:
            return bilinear(U, ladder2_->plus_order(w, ch.rprime).Q) * bilinear(V, ladder2_->minus_order(w, ch.r).Q);
        case BlockLabel::b4:
            return bilinear(U, ladder2_->minus_order(w, ch.r).Q) * bilinear(V, ladder2_->plus_order(w, ch.rprime).Q);
        default: throw DomainError("not an elastic ladder block: " + label_name(b));
    }
}

cplx CBSModel::b5(double w, double nu) const { return ladder2_->ppm(w, p_.channel.r, p_.channel.rprime, nu); }

cplx CBSModel::c_elastic(BlockLabel c, double w) const {
    const ChannelConfig& ch = p_.channel;
    const CVector& Q0 = sys_->Q0;
    const CVector& Qp = crossC_->plus_order(w, ch.rprime).Q;
    if (c == BlockLabel::c1) return bilinear(sys_->proj.v(ch.q), Q0) * bilinear(sys_->proj.u(ch.detect_pol), Qp);
    if (c == BlockLabel::c2) return bilinear(sys_->proj.u(ch.detect_pol), Q0) * bilinear(sys_->proj.v(ch.q), Qp);
    throw DomainError("not an elastic crossed block: " + label_name(c));
}

cplx CBSModel::c3(double w, double nu) const { return crossC_->pplus(w, p_.channel.rprime, nu); }

cplx CBSModel::d_elastic(BlockLabel d, double w) const {
    const ChannelConfig& ch = p_.channel;
    const CVector& Q0 = sys_->Q0;
    const CVector& Qm = crossD_->minus_order(w, ch.r).Q;
    if (d == BlockLabel::d1) return bilinear(sys_->proj.u(ch.qprime), Q0) * bilinear(sys_->proj.v(ch.detect_pol), Qm);
    if (d == BlockLabel::d2) return bilinear(sys_->proj.v(ch.detect_pol), Q0) * bilinear(sys_->proj.u(ch.qprime), Qm);
    throw DomainError("not an elastic crossed block: " + label_name(d));
}

cplx CBSModel::d3(double w, double nu) const { return crossD_->pminus(w, p_.channel.r, nu); }

cplx CBSModel::crossed_inner(double nu, QuadDiagnostics* diag) const {
    const auto cc = crossC_->context(nu);
    const auto dc = crossD_->context(nu);
    const ChannelConfig& ch = p_.channel;
    return integrate([&](double x) { return crossC_->pplus(x, ch.rprime, cc) * crossD_->pminus(nu - x, ch.r, dc); },
                     {0.0, nu}, diag);
}

bool CBSModel::block_vanishes(BlockLabel b, double threshold) const {
    const double probes[3] = {0.0, 0.37 * outer_width() / 10.0, -1.3};
    double m = 0.0;
    for (double w : probes) {
        cplx v;
        switch (b) {
            case BlockLabel::a1: v = a1(); break;
            case BlockLabel::a2: v = a2(w); break;
            case BlockLabel::b1:
            case BlockLabel::b2:
            case BlockLabel::b3:
            case BlockLabel::b4: v = b_elastic(b, w); break;
            case BlockLabel::b5: v = b5(w, 0.5 * w + 0.21); break;
            case BlockLabel::c1:
            case BlockLabel::c2: v = c_elastic(b, w); break;
            case BlockLabel::c3: v = c3(w, 0.5 * w + 0.21); break;
            case BlockLabel::d1:
            case BlockLabel::d2: v = d_elastic(b, w); break;
            case BlockLabel::d3: v = d3(w, 0.5 * w + 0.21); break;
        }
        m = std::max(m, std::abs(v));
    }
    return m < threshold;
}

std::vector<DiagramContribution> CBSModel::prune(double threshold) const {
    std::vector<DiagramContribution> out;
    for (const auto& c : enumerate_contributions(p_.channel)) {
        if (std::abs(c.weight) < threshold) continue;
        if (block_vanishes(c.left, threshold) || block_vanishes(c.right, threshold)) continue;
        out.push_back(c);
    }
    return out;
}

cplx CBSModel::evaluate(const DiagramContribution& c, double nu, QuadDiagnostics* diag) const {
    using B = BlockLabel;
    const cplx w = c.weight;
    if (w == cplx(0.0)) return 0.0;
    auto pair = [&](B l, B r) { return c.left == l && c.right == r; };

    if (pair(B::a1, B::b1) || pair(B::a1, B::b2) || pair(B::a1, B::b3) || pair(B::a1, B::b4))
        return w * a1() * b_elastic(c.right, 0.0);
    if (pair(B::a2, B::b1) || pair(B::a2, B::b2))
        return w * integrate([&](double x) { return a2(x) * b_elastic(c.right, x); }, {0.0}, diag);
    if (pair(B::a1, B::b5)) return w * a1() * b5(0.0, nu);
    if (pair(B::a2, B::b3)) return w * a2(nu) * b_elastic(B::b3, nu);
    if (pair(B::a2, B::b4)) return w * a2(-nu) * b_elastic(B::b4, -nu);
    if (pair(B::a2, B::b5)) {
        const auto ctx = ladder2_->context(nu);
        const ChannelConfig& ch = p_.channel;
        return w * integrate([&](double x) { return a2(x) * ladder2_->ppm(x, ch.r, ch.rprime, ctx); },
                             {0.0, nu, -nu}, diag);
    }

    if (pair(B::c1, B::d1) || pair(B::c1, B::d2) || pair(B::c2, B::d1))
        return w * c_elastic(c.left, 0.0) * d_elastic(c.right, 0.0);
    if (pair(B::c2, B::d3))
        return w * integrate([&](double x) { return c_elastic(B::c2, x) * d3(-x, 0.0); }, {0.0}, diag);
    if (pair(B::c3, B::d2))
        return w * integrate([&](double x) { return c3(x, 0.0) * d_elastic(B::d2, -x); }, {0.0}, diag);
    if (pair(B::c1, B::d3)) return w * c_elastic(B::c1, nu) * d3(0.0, nu);
    if (pair(B::c3, B::d1)) return w * c3(0.0, nu) * d_elastic(B::d1, nu);
    if (pair(B::c3, B::d3)) return w * crossed_inner(nu, diag);

    throw DomainError("contribution not allowed by the combination rules: " + c.name());
}

namespace {

cplx sum_component(const CBSModel& m, DiagramKind k, Component comp, double nu, QuadDiagnostics* diag) {
    cplx s = 0.0;
    for (const auto& c : m.active_contributions())
        if (c.kind == k && c.component == comp) s += m.evaluate(c, nu, diag);
    return s;
}

}  // namespace

double CBSModel::ladder_elastic() const {
    return kIntensityScale * (sum_component(*this, DiagramKind::ladder, Component::elastic, 0.0, nullptr) / weight_).real();
}

double CBSModel::crossed_elastic() const {
    return kIntensityScale * (sum_component(*this, DiagramKind::crossed, Component::elastic, 0.0, nullptr) / weight_).real();
}

double CBSModel::ladder_inelastic(double nu, QuadDiagnostics* diag) const {
    return kIntensityScale * (sum_component(*this, DiagramKind::ladder, Component::inelastic, nu, diag) / weight_).real();
}

double CBSModel::crossed_inelastic(double nu, QuadDiagnostics* diag, double* imag) const {
    const cplx v = kIntensityScale * sum_component(*this, DiagramKind::crossed, Component::inelastic, nu, diag) / weight_;
    if (imag) *imag = v.imag();
    return v.real();
}

double CBSModel::ladder_inelastic_total(QuadDiagnostics* diag) const {
    using B = BlockLabel;
    const ChannelConfig& ch = p_.channel;
    cplx s = 0.0;
    for (const auto& c : active_contributions()) {
        if (c.kind != DiagramKind::ladder || c.component != Component::inelastic) continue;
        // Integrals over nu of the (b5) block reduce to equal-time correlations.
        if (c.left == B::a1 && c.right == B::b5)
            s += a1() * ladder2_->ppm_integrated(0.0, ch.r, ch.rprime);
        else if (c.left == B::a2 && c.right == B::b3)
            s += integrate([&](double x) { return a2(x) * b_elastic(B::b3, x); }, {0.0}, diag);
        else if (c.left == B::a2 && c.right == B::b4)
            s += integrate([&](double x) { return a2(x) * b_elastic(B::b4, x); }, {0.0}, diag);
        else if (c.left == B::a2 && c.right == B::b5)
            s += integrate([&](double x) { return a2(x) * ladder2_->ppm_integrated(x, ch.r, ch.rprime); }, {0.0},
                           diag);
    }
    return kIntensityScale * s.real();
}

double CBSModel::crossed_inelastic_total(QuadDiagnostics* diag) const {
    using B = BlockLabel;
    cplx s = 0.0;
    for (const auto& c : active_contributions()) {
        if (c.kind != DiagramKind::crossed || c.component != Component::inelastic) continue;
        if (c.left == B::c1 && c.right == B::d3)
            s += integrate([&](double nu) { return c_elastic(B::c1, nu) * d3(0.0, nu); }, {0.0}, diag);
        else if (c.left == B::c3 && c.right == B::d1)
            s += integrate([&](double nu) { return c3(0.0, nu) * d_elastic(B::d1, nu); }, {0.0}, diag);
        else if (c.left == B::c3 && c.right == B::d3)
            s += integrate([&](double nu) { return crossed_inner(nu, diag); }, {0.0}, diag);
    }
    return kIntensityScale * s.real();
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr err;
    std::mutex err_mutex;
    std::vector<std::thread> pool;
    for (int t = 0; t < std::min(threads, n); ++t)
        pool.emplace_back([&]() {
            for (int i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(err_mutex);
                    if (!err) err = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

SpectrumResult assemble_totals(const CBSModel& m) {
    SpectrumResult r;
    r.L_el = m.ladder_elastic();
    r.C_el = m.crossed_elastic();
    r.L_in = m.ladder_inelastic_total(&r.diag);
    r.C_in = m.crossed_inelastic_total(&r.diag);
    const double Lt = r.L_el + r.L_in;
    if (!(Lt > 0.0)) throw NumericalError("total ladder intensity is not positive");
    r.alpha = 1.0 + (r.C_el + r.C_in) / Lt;
    return r;
}

SpectrumResult assemble_spectra(const CBSModel& m, const std::vector<double>& grid, bool with_crossed) {
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw DomainError("frequency grid must be strictly increasing");
    SpectrumResult r = with_crossed ? assemble_totals(m) : SpectrumResult{};
    if (!with_crossed) {
        r.L_el = m.ladder_elastic();
        r.C_el = m.crossed_elastic();
        r.L_in = m.ladder_inelastic_total(&r.diag);
        r.alpha = std::nan("");
    }
    const int n = static_cast<int>(grid.size());
    r.grid = grid;
    r.ladder_in.assign(n, 0.0);
    r.crossed_in.assign(n, 0.0);
    std::vector<QuadDiagnostics> diags(n);
    std::vector<double> imags(n, 0.0);
    parallel_for(n, m.params().threads, [&](int i) {
        r.ladder_in[i] = m.ladder_inelastic(grid[i], &diags[i]);
        if (with_crossed) r.crossed_in[i] = m.crossed_inelastic(grid[i], &diags[i], &imags[i]);
    });
    double cmax = 0.0;
    for (int i = 0; i < n; ++i) {
        r.diag.evals += diags[i].evals;
        r.diag.unconverged += diags[i].unconverged;
        r.diag.max_error_estimate = std::max(r.diag.max_error_estimate, diags[i].max_error_estimate);
        cmax = std::max(cmax, std::abs(r.crossed_in[i]));
    }
    for (int i = 0; i < n; ++i) r.max_crossed_imag = std::max(r.max_crossed_imag, std::abs(imags[i]) / std::max(cmax, 1e-300));
    return r;
}

SpectrumResult assemble_spectra(const ModelParams& p, const std::vector<double>& grid, bool with_crossed) {
    CBSModel m(p);
    return assemble_spectra(m, grid, with_crossed);
}

std::vector<double> default_grid(HalfInt Jg, double Omega, double delta, double step) {
    if (!(step > 0.0)) throw DomainError("grid step must be positive");
    const double W = std::hypot(Omega, delta) + 10.0;
    const int n = static_cast<int>(std::ceil(W / step));
    std::vector<double> g;
    for (int i = -n; i <= n; ++i) g.push_back(i * step);
    if (Jg.twice >= 2) {
        for (double x = 1e-4; x < step; x *= 1.5) {
            g.push_back(x);
            g.push_back(-x);
        }
    }
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

}  // namespace cbs
