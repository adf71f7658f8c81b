#include "cbs/regression.hpp"

#include <bit>
#include <vector>

namespace cbs {

namespace {

SparseC rows_to_sparse(const std::vector<CVector>& rows) {
    const int n = static_cast<int>(rows.size());
    std::vector<Eigen::Triplet<cplx>> trips;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < rows[i].size(); ++j)
            if (rows[i](j) != cplx(0.0)) trips.emplace_back(i, j, rows[i](j));
    SparseC s(n, n);
    s.setFromTriplets(trips.begin(), trips.end());
    s.makeCompressed();
    return s;
}

constexpr double kInv2Pi = 1.0 / (2.0 * kPi);

}  // namespace

StructureMatrices structure_matrices(const OperatorBasis& basis, const DipoleComponents& dip, SphericalIndex q,
                                     SphericalIndex qprime) {
    const int n = basis.dimension();
    const double n0 = basis.n_levels();
    const CMatrix& D = dip.lower(q);
    const CMatrix& Dd = dip.raise(qprime);
    std::vector<CVector> r1, r2;
    StructureMatrices s;
    s.L1.resize(n);
    s.L2.resize(n);
    for (int i = 0; i < n; ++i) {
        const CMatrix mu = basis.op(i + 1);
        const CMatrix a = mu * D;
        const CMatrix b = Dd * mu;
        r1.push_back(basis.expand(a));
        r2.push_back(basis.expand(b));
        s.L1(i) = a.trace() / n0;
        s.L2(i) = b.trace() / n0;
    }
    s.A1 = rows_to_sparse(r1);
    s.A2 = rows_to_sparse(r2);
    return s;
}

RegressionInitials regression_initials(const BlochSystem& sys, const ElasticBlocks& e, SphericalIndex q,
                                       SphericalIndex qprime) {
    const StructureMatrices sm = structure_matrices(sys.basis, sys.dipoles, q, qprime);
    const CVector& V = sys.proj.v(q);
    const CVector& U = sys.proj.u(qprime);
    const cplx d0 = bilinear(V, e.Q0), dp = bilinear(V, e.Qplus), dm = bilinear(V, e.Qminus),
               dpm = bilinear(V, e.Qpm);
    const cplx u0 = bilinear(U, e.Q0), up = bilinear(U, e.Qplus), um = bilinear(U, e.Qminus),
               upm = bilinear(U, e.Qpm);

    RegressionInitials r;
    r.omega = e.omega;
    r.r = e.r;
    r.rprime = e.rprime;
    r.q = q;
    r.qprime = qprime;
    r.f0 = sm.A1 * e.Q0 + sm.L1 - e.Q0 * d0;
    r.fplus = sm.A1 * e.Qplus - e.Qplus * d0 - e.Q0 * dp;
    r.fminus = sm.A1 * e.Qminus - e.Qminus * d0 - e.Q0 * dm;
    r.fpm = sm.A1 * e.Qpm - e.Qpm * d0 - e.Q0 * dpm - e.Qplus * dm - e.Qminus * dp;
    r.h0 = sm.A2 * e.Q0 + sm.L2 - e.Q0 * u0;
    r.hplus = sm.A2 * e.Qplus - e.Qplus * u0 - e.Q0 * up;
    r.hminus = sm.A2 * e.Qminus - e.Qminus * u0 - e.Q0 * um;
    r.hpm = sm.A2 * e.Qpm - e.Qpm * u0 - e.Q0 * upm - e.Qplus * um - e.Qminus * up;
    return r;
}

cplx inelastic_block(const BlochSystem& sys, const RegressionInitials& in, const InelasticBlockRequest& req) {
    const Resolvent& G = sys.resolvent;
    const CVector& U = sys.proj.u(req.qprime);
    const CVector& V = sys.proj.v(req.q);
    const double nu = req.nu, w = req.omega;
    const SparseC& Dm = sys.delta_minus(req.r);
    const SparseC& Dp = sys.delta_plus(req.rprime);
    auto iz = [](double x) { return cplx(0.0, x); };

    cplx f = 0.0, h = 0.0;
    switch (req.kind) {
        case BlockKind::P0:
            f = bilinear(U, G.apply(iz(nu), in.f0));
            h = bilinear(V, G.apply(iz(-nu), in.h0));
            break;
        case BlockKind::Pminus:
            f = bilinear(U, G.apply(iz(nu - w), CVector(Dm * G.apply(iz(nu), in.f0) + in.fminus)));
            h = bilinear(V, G.apply(iz(-nu), CVector(Dm * G.apply(iz(w - nu), in.h0) + in.hminus)));
            break;
        case BlockKind::Pplus:
            f = bilinear(U, G.apply(iz(nu), CVector(Dp * G.apply(iz(nu - w), in.f0) + in.fplus)));
            h = bilinear(V, G.apply(iz(w - nu), CVector(Dp * G.apply(iz(-nu), in.h0) + in.hplus)));
            break;
        case BlockKind::Ppm: {
            const CVector fp = G.apply(iz(nu + w), CVector(Dp * G.apply(iz(nu), in.f0) + in.fplus));
            const CVector fm = G.apply(iz(nu - w), CVector(Dm * G.apply(iz(nu), in.f0) + in.fminus));
            f = bilinear(U, G.apply(iz(nu), CVector(Dm * fp + Dp * fm + in.fpm)));
            const CVector hp = G.apply(iz(w - nu), CVector(Dp * G.apply(iz(-nu), in.h0) + in.hplus));
            const CVector hm = G.apply(iz(-nu - w), CVector(Dm * G.apply(iz(-nu), in.h0) + in.hminus));
            h = bilinear(V, G.apply(iz(-nu), CVector(Dm * hp + Dp * hm + in.hpm)));
            break;
        }
    }
    return kInv2Pi * (f + h);
}

BlockEvaluator::BlockEvaluator(const BlochSystem& sys, SphericalIndex q, SphericalIndex qprime)
    : sys_(sys), q_(q), qp_(qprime), sm_(structure_matrices(sys.basis, sys.dipoles, q, qprime)) {
    d0_ = bilinear(sys.proj.v(q), sys.Q0);
    dd0_ = bilinear(sys.proj.u(qprime), sys.Q0);
    f0_ = sm_.A1 * sys.Q0 + sm_.L1 - sys.Q0 * d0_;
    h0_ = sm_.A2 * sys.Q0 + sm_.L2 - sys.Q0 * dd0_;
}

BlockEvaluator::FirstOrder BlockEvaluator::first_order(const CVector& Q) const {
    FirstOrder o;
    o.Q = Q;
    o.f = sm_.A1 * Q - Q * d0_ - sys_.Q0 * bilinear(sys_.proj.v(q_), Q);
    o.h = sm_.A2 * Q - Q * dd0_ - sys_.Q0 * bilinear(sys_.proj.u(qp_), Q);
    return o;
}

BlockEvaluator::FirstOrder BlockEvaluator::cached(double omega, int tag, SphericalIndex pol) const {
    const Key key{std::bit_cast<std::uint64_t>(omega), tag * 4 + pol.slot()};
    {
        std::shared_lock lock(mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    FirstOrder o = first_order(tag == 0 ? elastic_minus(sys_, omega, pol) : elastic_plus(sys_, omega, pol));
    std::unique_lock lock(mutex_);
    if (cache_.size() > 200000) cache_.clear();
    return cache_.emplace(key, std::move(o)).first->second;
}

BlockEvaluator::FirstOrder BlockEvaluator::minus_order(double omega, SphericalIndex r) const {
    return cached(omega, 0, r);
}

BlockEvaluator::FirstOrder BlockEvaluator::plus_order(double omega, SphericalIndex rprime) const {
    return cached(omega, 1, rprime);
}

BlockEvaluator::SecondOrder BlockEvaluator::full_order(double omega, SphericalIndex r, SphericalIndex rprime) const {
    SecondOrder s;
    s.minus = minus_order(omega, r);
    s.plus = plus_order(omega, rprime);
    s.Q = sys_.resolvent.apply(0.0, CVector(sys_.delta_plus(rprime) * s.minus.Q + sys_.delta_minus(r) * s.plus.Q));
    const CVector& V = sys_.proj.v(q_);
    const CVector& U = sys_.proj.u(qp_);
    const cplx dm = bilinear(V, s.minus.Q), dp = bilinear(V, s.plus.Q);
    const cplx um = bilinear(U, s.minus.Q), up = bilinear(U, s.plus.Q);
    s.f = sm_.A1 * s.Q - s.Q * d0_ - sys_.Q0 * bilinear(V, s.Q) - s.plus.Q * dm - s.minus.Q * dp;
    s.h = sm_.A2 * s.Q - s.Q * dd0_ - sys_.Q0 * bilinear(U, s.Q) - s.plus.Q * um - s.minus.Q * up;
    return s;
}

std::size_t BlockEvaluator::cache_size() const {
    std::shared_lock lock(mutex_);
    return cache_.size();
}

void BlockEvaluator::clear_cache() const {
    std::unique_lock lock(mutex_);
    cache_.clear();
}

cplx BlockEvaluator::p0(double nu) const {
    const Resolvent& G = sys_.resolvent;
    return kInv2Pi * (bilinear(sys_.proj.u(qp_), G.apply(cplx(0, nu), f0_)) +
                      bilinear(sys_.proj.v(q_), G.apply(cplx(0, -nu), h0_)));
}

BlockEvaluator::NuContext BlockEvaluator::context(double nu) const {
    const Resolvent& G = sys_.resolvent;
    NuContext c;
    c.nu = nu;
    c.gf = G.apply(cplx(0, nu), f0_);
    c.gh = G.apply(cplx(0, -nu), h0_);
    c.lu = G.apply_left(cplx(0, nu), sys_.proj.u(qp_));
    c.lv = G.apply_left(cplx(0, -nu), sys_.proj.v(q_));
    return c;
}

cplx BlockEvaluator::pminus(double w, SphericalIndex r, const NuContext& c) const {
    const Resolvent& G = sys_.resolvent;
    const SparseC& Dm = sys_.delta_minus(r);
    const FirstOrder m = minus_order(w, r);
    const cplx f = bilinear(sys_.proj.u(qp_), G.apply(cplx(0, c.nu - w), CVector(Dm * c.gf + m.f)));
    const cplx h = bilinear(c.lv, CVector(Dm * G.apply(cplx(0, w - c.nu), h0_) + m.h));
    return kInv2Pi * (f + h);
}

cplx BlockEvaluator::pplus(double w, SphericalIndex rprime, const NuContext& c) const {
    const Resolvent& G = sys_.resolvent;
    const SparseC& Dp = sys_.delta_plus(rprime);
    const FirstOrder p = plus_order(w, rprime);
    const cplx f = bilinear(c.lu, CVector(Dp * G.apply(cplx(0, c.nu - w), f0_) + p.f));
    const cplx h = bilinear(sys_.proj.v(q_), G.apply(cplx(0, w - c.nu), CVector(Dp * c.gh + p.h)));
    return kInv2Pi * (f + h);
}

cplx BlockEvaluator::ppm(double w, SphericalIndex r, SphericalIndex rprime, const NuContext& c) const {
    const Resolvent& G = sys_.resolvent;
    const SparseC& Dm = sys_.delta_minus(r);
    const SparseC& Dp = sys_.delta_plus(rprime);
    const double nu = c.nu;
    const SecondOrder s = full_order(w, r, rprime);
    const CVector fp = G.apply(cplx(0, nu + w), CVector(Dp * c.gf + s.plus.f));
    const CVector fm = G.apply(cplx(0, nu - w), CVector(Dm * c.gf + s.minus.f));
    const cplx f = bilinear(c.lu, CVector(Dm * fp + Dp * fm + s.f));
    const CVector hp = G.apply(cplx(0, w - nu), CVector(Dp * c.gh + s.plus.h));
    const CVector hm = G.apply(cplx(0, -nu - w), CVector(Dm * c.gh + s.minus.h));
    const cplx h = bilinear(c.lv, CVector(Dm * hp + Dp * hm + s.h));
    return kInv2Pi * (f + h);
}

cplx BlockEvaluator::pminus(double w, SphericalIndex r, double nu) const { return pminus(w, r, context(nu)); }

cplx BlockEvaluator::pplus(double w, SphericalIndex rprime, double nu) const { return pplus(w, rprime, context(nu)); }

cplx BlockEvaluator::ppm(double w, SphericalIndex r, SphericalIndex rprime, double nu) const {
    return ppm(w, r, rprime, context(nu));
}

cplx BlockEvaluator::ppm_integrated(double w, SphericalIndex r, SphericalIndex rprime) const {
    return bilinear(sys_.proj.u(qp_), full_order(w, r, rprime).f);
}

cplx BlockEvaluator::fluctuation_strength() const { return bilinear(sys_.proj.u(qp_), f0_); }

}  // namespace cbs
