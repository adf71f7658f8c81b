#include "cbs/bloch.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Eigenvalues>

namespace cbs {

namespace {

// 1/d without the inf/nan handling of the library complex division
inline cplx reciprocal(cplx d) {
    const double n = std::norm(d);
    return {d.real() / n, -d.imag() / n};
}

}  // namespace

Resolvent::Resolvent(const CMatrix& M) {
    // M is block diagonal under a pure sigma drive (coherence order is conserved);
    // factor each connected block of its sparsity pattern separately.
    const int n = static_cast<int>(M.rows());
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    auto find = [&](int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            if (M(i, j) != cplx(0.0)) parent[find(i)] = find(j);
    std::vector<int> slot(n, -1);
    for (int i = 0; i < n; ++i) {
        const int root = find(i);
        if (slot[root] < 0) {
            slot[root] = static_cast<int>(blocks_.size());
            blocks_.emplace_back();
        }
        blocks_[slot[root]].idx.push_back(i);
    }
    eig_.resize(n);
    int k = 0;
    for (auto& b : blocks_) {
        const int m = static_cast<int>(b.idx.size());
        CMatrix sub(m, m);
        for (int j = 0; j < m; ++j)
            for (int i = 0; i < m; ++i) sub(i, j) = M(b.idx[i], b.idx[j]);
        Eigen::ComplexSchur<CMatrix> schur(sub, true);
        if (schur.info() != Eigen::Success) throw NumericalError("Schur factorization of M failed");
        b.Z = schur.matrixU();
        b.T = schur.matrixT();
        b.Trow = b.T;
        eig_.segment(k, m) = b.T.diagonal();
        k += m;
        max_block_ = std::max(max_block_, m);
    }
    scale_ = std::max(1.0, M.cwiseAbs().maxCoeff());
}

CVector Resolvent::apply(cplx z, const CVector& v) const {
    check(z);
    CVector out(v.size()), x(max_block_), y(max_block_);
    for (const auto& b : blocks_) {
        const int m = static_cast<int>(b.idx.size());
        bool zero = true;
        for (int i = 0; i < m; ++i) {
            x(i) = v(b.idx[i]);
            zero = zero && x(i) == cplx(0.0);
        }
        if (zero) {
            for (int i = 0; i < m; ++i) out(b.idx[i]) = 0.0;
            continue;
        }
        y.head(m).noalias() = b.Z.adjoint() * x.head(m);
        // (z - T) is upper triangular with off-diagonal part -T.
        for (int r = m - 1; r >= 0; --r) {
            const cplx acc = y(r) + (b.Trow.row(r).segment(r + 1, m - r - 1) * y.segment(r + 1, m - r - 1))(0);
            y(r) = acc * reciprocal(z - b.T(r, r));
        }
        x.head(m).noalias() = b.Z * y.head(m);
        for (int i = 0; i < m; ++i) out(b.idx[i]) = x(i);
    }
    return out;
}

CVector Resolvent::apply_left(cplx z, const CVector& u) const {
    check(z);
    CVector out(u.size()), x(max_block_), y(max_block_);
    for (const auto& b : blocks_) {
        const int m = static_cast<int>(b.idx.size());
        bool zero = true;
        for (int i = 0; i < m; ++i) {
            x(i) = u(b.idx[i]);
            zero = zero && x(i) == cplx(0.0);
        }
        if (zero) {
            for (int i = 0; i < m; ++i) out(b.idx[i]) = 0.0;
            continue;
        }
        y.head(m).noalias() = b.Z.transpose() * x.head(m);
        // (z - T)^T is lower triangular.
        for (int r = 0; r < m; ++r) {
            const cplx acc = y(r) + (b.T.col(r).head(r).transpose() * y.head(r))(0);
            y(r) = acc * reciprocal(z - b.T(r, r));
        }
        x.head(m).noalias() = b.Z.conjugate() * y.head(m);
        for (int i = 0; i < m; ++i) out(b.idx[i]) = x(i);
    }
    return out;
}

void Resolvent::check(cplx z) const {
    double gap2 = std::numeric_limits<double>::infinity();
    for (int i = 0; i < eig_.size(); ++i) gap2 = std::min(gap2, std::norm(z - eig_(i)));
    const double gap = std::sqrt(gap2);
    if (gap < 1e-13 * scale_)
        throw NumericalError("resolvent evaluated at an eigenvalue of M", scale_ / std::max(gap, 1e-300));
}

CMatrix BlochSystem::heisenberg_rhs(const CMatrix& X) const {
    const CMatrix Pe = excited_projector(scheme);
    const SphericalIndex qL = drive.laser_pol;
    const CMatrix H = dipoles.raise(qL) + dipoles.lower(qL);
    CMatrix out = -kI * drive.delta * (Pe * X - X * Pe) - 0.5 * kI * drive.Omega * (H * X - X * H);
    for (int q : kSphericalValues) {
        const CMatrix& Dd = dipoles.raise(SphericalIndex(q));
        const CMatrix& D = dipoles.lower(SphericalIndex(q));
        out += DriveParams::gamma * (Dd * (X * D - D * X) + (Dd * X - X * Dd) * D);
    }
    return out;
}

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

}  // namespace

BlochSystem build_bloch_system(const LevelScheme& scheme, const DriveParams& drive) {
    if (!(drive.Omega > 0.0)) throw DomainError("Omega must be positive");
    if (!std::isfinite(drive.Omega) || !std::isfinite(drive.delta)) throw DomainError("non-finite drive parameters");

    BlochSystem sys;
    sys.scheme = scheme;
    sys.basis = OperatorBasis(scheme.n_levels());
    sys.dipoles = dipole_components(scheme);
    sys.proj = projection_vectors(sys.basis, sys.dipoles);
    sys.drive = drive;

    const int n0 = scheme.n_levels();
    const int n = sys.basis.dimension();
    sys.M.resize(n, n);
    sys.L.resize(n);
    std::array<std::vector<CVector>, 3> minus_rows, plus_rows;
    for (int i = 0; i < n; ++i) {
        const CMatrix mu = sys.basis.op(i + 1);
        const CMatrix X = sys.heisenberg_rhs(mu);
        sys.M.row(i) = sys.basis.expand(X).transpose();
        sys.L(i) = X.trace() / static_cast<double>(n0);
        for (int r : kSphericalValues) {
            const SphericalIndex sr(r);
            const CMatrix& Dd = sys.dipoles.raise(sr);
            const CMatrix& D = sys.dipoles.lower(sr);
            minus_rows[sr.slot()].push_back(sys.basis.expand(-0.5 * kI * (Dd * mu - mu * Dd)));
            plus_rows[sr.slot()].push_back(sys.basis.expand(-0.5 * kI * (D * mu - mu * D)));
        }
    }
    for (int k = 0; k < 3; ++k) {
        sys.DeltaMinus[k] = rows_to_sparse(minus_rows[k]);
        sys.DeltaPlus[k] = rows_to_sparse(plus_rows[k]);
    }
    sys.resolvent = Resolvent(sys.M);
    sys.Q0 = steady_state(sys);
    return sys;
}

std::shared_ptr<const BlochSystem> make_system(HalfInt Jg, LevelMode mode, double Omega, double delta) {
    DriveParams d;
    d.Omega = Omega;
    d.delta = delta;
    return std::make_shared<const BlochSystem>(build_bloch_system(build_level_scheme(Jg, mode), d));
}

CVector resolvent_apply(const BlochSystem& sys, cplx z, const CVector& v) {
    CVector x = sys.resolvent.apply(z, v);
    CVector res = z * x - sys.M * x - v;
    const double vn = std::max(v.norm(), 1e-300);
    if (res.norm() > 1e-10 * vn) {
        // One step of iterative refinement before giving up.
        x += sys.resolvent.apply(z, -res);
        res = z * x - sys.M * x - v;
        if (res.norm() > 1e-10 * vn)
            throw NumericalError("resolvent residual above tolerance", res.norm() / vn * 1e16);
    }
    return x;
}

CVector steady_state(const BlochSystem& sys) {
    CVector q = resolvent_apply(sys, 0.0, sys.L);
    return q;
}

CVector elastic_minus(const BlochSystem& sys, double omega, SphericalIndex r) {
    return sys.resolvent.apply(cplx(0.0, -omega), sys.delta_minus(r) * sys.Q0);
}

CVector elastic_plus(const BlochSystem& sys, double omega, SphericalIndex rprime) {
    return sys.resolvent.apply(cplx(0.0, omega), sys.delta_plus(rprime) * sys.Q0);
}

ElasticBlocks elastic_blocks(const BlochSystem& sys, double omega, SphericalIndex r, SphericalIndex rprime) {
    ElasticBlocks b;
    b.omega = omega;
    b.r = r;
    b.rprime = rprime;
    b.Q0 = sys.Q0;
    b.Qminus = elastic_minus(sys, omega, r);
    b.Qplus = elastic_plus(sys, omega, rprime);
    b.Qpm = sys.resolvent.apply(0.0, CVector(sys.delta_plus(rprime) * b.Qminus + sys.delta_minus(r) * b.Qplus));
    return b;
}

cplx elastic_amplitude(const BlochSystem& sys, const ElasticBlocks& blocks, SphericalIndex q, Order which,
                       bool conjugate) {
    const CVector& p = conjugate ? sys.proj.u(q) : sys.proj.v(q);
    switch (which) {
        case Order::zeroth: return bilinear(p, blocks.Q0);
        case Order::plus: return bilinear(p, blocks.Qplus);
        case Order::minus: return bilinear(p, blocks.Qminus);
        case Order::pm: return bilinear(p, blocks.Qpm);
    }
    return 0.0;
}

}  // namespace cbs
