#include "cbs/atom.hpp"

namespace cbs {

int LevelScheme::ground_index(HalfInt m) const {
    for (int i = 0; i < n_ground(); ++i)
        if (ground_m[i] == m) return i;
    return -1;
}

int LevelScheme::excited_index(HalfInt m) const {
    for (int i = 0; i < n_excited(); ++i)
        if (excited_m[i] == m) return n_ground() + i;
    return -1;
}

LevelScheme build_level_scheme(HalfInt Jg, LevelMode mode) {
    if (Jg.twice < 0) throw DomainError("Jg must be non-negative");
    LevelScheme s;
    s.Jg = Jg;
    s.Je = Jg + HalfInt::integer(1);
    s.mode = mode;
    if (mode == LevelMode::full) {
        for (int t = -Jg.twice; t <= Jg.twice; t += 2) s.ground_m.push_back(HalfInt{t});
        for (int t = -s.Je.twice; t <= s.Je.twice; t += 2) s.excited_m.push_back(HalfInt{t});
    } else {
        if (Jg.twice < 2) throw DomainError("effective mode requires Jg >= 1");
        for (int k = 2; k >= 0; --k) {
            s.ground_m.push_back(HalfInt{Jg.twice - 2 * k});
            s.excited_m.push_back(HalfInt{s.Je.twice - 2 * k});
        }
    }
    return s;
}

OperatorBasis::OperatorBasis(int n_levels) : n0_(n_levels) {
    if (n_levels < 2) throw DomainError("operator basis needs at least two levels");
}

int OperatorBasis::transition_index(int a, int b) const {
    // Off-diagonal pairs enumerated row by row, skipping the diagonal.
    return n0_ + a * (n0_ - 1) + (b < a ? b : b - 1);
}

CMatrix OperatorBasis::op(int idx) const {
    CMatrix m = CMatrix::Zero(n0_, n0_);
    if (idx == 0) {
        m.setIdentity();
    } else if (idx < n0_) {
        for (int l = 0; l < idx; ++l) m(l, l) = 1.0;
        m(idx, idx) = -static_cast<double>(idx);
    } else {
        int t = idx - n0_;
        int a = t / (n0_ - 1);
        int b = t % (n0_ - 1);
        if (b >= a) ++b;
        m(a, b) = 1.0;
    }
    return m;
}

CMatrix OperatorBasis::dual(int idx) const {
    CMatrix m = op(idx);
    if (idx == 0) return m / static_cast<double>(n0_);
    if (idx < n0_) return m / static_cast<double>(idx * (idx + 1));
    return m.transpose();
}

CVector OperatorBasis::expand(const CMatrix& X) const {
    CVector c(dimension());
    cplx running = 0.0;
    for (int k = 1; k < n0_; ++k) {
        running += X(k - 1, k - 1);
        c(k - 1) = (running - static_cast<double>(k) * X(k, k)) / static_cast<double>(k * (k + 1));
    }
    for (int a = 0; a < n0_; ++a)
        for (int b = 0; b < n0_; ++b)
            if (a != b) c(transition_index(a, b) - 1) = X(a, b);
    return c;
}

CVector OperatorBasis::coordinates(const CMatrix& rho) const {
    CVector c(dimension());
    cplx running = 0.0;
    for (int k = 1; k < n0_; ++k) {
        running += rho(k - 1, k - 1);
        c(k - 1) = running - static_cast<double>(k) * rho(k, k);
    }
    for (int a = 0; a < n0_; ++a)
        for (int b = 0; b < n0_; ++b)
            if (a != b) c(transition_index(a, b) - 1) = rho(b, a);
    return c;
}

CMatrix OperatorBasis::density(const CVector& Q) const {
    CMatrix rho = CMatrix::Identity(n0_, n0_) / static_cast<double>(n0_);
    for (int k = 1; k < n0_; ++k) {
        const cplx w = Q(k - 1) / static_cast<double>(k * (k + 1));
        for (int l = 0; l < k; ++l) rho(l, l) += w;
        rho(k, k) -= static_cast<double>(k) * w;
    }
    for (int a = 0; a < n0_; ++a)
        for (int b = 0; b < n0_; ++b)
            if (a != b) rho(b, a) += Q(transition_index(a, b) - 1);
    return rho;
}

DipoleComponents dipole_components(const LevelScheme& s) {
    DipoleComponents d;
    const int n0 = s.n_levels();
    const HalfInt one = HalfInt::integer(1);
    for (int q : kSphericalValues) {
        const SphericalIndex sq(q);
        CMatrix up = CMatrix::Zero(n0, n0);
        for (int gi = 0; gi < s.n_ground(); ++gi) {
            const HalfInt mg = s.ground_m[gi];
            const HalfInt me = mg + HalfInt::integer(q);
            const int ei = s.excited_index(me);
            if (ei < 0) continue;
            up(ei, gi) = clebsch_gordan(s.Jg, mg, one, HalfInt::integer(q), s.Je, me);
        }
        d.Ddag[sq.slot()] = up;
        d.D[sq.slot()] = up.adjoint();
    }
    return d;
}

ProjectionVectors projection_vectors(const OperatorBasis& basis, const DipoleComponents& dip) {
    ProjectionVectors p;
    for (int k = 0; k < 3; ++k) {
        p.U[k] = basis.expand(dip.Ddag[k]);
        p.V[k] = basis.expand(dip.D[k]);
    }
    return p;
}

CMatrix excited_projector(const LevelScheme& s) {
    CMatrix p = CMatrix::Zero(s.n_levels(), s.n_levels());
    for (int i = s.n_ground(); i < s.n_levels(); ++i) p(i, i) = 1.0;
    return p;
}

}  // namespace cbs
