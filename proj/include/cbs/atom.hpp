#pragma once

#include <array>
#include <vector>

#include "cbs/angular.hpp"
#include "cbs/types.hpp"

namespace cbs {

enum class LevelMode { full, effective };

struct LevelScheme {
    HalfInt Jg;
    HalfInt Je;
    LevelMode mode = LevelMode::full;
    std::vector<HalfInt> ground_m;   // ascending
    std::vector<HalfInt> excited_m;  // ascending

    int n_ground() const { return static_cast<int>(ground_m.size()); }
    int n_excited() const { return static_cast<int>(excited_m.size()); }
    int n_levels() const { return n_ground() + n_excited(); }
    // Sublevel index (ground block first, then excited), or -1 when not retained.
    int ground_index(HalfInt m) const;
    int excited_index(HalfInt m) const;
};

LevelScheme build_level_scheme(HalfInt Jg, LevelMode mode);

// Operator basis over the N0-dimensional sublevel space.
//
// Index 0 is the identity, indices 1..N0-1 the generalized diagonal operators
// diag(1,..,1,-k,0,..), the rest the transition operators |a><b| (a != b) in
// (row, column) order. Bloch vectors exclude the identity, so Bloch index i
// corresponds to basis index i + 1 and dimension() = N0^2 - 1.
class OperatorBasis {
public:
    explicit OperatorBasis(int n_levels);

    int n_levels() const { return n0_; }
    int size() const { return n0_ * n0_; }
    int dimension() const { return n0_ * n0_ - 1; }
    static constexpr int identity_index = 0;

    CMatrix op(int basis_index) const;
    CMatrix dual(int basis_index) const;

    // Tr[X mu'_j] for all Bloch indices j: expansion coefficients of X.
    CVector expand(const CMatrix& X) const;
    // Tr[rho mu_j] for all Bloch indices j.
    CVector coordinates(const CMatrix& rho) const;
    // rho = 1/N0 + sum_j Q_j mu'_j
    CMatrix density(const CVector& Q) const;

    // Transition operator |a><b| for a != b has basis index transition_index(a, b).
    int transition_index(int a, int b) const;

private:
    int n0_;
};

struct DipoleComponents {
    std::array<CMatrix, 3> D;     // lowering D_q, indexed by SphericalIndex::slot()
    std::array<CMatrix, 3> Ddag;  // raising D†_q

    const CMatrix& lower(SphericalIndex q) const { return D[q.slot()]; }
    const CMatrix& raise(SphericalIndex q) const { return Ddag[q.slot()]; }
};

DipoleComponents dipole_components(const LevelScheme& scheme);

struct ProjectionVectors {
    std::array<CVector, 3> U;  // U_q . Q = <D†_q>
    std::array<CVector, 3> V;  // V_q . Q = <D_q>

    const CVector& u(SphericalIndex q) const { return U[q.slot()]; }
    const CVector& v(SphericalIndex q) const { return V[q.slot()]; }
};

ProjectionVectors projection_vectors(const OperatorBasis& basis, const DipoleComponents& dip);

// Projector onto the excited manifold, sum_q D†_q D_q for Je = Jg + 1.
CMatrix excited_projector(const LevelScheme& scheme);

}  // namespace cbs
