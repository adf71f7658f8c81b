#pragma once

#include <array>
#include <memory>

#include "cbs/atom.hpp"
#include "cbs/types.hpp"

namespace cbs {

struct DriveParams {
    double Omega = 1.0;
    double delta = 0.0;
    SphericalIndex laser_pol{1};
    static constexpr double gamma = 1.0;
};

// G(z) = (z - M)^{-1} through a complex Schur factorization M = Z T Z^H,
// so each new z costs one triangular solve.
class Resolvent {
public:
    Resolvent() = default;
    explicit Resolvent(const CMatrix& M);

    // G(z) v
    CVector apply(cplx z, const CVector& v) const;
    // G(z)^T u, i.e. the row vector u^T G(z) as a column.
    CVector apply_left(cplx z, const CVector& u) const;
    const CVector& eigenvalues() const { return eig_; }

    int block_count() const { return static_cast<int>(blocks_.size()); }

private:
    using RowMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    struct Block {
        std::vector<int> idx;
        CMatrix Z, T;
        RowMatrix Trow;
    };
    std::vector<Block> blocks_;
    CVector eig_;
    int max_block_ = 0;
    double scale_ = 1.0;
    void check(cplx z) const;
};

struct BlochSystem {
    LevelScheme scheme;
    OperatorBasis basis{2};
    DipoleComponents dipoles;
    ProjectionVectors proj;
    DriveParams drive;

    CMatrix M;
    CVector L;
    std::array<SparseC, 3> DeltaMinus;  // probe term with D†_r, indexed by r.slot()
    std::array<SparseC, 3> DeltaPlus;   // probe term with D_r'

    Resolvent resolvent;
    CVector Q0;

    int dimension() const { return static_cast<int>(M.rows()); }
    const SparseC& delta_minus(SphericalIndex r) const { return DeltaMinus[r.slot()]; }
    const SparseC& delta_plus(SphericalIndex r) const { return DeltaPlus[r.slot()]; }
    // Heisenberg-picture right-hand side of the drive-and-decay terms applied to operator X.
    CMatrix heisenberg_rhs(const CMatrix& X) const;
};

BlochSystem build_bloch_system(const LevelScheme& scheme, const DriveParams& drive);
std::shared_ptr<const BlochSystem> make_system(HalfInt Jg, LevelMode mode, double Omega, double delta);

// Solves (z - M) x = v and verifies the residual.
CVector resolvent_apply(const BlochSystem& sys, cplx z, const CVector& v);
CVector steady_state(const BlochSystem& sys);

struct ElasticBlocks {
    double omega = 0.0;
    SphericalIndex r{-1}, rprime{-1};
    CVector Q0, Qminus, Qplus, Qpm;
};

ElasticBlocks elastic_blocks(const BlochSystem& sys, double omega, SphericalIndex r, SphericalIndex rprime);

// First-order responses only; cheaper than elastic_blocks when Qpm is not needed.
CVector elastic_minus(const BlochSystem& sys, double omega, SphericalIndex r);
CVector elastic_plus(const BlochSystem& sys, double omega, SphericalIndex rprime);

enum class Order { zeroth, plus, minus, pm };

// V_q . Q (amplitude <D_q>) or U_q . Q when conjugate is set (<D†_q>).
cplx elastic_amplitude(const BlochSystem& sys, const ElasticBlocks& blocks, SphericalIndex q, Order which,
                       bool conjugate);

}  // namespace cbs
