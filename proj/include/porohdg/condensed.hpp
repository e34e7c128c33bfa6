#pragma once

#include "porohdg/boundary.hpp"
#include "porohdg/solver.hpp"

#include <memory>

namespace porohdg {

/// Per-step operator A = M/dt + K/2 with volume unknowns eliminated element
/// by element. The remaining global system lives on the free trace dofs;
/// constrained trace dofs are eliminated by moving their columns to the
/// right-hand side.
class CondensedSystem {
public:
    CondensedSystem(const HdgModel& model, const BoundaryData& bc, double dt);

    double dt() const { return dt_; }
    int num_free() const { return static_cast<int>(free_dofs_.size()); }
    const std::vector<int>& free_dofs() const { return free_dofs_; }
    const SparseMatrix& trace_matrix() const { return global_; }
    const Factorization& factorization() const { return *factor_; }

    /// Solves A w = r. `wl_fixed` carries the values of the constrained trace
    /// dofs (other entries ignored). `rv` is the stacked volume rhs.
    void solve(const Eigen::VectorXd& rv, const Eigen::VectorXd& rl, const Eigen::VectorXd& wl_fixed,
               Eigen::VectorXd& wv, Eigen::VectorXd& wl) const;

    /// y = M x_v for the stacked volume vector.
    Eigen::VectorXd apply_mass(const Eigen::VectorXd& xv) const;

private:
    struct ElementSolver {
        Eigen::PartialPivLU<Eigen::MatrixXd> lu;  ///< of D A_vv D
        Eigen::VectorXd scale;                    ///< D
        Eigen::MatrixXd y;                        ///< A_vv^{-1} A_vl
        Eigen::MatrixXd alv;                      ///< A_lv
        Eigen::MatrixXd schur;                    ///< A_ll - A_lv A_vv^{-1} A_vl

        Eigen::VectorXd solve(const Eigen::VectorXd& r) const
        {
            return scale.cwiseProduct(lu.solve(scale.cwiseProduct(r)));
        }
    };

    const HdgModel& model_;
    const BoundaryData& bc_;
    double dt_;
    std::vector<ElementSolver> solvers_;  ///< by model operator id
    std::vector<int> free_index_;         ///< trace dof -> free position or -1
    std::vector<int> free_dofs_;
    SparseMatrix global_;
    std::unique_ptr<Factorization> factor_;
};

}  // namespace porohdg
