#include "porohdg/condensed.hpp"

#include "porohdg/parallel.hpp"

namespace porohdg {

CondensedSystem::CondensedSystem(const HdgModel& model, const BoundaryData& bc, double dt)
    : model_(model), bc_(bc), dt_(dt)
{
    if (!(dt > 0.0)) throw ValidationError("time step must be positive");
    const auto& sp = model.space();

    solvers_.resize(static_cast<std::size_t>(model.num_operators()));
    parallel_for(model.num_operators(), [&](int id) {
        const LocalOperator& op = model.operator_by_id(id);
        auto& s = solvers_[static_cast<std::size_t>(id)];
        const Eigen::MatrixXd avv = op.mass / dt + 0.5 * op.kvv;
        s.scale = avv.diagonal().cwiseSqrt().cwiseInverse();
        s.lu.compute(s.scale.asDiagonal() * avv * s.scale.asDiagonal());
        const Eigen::MatrixXd avl = 0.5 * op.kvl;
        s.y = s.scale.asDiagonal() * s.lu.solve(s.scale.asDiagonal() * avl);
        s.alv = 0.5 * op.klv;
        s.schur = 0.5 * op.kll - s.alv * s.y;
        if (!s.schur.allFinite()) throw NumericalError("singular element block (operator " + std::to_string(id) + ")");
    });

    free_index_.assign(static_cast<std::size_t>(model.trace_size()), -1);
    for (int d = 0; d < model.trace_size(); ++d) {
        if (!bc.is_constrained(d)) {
            free_index_[static_cast<std::size_t>(d)] = static_cast<int>(free_dofs_.size());
            free_dofs_.push_back(d);
        }
    }

    std::vector<Triplet> trip;
    trip.reserve(static_cast<std::size_t>(model.num_elements()) * static_cast<std::size_t>(sp.nl * sp.nl));
    for (int t = 0; t < model.num_elements(); ++t) {
        const auto& s = solvers_[static_cast<std::size_t>(model.operator_id(t))];
        const auto dofs = model.trace_dofs(t);
        for (int i = 0; i < sp.nl; ++i) {
            const int fi = free_index_[static_cast<std::size_t>(dofs[static_cast<std::size_t>(i)])];
            if (fi < 0) continue;
            for (int j = 0; j < sp.nl; ++j) {
                const int fj = free_index_[static_cast<std::size_t>(dofs[static_cast<std::size_t>(j)])];
                if (fj < 0) continue;
                trip.push_back({fi, fj, s.schur(i, j)});
            }
        }
    }
    // Absorbing faces: 1/2 Z (x) I on the face's own trace coefficients.
    const Eigen::Matrix4d& z = bc.impedance();
    for (int f : bc.absorbing_faces()) {
        for (int r = 0; r < 4; ++r) {
            for (int c = 0; c < 4; ++c) {
                if (z(r, c) == 0.0) continue;
                for (int m = 0; m < sp.nf; ++m) {
                    const int fr = free_index_[static_cast<std::size_t>(model.face_dof(f, r, m))];
                    const int fc = free_index_[static_cast<std::size_t>(model.face_dof(f, c, m))];
                    trip.push_back({fr, fc, 0.5 * z(r, c)});
                }
            }
        }
    }
    global_ = assemble(num_free(), num_free(), trip);
    trip.clear();
    trip.shrink_to_fit();
    factor_ = std::make_unique<Factorization>(global_);
}

void CondensedSystem::solve(const Eigen::VectorXd& rv, const Eigen::VectorXd& rl, const Eigen::VectorXd& wl_fixed,
                            Eigen::VectorXd& wv, Eigen::VectorXd& wl) const
{
    const auto& sp = model_.space();
    const int ne = model_.num_elements();
    const int nv = sp.nv;
    if (rv.size() != model_.volume_size() || rl.size() != model_.trace_size() ||
        wl_fixed.size() != model_.trace_size()) {
        throw ValidationError("condensed solve: dimension mismatch");
    }

    // z_K = A_vv^{-1} r_K
    Eigen::VectorXd z(rv.size());
    parallel_for(ne, [&](int t) {
        const auto& s = solvers_[static_cast<std::size_t>(model_.operator_id(t))];
        z.segment(static_cast<Eigen::Index>(t) * nv, nv) = s.solve(rv.segment(static_cast<Eigen::Index>(t) * nv, nv));
    });

    Eigen::VectorXd fixed = Eigen::VectorXd::Zero(model_.trace_size());
    for (int d : bc_.constrained()) fixed[d] = wl_fixed[d];

    Eigen::VectorXd g(num_free());
    for (int i = 0; i < num_free(); ++i) g[i] = rl[free_dofs_[static_cast<std::size_t>(i)]];
    // Sequential scatter keeps the summation order fixed.
    for (int t = 0; t < ne; ++t) {
        const auto& s = solvers_[static_cast<std::size_t>(model_.operator_id(t))];
        const auto dofs = model_.trace_dofs(t);
        Eigen::VectorXd local_fixed(sp.nl);
        for (int i = 0; i < sp.nl; ++i) local_fixed[i] = fixed[dofs[static_cast<std::size_t>(i)]];
        const Eigen::VectorXd contrib =
            s.alv * z.segment(static_cast<Eigen::Index>(t) * nv, nv) + s.schur * local_fixed;
        for (int i = 0; i < sp.nl; ++i) {
            const int fi = free_index_[static_cast<std::size_t>(dofs[static_cast<std::size_t>(i)])];
            if (fi >= 0) g[fi] -= contrib[i];
        }
    }
    const Eigen::VectorXd x = factor_->solve(g);

    wl = fixed;
    for (int i = 0; i < num_free(); ++i) wl[free_dofs_[static_cast<std::size_t>(i)]] = x[i];

    wv.resize(rv.size());
    parallel_for(ne, [&](int t) {
        const auto& s = solvers_[static_cast<std::size_t>(model_.operator_id(t))];
        const auto dofs = model_.trace_dofs(t);
        Eigen::VectorXd local(sp.nl);
        for (int i = 0; i < sp.nl; ++i) local[i] = wl[dofs[static_cast<std::size_t>(i)]];
        wv.segment(static_cast<Eigen::Index>(t) * nv, nv) = z.segment(static_cast<Eigen::Index>(t) * nv, nv) - s.y * local;
    });
}

Eigen::VectorXd CondensedSystem::apply_mass(const Eigen::VectorXd& xv) const
{
    const int nv = model_.space().nv;
    Eigen::VectorXd y(xv.size());
    for (int t = 0; t < model_.num_elements(); ++t) {
        y.segment(static_cast<Eigen::Index>(t) * nv, nv) = model_.local(t).mass * xv.segment(static_cast<Eigen::Index>(t) * nv, nv);
    }
    return y;
}

}  // namespace porohdg
