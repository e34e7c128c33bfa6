#pragma once

// Helpers shared by the unit tests and the acceptance driver.

#include "porohdg/transient.hpp"

#include <Eigen/Dense>

namespace porohdg::testing {

/// Dense K over volume and trace unknowns (volumes first, element-stacked),
/// assembled from the elementwise B_h, stabilization and beta blocks:
///   K = [[S_uu + beta I_f, B_u^T, S_ul], [-B_u, 0, -B_l], [S_lu, B_l^T, S_ll]]
/// plus Z on absorbing faces. The mass M is returned alongside.
struct DenseOperator {
    Eigen::MatrixXd k;
    Eigen::MatrixXd m;
};

inline DenseOperator dense_operator(const HdgModel& model, const BoundaryData& bc)
{
    const auto& sp = model.space();
    const int nv = sp.nv;
    const int u_size = 4 * sp.n1;
    const int s_size = 4 * sp.n0;
    const Eigen::Index nvol = static_cast<Eigen::Index>(model.volume_size());
    const Eigen::Index n = nvol + model.trace_size();
    const double beta = model.params().beta;

    DenseOperator d{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
    for (int t = 0; t < model.num_elements(); ++t) {
        const auto& op = model.local(t);
        const std::vector<int> tr = model.trace_dofs(t);
        // local ordering (u, s, lambda) -> global index
        std::vector<Eigen::Index> g(static_cast<std::size_t>(nv + sp.nl));
        for (int i = 0; i < nv; ++i) g[static_cast<std::size_t>(i)] = static_cast<Eigen::Index>(t) * nv + i;
        for (int i = 0; i < sp.nl; ++i) g[static_cast<std::size_t>(nv + i)] = nvol + tr[static_cast<std::size_t>(i)];

        Eigen::MatrixXd k = Eigen::MatrixXd::Zero(nv + sp.nl, nv + sp.nl);
        // stab acts on (u, lambda): local u block then trace block
        auto ul = [&](int i) { return i < u_size ? i : i - u_size + nv; };
        for (int i = 0; i < u_size + sp.nl; ++i) {
            for (int j = 0; j < u_size + sp.nl; ++j) k(ul(i), ul(j)) += op.stab(i, j);
        }
        for (int c = 2; c < 4; ++c) {
            for (int j = 0; j < sp.n1; ++j) k(c * sp.n1 + j, c * sp.n1 + j) += beta;
        }
        const Eigen::MatrixXd bu = op.b.leftCols(u_size);
        const Eigen::MatrixXd bl = op.b.rightCols(sp.nl);
        k.block(0, u_size, u_size, s_size) += bu.transpose();
        k.block(u_size, 0, s_size, u_size) -= bu;
        k.block(u_size, nv, s_size, sp.nl) -= bl;
        k.block(nv, u_size, sp.nl, s_size) += bl.transpose();

        for (int i = 0; i < nv + sp.nl; ++i) {
            for (int j = 0; j < nv + sp.nl; ++j) d.k(g[static_cast<std::size_t>(i)], g[static_cast<std::size_t>(j)]) += k(i, j);
        }
        d.m.block(static_cast<Eigen::Index>(t) * nv, static_cast<Eigen::Index>(t) * nv, nv, nv) = op.mass;
    }
    const Eigen::Matrix4d& z = bc.impedance();
    for (int f : bc.absorbing_faces()) {
        for (int r = 0; r < 4; ++r) {
            for (int c = 0; c < 4; ++c) {
                for (int m = 0; m < sp.nf; ++m) d.k(nvol + model.face_dof(f, r, m), nvol + model.face_dof(f, c, m)) += z(r, c);
            }
        }
    }
    return d;
}

/// Reference Crank-Nicolson step that never eliminates anything: the full
/// operator M/dt + K/2 over volume and trace unknowns, solved by dense LU.
inline void dense_cn_step(const HdgModel& model, const BoundaryData& bc, const Source& source, DGState& st,
                          double t1)
{
    const Eigen::Index nvol = static_cast<Eigen::Index>(model.volume_size());
    const double dt = t1 - st.t;
    const DenseOperator d = dense_operator(model, bc);
    Eigen::MatrixXd a = d.m / dt + 0.5 * d.k;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(a.rows());
    rhs.head(nvol) = d.m.topLeftCorner(nvol, nvol) * st.vol / dt;
    if (!source.empty()) rhs.head(nvol) += 0.25 * (assemble_load(model, source, st.t) + assemble_load(model, source, t1));

    const Eigen::VectorXd g1 = bc.prescribed(model, t1);
    for (int dof : bc.constrained()) {
        const Eigen::Index row = nvol + dof;
        a.row(row).setZero();
        a(row, row) = 1.0;
        rhs[row] = 0.5 * (g1[dof] + st.trace[dof]);
    }
    const Eigen::VectorXd w = a.partialPivLu().solve(rhs);
    st.vol = 2.0 * w.head(nvol) - st.vol;
    st.trace = 2.0 * w.tail(model.trace_size()) - st.trace;
    for (int dof : bc.constrained()) st.trace[dof] = g1[dof];
    st.t = t1;
}

}  // namespace porohdg::testing
