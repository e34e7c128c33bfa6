#include "porohdg/hdg.hpp"

#include "porohdg/basis.hpp"

#include <cstring>
#include <map>

namespace porohdg {

namespace {
constexpr double inv_sqrt2 = 0.70710678118654752;

/// (E_m n) for the Mandel stress basis E_0 = e1 e1, E_1 = e2 e2, E_2 = (e1 e2 + e2 e1)/sqrt2.
Vec2 mandel_times_normal(int m, const Vec2& n)
{
    switch (m) {
    case 0: return {n.x(), 0.0};
    case 1: return {0.0, n.y()};
    default: return {inv_sqrt2 * n.y(), inv_sqrt2 * n.x()};
    }
}

Vec2 frame_vector(const FaceFrame& f, int d) { return d == 0 ? f.normal : f.tangent; }

struct EdgeIntegrals {
    Eigen::MatrixXd phi_phi;  ///< n1 x n1
    Eigen::MatrixXd phi_chi;  ///< n1 x nf
    Eigen::MatrixXd chi_chi;  ///< nf x nf
};

EdgeIntegrals edge_integrals(const ElementGeometry& g, const FaceFrame& frame, int e, const HdgSpace& sp)
{
    const auto tt = trace_tabulation(sp.k + 1, sp.face_order(), e, !frame.left);
    const auto et = edge_tabulation(sp.k + 1, sp.face_order());
    const Eigen::Index nq = static_cast<Eigen::Index>(tt->rule.size());
    Eigen::VectorXd w(nq);
    for (Eigen::Index q = 0; q < nq; ++q) w[q] = tt->rule.weights[static_cast<std::size_t>(q)] * frame.length;
    const Eigen::MatrixXd phi = tt->values / std::sqrt(g.det);
    const Eigen::MatrixXd chi = et->values / std::sqrt(frame.length);
    EdgeIntegrals r;
    r.phi_phi = phi.transpose() * w.asDiagonal() * phi;
    r.phi_chi = phi.transpose() * w.asDiagonal() * chi;
    r.chi_chi = chi.transpose() * w.asDiagonal() * chi;
    return r;
}

}  // namespace

HdgSpace::HdgSpace(int degree, double stab) : k(degree), stab_scale(stab)
{
    if (degree < 0) throw ValidationError("discretization.k must be non-negative");
    if (!(stab >= 0.0)) throw ValidationError("stabilization scale must be non-negative");
    n1 = triangle_dim(k + 1);
    n0 = triangle_dim(k);
    nf = edge_dim(k + 1);
    nv = 4 * n1 + 4 * n0;
    nl = 12 * nf;
}

std::array<FaceFrame, 3> face_frames(const ElementGeometry& g, const std::array<bool, 3>& left)
{
    std::array<FaceFrame, 3> f;
    for (int e = 0; e < 3; ++e) {
        auto& fr = f[static_cast<std::size_t>(e)];
        const Vec2 d = g.x[static_cast<std::size_t>((e + 1) % 3)] - g.x[static_cast<std::size_t>(e)];
        fr.length = d.norm();
        fr.left = left[static_cast<std::size_t>(e)];
        // The left element walks the face from v[0] to v[1].
        fr.tangent = (fr.left ? d : Vec2(-d)) / fr.length;
        fr.normal = Vec2(fr.tangent.y(), -fr.tangent.x());
    }
    return f;
}

Eigen::MatrixXd local_bh(const ElementGeometry& g, const std::array<FaceFrame, 3>& frames, const HdgSpace& sp,
                         const MaterialParams& params)
{
    const int n1 = sp.n1;
    const int n0 = sp.n0;
    const int nf = sp.nf;
    const int cols = 4 * n1 + sp.nl;
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(4 * n0, cols);
    const double alpha = params.alpha;
    auto row = [&](int m) { return m * n0; };
    auto ucol = [&](int c) { return c * n1; };
    auto lcol = [&](int lf, int d) { return 4 * n1 + sp.trace_index(lf, d, 0); };

    // Volume terms. Basis scale 1/sqrt(det) squared cancels the Jacobian.
    {
        const auto vt = volume_tabulation(sp.k + 1, sp.volume_order());
        const Eigen::Index nq = static_cast<Eigen::Index>(vt->rule.size());
        Eigen::VectorXd w(nq);
        for (Eigen::Index q = 0; q < nq; ++q) w[q] = vt->rule.weights[static_cast<std::size_t>(q)];
        const Eigen::MatrixXd& jt = g.jac_inv_t;
        const Eigen::MatrixXd gx = jt(0, 0) * vt->dx + jt(0, 1) * vt->dy;
        const Eigen::MatrixXd gy = jt(1, 0) * vt->dx + jt(1, 1) * vt->dy;
        const Eigen::MatrixXd psi_w = (w.asDiagonal() * vt->values.leftCols(n0)).transpose();
        const Eigen::MatrixXd ix = psi_w * gx;  // (psi_i, d_x phi_j)
        const Eigen::MatrixXd iy = psi_w * gy;

        // sigma : eps(v_s) with eps(phi e_x) = (dx, 0, dy/sqrt2), eps(phi e_y) = (0, dy, dx/sqrt2).
        b.block(row(0), ucol(0), n0, n1) += ix;
        b.block(row(2), ucol(0), n0, n1) += inv_sqrt2 * iy;
        b.block(row(1), ucol(1), n0, n1) += iy;
        b.block(row(2), ucol(1), n0, n1) += inv_sqrt2 * ix;
        // -alpha q div v_s - q div v_f
        b.block(row(3), ucol(0), n0, n1) -= alpha * ix;
        b.block(row(3), ucol(1), n0, n1) -= alpha * iy;
        b.block(row(3), ucol(2), n0, n1) -= ix;
        b.block(row(3), ucol(3), n0, n1) -= iy;
    }

    // Face terms: -<(tau - alpha q I) n, v_s - vhat_s> + <q n, v_f - vhat_f>.
    for (int e = 0; e < 3; ++e) {
        const auto& fr = frames[static_cast<std::size_t>(e)];
        const Vec2 n = g.outward_normal(e);
        const auto ei = edge_integrals(g, fr, e, sp);
        const Eigen::MatrixXd gvol = ei.phi_phi.topRows(n0);  // (psi_i, phi_j)_F
        const Eigen::MatrixXd gtr = ei.phi_chi.topRows(n0);   // (psi_i, chi_m)_F
        for (int m = 0; m < 3; ++m) {
            const Vec2 en = mandel_times_normal(m, n);
            for (int c = 0; c < 2; ++c) b.block(row(m), ucol(c), n0, n1) -= en[c] * gvol;
            for (int d = 0; d < 2; ++d) {
                b.block(row(m), lcol(e, d), n0, nf) += en.dot(frame_vector(fr, d)) * gtr;
            }
        }
        for (int c = 0; c < 2; ++c) {
            b.block(row(3), ucol(c), n0, n1) += alpha * n[c] * gvol;
            b.block(row(3), ucol(2 + c), n0, n1) += n[c] * gvol;
        }
        for (int d = 0; d < 2; ++d) {
            const double nd = n.dot(frame_vector(fr, d));
            b.block(row(3), lcol(e, d), n0, nf) -= alpha * nd * gtr;
            b.block(row(3), lcol(e, 2 + d), n0, nf) -= nd * gtr;
        }
    }
    return b;
}

Eigen::MatrixXd local_stab(const ElementGeometry& g, const std::array<FaceFrame, 3>& frames, const HdgSpace& sp)
{
    const int n1 = sp.n1;
    const int nf = sp.nf;
    const int size = 4 * n1 + sp.nl;
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(size, size);
    const double kk = (sp.k + 1.0) * (sp.k + 1.0);
    for (int e = 0; e < 3; ++e) {
        const auto& fr = frames[static_cast<std::size_t>(e)];
        const double tau = sp.stab_scale * kk / fr.length;
        const auto ei = edge_integrals(g, fr, e, sp);
        for (int phase = 0; phase < 2; ++phase) {
            for (int c = 0; c < 2; ++c) {
                const int uc = (2 * phase + c) * n1;
                s.block(uc, uc, n1, n1) += tau * ei.phi_phi;
                for (int d = 0; d < 2; ++d) {
                    const int lc = 4 * n1 + sp.trace_index(e, 2 * phase + d, 0);
                    const double proj = frame_vector(fr, d)[c];
                    s.block(uc, lc, n1, nf) -= tau * proj * ei.phi_chi;
                    s.block(lc, uc, nf, n1) -= tau * proj * ei.phi_chi.transpose();
                }
            }
            for (int d = 0; d < 2; ++d) {
                const int lc = 4 * n1 + sp.trace_index(e, 2 * phase + d, 0);
                s.block(lc, lc, nf, nf) += tau * ei.chi_chi;
            }
        }
    }
    return s;
}

Eigen::MatrixXd local_mass(const HdgSpace& sp, const MaterialParams& params)
{
    const int n1 = sp.n1;
    const int n0 = sp.n0;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(sp.nv, sp.nv);
    const Eigen::MatrixXd i1 = Eigen::MatrixXd::Identity(n1, n1);
    const Eigen::MatrixXd i0 = Eigen::MatrixXd::Identity(n0, n0);
    for (int c = 0; c < 2; ++c) {
        m.block(c * n1, c * n1, n1, n1) = params.rho11 * i1;
        m.block(c * n1, (2 + c) * n1, n1, n1) = params.rho12 * i1;
        m.block((2 + c) * n1, c * n1, n1, n1) = params.rho12 * i1;
        m.block((2 + c) * n1, (2 + c) * n1, n1, n1) = params.rho22 * i1;
    }
    const Eigen::Matrix3d a = params.compliance_mandel();
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) m.block(sp.s_index(r, 0), sp.s_index(c, 0), n0, n0) = a(r, c) * i0;
    }
    m.block(sp.s_index(3, 0), sp.s_index(3, 0), n0, n0) = params.s * i0;
    return m;
}

LocalOperator build_local_operator(const ElementGeometry& g, const std::array<FaceFrame, 3>& frames,
                                   const HdgSpace& sp, const MaterialParams& params)
{
    LocalOperator op;
    op.b = local_bh(g, frames, sp, params);
    op.stab = local_stab(g, frames, sp);
    op.mass = local_mass(sp, params);

    const int nu = 4 * sp.n1;
    const int ns = 4 * sp.n0;
    const int nl = sp.nl;
    const auto bu = op.b.leftCols(nu);
    const auto bl = op.b.rightCols(nl);

    op.kvv = Eigen::MatrixXd::Zero(sp.nv, sp.nv);
    op.kvv.topLeftCorner(nu, nu) = op.stab.topLeftCorner(nu, nu);
    op.kvv.block(2 * sp.n1, 2 * sp.n1, 2 * sp.n1, 2 * sp.n1).diagonal().array() += params.beta;
    op.kvv.block(0, nu, nu, ns) = bu.transpose();
    op.kvv.block(nu, 0, ns, nu) = -bu;

    op.kvl = Eigen::MatrixXd::Zero(sp.nv, nl);
    op.kvl.topRows(nu) = op.stab.topRightCorner(nu, nl);
    op.kvl.bottomRows(ns) = -bl;

    op.klv = Eigen::MatrixXd::Zero(nl, sp.nv);
    op.klv.leftCols(nu) = op.stab.bottomLeftCorner(nl, nu);
    op.klv.rightCols(ns) = bl.transpose();

    op.kll = op.stab.bottomRightCorner(nl, nl);
    return op;
}

HdgModel::HdgModel(std::shared_ptr<const Mesh> mesh, HdgSpace space, MaterialParams params)
    : mesh_(std::move(mesh)), skeleton_(*mesh_), space_(space), params_(std::move(params))
{
    params_.validate();
    const int nt = num_elements();
    geometry_.resize(static_cast<std::size_t>(nt));
    frames_.resize(static_cast<std::size_t>(nt));
    op_of_.resize(static_cast<std::size_t>(nt));

    // Key: Jacobian bits plus face orientation flags.
    using Key = std::array<unsigned char, 4 * sizeof(double) + 3>;
    std::map<Key, int> cache;
    for (int t = 0; t < nt; ++t) {
        auto& g = geometry_[static_cast<std::size_t>(t)];
        g = element_geometry(*mesh_, t);
        std::array<bool, 3> left{};
        for (int e = 0; e < 3; ++e) left[static_cast<std::size_t>(e)] = skeleton_.is_left(t, e);
        frames_[static_cast<std::size_t>(t)] = face_frames(g, left);

        Key key{};
        std::memcpy(key.data(), g.jac.data(), 4 * sizeof(double));
        for (std::size_t e = 0; e < 3; ++e) key[4 * sizeof(double) + e] = left[e] ? 1 : 0;
        auto [it, inserted] = cache.try_emplace(key, static_cast<int>(locals_.size()));
        if (inserted) {
            locals_.push_back(std::make_unique<LocalOperator>(
                build_local_operator(g, frames_[static_cast<std::size_t>(t)], space_, params_)));
        }
        op_of_[static_cast<std::size_t>(t)] = it->second;
    }
}

std::vector<int> HdgModel::trace_dofs(int t) const
{
    std::vector<int> dofs(static_cast<std::size_t>(space_.nl));
    for (int e = 0; e < 3; ++e) {
        const int f = skeleton_.element_face(t, e);
        for (int c = 0; c < 4; ++c) {
            for (int m = 0; m < space_.nf; ++m) {
                dofs[static_cast<std::size_t>(space_.trace_index(e, c, m))] = face_dof(f, c, m);
            }
        }
    }
    return dofs;
}

}  // namespace porohdg
