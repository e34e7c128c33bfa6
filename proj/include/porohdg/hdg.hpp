#pragma once

#include "porohdg/geometry.hpp"
#include "porohdg/materials.hpp"
#include "porohdg/mesh.hpp"

#include <array>
#include <memory>
#include <vector>

namespace porohdg {

/// Discrete spaces for polynomial degree k and the local dof layout.
///
/// Volume block of one element (size nv):
///   velocities  [us_x, us_y, uf_x, uf_y] x P_{k+1}   index c*n1 + j
///   stresses    [s11, s22, sqrt2*s12, p] x P_k       index 4*n1 + m*n0 + i
/// Trace block of one element (size nl), per local edge lf:
///   [us_n, us_t, uf_n, uf_t] x P_{k+1}(F)            index lf*4*nf + d*nf + m
/// Trace components live in the face frame (n_F, t_F) of the skeleton, so
/// both neighbours address the same global coefficients.
struct HdgSpace {
    int k = 0;
    double stab_scale = 1.0;  ///< multiplies (k+1)^2 / h_F

    HdgSpace() = default;
    explicit HdgSpace(int degree, double stab = 1.0);

    int n1 = 0;  ///< dim P_{k+1}
    int n0 = 0;  ///< dim P_k
    int nf = 0;  ///< dim P_{k+1}(F)
    int nv = 0;
    int nl = 0;

    int volume_order() const { return 2 * (k + 1) + 2; }
    int face_order() const { return 2 * (k + 1) + 1; }
    int load_order() const { return 2 * (k + 1) + 6; }

    int u_index(int comp, int j) const { return comp * n1 + j; }
    int s_index(int comp, int i) const { return 4 * n1 + comp * n0 + i; }
    int trace_index(int lf, int comp, int m) const { return (lf * 4 + comp) * nf + m; }
    /// Dofs per face in the global trace vector.
    int face_dofs() const { return 4 * nf; }
};

/// Orientation of one local edge relative to its skeleton face.
struct FaceFrame {
    Vec2 normal = Vec2::Zero();   ///< n_F (outward for the left element)
    Vec2 tangent = Vec2::Zero();  ///< t_F
    double length = 0.0;
    bool left = true;  ///< element is the face's left element
};

/// Element matrices of the four-field scheme, written as M x' + K x = L on
/// the element unknowns x = (volume, trace):
///
///   K = [ beta_f + S_uu    B_u^T   S_ul ]
///       [   -B_u             0    -B_l  ]
///       [  S_ul^T          B_l^T   S_ll ]
///
/// The B blocks carry the bilinear form B_h with rows over (tau, q) and
/// columns over (v, v_hat); S is the jump stabilization.
struct LocalOperator {
    Eigen::MatrixXd b;     ///< 4 n0 x (4 n1 + nl)
    Eigen::MatrixXd stab;  ///< (4 n1 + nl) square
    Eigen::MatrixXd mass;  ///< nv square, H1 + H2 inner products
    Eigen::MatrixXd kvv;   ///< nv x nv
    Eigen::MatrixXd kvl;   ///< nv x nl
    Eigen::MatrixXd klv;   ///< nl x nv
    Eigen::MatrixXd kll;   ///< nl x nl
};

std::array<FaceFrame, 3> face_frames(const ElementGeometry& g, const std::array<bool, 3>& left);

Eigen::MatrixXd local_bh(const ElementGeometry& g, const std::array<FaceFrame, 3>& frames, const HdgSpace& space,
                         const MaterialParams& params);
Eigen::MatrixXd local_stab(const ElementGeometry& g, const std::array<FaceFrame, 3>& frames, const HdgSpace& space);
/// Weighted mass R (+) A (+) s in the orthonormal basis (no beta term).
Eigen::MatrixXd local_mass(const HdgSpace& space, const MaterialParams& params);
LocalOperator build_local_operator(const ElementGeometry& g, const std::array<FaceFrame, 3>& frames,
                                   const HdgSpace& space, const MaterialParams& params);

/// Mesh, skeleton, space and material bound together. Elements that are
/// translates of one another with the same face orientations share one
/// LocalOperator.
class HdgModel {
public:
    HdgModel(std::shared_ptr<const Mesh> mesh, HdgSpace space, MaterialParams params);

    const Mesh& mesh() const { return *mesh_; }
    const Skeleton& skeleton() const { return skeleton_; }
    const HdgSpace& space() const { return space_; }
    const MaterialParams& params() const { return params_; }

    int num_elements() const { return static_cast<int>(mesh_->num_triangles()); }
    int num_faces() const { return static_cast<int>(skeleton_.num_faces()); }
    int volume_size() const { return num_elements() * space_.nv; }
    int trace_size() const { return num_faces() * space_.face_dofs(); }

    const ElementGeometry& geometry(int t) const { return geometry_[static_cast<std::size_t>(t)]; }
    const std::array<FaceFrame, 3>& frames(int t) const { return frames_[static_cast<std::size_t>(t)]; }
    const LocalOperator& local(int t) const { return *locals_[static_cast<std::size_t>(op_of_[static_cast<std::size_t>(t)])]; }
    /// Index of the shared operator used by element t.
    int operator_id(int t) const { return op_of_[static_cast<std::size_t>(t)]; }
    int num_operators() const { return static_cast<int>(locals_.size()); }
    const LocalOperator& operator_by_id(int id) const { return *locals_[static_cast<std::size_t>(id)]; }

    /// Global trace indices of element t in local trace order.
    std::vector<int> trace_dofs(int t) const;
    int face_dof(int face, int comp, int m) const { return (face * 4 + comp) * space_.nf + m; }

private:
    std::shared_ptr<const Mesh> mesh_;
    Skeleton skeleton_;
    HdgSpace space_;
    MaterialParams params_;
    std::vector<ElementGeometry> geometry_;
    std::vector<std::array<FaceFrame, 3>> frames_;
    std::vector<std::unique_ptr<LocalOperator>> locals_;
    std::vector<int> op_of_;
};

}  // namespace porohdg
