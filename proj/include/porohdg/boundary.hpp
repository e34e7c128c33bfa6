#pragma once

#include "porohdg/hdg.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace porohdg {

enum class SolidRole {
    dirichlet,      ///< u_s prescribed (strongly, on the trace)
    traction_free,  ///< (sigma - alpha p I) n = 0, natural
    absorbing,
};

enum class FluidRole {
    velocity,         ///< full u_f prescribed on the trace
    normal_velocity,  ///< u_f . n prescribed, tangential trace free
    pressure_free,    ///< p = 0, carried weakly by the flux
    absorbing,
};

struct BoundaryRole {
    SolidRole solid = SolidRole::dirichlet;
    FluidRole fluid = FluidRole::velocity;
};

SolidRole parse_solid_role(const std::string& name);
FluidRole parse_fluid_role(const std::string& name);
std::string to_string(SolidRole r);
std::string to_string(FluidRole r);

using VectorField = std::function<Vec2(const Point&, double)>;

enum class AbsorbingModel {
    coupled,   ///< all terms of the first-order relation, including the n-n phase coupling
    diagonal,  ///< phase coupling dropped; Z positive diagonal
};

/// Boundary tag -> role map plus prescribed velocity data. Unset data means
/// homogeneous.
struct BoundaryConditions {
    std::map<int, BoundaryRole> roles;
    VectorField solid_velocity;
    VectorField fluid_velocity;
    AbsorbingModel absorbing = AbsorbingModel::diagonal;

    /// Same role on every tag found in the skeleton.
    static BoundaryConditions uniform(const Skeleton& skeleton, BoundaryRole role);
};

/// First-order absorbing relation, in trace components (s_n, s_t, f_n, f_t):
/// the numerical traction and -p n on an absorbing face equal -Z u_hat.
Eigen::Matrix4d absorbing_impedance(const MaterialParams& params, AbsorbingModel model = AbsorbingModel::diagonal);

/// Boundary conditions resolved against a model: which global trace dofs are
/// fixed, and which faces carry absorbing blocks.
class BoundaryData {
public:
    /// Throws ValidationError for an unmapped boundary tag or a tag that is
    /// absorbing for one phase only.
    BoundaryData(const HdgModel& model, BoundaryConditions bc);

    const BoundaryConditions& conditions() const { return bc_; }
    const std::vector<int>& constrained() const { return constrained_; }
    bool is_constrained(int dof) const { return is_constrained_[static_cast<std::size_t>(dof)] != 0; }
    const std::vector<int>& absorbing_faces() const { return absorbing_faces_; }
    const Eigen::Matrix4d& impedance() const { return impedance_; }

    /// Full trace-size vector holding the face L2 projections of the
    /// prescribed data at time t on constrained dofs, zero elsewhere.
    Eigen::VectorXd prescribed(const HdgModel& model, double t) const;

private:
    BoundaryConditions bc_;
    std::vector<int> constrained_;
    std::vector<char> is_constrained_;
    std::vector<int> absorbing_faces_;
    Eigen::Matrix4d impedance_ = Eigen::Matrix4d::Zero();
};

}  // namespace porohdg
