#include "porohdg/boundary.hpp"

#include "porohdg/projection.hpp"

#include <algorithm>

namespace porohdg {

SolidRole parse_solid_role(const std::string& name)
{
    if (name == "dirichlet") return SolidRole::dirichlet;
    if (name == "traction_free" || name == "free") return SolidRole::traction_free;
    if (name == "absorbing") return SolidRole::absorbing;
    throw ValidationError("unknown solid boundary role '" + name + "' (expected dirichlet, traction_free, absorbing)");
}

FluidRole parse_fluid_role(const std::string& name)
{
    if (name == "velocity") return FluidRole::velocity;
    if (name == "normal_velocity") return FluidRole::normal_velocity;
    if (name == "pressure_free" || name == "free") return FluidRole::pressure_free;
    if (name == "absorbing") return FluidRole::absorbing;
    throw ValidationError("unknown fluid boundary role '" + name +
                          "' (expected velocity, normal_velocity, pressure_free, absorbing)");
}

std::string to_string(SolidRole r)
{
    switch (r) {
    case SolidRole::dirichlet: return "dirichlet";
    case SolidRole::traction_free: return "traction_free";
    case SolidRole::absorbing: return "absorbing";
    }
    return "?";
}

std::string to_string(FluidRole r)
{
    switch (r) {
    case FluidRole::velocity: return "velocity";
    case FluidRole::normal_velocity: return "normal_velocity";
    case FluidRole::pressure_free: return "pressure_free";
    case FluidRole::absorbing: return "absorbing";
    }
    return "?";
}

BoundaryConditions BoundaryConditions::uniform(const Skeleton& skeleton, BoundaryRole role)
{
    BoundaryConditions bc;
    for (const auto& f : skeleton.faces()) {
        if (f.is_boundary()) bc.roles[f.tag] = role;
    }
    return bc;
}

Eigen::Matrix4d absorbing_impedance(const MaterialParams& params, AbsorbingModel model)
{
    if (!params.provenance) {
        throw ValidationError("absorbing boundaries need material.rho_s, rho_f, phi, nu (provenance data)");
    }
    const auto& p = *params.provenance;
    const WaveSpeeds w = wave_speeds(params);
    Eigen::Matrix4d z = Eigen::Matrix4d::Zero();
    z(0, 0) = w.c_p1 * params.rho11;
    if (model == AbsorbingModel::coupled) z(0, 2) = w.c_p2 * p.rho_f;
    z(1, 1) = (params.rho11 - p.rho_f * p.phi / p.nu) * w.c_s;
    z(2, 2) = w.c_p2 * p.rho_f * p.phi / p.nu;
    if (model == AbsorbingModel::coupled) z(2, 0) = w.c_p1 * p.rho_f;
    return z;
}

BoundaryData::BoundaryData(const HdgModel& model, BoundaryConditions bc) : bc_(std::move(bc))
{
    const auto& sk = model.skeleton();
    const int nf = model.space().nf;
    is_constrained_.assign(static_cast<std::size_t>(model.trace_size()), 0);
    bool any_absorbing = false;
    for (int f = 0; f < model.num_faces(); ++f) {
        const Face& face = sk.face(f);
        if (!face.is_boundary()) continue;
        const auto it = bc_.roles.find(face.tag);
        if (it == bc_.roles.end()) {
            throw ValidationError("boundary tag " + std::to_string(face.tag) + " has no boundary condition role");
        }
        const BoundaryRole role = it->second;
        if ((role.solid == SolidRole::absorbing) != (role.fluid == FluidRole::absorbing)) {
            throw ValidationError("boundary tag " + std::to_string(face.tag) +
                                  ": absorbing role must be set for both solid and fluid");
        }
        std::vector<int> comps;
        if (role.solid == SolidRole::dirichlet) comps.insert(comps.end(), {0, 1});
        if (role.fluid == FluidRole::velocity) comps.insert(comps.end(), {2, 3});
        if (role.fluid == FluidRole::normal_velocity) comps.push_back(2);
        for (int c : comps) {
            for (int m = 0; m < nf; ++m) is_constrained_[static_cast<std::size_t>(model.face_dof(f, c, m))] = 1;
        }
        if (role.solid == SolidRole::absorbing) {
            absorbing_faces_.push_back(f);
            any_absorbing = true;
        }
    }
    for (int d = 0; d < model.trace_size(); ++d) {
        if (is_constrained_[static_cast<std::size_t>(d)] != 0) constrained_.push_back(d);
    }
    if (any_absorbing) impedance_ = absorbing_impedance(model.params(), bc_.absorbing);
}

Eigen::VectorXd BoundaryData::prescribed(const HdgModel& model, double t) const
{
    Eigen::VectorXd w = Eigen::VectorXd::Zero(model.trace_size());
    if (!bc_.solid_velocity && !bc_.fluid_velocity) return w;
    const auto& sk = model.skeleton();
    const auto& sp = model.space();
    const auto& mesh = model.mesh();
    for (int f = 0; f < model.num_faces(); ++f) {
        const Face& face = sk.face(f);
        if (!face.is_boundary()) continue;
        if (!is_constrained(model.face_dof(f, 0, 0)) && !is_constrained(model.face_dof(f, 2, 0))) continue;
        const Point& a = mesh.vertex(face.v[0]);
        const Point& b = mesh.vertex(face.v[1]);
        const Vec2 n = face.normal;
        const Vec2 tg = face.tangent;
        auto eval = [&](const Point& x, double* out) {
            const Vec2 us = bc_.solid_velocity ? bc_.solid_velocity(x, t) : Vec2::Zero();
            const Vec2 uf = bc_.fluid_velocity ? bc_.fluid_velocity(x, t) : Vec2::Zero();
            out[0] = us.dot(n);
            out[1] = us.dot(tg);
            out[2] = uf.dot(n);
            out[3] = uf.dot(tg);
        };
        const Eigen::MatrixXd c = l2_project_face(eval, 4, sp.k + 1, a, b, sp.load_order());
        for (int comp = 0; comp < 4; ++comp) {
            if (!is_constrained(model.face_dof(f, comp, 0))) continue;
            for (int m = 0; m < sp.nf; ++m) w[model.face_dof(f, comp, m)] = c(m, comp);
        }
    }
    return w;
}

}  // namespace porohdg
