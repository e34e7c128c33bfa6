#pragma once

#include "porohdg/condensed.hpp"
#include "porohdg/materials.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace porohdg {

/// Uniform partition of [0, T] into L steps.
struct TimeGrid {
    double T = 0.0;
    int L = 0;

    TimeGrid() = default;
    TimeGrid(double final_time, int steps);
    double dt() const { return T / L; }
    /// t_n; t_L is exactly T.
    double t(int n) const { return n == L ? T : n * dt(); }
};

/// Coefficients of the discrete fields: volume unknowns stacked per element
/// (HdgSpace layout) and trace unknowns per face.
struct DGState {
    Eigen::VectorXd vol;
    Eigen::VectorXd trace;
    double t = 0.0;

    static DGState zero(const HdgModel& model, double t = 0.0);
    /// Coefficient block of element e.
    Eigen::VectorXd element(const HdgModel& model, int e) const
    {
        return vol.segment(static_cast<Eigen::Index>(e) * model.space().nv, model.space().nv);
    }
};

/// Body loads. eval writes (F_s, F_f, g) = 5 values at (x, t).
struct Source {
    std::function<void(const Point&, double, double*)> eval;
    /// When set, the load is eval(x, 0) * time_factor(t): assembled once.
    std::function<double(double)> time_factor;
    /// Optional disc outside which the source vanishes.
    std::optional<std::pair<Point, double>> support;

    bool empty() const { return !eval; }
};

/// Load vector (F, v) + (g, q) over all elements.
Eigen::VectorXd assemble_load(const HdgModel& model, const Source& source, double t);

/// Closed-form fields (initial data, exact solutions); unset fields are zero.
struct AnalyticFields {
    VectorField us;
    VectorField uf;
    std::function<SymTensor(const Point&, double)> sigma;
    std::function<double(const Point&, double)> p;
};

/// L2 projections of the initial fields (traces from the field restricted to
/// each face) at time t.
DGState initial_state(const HdgModel& model, const AnalyticFields& fields, double t = 0.0);

struct Energy {
    double h1 = 0.0;  ///< (R u, u)
    double h2 = 0.0;  ///< (A sigma, sigma) + (s p, p)
    double total() const { return h1 + h2; }
};

Energy energy(const HdgModel& model, const DGState& state);

struct EnergyRecord {
    std::vector<double> t;
    std::vector<double> h1;
    std::vector<double> h2;
    std::vector<double> total;
    std::vector<double> dissipation;  ///< E^{n-1} - E^n (0 for the first entry)

    void push(double time, const Energy& e);
};

/// Crank-Nicolson stepper for a fixed model, boundary set and time step.
/// Each step solves (M/dt + K/2) W = M X^n / dt + (L^{n+1} + L^n)/4 and sets
/// X^{n+1} = 2 W - X^n; constrained traces take the prescribed data at
/// t_{n+1}.
class CnStepper {
public:
    CnStepper(const HdgModel& model, const BoundaryData& bc, const Source& source, double dt);

    const CondensedSystem& system() const { return system_; }
    /// Advances state from state.t to t_next (default state.t + dt). Throws
    /// NumericalError on non-finite values.
    void step(DGState& state);
    void step(DGState& state, double t_next);

private:
    const HdgModel& model_;
    const BoundaryData& bc_;
    const Source& source_;
    CondensedSystem system_;
    Eigen::VectorXd spatial_load_;  ///< separable sources
    std::optional<std::pair<double, Eigen::VectorXd>> last_load_;

    Eigen::VectorXd load(double t);
};

using StepObserver = std::function<void(int step, const DGState&)>;

struct RunResult {
    DGState state;
    EnergyRecord energy;
};

/// Runs L steps from `initial`, recording the energy each step and calling
/// the observer after the initial state and after every step.
RunResult run_transient(const HdgModel& model, const BoundaryData& bc, const Source& source, const DGState& initial,
                        const TimeGrid& grid, const StepObserver& observer = {});

}  // namespace porohdg
