#pragma once
#include "wireorbit/field.hpp"
#include "wireorbit/model.hpp"
#include "wireorbit/params.hpp"

#include <array>
#include <optional>
#include <vector>

namespace wireorbit {

using Vec2 = std::array<double, 2>;  ///< (r, pr)

/// Time series of the reduced system produced by one integration.
struct OrbitSample {
    std::vector<double> times;         ///< strictly increasing
    std::vector<RadialState> states;   ///< matching states, all r > 0
    double energy = 0.0;               ///< Hamiltonian at the initial point
    std::optional<double> period;      ///< detected period when closed
};

/**
 * Piecewise polynomial dense output of one adaptive integration. Each
 * accepted step carries a degree-7 interpolant for state and derivative.
 */
class DenseSolution {
  public:
    struct Segment {
        double t_left, t_right;
        std::array<Vec2, 8> coef;
        Vec2 eval(double t) const;
        Vec2 eval_deriv(double t) const;
    };

    double t_begin() const { return t_begin_; }
    double t_end() const { return t_end_; }
    RadialState state(double t) const;
    Vec2 derivative(double t) const;
    const std::vector<Segment>& segments() const { return segments_; }

    // builder interface (used by the integrator)
    void set_range(double t0, double t1) { t_begin_ = t0; t_end_ = t1; }
    void add_segment(Segment s) { segments_.push_back(s); }

  private:
    const Segment& locate(double t) const;
    double t_begin_ = 0.0, t_end_ = 0.0;
    std::vector<Segment> segments_;
};

/**
 * Adaptive integration of the reduced system from t0 to t1 (t1 > t0) with
 * mixed absolute/relative local error tolerance `tol` in [1e-13, 1e-6].
 * Steps that reach r <= 0 are rejected; persistent rejection raises
 * std::runtime_error (step-size underflow).
 */
OrbitSample integrate(const RadialState& initial, double t0, double t1,
                      const PhysParams& params, const FieldModel& field, double tol);

/// Same integration, returning the dense interpolant instead of step samples.
DenseSolution integrate_dense(const RadialState& initial, double t0, double t1,
                              const PhysParams& params, const FieldModel& field,
                              double tol);

/// Endpoint-only flow map (no dense output bookkeeping).
RadialState flow(const RadialState& initial, double t0, double t1,
                 const PhysParams& params, const FieldModel& field, double tol);

/**
 * Period of the unperturbed closed orbit through `initial` (which must lie
 * on the section pr = 0 away from the equilibrium). Implemented as the first
 * return to the section with matching crossing direction; the event time is
 * root-polished on the dense interpolant. Throws std::runtime_error when no
 * return occurs within 1000 linearized periods.
 */
double return_time(const RadialState& initial, const PhysParams& params,
                   double tol = 1e-11);

}  // namespace wireorbit
