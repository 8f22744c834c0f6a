#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fc/stretch.hpp"
#include "fc/strings.hpp"

namespace fc::curves {

// Piecewise-constant-curvature path: a start pose plus (kappa, length) words.
// The tangent argument is piecewise linear in arc length, so all extrema and
// level crossings are exact.
struct Segment {
    double kappa;   // |kappa| < 1
    double length;  // > 0
};

struct PCCPath {
    std::array<double, 2> start{0.0, 0.0};
    double theta0 = 0.0;
    std::vector<Segment> segments;
};

void validate(const PCCPath& g);

double total_length(const PCCPath& g);

// Pose at arc length t in [0, total_length]: position and tangent argument.
struct Pose {
    std::array<double, 2> point;
    double theta;
};
Pose pose_at(const PCCPath& g, double t);

// Nodes (t_i, theta_i) of the piecewise-linear argument function.
std::vector<std::pair<double, double>> theta_nodes(const PCCPath& g);

struct CurveStats {
    double theta1;     // total turning
    double omega;      // amplitude sup - inf of the argument
    double phi_bar;    // midpoint (sup + inf)/2
    double theta_min;
    double theta_max;
};
CurveStats curve_stats(const PCCPath& g);

enum class CurveClass { Condensed, Critical, Diffuse };

struct CurveVerdict {
    CurveClass cls;
    std::optional<fc::strings::SignString> type;  // set when Critical
};
CurveVerdict classify_curve(const PCCPath& g, double tol = 1e-9);

// Unit-tangent boundary data: endpoint q and final tangent argument theta1.
struct UTPoint {
    std::array<double, 2> q;
    double theta1;  // |theta1| < pi
};

// Inserts a straight segment of length L at arc length t, in the tangent
// direction there. The argument profile is unchanged up to reparametrization.
PCCPath graft(const PCCPath& g, double t, double L);

// Subarc [t0, t1] (arc length) viewed as a graph over the axis e^{i psi}.
// Requires the tangent to stay in the open half-plane of e^{i psi}.
fc::stretch::StretchProblem subarc_problem(const PCCPath& g, double t0,
                                           double t1, double psi,
                                           double kappa0);

// Default stretchability bound: max(sup |kappa| over the subarc, 0.51).
double default_kappa0(const PCCPath& g, double t0, double t1);

bool subarc_stretchable(const PCCPath& g, double t0, double t1, double psi,
                        double kappa0);

// Replaces the subarc by the canonical arc-line-arc profile of the stretched
// boundary problem and translates the tail by s * e^{i psi}.
PCCPath stretch_subarc(const PCCPath& g, double t0, double t1, double psi,
                       double kappa0, double s);

inline PCCPath flatten_subarc(const PCCPath& g, double t0, double t1,
                              double psi, double kappa0) {
    return stretch_subarc(g, t0, t1, psi, kappa0, 0.0);
}

// Certificate that g is nearly vertical with pattern sigma about the axis
// e^{i phi}: ordered intervals J_k with stretchable witnesses I_k.
struct QuasiCert {
    double phi;
    double eps;
    fc::strings::SignString sigma;
    std::vector<std::pair<double, double>> J;  // arc-length intervals
    std::vector<std::pair<double, double>> I;  // witness subintervals
};

std::optional<QuasiCert> quasicritical_find(const PCCPath& g, double phi,
                                            double eps,
                                            const fc::strings::SignString& sigma);

// h_k = sup over J_k of theta - (phi + pi/2) when sigma(k) = '+',
//       inf over J_k of theta - (phi - pi/2) when sigma(k) = '-'.
std::vector<double> h_map(const PCCPath& g, const QuasiCert& cert);

// Dyadic detection scale grid pi/8 * 2^-j.
std::vector<double> epsilon_grid(int levels = 13);

struct VMembership {
    bool in_r = false;
    bool v_c = false;
    bool v_d = false;
    // Detected vertical patterns with a witness epsilon each.
    std::vector<std::pair<fc::strings::SignString, double>> v_sigma;
};

VMembership v_membership(const PCCPath& g, double phi,
                         const std::optional<UTPoint>& Q = std::nullopt);

// Axis choice for g: ramp blend of the midpoint argument and theta1/2 near
// amplitude pi (half-width delta). Throws if no membership flag holds.
double lift_to_N(const PCCPath& g, const UTPoint& Q, double delta = 0.05);

// Argument-parametrized convex interpolation of two curves with nonnegative
// step curvature and equal argument endpoints; curvature radii blend
// affinely, plateau lengths blend affinely.
PCCPath argument_interpolate(const PCCPath& g0, const PCCPath& g1, double s);

}  // namespace fc::curves
