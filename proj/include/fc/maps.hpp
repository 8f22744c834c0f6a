#pragma once

#include <array>
#include <vector>

#include "fc/classify.hpp"
#include "fc/curves.hpp"
#include "fc/strings.hpp"

namespace fc::maps {

// Model curve of word c l c l ... l c: near-vertical segments of prescribed
// argument phi + sigma(k) pi/2 + x_k joined by minimal-radius arcs.
struct Pulley {
    double phi;
    fc::strings::SignString sigma;
    std::vector<double> x;        // per-segment argument offsets
    std::vector<double> lengths;  // straight segment lengths, all > 8
    double kappa0;                // in (1/2, 1); arcs have radius 1/kappa0
    fc::curves::PCCPath path;
    bool amplitude_ok;    // every connecting arc turns less than pi
    bool diffuse_side;    // some opposite-sign pair has sigma(k) x_k > 0
    bool condensed_side;  // sigma(k) x_k < 0 for every k
    double fit_graft = 0.0;  // extra segment grafted by pulley_fit
};

Pulley pulley_build(double phi, const fc::strings::SignString& sigma,
                    const std::vector<double>& x,
                    const std::vector<double>& lengths, double kappa0,
                    double theta1);

// Offset-space membership against a nested family sigma_1 < ... < sigma_m
// (each a substring of the next, sigma_m = top) with threshold ladder
// deltas, delta_{j+1} > 2 delta_j. The diffuse side additionally needs an
// opposite-sign pair pushed outward; the condensed side needs every offset
// pulled inward.
bool hd_member(const fc::strings::SignString& sigma_m,
               const std::vector<double>& x,
               const std::vector<fc::strings::SignString>& chain,
               const std::vector<double>& deltas);
bool hc_member(const fc::strings::SignString& sigma_m,
               const std::vector<double>& x,
               const std::vector<fc::strings::SignString>& chain,
               const std::vector<double>& deltas);

// Adjusts two segment lengths and grafts one extra segment so the endpoint
// lands on q exactly; all adjusted lengths exceed 10. Throws when q is not
// attainable from the pulley's cone.
Pulley pulley_fit(const Pulley& p, const std::array<double, 2>& q);

struct SphereTarget {
    int n;
    double a = 0.2;  // cutoff start on |A|
    double b = 0.6;  // cutoff end; the band collapses radially past 1
};

// One member of the generating family: n+1 arcs of radius 1/kappa0 whose
// concatenation arguments are phi + (1+s) x_k, endpoint-corrected by up to
// three grafted segments. x must lie on the equator set (some coordinate
// +pi/2 and some -pi/2); |s| <= delta. The reference axis is
// phi = theta1/2 + phi_offset; a nonzero offset is needed when the two
// opposite top types only admit disjoint axis ranges, in which case the
// axis must vary with x (tilted toward the type reachable near x).
fc::curves::PCCPath generator_sample(const fc::curves::UTPoint& Q,
                                     const fc::strings::SignString& tau,
                                     const std::vector<double>& x, double s,
                                     double kappa0 = 0.9, double delta = 0.05,
                                     double phi_offset = 0.0);

// Point on S^{n-1} inside R^n; the last coordinate is the polar cosine.
// The north pole (0,...,0,1) is attained exactly on critical curves of
// type tau; curves with no vertical certificate map to the south pole.
std::vector<double> sphere_map_g(const fc::curves::PCCPath& g,
                                 const fc::strings::SignString& tau,
                                 const SphereTarget& target);

// Winding number of the composite sphere map over a loop through the
// generating family (two-lobe case). |result| = 1 for spherical classes.
int degree_check(const fc::curves::UTPoint& Q, int samples = 720);

// Higher-rank variant: counts connected clusters of near-north samples over
// a grid on the equator tube. Expected value 1, at the distinguished vertex.
int preimage_count(const fc::curves::UTPoint& Q,
                   const fc::strings::SignString& tau, int grid = 64);

}  // namespace fc::maps
