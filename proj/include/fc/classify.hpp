#pragma once

#include <map>
#include <string>
#include <vector>

#include "fc/curves.hpp"

namespace fc::classify {

// Homotopy class of the curve space for boundary data Q: the Hilbert space E
// alone, or E x S^n.
struct HomotopyClass {
    bool spherical = false;
    int n = -1;  // sphere dimension when spherical

    bool operator==(const HomotopyClass& o) const {
        return spherical == o.spherical && (!spherical || n == o.n);
    }
    bool operator<(const HomotopyClass& o) const {
        const int a = spherical ? n : -1, b = o.spherical ? o.n : -1;
        return a < b;
    }
    std::string text() const;
};

inline HomotopyClass euclidean() { return {false, -1}; }
inline HomotopyClass sphere(int n) { return {true, n}; }

// Circle data for the region picture at a fixed turning angle: everything is
// expressed in axis coordinates (t along e^{i theta1/2}, w along its normal).
struct RegionGeometry {
    double theta1;
    double a;  // 2 sin(theta1/2), signed center offset on the axis
    double c;  // 2 cos(theta1/2), perpendicular center offset
};
RegionGeometry region_geometry(double theta1);

// Decision procedure for the class of the curve space at Q. Points on a
// bounding circle are nudged backward along 1+z until the verdict stabilizes.
HomotopyClass homotopy_class(const fc::curves::UTPoint& Q);

// Closed-form class intervals along the ray from 0 through 1+z, as
// (lo, hi] ray coordinates, in increasing order up to t_max.
struct RayInterval {
    double lo, hi;
    HomotopyClass cls;
};
std::vector<RayInterval> ray_profile(double theta1, double t_max);

// Class counts over lattice points a*e1 + b*e2 with |p| <= radius.
std::map<HomotopyClass, int> census(const std::array<double, 2>& e1,
                                    const std::array<double, 2>& e2,
                                    double theta1, double radius, int n_max);

struct AuditReport {
    int samples = 0;
    int overlap_violations = 0;      // a point in two distinct regions
    int symmetry_violations = 0;     // verdict differs across the axis
    int profile_violations = 0;      // ray samples disagree with the profile
    std::vector<std::string> notes;
    bool clean() const {
        return overlap_violations == 0 && symmetry_violations == 0 &&
               profile_violations == 0;
    }
};
AuditReport region_audit(double theta1, int k_max, int grid = 400);

std::string region_svg(double theta1, int k_max, int width = 800,
                       int samples = 160);

}  // namespace fc::classify
