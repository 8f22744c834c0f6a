#include "fc/classify.hpp"

#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace fc::classify {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

struct P2 {
    double t, w;
};

double dist(P2 a, P2 b) { return std::hypot(a.t - b.t, a.w - b.w); }

double cross(P2 o, P2 a, P2 b) {
    return (a.t - o.t) * (b.w - o.w) - (a.w - o.w) * (b.t - o.t);
}

// 1: proper crossing, 0: none, -1: too close to call (caller re-jitters).
int seg_cross(P2 p, P2 q, P2 r, P2 s) {
    const double scale = 1.0 + std::abs(p.t) + std::abs(q.t) + std::abs(r.t) +
                         std::abs(s.t) + std::abs(p.w) + std::abs(q.w) +
                         std::abs(r.w) + std::abs(s.w);
    const double tol = 1e-12 * scale * scale;
    const double d1 = cross(p, q, r), d2 = cross(p, q, s);
    const double d3 = cross(r, s, p), d4 = cross(r, s, q);
    if (std::abs(d1) < tol || std::abs(d2) < tol || std::abs(d3) < tol ||
        std::abs(d4) < tol)
        return -1;
    return (d1 > 0) != (d2 > 0) && (d3 > 0) != (d4 > 0) ? 1 : 0;
}

// Crossing parity of the segment x -> anchor against a polyline; the polyline
// ends are extended far past their last vertices to make it a full separator.
std::optional<bool> even_crossings(P2 x, P2 anchor,
                                   const std::vector<P2>& chain) {
    int count = 0;
    for (size_t i = 0; i + 1 < chain.size(); ++i) {
        const int c = seg_cross(x, anchor, chain[i], chain[i + 1]);
        if (c < 0) return std::nullopt;
        count += c;
    }
    return count % 2 == 0;
}

P2 extend(P2 from, P2 through, double far) {
    const double d = dist(from, through);
    return {through.t + (through.t - from.t) / d * far,
            through.w + (through.w - from.w) / d * far};
}

// Membership of (t,w) in the forward region of index k and the given parity.
// The regions are bounded by mutually tangent circles, so the inequality set
// has two components; the verdict region is the one met by the forward ray,
// picked out by crossing parity against a separating chain through the
// tangency points.
bool in_region(const RegionGeometry& G, P2 x, int k, bool odd) {
    // The even/odd axis centers sit at -|a| and +|a|: flipping the sign of the
    // turning angle mirrors the whole picture across the axis, so the bounding
    // circle for the even case is always the center behind the origin.
    const double a = std::abs(G.a), c = G.c;
    const double far = 10.0 * (4 * k + 10 + std::abs(x.t) + std::abs(x.w));
    std::vector<P2> chain;
    double lo, hi;  // admissible anchor band on the axis
    if (!odd) {
        const double R = 4.0 * k + 4.0, r = 4.0 * k + 2.0;
        if (!(dist(x, {-a, 0}) < R)) return false;
        if (!(dist(x, {0, c}) > r)) return false;
        if (!(dist(x, {0, -c}) > r)) return false;
        const P2 pp{(2 * k + 1) * a, (2 * k + 2) * c};
        const P2 pm{(2 * k + 1) * a, -(2 * k + 2) * c};
        const P2 big{-a, 0};
        chain = {extend(big, pm, far), pm, {0, -c}, {0, c}, pp,
                 extend(big, pp, far)};
        lo = std::sqrt(std::max(r * r - c * c, 0.0));
        hi = R - a;
    } else {
        const double R = 4.0 * k + 4.0, r = 4.0 * k + 6.0;
        if (!(dist(x, {0, c}) < r)) return false;
        if (!(dist(x, {0, -c}) < r)) return false;
        if (!(dist(x, {a, 0}) > R)) return false;
        const P2 pp{(2 * k + 3) * a, -(2 * k + 2) * c};  // on circle about (0,c)
        const P2 pm{(2 * k + 3) * a, +(2 * k + 2) * c};  // on circle about (0,-c)
        chain = {extend({0, -c}, pm, far), pm, {a, 0}, pp,
                 extend({0, c}, pp, far)};
        lo = R + a;
        hi = std::sqrt(r * r - c * c);
    }
    for (int tries = 0; tries < 24; ++tries) {
        const double u = 0.5 + 0.017 * tries * (tries % 2 ? 1 : -1);
        const P2 anchor{lo + (hi - lo) * u, 1e-7 * tries};
        auto parity = even_crossings(x, anchor, chain);
        if (parity) return *parity;
    }
    throw std::logic_error("region parity test failed to resolve");
}

struct Verdict {
    std::optional<HomotopyClass> cls;  // nullopt: on a boundary circle
};

HomotopyClass raw_class(const RegionGeometry& G, P2 x) {
    const int k_range = static_cast<int>(std::hypot(x.t, x.w) / 4.0) + 3;
    for (int k = 0; k <= k_range; ++k) {
        if (in_region(G, x, k, false)) return sphere(2 * k);
        if (in_region(G, x, k, true)) return sphere(2 * k + 1);
    }
    return euclidean();
}

Verdict classify_point(const RegionGeometry& G, P2 x) {
    const double norm = std::hypot(x.t, x.w);
    const int k_range = static_cast<int>(norm / 4.0) + 3;
    const double tol = 1e-9 * (1.0 + norm);
    const double ab = std::abs(G.a);
    for (int k = 0; k <= k_range; ++k) {
        const double radii_even[3] = {4.0 * k + 4.0, 4.0 * k + 2.0,
                                      4.0 * k + 2.0};
        const double d_even[3] = {dist(x, {-ab, 0}), dist(x, {0, G.c}),
                                  dist(x, {0, -G.c})};
        const double radii_odd[3] = {4.0 * k + 4.0, 4.0 * k + 6.0,
                                     4.0 * k + 6.0};
        const double d_odd[3] = {dist(x, {ab, 0}), dist(x, {0, G.c}),
                                 dist(x, {0, -G.c})};
        for (int i = 0; i < 3; ++i)
            if (std::abs(d_even[i] - radii_even[i]) <= tol ||
                std::abs(d_odd[i] - radii_odd[i]) <= tol)
                return {};
    }
    return {raw_class(G, x)};
}

}  // namespace

std::string HomotopyClass::text() const {
    if (!spherical) return "E";
    std::ostringstream os;
    os << "E x S^" << n;
    return os.str();
}

RegionGeometry region_geometry(double theta1) {
    if (!(std::abs(theta1) < kPi))
        throw std::invalid_argument("turning angle must satisfy |theta1| < pi");
    return {theta1, 2.0 * std::sin(theta1 / 2.0), 2.0 * std::cos(theta1 / 2.0)};
}

HomotopyClass homotopy_class(const fc::curves::UTPoint& Q) {
    RegionGeometry G = region_geometry(Q.theta1);
    // Axis coordinates: t along e^{i theta1/2}, w along its normal.
    const double cu = std::cos(Q.theta1 / 2.0), su = std::sin(Q.theta1 / 2.0);
    P2 x{Q.q[0] * cu + Q.q[1] * su, -Q.q[0] * su + Q.q[1] * cu};
    Verdict v = classify_point(G, x);
    if (v.cls) return *v.cls;
    // Boundary: retreat along 1+z (i.e. along -t) until the verdict repeats.
    // The retreat direction can be tangent to the offending circle, leaving
    // the nudged point only O(delta^2) clear of it, so the tolerance band must
    // not be reapplied here; the strict inequalities resolve it exactly.
    const double scale = 1.0 + std::hypot(x.t, x.w);
    double delta = 1e-5 * scale;
    std::optional<HomotopyClass> prev;
    for (int i = 0; i < 40; ++i) {
        HomotopyClass cls = raw_class(G, {x.t - delta * G.c, x.w});
        if (prev && *prev == cls) return cls;
        prev = cls;
        delta /= 2.0;
    }
    throw std::runtime_error("boundary nudge did not stabilize");
}

std::vector<RayInterval> ray_profile(double theta1, double t_max) {
    RegionGeometry G = region_geometry(theta1);
    const double ab = std::abs(G.a);
    std::vector<RayInterval> out;
    double cursor = 0.0;
    auto push = [&](double lo, double hi, HomotopyClass cls) {
        if (lo >= t_max) return;
        hi = std::min(hi, t_max);
        if (lo > cursor + 1e-12) out.push_back({cursor, lo, euclidean()});
        out.push_back({lo, hi, cls});
        cursor = hi;
    };
    for (int k = 0;; ++k) {
        const double r = 4.0 * k + 2.0;
        const double even_lo = std::sqrt(std::max(r * r - G.c * G.c, 0.0));
        const double even_hi = 4.0 * k + 4.0 - ab;
        if (even_lo >= t_max) break;
        push(even_lo, even_hi, sphere(2 * k));
        const double rr = 4.0 * k + 6.0;
        const double odd_lo = 4.0 * k + 4.0 + ab;
        const double odd_hi = std::sqrt(rr * rr - G.c * G.c);
        if (odd_lo >= t_max) break;
        push(odd_lo, odd_hi, sphere(2 * k + 1));
    }
    if (cursor < t_max - 1e-12) out.push_back({cursor, t_max, euclidean()});
    return out;
}

std::map<HomotopyClass, int> census(const std::array<double, 2>& e1,
                                    const std::array<double, 2>& e2,
                                    double theta1, double radius, int n_max) {
    const double det = e1[0] * e2[1] - e1[1] * e2[0];
    if (std::abs(det) < 1e-12)
        throw std::invalid_argument("lattice basis is degenerate");
    const double n1 = std::hypot(e1[0], e1[1]), n2 = std::hypot(e2[0], e2[1]);
    const int M = static_cast<int>(radius * (n1 + n2) / std::abs(det)) + 2;
    std::map<HomotopyClass, int> counts;
    for (int m = -M; m <= M; ++m)
        for (int n = -M; n <= M; ++n) {
            const double px = m * e1[0] + n * e2[0];
            const double py = m * e1[1] + n * e2[1];
            if (std::hypot(px, py) > radius) continue;
            HomotopyClass cls = homotopy_class({{px, py}, theta1});
            if (cls.spherical && cls.n > n_max) continue;
            ++counts[cls];
        }
    return counts;
}

AuditReport region_audit(double theta1, int k_max, int grid) {
    RegionGeometry G = region_geometry(theta1);
    AuditReport rep;
    const double L = 4.0 * k_max + 10.0;
    auto memberships = [&](P2 x) {
        std::vector<int> hits;
        for (int k = 0; k <= k_max; ++k) {
            if (in_region(G, x, k, false)) hits.push_back(2 * k);
            if (in_region(G, x, k, true)) hits.push_back(2 * k + 1);
        }
        return hits;
    };
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j <= grid / 2; ++j) {
            const P2 x{-L + 2.0 * L * (i + 0.5) / grid,
                       2.0 * L * (j + 0.25) / grid};
            ++rep.samples;
            auto hits = memberships(x);
            if (hits.size() > 1) {
                ++rep.overlap_violations;
                if (rep.notes.size() < 10) {
                    std::ostringstream os;
                    os << "overlap at t=" << x.t << " w=" << x.w;
                    rep.notes.push_back(os.str());
                }
            }
            auto mirror = memberships({x.t, -x.w});
            if (hits != mirror) {
                ++rep.symmetry_violations;
                if (rep.notes.size() < 10) {
                    std::ostringstream os;
                    os << "asymmetry at t=" << x.t << " w=" << x.w;
                    rep.notes.push_back(os.str());
                }
            }
        }
    // Ray samples against the closed-form profile.
    auto profile = ray_profile(theta1, L);
    const int rays = 10000;
    for (int i = 1; i < rays; ++i) {
        const double t = L * i / rays;
        bool near_break = false;
        for (const auto& iv : profile)
            if (std::abs(t - iv.lo) < 1e-7 || std::abs(t - iv.hi) < 1e-7)
                near_break = true;
        if (near_break) continue;
        HomotopyClass tabulated = euclidean();
        for (const auto& iv : profile)
            if (iv.lo < t && t <= iv.hi) tabulated = iv.cls;
        // Bands beyond the audited index range are not comparable.
        if (tabulated.spherical && tabulated.n > 2 * k_max + 1) continue;
        auto hits = memberships({t, 0.0});
        HomotopyClass direct =
            hits.empty() ? euclidean() : sphere(hits.front());
        if (!(direct == tabulated)) ++rep.profile_violations;
        ++rep.samples;
    }
    return rep;
}

std::string region_svg(double theta1, int k_max, int width, int samples) {
    RegionGeometry G = region_geometry(theta1);
    const double L = 4.0 * k_max + 10.0;
    const double sc = width / (2.0 * L);
    auto X = [&](double t) { return (t + L) * sc; };
    auto Y = [&](double w) { return (L - w) * sc; };
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
       << "\" height=\"" << width << "\" viewBox=\"0 0 " << width << " "
       << width << "\">\n";
    static const char* palette[] = {"#e7f0fa", "#f8e3d1", "#dcefd8", "#f5d8e8",
                                    "#fdf3cd", "#d8e8f5", "#e8d8f5", "#d1f8ee"};
    const double cell = 2.0 * L / samples;
    for (int i = 0; i < samples; ++i)
        for (int j = 0; j < samples; ++j) {
            const P2 x{-L + cell * (i + 0.5), -L + cell * (j + 0.5)};
            std::optional<int> hit;
            for (int k = 0; k <= k_max && !hit; ++k) {
                if (in_region(G, x, k, false)) hit = 2 * k;
                else if (in_region(G, x, k, true)) hit = 2 * k + 1;
            }
            if (!hit) continue;
            os << "<rect x=\"" << X(x.t) - cell * sc / 2 << "\" y=\""
               << Y(x.w) - cell * sc / 2 << "\" width=\"" << cell * sc
               << "\" height=\"" << cell * sc << "\" fill=\""
               << palette[*hit % 8] << "\"/>\n";
        }
    auto circle = [&](double ct, double cw, double r, const char* color) {
        os << "<circle cx=\"" << X(ct) << "\" cy=\"" << Y(cw) << "\" r=\""
           << r * sc << "\" fill=\"none\" stroke=\"" << color
           << "\" stroke-width=\"1\"/>\n"
           << "<text x=\"" << X(ct) << "\" y=\"" << Y(cw)
           << "\" font-size=\"10\">(" << r << ")</text>\n";
    };
    for (int k = 0; k <= k_max; ++k) {
        circle(-std::abs(G.a), 0, 4.0 * k + 4.0, "#444");
        circle(std::abs(G.a), 0, 4.0 * k + 4.0, "#888");
        circle(0, G.c, 4.0 * k + 2.0, "#a33");
        circle(0, -G.c, 4.0 * k + 2.0, "#a33");
        circle(0, G.c, 4.0 * k + 6.0, "#33a");
        circle(0, -G.c, 4.0 * k + 6.0, "#33a");
    }
    os << "<line x1=\"" << X(0) << "\" y1=\"" << Y(0) << "\" x2=\"" << X(L)
       << "\" y2=\"" << Y(0) << "\" stroke=\"#000\" stroke-dasharray=\"4\"/>\n";
    os << "</svg>\n";
    return os.str();
}

}  // namespace fc::classify
