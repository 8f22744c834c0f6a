#include "fc/maps.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <optional>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace fc::maps {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

using C = std::complex<double>;
using fc::curves::PCCPath;
using fc::curves::Segment;
using fc::strings::SignString;

double cross(C a, C b) { return a.real() * b.imag() - a.imag() * b.real(); }
double dot(C a, C b) { return a.real() * b.real() + a.imag() * b.imag(); }

C endpoint(const PCCPath& g) {
    auto p = fc::curves::pose_at(g, fc::curves::total_length(g));
    return {p.point[0], p.point[1]};
}

// Appends an arc turning the tangent by amp at radius 1/kappa0 (skipped when
// degenerate) and returns the new tangent argument.
double push_arc(std::vector<Segment>& segs, double from, double amp,
                double kappa0) {
    if (amp != 0.0) {
        segs.push_back({amp > 0 ? kappa0 : -kappa0, std::abs(amp) / kappa0});
    }
    return from + amp;
}

// Curve made of arcs only, with prescribed tangent arguments at the
// concatenation points; consecutive arguments are joined by the direct turn
// (no wrap-around), so the argument stays between the prescribed values.
struct JoinsCurve {
    PCCPath path;
    std::vector<double> join_t;  // arc-length position of each join
};

JoinsCurve joins_curve(double theta1, const std::vector<double>& joins,
                       double kappa0) {
    JoinsCurve out;
    out.path.start = {0.0, 0.0};
    out.path.theta0 = 0.0;
    double th = 0.0, pos = 0.0;
    for (double j : joins) {
        const double amp = j - th;
        th = push_arc(out.path.segments, th, amp, kappa0);
        pos += std::abs(amp) / kappa0;
        out.join_t.push_back(pos);
    }
    push_arc(out.path.segments, th, theta1 - th, kappa0);
    return out;
}

// First arc-length position where the argument crosses target (mod 2 pi).
double theta_cross(const PCCPath& g, double target) {
    auto nodes = fc::curves::theta_nodes(g);
    for (size_t i = 0; i + 1 < nodes.size(); ++i) {
        const double a = nodes[i].second, b = nodes[i + 1].second;
        const double base = std::remainder(target - a, 2.0 * kPi) + a;
        for (double cand : {base, base + 2.0 * kPi, base - 2.0 * kPi}) {
            const double lo = std::min(a, b), hi = std::max(a, b);
            if (cand < lo - 1e-12 || cand > hi + 1e-12) continue;
            if (std::abs(b - a) < 1e-15) return nodes[i].first;
            double u = (cand - a) / (b - a);
            u = std::clamp(u, 0.0, 1.0);
            return nodes[i].first + u * (nodes[i + 1].first - nodes[i].first);
        }
    }
    throw std::runtime_error("argument level not attained on the curve");
}

struct Fit3 {
    double a0, a1, a2;
};

// Positive-combination solve D = a0 u0 + a1 u1 + a2 u2 with a1, a2 >= m,
// continuous in D: a1 = m + max(w, 0), a2 = m + max(-w, 0) with w chosen so
// the residual is parallel to u0.
std::optional<Fit3> fit3(C D, C u0, C u1, C u2, double m, double a0_min) {
    const double c1 = cross(u1, u0), c2 = cross(u2, u0);
    if (std::abs(c1) < 1e-9 || std::abs(c2) < 1e-9) return std::nullopt;
    const double Cq = cross(D - m * (u1 + u2), u0);
    double w = Cq / c1;
    if (w < 0.0) {
        w = -Cq / c2;
        if (w > 0.0) w = 0.0;
    }
    const double a1 = m + std::max(w, 0.0), a2 = m + std::max(-w, 0.0);
    const C R = D - a1 * u1 - a2 * u2;
    const double a0 = dot(R, u0);
    if (!(a0 > a0_min)) return std::nullopt;
    return Fit3{a0, a1, a2};
}

// Grafts segments of the given lengths at the given arc-length positions.
PCCPath graft_all(PCCPath g, std::vector<std::pair<double, double>> ops) {
    std::sort(ops.begin(), ops.end(),
              [](auto& a, auto& b) { return a.first > b.first; });
    for (auto& [t, len] : ops)
        if (len > 1e-12) g = fc::curves::graft(g, t, len);
    return g;
}

bool tag_condition(const SignString& sigma_m, const std::vector<double>& x,
                   const SignString& sigma_j, double bound, bool strict) {
    std::vector<int> tags;
    for (size_t k = 0; k < x.size(); ++k) {
        const double ax = std::abs(x[k]);
        if (strict ? ax < bound : ax <= bound)
            tags.push_back(sigma_m(static_cast<int>(k) + 1));
    }
    if (tags.size() < 2) return false;
    try {
        return fc::strings::reduce_string(fc::strings::ExtendedString(tags)) ==
               sigma_j;
    } catch (const fc::strings::NotAString&) {
        return false;
    }
}

bool ladder_ok(const SignString& sigma_m, const std::vector<double>& x,
               const std::vector<SignString>& chain,
               const std::vector<double>& deltas) {
    if (chain.size() != deltas.size())
        throw std::invalid_argument("chain and threshold sizes differ");
    for (size_t j = 0; j + 1 < deltas.size(); ++j)
        if (!(deltas[j + 1] > 2.0 * deltas[j]))
            throw std::invalid_argument("thresholds must more than double");
    if (chain.empty() || !(chain.back() == sigma_m))
        throw std::invalid_argument("chain must end at the top string");
    for (size_t j = 0; j < chain.size(); ++j) {
        if (!tag_condition(sigma_m, x, chain[j], deltas[j], true)) return false;
        if (!tag_condition(sigma_m, x, chain[j], 2.0 * deltas[j], false))
            return false;
    }
    return true;
}

std::vector<double> helmert_coords(const std::vector<double>& v) {
    const int n = static_cast<int>(v.size());
    std::vector<double> y(static_cast<size_t>(n - 1));
    for (int j = 1; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < j; ++i) s += v[static_cast<size_t>(i)];
        y[static_cast<size_t>(j - 1)] =
            (s - j * v[static_cast<size_t>(j)]) / std::sqrt(double(j) * (j + 1));
    }
    return y;
}

}  // namespace

Pulley pulley_build(double phi, const SignString& sigma,
                    const std::vector<double>& x,
                    const std::vector<double>& lengths, double kappa0,
                    double theta1) {
    const int n = sigma.size();
    if (static_cast<int>(x.size()) != n ||
        static_cast<int>(lengths.size()) != n)
        throw std::invalid_argument("offset/length count must match the string");
    if (!(kappa0 > 0.5 && kappa0 < 1.0))
        throw std::invalid_argument("kappa0 must lie in (1/2, 1)");
    for (double l : lengths)
        if (!(l > 8.0))
            throw std::invalid_argument("segment lengths must exceed 8");

    Pulley p{phi, sigma, x, lengths, kappa0, {}, true, false, false, 0.0};
    std::vector<double> dir(static_cast<size_t>(n));
    for (int k = 1; k <= n; ++k)
        dir[static_cast<size_t>(k - 1)] =
            phi + sigma(k) * kPi / 2.0 + x[static_cast<size_t>(k - 1)];

    p.path.start = {0.0, 0.0};
    p.path.theta0 = 0.0;
    double th = 0.0;
    auto note_amp = [&](double amp) {
        if (!(std::abs(amp) < kPi)) p.amplitude_ok = false;
    };
    for (int k = 1; k <= n; ++k) {
        const double d = dir[static_cast<size_t>(k - 1)];
        double amp;
        if (k == 1 || sigma(k) == sigma(k - 1)) {
            amp = std::remainder(d - th, 2.0 * kPi);
        } else {
            // Sign change: turn through the middle band, never the far way.
            amp = d - th;
        }
        note_amp(amp);
        th = push_arc(p.path.segments, th, amp, kappa0);
        p.path.segments.push_back({0.0, lengths[static_cast<size_t>(k - 1)]});
    }
    const double amp = std::remainder(theta1 - th, 2.0 * kPi);
    note_amp(amp);
    push_arc(p.path.segments, th, amp, kappa0);

    bool up = false, down = false, all_in = true;
    for (int k = 1; k <= n; ++k) {
        const double v = sigma(k) * x[static_cast<size_t>(k - 1)];
        if (v > 0.0) (sigma(k) > 0 ? up : down) = true;
        if (!(v < 0.0)) all_in = false;
    }
    p.diffuse_side = up && down;
    p.condensed_side = all_in;
    return p;
}

bool hd_member(const SignString& sigma_m, const std::vector<double>& x,
               const std::vector<SignString>& chain,
               const std::vector<double>& deltas) {
    bool up = false, down = false;
    for (int k = 1; k <= sigma_m.size(); ++k) {
        if (sigma_m(k) * x[static_cast<size_t>(k - 1)] > 0.0)
            (sigma_m(k) > 0 ? up : down) = true;
    }
    return up && down && ladder_ok(sigma_m, x, chain, deltas);
}

bool hc_member(const SignString& sigma_m, const std::vector<double>& x,
               const std::vector<SignString>& chain,
               const std::vector<double>& deltas) {
    for (int k = 1; k <= sigma_m.size(); ++k)
        if (!(sigma_m(k) * x[static_cast<size_t>(k - 1)] < 0.0)) return false;
    return ladder_ok(sigma_m, x, chain, deltas);
}

Pulley pulley_fit(const Pulley& p, const std::array<double, 2>& q) {
    const C D = C{q[0], q[1]} - endpoint(p.path);
    if (std::abs(D) < 1e-12) return p;

    int k1 = 0, k2 = 0;  // 1-based; plus/minus anchors
    if (p.diffuse_side) {
        for (int k = 1; k <= p.sigma.size(); ++k) {
            const double xk = p.x[static_cast<size_t>(k - 1)];
            if (p.sigma(k) > 0 && xk > 0 && !k1) k1 = k;
            if (p.sigma(k) < 0 && xk < 0 && !k2) k2 = k;
        }
    } else {
        for (int k = 1; k <= p.sigma.size(); ++k) {
            if (p.sigma(k) > 0 && !k1) k1 = k;
            if (p.sigma(k) < 0 && !k2) k2 = k;
        }
    }
    if (!k1 || !k2) throw std::logic_error("no usable anchor segments");

    const C u0 = std::polar(1.0, p.phi);
    const C u1 =
        std::polar(1.0, p.phi + kPi / 2.0 + p.x[static_cast<size_t>(k1 - 1)]);
    const C u2 =
        std::polar(1.0, p.phi - kPi / 2.0 + p.x[static_cast<size_t>(k2 - 1)]);

    std::optional<Fit3> fit;
    if (p.diffuse_side) {
        for (double m = 10.5; m < 1e9; m *= 1.5) {
            fit = fit3(D, u0, u1, u2, m, 10.0);
            if (fit) break;
        }
    } else {
        fit = fit3(D, u0, u1, u2, 10.5, 10.0);
    }
    if (!fit) {
        std::ostringstream os;
        os << "endpoint not attainable: <q - end, axis> = " << dot(D, u0)
           << " with anchor margins 10; need a deeper point in the cone";
        throw std::invalid_argument(os.str());
    }

    Pulley out = p;
    out.lengths[static_cast<size_t>(k1 - 1)] += fit->a1;
    out.lengths[static_cast<size_t>(k2 - 1)] += fit->a2;
    out.fit_graft = fit->a0;
    out = pulley_build(out.phi, out.sigma, out.x, out.lengths, out.kappa0,
                       fc::curves::pose_at(p.path, fc::curves::total_length(
                                                       p.path))
                           .theta);
    out.fit_graft = fit->a0;
    out.path = graft_all(out.path,
                         {{theta_cross(out.path, out.phi), fit->a0}});
    return out;
}

namespace {

// Endpoint-corrected curve from raw joins: grafts at the first axis
// crossing and at the two anchor joins (one near each pole).
PCCPath correct_endpoint(const JoinsCurve& jc, const fc::curves::UTPoint& Q,
                         double phi, int plus_join, int minus_join,
                         const std::vector<double>& joins, double base_len) {
    C D = C{Q.q[0], Q.q[1]} - endpoint(jc.path);
    const C u0 = std::polar(1.0, phi);
    const C u1 = std::polar(1.0, joins[static_cast<size_t>(plus_join)]);
    const C u2 = std::polar(1.0, joins[static_cast<size_t>(minus_join)]);
    // A fixed-length segment is grafted at every concatenation point first:
    // it provides a straight near-vertical witness in each window, which
    // stays stretchable however far the window's arc apex sits from the
    // vertical. The fit then absorbs the residual.
    std::vector<std::pair<double, double>> ops;
    for (size_t k = 0; k < joins.size(); ++k) {
        if (base_len <= 0.0) break;
        D -= base_len * std::polar(1.0, joins[k]);
        ops.emplace_back(jc.join_t[k], base_len);
    }
    auto fit = fit3(D, u0, u1, u2, 0.05, 0.005);
    if (!fit) throw std::runtime_error("graft cone misses the endpoint");
    ops.emplace_back(theta_cross(jc.path, phi), fit->a0);
    ops.emplace_back(jc.join_t[static_cast<size_t>(plus_join)], fit->a1);
    ops.emplace_back(jc.join_t[static_cast<size_t>(minus_join)], fit->a2);
    return graft_all(jc.path, ops);
}

PCCPath build_corrected(const fc::curves::UTPoint& Q, double phi,
                        const std::vector<double>& joins, int plus_join,
                        int minus_join, double kappa0, double base_len = 0.0) {
    for (int tries = 0; tries < 24; ++tries) {
        auto jc = joins_curve(Q.theta1, joins, kappa0);
        try {
            return correct_endpoint(jc, Q, phi, plus_join, minus_join, joins,
                                    base_len);
        } catch (const std::runtime_error&) {
            kappa0 = (1.0 + kappa0) / 2.0;  // tighter arcs, endpoint nearer 0
        }
    }
    throw std::runtime_error("endpoint correction failed at every radius");
}

}  // namespace

PCCPath generator_sample(const fc::curves::UTPoint& Q, const SignString& tau,
                         const std::vector<double>& x, double s, double kappa0,
                         double delta, double phi_offset) {
    const int n = tau.size();
    if (static_cast<int>(x.size()) != n)
        throw std::invalid_argument("offset count must match the string");
    if (!(std::abs(s) <= delta + 1e-12))
        throw std::invalid_argument("|s| must not exceed the tube half-width");
    int k1 = -1, k2 = -1;
    for (int k = 0; k < n; ++k) {
        if (std::abs(x[static_cast<size_t>(k)]) > kPi / 2.0 + 1e-9)
            throw std::invalid_argument("offsets must lie within the cube");
        if (std::abs(x[static_cast<size_t>(k)] - kPi / 2.0) < 1e-9) k1 = k;
        if (std::abs(x[static_cast<size_t>(k)] + kPi / 2.0) < 1e-9) k2 = k;
    }
    if (k1 < 0 || k2 < 0)
        throw std::invalid_argument(
            "point must lie on the equator set (a +pi/2 and a -pi/2 entry)");
    auto cls = fc::classify::homotopy_class(Q);
    if (!(cls == fc::classify::sphere(n - 1)))
        throw std::invalid_argument("boundary data is not of the sphere class " +
                                    std::to_string(n - 1));
    const double phi = Q.theta1 / 2.0 + phi_offset;
    std::vector<double> joins(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k)
        joins[static_cast<size_t>(k)] =
            phi + (1.0 + s) * x[static_cast<size_t>(k)];
    return build_corrected(Q, phi, joins, k1, k2, kappa0, 0.5);
}

std::vector<double> sphere_map_g(const PCCPath& g, const SignString& tau,
                                 const SphereTarget& target) {
    const int n = tau.size();
    if (n < 2 || target.n != n)
        throw std::invalid_argument("target rank must match the string");
    std::vector<double> south(static_cast<size_t>(n), 0.0);
    south.back() = -1.0;

    const double phi_bar = fc::curves::curve_stats(g).phi_bar;
    std::optional<fc::curves::QuasiCert> cert;
    for (double eps : fc::curves::epsilon_grid()) {
        cert = fc::curves::quasicritical_find(g, phi_bar, eps, tau);
        if (cert) break;
    }
    if (!cert) return south;

    std::vector<double> h = fc::curves::h_map(g, *cert);
    const double mean =
        std::accumulate(h.begin(), h.end(), 0.0) / static_cast<double>(n);
    std::vector<double> A(h);
    for (double& v : A) v -= mean;
    double norm = 0.0;
    for (double v : A) norm += v * v;
    norm = std::sqrt(norm);

    const double lam =
        std::clamp((norm - target.a) / (target.b - target.a), 0.0, 1.0);
    std::vector<double> v(A);
    if (norm > 1e-15) {
        for (size_t i = 0; i < v.size(); ++i)
            v[i] = (1.0 - lam) * A[i] + lam * A[i] / norm;
    }
    auto y = helmert_coords(v);
    double rho = 0.0;
    for (double c : y) rho += c * c;
    rho = std::sqrt(rho);

    std::vector<double> out(static_cast<size_t>(n), 0.0);
    const double ang = kPi * std::min(rho, 1.0);
    if (rho > 1e-15)
        for (size_t i = 0; i + 1 < out.size(); ++i)
            out[i] = std::sin(ang) * y[i] / rho;
    out.back() = std::cos(ang);
    return out;
}

namespace {

// Loop of curves through the two-lobe generating family: tube passes at the
// two equator corners plus diffuse and condensed connecting stages. The
// connecting stages first drive |A| past the collapse radius (growing the
// lobes on the diffuse side, shrinking them on the condensed side), so the
// sphere map stays near the collapse point while the lobes are rearranged.
PCCPath loop_curve(const fc::curves::UTPoint& Q, double t, double kappa0,
                   double delta) {
    const double phi = Q.theta1 / 2.0;
    const double c0 = (1.0 + delta) * kPi / 2.0;  // diffuse tube lobe
    const double c1 = kPi / 2.0 + 0.9;            // inflated diffuse lobe
    const double d0 = (1.0 - delta) * kPi / 2.0;  // condensed tube lobe
    const double d1 = 0.6;                        // shrunken condensed lobe

    auto two = [&](double a, double b, int pj, int mj) {
        return build_corrected(Q, phi, {phi + a, phi + b}, pj, mj, kappa0);
    };
    auto three = [&](std::vector<double> j, int pj, int mj) {
        for (double& v : j) v += phi;
        return build_corrected(Q, phi, j, pj, mj, kappa0);
    };

    t -= std::floor(t);
    const double u = 4.0 * t;
    if (u < 1.0) {  // tube at the (+,-) corner: s from -delta to +delta
        const double s = -delta + 2.0 * delta * u;
        const double c = (1.0 + s) * kPi / 2.0;
        return two(c, -c, 0, 1);
    }
    if (u < 2.0) {  // diffuse stage
        const double v = u - 1.0;
        if (v < 1.0 / 3.0) {  // inflate
            const double c = c0 + (c1 - c0) * 3.0 * v;
            return two(c, -c, 0, 1);
        }
        if (v < 2.0 / 3.0) {  // rearrange at full amplitude
            const double w = 3.0 * v - 1.0;
            if (w < 0.5)
                return three({c1, -c1, -c1 + 2.0 * c1 * (2.0 * w)}, 0, 1);
            return three({c1 - 2.0 * c1 * (2.0 * w - 1.0), -c1, c1}, 2, 1);
        }
        const double c = c1 + (c0 - c1) * (3.0 * v - 2.0);  // deflate
        return two(-c, c, 1, 0);
    }
    if (u < 3.0) {  // tube at the (-,+) corner: s from +delta to -delta
        const double s = delta - 2.0 * delta * (u - 2.0);
        const double c = (1.0 + s) * kPi / 2.0;
        return two(-c, c, 1, 0);
    }
    const double v = u - 3.0;  // condensed stage
    if (v < 1.0 / 3.0) {       // shrink
        const double c = d0 + (d1 - d0) * 3.0 * v;
        return two(-c, c, 1, 0);
    }
    if (v < 2.0 / 3.0) {  // rearrange at small amplitude
        const double w = 3.0 * v - 1.0;
        if (w < 0.5) return three({-d1, d1, d1 - 2.0 * d1 * (2.0 * w)}, 1, 0);
        return three({-d1 + 2.0 * d1 * (2.0 * w - 1.0), d1, -d1}, 1, 2);
    }
    const double c = d1 + (d0 - d1) * (3.0 * v - 2.0);  // regrow
    return two(c, -c, 0, 1);
}

double loop_angle(const fc::curves::UTPoint& Q, double t,
                  const SignString& tau, double kappa0, double delta) {
    auto g = sphere_map_g(loop_curve(Q, t, kappa0, delta), tau, {2});
    return std::atan2(g[0], g[1]);
}

double winding_rec(const fc::curves::UTPoint& Q, const SignString& tau,
                   double kappa0, double delta, double t0, double a0, double t1,
                   double a1, int depth) {
    const double d = std::remainder(a1 - a0, 2.0 * kPi);
    if (std::abs(d) <= kPi / 2.0 || depth >= 10) return d;
    const double tm = (t0 + t1) / 2.0;
    const double am = loop_angle(Q, tm, tau, kappa0, delta);
    return winding_rec(Q, tau, kappa0, delta, t0, a0, tm, am, depth + 1) +
           winding_rec(Q, tau, kappa0, delta, tm, am, t1, a1, depth + 1);
}

}  // namespace

int degree_check(const fc::curves::UTPoint& Q, int samples) {
    auto cls = fc::classify::homotopy_class(Q);
    if (!(cls == fc::classify::sphere(1)))
        throw std::invalid_argument("boundary data is not of circle class");
    const SignString tau = SignString::parse("+-");
    const double kappa0 = 0.9, delta = 0.05;
    if (samples < 16) samples = 16;

    std::vector<double> ts(static_cast<size_t>(samples) + 1);
    std::vector<double> as(ts.size());
    for (int i = 0; i <= samples; ++i) {
        ts[static_cast<size_t>(i)] = static_cast<double>(i) / samples;
        as[static_cast<size_t>(i)] =
            loop_angle(Q, ts[static_cast<size_t>(i)], tau, kappa0, delta);
    }
    double total = 0.0;
    for (int i = 0; i < samples; ++i)
        total += winding_rec(Q, tau, kappa0, delta, ts[static_cast<size_t>(i)],
                             as[static_cast<size_t>(i)],
                             ts[static_cast<size_t>(i) + 1],
                             as[static_cast<size_t>(i) + 1], 0);
    return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

int preimage_count(const fc::curves::UTPoint& Q, const SignString& tau,
                   int grid) {
    const int n = tau.size();
    if (n != 3)
        throw std::invalid_argument("preimage counting is the rank-3 variant");
    auto cls = fc::classify::homotopy_class(Q);
    if (!(cls == fc::classify::sphere(n - 1)))
        throw std::invalid_argument("boundary data class mismatch");
    const double delta = 0.05;

    // Hexagonal equator cycle: mixed-sign cube vertices, one coordinate
    // flipped per edge.
    const int hex[6][3] = {{+1, -1, -1}, {+1, +1, -1}, {-1, +1, -1},
                           {-1, +1, +1}, {-1, -1, +1}, {+1, -1, +1}};
    auto equator = [&](double u) {  // u in [0, 6)
        const int e = static_cast<int>(std::floor(u)) % 6;
        const double f = u - std::floor(u);
        std::vector<double> x(3);
        for (int k = 0; k < 3; ++k) {
            const double a = hex[e][k] * kPi / 2.0;
            const double b = hex[(e + 1) % 6][k] * kPi / 2.0;
            x[static_cast<size_t>(k)] = a + (b - a) * f;
        }
        return x;
    };

    // Locate the distinguished vertex p (coordinates tau(k) pi/2) and its
    // opposite on the cycle.
    int up = -1;
    for (int e = 0; e < 6; ++e) {
        bool match = true;
        for (int k = 0; k < 3; ++k)
            if (hex[e][k] != tau(k + 1)) match = false;
        if (match) up = e;
    }
    if (up < 0)
        throw std::invalid_argument("string vertex must lie on the equator");

    // The two opposite vertices may admit no common reference axis: at the
    // far edge of the band the bare arc skeleton of one type reaches q only
    // when the axis is tilted toward that type. Pick, for each vertex, the
    // tilt maximizing the forward slack of the skeleton against q, and blend
    // the two tilts along the cycle, holding each constant near its vertex.
    auto slack = [&](const std::vector<double>& x, double off) {
        const double phi = Q.theta1 / 2.0 + off;
        std::vector<double> joins(3);
        for (int k = 0; k < 3; ++k)
            joins[static_cast<size_t>(k)] = phi + x[static_cast<size_t>(k)];
        auto jc = joins_curve(Q.theta1, joins, 0.999);
        const C D = C{Q.q[0], Q.q[1]} - endpoint(jc.path);
        return dot(D, std::polar(1.0, phi));
    };
    auto best_tilt = [&](double u) {
        auto x = equator(u);
        double best = 0.0, bv = slack(x, 0.0);
        for (double off = -1.2; off <= 1.2; off += 0.002) {
            const double v = slack(x, off);
            if (v > bv) {
                bv = v;
                best = off;
            }
        }
        return best;
    };
    const double tilt_p = best_tilt(static_cast<double>(up));
    const double tilt_m = best_tilt(static_cast<double>((up + 3) % 6));
    auto axis_offset = [&](double u) {
        double d = std::fmod(u - up + 6.0, 6.0);  // distance to p along cycle
        d = std::min(d, 6.0 - d);                 // in [0, 3]
        const double t =
            std::clamp((d - 0.9) / 1.2, 0.0, 1.0);  // plateau, ramp, plateau
        const double w = (1.0 - std::cos(kPi * t)) / 2.0;
        return tilt_p + (tilt_m - tilt_p) * w;
    };

    std::vector<std::vector<bool>> hit(static_cast<size_t>(grid),
                                       std::vector<bool>(static_cast<size_t>(grid)));
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            const double u = 6.0 * i / grid;
            auto x = equator(u);
            const double s = -delta + 2.0 * delta * j / (grid - 1);
            auto g = sphere_map_g(generator_sample(Q, tau, x, s, 0.9, delta,
                                                   axis_offset(u)),
                                  tau, {n});
            hit[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                g.back() > std::cos(0.5);
        }

    int clusters = 0;
    std::vector<std::vector<bool>> seen(static_cast<size_t>(grid),
                                        std::vector<bool>(static_cast<size_t>(grid)));
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            if (!hit[static_cast<size_t>(i)][static_cast<size_t>(j)] ||
                seen[static_cast<size_t>(i)][static_cast<size_t>(j)])
                continue;
            ++clusters;
            std::queue<std::pair<int, int>> bfs;
            bfs.push({i, j});
            seen[static_cast<size_t>(i)][static_cast<size_t>(j)] = true;
            while (!bfs.empty()) {
                auto [a, b] = bfs.front();
                bfs.pop();
                const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
                for (int d = 0; d < 4; ++d) {
                    const int na = ((a + di[d]) % grid + grid) % grid;
                    const int nb = b + dj[d];
                    if (nb < 0 || nb >= grid) continue;
                    if (hit[static_cast<size_t>(na)][static_cast<size_t>(nb)] &&
                        !seen[static_cast<size_t>(na)][static_cast<size_t>(nb)]) {
                        seen[static_cast<size_t>(na)][static_cast<size_t>(nb)] =
                            true;
                        bfs.push({na, nb});
                    }
                }
            }
        }
    return clusters;
}

}  // namespace fc::maps
