#include "fc/curves.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fc::curves {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

struct Node {
    double t;
    double th;
};

std::vector<Node> make_nodes(const PCCPath& g) {
    std::vector<Node> ns;
    ns.push_back({0.0, g.theta0});
    double t = 0.0, th = g.theta0;
    for (const Segment& s : g.segments) {
        t += s.length;
        th += s.kappa * s.length;
        ns.push_back({t, th});
    }
    return ns;
}

double interp(const std::vector<Node>& ns, double t) {
    if (t <= ns.front().t) return ns.front().th;
    if (t >= ns.back().t) return ns.back().th;
    for (size_t i = 0; i + 1 < ns.size(); ++i) {
        if (t <= ns[i + 1].t) {
            const double span = ns[i + 1].t - ns[i].t;
            if (span <= 0.0) return ns[i + 1].th;
            const double u = (t - ns[i].t) / span;
            return ns[i].th + u * (ns[i + 1].th - ns[i].th);
        }
    }
    return ns.back().th;
}

// Insert exact crossing points of the given levels into the node list.
std::vector<Node> refine(const std::vector<Node>& ns,
                         const std::vector<double>& levels) {
    std::vector<Node> out;
    for (size_t i = 0; i + 1 < ns.size(); ++i) {
        out.push_back(ns[i]);
        std::vector<Node> inner;
        for (double L : levels) {
            const double a = ns[i].th - L, b = ns[i + 1].th - L;
            if ((a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0)) {
                const double u = a / (a - b);
                inner.push_back({ns[i].t + u * (ns[i + 1].t - ns[i].t), L});
            }
        }
        std::sort(inner.begin(), inner.end(),
                  [](const Node& x, const Node& y) { return x.t < y.t; });
        for (const Node& n : inner) out.push_back(n);
    }
    out.push_back(ns.back());
    return out;
}

// Extremum of th over [a, b], using that th is linear between nodes.
std::pair<double, double> range_over(const std::vector<Node>& ns, double a,
                                     double b) {
    double lo = std::min(interp(ns, a), interp(ns, b));
    double hi = std::max(interp(ns, a), interp(ns, b));
    for (const Node& n : ns)
        if (n.t > a && n.t < b) {
            lo = std::min(lo, n.th);
            hi = std::max(hi, n.th);
        }
    return {lo, hi};
}

std::array<double, 2> arc_displacement(double theta, double kappa,
                                       double length) {
    if (kappa == 0.0)
        return {std::cos(theta) * length, std::sin(theta) * length};
    const double t2 = theta + kappa * length;
    return {(std::sin(t2) - std::sin(theta)) / kappa,
            (std::cos(theta) - std::cos(t2)) / kappa};
}

}  // namespace

void validate(const PCCPath& g) {
    for (const Segment& s : g.segments) {
        if (!(s.length > 0.0))
            throw std::invalid_argument("segment lengths must be positive");
        if (!(std::abs(s.kappa) < 1.0))
            throw std::invalid_argument("curvature must lie in (-1, 1)");
    }
}

double total_length(const PCCPath& g) {
    double t = 0.0;
    for (const Segment& s : g.segments) t += s.length;
    return t;
}

Pose pose_at(const PCCPath& g, double t) {
    validate(g);
    double x = g.start[0], y = g.start[1], th = g.theta0;
    double acc = 0.0;
    for (const Segment& s : g.segments) {
        const double take = std::clamp(t - acc, 0.0, s.length);
        if (take > 0.0) {
            auto d = arc_displacement(th, s.kappa, take);
            x += d[0];
            y += d[1];
            th += s.kappa * take;
        }
        acc += s.length;
        if (t <= acc) break;
    }
    return {{x, y}, th};
}

std::vector<std::pair<double, double>> theta_nodes(const PCCPath& g) {
    validate(g);
    std::vector<std::pair<double, double>> out;
    for (const Node& n : make_nodes(g)) out.emplace_back(n.t, n.th);
    return out;
}

CurveStats curve_stats(const PCCPath& g) {
    validate(g);
    auto ns = make_nodes(g);
    double lo = ns.front().th, hi = ns.front().th;
    for (const Node& n : ns) {
        lo = std::min(lo, n.th);
        hi = std::max(hi, n.th);
    }
    CurveStats st;
    st.theta1 = ns.back().th - ns.front().th;
    st.omega = hi - lo;
    st.phi_bar = (hi + lo) / 2.0;
    st.theta_min = lo;
    st.theta_max = hi;
    return st;
}

CurveVerdict classify_curve(const PCCPath& g, double tol) {
    CurveStats st = curve_stats(g);
    if (st.omega < kPi - tol) return {CurveClass::Condensed, std::nullopt};
    if (st.omega > kPi + tol) return {CurveClass::Diffuse, std::nullopt};
    // Chronological extremum visits; the argument is piecewise linear, so all
    // visits happen at nodes.
    std::vector<int> tags;
    for (const Node& n : make_nodes(g)) {
        int tag = 0;
        if (n.th >= st.theta_max - tol) tag = +1;
        if (n.th <= st.theta_min + tol) tag = -1;
        if (tag != 0 && (tags.empty() || tags.back() != tag))
            tags.push_back(tag);
    }
    return {CurveClass::Critical,
            fc::strings::reduce_string(fc::strings::ExtendedString(tags))};
}

PCCPath graft(const PCCPath& g, double t, double L) {
    validate(g);
    if (L < 0.0) throw std::invalid_argument("graft length must be >= 0");
    if (L == 0.0) return g;
    PCCPath out;
    out.start = g.start;
    out.theta0 = g.theta0;
    double acc = 0.0;
    bool placed = false;
    for (const Segment& s : g.segments) {
        if (!placed && t <= acc + s.length) {
            const double head = t - acc;
            if (head > 0.0) out.segments.push_back({s.kappa, head});
            out.segments.push_back({0.0, L});
            if (s.length - head > 0.0)
                out.segments.push_back({s.kappa, s.length - head});
            placed = true;
        } else {
            out.segments.push_back(s);
        }
        acc += s.length;
    }
    if (!placed) out.segments.push_back({0.0, L});
    return out;
}

double default_kappa0(const PCCPath& g, double t0, double t1) {
    validate(g);
    double sup = 0.0;
    double acc = 0.0;
    for (const Segment& s : g.segments) {
        const double a = acc, b = acc + s.length;
        if (b > t0 && a < t1) sup = std::max(sup, std::abs(s.kappa));
        acc = b;
    }
    return std::max(sup, 0.51);
}

fc::stretch::StretchProblem subarc_problem(const PCCPath& g, double t0,
                                           double t1, double psi,
                                           double kappa0) {
    validate(g);
    if (!(t0 < t1)) throw std::invalid_argument("empty subarc");
    if (!(kappa0 < 1.0)) throw std::invalid_argument("kappa0 must be < 1");
    double acc = 0.0;
    for (const Segment& s : g.segments) {
        const double a = acc, b = acc + s.length;
        if (b > t0 && a < t1 && std::abs(s.kappa) > kappa0)
            throw std::invalid_argument("subarc curvature exceeds kappa0");
        acc = b;
    }
    auto ns = make_nodes(g);
    // The tangent must stay in the open half-plane of e^{i psi}: each linear
    // piece of the argument must fit in one band (psi - pi/2, psi + pi/2)
    // modulo 2 pi.
    std::vector<Node> cut = ns;
    cut.push_back({t0, interp(ns, t0)});
    cut.push_back({t1, interp(ns, t1)});
    std::sort(cut.begin(), cut.end(),
              [](const Node& x, const Node& y) { return x.t < y.t; });
    for (size_t i = 0; i + 1 < cut.size(); ++i) {
        if (cut[i + 1].t <= t0 || cut[i].t >= t1) continue;
        const double lo = std::min(cut[i].th, cut[i + 1].th);
        const double hi = std::max(cut[i].th, cut[i + 1].th);
        const double k = std::round(((lo + hi) / 2.0 - psi) / (2.0 * kPi));
        const double base = psi + 2.0 * kPi * k;
        if (!(lo > base - kPi / 2.0 && hi < base + kPi / 2.0))
            throw std::invalid_argument(
                "tangent leaves the half-plane of the axis");
    }
    const Pose p0 = pose_at(g, t0), p1 = pose_at(g, t1);
    const double dx = p1.point[0] - p0.point[0];
    const double dy = p1.point[1] - p0.point[1];
    const double c = std::cos(psi), s = std::sin(psi);
    fc::stretch::StretchProblem prob;
    prob.kappa0 = kappa0;
    prob.b = dx * c + dy * s;
    prob.A = -dx * s + dy * c;
    prob.r0 = std::tan(std::remainder(p0.theta - psi, 2.0 * kPi));
    prob.rb = std::tan(std::remainder(p1.theta - psi, 2.0 * kPi));
    return prob;
}

bool subarc_stretchable(const PCCPath& g, double t0, double t1, double psi,
                        double kappa0) {
    return fc::stretch::is_stretchable(subarc_problem(g, t0, t1, psi, kappa0));
}

PCCPath stretch_subarc(const PCCPath& g, double t0, double t1, double psi,
                       double kappa0, double s) {
    auto prob = subarc_problem(g, t0, t1, psi, kappa0);
    if (!fc::stretch::is_stretchable(prob))
        throw std::domain_error("subarc is not stretchable");
    const double c = prob.b + s;
    const double mu = fc::stretch::solve_mu(prob, c);
    auto [x0, x1] = fc::stretch::zeta_plateau(prob, mu, c);

    const Pose p0 = pose_at(g, t0), p1 = pose_at(g, t1);
    const double rel0 = std::remainder(p0.theta - psi, 2.0 * kPi);
    const double rel1 = std::remainder(p1.theta - psi, 2.0 * kPi);
    const double mid = std::atan(mu);

    PCCPath out;
    out.start = g.start;
    out.theta0 = g.theta0;
    double acc = 0.0;
    for (const Segment& sg : g.segments) {
        const double a = acc, b = acc + sg.length;
        if (b <= t0) {
            out.segments.push_back(sg);
        } else if (a < t0) {
            if (t0 - a > 0.0) out.segments.push_back({sg.kappa, t0 - a});
        }
        acc = b;
    }
    auto emit_arc = [&](double dth) {
        if (std::abs(dth) > 1e-14)
            out.segments.push_back(
                {dth > 0 ? kappa0 : -kappa0, std::abs(dth) / kappa0});
    };
    emit_arc(mid - rel0);
    if (x1 - x0 > 1e-14)
        out.segments.push_back({0.0, (x1 - x0) * std::sqrt(1.0 + mu * mu)});
    emit_arc(rel1 - mid);
    acc = 0.0;
    for (const Segment& sg : g.segments) {
        const double a = acc, b = acc + sg.length;
        if (a >= t1) {
            out.segments.push_back(sg);
        } else if (b > t1) {
            if (b - t1 > 0.0) out.segments.push_back({sg.kappa, b - t1});
        }
        acc = b;
    }
    (void)p1;
    return out;
}

namespace {

struct Component {
    double a, b;
    int tag;
};

// Components of {|theta - phi| > pi/2 - 2 eps}, tagged by the sign of
// theta - phi, then consecutive equal tags merged into groups.
struct Groups {
    std::vector<Component> groups;
    std::vector<Node> refined;
};

Groups find_groups(const std::vector<Node>& ns, double phi, double eps) {
    const double c = kPi / 2.0 - 2.0 * eps;
    Groups out;
    out.refined = refine(ns, {phi + c, phi - c});
    const auto& r = out.refined;
    std::vector<Component> comps;
    for (size_t i = 0; i + 1 < r.size(); ++i) {
        if (!(r[i + 1].t > r[i].t)) continue;
        const double vm = (r[i].th + r[i + 1].th) / 2.0 - phi;
        int tag = 0;
        if (vm > c) tag = +1;
        if (vm < -c) tag = -1;
        if (tag == 0) continue;
        if (!comps.empty() && comps.back().tag == tag &&
            comps.back().b >= r[i].t - 1e-15 * (1.0 + r[i].t)) {
            comps.back().b = r[i + 1].t;
        } else {
            comps.push_back({r[i].t, r[i + 1].t, tag});
        }
    }
    for (const Component& cm : comps) {
        if (!out.groups.empty() && out.groups.back().tag == cm.tag)
            out.groups.back().b = cm.b;
        else
            out.groups.push_back(cm);
    }
    return out;
}

}  // namespace

std::optional<QuasiCert> quasicritical_find(
    const PCCPath& g, double phi, double eps,
    const fc::strings::SignString& sigma) {
    validate(g);
    if (!(eps > 0.0 && eps < kPi / 4.0))
        throw std::invalid_argument("eps must lie in (0, pi/4)");
    auto ns = make_nodes(g);
    const double L = ns.back().t;
    const double c = kPi / 2.0 - 2.0 * eps;
    Groups gr = find_groups(ns, phi, eps);
    const int n = sigma.size();
    if (static_cast<int>(gr.groups.size()) != n) return std::nullopt;
    for (int k = 0; k < n; ++k)
        if (gr.groups[static_cast<size_t>(k)].tag != sigma(k + 1))
            return std::nullopt;

    // Extend the group hulls so every boundary-level touch point lies in the
    // interior, capped at a third of the gap to the neighbor and stopped
    // before the tangent drifts to the opposite boundary.
    auto extend = [&](int k, int dir) {
        const Component& G = gr.groups[static_cast<size_t>(k)];
        const double from = dir > 0 ? G.b : G.a;
        double limit =
            dir > 0
                ? (k + 1 < n ? from +
                          (gr.groups[static_cast<size_t>(k + 1)].a - from) / 3.0
                             : L)
                : (k > 0 ? from -
                          (from - gr.groups[static_cast<size_t>(k - 1)].b) / 3.0
                         : 0.0);
        // Opposite boundary level for this group's sign.
        const double opp = phi - G.tag * c;
        const auto& r = gr.refined;
        if (dir > 0) {
            for (size_t i = 0; i + 1 < r.size(); ++i) {
                if (r[i + 1].t <= from) continue;
                if (r[i].t >= limit) break;
                // A crossing node at the opposite level stops the extension.
                if (std::abs(r[i].th - opp) < 1e-13 * (1.0 + std::abs(opp)) &&
                    r[i].t > from) {
                    limit = std::min(limit, from + 0.9 * (r[i].t - from));
                    break;
                }
            }
        } else {
            for (size_t i = r.size(); i-- > 0;) {
                if (r[i].t >= from) continue;
                if (r[i].t <= limit) break;
                if (std::abs(r[i].th - opp) < 1e-13 * (1.0 + std::abs(opp))) {
                    limit = std::max(limit, from - 0.9 * (from - r[i].t));
                    break;
                }
            }
        }
        return limit;
    };

    QuasiCert cert{phi, eps, sigma, {}, {}};
    for (int k = 0; k < n; ++k)
        cert.J.emplace_back(extend(k, -1), extend(k, +1));

    // Condition (i): the argument over each J_k stays in the open band for
    // its sign.
    for (int k = 0; k < n; ++k) {
        auto [ja, jb] = cert.J[static_cast<size_t>(k)];
        auto [lo, hi] = range_over(ns, ja, jb);
        if (sigma(k + 1) > 0) {
            if (!(lo > phi - kPi / 2.0 + 2.0 * eps &&
                  hi < phi + kPi / 2.0 + eps))
                return std::nullopt;
        } else {
            if (!(lo > phi - kPi / 2.0 - eps && hi < phi + kPi / 2.0 - 2.0 * eps))
                return std::nullopt;
        }
    }
    // Condition (ii): strictly inside the middle band off the interiors.
    for (const Node& nd : gr.refined) {
        bool inside = false;
        for (int k = 0; k < n; ++k) {
            auto [ja, jb] = cert.J[static_cast<size_t>(k)];
            const double a_open = (ja <= 0.0) ? -1.0 : ja;
            const double b_open = (jb >= L) ? L + 1.0 : jb;
            if (nd.t > a_open && nd.t < b_open) inside = true;
        }
        if (!inside && !(std::abs(nd.th - phi) < c)) return std::nullopt;
    }
    // Condition (iii): a stretchable witness near the vertical in each group.
    for (int k = 0; k < n; ++k) {
        const Component& G = gr.groups[static_cast<size_t>(k)];
        const double axis = phi + G.tag * kPi / 2.0;
        const double shrink = eps * (1.0 - 1e-9);
        auto fine = refine(ns, {axis + shrink, axis - shrink});
        std::optional<std::pair<double, double>> witness;
        double wa = -1.0, wb = -1.0;
        bool open = false;
        auto flush = [&]() {
            if (open && wb > wa && wa >= G.a - 1e-12 && wb <= G.b + 1e-12 &&
                !witness) {
                // Any curvature bound below 1 may serve for the witness, so
                // escalate from the subarc's own bound toward 1: a tight bound
                // has no slack when the subarc is an arc of exactly that
                // curvature sitting slightly below the vertical.
                double k0 = default_kappa0(g, wa, wb);
                for (int rep = 0; rep < 6 && !witness; ++rep) {
                    if (subarc_stretchable(g, wa, wb, axis, k0))
                        witness = {wa, wb};
                    k0 = (1.0 + k0) / 2.0;
                }
            }
            open = false;
        };
        for (size_t i = 0; i + 1 < fine.size(); ++i) {
            if (!(fine[i + 1].t > fine[i].t)) continue;
            const double vm = (fine[i].th + fine[i + 1].th) / 2.0;
            const bool near = std::abs(vm - axis) < shrink &&
                              fine[i].t >= G.a - 1e-12 &&
                              fine[i + 1].t <= G.b + 1e-12;
            if (near) {
                if (!open) {
                    wa = fine[i].t;
                    open = true;
                }
                wb = fine[i + 1].t;
            } else {
                flush();
            }
        }
        flush();
        if (!witness) return std::nullopt;
        cert.I.push_back(*witness);
    }
    return cert;
}

std::vector<double> h_map(const PCCPath& g, const QuasiCert& cert) {
    validate(g);
    auto ns = make_nodes(g);
    std::vector<double> h;
    for (int k = 0; k < cert.sigma.size(); ++k) {
        auto [ja, jb] = cert.J[static_cast<size_t>(k)];
        auto [lo, hi] = range_over(ns, ja, jb);
        if (cert.sigma(k + 1) > 0)
            h.push_back(hi - (cert.phi + kPi / 2.0));
        else
            h.push_back(lo - (cert.phi - kPi / 2.0));
    }
    return h;
}

std::vector<double> epsilon_grid(int levels) {
    std::vector<double> out;
    double e = kPi / 8.0;
    for (int j = 0; j < levels; ++j) {
        out.push_back(e);
        e /= 2.0;
    }
    return out;
}

VMembership v_membership(const PCCPath& g, double phi,
                         const std::optional<UTPoint>& Q) {
    CurveStats st = curve_stats(g);
    if (Q && std::abs(st.theta1 - Q->theta1) > 1e-9)
        throw std::invalid_argument("total turning does not match Q");
    VMembership out;
    const double th_a = g.theta0, th_b = g.theta0 + st.theta1;
    out.in_r = (phi - kPi / 2.0 < std::min(th_a, th_b)) &&
               (std::max(th_a, th_b) < phi + kPi / 2.0);
    out.v_c = out.in_r && st.theta_min > phi - kPi / 2.0 &&
              st.theta_max < phi + kPi / 2.0;
    out.v_d = out.in_r && st.omega > kPi;
    if (!out.in_r) return out;
    auto ns = make_nodes(g);
    for (double eps : epsilon_grid()) {
        Groups gr = find_groups(ns, phi, eps);
        if (gr.groups.size() < 2) continue;
        std::vector<int> tags;
        for (const Component& G : gr.groups) tags.push_back(G.tag);
        fc::strings::SignString sigma{std::vector<int>(tags)};
        bool seen = false;
        for (const auto& [s, e] : out.v_sigma)
            if (s == sigma) seen = true;
        if (seen) continue;
        if (quasicritical_find(g, phi, eps, sigma))
            out.v_sigma.emplace_back(sigma, eps);
    }
    return out;
}

double lift_to_N(const PCCPath& g, const UTPoint& Q, double delta) {
    CurveStats st = curve_stats(g);
    if (std::abs(st.theta1 - Q.theta1) > 1e-9)
        throw std::invalid_argument("total turning does not match Q");
    const double u = st.omega;
    double ramp;
    if (u <= kPi - 2.0 * delta)
        ramp = 0.0;
    else if (u >= kPi - delta)
        ramp = 1.0;
    else
        ramp = (u - (kPi - 2.0 * delta)) / delta;
    const double half_turn = g.theta0 + Q.theta1 / 2.0;
    const double phi = (1.0 - ramp) * st.phi_bar + ramp * half_turn;
    VMembership vm = v_membership(g, phi, Q);
    if (!(vm.v_c || vm.v_d || !vm.v_sigma.empty())) {
        std::ostringstream os;
        os << "lift failed: phi=" << phi << " omega=" << st.omega
           << " in_r=" << vm.in_r << "; no V-membership holds";
        throw std::runtime_error(os.str());
    }
    return phi;
}

PCCPath argument_interpolate(const PCCPath& g0, const PCCPath& g1, double s) {
    validate(g0);
    validate(g1);
    for (const PCCPath* g : {&g0, &g1})
        for (const Segment& sg : g->segments)
            if (sg.kappa < 0.0)
                throw std::invalid_argument(
                    "curvature must be a nonnegative step function");
    const double th0 = g0.theta0;
    const double th1 = th0 + curve_stats(g0).theta1;
    if (std::abs(g1.theta0 - th0) > 1e-9 ||
        std::abs(g1.theta0 + curve_stats(g1).theta1 - th1) > 1e-9)
        throw std::invalid_argument("argument endpoints must agree");

    // Grid of argument values at which either curve changes curvature.
    std::vector<double> grid = {th0, th1};
    for (const PCCPath* g : {&g0, &g1}) {
        double th = g->theta0;
        for (const Segment& sg : g->segments) {
            grid.push_back(th);
            th += sg.kappa * sg.length;
            grid.push_back(th);
        }
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(),
                           [](double a, double b) { return b - a < 1e-12; }),
               grid.end());

    // Plateau length of a curve at argument v; radius over an argument cell.
    auto plateau_len = [&](const PCCPath& g, double v) {
        double th = g.theta0, acc = 0.0;
        for (const Segment& sg : g.segments) {
            if (sg.kappa == 0.0 && std::abs(th - v) < 1e-9) acc += sg.length;
            th += sg.kappa * sg.length;
        }
        return acc;
    };
    auto radius_on = [&](const PCCPath& g, double va, double vb) {
        double th = g.theta0;
        for (const Segment& sg : g.segments) {
            const double next = th + sg.kappa * sg.length;
            if (sg.kappa > 0.0 && th <= va + 1e-12 && vb <= next + 1e-12)
                return 1.0 / sg.kappa;
            th = next;
        }
        throw std::invalid_argument(
            "argument profiles are not jointly monotone");
    };

    PCCPath out;
    out.start = {(1.0 - s) * g0.start[0] + s * g1.start[0],
                 (1.0 - s) * g0.start[1] + s * g1.start[1]};
    out.theta0 = th0;
    for (size_t i = 0; i < grid.size(); ++i) {
        const double Ls =
            (1.0 - s) * plateau_len(g0, grid[i]) + s * plateau_len(g1, grid[i]);
        if (Ls > 1e-14) out.segments.push_back({0.0, Ls});
        if (i + 1 < grid.size()) {
            const double dth = grid[i + 1] - grid[i];
            if (dth <= 1e-12) continue;
            const double rho = (1.0 - s) * radius_on(g0, grid[i], grid[i + 1]) +
                               s * radius_on(g1, grid[i], grid[i + 1]);
            out.segments.push_back({1.0 / rho, rho * dth});
        }
    }
    return out;
}

}  // namespace fc::curves
