// Acceptance suite: seven end-to-end criteria, one pass/fail line each.
// Tolerances and time limits are pinned here on purpose.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <vector>

#include "fc/classify.hpp"
#include "fc/curves.hpp"
#include "fc/maps.hpp"
#include "fc/stretch.hpp"
#include "fc/strings.hpp"

using namespace fc;
using classify::HomotopyClass;
using curves::PCCPath;
using curves::UTPoint;
using strings::BeadKind;
using strings::BeadPoint;
using strings::SignString;

namespace {

constexpr double PI = 3.141592653589793238462643383279502884;

struct Timer {
    std::chrono::steady_clock::time_point t0 =
        std::chrono::steady_clock::now();
    double secs() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             t0)
            .count();
    }
};

void report(int idx, const char* name, bool ok, double secs, double limit) {
    std::printf("criterion %d (%s): %s (%.2f s, limit %.0f s)\n", idx, name,
                (ok && secs < limit) ? "PASS" : "FAIL", secs, limit);
    std::fflush(stdout);
}

// Closed-form class along the positive axis at zero turning, half-open
// band intervals in the scaled coordinate r = x/4; the right endpoints
// belong to the band.
HomotopyClass expected_axis(double x) {
    if (x <= 0.0) return classify::euclidean();
    const double r = x / 4.0;
    for (int k = 0;; ++k) {
        const double even_lo = std::sqrt(static_cast<double>(k * k + k));
        const double even_hi = k + 1.0;
        const double odd_hi =
            std::sqrt(static_cast<double>(k * k + 3 * k + 2));
        if (r > even_lo && r <= even_hi) return classify::sphere(2 * k);
        if (r > even_hi && r <= odd_hi) return classify::sphere(2 * k + 1);
    }
}

double trapezoid(const stretch::SampledFunction& f) {
    double s = 0.0;
    for (size_t i = 0; i + 1 < f.x.size(); ++i)
        s += (f.y[i] + f.y[i + 1]) / 2.0 * (f.x[i + 1] - f.x[i]);
    return s;
}

// Random admissible boundary-value problem together with an admissible
// sampled function realizing its integral (slope-limited path in sin space).
struct RandomProblem {
    stretch::StretchProblem p;
    stretch::SampledFunction f;
};

RandomProblem random_admissible(std::mt19937& rng, bool positive) {
    std::uniform_real_distribution<double> kap(0.3, 0.9);
    std::uniform_real_distribution<double> len(2.0, 8.0);
    std::uniform_real_distribution<double> slope(positive ? 0.1 : -1.5, 1.5);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    RandomProblem out;
    out.p.kappa0 = kap(rng);
    out.p.b = len(rng);
    out.p.r0 = slope(rng);
    out.p.rb = slope(rng);
    auto sin_of = [](double r) { return r / std::sqrt(1.0 + r * r); };
    const double s0 = sin_of(out.p.r0), sb = sin_of(out.p.rb);
    const int n = 400;
    if (std::abs((sb - s0) / out.p.b) > 0.8 * out.p.kappa0)
        out.p.b = std::abs(sb - s0) / (0.8 * out.p.kappa0) + 1.0;
    const double room =
        (out.p.kappa0 - std::abs((sb - s0) / out.p.b)) * out.p.b / 4.0;
    const double amp =
        unit(rng) * std::min(room, positive ? s0 / 2.0 : 0.45);
    out.f.x.resize(n + 1);
    out.f.y.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double x = out.p.b * i / n;
        const double u = x / out.p.b;
        double s = s0 + (sb - s0) * u + amp * std::sin(PI * u);
        s = std::clamp(s, -0.999, 0.999);
        out.f.x[static_cast<size_t>(i)] = x;
        out.f.y[static_cast<size_t>(i)] = s / std::sqrt(1.0 - s * s);
    }
    out.p.A = trapezoid(out.f);
    return out;
}

// Odometer over {-2,...,2}^n.
bool next_point(std::vector<int>& v) {
    for (size_t i = 0; i < v.size(); ++i) {
        if (v[i] < 2) {
            ++v[i];
            for (size_t j = 0; j < i; ++j) v[j] = -2;
            return true;
        }
    }
    return false;
}

}  // namespace

TEST_CASE("criterion 1: class table along the horizontal axis") {
    Timer timer;
    bool ok = true;
    const double rt2 = std::sqrt(2.0), rt6 = std::sqrt(6.0);
    const std::vector<double> xs = {-2.0, 0.1, 2.0,       4.0,  4.01,
                                    5.0,  4 * rt2, 6.0,   8.0,  9.0,
                                    4 * rt6, 10.0, 12.0,  13.0, 14.0};
    for (double x : xs) {
        const HomotopyClass got = classify::homotopy_class({{x, 0.0}, 0.0});
        const HomotopyClass want = expected_axis(x);
        if (!(got == want)) ok = false;
        CHECK(got == want);
    }
    const double secs = timer.secs();
    report(1, "horizontal class table", ok, secs, 1.0);
    CHECK(ok);
    CHECK(secs < 1.0);
}

TEST_CASE("criterion 2: torus census") {
    Timer timer;
    bool ok = true;
    auto square = classify::census({1.0, 0.0}, {0.0, 1.0}, 0.0, 60.0, 10);
    for (int n = 0; n <= 10; ++n) {
        auto it = square.find(classify::sphere(n));
        const bool present = it != square.end() && it->second > 0;
        if (!present) ok = false;
        CHECK(present);
    }
    auto coarse = classify::census({4.0, 0.0}, {0.0, 4.0}, 0.0, 60.0, 10);
    auto it = coarse.find(classify::sphere(1));
    const bool none = it == coarse.end() || it->second == 0;
    if (!none) ok = false;
    CHECK(none);
    const double secs = timer.secs();
    report(2, "torus census", ok, secs, 5.0);
    CHECK(ok);
    CHECK(secs < 5.0);
}

TEST_CASE("criterion 3: stretch engine on random problems") {
    Timer timer;
    bool ok = true;
    auto req = [&](bool c) {
        if (!c) ok = false;
        CHECK(c);
    };
    std::mt19937 rng(401);
    int done = 0;
    for (int trial = 0; done < 100; ++trial) {
        const bool positive = trial % 5 == 0;
        RandomProblem rp = random_admissible(rng, positive);
        const auto& p = rp.p;
        // (a) envelope sandwich at every sample, tol 1e-9.
        for (size_t i = 0; i < rp.f.x.size(); ++i) {
            const double x = rp.f.x[i], y = rp.f.y[i];
            const double lo =
                std::max(envelope_eval(p, stretch::Branch::GMinus, x),
                         envelope_eval(p, stretch::Branch::HMinus, x));
            const double hi =
                std::min(envelope_eval(p, stretch::Branch::GPlus, x),
                         envelope_eval(p, stretch::Branch::HPlus, x));
            req(lo <= y + 1e-9);
            req(y <= hi + 1e-9);
        }
        // The level solver needs 0 in the admissible band at b; redraw
        // otherwise (the sandwich above still ran).
        if (!stretch::is_stretchable(p)) continue;
        ++done;
        // (b) the stretched function keeps the integral, tol 1e-8.
        for (double s : {0.0, 1.0, 10.0, 100.0}) {
            const double mu = stretch::solve_mu(p, p.b + s);
            req(std::abs(stretch::integral_zeta(p, mu, p.b + s) - p.A) <=
                1e-8);
        }
        // (c) extension identity at fixed level, tol 1e-9.
        const double mu_b = stretch::solve_mu(p, p.b);
        const double base = stretch::integral_zeta(p, mu_b, p.b);
        for (double s : {1.0, 10.0, 100.0}) {
            const double ext = stretch::integral_zeta(p, mu_b, p.b + s);
            req(std::abs(ext - base - mu_b * s) <= 1e-9);
        }
        // (d) s * |mu(b+s)| stays in a fixed positive band for positive f.
        if (positive && p.A > 0.0) {
            double lo = 1e300, hi = 0.0;
            for (double s : {10.0, 25.0, 50.0, 75.0, 100.0}) {
                const double v =
                    s * std::abs(stretch::solve_mu(p, p.b + s));
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            req(lo > 0.0);
            req(hi / lo <= 4.0);
        }
    }
    const double secs = timer.secs();
    report(3, "stretch engine", ok, secs, 10.0);
    CHECK(ok);
    CHECK(secs < 10.0);
}

TEST_CASE("criterion 4: detection round-trip and scale nesting") {
    Timer timer;
    bool ok = true;
    auto req = [&](bool c) {
        if (!c) ok = false;
        CHECK(c);
    };
    std::mt19937 rng(19);
    std::uniform_real_distribution<double> X(0.02, 0.25);
    std::uniform_real_distribution<double> L(12.0, 30.0);
    std::uniform_real_distribution<double> F(-0.2, 0.2);
    std::uniform_int_distribution<int> N(2, 5);
    std::bernoulli_distribution B;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = N(rng);
        const int first = B(rng) ? 1 : -1;
        std::vector<int> tags;
        for (int k = 0; k < n; ++k)
            tags.push_back(k % 2 == 0 ? first : -first);
        SignString sig{tags};
        std::vector<double> x(static_cast<size_t>(n)),
            len(static_cast<size_t>(n));
        for (int k = 0; k < n; ++k) {
            x[static_cast<size_t>(k)] = -sig(k + 1) * X(rng);
            len[static_cast<size_t>(k)] = L(rng);
        }
        const double phi = F(rng);
        auto p = maps::pulley_build(phi, sig, x, len, 0.85, 0.0);
        bool found = false;
        for (double eps : curves::epsilon_grid()) {
            auto cert = curves::quasicritical_find(p.path, phi, eps, sig);
            if (!cert) continue;
            found = true;
            req(cert->sigma == sig);
            auto h = curves::h_map(p.path, *cert);
            req(h.size() == x.size());
            for (size_t k = 0; k < h.size(); ++k)
                req(std::abs(h[k] - x[k]) <= 1e-9);
            break;
        }
        req(found);
        for (double eps : curves::epsilon_grid())
            req(!curves::quasicritical_find(p.path, phi, eps,
                                            sig.negated()));
    }
    // Multi-type constructions: a depth ladder d_k = 0.004 * 3^(k-1) makes
    // the curve quasicritical of every prefix type, the j-th prefix at scale
    // 1.2 d_j; consecutive scales are 3 apart, so the > 2 nesting holds.
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 3 + trial % 3;
        const int first = B(rng) ? 1 : -1;
        std::vector<int> tags;
        for (int k = 0; k < n; ++k)
            tags.push_back(k % 2 == 0 ? first : -first);
        SignString sig{tags};
        std::vector<double> d, x, len;
        double dk = 0.004;
        for (int k = 1; k <= n; ++k) {
            d.push_back(dk);
            x.push_back(-sig(k) * dk);
            len.push_back(L(rng));
            dk *= 3.0;
        }
        const double phi = F(rng);
        auto p = maps::pulley_build(phi, sig, x, len, 0.85, 0.0);
        double prev_eps = 0.0;
        for (int j = 2; j <= n; ++j) {
            std::vector<int> pre(tags.begin(), tags.begin() + j);
            const double eps = 1.2 * d[static_cast<size_t>(j - 1)];
            req(curves::quasicritical_find(p.path, phi, eps,
                                           SignString{pre})
                    .has_value());
            req(eps > 2.0 * prev_eps);
            prev_eps = eps;
        }
    }
    const double secs = timer.secs();
    report(4, "detection round-trip and nesting", ok, secs, 10.0);
    CHECK(ok);
    CHECK(secs < 10.0);
}

TEST_CASE("criterion 5: degree and pole preimage count") {
    Timer timer;
    bool ok = true;
    for (double qx : {4.5, 5.0, 5.5}) {
        const int w = maps::degree_check({{qx, 0.0}, 0.0}, 720);
        if (std::abs(w) != 1) ok = false;
        CHECK(std::abs(w) == 1);
    }
    const int count =
        maps::preimage_count({{6.0, 0.0}, 0.0}, SignString::parse("+-+"), 64);
    if (count != 1) ok = false;
    CHECK(count == 1);
    const double secs = timer.secs();
    report(5, "degree and preimage count", ok, secs, 60.0);
    CHECK(ok);
    CHECK(secs < 60.0);
}

TEST_CASE("criterion 6: bead combinatorics, exhaustive small grid") {
    Timer timer;
    bool ok = true;
    auto req = [&](bool c) {
        if (!c) ok = false;
        CHECK(c);
    };
    int members = 0, approaches = 0;
    for (int n = 2; n <= 6; ++n) {
        std::map<std::vector<std::vector<int>>, BeadKind> verdicts;
        const strings::ExtendedString top = SignString::standard(n).extended();
        const strings::ExtendedString bottom =
            SignString::standard(2).extended();
        strings::StringChain chain({bottom, top});
        std::vector<int> v(static_cast<size_t>(n), -2);
        do {
            BeadPoint x(v.begin(), v.end());
            auto c = strings::classify_bead_point(x);
            // Trichotomy against the sign of the odd/even gap.
            if (c.t < 0.0) req(c.kind == BeadKind::Mixed);
            if (c.t == 0.0) req(c.kind == BeadKind::Level);
            if (c.t > 0.0) req(c.kind == BeadKind::Split);
            req((c.kind == BeadKind::Level) == c.level_type.has_value());
            // Points in one cell share the verdict.
            auto cell = strings::cell_of(x);
            auto [it, inserted] = verdicts.emplace(cell, c.kind);
            if (!inserted) req(it->second == c.kind);
            // Level/split factorization round-trip, tol 1e-12.
            auto [lev, t] = strings::level_split_factorization(x);
            req(strings::classify_bead_point(lev).kind == BeadKind::Level);
            BeadPoint back = strings::level_split_compose(lev, t);
            for (size_t i = 0; i < x.size(); ++i)
                req(std::abs(back[i] - x[i]) <= 1e-12);
            // Collapse of chain members lands in the band space.
            if (strings::nested_membership(x, chain,
                                           strings::MembershipVariant::Plain)) {
                ++members;
                BeadPoint y = strings::collapse_map(x, chain);
                req(strings::nested_membership(
                    y, chain, strings::MembershipVariant::Band));
            }
            // Moving off a level point reaches the smaller type.
            if (c.kind == BeadKind::Level && c.level_type->size() >= 3) {
                const SignString& tau = *c.level_type;
                std::vector<int> sub(tau.signs().begin(),
                                     tau.signs().end() - 1);
                SignString sigma{sub};
                BeadPoint y = strings::boundary_approach(x, sigma, 1e-3);
                auto cy = strings::classify_bead_point(y);
                req(cy.kind == BeadKind::Level);
                req(cy.level_type.has_value() && *cy.level_type == sigma);
                ++approaches;
            }
        } while (next_point(v));
    }
    req(members > 0);
    req(approaches > 0);
    const double secs = timer.secs();
    report(6, "bead combinatorics", ok, secs, 30.0);
    CHECK(ok);
    CHECK(secs < 30.0);
}

TEST_CASE("criterion 7: region audit at several turning angles") {
    Timer timer;
    bool ok = true;
    for (double theta1 : {0.0, PI / 7, PI / 2, 5 * PI / 7, -PI / 3}) {
        auto r = classify::region_audit(theta1, 3, 400);
        if (!r.clean()) ok = false;
        CHECK(r.clean());
    }
    const double secs = timer.secs();
    report(7, "region audit", ok, secs, 20.0);
    CHECK(ok);
    CHECK(secs < 20.0);
}
