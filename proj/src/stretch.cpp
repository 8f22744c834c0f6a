#include "fc/stretch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fc::stretch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// slope r <-> s = sin(atan r) = r/sqrt(1+r^2)
double sin_of_slope(double r) {
    if (std::isinf(r)) return r > 0 ? 1.0 : -1.0;
    return r / std::sqrt(1.0 + r * r);
}

double slope_of_sin(double s) {
    if (s >= 1.0) return kInf;
    if (s <= -1.0) return -kInf;
    return s / std::sqrt((1.0 - s) * (1.0 + s));
}

// Each envelope is a line s(x) = alpha + beta * x in sin-space; the value is
// slope_of_sin(s(x)). The constant level mu is the line (sin mu, 0).
struct SinLine {
    double alpha;
    double beta;
    double at(double x) const { return alpha + beta * x; }
};

SinLine line_for(const StretchProblem& p, Branch br, double anchor) {
    const double s0 = sin_of_slope(p.r0);
    const double sb = sin_of_slope(p.rb);
    const double k = p.kappa0;
    switch (br) {
        case Branch::GPlus: return {s0, +k};
        case Branch::GMinus: return {s0, -k};
        case Branch::HPlus: return {sb + k * anchor, -k};
        default: return {sb - k * anchor, +k};
    }
}

double median5(double a, double b, double c, double d, double e) {
    double v[5] = {a, b, c, d, e};
    std::nth_element(v, v + 2, v + 5);
    return v[2];
}

}  // namespace

void validate(const StretchProblem& p) {
    if (!(p.kappa0 > 0.0 && p.kappa0 < 1.0))
        throw std::invalid_argument("kappa0 must lie in (0,1)");
    if (!(p.b > 0.0)) throw std::invalid_argument("b must be positive");
}

double envelope_eval(const StretchProblem& p, Branch br, double x,
                     double anchor) {
    validate(p);
    return slope_of_sin(line_for(p, br, anchor).at(x));
}

std::pair<double, double> lambda_range(const StretchProblem& p, double c) {
    validate(p);
    const double s0 = sin_of_slope(p.r0);
    const double sb = sin_of_slope(p.rb);
    const double sp = (s0 + sb + p.kappa0 * c) / 2.0;
    const double sm = (s0 + sb - p.kappa0 * c) / 2.0;
    return {slope_of_sin(sm), slope_of_sin(sp)};
}

bool is_stretchable(const StretchProblem& p) {
    auto [lm, lp] = lambda_range(p);
    return lm <= 0.0 && 0.0 <= lp;
}

double zeta_eval(const StretchProblem& p, double mu, double c, double x) {
    validate(p);
    auto [lm, lp] = lambda_range(p, c);
    if (!(mu >= lm && mu <= lp))
        throw std::domain_error("mu outside the admissible bracket");
    const double gp = envelope_eval(p, Branch::GPlus, x);
    const double gm = envelope_eval(p, Branch::GMinus, x);
    const double hp = envelope_eval(p, Branch::HPlus, x, c);
    const double hm = envelope_eval(p, Branch::HMinus, x, c);
    return median5(hm, gm, mu, gp, hp);
}

std::pair<double, double> zeta_plateau(const StretchProblem& p, double mu,
                                       double c) {
    validate(p);
    const double m = sin_of_slope(mu);
    const double x0 = std::abs(m - sin_of_slope(p.r0)) / p.kappa0;
    const double x1 = c - std::abs(m - sin_of_slope(p.rb)) / p.kappa0;
    return {std::max(x0, 0.0), std::min(x1, c)};
}

double integral_zeta(const StretchProblem& p, double mu, double c) {
    validate(p);
    auto [lm, lp] = lambda_range(p, c);
    if (!(mu >= lm && mu <= lp))
        throw std::domain_error("mu outside the admissible bracket");

    const double m = sin_of_slope(mu);
    const SinLine lines[5] = {
        line_for(p, Branch::HMinus, c), line_for(p, Branch::GMinus, c),
        {m, 0.0}, line_for(p, Branch::GPlus, c),
        line_for(p, Branch::HPlus, c)};

    // Piece boundaries: pairwise line crossings plus saturation points.
    std::vector<double> cuts = {0.0, c};
    auto push = [&](double x) {
        if (x > 0.0 && x < c) cuts.push_back(x);
    };
    for (int i = 0; i < 5; ++i) {
        for (int j = i + 1; j < 5; ++j)
            if (lines[i].beta != lines[j].beta)
                push((lines[j].alpha - lines[i].alpha) /
                     (lines[i].beta - lines[j].beta));
        if (lines[i].beta != 0.0) {
            push((+1.0 - lines[i].alpha) / lines[i].beta);
            push((-1.0 - lines[i].alpha) / lines[i].beta);
        }
    }
    std::sort(cuts.begin(), cuts.end());

    double total = 0.0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double xl = cuts[i], xr = cuts[i + 1];
        if (!(xr > xl)) continue;
        const double xm = (xl + xr) / 2.0;
        double vals[5];
        for (int j = 0; j < 5; ++j) vals[j] = slope_of_sin(lines[j].at(xm));
        const double med = median5(vals[0], vals[1], vals[2], vals[3], vals[4]);
        if (std::isinf(med))
            throw std::domain_error("median blows up inside [0,c]");
        if (vals[2] == med) {
            // Plateau piece at the constant level. Crossings are cut points,
            // so a tie with an envelope cannot occur at a midpoint.
            total += mu * (xr - xl);
            continue;
        }
        // The envelope achieving the median; exact antiderivative is
        // -sqrt(1-s^2)/beta.
        int idx = -1;
        for (int j = 0; j < 5; ++j)
            if (j != 2 && vals[j] == med) idx = j;
        if (idx < 0) throw std::logic_error("no active median piece");
        const SinLine& L = lines[idx];
        auto anti = [&](double x) {
            const double s = L.at(x);
            return -std::sqrt(std::max(0.0, (1.0 - s) * (1.0 + s))) / L.beta;
        };
        total += anti(xr) - anti(xl);
    }
    return total;
}

double solve_mu(const StretchProblem& p, double c) {
    validate(p);
    if (c < p.b) throw std::invalid_argument("c must be >= b");
    if (!is_stretchable(p)) throw std::domain_error("problem not stretchable");
    auto [lm, lp] = lambda_range(p, c);

    auto F = [&](double mu) { return integral_zeta(p, mu, c); };

    double lo, hi;
    if (std::isinf(lm)) {
        lo = -1.0;
        for (int i = 0; i < 80 && F(lo) > p.A; ++i) lo *= 2.0;
    } else {
        lo = lm;
    }
    if (std::isinf(lp)) {
        hi = 1.0;
        for (int i = 0; i < 80 && F(hi) < p.A; ++i) hi *= 2.0;
    } else {
        hi = lp;
    }
    if (F(lo) > p.A + 1e-9 || F(hi) < p.A - 1e-9)
        throw std::domain_error("target integral out of attainable range");

    for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
        const double mid = (lo + hi) / 2.0;
        (F(mid) < p.A ? lo : hi) = mid;
    }
    return (lo + hi) / 2.0;
}

bool is_admissible(const StretchProblem& p, const SampledFunction& f,
                   double tol) {
    validate(p);
    const size_t n = f.x.size();
    if (n < 2 || f.y.size() != n) return false;
    if (std::abs(f.x.front()) > tol || std::abs(f.x.back() - p.b) > tol)
        return false;
    if (std::abs(f.y.front() - p.r0) > tol || std::abs(f.y.back() - p.rb) > tol)
        return false;
    double integral = 0.0;
    for (size_t i = 0; i + 1 < n; ++i) {
        const double dx = f.x[i + 1] - f.x[i];
        if (!(dx > 0.0)) return false;
        // Finite-difference curvature bound; equivalently |ds/dx| <= kappa0
        // for s = sin(atan f), which is exact for the envelope family.
        const double ds = sin_of_slope(f.y[i + 1]) - sin_of_slope(f.y[i]);
        if (std::abs(ds) > p.kappa0 * dx + tol) return false;
        integral += (f.y[i] + f.y[i + 1]) / 2.0 * dx;
    }
    // Envelope sandwich at sample points.
    for (size_t i = 0; i < n; ++i) {
        const double lo = std::max(envelope_eval(p, Branch::GMinus, f.x[i]),
                                   envelope_eval(p, Branch::HMinus, f.x[i]));
        const double hiv = std::min(envelope_eval(p, Branch::GPlus, f.x[i]),
                                    envelope_eval(p, Branch::HPlus, f.x[i]));
        if (f.y[i] < lo - tol || f.y[i] > hiv + tol) return false;
    }
    return true;
}

SampledFunction stretch_function(const StretchProblem& p,
                                 const SampledFunction& f, double s) {
    if (s < 0.0) throw std::invalid_argument("s must be >= 0");
    if (!is_admissible(p, f))
        throw std::invalid_argument("sampled function is not admissible");
    if (!is_stretchable(p)) throw std::domain_error("problem not stretchable");
    const double c = p.b + s;
    const double mu = solve_mu(p, c);
    const double spacing = p.b / static_cast<double>(f.x.size() - 1);
    const size_t n =
        std::max<size_t>(2, static_cast<size_t>(std::ceil(c / spacing)) + 1);
    SampledFunction out;
    out.x.resize(n);
    out.y.resize(n);
    for (size_t i = 0; i < n; ++i) {
        const double x = c * static_cast<double>(i) / static_cast<double>(n - 1);
        out.x[i] = x;
        out.y[i] = zeta_eval(p, mu, c, x);
    }
    return out;
}

}  // namespace fc::stretch
