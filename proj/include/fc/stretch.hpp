#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

namespace fc::stretch {

// Boundary-value data for the curvature-bounded graph problem on [0, b]:
// slopes r0 at 0 and rb at b, curvature bound kappa0 in (0,1), and the target
// integral A of the admissible function.
struct StretchProblem {
    double kappa0;
    double b;
    double r0;
    double rb;
    double A = 0.0;
};

void validate(const StretchProblem& p);

// The four extremal envelopes. G branches are anchored at (0, r0), H branches
// at (anchor, rb); GPlus/HMinus increase, GMinus/HPlus decrease.
enum class Branch { GPlus, GMinus, HPlus, HMinus };

// Closed-form envelope value; +/-infinity past blow-up. H branches are
// anchored at x = anchor (pass p.b for the base problem).
double envelope_eval(const StretchProblem& p, Branch br, double x,
                     double anchor);
inline double envelope_eval(const StretchProblem& p, Branch br, double x) {
    return envelope_eval(p, br, x, p.b);
}

// Extreme admissible constant levels on [0, c]: the common value where the
// increasing/decreasing envelope pairs meet, +/-infinity when they do not.
std::pair<double, double> lambda_range(const StretchProblem& p, double c);
inline std::pair<double, double> lambda_range(const StretchProblem& p) {
    return lambda_range(p, p.b);
}

// 0 in [lambda_minus(b), lambda_plus(b)].
bool is_stretchable(const StretchProblem& p);

// Five-way median of {HMinus, GMinus, mu, GPlus, HPlus} on [0, c], with the H
// branches anchored at c. Throws std::domain_error when mu is outside the
// admissible bracket at c.
double zeta_eval(const StretchProblem& p, double mu, double c, double x);

// Closed interval where zeta == mu, clamped to [0, c]. first > second means
// empty.
std::pair<double, double> zeta_plateau(const StretchProblem& p, double mu,
                                       double c);

// Exact definite integral of zeta over [0, c], assembled piecewise from the
// envelope antiderivative.
double integral_zeta(const StretchProblem& p, double mu, double c);

// The unique mu with integral_zeta(p, mu, c) == p.A, by bisection on the
// monotone integral (tolerance 1e-12 on mu).
double solve_mu(const StretchProblem& p, double c);

struct SampledFunction {
    std::vector<double> x;
    std::vector<double> y;
};

// Checks the sampled f against the problem: endpoint values, the
// finite-difference curvature bound, and the envelope sandwich, each to tol.
bool is_admissible(const StretchProblem& p, const SampledFunction& f,
                   double tol = 1e-6);

// Replaces f on [0, b] by the canonical profile on [0, b+s] with the same
// integral: samples of the median curve at level mu(b+s). s = 0 gives the
// flattening endpoint f0.
SampledFunction stretch_function(const StretchProblem& p,
                                 const SampledFunction& f, double s);

}  // namespace fc::stretch
