#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fc::strings {

// Thrown when a tag sequence does not reduce to a valid alternating string
// of length >= 2.
struct NotAString : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Sequence over {+,-} of length >= 2, repetitions allowed.
// Entries are stored as +1 / -1; indexing is 1-based via operator().
class ExtendedString {
public:
    explicit ExtendedString(std::vector<int> signs);
    static ExtendedString parse(const std::string& text);

    int size() const { return static_cast<int>(signs_.size()); }
    int operator()(int k) const { return signs_[static_cast<size_t>(k - 1)]; }
    const std::vector<int>& signs() const { return signs_; }
    std::string text() const;

    bool operator==(const ExtendedString& o) const { return signs_ == o.signs_; }

private:
    std::vector<int> signs_;
};

// Alternating sequence over {+,-} of length >= 2.
class SignString {
public:
    explicit SignString(std::vector<int> signs);
    static SignString parse(const std::string& text);
    // The alternating string of length n whose k-th sign is (-1)^k (1-based),
    // i.e. "-+-+...".
    static SignString standard(int n);

    int size() const { return static_cast<int>(signs_.size()); }
    int operator()(int k) const { return signs_[static_cast<size_t>(k - 1)]; }
    const std::vector<int>& signs() const { return signs_; }
    std::string text() const;
    SignString negated() const;
    ExtendedString extended() const { return ExtendedString(signs_); }

    bool operator==(const SignString& o) const { return signs_ == o.signs_; }
    bool operator!=(const SignString& o) const { return !(*this == o); }

private:
    std::vector<int> signs_;
};

// Maximal sign string that embeds into tau; drops consecutive repetitions.
// Throws NotAString if fewer than 2 signs remain.
SignString reduce_string(const ExtendedString& tau);

// Order-preserving embedding test, decided by greedy matching.
bool is_substring(const ExtendedString& s1, const ExtendedString& s2);
bool is_substring(const SignString& s1, const SignString& s2);

// A point of R^n (n >= 2) read as beads on vertical wires; bead indices are
// 1-based and their parity drives all comparisons below.
using BeadPoint = std::vector<double>;

enum class BeadKind { Mixed, Level, Split };

struct BeadClass {
    BeadKind kind;
    double t;  // min over odd k, even k' of x_k - x_{k'}
    // Set for Level points only.
    double elevation = 0.0;
    std::optional<SignString> level_type;
};

BeadClass classify_bead_point(const BeadPoint& x);

// Ordered partition (J_1,...,J_m) of [n]: level sets of x by increasing value.
// Ties compare exactly; indices are 1-based.
std::vector<std::vector<int>> cell_of(const BeadPoint& x);

// Chain sigma_1 < ... < sigma_m with sigma_j a substring of sigma_{j+1};
// all but the last must be alternating. Thresholds default to 1,...,m.
class StringChain {
public:
    explicit StringChain(std::vector<ExtendedString> strings,
                         std::vector<double> thresholds = {});

    int length() const { return static_cast<int>(strings_.size()); }
    const ExtendedString& top() const { return strings_.back(); }
    const ExtendedString& at(int j) const { return strings_[static_cast<size_t>(j - 1)]; }
    double threshold(int j) const { return thresholds_[static_cast<size_t>(j - 1)]; }

private:
    std::vector<ExtendedString> strings_;
    std::vector<double> thresholds_;
};

enum class MembershipVariant { Plain, Diffuse, Band };

// Membership of x in the model space determined by the chain:
//   Plain:   sigma_m(k) x_k <= 0 for all k, plus the tag conditions at every
//            threshold level.
//   Diffuse: an opposite-sign pair with sigma_m(k_i) x_{k_i} > 0 replaces the
//            first condition.
//   Band:    chain of length 2, |x_k| <= 1, and the tags of {k : x_k = 0}
//            reduce to sigma_1.
// With strict=true the weak inequalities become strict.
bool nested_membership(const BeadPoint& x, const StringChain& chain,
                       MembershipVariant variant, bool strict = false);

// y_k = -sigma_m(k) * max(|x_k| - eps_{m-1}, 0); requires plain membership.
BeadPoint collapse_map(const BeadPoint& x, const StringChain& chain);

// Splits x into a level point and half the odd/even gap:
//   tbar = t(x)/2,  l_k = x_k + (-1)^k tbar.
std::pair<BeadPoint, double> level_split_factorization(const BeadPoint& x);

// Inverse of the factorization: x_k = l_k + (-1)^{k-1} t.
BeadPoint level_split_compose(const BeadPoint& level, double t);

// For x Level of type tau and sigma a proper substring of tau, move the
// leftmost admissible surplus beads at the elevation off it:
//   x_k(s) = x_k + (-1)^{k-1} s on the chosen indices.
// The result is Level of type sigma for all sufficiently small s > 0.
BeadPoint boundary_approach(const BeadPoint& x, const SignString& sigma, double s);

}  // namespace fc::strings
