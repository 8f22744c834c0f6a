#include "fc/strings.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace fc::strings {

namespace {

std::vector<int> parse_signs(const std::string& text) {
    std::vector<int> out;
    out.reserve(text.size());
    for (char c : text) {
        if (c == '+')
            out.push_back(+1);
        else if (c == '-')
            out.push_back(-1);
        else
            throw std::invalid_argument("sign string may only contain '+' and '-'");
    }
    return out;
}

std::string format_signs(const std::vector<int>& signs) {
    std::string out;
    out.reserve(signs.size());
    for (int s : signs) out.push_back(s > 0 ? '+' : '-');
    return out;
}

std::vector<int> reduce_signs(const std::vector<int>& signs) {
    std::vector<int> out;
    for (int s : signs)
        if (out.empty() || out.back() != s) out.push_back(s);
    return out;
}

// Greedy order-preserving embedding of a into b.
bool embeds(const std::vector<int>& a, const std::vector<int>& b) {
    size_t i = 0;
    for (size_t j = 0; j < b.size() && i < a.size(); ++j)
        if (b[j] == a[i]) ++i;
    return i == a.size();
}

void check_dim(const BeadPoint& x) {
    if (x.size() < 2) throw std::invalid_argument("bead point needs n >= 2");
}

int parity_tag(int k) { return (k % 2 == 0) ? +1 : -1; }

}  // namespace

ExtendedString::ExtendedString(std::vector<int> signs) : signs_(std::move(signs)) {
    if (signs_.size() < 2) throw NotAString("string length must be >= 2");
    for (int s : signs_)
        if (s != +1 && s != -1) throw std::invalid_argument("signs must be +1 or -1");
}

ExtendedString ExtendedString::parse(const std::string& text) {
    return ExtendedString(parse_signs(text));
}

std::string ExtendedString::text() const { return format_signs(signs_); }

SignString::SignString(std::vector<int> signs) : signs_(std::move(signs)) {
    if (signs_.size() < 2) throw NotAString("string length must be >= 2");
    for (size_t i = 0; i < signs_.size(); ++i) {
        if (signs_[i] != +1 && signs_[i] != -1)
            throw std::invalid_argument("signs must be +1 or -1");
        if (i > 0 && signs_[i] == signs_[i - 1])
            throw NotAString("sign string must alternate");
    }
}

SignString SignString::parse(const std::string& text) {
    return SignString(parse_signs(text));
}

SignString SignString::standard(int n) {
    std::vector<int> signs(static_cast<size_t>(n));
    for (int k = 1; k <= n; ++k) signs[static_cast<size_t>(k - 1)] = parity_tag(k);
    return SignString(std::move(signs));
}

std::string SignString::text() const { return format_signs(signs_); }

SignString SignString::negated() const {
    std::vector<int> signs(signs_);
    for (int& s : signs) s = -s;
    return SignString(std::move(signs));
}

SignString reduce_string(const ExtendedString& tau) {
    std::vector<int> reduced = reduce_signs(tau.signs());
    if (reduced.size() < 2) throw NotAString("reduced string has length < 2");
    return SignString(std::move(reduced));
}

bool is_substring(const ExtendedString& s1, const ExtendedString& s2) {
    return embeds(s1.signs(), s2.signs());
}

bool is_substring(const SignString& s1, const SignString& s2) {
    return embeds(s1.signs(), s2.signs());
}

BeadClass classify_bead_point(const BeadPoint& x) {
    check_dim(x);
    const int n = static_cast<int>(x.size());
    double min_odd = std::numeric_limits<double>::infinity();
    double max_even = -std::numeric_limits<double>::infinity();
    for (int k = 1; k <= n; ++k) {
        double v = x[static_cast<size_t>(k - 1)];
        if (k % 2 == 1)
            min_odd = std::min(min_odd, v);
        else
            max_even = std::max(max_even, v);
    }
    BeadClass out;
    out.t = min_odd - max_even;
    if (out.t < 0) {
        out.kind = BeadKind::Mixed;
    } else if (out.t > 0) {
        out.kind = BeadKind::Split;
    } else {
        out.kind = BeadKind::Level;
        out.elevation = min_odd;
        std::vector<int> tags;
        for (int k = 1; k <= n; ++k)
            if (x[static_cast<size_t>(k - 1)] == out.elevation)
                tags.push_back(parity_tag(k));
        // Both parities touch the elevation, so the reduction cannot collapse
        // below length 2.
        out.level_type = reduce_string(ExtendedString(std::move(tags)));
    }
    return out;
}

std::vector<std::vector<int>> cell_of(const BeadPoint& x) {
    check_dim(x);
    const int n = static_cast<int>(x.size());
    std::vector<int> idx(static_cast<size_t>(n));
    std::iota(idx.begin(), idx.end(), 1);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
        return x[static_cast<size_t>(a - 1)] < x[static_cast<size_t>(b - 1)];
    });
    std::vector<std::vector<int>> parts;
    for (int k : idx) {
        double v = x[static_cast<size_t>(k - 1)];
        if (parts.empty() || x[static_cast<size_t>(parts.back().front() - 1)] != v)
            parts.emplace_back();
        parts.back().push_back(k);
    }
    return parts;
}

StringChain::StringChain(std::vector<ExtendedString> strings,
                         std::vector<double> thresholds)
    : strings_(std::move(strings)), thresholds_(std::move(thresholds)) {
    if (strings_.empty()) throw std::invalid_argument("chain must be nonempty");
    const int m = static_cast<int>(strings_.size());
    for (int j = 1; j < m; ++j) {
        // All but the last must be alternating sign strings.
        SignString check(strings_[static_cast<size_t>(j - 1)].signs());
        if (!is_substring(strings_[static_cast<size_t>(j - 1)],
                          strings_[static_cast<size_t>(j)]))
            throw std::invalid_argument("chain entries must be nested substrings");
    }
    if (thresholds_.empty()) {
        thresholds_.resize(static_cast<size_t>(m));
        for (int j = 1; j <= m; ++j) thresholds_[static_cast<size_t>(j - 1)] = j;
    }
    if (static_cast<int>(thresholds_.size()) != m)
        throw std::invalid_argument("one threshold per chain entry required");
    double prev = 0.0;
    for (double e : thresholds_) {
        if (!(e > prev)) throw std::invalid_argument("thresholds must be positive and increasing");
        prev = e;
    }
}

namespace {

bool tags_reduce_to(const std::vector<int>& tags, const ExtendedString& target) {
    std::vector<int> reduced = reduce_signs(tags);
    return reduced == target.signs();
}

}  // namespace

bool nested_membership(const BeadPoint& x, const StringChain& chain,
                       MembershipVariant variant, bool strict) {
    check_dim(x);
    const ExtendedString& top = chain.top();
    const int n = static_cast<int>(x.size());
    if (top.size() != n) throw std::invalid_argument("dimension mismatch with chain");
    const int m = chain.length();
    auto leq = [&](double a, double b) { return strict ? a < b : a <= b; };

    if (variant == MembershipVariant::Band) {
        if (m != 2) throw std::invalid_argument("band membership needs a chain of length 2");
        for (int k = 1; k <= n; ++k)
            if (!leq(top(k) * x[static_cast<size_t>(k - 1)], 0.0)) return false;
        std::vector<int> zero_tags;
        for (int k = 1; k <= n; ++k) {
            double v = x[static_cast<size_t>(k - 1)];
            if (!leq(std::abs(v), chain.threshold(1))) return false;
            if (v == 0.0) zero_tags.push_back(top(k));
        }
        return tags_reduce_to(zero_tags, chain.at(1));
    }

    if (variant == MembershipVariant::Plain) {
        for (int k = 1; k <= n; ++k)
            if (!leq(top(k) * x[static_cast<size_t>(k - 1)], 0.0)) return false;
    } else {
        bool pos = false, neg = false;
        for (int k = 1; k <= n; ++k)
            if (top(k) * x[static_cast<size_t>(k - 1)] > 0.0)
                (top(k) > 0 ? pos : neg) = true;
        if (!(pos && neg)) return false;
    }

    for (int k = 1; k <= n; ++k)
        if (!leq(std::abs(x[static_cast<size_t>(k - 1)]), chain.threshold(m))) return false;
    for (int j = 1; j < m; ++j) {
        std::vector<int> tags;
        for (int k = 1; k <= n; ++k)
            if (leq(std::abs(x[static_cast<size_t>(k - 1)]), chain.threshold(j)))
                tags.push_back(top(k));
        if (!tags_reduce_to(tags, chain.at(j))) return false;
    }
    return true;
}

BeadPoint collapse_map(const BeadPoint& x, const StringChain& chain) {
    if (!nested_membership(x, chain, MembershipVariant::Plain))
        throw std::invalid_argument("collapse_map requires plain membership");
    const int m = chain.length();
    const double eps = (m >= 2) ? chain.threshold(m - 1) : 0.0;
    const ExtendedString& top = chain.top();
    BeadPoint y(x.size());
    for (int k = 1; k <= static_cast<int>(x.size()); ++k)
        y[static_cast<size_t>(k - 1)] =
            -top(k) * std::max(std::abs(x[static_cast<size_t>(k - 1)]) - eps, 0.0);
    return y;
}

std::pair<BeadPoint, double> level_split_factorization(const BeadPoint& x) {
    check_dim(x);
    const double tbar = classify_bead_point(x).t / 2.0;
    BeadPoint level(x.size());
    for (int k = 1; k <= static_cast<int>(x.size()); ++k)
        level[static_cast<size_t>(k - 1)] =
            x[static_cast<size_t>(k - 1)] + parity_tag(k) * tbar;
    return {level, tbar};
}

BeadPoint level_split_compose(const BeadPoint& level, double t) {
    check_dim(level);
    BeadPoint x(level.size());
    for (int k = 1; k <= static_cast<int>(level.size()); ++k)
        x[static_cast<size_t>(k - 1)] =
            level[static_cast<size_t>(k - 1)] - parity_tag(k) * t;
    return x;
}

BeadPoint boundary_approach(const BeadPoint& x, const SignString& sigma, double s) {
    BeadClass cls = classify_bead_point(x);
    if (cls.kind != BeadKind::Level)
        throw std::invalid_argument("boundary_approach requires a level point");
    const SignString& tau = *cls.level_type;
    if (!(is_substring(sigma, tau) && sigma != tau))
        throw std::invalid_argument("target must be a proper substring of the level type");

    const int n = static_cast<int>(x.size());
    std::vector<int> at_elevation;  // 1-based bead indices at the elevation
    for (int k = 1; k <= n; ++k)
        if (x[static_cast<size_t>(k - 1)] == cls.elevation) at_elevation.push_back(k);

    // Greedy split: perturb the leftmost beads whose removal still allows the
    // retained tags to reduce to sigma.
    const std::vector<int>& target = sigma.signs();
    std::vector<int> retained_reduced;
    auto feasible_with = [&](const std::vector<int>& reduced, size_t next) {
        // reduced must be a prefix of target...
        if (reduced.size() > target.size()) return false;
        for (size_t i = 0; i < reduced.size(); ++i)
            if (reduced[i] != target[i]) return false;
        // ...and the remaining elevation tags must supply the rest.
        std::vector<int> rest(target.begin() + static_cast<long>(reduced.size()),
                              target.end());
        std::vector<int> remaining;
        for (size_t i = next; i < at_elevation.size(); ++i)
            remaining.push_back(parity_tag(at_elevation[i]));
        return embeds(rest, remaining);
    };

    std::vector<int> perturbed;
    for (size_t i = 0; i < at_elevation.size(); ++i) {
        if (feasible_with(retained_reduced, i + 1)) {
            perturbed.push_back(at_elevation[i]);
        } else {
            int tag = parity_tag(at_elevation[i]);
            if (retained_reduced.empty() || retained_reduced.back() != tag)
                retained_reduced.push_back(tag);
        }
    }
    if (retained_reduced != target)
        throw std::logic_error("no valid index split found");

    BeadPoint out(x);
    for (int k : perturbed)
        out[static_cast<size_t>(k - 1)] += (k % 2 == 1 ? +s : -s);
    return out;
}

}  // namespace fc::strings
