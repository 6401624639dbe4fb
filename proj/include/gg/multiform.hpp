#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "gg/scalar.hpp"

namespace gg {

/// Basis blades are index subsets of {1..n} stored as bitmasks (bit i-1 <-> index i).
using Blade = std::uint32_t;

inline int blade_degree(Blade b) { return std::popcount(b); }

/// Sign of sorting the concatenation (a, b) of two disjoint ascending blades.
inline int merge_sign(Blade a, Blade b) {
    int crossings = 0;
    while (b) {
        Blade low = b & (~b + 1);
        crossings += std::popcount(a & ~(low - 1) & ~low);
        b &= b - 1;
    }
    return (crossings & 1) ? -1 : 1;
}

/// Sign picked up by extracting index i from blade b: (-1)^(number of indices below i).
inline int extraction_sign(Blade b, int i) {
    Blade below = b & ((Blade{1} << (i - 1)) - 1);
    return (std::popcount(below) & 1) ? -1 : 1;
}

enum class Parity { even, odd, mixed };

/// Mixed-degree exterior form on R^n / C^n; sparse map from blades to scalars.
template <class S>
class MultiForm {
public:
    using traits = scalar_traits<S>;

    MultiForm() = default;
    explicit MultiForm(int n) : n_(n) { check_dim(n); }

    static MultiForm scalar(int n, S value) {
        MultiForm f(n);
        f.add_term(0, std::move(value));
        return f;
    }
    static MultiForm blade_form(int n, Blade b, S coef = traits::one()) {
        MultiForm f(n);
        if (b >= (Blade{1} << n)) throw std::invalid_argument("MultiForm: blade out of range");
        f.add_term(b, std::move(coef));
        return f;
    }
    /// Basis covector e^i.
    static MultiForm basis(int n, int i) { return blade_form(n, Blade{1} << (i - 1)); }
    static MultiForm top(int n) { return blade_form(n, (Blade{1} << n) - 1); }

    int dimension() const { return n_; }
    bool empty() const { return coef_.empty(); }
    const std::map<Blade, S>& terms() const { return coef_; }

    S coefficient(Blade b) const {
        auto it = coef_.find(b);
        return it == coef_.end() ? traits::zero() : it->second;
    }
    S scalar_part() const { return coefficient(0); }
    S top_coefficient() const { return coefficient((Blade{1} << n_) - 1); }

    void add_term(Blade b, S c) {
        auto it = coef_.find(b);
        if (it == coef_.end()) {
            if (!traits::is_negligible(c)) coef_.emplace(b, std::move(c));
        } else {
            it->second += c;
            if (traits::is_negligible(it->second)) coef_.erase(it);
        }
    }

    Parity parity() const {
        bool ev = false, od = false;
        for (const auto& [b, c] : coef_) (blade_degree(b) % 2 ? od : ev) = true;
        if (ev && od) return Parity::mixed;
        return od ? Parity::odd : Parity::even;
    }

    MultiForm degree_part(int p) const {
        MultiForm r(n_);
        for (const auto& [b, c] : coef_)
            if (blade_degree(b) == p) r.coef_.emplace(b, c);
        return r;
    }
    MultiForm parity_part(Parity p) const {
        MultiForm r(n_);
        for (const auto& [b, c] : coef_)
            if ((blade_degree(b) % 2 == 1) == (p == Parity::odd)) r.coef_.emplace(b, c);
        return r;
    }
    int max_degree() const {
        int d = 0;
        for (const auto& [b, c] : coef_) d = std::max(d, blade_degree(b));
        return d;
    }

    friend MultiForm operator+(const MultiForm& a, const MultiForm& b) {
        check_pair(a, b);
        MultiForm r = a;
        for (const auto& [bl, c] : b.coef_) r.add_term(bl, c);
        return r;
    }
    friend MultiForm operator-(const MultiForm& a, const MultiForm& b) {
        check_pair(a, b);
        MultiForm r = a;
        for (const auto& [bl, c] : b.coef_) r.add_term(bl, -c);
        return r;
    }
    friend MultiForm operator-(const MultiForm& a) {
        MultiForm r(a.n_);
        for (const auto& [bl, c] : a.coef_) r.coef_.emplace(bl, -c);
        return r;
    }
    friend MultiForm operator*(const S& s, const MultiForm& a) {
        MultiForm r(a.n_);
        if (traits::is_negligible(s)) return r;
        for (const auto& [bl, c] : a.coef_) {
            S v = s * c;
            if (!traits::is_negligible(v)) r.coef_.emplace(bl, std::move(v));
        }
        return r;
    }

    friend bool operator==(const MultiForm& a, const MultiForm& b) {
        if (a.n_ != b.n_) return false;
        return (a - b).empty();
    }

    MultiForm conjugated() const {
        MultiForm r(n_);
        for (const auto& [bl, c] : coef_) r.coef_.emplace(bl, traits::conj(c));
        return r;
    }
    MultiForm real_part() const {
        MultiForm r(n_);
        for (const auto& [bl, c] : coef_) r.add_term(bl, traits::real(c));
        return r;
    }
    MultiForm imag_part() const {
        MultiForm r(n_);
        for (const auto& [bl, c] : coef_) r.add_term(bl, traits::imag(c));
        return r;
    }

    /// Dense 2^n coefficient view, indexed by blade mask.
    std::vector<S> dense() const {
        std::vector<S> v(std::size_t{1} << n_, traits::zero());
        for (const auto& [bl, c] : coef_) v[bl] = c;
        return v;
    }
    static MultiForm from_dense(int n, const std::vector<S>& v) {
        MultiForm r(n);
        for (Blade b = 0; b < v.size(); ++b)
            if (!traits::is_negligible(v[b])) r.coef_.emplace(b, v[b]);
        return r;
    }

    double approx_max() const {
        double m = 0;
        for (const auto& [bl, c] : coef_) m = std::max(m, traits::approx_abs(c));
        return m;
    }

    static void check_pair(const MultiForm& a, const MultiForm& b) {
        if (a.n_ != b.n_) throw std::invalid_argument("MultiForm: dimension mismatch");
    }

private:
    static void check_dim(int n) {
        if (n < 1 || n > 8) throw std::invalid_argument("MultiForm: dimension must be in 1..8");
    }
    int n_ = 0;
    std::map<Blade, S> coef_;
};

template <class S>
MultiForm<S> wedge(const MultiForm<S>& a, const MultiForm<S>& b) {
    MultiForm<S>::check_pair(a, b);
    MultiForm<S> r(a.dimension());
    for (const auto& [ba, ca] : a.terms())
        for (const auto& [bb, cb] : b.terms()) {
            if (ba & bb) continue;
            S v = ca * cb;
            if (merge_sign(ba, bb) < 0) v = -v;
            r.add_term(ba | bb, std::move(v));
        }
    return r;
}

/// Interior product with the frame vector e_i.
template <class S>
MultiForm<S> contract_dir(int i, const MultiForm<S>& a) {
    MultiForm<S> r(a.dimension());
    Blade bit = Blade{1} << (i - 1);
    for (const auto& [b, c] : a.terms()) {
        if (!(b & bit)) continue;
        S v = c;
        if (extraction_sign(b, i) < 0) v = -v;
        r.add_term(b & ~bit, std::move(v));
    }
    return r;
}

/// Interior product with a vector given by frame coefficients.
template <class S>
MultiForm<S> contract(const std::vector<S>& X, const MultiForm<S>& a) {
    if (static_cast<int>(X.size()) != a.dimension())
        throw std::invalid_argument("contract: dimension mismatch");
    MultiForm<S> r(a.dimension());
    for (int i = 1; i <= a.dimension(); ++i) {
        if (scalar_traits<S>::is_zero(X[i - 1])) continue;
        r = r + X[i - 1] * contract_dir(i, a);
    }
    return r;
}

/// Full interior product beta _| a by the multivector dual to the form beta (orthonormal frame):
/// blades contract innermost-last, (e_i ^ e_j) _| a = e_i _| (e_j _| a).
template <class S>
MultiForm<S> contract_form(const MultiForm<S>& beta, const MultiForm<S>& a) {
    MultiForm<S>::check_pair(beta, a);
    MultiForm<S> r(a.dimension());
    for (const auto& [b, c] : beta.terms()) {
        MultiForm<S> cur = a;
        for (int i = a.dimension(); i >= 1; --i)
            if (b & (Blade{1} << (i - 1))) cur = contract_dir(i, cur);
        r = r + c * cur;
    }
    return r;
}

enum class SignTwist { hat, tilde };

/// hat multiplies the degree-p part by (-1)^{p(p+1)/2}; tilde by (-1)^p.
template <class S>
MultiForm<S> sign_twist(const MultiForm<S>& a, SignTwist kind) {
    MultiForm<S> r(a.dimension());
    for (const auto& [b, c] : a.terms()) {
        int p = blade_degree(b);
        int e = (kind == SignTwist::hat) ? (p * (p + 1) / 2) : p;
        r.add_term(b, (e & 1) ? -c : c);
    }
    return r;
}

template <class S>
MultiForm<S> hat(const MultiForm<S>& a) {
    return sign_twist(a, SignTwist::hat);
}
template <class S>
MultiForm<S> tilde(const MultiForm<S>& a) {
    return sign_twist(a, SignTwist::tilde);
}

/// exp(B) ^ a for a form B of even degree (nilpotent series, exact).
template <class S>
MultiForm<S> exp_wedge(const MultiForm<S>& B, const MultiForm<S>& a) {
    MultiForm<S> sum = a, power = a;
    long k = 1;
    while (true) {
        power = wedge(B, power);
        if (power.empty()) break;
        long fact = 1;
        for (long j = 2; j <= k; ++j) fact *= j;
        // divide by k! incrementally: power already has B^k ^ a, scale by 1/k!
        sum = sum + scalar_traits<S>::from_ratio(1, fact) * power;
        ++k;
        if (k > a.dimension()) break;
    }
    return sum;
}

}  // namespace gg
