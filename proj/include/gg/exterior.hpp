#pragma once

#include <stdexcept>
#include <vector>

#include "gg/linalg.hpp"
#include "gg/multiform.hpp"
#include "gg/scalar.hpp"

namespace gg {

/// Oriented n-vector nu = lambda^-2 e_1 ^ ... ^ e_n with dual volume form
/// varpi = lambda^2 e^1...n; the pairing nu(top form) uses the natural duality.
template <class S>
struct VolumeElement {
    int n = 0;
    S coef;  // lambda^-2 > 0

    explicit VolumeElement(int n_, S c = scalar_traits<S>::one()) : n(n_), coef(std::move(c)) {
        if (!scalar_traits<S>::is_positive(coef))
            throw std::invalid_argument("VolumeElement: coefficient must be real positive");
    }
    MultiForm<S> dual_form() const {
        return MultiForm<S>::blade_form(n, (Blade{1} << n) - 1, scalar_traits<S>::one() / coef);
    }
    S pair_top(const MultiForm<S>& top_form) const { return coef * top_form.top_coefficient(); }
};

/// Substitute e^i -> sum_j M_{ij} e^j in every blade (linear coframe substitution).
template <class S>
MultiForm<S> substitute_coframe(const Matrix<S>& M, const MultiForm<S>& a) {
    const int n = a.dimension();
    std::vector<MultiForm<S>> images;
    for (int i = 1; i <= n; ++i) {
        MultiForm<S> im(n);
        for (int j = 1; j <= n; ++j)
            if (!scalar_traits<S>::is_zero(M(i - 1, j - 1)))
                im.add_term(Blade{1} << (j - 1), M(i - 1, j - 1));
        images.push_back(std::move(im));
    }
    MultiForm<S> out(n);
    for (const auto& [b, c] : a.terms()) {
        MultiForm<S> prod = MultiForm<S>::scalar(n, scalar_traits<S>::one());
        for (int i = 1; i <= n; ++i)
            if (b & (Blade{1} << (i - 1))) prod = wedge(prod, images[i - 1]);
        out = out + c * prod;
    }
    return out;
}

/// Riemannian metric in the standard frame with an exact orthonormal coframe derived by
/// Cholesky factorisation g = L L^T (ties broken by ascending index order).
template <class S>
class MetricData {
public:
    using traits = scalar_traits<S>;

    explicit MetricData(Matrix<S> g) : g_(std::move(g)) {
        n_ = static_cast<int>(g_.rows());
        if (g_.rows() != g_.cols()) throw std::invalid_argument("MetricData: g not square");
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) {
                if (!traits::is_real(g_(i, j)))
                    throw std::invalid_argument("MetricData: g must be real");
                if (!traits::is_negligible(g_(i, j) - g_(j, i)))
                    throw std::invalid_argument("MetricData: g not symmetric");
            }
        cholesky();
        trivial_ = true;
        for (int i = 0; i < n_ && trivial_; ++i)
            for (int j = 0; j < n_ && trivial_; ++j) {
                S expect = (i == j) ? traits::one() : traits::zero();
                if (!traits::is_zero(g_(i, j) - expect)) trivial_ = false;
            }
    }

    static MetricData identity(int n) { return MetricData(Matrix<S>::identity(n)); }

    int dimension() const { return n_; }
    const Matrix<S>& matrix() const { return g_; }
    const Matrix<S>& cholesky_factor() const { return L_; }
    bool is_identity() const { return trivial_; }
    S det_factor() const { return detL_; }  // det L = sqrt(det g)

    /// Riemannian volume as an n-vector (coefficient 1/det L) and as a form (det L e^1..n).
    VolumeElement<S> riemannian_volume() const {
        return VolumeElement<S>(n_, traits::one() / detL_);
    }
    MultiForm<S> volume_form() const {
        return MultiForm<S>::blade_form(n_, (Blade{1} << n_) - 1, detL_);
    }

    /// Coefficients of a form in the orthonormal coframe and back.
    MultiForm<S> to_frame(const MultiForm<S>& a) const {
        return trivial_ ? a : substitute_coframe(to_frame_, a);
    }
    MultiForm<S> from_frame(const MultiForm<S>& a) const {
        return trivial_ ? a : substitute_coframe(from_frame_, a);
    }

    /// Metric as a map X -> g(X) on frame coefficient vectors.
    std::vector<S> flat(const std::vector<S>& X) const {
        std::vector<S> r(n_, traits::zero());
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) r[i] += g_(i, j) * X[j];
        return r;
    }

private:
    void cholesky() {
        const int n = n_;
        L_ = Matrix<S>(n, n);
        for (int j = 0; j < n; ++j) {
            S diag = g_(j, j);
            for (int k = 0; k < j; ++k) diag -= L_(j, k) * L_(j, k);
            auto root = traits::try_sqrt_real(diag);
            if (!root || traits::is_zero(*root)) {
                if constexpr (traits::exact)
                    throw std::domain_error(
                        "MetricData: metric not positive definite with rational Cholesky; "
                        "use float mode or a metric of the form L L^T");
                else
                    throw std::domain_error("MetricData: metric not positive definite");
            }
            L_(j, j) = *root;
            for (int i = j + 1; i < n; ++i) {
                S v = g_(i, j);
                for (int k = 0; k < j; ++k) v -= L_(i, k) * L_(j, k);
                L_(i, j) = v / L_(j, j);
            }
        }
        detL_ = traits::one();
        for (int i = 0; i < n; ++i) detL_ = detL_ * L_(i, i);
        // coframe maps: f^a = sum_i L_{ia} e^i, so e^i = sum_a (L^-T)_{ia} f^a
        Matrix<S> LT = L_.transposed();
        from_frame_ = LT;            // f^a -> sum_i (L^T)_{ai} e^i
        to_frame_ = inverse(LT);     // e^i -> sum_a (L^-T)_{ia} f^a
    }

    int n_ = 0;
    bool trivial_ = false;
    Matrix<S> g_, L_, to_frame_, from_frame_;
    S detL_;
};

/// Hodge star in the orthonormal frame of the identity metric.
template <class S>
MultiForm<S> star_orthonormal(const MultiForm<S>& a) {
    const int n = a.dimension();
    const Blade full = (Blade{1} << n) - 1;
    MultiForm<S> r(n);
    for (const auto& [b, c] : a.terms()) {
        Blade bc = full & ~b;
        S v = c;
        if (merge_sign(b, bc) < 0) v = -v;
        r.add_term(bc, std::move(v));
    }
    return r;
}

template <class S>
MultiForm<S> hodge_star(const MetricData<S>& g, const MultiForm<S>& a) {
    if (g.dimension() != a.dimension()) throw std::invalid_argument("hodge_star: dimension mismatch");
    if (g.is_identity()) return star_orthonormal(a);
    return g.from_frame(star_orthonormal(g.to_frame(a)));
}

/// Spin(n,n)-invariant pairing <rho, tau> = nu([rho ^ hat tau]^n).
template <class S>
S mukai_pair(const MultiForm<S>& rho, const MultiForm<S>& tau, const VolumeElement<S>& nu) {
    MultiForm<S>::check_pair(rho, tau);
    if (rho.dimension() != nu.n) throw std::invalid_argument("mukai_pair: dimension mismatch");
    return nu.pair_top(wedge(rho, hat(tau)));
}

template <class S>
S mukai_pair(const MultiForm<S>& rho, const MultiForm<S>& tau) {
    return mukai_pair(rho, tau, VolumeElement<S>(rho.dimension()));
}

/// The generalised-metric operator on forms: star_g hat (n even), star_g hat tilde (n odd).
template <class S>
MultiForm<S> g_tilde(const MetricData<S>& g, const MultiForm<S>& rho) {
    if (g.dimension() % 2 == 0) return hodge_star(g, hat(rho));
    return hodge_star(g, hat(tilde(rho)));
}

/// Definite inner product sum_p g(a^p, b^p), conjugate-linear in the first slot,
/// evaluated in the orthonormal coframe. (The 1/2-normalised version used for
/// harmonic bases is ip/2.)
template <class S>
S form_inner(const MetricData<S>& g, const MultiForm<S>& a, const MultiForm<S>& b) {
    MultiForm<S> af = g.to_frame(a), bf = g.to_frame(b);
    S r = scalar_traits<S>::zero();
    for (const auto& [bl, c] : af.terms()) r += scalar_traits<S>::conj(c) * bf.coefficient(bl);
    return r;
}

}  // namespace gg
