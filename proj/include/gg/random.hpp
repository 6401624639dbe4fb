#pragma once

#include <random>

#include "gg/genalg.hpp"
#include "gg/multiform.hpp"
#include "gg/spin.hpp"

namespace gg {

/// Seeded generator for exact test data: Gaussian-rational coefficients with numerators in
/// [-16, 16] and denominators in [1, 16], plus rational-unitary spinor rotations built from
/// Pythagorean Givens pairs so that "random unit spinor" stays exact.
class RationalRng {
public:
    explicit RationalRng(std::uint64_t seed) : eng_(seed) {}

    long int_in(long lo, long hi) {
        std::uniform_int_distribution<long> d(lo, hi);
        return d(eng_);
    }

    template <class S>
    S real_scalar() {
        return scalar_traits<S>::from_ratio(int_in(-16, 16), int_in(1, 16));
    }
    template <class S>
    S scalar() {
        return real_scalar<S>() + scalar_traits<S>::imag_unit() * real_scalar<S>();
    }

    template <class S>
    std::vector<S> vector(int n, bool complex_entries = false) {
        std::vector<S> v(n);
        for (auto& x : v) x = complex_entries ? scalar<S>() : real_scalar<S>();
        return v;
    }

    /// Random form with entries on all blades (optionally fixed degree / parity / realness).
    template <class S>
    MultiForm<S> form(int n, int degree = -1, int parity = -1, bool complex_entries = false) {
        MultiForm<S> f(n);
        for (Blade b = 0; b < (Blade{1} << n); ++b) {
            int d = blade_degree(b);
            if (degree >= 0 && d != degree) continue;
            if (parity >= 0 && d % 2 != parity) continue;
            f.add_term(b, complex_entries ? scalar<S>() : real_scalar<S>());
        }
        return f;
    }

    template <class S>
    Spinor<S> spinor(const SpinModulePtr<S>& mod) {
        std::vector<S> v(mod->dim);
        for (auto& x : v) x = scalar<S>();
        return Spinor<S>(mod, std::move(v));
    }

    template <class S>
    Spinor<S> chiral_spinor(const SpinModulePtr<S>& mod, Chirality chi) {
        std::vector<S> v(mod->dim, scalar_traits<S>::zero());
        int want = (chi == Chirality::plus) ? 1 : -1;
        bool nonzero = false;
        for (std::size_t i = 0; i < mod->dim; ++i)
            if (mod->chi_sign[i] == want) {
                v[i] = scalar<S>();
                nonzero |= !scalar_traits<S>::is_zero(v[i]);
            }
        if (!nonzero)
            for (std::size_t i = 0; i < mod->dim; ++i)
                if (mod->chi_sign[i] == want) {
                    v[i] = scalar_traits<S>::one();
                    break;
                }
        return Spinor<S>(mod, std::move(v));
    }

    /// Random unit spinor of the given chirality: exact unitary rotations of the first
    /// chiral basis vector (Givens pairs from Pythagorean triples times unit phases).
    template <class S>
    Spinor<S> unit_chiral_spinor(const SpinModulePtr<S>& mod, Chirality chi) {
        using traits = scalar_traits<S>;
        int want = (chi == Chirality::plus) ? 1 : -1;
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < mod->dim; ++i)
            if (mod->chi_sign[i] == want) idx.push_back(i);
        std::vector<S> v(mod->dim, traits::zero());
        v[idx[0]] = traits::one();
        static const long triples[4][3] = {{3, 4, 5}, {5, 12, 13}, {8, 15, 17}, {20, 21, 29}};
        const S phases[4] = {traits::one(), traits::imag_unit(), -traits::one(),
                             -traits::imag_unit()};
        for (int round = 0; round < 8; ++round) {
            std::size_t a = idx[int_in(0, static_cast<long>(idx.size()) - 1)];
            std::size_t b = idx[int_in(0, static_cast<long>(idx.size()) - 1)];
            if (a == b) continue;
            const long* t = triples[int_in(0, 3)];
            S c = traits::from_ratio(t[0], t[2]), s = traits::from_ratio(t[1], t[2]);
            S pa = phases[int_in(0, 3)], pb = phases[int_in(0, 3)];
            S va = v[a], vb = v[b];
            v[a] = pa * (c * va - s * vb);
            v[b] = pb * (s * va + c * vb);
        }
        return Spinor<S>(mod, std::move(v));
    }

    /// Random pure unit spinor in Delta_+ (n = 6: every chiral spinor is pure).
    template <class S>
    Spinor<S> unit_pure_spinor(const SpinModulePtr<S>& mod) {
        if (mod->n != 6)
            throw std::domain_error("unit_pure_spinor: generic pure sampling only for n = 6");
        return unit_chiral_spinor<S>(mod, Chirality::plus);
    }

    /// Random metric with an exact Cholesky factor: g = L L^T with unit diagonal L.
    template <class S>
    MetricData<S> metric(int n) {
        Matrix<S> L(n, n);
        for (int i = 0; i < n; ++i) {
            L(i, i) = scalar_traits<S>::one();
            for (int j = 0; j < i; ++j)
                L(i, j) = scalar_traits<S>::from_ratio(int_in(-3, 3), int_in(1, 4));
        }
        return MetricData<S>(L * L.transposed());
    }

    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
};

}  // namespace gg
