#pragma once

#include <memory>
#include <string>
#include <vector>

#include "gg/linalg.hpp"
#include "gg/multiform.hpp"
#include "gg/scalar.hpp"

namespace gg {

/// Matrix with exactly one nonzero entry per column (all our gamma matrices are of this
/// shape); applies in O(dim) and keeps exact arithmetic cheap.
template <class S>
struct Monomial {
    std::vector<std::size_t> row_of;  // row index of the nonzero in each column
    std::vector<S> phase;             // its value

    static Monomial identity(std::size_t d) {
        Monomial m;
        m.row_of.resize(d);
        m.phase.assign(d, scalar_traits<S>::one());
        for (std::size_t i = 0; i < d; ++i) m.row_of[i] = i;
        return m;
    }
    std::size_t dim() const { return row_of.size(); }

    std::vector<S> apply(const std::vector<S>& v) const {
        std::vector<S> r(v.size(), scalar_traits<S>::zero());
        for (std::size_t c = 0; c < v.size(); ++c)
            if (!scalar_traits<S>::is_zero(v[c])) r[row_of[c]] += phase[c] * v[c];
        return r;
    }
    /// this * other (composition: apply other first).
    friend Monomial operator*(const Monomial& a, const Monomial& b) {
        Monomial r;
        r.row_of.resize(b.dim());
        r.phase.resize(b.dim());
        for (std::size_t c = 0; c < b.dim(); ++c) {
            r.row_of[c] = a.row_of[b.row_of[c]];
            r.phase[c] = a.phase[b.row_of[c]] * b.phase[c];
        }
        return r;
    }
    static Monomial kron(const Monomial& a, const Monomial& b) {
        Monomial r;
        std::size_t db = b.dim();
        r.row_of.resize(a.dim() * db);
        r.phase.resize(a.dim() * db);
        for (std::size_t ca = 0; ca < a.dim(); ++ca)
            for (std::size_t cb = 0; cb < db; ++cb) {
                r.row_of[ca * db + cb] = a.row_of[ca] * db + b.row_of[cb];
                r.phase[ca * db + cb] = a.phase[ca] * b.phase[cb];
            }
        return r;
    }
    Matrix<S> dense() const {
        Matrix<S> m(dim(), dim());
        for (std::size_t c = 0; c < dim(); ++c) m(row_of[c], c) = phase[c];
        return m;
    }
    Monomial transposed() const {
        Monomial r;
        r.row_of.resize(dim());
        r.phase.resize(dim());
        for (std::size_t c = 0; c < dim(); ++c) {
            r.row_of[row_of[c]] = c;
            r.phase[row_of[c]] = phase[c];
        }
        return r;
    }
    Monomial inverted() const {
        Monomial r;
        r.row_of.resize(dim());
        r.phase.resize(dim());
        for (std::size_t c = 0; c < dim(); ++c) {
            r.row_of[row_of[c]] = c;
            r.phase[row_of[c]] = scalar_traits<S>::one() / phase[c];
        }
        return r;
    }
};

template <class S>
class SpinModule;
template <class S>
using SpinModulePtr = std::shared_ptr<const SpinModule<S>>;

/// Spinor in a fixed module basis.
template <class S>
struct Spinor {
    SpinModulePtr<S> module;
    std::vector<S> c;

    Spinor() = default;
    Spinor(SpinModulePtr<S> mod, std::vector<S> coef) : module(std::move(mod)), c(std::move(coef)) {}

    bool is_zero() const {
        for (const auto& x : c)
            if (!scalar_traits<S>::is_negligible(x)) return false;
        return true;
    }
    double approx_max() const {
        double m = 0;
        for (const auto& x : c) m = std::max(m, scalar_traits<S>::approx_abs(x));
        return m;
    }
    friend Spinor operator+(const Spinor& a, const Spinor& b) {
        Spinor r = a;
        for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] += b.c[i];
        return r;
    }
    friend Spinor operator-(const Spinor& a, const Spinor& b) {
        Spinor r = a;
        for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] -= b.c[i];
        return r;
    }
    friend Spinor operator-(const Spinor& a) {
        Spinor r = a;
        for (auto& x : r.c) x = -x;
        return r;
    }
    friend Spinor operator*(const S& s, const Spinor& a) {
        Spinor r = a;
        for (auto& x : r.c) x = s * x;
        return r;
    }
};

enum class Chirality { plus, minus, none };

/// Gamma-matrix realisation of Cliff(n,0) on C^(2^m), convention "recursive-v1":
///   gamma_{2k-1} = s3^(k-1) (x) i s1 (x) 1,   gamma_{2k} = s3^(k-1) (x) i s2 (x) 1,
///   gamma_{2m+1} = i s3^m  (n odd),
/// together with the chirality operator, charge conjugation and the standard hermitian q.
template <class S>
class SpinModule {
public:
    using traits = scalar_traits<S>;

    int n = 0, m = 0;
    std::size_t dim = 0;
    std::vector<Monomial<S>> gamma;
    Monomial<S> chirality;          // +1/-1 diagonal for n even; identity for n odd
    Monomial<S> cc;                 // charge conjugation matrix (A(Psi) = cc * conj(Psi))
    S a_square;                     // A^2 = a_square * Id = (-1)^(m(m+1)/2)
    std::string convention = "recursive-v1";

    std::vector<int> chi_sign;      // per-basis-vector chirality (+1/-1), n even

    static SpinModulePtr<S> build(int n_);

    Spinor<S> make(std::vector<S> coef, SpinModulePtr<S> self) const {
        if (coef.size() != dim) throw std::invalid_argument("Spinor: coefficient size mismatch");
        return Spinor<S>(std::move(self), std::move(coef));
    }
    Spinor<S> basis_spinor(SpinModulePtr<S> self, std::size_t i) const {
        std::vector<S> v(dim, traits::zero());
        v[i] = traits::one();
        return Spinor<S>(std::move(self), std::move(v));
    }

    /// First standard basis vector of Delta_+ (pure for n <= 6); deterministic.
    Spinor<S> auto_pure(SpinModulePtr<S> self) const {
        if (n % 2) throw std::domain_error("auto_pure: n must be even");
        for (std::size_t i = 0; i < dim; ++i)
            if (chi_sign[i] > 0) return basis_spinor(std::move(self), i);
        throw std::logic_error("auto_pure: no positive-chirality basis vector");
    }

    Chirality chirality_of(const Spinor<S>& psi) const {
        if (n % 2) return Chirality::none;
        bool plus = false, minus = false;
        for (std::size_t i = 0; i < dim; ++i)
            if (!traits::is_negligible(psi.c[i])) (chi_sign[i] > 0 ? plus : minus) = true;
        if (plus && minus) return Chirality::none;
        return plus ? Chirality::plus : Chirality::minus;
    }

    /// kappa(e_K) = gamma_{k1} ... gamma_{kr} (ascending) as a monomial matrix.
    Monomial<S> blade_monomial(Blade b) const {
        Monomial<S> M = Monomial<S>::identity(dim);
        for (int i = 1; i <= n; ++i)
            if (b & (Blade{1} << (i - 1))) M = M * gamma[i - 1];
        return M;
    }
    /// q(A(xi_a), xi_c) as a monomial matrix (a = column index of cc's nonzero rows).
    Monomial<S> a_bilinear_monomial() const {
        Monomial<S> g;
        g.row_of.resize(dim);
        g.phase.resize(dim);
        // G_{ac} = conj(C_{ca}); nonzero where c = row index of column a of C
        for (std::size_t a = 0; a < dim; ++a) {
            g.row_of[cc.row_of[a]] = a;
            g.phase[cc.row_of[a]] = scalar_traits<S>::conj(cc.phase[a]);
        }
        return g;
    }
};

/// Clifford action of a form as a dense matrix (monomial accumulation).
template <class S>
Matrix<S> kappa_matrix(const MultiForm<S>& a, const SpinModule<S>& mod) {
    Matrix<S> M(mod.dim, mod.dim);
    for (const auto& [b, c] : a.terms()) {
        Monomial<S> mono = mod.blade_monomial(b);
        for (std::size_t col = 0; col < mod.dim; ++col)
            M(mono.row_of[col], col) += c * mono.phase[col];
    }
    return M;
}

template <class S>
SpinModulePtr<S> SpinModule<S>::build(int n_) {
    if (n_ < 2 || n_ > 8) throw std::invalid_argument("build_spin_module: n must be in 2..8");
    auto mod = std::make_shared<SpinModule<S>>();
    SpinModule<S>& M = *mod;
    M.n = n_;
    M.m = n_ / 2;
    M.dim = std::size_t{1} << M.m;

    const S one = traits::one(), img = traits::imag_unit();
    Monomial<S> s1, s2, s3, id2;
    s1.row_of = {1, 0};
    s1.phase = {one, one};
    s2.row_of = {1, 0};
    s2.phase = {img, -img};
    s3.row_of = {0, 1};
    s3.phase = {one, -one};
    id2 = Monomial<S>::identity(2);

    auto scaled = [](const Monomial<S>& a, const S& s) {
        Monomial<S> r = a;
        for (auto& p : r.phase) p = s * p;
        return r;
    };
    auto build_slot = [&](int slot, const Monomial<S>& mid) {
        Monomial<S> acc = Monomial<S>::identity(1);
        for (int j = 1; j <= M.m; ++j) {
            const Monomial<S>& factor = (j < slot) ? s3 : (j == slot ? mid : id2);
            acc = Monomial<S>::kron(acc, factor);
        }
        return acc;
    };
    for (int k = 1; k <= M.m; ++k) {
        M.gamma.push_back(build_slot(k, scaled(s1, img)));
        M.gamma.push_back(build_slot(k, scaled(s2, img)));
    }
    if (n_ % 2 == 1) {
        Monomial<S> acc = Monomial<S>::identity(1);
        for (int j = 1; j <= M.m; ++j) acc = Monomial<S>::kron(acc, s3);
        M.gamma.push_back(scaled(acc, img));
    }

    // chirality: kappa(e_1...e_n) / (mhat i^m), n even
    if (n_ % 2 == 0) {
        Monomial<S> vol = Monomial<S>::identity(M.dim);
        for (int k = n_; k >= 1; --k) vol = M.gamma[k - 1] * vol;  // gamma_1 ... gamma_n
        int mh = ((M.m * (M.m + 1) / 2) % 2) ? -1 : 1;
        S mhat = traits::from_int(mh);
        S im = one;
        for (int j = 0; j < M.m; ++j) im = im * img;
        S norm = traits::one() / (mhat * im);
        Monomial<S> chi = scaled(vol, norm);
        M.chirality = chi;
        M.chi_sign.resize(M.dim);
        for (std::size_t i = 0; i < M.dim; ++i) {
            if (chi.row_of[i] != i) throw std::logic_error("spin module: chirality not diagonal");
            if (chi.phase[i] == one)
                M.chi_sign[i] = 1;
            else if (chi.phase[i] == -one)
                M.chi_sign[i] = -1;
            else
                throw std::logic_error("spin module: chirality eigenvalue not +-1");
        }
    } else {
        M.chirality = Monomial<S>::identity(M.dim);
        M.chi_sign.assign(M.dim, 0);
    }

    // charge conjugation: C = gamma_2 gamma_4 ... gamma_{2m}, normalised so that the first
    // nonzero entry (row-major) is +1; equivariance asserted below.
    Monomial<S> C = Monomial<S>::identity(M.dim);
    for (int k = 2; k <= 2 * M.m; k += 2) C = M.gamma[k - 1] * C;
    {
        // first nonzero entry row-major = entry in column c with minimal (row_of[c], c)
        std::size_t best_c = 0, best_r = C.row_of[0];
        for (std::size_t c = 1; c < M.dim; ++c)
            if (C.row_of[c] < best_r || (C.row_of[c] == best_r && c < best_c)) {
                best_r = C.row_of[c];
                best_c = c;
            }
        C = scaled(C, traits::one() / C.phase[best_c]);
    }
    M.cc = C;

    // A^2 = C conj(C)
    {
        Monomial<S> Cc = C;
        for (auto& p : Cc.phase) p = traits::conj(p);
        Monomial<S> A2 = C * Cc;
        S v = A2.phase[0];
        for (std::size_t i = 0; i < M.dim; ++i)
            if (A2.row_of[i] != i || !traits::is_zero(A2.phase[i] - v))
                throw std::logic_error("spin module: A^2 not scalar");
        M.a_square = v;
        int expect = ((M.m * (M.m + 1) / 2) % 2) ? -1 : 1;
        if (!traits::is_zero(v - traits::from_int(expect)))
            throw std::logic_error("spin module: A^2 sign mismatch");
    }

    // Clifford relations and equivariance sanity (cheap; monomial algebra).
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j <= i; ++j) {
            Monomial<S> ab = M.gamma[i] * M.gamma[j];
            Monomial<S> ba = M.gamma[j] * M.gamma[i];
            for (std::size_t c = 0; c < M.dim; ++c) {
                if (ab.row_of[c] != ba.row_of[c])
                    throw std::logic_error("spin module: Clifford relation failed");
                S sum = ab.phase[c] + ba.phase[c];
                S expect = (i == j && ab.row_of[c] == c) ? traits::from_int(-2) : traits::zero();
                if (!traits::is_zero(sum - expect))
                    throw std::logic_error("spin module: Clifford relation failed");
            }
        }
    int sgn = (M.m % 2 == 0) ? -1 : 1;  // (-1)^(m+1)
    for (int k = 0; k < n_; ++k) {
        Monomial<S> g = M.gamma[k];
        Monomial<S> gc = g;
        for (auto& p : gc.phase) p = traits::conj(p);
        Monomial<S> lhs = M.cc * gc;
        Monomial<S> rhs = g * M.cc;
        for (std::size_t c = 0; c < M.dim; ++c)
            if (lhs.row_of[c] != rhs.row_of[c] ||
                !traits::is_zero(lhs.phase[c] - traits::from_int(sgn) * rhs.phase[c]))
                throw std::logic_error("spin module: charge conjugation equivariance failed");
    }
    return mod;
}

template <class S>
SpinModulePtr<S> build_spin_module(int n) {
    return SpinModule<S>::build(n);
}

/// Hermitian product, conjugate-linear in the first argument.
template <class S>
S q_product(const Spinor<S>& a, const Spinor<S>& b) {
    S r = scalar_traits<S>::zero();
    for (std::size_t i = 0; i < a.c.size(); ++i) r += scalar_traits<S>::conj(a.c[i]) * b.c[i];
    return r;
}

/// Charge conjugation A(Psi) = C conj(Psi); conjugate-linear.
template <class S>
Spinor<S> charge_conjugate(const Spinor<S>& psi) {
    std::vector<S> v(psi.c.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = scalar_traits<S>::conj(psi.c[i]);
    return Spinor<S>(psi.module, psi.module->cc.apply(v));
}

/// Spin(n)-invariant bilinear form A(Psi, Phi) = q(A(Psi), Phi).
template <class S>
S a_bilinear(const Spinor<S>& psi, const Spinor<S>& phi) {
    return q_product(charge_conjugate(psi), phi);
}

/// Clifford action of a frame vector e_i.
template <class S>
Spinor<S> gamma_act(int i, const Spinor<S>& psi) {
    return Spinor<S>(psi.module, psi.module->gamma[i - 1].apply(psi.c));
}

/// Clifford action of a vector with coefficient vector X.
template <class S>
Spinor<S> vector_act(const std::vector<S>& X, const Spinor<S>& psi) {
    std::vector<S> acc(psi.c.size(), scalar_traits<S>::zero());
    for (std::size_t i = 0; i < X.size(); ++i) {
        if (scalar_traits<S>::is_zero(X[i])) continue;
        auto g = psi.module->gamma[i].apply(psi.c);
        for (std::size_t r = 0; r < acc.size(); ++r) acc[r] += X[i] * g[r];
    }
    return Spinor<S>(psi.module, std::move(acc));
}

/// kappa(e_K) Psi = gamma_{k1} ... gamma_{kr} Psi, indices ascending.
template <class S>
Spinor<S> blade_act(Blade b, const Spinor<S>& psi) {
    std::vector<S> v = psi.c;
    const auto& mod = *psi.module;
    for (int i = mod.n; i >= 1; --i)
        if (b & (Blade{1} << (i - 1))) v = mod.gamma[i - 1].apply(v);
    return Spinor<S>(psi.module, std::move(v));
}

/// Clifford action of a mixed-degree (complex) form through kappa.
template <class S>
Spinor<S> clifford_act(const MultiForm<S>& a, const Spinor<S>& psi) {
    if (a.dimension() != psi.module->n)
        throw std::invalid_argument("clifford_act: dimension mismatch");
    std::vector<S> acc(psi.c.size(), scalar_traits<S>::zero());
    for (const auto& [b, c] : a.terms()) {
        auto v = blade_act(b, psi).c;
        for (std::size_t r = 0; r < acc.size(); ++r) acc[r] += c * v[r];
    }
    return Spinor<S>(psi.module, std::move(acc));
}

template <class S>
struct PurityResult {
    bool is_pure = false;
    int annihilator_dimension = 0;
    std::vector<std::vector<S>> annihilator_basis;  // complex vectors z with z . Psi = 0
};

/// Annihilator {z in C^n : z . Psi = 0}; pure iff maximal isotropic (dim m, n even).
template <class S>
PurityResult<S> purity_test(const Spinor<S>& psi) {
    const auto& mod = *psi.module;
    if (psi.is_zero()) throw std::invalid_argument("purity_test: zero spinor");
    Matrix<S> M(mod.dim, mod.n);
    for (int j = 1; j <= mod.n; ++j) {
        auto col = gamma_act(j, psi).c;
        for (std::size_t r = 0; r < mod.dim; ++r) M(r, j - 1) = col[r];
    }
    PurityResult<S> res;
    res.annihilator_basis = kernel_basis(M);
    res.annihilator_dimension = static_cast<int>(res.annihilator_basis.size());
    res.is_pure = (mod.n % 2 == 0) && res.annihilator_dimension == mod.m;
    return res;
}

/// Complex structure J with X . Psi = i JX . Psi for a pure spinor; J real, J^2 = -Id.
template <class S>
Matrix<S> complex_structure_from_pure(const Spinor<S>& psi) {
    using traits = scalar_traits<S>;
    const auto& mod = *psi.module;
    auto pur = purity_test(psi);
    if (!pur.is_pure) throw std::invalid_argument("complex_structure_from_pure: spinor not pure");
    const int n = mod.n;
    // real unknowns per column: split i*gamma_j Psi and gamma_k Psi into real/imag rows
    Matrix<S> A(2 * mod.dim, n);
    for (int j = 1; j <= n; ++j) {
        auto col = gamma_act(j, psi).c;
        for (std::size_t r = 0; r < mod.dim; ++r) {
            S v = traits::imag_unit() * col[r];
            A(r, j - 1) = traits::real(v);
            A(mod.dim + r, j - 1) = traits::imag(v);
        }
    }
    Matrix<S> J(n, n);
    for (int k = 1; k <= n; ++k) {
        auto col = gamma_act(k, psi).c;
        std::vector<S> b(2 * mod.dim);
        for (std::size_t r = 0; r < mod.dim; ++r) {
            b[r] = traits::real(col[r]);
            b[mod.dim + r] = traits::imag(col[r]);
        }
        auto x = solve(A, b);
        for (int j = 1; j <= n; ++j) J(j - 1, k - 1) = x[j - 1];
    }
    // verify J^2 = -Id
    Matrix<S> J2 = J * J;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            S expect = (i == j) ? traits::from_int(-1) : traits::zero();
            if (!traits::is_negligible(J2(i, j) - expect))
                throw std::domain_error("complex_structure_from_pure: J^2 != -Id");
        }
    return J;
}

/// Fierzing map: coefficient on e^K is q(A(PsiL), kappa(e_K) PsiR).
template <class S>
MultiForm<S> fierz(const Spinor<S>& psiL, const Spinor<S>& psiR) {
    if (psiL.module.get() != psiR.module.get())
        throw std::invalid_argument("fierz: module mismatch");
    const auto& mod = *psiL.module;
    auto u = charge_conjugate(psiL);
    MultiForm<S> out(mod.n);
    const Blade top = (Blade{1} << mod.n) - 1;
    for (Blade b = 0; b <= top; ++b) {
        auto v = blade_act(b, psiR);
        S c = q_product(u, v);
        out.add_term(b, std::move(c));
    }
    return out;
}

/// Rank-1 element of Delta (x) Delta as a dim x dim coefficient matrix T_ab = Psi_a Phi_b.
template <class S>
Matrix<S> tensor_square(const Spinor<S>& psi, const Spinor<S>& phi) {
    const auto d = psi.c.size();
    Matrix<S> T(d, d);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) T(a, b) = psi.c[a] * phi.c[b];
    return T;
}

/// Fierz transform of a general tensor T in Delta (x) Delta:
/// coefficient on e^K is sum_ab T_ab q(A(xi_a), kappa(e_K) xi_b) = sum_b T(row, b) phase.
template <class S>
MultiForm<S> fierz_tensor(const Matrix<S>& T, const SpinModulePtr<S>& mod) {
    MultiForm<S> out(mod->n);
    const Blade top = (Blade{1} << mod->n) - 1;
    const std::size_t d = mod->dim;
    Monomial<S> G = mod->a_bilinear_monomial();
    for (Blade b = 0; b <= top; ++b) {
        Monomial<S> M = G * mod->blade_monomial(b);  // M(a, c) = q(A(xi_a), kappa xi_c)
        S c = scalar_traits<S>::zero();
        for (std::size_t col = 0; col < d; ++col) c += T(M.row_of[col], col) * M.phase[col];
        out.add_term(b, std::move(c));
    }
    return out;
}

/// Inverse of the fierzing isomorphism (n even): returns T with fierz_tensor(T) = F.
/// Uses (1/d) kappa(hat F) = endomorphism xi -> q(A(row), xi) col.
template <class S>
Matrix<S> fierz_inverse(const MultiForm<S>& F, const SpinModulePtr<S>& mod) {
    using traits = scalar_traits<S>;
    if (mod->n % 2 == 1)
        throw std::domain_error("fierz_inverse: n odd -- only parity-projected inverse exists");
    if (F.dimension() != mod->n) throw std::invalid_argument("fierz_inverse: dimension mismatch");
    const std::size_t d = mod->dim;
    // E = (1/d) kappa(hat F); E_{bc} = sum_a T_{ab} G_{ac} with G_{ac} = q(A(xi_a), xi_c),
    // so T = (G^T)^{-1} E^T; G is a unitary monomial, inverted directly.
    Matrix<S> E = traits::from_ratio(1, (long)d) * kappa_matrix(hat(F), *mod);
    Monomial<S> Ginv_T = mod->a_bilinear_monomial().transposed().inverted();
    Matrix<S> ET = E.transposed();
    Matrix<S> T(d, d);
    for (std::size_t col = 0; col < d; ++col) {
        std::vector<S> v(d);
        for (std::size_t r = 0; r < d; ++r) v[r] = ET(r, col);
        auto w = Ginv_T.apply(v);
        for (std::size_t r = 0; r < d; ++r) T(r, col) = w[r];
    }
    return T;
}

/// Adapted unitary frame z_k = (f_k - i J f_k)/2 for a complex structure J (exact when the
/// adapted orthogonal frame exists over the scalar field; otherwise needs float mode).
template <class S>
std::vector<std::vector<S>> unitary_frame(const Matrix<S>& J) {
    using traits = scalar_traits<S>;
    const int n = static_cast<int>(J.rows());
    std::vector<std::vector<S>> fs;        // real orthonormal, J-adapted: f1, Jf1 ... implicit
    std::vector<std::vector<S>> used_dirs; // f_k and J f_k
    auto dot = [&](const std::vector<S>& a, const std::vector<S>& b) {
        S r = traits::zero();
        for (int i = 0; i < n; ++i) r += a[i] * b[i];
        return r;
    };
    auto apply_J = [&](const std::vector<S>& v) {
        std::vector<S> r(n, traits::zero());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) r[i] += J(i, j) * v[j];
        return r;
    };
    for (int k = 0; k < n / 2; ++k) {
        // next coordinate axis not in the span of previous (f_j, J f_j); orthogonalize
        std::vector<S> f;
        for (int i = 0; i < n; ++i) {
            std::vector<S> cand(n, traits::zero());
            cand[i] = traits::one();
            for (const auto& u : used_dirs) {
                S p = dot(cand, u);
                for (int j = 0; j < n; ++j) cand[j] -= p * u[j];
            }
            S nn = dot(cand, cand);
            if (!traits::is_negligible(nn)) {
                auto s = traits::try_sqrt_real(nn);
                if (!s) throw std::domain_error(
                    "unitary_frame: adapted frame needs an irrational normaliser; use float mode");
                for (int j = 0; j < n; ++j) cand[j] = cand[j] / *s;
                f = cand;
                break;
            }
        }
        if (f.empty()) throw std::logic_error("unitary_frame: frame construction failed");
        auto Jf = apply_J(f);
        used_dirs.push_back(f);
        used_dirs.push_back(Jf);
        fs.push_back(f);
    }
    // z_k = (f_k - i J f_k)/2
    std::vector<std::vector<S>> zs;
    S half = traits::from_ratio(1, 2);
    for (const auto& f : fs) {
        auto Jf = apply_J(f);
        std::vector<S> z(n);
        for (int i = 0; i < n; ++i) z[i] = half * (f[i] - traits::imag_unit() * Jf[i]);
        zs.push_back(std::move(z));
    }
    return zs;
}

/// Block labels of the SU(m)-representation decomposition of Delta.
enum class SUBlock { trivial_psi, cm, cm_bar, trivial_apsi, w, v, v_bar, w_tilde };

inline std::string su_block_name(SUBlock b) {
    switch (b) {
        case SUBlock::trivial_psi: return "C";
        case SUBlock::cm: return "C^m";
        case SUBlock::cm_bar: return "bar(C^m)";
        case SUBlock::trivial_apsi: return "C'";
        case SUBlock::w: return "W";
        case SUBlock::v: return "V";
        case SUBlock::v_bar: return "bar(V)";
        case SUBlock::w_tilde: return "W~";
    }
    return "?";
}

template <class S>
struct SUBasis {
    Spinor<S> base;                       // unit pure spinor Psi
    Matrix<S> J;                          // induced complex structure
    std::vector<std::vector<S>> z;        // unitary frame
    std::vector<Spinor<S>> vectors;       // orthonormal basis of Delta
    std::vector<SUBlock> block;           // block label per basis vector
    std::vector<Chirality> chi;           // chirality per basis vector
};

/// Orthonormal SU(m)-adapted basis of Delta for m in {3,4}:
///   m=3: Delta_+ = C Psi + C^3 (z_k A Psi), Delta_- = bar(C^3) (zbar_k Psi) + C A Psi, V = 0.
///   m=4: Delta_+ = C Psi + W (zbar_i zbar_j Psi) + C A Psi, Delta_- = bar(C^4) + C^4, W~ = 0.
template <class S>
SUBasis<S> su_basis(const Spinor<S>& psi) {
    using traits = scalar_traits<S>;
    const auto& mod = *psi.module;
    if (mod.m != 3 && mod.m != 4)
        throw std::domain_error("su_basis: decomposition implemented for m in {3,4}");
    S norm = q_product(psi, psi);
    if (!traits::is_negligible(norm - traits::one()))
        throw std::invalid_argument("su_basis: spinor must be unit norm");
    SUBasis<S> B;
    B.base = psi;
    B.J = complex_structure_from_pure(psi);
    B.z = unitary_frame(B.J);
    auto apsi = charge_conjugate(psi);
    auto act = [&](const std::vector<S>& z, const Spinor<S>& s) { return vector_act(z, s); };
    auto zbar = [&](const std::vector<S>& z) {
        std::vector<S> r(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) r[i] = traits::conj(z[i]);
        return r;
    };
    auto push = [&](Spinor<S> s, SUBlock bl) {
        B.vectors.push_back(std::move(s));
        B.block.push_back(bl);
        B.chi.push_back(mod.chirality_of(B.vectors.back()));
    };
    if (mod.m == 3) {
        push(psi, SUBlock::trivial_psi);
        for (const auto& zk : B.z) push(act(zk, apsi), SUBlock::cm);
        for (const auto& zk : B.z) push(act(zbar(zk), psi), SUBlock::cm_bar);
        push(apsi, SUBlock::trivial_apsi);
    } else {  // m = 4
        push(psi, SUBlock::trivial_psi);
        for (std::size_t i = 0; i < B.z.size(); ++i)
            for (std::size_t j = i + 1; j < B.z.size(); ++j)
                push(act(zbar(B.z[i]), act(zbar(B.z[j]), psi)), SUBlock::w);
        push(apsi, SUBlock::trivial_apsi);
        for (const auto& zk : B.z) push(act(zbar(zk), psi), SUBlock::cm_bar);
        for (const auto& zk : B.z) push(act(zk, apsi), SUBlock::cm);
    }
    // orthonormality under q
    for (std::size_t i = 0; i < B.vectors.size(); ++i)
        for (std::size_t j = 0; j < B.vectors.size(); ++j) {
            S v = q_product(B.vectors[i], B.vectors[j]);
            S expect = (i == j) ? traits::one() : traits::zero();
            if (!traits::is_negligible(v - expect))
                throw std::domain_error("su_basis: basis not orthonormal under q");
        }
    return B;
}

/// Corollary-style contractions of Psi (x) Phi with q(xi, .) in either slot:
/// first = q(xi,Psi) Phi computed as (1/2^m) hat([Psi x Phi]) . A(xi);
/// second = q(xi,Phi) Psi via the m-parity branch.
template <class S>
std::pair<Spinor<S>, Spinor<S>> bilinear_contractions(const Spinor<S>& psi, const Spinor<S>& phi,
                                                      const Spinor<S>& xi) {
    using traits = scalar_traits<S>;
    if (psi.module.get() != phi.module.get() || psi.module.get() != xi.module.get())
        throw std::invalid_argument("bilinear_contractions: module mismatch");
    const auto& mod = *psi.module;
    S inv_d = traits::from_ratio(1, (long)mod.dim);
    int mh = ((mod.m * (mod.m + 1) / 2) % 2) ? -1 : 1;
    auto F = fierz(psi, phi);
    auto axi = charge_conjugate(xi);
    Spinor<S> first = inv_d * clifford_act(hat(F), axi);
    Spinor<S> second =
        (mod.m % 2 == 1)
            ? (traits::from_int(mh) * inv_d) * clifford_act(F, axi)
            : (traits::from_int(mh) * inv_d) * clifford_act(tilde(F), axi);
    return {first, second};
}

}  // namespace gg
