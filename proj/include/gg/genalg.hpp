#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gg/exterior.hpp"
#include "gg/linalg.hpp"
#include "gg/multiform.hpp"
#include "gg/spin.hpp"

namespace gg {

/// Element X + xi of W + W*; inner product (v,v) = xi(X) (polarised (w,xi) = xi(w)/2).
template <class S>
struct GenVector {
    std::vector<S> vec;  // X
    std::vector<S> cov;  // xi, frame coefficients

    int dimension() const { return static_cast<int>(vec.size()); }
};

template <class S>
S gen_inner(const GenVector<S>& a, const GenVector<S>& b) {
    S r = scalar_traits<S>::zero();
    for (std::size_t i = 0; i < a.vec.size(); ++i)
        r += a.cov[i] * b.vec[i] + b.cov[i] * a.vec[i];
    return scalar_traits<S>::from_ratio(1, 2) * r;
}

/// (X + xi) . rho = -X _| rho + xi ^ rho.
template <class S>
MultiForm<S> gen_act(const GenVector<S>& v, const MultiForm<S>& rho) {
    if (v.dimension() != rho.dimension()) throw std::invalid_argument("gen_act: dimension mismatch");
    MultiForm<S> xi(rho.dimension());
    for (int i = 1; i <= rho.dimension(); ++i)
        if (!scalar_traits<S>::is_zero(v.cov[i - 1])) xi.add_term(Blade{1} << (i - 1), v.cov[i - 1]);
    return wedge(xi, rho) - contract(v.vec, rho);
}

/// B-field transform on spinors: e^B ^ rho.
template <class S>
MultiForm<S> b_transform(const MultiForm<S>& B, const MultiForm<S>& rho) {
    return exp_wedge(B, rho);
}

/// B-field transform on generalised vectors: X + xi -> X + (xi + X _| B); matches the
/// spinor-side e^B^ exactly (gen_act(e^B v, e^B . rho) = e^B . gen_act(v, rho)).
template <class S>
GenVector<S> b_transform(const MultiForm<S>& B, const GenVector<S>& v) {
    GenVector<S> r = v;
    MultiForm<S> add = contract(v.vec, B);
    for (int i = 1; i <= v.dimension(); ++i)
        r.cov[i - 1] += add.coefficient(Blade{1} << (i - 1));
    return r;
}

/// GL(n)+ action on spinors: A . rho = sqrt(det A) A* rho, where A* is the standard left
/// action on forms (pullback by A^{-1}). Together with the sqrt(det) weight this is the
/// restriction of the Spin(n,n)+ action, so the invariant pairing stays fixed.
template <class S>
MultiForm<S> gl_act(const Matrix<S>& A, const MultiForm<S>& rho) {
    using traits = scalar_traits<S>;
    S det = determinant(A);
    if (!traits::is_positive(det)) throw std::invalid_argument("gl_act: det A must be positive");
    auto root = traits::try_sqrt_real(det);
    if (!root)
        throw std::domain_error("gl_act: sqrt(det A) not representable; use float mode");
    return (*root) * substitute_coframe(inverse(A), rho);
}

/// The SO(n,n) image of A in GL(n)+: X + xi -> AX + A^{-T} xi.
template <class S>
GenVector<S> gl_act(const Matrix<S>& A, const GenVector<S>& v) {
    GenVector<S> r;
    const int n = v.dimension();
    r.vec.assign(n, scalar_traits<S>::zero());
    r.cov.assign(n, scalar_traits<S>::zero());
    Matrix<S> Ait = inverse(A).transposed();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            r.vec[i] += A(i, j) * v.vec[j];
            r.cov[i] += Ait(i, j) * v.cov[j];
        }
    return r;
}

/// Generalised metric: the pair (g, B) with lifts X -> X~pm = X + (B(X) +- g(X)).
template <class S>
struct GenMetric {
    MetricData<S> g;
    MultiForm<S> B;  // real 2-form

    GenMetric(MetricData<S> g_, MultiForm<S> B_) : g(std::move(g_)), B(std::move(B_)) {
        if (B.dimension() != g.dimension())
            throw std::invalid_argument("GenMetric: dimension mismatch");
        for (const auto& [b, c] : B.terms())
            if (blade_degree(b) != 2 || !scalar_traits<S>::is_real(c))
                throw std::invalid_argument("GenMetric: B must be a real 2-form");
    }

    int dimension() const { return g.dimension(); }

    GenVector<S> lift(const std::vector<S>& X, int sign) const {
        GenVector<S> v;
        v.vec = X;
        auto gx = g.flat(X);
        auto bx = contract(X, B);
        v.cov.resize(X.size());
        for (int i = 1; i <= dimension(); ++i) {
            S b = bx.coefficient(Blade{1} << (i - 1));
            v.cov[i - 1] = (sign >= 0) ? b + gx[i - 1] : b - gx[i - 1];
        }
        return v;
    }
    GenVector<S> lift_dir(int i, int sign) const {
        std::vector<S> X(dimension(), scalar_traits<S>::zero());
        X[i - 1] = scalar_traits<S>::one();
        return lift(X, sign);
    }
};

template <class S>
GenMetric<S> gen_metric_from(MetricData<S> g, MultiForm<S> B) {
    return GenMetric<S>(std::move(g), std::move(B));
}

/// Multiplicative extension of X -> X~pm through gen_act, blade-by-blade ascending.
template <class S>
MultiForm<S> act_pm(const MultiForm<S>& F, const MultiForm<S>& rho, int sign,
                    const GenMetric<S>& gm) {
    if (F.dimension() != rho.dimension() || gm.dimension() != rho.dimension())
        throw std::invalid_argument("act_pm: dimension mismatch");
    MultiForm<S> out(rho.dimension());
    for (const auto& [b, c] : F.terms()) {
        MultiForm<S> cur = rho;
        for (int i = rho.dimension(); i >= 1; --i)
            if (b & (Blade{1} << (i - 1))) cur = gen_act(gm.lift_dir(i, sign), cur);
        out = out + c * cur;
    }
    return out;
}

/// Generalised complex structure as a real 2n x 2n matrix on W + W* (block order [X; xi]).
template <class S>
struct GenComplexStructure {
    Matrix<S> J;  // 2n x 2n

    int dimension() const { return static_cast<int>(J.rows()) / 2; }
};

/// Inner product matrix of (., .) on W + W* in the [X; xi] block basis.
template <class S>
Matrix<S> gen_inner_matrix(int n) {
    Matrix<S> ip(2 * n, 2 * n);
    S half = scalar_traits<S>::from_ratio(1, 2);
    for (int i = 0; i < n; ++i) {
        ip(i, n + i) = half;
        ip(n + i, i) = half;
    }
    return ip;
}

template <class S>
bool is_gen_isometry(const Matrix<S>& M) {
    const int n2 = static_cast<int>(M.rows());
    Matrix<S> ip = gen_inner_matrix<S>(n2 / 2);
    return (M.transposed() * ip * M - ip).is_zero();
}

/// Annihilator of rho in (W + W*) (x) C: kernel of v -> v . rho.
template <class S>
std::vector<std::vector<S>> spinor_annihilator(const MultiForm<S>& rho) {
    const int n = rho.dimension();
    const std::size_t rows = std::size_t{1} << n;
    Matrix<S> M(rows, 2 * n);
    for (int i = 1; i <= n; ++i) {
        GenVector<S> v;
        v.vec.assign(n, scalar_traits<S>::zero());
        v.cov.assign(n, scalar_traits<S>::zero());
        v.vec[i - 1] = scalar_traits<S>::one();
        auto img = gen_act(v, rho).dense();
        for (std::size_t r = 0; r < rows; ++r) M(r, i - 1) = img[r];
        v.vec[i - 1] = scalar_traits<S>::zero();
        v.cov[i - 1] = scalar_traits<S>::one();
        img = gen_act(v, rho).dense();
        for (std::size_t r = 0; r < rows; ++r) M(r, n + i - 1) = img[r];
    }
    return kernel_basis(M);
}

/// Generalised complex structure from a pure form spinor: +i-eigenspace = annihilator.
template <class S>
GenComplexStructure<S> gcs_from_pure(const MultiForm<S>& rho) {
    using traits = scalar_traits<S>;
    const int n = rho.dimension();
    S pairing = mukai_pair(rho, rho.conjugated());
    if (traits::is_negligible(pairing))
        throw std::domain_error("gcs_from_pure: <rho, bar rho> vanishes; no induced structure");
    auto ann = spinor_annihilator(rho);
    if (static_cast<int>(ann.size()) != n)
        throw std::domain_error("gcs_from_pure: rho is not pure (annihilator dimension != n)");
    // J = [iV | -i bar V] [V | bar V]^{-1}
    Matrix<S> V(2 * n, 2 * n);
    Matrix<S> W(2 * n, 2 * n);
    for (int c = 0; c < n; ++c)
        for (int r = 0; r < 2 * n; ++r) {
            V(r, c) = ann[c][r];
            V(r, n + c) = traits::conj(ann[c][r]);
            W(r, c) = traits::imag_unit() * ann[c][r];
            W(r, n + c) = -traits::imag_unit() * traits::conj(ann[c][r]);
        }
    Matrix<S> J = W * inverse(V);
    GenComplexStructure<S> out{Matrix<S>(2 * n, 2 * n)};
    for (int r = 0; r < 2 * n; ++r)
        for (int c = 0; c < 2 * n; ++c) {
            if (!traits::is_real(J(r, c)))
                throw std::domain_error("gcs_from_pure: induced structure not real");
            out.J(r, c) = traits::real(J(r, c));
        }
    Matrix<S> J2 = out.J * out.J + Matrix<S>::identity(2 * n);
    if (!J2.is_zero()) throw std::domain_error("gcs_from_pure: J^2 != -Id");
    if (!is_gen_isometry(out.J)) throw std::domain_error("gcs_from_pure: not an isometry");
    return out;
}

/// Result of the generalised-Kaehler compatibility check for a pair of structures.
template <class S>
struct KahlerCheck {
    bool commute = false;
    bool metric_ok = false;             // -J0 J1 is an involutive isometry with definite eigenspaces
    int positive_eigenvalue = 0;        // eigenvalue (+1/-1) of -J0 J1 on the positive-definite space
    std::optional<GenMetric<S>> metric; // extracted (g, B)
    std::string reject_reason;
};

/// Verifies J0 J1 = J1 J0 and that K = -J0 J1 is an involutive isometry whose definite
/// eigenspace is a generalised metric; extracts (g, B) from the positive-definite side
/// V+ = { X + (B(X) + g(X)) } and records which eigenvalue carries it.
template <class S>
KahlerCheck<S> check_gen_kahler(const GenComplexStructure<S>& J0, const GenComplexStructure<S>& J1) {
    using traits = scalar_traits<S>;
    KahlerCheck<S> out;
    const int n = J0.dimension();
    if (J1.dimension() != n) throw std::invalid_argument("check_gen_kahler: dimension mismatch");
    out.commute = (J0.J * J1.J - J1.J * J0.J).is_zero();
    if (!out.commute) {
        out.reject_reason = "structures do not commute";
        return out;
    }
    Matrix<S> K = traits::from_int(-1) * (J0.J * J1.J);
    if (!((K * K - Matrix<S>::identity(2 * n)).is_zero())) {
        out.reject_reason = "-J0 J1 is not an involution";
        return out;
    }
    if (!is_gen_isometry(K)) {
        out.reject_reason = "-J0 J1 is not an isometry";
        return out;
    }
    Matrix<S> ip = gen_inner_matrix<S>(n);
    for (int lam : {+1, -1}) {
        Matrix<S> shifted = K - traits::from_int(lam) * Matrix<S>::identity(2 * n);
        auto basis = kernel_basis(shifted);
        if (static_cast<int>(basis.size()) != n) continue;
        // Gram matrix of (.,.) on the eigenspace; positive definite <=> Sylvester minors > 0
        Matrix<S> G(n, n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                S v = traits::zero();
                for (int r = 0; r < 2 * n; ++r)
                    for (int c = 0; c < 2 * n; ++c) v += basis[a][r] * ip(r, c) * basis[b][c];
                G(a, b) = v;
            }
        bool posdef = true;
        for (int k = 1; k <= n && posdef; ++k) {
            Matrix<S> minor(k, k);
            for (int a = 0; a < k; ++a)
                for (int b = 0; b < k; ++b) minor(a, b) = G(a, b);
            posdef = traits::is_positive(determinant(minor));
        }
        if (!posdef) continue;
        // V+ = graph of P+ = B + g over W: columns [X; P X]
        Matrix<S> X(n, n), Xi(n, n);
        for (int c = 0; c < n; ++c)
            for (int r = 0; r < n; ++r) {
                X(r, c) = basis[c][r];
                Xi(r, c) = basis[c][n + r];
            }
        Matrix<S> P;
        try {
            P = Xi * inverse(X);
        } catch (const std::domain_error&) {
            out.reject_reason = "positive eigenspace is not a graph over W";
            return out;
        }
        Matrix<S> gsym(n, n);
        MultiForm<S> B(n);
        S half = traits::from_ratio(1, 2);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) gsym(r, c) = half * (P(r, c) + P(c, r));
        // skew part as a 2-form: (e_j _| B) = sum_k M_{kj} e^k with M = (P - P^T)/2,
        // and B = sum_{j<k} M_{kj} e^j ^ e^k
        for (int j = 0; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                S v = half * (P(k, j) - P(j, k));
                if (!traits::is_negligible(v))
                    B.add_term((Blade{1} << j) | (Blade{1} << k), v);
            }
        out.metric_ok = true;
        out.positive_eigenvalue = lam;
        out.metric.emplace(MetricData<S>(std::move(gsym)), std::move(B));
        return out;
    }
    out.reject_reason = "no positive-definite eigenspace of dimension n";
    return out;
}

/// Generalised SU(m)-structure: (g, B, alpha = dphi, scale c_phi, Psi_L, Psi_R) with the
/// derived pair rho0 = c_phi^-1 e^B ^ [A(Psi_L) x Psi_R], rho1 = c_phi^-1 e^B ^ [Psi_L x Psi_R].
template <class S>
struct SUmStructure {
    GenMetric<S> gm;
    MultiForm<S> alpha;  // closed 1-form representing dphi (closure checked by the model layer)
    S c_phi;             // e^{phi_0} > 0
    Spinor<S> psiL, psiR;
    MultiForm<S> rho0, rho1;
    bool straight = false;     // Psi_L = Psi_R
    bool su2_reducible = false;  // q(Psi_L, Psi_R) = 0

    int dimension() const { return gm.dimension(); }
    int m() const { return psiL.module->m; }
};

/// Length-constraint constant for the derived pair: <rho1, bar rho1> = c <rho0, bar rho0>
/// with c = (-1)^m for unit spinors (independent of the pair and of B).
template <class S>
S length_constant(int m) {
    return scalar_traits<S>::from_int((m % 2) ? -1 : 1);
}

template <class S>
SUmStructure<S> build_su_m(GenMetric<S> gm, MultiForm<S> alpha, S c_phi, Spinor<S> psiL,
                           Spinor<S> psiR) {
    using traits = scalar_traits<S>;
    if (!traits::is_positive(c_phi)) throw std::invalid_argument("build_su_m: c_phi must be > 0");
    const auto& mod = *psiL.module;
    if (mod.n != gm.dimension()) throw std::invalid_argument("build_su_m: dimension mismatch");
    for (const Spinor<S>* p : {&psiL, &psiR}) {
        S norm = q_product(*p, *p);
        if constexpr (traits::exact) {
            if (!traits::is_zero(norm - traits::one()))
                throw std::invalid_argument("build_su_m: spinors must be unit norm");
        } else {
            if (std::abs(traits::approx_abs(norm) - 1.0) > 1e-12)
                throw std::invalid_argument("build_su_m: spinors must be unit norm");
        }
        if (!purity_test(*p).is_pure)
            throw std::invalid_argument("build_su_m: spinors must be pure");
    }
    SUmStructure<S> s{std::move(gm), std::move(alpha), std::move(c_phi), psiL, psiR,
                      MultiForm<S>(mod.n), MultiForm<S>(mod.n)};
    S inv_cphi = traits::one() / s.c_phi;
    s.rho0 = inv_cphi * b_transform(s.gm.B, fierz(charge_conjugate(psiL), psiR));
    s.rho1 = inv_cphi * b_transform(s.gm.B, fierz(psiL, psiR));
    // parity: rho0 even, rho1 of parity (-1)^m
    if (s.rho0.parity() != Parity::even)
        throw std::domain_error("build_su_m: rho0 not even");
    Parity expect = (mod.m % 2) ? Parity::odd : Parity::even;
    if (s.rho1.parity() != expect)
        throw std::domain_error("build_su_m: rho1 parity mismatch");
    // length constraint with the derived constant
    S l0 = mukai_pair(s.rho0, s.rho0.conjugated());
    S l1 = mukai_pair(s.rho1, s.rho1.conjugated());
    if (traits::is_negligible(l0) || traits::is_negligible(l1))
        throw std::domain_error("build_su_m: vanishing pairing <rho, bar rho>");
    if (!traits::is_negligible(l1 - length_constant<S>(mod.m) * l0))
        throw std::domain_error("build_su_m: length constraint violated");
    s.straight = (psiL - psiR).is_zero();
    s.su2_reducible = traits::is_negligible(q_product(psiL, psiR));
    return s;
}

/// Full structure check: purity of both rho's, induced commuting pair, metric recovery.
template <class S>
struct SUmCheck {
    bool rho_pure = false;
    bool pairings_nonzero = false;
    bool kahler_commute = false;
    bool metric_recovered = false;
    int positive_eigenvalue = 0;
};

template <class S>
SUmCheck<S> su_m_full_check(const SUmStructure<S>& s) {
    using traits = scalar_traits<S>;
    SUmCheck<S> out;
    auto a0 = spinor_annihilator(s.rho0);
    auto a1 = spinor_annihilator(s.rho1);
    out.rho_pure = (static_cast<int>(a0.size()) == s.dimension()) &&
                   (static_cast<int>(a1.size()) == s.dimension());
    out.pairings_nonzero = !traits::is_negligible(mukai_pair(s.rho0, s.rho0.conjugated())) &&
                           !traits::is_negligible(mukai_pair(s.rho1, s.rho1.conjugated()));
    auto J0 = gcs_from_pure(s.rho0);
    auto J1 = gcs_from_pure(s.rho1);
    auto kc = check_gen_kahler(J0, J1);
    out.kahler_commute = kc.commute;
    out.positive_eigenvalue = kc.positive_eigenvalue;
    if (kc.metric_ok) {
        const auto& m = *kc.metric;
        bool g_ok = (m.g.matrix() - s.gm.g.matrix()).is_zero();
        bool b_ok = (m.B - s.gm.B).empty();
        out.metric_recovered = g_ok && b_ok;
    }
    return out;
}

/// Ramond-Ramond subspace of Lambda* C^n attached to a generalised SU(m)-structure:
/// the fierz image of the off-diagonal SU(m)_L x SU(m)_R blocks.
template <class S>
struct RRSpace {
    Parity parity = Parity::odd;
    int m = 0;
    SUBasis<S> left, right;
    std::vector<std::pair<SUBlock, SUBlock>> allowed;  // (left block, right block)
    std::vector<MultiForm<S>> basis;                   // fierz images of allowed pairs
};

template <class S>
RRSpace<S> rr_space(const SUmStructure<S>& s, Parity parity) {
    if (s.m() < 3) throw std::domain_error("rr_space: requires m >= 3");
    RRSpace<S> out;
    out.parity = parity;
    out.m = s.m();
    out.left = su_basis(s.psiL);
    out.right = su_basis(s.psiR);
    const int m = out.m;
    if (m % 2 == 1) {
        if (parity == Parity::odd) {
            out.allowed = {{SUBlock::cm, SUBlock::cm}, {SUBlock::cm, SUBlock::v},
                           {SUBlock::cm_bar, SUBlock::cm_bar}, {SUBlock::v_bar, SUBlock::cm_bar}};
        } else {
            out.allowed = {{SUBlock::cm, SUBlock::cm_bar}, {SUBlock::v, SUBlock::cm_bar},
                           {SUBlock::cm_bar, SUBlock::cm}, {SUBlock::cm_bar, SUBlock::v}};
        }
    } else {
        if (parity == Parity::odd) {
            // chirality forces the W block here (an odd form lives in D+ (x) D- + D- (x) D+)
            out.allowed = {{SUBlock::w, SUBlock::cm_bar}, {SUBlock::cm_bar, SUBlock::w}};
        } else {
            throw std::domain_error("rr_space: no even Ramond-Ramond space for m even");
        }
    }
    for (std::size_t i = 0; i < out.left.vectors.size(); ++i)
        for (std::size_t j = 0; j < out.right.vectors.size(); ++j)
            for (const auto& [bl, br] : out.allowed)
                if (out.left.block[i] == bl && out.right.block[j] == br)
                    out.basis.push_back(fierz(out.left.vectors[i], out.right.vectors[j]));
    return out;
}

template <class S>
struct RRMembership {
    bool is_rr = false;
    std::vector<std::string> offending_blocks;
};

/// Membership via the tensor picture: fierz_inverse(F) must be supported on allowed blocks.
template <class S>
RRMembership<S> rr_membership(const RRSpace<S>& space, const MultiForm<S>& F) {
    using traits = scalar_traits<S>;
    RRMembership<S> out;
    if (F.parity() != space.parity && !F.empty()) {
        out.offending_blocks.push_back("parity");
        return out;
    }
    const auto mod = space.left.base.module;
    Matrix<S> T = fierz_inverse(F, mod);
    // coordinates in the SU bases: T = U_L M U_R^T  =>  M = U_L^{-1} T U_R^{-T}
    const std::size_t d = mod->dim;
    Matrix<S> UL(d, d), UR(d, d);
    for (std::size_t c = 0; c < d; ++c)
        for (std::size_t r = 0; r < d; ++r) {
            UL(r, c) = space.left.vectors[c].c[r];
            UR(r, c) = space.right.vectors[c].c[r];
        }
    Matrix<S> M = inverse(UL) * T * inverse(UR.transposed());
    out.is_rr = true;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            if (traits::is_negligible(M(i, j))) continue;
            bool ok = false;
            for (const auto& [bl, br] : space.allowed)
                if (space.left.block[i] == bl && space.right.block[j] == br) ok = true;
            if (!ok) {
                out.is_rr = false;
                std::string tag = su_block_name(space.left.block[i]) + " (x) " +
                                  su_block_name(space.right.block[j]);
                bool seen = false;
                for (const auto& t : out.offending_blocks) seen |= (t == tag);
                if (!seen) out.offending_blocks.push_back(tag);
            }
        }
    return out;
}

template <class S>
bool is_rr(const RRSpace<S>& space, const MultiForm<S>& F) {
    return rr_membership(space, F).is_rr;
}

/// q-orthogonal projection onto the Ramond-Ramond space (in the fierz picture the SU bases
/// are q-orthonormal, so zeroing disallowed tensor coordinates is the orthogonal projection).
template <class S>
MultiForm<S> rr_project(const RRSpace<S>& space, const MultiForm<S>& F) {
    using traits = scalar_traits<S>;
    const auto mod = space.left.base.module;
    const std::size_t d = mod->dim;
    MultiForm<S> Fp = F.parity_part(space.parity);
    Matrix<S> T = fierz_inverse(Fp, mod);
    Matrix<S> UL(d, d), UR(d, d);
    for (std::size_t c = 0; c < d; ++c)
        for (std::size_t r = 0; r < d; ++r) {
            UL(r, c) = space.left.vectors[c].c[r];
            UR(r, c) = space.right.vectors[c].c[r];
        }
    Matrix<S> M = inverse(UL) * T * inverse(UR.transposed());
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            bool ok = false;
            for (const auto& [bl, br] : space.allowed)
                if (space.left.block[i] == bl && space.right.block[j] == br) ok = true;
            if (!ok) M(i, j) = traits::zero();
        }
    Matrix<S> Tp = UL * M * UR.transposed();
    return fierz_tensor(Tp, mod);
}

/// Hodge-duality partner F_a = -Gt F_b of the internal Ramond-Ramond field.
template <class S>
MultiForm<S> hodge_dual_partner(const MultiForm<S>& Fb, const GenMetric<S>& gm) {
    return -g_tilde(gm.g, Fb);
}

}  // namespace gg
