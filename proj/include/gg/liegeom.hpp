#pragma once

#include <string>
#include <vector>

#include "gg/form_literal.hpp"
#include "gg/genalg.hpp"

namespace gg {

/// Left-invariant Lie-algebra model: structure constants given as d e^k = sum c^k_ij e^ij
/// in Salamon notation, e.g. "0,0,0,0,0,12" for the Heisenberg algebra x R^3.
template <class S>
struct LieAlgebraModel {
    int n = 0;
    std::vector<MultiForm<S>> dcoframe;  // d e^k as a 2-form, k = 1..n
    std::string salamon;
    bool unimodular = true;

    /// Chevalley-Eilenberg differential extended as an anti-derivation.
    MultiForm<S> d(const MultiForm<S>& a) const {
        if (a.dimension() != n) throw std::invalid_argument("model.d: dimension mismatch");
        MultiForm<S> out(n);
        for (const auto& [b, c] : a.terms()) {
            int pos = 0;
            for (int k = 1; k <= n; ++k) {
                Blade bit = Blade{1} << (k - 1);
                if (!(b & bit)) continue;
                if (!dcoframe[k - 1].empty()) {
                    MultiForm<S> rest = MultiForm<S>::blade_form(n, b & ~bit);
                    MultiForm<S> w = wedge(dcoframe[k - 1], rest);
                    S f = (pos % 2) ? -c : c;
                    out = out + f * w;
                }
                ++pos;
            }
        }
        return out;
    }

    /// Structure constants: [e_i, e_j] = sum_k c(i,j,k) e_k, from c(i,j,k) = -de^k(e_i,e_j).
    S structure_constant(int i, int j, int k) const {
        if (i == j) return scalar_traits<S>::zero();
        Blade b = (Blade{1} << (i - 1)) | (Blade{1} << (j - 1));
        S v = dcoframe[k - 1].coefficient(b);
        return (i < j) ? -v : v;
    }
};

namespace salamon_detail {

template <class S>
MultiForm<S> parse_entry(const std::string& tok, int n, int k) {
    MultiForm<S> out(n);
    std::size_t i = 0;
    auto fail = [&](const std::string& why) {
        throw std::invalid_argument("salamon: bad term in position " + std::to_string(k) + ": " + why);
    };
    literal_detail::skip_ws(tok, i);
    if (i < tok.size() && tok[i] == '0' &&
        (i + 1 == tok.size() || !std::isdigit(static_cast<unsigned char>(tok[i + 1])))) {
        ++i;
        literal_detail::skip_ws(tok, i);
        if (i != tok.size()) fail("trailing characters after 0");
        return out;
    }
    bool first = true;
    while (i < tok.size()) {
        literal_detail::skip_ws(tok, i);
        if (i == tok.size()) break;
        int sign = 1;
        if (tok[i] == '+' || tok[i] == '-') {
            sign = tok[i] == '-' ? -1 : 1;
            ++i;
        } else if (!first) {
            fail("expected '+' or '-'");
        }
        first = false;
        literal_detail::skip_ws(tok, i);
        S coef = scalar_traits<S>::one();
        // optional rational coefficient "q*" before the index pair
        std::size_t save = i;
        if (i < tok.size() && std::isdigit(static_cast<unsigned char>(tok[i]))) {
            std::size_t j = i;
            while (j < tok.size() && (std::isdigit(static_cast<unsigned char>(tok[j])) ||
                                      tok[j] == '/' || tok[j] == '.'))
                ++j;
            if (j < tok.size() && tok[j] == '*') {
                coef = literal_detail::parse_real<S>(tok, i);
                literal_detail::skip_ws(tok, i);
                if (i >= tok.size() || tok[i] != '*') fail("expected '*'");
                ++i;
            } else {
                i = save;
            }
        }
        literal_detail::skip_ws(tok, i);
        if (i + 1 >= tok.size() || !std::isdigit(static_cast<unsigned char>(tok[i])) ||
            !std::isdigit(static_cast<unsigned char>(tok[i + 1])))
            fail("expected an index pair like 12");
        int a = tok[i] - '0', b = tok[i + 1] - '0';
        i += 2;
        if (a < 1 || a > n || b < 1 || b > n || a == b) fail("index pair out of range");
        S v = (sign < 0) ? -coef : coef;
        if (a > b) {
            std::swap(a, b);
            v = -v;
        }
        out.add_term((Blade{1} << (a - 1)) | (Blade{1} << (b - 1)), v);
    }
    return out;
}

}  // namespace salamon_detail

/// Parse a Salamon string; verifies the Jacobi identity (d^2 = 0) and records unimodularity.
template <class S>
LieAlgebraModel<S> parse_model(const std::string& text) {
    std::vector<std::string> toks;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            toks.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    toks.push_back(cur);
    const int n = static_cast<int>(toks.size());
    if (n < 2 || n > 8) throw std::invalid_argument("salamon: dimension must be 2..8");
    LieAlgebraModel<S> model;
    model.n = n;
    model.salamon = text;
    for (int k = 1; k <= n; ++k)
        model.dcoframe.push_back(salamon_detail::parse_entry<S>(toks[k - 1], n, k));
    for (int k = 1; k <= n; ++k) {
        if (!model.d(model.dcoframe[k - 1]).empty())
            throw std::invalid_argument("salamon: Jacobi identity fails (d^2 e^" +
                                        std::to_string(k) + " != 0)");
    }
    // unimodular <=> tr(ad_X) = 0 for all X <=> sum_i c(i,j,i) = 0 for each j
    for (int j = 1; j <= n; ++j) {
        S tr = scalar_traits<S>::zero();
        for (int i = 1; i <= n; ++i) tr += model.structure_constant(i, j, i);
        if (!scalar_traits<S>::is_negligible(tr)) model.unimodular = false;
    }
    return model;
}

template <class S>
std::string emit_salamon(const LieAlgebraModel<S>& model) {
    std::string out;
    for (int k = 1; k <= model.n; ++k) {
        if (k > 1) out += ",";
        const auto& f = model.dcoframe[k - 1];
        if (f.empty()) {
            out += "0";
            continue;
        }
        std::string part;
        for (const auto& [b, c] : f.terms()) {
            int i = 0, j = 0;
            for (int t = 1; t <= model.n; ++t)
                if (b & (Blade{1} << (t - 1))) (i == 0 ? i : j) = t;
            S coef = c;
            std::string sign = part.empty() ? "" : "+";
            if (scalar_traits<S>::is_real(coef) && !scalar_traits<S>::is_positive(coef)) {
                sign = "-";
                coef = -coef;
            }
            std::string cs = scalar_traits<S>::display(coef);
            part += sign + (cs == "1" ? "" : cs + "*") + std::to_string(i) + std::to_string(j);
        }
        out += part;
    }
    return out;
}

/// Transform a model into the orthonormal coframe of a metric: the engine then works with
/// g = Id throughout.
template <class S>
LieAlgebraModel<S> to_orthonormal_frame(const LieAlgebraModel<S>& model, const MetricData<S>& g) {
    if (g.is_identity()) return model;
    LieAlgebraModel<S> out;
    out.n = model.n;
    out.unimodular = model.unimodular;
    out.salamon = "";
    // f^a = sum_i L_{ia} e^i; d f^a = sum_i L_{ia} (d e^i) rewritten in the f-coframe
    const Matrix<S>& L = g.cholesky_factor();
    for (int a = 1; a <= model.n; ++a) {
        MultiForm<S> df(model.n);
        for (int i = 1; i <= model.n; ++i)
            if (!scalar_traits<S>::is_zero(L(i - 1, a - 1)))
                df = df + L(i - 1, a - 1) * model.dcoframe[i - 1];
        out.dcoframe.push_back(g.to_frame(df));
    }
    out.salamon = emit_salamon(out);
    return out;
}

/// Flux data on a model: closed H, closed alpha = dphi, scale c_phi = e^{phi_0}.
template <class S>
struct FluxData {
    MultiForm<S> H;      // real 3-form, dH = 0
    MultiForm<S> alpha;  // real 1-form, d alpha = 0
    S c_phi;

    FluxData(const LieAlgebraModel<S>& model, MultiForm<S> H_, MultiForm<S> alpha_, S c_phi_)
        : H(std::move(H_)), alpha(std::move(alpha_)), c_phi(std::move(c_phi_)) {
        if (!model.d(H).empty()) throw std::invalid_argument("FluxData: H not closed");
        if (!model.d(alpha).empty()) throw std::invalid_argument("FluxData: alpha not closed");
        if (!scalar_traits<S>::is_positive(c_phi))
            throw std::invalid_argument("FluxData: c_phi must be > 0");
    }
};

/// Twisted differential d_H rho = d rho + H ^ rho, optionally dilaton-twisted
/// (the e^{-phi} prefactor contributes an extra -alpha ^ rho).
template <class S>
MultiForm<S> d_H(const LieAlgebraModel<S>& model, const MultiForm<S>& H, const MultiForm<S>& rho) {
    return model.d(rho) + wedge(H, rho);
}

template <class S>
MultiForm<S> d_H_dilaton(const LieAlgebraModel<S>& model, const MultiForm<S>& H,
                         const MultiForm<S>& alpha, const MultiForm<S>& rho) {
    return model.d(rho) + wedge(H, rho) - wedge(alpha, rho);
}

/// d_H as a dense 2^n x 2^n matrix on blade coefficients.
template <class S>
Matrix<S> d_H_matrix(const LieAlgebraModel<S>& model, const MultiForm<S>& H) {
    const std::size_t N = std::size_t{1} << model.n;
    Matrix<S> M(N, N);
    for (Blade b = 0; b < N; ++b) {
        auto img = d_H(model, H, MultiForm<S>::blade_form(model.n, b)).dense();
        for (std::size_t r = 0; r < N; ++r) M(r, b) = img[r];
    }
    return M;
}

/// Formal adjoint d*_H = (-1)^(floor(n/2)+n) Gt d_H Gt (exact on unimodular models).
template <class S>
MultiForm<S> codifferential(const LieAlgebraModel<S>& model, const MultiForm<S>& H,
                            const MetricData<S>& g, const MultiForm<S>& rho) {
    if (!model.d(H).empty()) throw std::invalid_argument("codifferential: H not closed");
    int sign = ((model.n / 2 + model.n) % 2) ? -1 : 1;
    MultiForm<S> r = g_tilde(g, d_H(model, H, g_tilde(g, rho)));
    return sign < 0 ? -r : r;
}

template <class S>
struct CohomologyResult {
    int dim_even = 0, dim_odd = 0;
    std::vector<MultiForm<S>> harmonic_even, harmonic_odd;  // d_H tau = 0 and d_H Gt tau = 0
};

/// Twisted cohomology dimensions per parity and harmonic representatives
/// (ker d_H intersect ker d*_H); bases are orthogonalised under (s,t) = 1/2 sum g(s^p,t^p)
/// (normalised in float mode; primitive representatives in exact mode).
template <class S>
CohomologyResult<S> twisted_cohomology(const LieAlgebraModel<S>& model, const MultiForm<S>& H,
                                       const MetricData<S>& g) {
    using traits = scalar_traits<S>;
    if (!model.d(H).empty()) throw std::invalid_argument("twisted_cohomology: H not closed");
    if (!model.unimodular)
        throw std::invalid_argument(
            "twisted_cohomology: model not unimodular; d*_H is not an exact adjoint and "
            "harmonic representatives need not exist");
    const int n = model.n;
    const std::size_t N = std::size_t{1} << n;
    Matrix<S> M = d_H_matrix(model, H);
    std::vector<std::size_t> ev, od;
    for (Blade b = 0; b < N; ++b) (blade_degree(b) % 2 ? od : ev).push_back(b);
    auto restrict_cols = [&](const Matrix<S>& A, const std::vector<std::size_t>& cols) {
        Matrix<S> R(A.rows(), cols.size());
        for (std::size_t c = 0; c < cols.size(); ++c)
            for (std::size_t r = 0; r < A.rows(); ++r) R(r, c) = A(r, cols[c]);
        return R;
    };
    Matrix<S> Mev = restrict_cols(M, ev), Mod = restrict_cols(M, od);
    std::size_t rk_ev = rank(Mev), rk_od = rank(Mod);
    CohomologyResult<S> out;
    out.dim_even = static_cast<int>(ev.size() - rk_ev - rk_od);
    out.dim_odd = static_cast<int>(od.size() - rk_od - rk_ev);

    // harmonic: stack d_H and d*_H = sign Gt d_H Gt
    Matrix<S> Gt(N, N);
    for (Blade b = 0; b < N; ++b) {
        auto img = g_tilde(g, MultiForm<S>::blade_form(n, b)).dense();
        for (std::size_t r = 0; r < N; ++r) Gt(r, b) = img[r];
    }
    int sign = ((n / 2 + n) % 2) ? -1 : 1;
    Matrix<S> Ds = traits::from_int(sign) * (Gt * M * Gt);
    for (int par = 0; par < 2; ++par) {
        const auto& cols = par ? od : ev;
        Matrix<S> big(2 * N, cols.size());
        for (std::size_t c = 0; c < cols.size(); ++c)
            for (std::size_t r = 0; r < N; ++r) {
                big(r, c) = M(r, cols[c]);
                big(N + r, c) = Ds(r, cols[c]);
            }
        auto ker = kernel_basis(big);
        std::vector<MultiForm<S>> reps;
        for (const auto& v : ker) {
            MultiForm<S> f(n);
            for (std::size_t c = 0; c < cols.size(); ++c)
                if (!traits::is_zero(v[c])) f.add_term(static_cast<Blade>(cols[c]), v[c]);
            reps.push_back(std::move(f));
        }
        // Gram-Schmidt under the definite product (no normalisation in exact mode)
        std::vector<MultiForm<S>> ortho;
        for (auto f : reps) {
            for (const auto& u : ortho) {
                S num = form_inner(g, u, f), den = form_inner(g, u, u);
                f = f - (num / den) * u;
            }
            if (!f.empty()) {
                if constexpr (!traits::exact) {
                    S nn = form_inner(g, f, f);
                    auto root = traits::try_sqrt_real(traits::from_ratio(1, 2) * nn);
                    if (root) f = (traits::one() / *root) * f;
                }
                ortho.push_back(std::move(f));
            }
        }
        (par ? out.harmonic_odd : out.harmonic_even) = std::move(ortho);
    }
    if (static_cast<int>(out.harmonic_even.size()) != out.dim_even ||
        static_cast<int>(out.harmonic_odd.size()) != out.dim_odd)
        throw std::logic_error("twisted_cohomology: harmonic dimension mismatch");
    return out;
}

/// Metric connection with totally skew torsion +-H on an orthonormal-frame model:
/// Gamma(i,j,k) = g(nabla_{e_i} e_j, e_k) built by Koszul, torsion adds +-H(i,j,k)/2;
/// the spin lift acts by Omega_i = 1/2 sum_{j<k} Gamma(i,j,k) gamma_j gamma_k (+- H/4 term).
template <class S>
struct ConnectionData {
    const LieAlgebraModel<S>* model = nullptr;
    SpinModulePtr<S> module;
    int torsion_sign = 0;  // 0 = Levi-Civita, +1/-1 = nabla^pm
    std::vector<std::vector<std::vector<S>>> gamma_lc;  // Levi-Civita coefficients
    std::vector<Matrix<S>> lift;                        // spin lift per frame direction
    MultiForm<S> H;

    S coeff(int i, int j, int k) const {
        S v = gamma_lc[i - 1][j - 1][k - 1];
        if (torsion_sign != 0) {
            // H(e_i, e_j, e_k) as a coefficient of the 3-form
            MultiForm<S> c = contract_dir(k, contract_dir(j, contract_dir(i, H)));
            S h = c.scalar_part();
            v += scalar_traits<S>::from_ratio(torsion_sign, 2) * h;
        }
        return v;
    }
};

template <class S>
ConnectionData<S> connection(const LieAlgebraModel<S>& model, const SpinModulePtr<S>& module,
                             const MultiForm<S>& H, int torsion_sign) {
    using traits = scalar_traits<S>;
    const int n = model.n;
    ConnectionData<S> conn;
    conn.model = &model;
    conn.module = module;
    conn.torsion_sign = torsion_sign;
    conn.H = H;
    conn.gamma_lc.assign(n, std::vector<std::vector<S>>(n, std::vector<S>(n, traits::zero())));
    S half = traits::from_ratio(1, 2);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            for (int k = 1; k <= n; ++k) {
                S c1 = model.structure_constant(i, j, k);
                S c2 = model.structure_constant(j, k, i);
                S c3 = model.structure_constant(k, i, j);
                conn.gamma_lc[i - 1][j - 1][k - 1] = half * (c1 - c2 + c3);
            }
    // spin lifts
    const std::size_t d = module->dim;
    for (int i = 1; i <= n; ++i) {
        Matrix<S> Om(d, d);
        for (int j = 1; j <= n; ++j)
            for (int k = j + 1; k <= n; ++k) {
                S co = conn.coeff(i, j, k);
                if (traits::is_zero(co)) continue;
                Matrix<S> gjk = (module->gamma[j - 1] * module->gamma[k - 1]).dense();
                Om = Om + (half * co) * gjk;
            }
        conn.lift.push_back(std::move(Om));
    }
    return conn;
}

/// Covariant derivative of an invariant spinor field along e_i.
template <class S>
Spinor<S> nabla_spinor(const ConnectionData<S>& conn, int i, const Spinor<S>& psi) {
    return Spinor<S>(psi.module, conn.lift[i - 1].apply(psi.c));
}

/// Covariant derivative of an invariant form along e_i (Levi-Civita part only).
template <class S>
MultiForm<S> nabla_form(const ConnectionData<S>& conn, int i, const MultiForm<S>& a) {
    const int n = conn.model->n;
    MultiForm<S> out(n);
    for (const auto& [b, c] : a.terms()) {
        int pos = 0;
        for (int k = 1; k <= n; ++k) {
            Blade bit = Blade{1} << (k - 1);
            if (!(b & bit)) continue;
            // nabla_i e^k = -sum_l Gamma(i,l,k) e^l
            for (int l = 1; l <= n; ++l) {
                S co = conn.gamma_lc[i - 1][l - 1][k - 1];
                if (scalar_traits<S>::is_zero(co)) continue;
                MultiForm<S> w =
                    wedge(MultiForm<S>::basis(n, l), MultiForm<S>::blade_form(n, b & ~bit));
                S f = -co * c;
                if (pos % 2) f = -f;
                out = out + f * w;
            }
            ++pos;
        }
    }
    return out;
}

/// Dirac operator D Psi = sum_k e_k . nabla_{e_k} Psi.
template <class S>
Spinor<S> dirac(const ConnectionData<S>& conn, const Spinor<S>& psi) {
    Spinor<S> out(psi.module, std::vector<S>(psi.c.size(), scalar_traits<S>::zero()));
    for (int k = 1; k <= conn.model->n; ++k) out = out + gamma_act(k, nabla_spinor(conn, k, psi));
    return out;
}

/// Scenario-level structure on a model: SU(m) data plus flux.
template <class S>
struct ModelStructure {
    LieAlgebraModel<S> model;  // orthonormal frame
    FluxData<S> flux;
    SUmStructure<S> su;
};

/// Internal dilatino residuals (D - alpha +- H/4) . Psi_{L,R}; zero iff the dilatino
/// equations hold.
template <class S>
std::pair<Spinor<S>, Spinor<S>> modified_dilatino_residual(const ModelStructure<S>& ms) {
    const auto& mod = ms.su.psiL.module;
    auto lc = connection(ms.model, mod, ms.flux.H, 0);
    S quarter = scalar_traits<S>::from_ratio(1, 4);
    auto res = [&](const Spinor<S>& psi, int hsign) {
        Spinor<S> r = dirac(lc, psi) - clifford_act(ms.flux.alpha, psi);
        MultiForm<S> hterm = quarter * ms.flux.H;
        Spinor<S> h = clifford_act(hterm, psi);
        return (hsign > 0) ? r + h : r - h;
    };
    return {res(ms.su.psiL, +1), res(ms.su.psiR, -1)};
}

/// Gravitino residuals per frame direction:
///   L_j = nabla+_j Psi_L + (1/2^m) e^phi ( mhat conj(F0) . e_j . Psi_R + mvee F1 . e_j . A(Psi_R) )
///   R_j = nabla-_j Psi_R - (1/2^m) e^phi ( mhat hat(F0) . e_j . Psi_L + hat(F1) . e_j . A(Psi_L) )
/// all zero iff the gravitino equations hold.
template <class S>
std::pair<std::vector<Spinor<S>>, std::vector<Spinor<S>>> gravitino_residual(
    const ModelStructure<S>& ms, const MultiForm<S>& F0, const MultiForm<S>& F1) {
    using traits = scalar_traits<S>;
    const auto& mod = ms.su.psiL.module;
    const int m = mod->m;
    auto cp = connection(ms.model, mod, ms.flux.H, +1);
    auto cm = connection(ms.model, mod, ms.flux.H, -1);
    S mhat = traits::from_int(((m * (m + 1) / 2) % 2) ? -1 : 1);
    S mvee = traits::from_int(((m * (m - 1) / 2) % 2) ? -1 : 1);
    S scale = ms.flux.c_phi * traits::from_ratio(1, 1L << m);
    auto apsiR = charge_conjugate(ms.su.psiR);
    auto apsiL = charge_conjugate(ms.su.psiL);
    std::vector<Spinor<S>> L, R;
    for (int j = 1; j <= ms.model.n; ++j) {
        Spinor<S> tL = clifford_act(F0.conjugated(), gamma_act(j, ms.su.psiR));
        Spinor<S> uL = clifford_act(F1, gamma_act(j, apsiR));
        L.push_back(nabla_spinor(cp, j, ms.su.psiL) + scale * (mhat * tL + mvee * uL));
        Spinor<S> tR = clifford_act(hat(F0), gamma_act(j, ms.su.psiL));
        Spinor<S> uR = clifford_act(hat(F1), gamma_act(j, apsiL));
        R.push_back(nabla_spinor(cm, j, ms.su.psiR) - scale * (mhat * tR + uR));
    }
    return {std::move(L), std::move(R)};
}

/// Twisted-form residuals d_H(c_phi^-1 [A(Psi_L) x Psi_R]) - F0 and the rho1 analogue,
/// with the e^{-phi} prefactor realised as c_phi^-1 (d_H - alpha ^).
template <class S>
std::pair<MultiForm<S>, MultiForm<S>> dh_residual(const ModelStructure<S>& ms,
                                                  const MultiForm<S>& F0, const MultiForm<S>& F1) {
    using traits = scalar_traits<S>;
    S inv = traits::one() / ms.flux.c_phi;
    MultiForm<S> s0 = fierz(charge_conjugate(ms.su.psiL), ms.su.psiR);
    MultiForm<S> s1 = fierz(ms.su.psiL, ms.su.psiR);
    MultiForm<S> r0 = inv * d_H_dilaton(ms.model, ms.flux.H, ms.flux.alpha, s0) - F0;
    MultiForm<S> r1 = inv * d_H_dilaton(ms.model, ms.flux.H, ms.flux.alpha, s1) - F1;
    return {std::move(r0), std::move(r1)};
}

/// Curvature data of nabla^+ and the dilaton Laplacian proxy d* alpha.
template <class S>
struct CurvatureReport {
    Matrix<S> ricci_plus;  // Ric+(i,j)
    S scalar_plus;
    S laplace_phi_proxy;   // d* alpha
    S h_norm_sq;           // |H|^2 = sum_{i<j<k} H_ijk^2
    bool witness_checked = false;
    bool scal_identity = false;  // S+ = 2 d* alpha
    bool dilH_identity = false;  // S+ = -3 |H|^2
};

template <class S>
CurvatureReport<S> curvature_report(const LieAlgebraModel<S>& model, const SpinModulePtr<S>& module,
                                    const MultiForm<S>& H, const MultiForm<S>& alpha,
                                    const Spinor<S>* witness = nullptr) {
    using traits = scalar_traits<S>;
    const int n = model.n;
    auto conn = connection(model, module, H, +1);
    // R(e_a, e_i) e_j = nabla_a nabla_i e_j - nabla_i nabla_a e_j - nabla_{[e_a, e_i]} e_j
    auto nab = [&](int a, int j, int k) { return conn.coeff(a, j, k); };
    CurvatureReport<S> out{Matrix<S>(n, n), traits::zero(), traits::zero(), traits::zero()};
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            S ric = traits::zero();
            for (int a = 1; a <= n; ++a) {
                // g(R(e_a, e_i) e_j, e_a)
                S t = traits::zero();
                for (int l = 1; l <= n; ++l) {
                    t += nab(i, j, l) * nab(a, l, a) - nab(a, j, l) * nab(i, l, a);
                    t -= model.structure_constant(a, i, l) * nab(l, j, a);
                }
                ric += t;
            }
            out.ricci_plus(i - 1, j - 1) = ric;
        }
    for (int i = 1; i <= n; ++i) out.scalar_plus += out.ricci_plus(i - 1, i - 1);
    // d* alpha with H = 0: -sum_k e_k _| nabla_k alpha
    auto lc = connection(model, module, MultiForm<S>(n), 0);
    for (int k = 1; k <= n; ++k) {
        MultiForm<S> na = nabla_form(lc, k, alpha);
        out.laplace_phi_proxy -= contract_dir(k, na).scalar_part();
    }
    for (const auto& [b, c] : H.terms()) out.h_norm_sq += c * c;
    if (witness) {
        out.witness_checked = true;
        out.scal_identity = traits::is_negligible(
            out.scalar_plus - traits::from_int(2) * out.laplace_phi_proxy);
        out.dilH_identity =
            traits::is_negligible(out.scalar_plus + traits::from_int(3) * out.h_norm_sq);
    }
    return out;
}

/// Kernel of the combined system nabla+ Psi = 0, (alpha + H/2) . Psi = 0.
template <class S>
std::vector<Spinor<S>> gravdil_witness_kernel(const LieAlgebraModel<S>& model,
                                              const SpinModulePtr<S>& module, const MultiForm<S>& H,
                                              const MultiForm<S>& alpha) {
    using traits = scalar_traits<S>;
    const int n = model.n;
    const std::size_t d = module->dim;
    auto conn = connection(model, module, H, +1);
    Matrix<S> big((n + 1) * d, d);
    for (int i = 1; i <= n; ++i)
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < d; ++c) big((i - 1) * d + r, c) = conn.lift[i - 1](r, c);
    MultiForm<S> op = alpha + traits::from_ratio(1, 2) * H;
    for (std::size_t c = 0; c < d; ++c) {
        std::vector<S> e(d, traits::zero());
        e[c] = traits::one();
        auto img = clifford_act(op, Spinor<S>(module, std::move(e))).c;
        for (std::size_t r = 0; r < d; ++r) big(n * d + r, c) = img[r];
    }
    std::vector<Spinor<S>> out;
    for (auto& v : kernel_basis(big)) out.emplace_back(module, std::move(v));
    return out;
}

enum class SpecialType { calabi_yau, w2_plus, w2_minus, w3, other };

inline std::string special_type_name(SpecialType t) {
    switch (t) {
        case SpecialType::calabi_yau: return "CalabiYau";
        case SpecialType::w2_plus: return "W2+";
        case SpecialType::w2_minus: return "W2-";
        case SpecialType::w3: return "W3";
        case SpecialType::other: return "other";
    }
    return "?";
}

/// Torsion-type flags of a straight SU(3)-structure on a model (B = 0, H = 0, alpha = 0):
/// CY iff d omega = 0 and d psi+- = 0; W3 iff d psi+- = 0, d omega != 0, d rho0 in the odd
/// RR space; W2+- iff d omega = 0, d psi_mp = 0, d psi_pm != 0 and in the even RR space.
template <class S>
SpecialType classify_special_type(const ModelStructure<S>& ms) {
    using traits = scalar_traits<S>;
    if (!ms.su.straight) throw std::invalid_argument("classify: structure must be straight");
    if (!ms.su.gm.B.empty() || !ms.flux.H.empty() || !ms.flux.alpha.empty())
        throw std::invalid_argument("classify: requires B = 0, H = 0, alpha = 0");
    if (ms.su.m() != 3) throw std::invalid_argument("classify: m = 3 only");
    // omega from the degree-2 part of rho0 = c (1 - i omega - ...); psi+- from rho1
    S s0 = ms.su.rho0.scalar_part();
    MultiForm<S> omega = (traits::imag_unit() / s0) * ms.su.rho0.degree_part(2);
    MultiForm<S> r13 = ms.su.c_phi * ms.su.rho1.degree_part(3);
    MultiForm<S> psi_p = r13.real_part(), psi_m = r13.imag_part();
    MultiForm<S> dom = ms.model.d(omega), dpp = ms.model.d(psi_p), dpm = ms.model.d(psi_m);
    bool om_closed = dom.empty(), pp_closed = dpp.empty(), pm_closed = dpm.empty();
    if (om_closed && pp_closed && pm_closed) return SpecialType::calabi_yau;
    if (pp_closed && pm_closed && !om_closed) {
        auto space = rr_space(ms.su, Parity::odd);
        if (is_rr(space, ms.model.d(ms.su.rho0)) && ms.model.d(ms.su.rho1).empty())
            return SpecialType::w3;
        return SpecialType::other;
    }
    if (om_closed && pm_closed && !pp_closed) {
        auto space = rr_space(ms.su, Parity::even);
        if (is_rr(space, ms.model.d(ms.su.rho1))) return SpecialType::w2_plus;
        return SpecialType::other;
    }
    if (om_closed && pp_closed && !pm_closed) {
        auto space = rr_space(ms.su, Parity::even);
        if (is_rr(space, ms.model.d(ms.su.rho1))) return SpecialType::w2_minus;
        return SpecialType::other;
    }
    return SpecialType::other;
}

/// Constrained critical point test: least-squares lambda with d_H Gt tau = lambda d_H gamma.
template <class S>
struct CriticalResult {
    bool constrained = false;    // d_H gamma != 0 (a genuine constraint direction)
    S lambda;
    S residual_sq;               // |d_H Gt tau - lambda d_H gamma|^2 under the 1/2-product
    bool critical = false;
};

template <class S>
CriticalResult<S> constrained_critical_check(const LieAlgebraModel<S>& model, const MultiForm<S>& H,
                                             const MetricData<S>& g, const MultiForm<S>& tau,
                                             const MultiForm<S>& gamma) {
    using traits = scalar_traits<S>;
    if (!d_H(model, H, tau).empty())
        throw std::invalid_argument("constrained_critical_check: tau is not d_H-closed");
    CriticalResult<S> out{false, traits::zero(), traits::zero(), false};
    MultiForm<S> lhs = d_H(model, H, g_tilde(g, tau));
    MultiForm<S> rhs = d_H(model, H, gamma);
    S half = traits::from_ratio(1, 2);
    if (rhs.empty()) {
        out.constrained = false;
        out.residual_sq = half * form_inner(g, lhs, lhs);
        out.critical = traits::is_negligible(out.residual_sq);
        return out;
    }
    out.constrained = true;
    S num = traits::real(form_inner(g, rhs, lhs));
    S den = traits::real(form_inner(g, rhs, rhs));
    out.lambda = num / den;
    MultiForm<S> diff = lhs - out.lambda * rhs;
    out.residual_sq = half * form_inner(g, diff, diff);
    out.critical = traits::is_negligible(out.residual_sq);
    return out;
}

}  // namespace gg
