#pragma once

#include <algorithm>
#include <array>
#include <future>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "gg/random.hpp"
#include "gg/scenario.hpp"

namespace gg {

inline const char* kConventionTags =
    "gamma=recursive-v1; cc=even-gamma-product,first-entry-positive; "
    "clifford=(X+xi).rho=-X_|rho+xi^rho; bfield=spinor-expwedge,vector-full-contraction; "
    "orientation=e1..en-positive";

struct CheckResult {
    std::string name;
    bool pass = false;
    double max_residual = 0.0;
    std::string note;
};

struct Report {
    std::string suite;
    std::string mode;
    std::vector<std::pair<std::string, std::string>> fields;  // ordered metadata
    std::vector<CheckResult> checks;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    double max_residual() const {
        double m = 0;
        for (const auto& c : checks) m = std::max(m, c.max_residual);
        return m;
    }
    std::string render() const {
        std::ostringstream os;
        os << "ggtool-report/1\n";
        os << "suite: " << suite << "\n";
        os << "mode: " << mode << "\n";
        for (const auto& [k, v] : fields) os << k << ": " << v << "\n";
        os << "convention: " << kConventionTags << "\n";
        for (const auto& c : checks) {
            os << "check: " << c.name << " " << (c.pass ? "pass" : "FAIL") << " residual=";
            if (c.max_residual == 0.0)
                os << "0";
            else
                os << std::scientific << std::setprecision(3) << c.max_residual;
            if (!c.note.empty()) os << " note=" << c.note;
            os << "\n";
        }
        std::size_t fails = 0;
        for (const auto& c : checks) fails += c.pass ? 0 : 1;
        os << "summary: " << (fails == 0 ? "pass" : "FAIL") << " checks=" << checks.size()
           << " failures=" << fails << "\n";
        return os.str();
    }
};

/// Documented sign mutations used to prove each identity sub-check is non-vacuous.
enum class Mutation { none, hat_sign, tilde_sign, commut_lift, faction_scale, volume_phase };

inline std::string mutation_name(Mutation m) {
    switch (m) {
        case Mutation::none: return "none";
        case Mutation::hat_sign: return "hat-sign";
        case Mutation::tilde_sign: return "tilde-sign";
        case Mutation::commut_lift: return "commut-lift";
        case Mutation::faction_scale: return "faction-scale";
        case Mutation::volume_phase: return "volume-phase";
    }
    return "?";
}

inline Mutation mutation_from_name(const std::string& s) {
    for (Mutation m : {Mutation::none, Mutation::hat_sign, Mutation::tilde_sign,
                       Mutation::commut_lift, Mutation::faction_scale, Mutation::volume_phase})
        if (mutation_name(m) == s) return m;
    throw std::invalid_argument("unknown mutation '" + s + "'");
}

namespace verify_detail {

// Mutated wrappers used only inside the suite.
template <class S>
MultiForm<S> hat_m(const MultiForm<S>& a, Mutation mut) {
    if (mut != Mutation::hat_sign) return hat(a);
    MultiForm<S> r(a.dimension());
    for (const auto& [b, c] : a.terms()) {
        int p = blade_degree(b);
        r.add_term(b, ((p * (p - 1) / 2) % 2) ? -c : c);  // wrong exponent on purpose
    }
    return r;
}
template <class S>
MultiForm<S> tilde_m(const MultiForm<S>& a, Mutation mut) {
    if (mut != Mutation::tilde_sign) return tilde(a);
    MultiForm<S> r(a.dimension());
    for (const auto& [b, c] : a.terms())
        r.add_term(b, (blade_degree(b) % 2) ? c : -c);  // flipped parity sign on purpose
    return r;
}

template <class S>
double form_res(const MultiForm<S>& a) {
    return a.approx_max();
}
template <class S>
double spinor_res(const Spinor<S>& a) {
    return a.approx_max();
}

}  // namespace verify_detail

namespace verify_detail {

// residual slots of the identity suite; merged by max across trials
enum ResSlot {
    r_cliff, r_invol, r_aequiv, r_vol, r_staract, r_formid, r_mukai, r_gtilde, r_commut,
    r_selfdual, r_faction, r_hatbar, r_cont, r_action, r_finv, r_genact, r_bcompat, r_gl,
    r_purity, kNumResSlots
};

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t trial) {
    std::uint64_t x = seed ^ (0x9e3779b97f4a7c15ULL * (trial + 1));
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    return x;
}

}  // namespace verify_detail

/// Randomised identity suite over seeded trials; exact mode must report zero residual.
/// Trials are independently seeded, so results are identical for any parallel split.
template <class S>
Report run_identity_suite(int n, std::uint64_t seed, int trials, Mutation mut = Mutation::none,
                          int jobs = 1) {
    using traits = scalar_traits<S>;
    using namespace verify_detail;
    Report rep;
    rep.suite = "identity";
    rep.mode = traits::exact ? "exact" : "float";
    rep.fields = {{"n", std::to_string(n)},
                  {"seed", std::to_string(seed)},
                  {"trials", std::to_string(trials)},
                  {"mutation", mutation_name(mut)}};
    const int m = n / 2;
    const bool even = (n % 2 == 0);
    auto mod = build_spin_module<S>(n);
    auto g = MetricData<S>::identity(n);
    const S mhat = traits::from_int(((m * (m + 1) / 2) % 2) ? -1 : 1);
    const S mvee = traits::from_int(((m * (m - 1) / 2) % 2) ? -1 : 1);
    const double tol = traits::exact ? 0.0 : 1e-10;

    auto add = [&](const std::string& name, double residual, const std::string& note = "") {
        rep.checks.push_back({name, residual <= tol, residual, note});
    };

    auto run_trial = [&](int trial, std::array<double, kNumResSlots>& R) {
        auto bump = [&R](ResSlot s, double v) { R[s] = std::max(R[s], v); };
        RationalRng rng(mix_seed(seed, trial));
        auto rho = rng.form<S>(n, -1, -1, true);
        // Clifford relation via wedge/contract composition: v.v.rho = -xi(X) rho
        {
            GenVector<S> v{rng.vector<S>(n), rng.vector<S>(n)};
            S q = traits::zero();
            for (int i = 0; i < n; ++i) q += v.cov[i] * v.vec[i];
            auto lhs = gen_act(v, gen_act(v, rho));
            bump(r_cliff, form_res(lhs + q * rho));
        }
        // hat/tilde involutions
        bump(r_invol, form_res(hat_m(hat_m(rho, mut), mut) - rho));
        bump(r_invol, form_res(tilde_m(tilde_m(rho, mut), mut) - rho));
        // charge conjugation laws
        {
            auto psi = rng.spinor<S>(mod);
            auto phi = rng.spinor<S>(mod);
            auto a2 = charge_conjugate(charge_conjugate(psi)) - mod->a_square * psi;
            bump(r_aequiv, spinor_res(a2));
            int k = static_cast<int>(rng.int_in(1, n));
            S sgn = traits::from_int((m % 2 == 0) ? -1 : 1);  // (-1)^(m+1)
            auto eq =
                charge_conjugate(gamma_act(k, psi)) - sgn * gamma_act(k, charge_conjugate(psi));
            bump(r_aequiv, spinor_res(eq));
            S bl = a_bilinear(psi, phi) - mhat * a_bilinear(phi, psi);
            bump(r_aequiv, traits::approx_abs(bl));
            S bx = a_bilinear(gamma_act(k, psi), phi) -
                   traits::from_int((m % 2) ? -1 : 1) * a_bilinear(psi, gamma_act(k, phi));
            bump(r_aequiv, traits::approx_abs(bx));
        }
        if (even) {
            // volume action and star_g(alpha) . Psi = hat(alpha) . varpi . Psi
            S im = traits::one();
            for (int j = 0; j < m; ++j) im = im * traits::imag_unit();
            S eig = mhat * im;
            if (mut == Mutation::volume_phase) eig = -eig;
            auto vol = MultiForm<S>::top(n);
            for (Chirality chi : {Chirality::plus, Chirality::minus}) {
                auto psi = rng.chiral_spinor<S>(mod, chi);
                S want = (chi == Chirality::plus) ? eig : -eig;
                bump(r_vol, spinor_res(clifford_act(vol, psi) - want * psi));
            }
            auto psi = rng.spinor<S>(mod);
            auto alpha = rng.form<S>(n, -1, -1, true);
            auto lhs = clifford_act(hodge_star(g, alpha), psi);
            auto rhs = clifford_act(hat_m(alpha, mut), clifford_act(vol, psi));
            bump(r_staract, spinor_res(lhs - rhs));
        }
        // formid: star hat / star(X ^ a) identities on random forms
        {
            auto a = rng.form<S>(n, -1, -1, false);
            for (int p = 0; p <= n; ++p) {
                auto ap = a.degree_part(p);
                int s = even ? ((m + p) % 2 ? -1 : 1) : ((m + 1) % 2 ? -1 : 1);
                auto lhs = hodge_star(g, hat_m(ap, mut));
                auto rhs = traits::from_int(s) * hat_m(hodge_star(g, ap), mut);
                bump(r_formid, form_res(lhs - rhs));
            }
            int i = static_cast<int>(rng.int_in(1, n));
            std::vector<S> X(n, traits::zero());
            X[i - 1] = traits::one();
            auto lhs = hodge_star(g, wedge(MultiForm<S>::basis(n, i), a));
            auto rhs = contract(X, hodge_star(g, tilde_m(a, mut)));
            bump(r_formid, form_res(lhs - rhs));
        }
        // mukai invariance under simultaneous B-transform and nu-rescale
        {
            auto a = rng.form<S>(n, -1, -1, true);
            auto b = rng.form<S>(n, -1, -1, true);
            auto B = rng.form<S>(n, 2, -1, false);
            S base = mukai_pair(a, b);
            S twisted = mukai_pair(b_transform(B, a), b_transform(B, b));
            bump(r_mukai, traits::approx_abs(base - twisted));
            // nu1 = e^{2 phi} nu0 with rho^{nu1} = e^{-phi} rho^{nu0} leaves the pairing fixed
            S t = traits::from_ratio(2, 3);  // e^{phi}
            VolumeElement<S> nu1(n, t * t);
            S inv_t = traits::one() / t;
            S r2 = mukai_pair(inv_t * a, inv_t * b, nu1) - base;
            bump(r_mukai, traits::approx_abs(r2));
        }
        if (even) {
            // Gt^2, pairing symmetry, isometry, Q-positivity
            auto a = rng.form<S>(n, -1, -1, true);
            auto b = rng.form<S>(n, -1, -1, true);
            int s = ((n * (n + 1) / 2) % 2) ? -1 : 1;
            bump(r_gtilde, form_res(g_tilde(g, g_tilde(g, a)) - traits::from_int(s) * a));
            S p1 = mukai_pair(g_tilde(g, a), b) - traits::from_int(s) * mukai_pair(a, g_tilde(g, b));
            bump(r_gtilde, traits::approx_abs(p1));
            S p2 = mukai_pair(g_tilde(g, a), g_tilde(g, b)) - mukai_pair(a, b);
            bump(r_gtilde, traits::approx_abs(p2));
            for (int par = 0; par <= 1; ++par) {
                auto f = rng.form<S>(n, -1, par, false);
                S sign = traits::from_int(par == 0 ? 1 : -1) * traits::from_int((m % 2) ? -1 : 1);
                S Q = sign * mukai_pair(f, g_tilde(g, f));
                S l2 = traits::zero();
                for (const auto& [bl, c] : f.terms()) l2 += c * c;
                bump(r_gtilde, traits::approx_abs(Q - l2));
            }
        }
        if (even) {
            // commut, selfdualgen, faction, hatbar, contlemma, action
            auto psiL = rng.spinor<S>(mod);
            auto psiR = rng.spinor<S>(mod);
            auto F = fierz(psiL, psiR);
            int k = static_cast<int>(rng.int_in(1, n));
            std::vector<S> X(n, traits::zero());
            X[k - 1] = traits::one();
            int lift_plus = (mut == Mutation::commut_lift) ? -1 : +1;
            GenVector<S> xp{X, X}, xm{X, X};
            for (auto& c : xm.cov) c = -c;
            if (lift_plus < 0) std::swap(xp, xm);
            S csign = traits::from_int((m % 2 == 0) ? -1 : 1);  // (-1)^(m+1)
            auto l1 = fierz(gamma_act(k, psiL), psiR) - csign * gen_act(xp, F);
            bump(r_commut, form_res(l1));
            auto l2 = fierz(psiL, gamma_act(k, psiR)) - gen_act(xm, tilde(F));
            bump(r_commut, form_res(l2));
            // selfdualgen on chiral squares
            for (Chirality chi : {Chirality::plus, Chirality::minus}) {
                auto phic = rng.chiral_spinor<S>(mod, chi);
                auto Fc = fierz(psiL, phic);
                S im = traits::one();
                for (int j = 0; j < m; ++j) im = im * traits::imag_unit();
                S eig = mvee * im;
                if (chi == Chirality::minus) eig = -eig;
                bump(r_selfdual, form_res(g_tilde(g, Fc) - eig * Fc));
            }
            // faction: (1/d) hat([Psi x Phi]) . xi = q(A Psi, xi) Phi
            auto phi = rng.spinor<S>(mod);
            auto xi = rng.spinor<S>(mod);
            S invd = traits::from_ratio(1, (long)mod->dim);
            if (mut == Mutation::faction_scale) invd = invd + invd;
            auto fl = invd * clifford_act(hat_m(fierz(psiL, phi), mut), xi) -
                      q_product(charge_conjugate(psiL), xi) * phi;
            bump(r_faction, spinor_res(fl));
            // trace-route oracle equality
            {
                Matrix<S> E(mod->dim, mod->dim);
                auto ap = charge_conjugate(psiL);
                for (std::size_t r = 0; r < mod->dim; ++r)
                    for (std::size_t c = 0; c < mod->dim; ++c)
                        E(r, c) = phi.c[r] * traits::conj(ap.c[c]);
                MultiForm<S> Fo(n);
                for (Blade b = 0; b < (Blade{1} << n); ++b) {
                    // tr(kappa(e_K)^dagger E) with hat sign
                    S t = traits::zero();
                    for (std::size_t c = 0; c < mod->dim; ++c) {
                        std::vector<S> e(mod->dim, traits::zero());
                        e[c] = traits::one();
                        auto col = blade_act(b, Spinor<S>(mod, std::move(e))).c;
                        for (std::size_t r = 0; r < mod->dim; ++r)
                            t += traits::conj(col[r]) * E(r, c);
                    }
                    int p = blade_degree(b);
                    Fo.add_term(b, ((p * (p + 1) / 2) % 2) ? -t : t);
                }
                bump(r_faction, form_res(Fo - fierz(psiL, phi)));
            }
            // hatbar
            {
                auto lhs = hat_m(fierz(phi, psiL), mut);
                auto base = fierz(psiL, phi);
                auto rhs = (m % 2 == 1) ? mhat * base : mhat * tilde(base);
                bump(r_hatbar, form_res(lhs - rhs));
            }
            // contlemma both branches
            {
                auto [first, second] = bilinear_contractions(psiL, phi, xi);
                bump(r_cont, spinor_res(first - q_product(xi, psiL) * phi));
                bump(r_cont, spinor_res(second - q_product(xi, phi) * psiL));
            }
            // action lemma (both lines)
            {
                auto A1 = fierz(gamma_act(k, psiL), phi);
                auto tB = tilde_m(fierz(psiL, gamma_act(k, phi)), mut);
                auto F2 = fierz(psiL, phi);
                S half = traits::from_ratio(1, 2);
                S sm = traits::from_int((m % 2 == 0) ? -1 : 1);  // (-1)^(m+1)
                auto w = wedge(MultiForm<S>::basis(n, k), F2) - half * (sm * A1 + tB);
                bump(r_action, form_res(w));
                auto cres = contract(X, F2) - half * (traits::from_int((m % 2) ? -1 : 1) * A1 + tB);
                bump(r_action, form_res(cres));
            }
            // fierz inverse roundtrip
            {
                auto T = fierz_inverse(F, mod);
                auto F2 = fierz_tensor(T, mod);
                bump(r_finv, form_res(F2 - F));
                auto Tdirect = tensor_square(psiL, psiR);
                bump(r_finv, (T - Tdirect).approx_max());
            }
            // purity of random chiral spinors (n = 6)
            if (n == 6) {
                auto pc = rng.chiral_spinor<S>(mod, Chirality::plus);
                if (!pc.is_zero()) {
                    auto pu = purity_test(pc);
                    bump(r_purity, pu.is_pure ? 0.0 : 1.0);
                }
            }
        }
        // gen_act Clifford polarisation and B-compat and GL composition
        {
            GenVector<S> v{rng.vector<S>(n), rng.vector<S>(n)};
            GenVector<S> w{rng.vector<S>(n), rng.vector<S>(n)};
            auto lhs = gen_act(v, gen_act(w, rho)) + gen_act(w, gen_act(v, rho));
            S ip2 = traits::from_int(2) * gen_inner(v, w);
            bump(r_genact, form_res(lhs + ip2 * rho));
            auto B = rng.form<S>(n, 2, -1, false);
            auto c1 = gen_act(b_transform(B, v), b_transform(B, rho));
            auto c2 = b_transform(B, gen_act(v, rho));
            bump(r_bcompat, form_res(c1 - c2));
            // GL composition on upper-triangular rational matrices with unit diagonal,
            // pairing invariance of the spin lift, and compatibility with the SO image
            Matrix<S> A1 = Matrix<S>::identity(n), A2 = Matrix<S>::identity(n);
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    A1(i, j) = traits::from_ratio(rng.int_in(-3, 3), rng.int_in(1, 4));
                    A2(i, j) = traits::from_ratio(rng.int_in(-3, 3), rng.int_in(1, 4));
                }
            auto comp = gl_act(A1, gl_act(A2, rho)) - gl_act(A1 * A2, rho);
            bump(r_gl, form_res(comp));
            auto tau = rng.form<S>(n, -1, -1, true);
            bump(r_gl, traits::approx_abs(mukai_pair(gl_act(A1, rho), gl_act(A1, tau)) -
                                          mukai_pair(rho, tau)));
            bump(r_gl, form_res(gen_act(gl_act(A1, v), gl_act(A1, rho)) -
                                gl_act(A1, gen_act(v, rho))));
        }
    };

    std::array<double, kNumResSlots> acc{};
    if (jobs <= 1) {
        for (int t = 0; t < trials; ++t) run_trial(t, acc);
    } else {
        std::vector<std::future<std::array<double, kNumResSlots>>> parts;
        int chunk = (trials + jobs - 1) / jobs;
        for (int j = 0; j < jobs; ++j) {
            int lo = j * chunk, hi = std::min(trials, (j + 1) * chunk);
            if (lo >= hi) break;
            parts.push_back(std::async(std::launch::async, [&, lo, hi]() {
                std::array<double, kNumResSlots> part{};
                for (int t = lo; t < hi; ++t) run_trial(t, part);
                return part;
            }));
        }
        for (auto& f : parts) {
            auto part = f.get();
            for (int i = 0; i < kNumResSlots; ++i) acc[i] = std::max(acc[i], part[i]);
        }
    }
    add("clifford-square", acc[r_cliff]);
    add("hat-tilde-involution", acc[r_invol]);
    add("charge-conjugation", acc[r_aequiv]);
    if (even) add("volume-action", acc[r_vol]);
    if (even) add("star-clifford-compat", acc[r_staract]);
    add("formid", acc[r_formid]);
    add("mukai-invariance", acc[r_mukai]);
    if (even) add("gtilde-metric", acc[r_gtilde]);
    if (even) add("commut", acc[r_commut]);
    if (even) add("selfdualgen", acc[r_selfdual]);
    if (even) add("faction-and-trace-oracle", acc[r_faction]);
    if (even) add("hatbar", acc[r_hatbar]);
    if (even) add("contlemma", acc[r_cont]);
    if (even) add("action-lemma", acc[r_action]);
    if (even) add("fierz-inverse", acc[r_finv]);
    add("gen-act-clifford", acc[r_genact]);
    add("b-transform-compat", acc[r_bcompat]);
    add("gl-composition", acc[r_gl]);
    if (n == 6) add("purity-chiral", acc[r_purity]);

    // Dirac-vs-d bridge and the d-identity of the sign-twist lemma on models with d != 0
    {
        double r_dvd = 0, r_dident = 0;
        for (const char* sal : {"0,0,0,0,0,0", "0,0,0,0,0,12"}) {
            if (n != 6) break;
            auto model = parse_model<S>(sal);
            auto conn = connection(model, mod, MultiForm<S>(n), 0);
            RationalRng r2(seed + 1);
            for (int t = 0; t < std::max(1, trials / 10); ++t) {
                auto a = r2.form<S>(n, -1, -1, true);
                r_dident = std::max(
                    r_dident, form_res(hat_m(model.d(a), mut) +
                                       model.d(hat_m(tilde_m(a, mut), mut))));
                auto p1 = r2.spinor<S>(mod);
                auto p2 = r2.spinor<S>(mod);
                auto F12 = fierz(p1, p2);
                MultiForm<S> Df(n), Dtf(n);
                for (int i = 1; i <= n; ++i) {
                    Df = Df + fierz(gamma_act(i, nabla_spinor(conn, i, p1)), p2) +
                         fierz(gamma_act(i, p1), nabla_spinor(conn, i, p2));
                    Dtf = Dtf + fierz(nabla_spinor(conn, i, p1), gamma_act(i, p2)) +
                          fierz(p1, gamma_act(i, nabla_spinor(conn, i, p2)));
                }
                auto dF = model.d(F12);
                auto dsF = codifferential(model, MultiForm<S>(n), g, F12);
                S sm = traits::from_int((m % 2) ? 1 : -1);  // (-1)^(m+1)
                r_dvd = std::max(r_dvd, form_res(Df - sm * (dsF + dF)));
                r_dvd = std::max(r_dvd, form_res(Dtf - tilde(dF - dsF)));
            }
        }
        if (n == 6) {
            add("formid-d", r_dident);
            add("dirac-vs-d", r_dvd);
        }
    }
    return rep;
}

/// Catalog of six-dimensional nilpotent Lie algebras used by the witness search
/// (each entry is Jacobi-checked on load).
inline const std::vector<std::pair<std::string, std::string>>& nilpotent_catalog6() {
    static const std::vector<std::pair<std::string, std::string>> cat = {
        {"h1", "0,0,0,0,0,0"},
        {"h2", "0,0,0,0,12,34"},
        {"h3", "0,0,0,0,0,12+34"},
        {"h4", "0,0,0,0,12,14+23"},
        {"h5", "0,0,0,0,13+42,14+23"},
        {"h6", "0,0,0,0,12,13"},
        {"h7", "0,0,0,12,13,23"},
        {"h8", "0,0,0,0,0,12"},
        {"h9", "0,0,0,0,12,14+25"},
        {"h10", "0,0,0,12,13,14"},
        {"h11", "0,0,0,12,13,14+23"},
        {"h12", "0,0,0,12,13,24"},
        {"h13", "0,0,0,12,13+14,24"},
        {"h14", "0,0,0,12,14,13+42"},
        {"h15", "0,0,0,12,13+42,14+23"},
        {"h16", "0,0,0,12,14,24"},
    };
    return cat;
}

/// Relabel a model by a signed permutation: f_i = s_i e_{perm(i)}.
template <class S>
LieAlgebraModel<S> signed_permutation_model(const LieAlgebraModel<S>& model,
                                            const std::vector<int>& perm,
                                            const std::vector<int>& signs) {
    const int n = model.n;
    Matrix<S> sub(n, n);  // e^{perm(i)} contributes to f^i: e^j = s_a f^a where perm(a) = j
    for (int a = 1; a <= n; ++a)
        sub(perm[a - 1] - 1, a - 1) = scalar_traits<S>::from_int(signs[a - 1]);
    LieAlgebraModel<S> out;
    out.n = n;
    out.unimodular = model.unimodular;
    for (int k = 1; k <= n; ++k) {
        const auto& src = model.dcoframe[perm[k - 1] - 1];
        MultiForm<S> img = substitute_coframe(sub, src);
        out.dcoframe.push_back(scalar_traits<S>::from_int(signs[k - 1]) * img);
    }
    out.salamon = emit_salamon(out);
    return out;
}

template <class S>
struct WitnessHit {
    SpecialType type;
    std::string base_name;
    std::string salamon;  // relabelled algebra
    std::vector<int> perm, signs;
};

/// Search the catalog, relabelled by S_6 x {identity, flip e_1}, for straight-structure
/// witnesses of the special torsion types (the structure is the fixed auto-pure one).
template <class S>
std::vector<WitnessHit<S>> find_special_witnesses(bool first_only_per_type = true) {
    auto mod = build_spin_module<S>(6);
    auto psi = mod->auto_pure(mod);
    GenMetric<S> gm(MetricData<S>::identity(6), MultiForm<S>(6));
    auto su = build_su_m(gm, MultiForm<S>(6), scalar_traits<S>::one(), psi, psi);
    std::vector<WitnessHit<S>> hits;
    auto have = [&](SpecialType t) {
        for (const auto& h : hits)
            if (h.type == t) return true;
        return false;
    };
    std::vector<int> perm(6);
    std::iota(perm.begin(), perm.end(), 1);
    for (const auto& [name, sal] : nilpotent_catalog6()) {
        auto base = parse_model<S>(sal);
        std::vector<int> p = perm;
        do {
            for (int mask = 0; mask < 2; ++mask) {
                std::vector<int> signs(6, 1);
                if (mask) signs[0] = -1;
                auto model = signed_permutation_model(base, p, signs);
                FluxData<S> flux(model, MultiForm<S>(6), MultiForm<S>(6),
                                 scalar_traits<S>::one());
                ModelStructure<S> ms{model, flux, su};
                SpecialType t;
                try {
                    t = classify_special_type(ms);
                } catch (const std::exception&) {
                    continue;
                }
                if (t == SpecialType::other) continue;
                if (first_only_per_type && have(t)) continue;
                hits.push_back({t, name, model.salamon, p, signs});
            }
            if (first_only_per_type && hits.size() >= 4) return hits;
        } while (std::next_permutation(p.begin(), p.end()));
    }
    return hits;
}

/// susy-check: the twisted-form / spinor-field equivalence on a scenario.
template <class S>
Report susy_roundtrip(const PreparedScenario<S>& ps, std::uint64_t seed = 1, int probes_per_field = 10) {
    using traits = scalar_traits<S>;
    using namespace verify_detail;
    Report rep;
    rep.suite = "susy-check";
    rep.mode = traits::exact ? "exact" : "float";
    rep.fields = {{"scenario", ps.text.name.empty() ? "(unnamed)" : ps.text.name},
                  {"algebra", ps.model.salamon},
                  {"seed", std::to_string(seed)}};
    const double tol = traits::exact ? 0.0 : 1e-10;
    const int n = ps.model.n;
    const auto& ms = ps.structure;
    MultiForm<S> F0 = ps.F0 ? *ps.F0 : MultiForm<S>(n);
    MultiForm<S> F1 = ps.F1 ? *ps.F1 : MultiForm<S>(n);

    // (a) RR membership of the given fluxes
    {
        double r = 0;
        std::string note;
        if (!F0.empty()) {
            auto space = rr_space(ms.su, F0.parity());
            auto mem = rr_membership(space, F0);
            if (!mem.is_rr) {
                r = 1;
                note = "F0 blocks:";
                for (const auto& t : mem.offending_blocks) note += " " + t;
            }
        }
        if (!F1.empty()) {
            auto space = rr_space(ms.su, F1.parity());
            auto mem = rr_membership(space, F1);
            if (!mem.is_rr) {
                r = 1;
                note += " F1 not RR";
            }
        }
        rep.checks.push_back({"rr-membership", r <= tol, r, note});
    }
    // (b) residual families vanish together
    auto residual_sides = [&](const ModelStructure<S>& m2, const MultiForm<S>& f0,
                              const MultiForm<S>& f1) {
        auto [r0, r1] = dh_residual(m2, f0, f1);
        double dh_side = std::max(r0.approx_max(), r1.approx_max());
        auto [gl, gr] = gravitino_residual(m2, f0, f1);
        auto [dl, dr] = modified_dilatino_residual(m2);
        double sp_side = std::max(dl.approx_max(), dr.approx_max());
        for (const auto& s : gl) sp_side = std::max(sp_side, s.approx_max());
        for (const auto& s : gr) sp_side = std::max(sp_side, s.approx_max());
        return std::pair<double, double>{dh_side, sp_side};
    };
    auto [dh0, sp0] = residual_sides(ms, F0, F1);
    rep.checks.push_back({"dh-residual", dh0 <= tol, dh0, ""});
    rep.checks.push_back({"spinor-residual", sp0 <= tol, sp0, ""});

    // implication probing: unit bumps of H, alpha (closed directions), F0, F1 break both sides
    {
        RationalRng rng(seed);
        auto closed_basis = [&](int degree) {
            std::vector<MultiForm<S>> out;
            const std::size_t N = std::size_t{1} << n;
            std::vector<Blade> blades;
            for (Blade b = 0; b < N; ++b)
                if (blade_degree(b) == degree) blades.push_back(b);
            Matrix<S> M(N, blades.size());
            for (std::size_t c = 0; c < blades.size(); ++c) {
                auto img = ms.model.d(MultiForm<S>::blade_form(n, blades[c])).dense();
                for (std::size_t r = 0; r < N; ++r) M(r, c) = img[r];
            }
            for (auto& v : kernel_basis(M)) {
                MultiForm<S> f(n);
                for (std::size_t c = 0; c < blades.size(); ++c)
                    if (!traits::is_zero(v[c])) f.add_term(blades[c], v[c]);
                out.push_back(std::move(f));
            }
            return out;
        };
        auto h3 = closed_basis(3);
        auto a1 = closed_basis(1);
        int broken = 0, total = 0;
        auto probe = [&](const ModelStructure<S>& m2, const MultiForm<S>& f0,
                         const MultiForm<S>& f1) {
            auto [dh, sp] = residual_sides(m2, f0, f1);
            ++total;
            if (dh > tol && sp > tol) ++broken;
        };
        for (int t = 0; t < probes_per_field; ++t) {
            // H bump
            {
                auto bump = h3[rng.int_in(0, static_cast<long>(h3.size()) - 1)];
                ModelStructure<S> m2{ms.model,
                                     FluxData<S>(ms.model, ms.flux.H + bump, ms.flux.alpha,
                                                 ms.flux.c_phi),
                                     ms.su};
                probe(m2, F0, F1);
            }
            // alpha bump
            {
                auto bump = a1[rng.int_in(0, static_cast<long>(a1.size()) - 1)];
                ModelStructure<S> m2{ms.model,
                                     FluxData<S>(ms.model, ms.flux.H, ms.flux.alpha + bump,
                                                 ms.flux.c_phi),
                                     ms.su};
                probe(m2, F0, F1);
            }
            // F bumps: single blades of the right parity
            for (int which = 0; which < 2; ++which) {
                int par = (which == 0) ? (F0.empty() ? 1 : static_cast<int>(F0.parity() == Parity::odd))
                                       : (F1.empty() ? 0 : static_cast<int>(F1.parity() == Parity::odd));
                Blade b;
                do {
                    b = static_cast<Blade>(rng.int_in(0, (1 << n) - 1));
                } while (blade_degree(b) % 2 != par);
                auto bump = MultiForm<S>::blade_form(n, b);
                if (which == 0)
                    probe(ms, F0 + bump, F1);
                else
                    probe(ms, F0, F1 + bump);
            }
        }
        double r = (broken == total) ? 0.0 : 1.0;
        rep.checks.push_back({"perturbation-probes", r == 0.0, r,
                              "broken=" + std::to_string(broken) + "/" + std::to_string(total)});
    }

    // (c) IIA/IIB consistency via the critical-point phases
    {
        auto d_rho0 = d_H_dilaton(ms.model, ms.flux.H, ms.flux.alpha, ms.su.rho0);
        auto d_rho1 = d_H_dilaton(ms.model, ms.flux.H, ms.flux.alpha, ms.su.rho1);
        auto dH_exact = [&](const MultiForm<S>& f) {
            if (f.empty()) return true;
            const std::size_t N = std::size_t{1} << n;
            Matrix<S> M = d_H_matrix(ms.model, ms.flux.H);
            Matrix<S> aug(N, N + 1);
            auto dense = f.dense();
            for (std::size_t r = 0; r < N; ++r) {
                for (std::size_t c = 0; c < N; ++c) aug(r, c) = M(r, c);
                aug(r, N) = dense[r];
            }
            return rank(M) == rank(aug);
        };
        auto real_candidate = [&](const MultiForm<S>& drho) -> std::optional<MultiForm<S>> {
            // F_b with drho in {-hat(F_b), i hat(F_b)}: candidates -hat(drho), -i hat(drho)
            for (int opt = 0; opt < 2; ++opt) {
                MultiForm<S> cand =
                    (opt == 0) ? -hat(drho)
                               : (-traits::imag_unit()) * hat(drho);
                if (cand.imag_part().empty()) return cand;
            }
            return std::nullopt;
        };
        // IIB: rho1 unconstrained (d rho1 = 0), rho0 constrained by a real odd F_b;
        // IIA: rho0 unconstrained, rho1 constrained (d rho1 in {-F_b, i F_b}).
        // Both verdicts are findings; scenario expectations gate pass/fail.
        bool iib_ok = d_rho1.empty();
        std::string iib_note = iib_ok ? "yes" : "no";
        if (iib_ok && !d_rho0.empty()) {
            auto fb = real_candidate(d_rho0);
            iib_ok = fb.has_value();
            if (iib_ok) {
                auto space = rr_space(ms.su, Parity::odd);
                iib_ok = is_rr(space, *fb) && dH_exact(*fb);
                // algebraic constraint F_b . Psi_L = 0, hat(F_b) . Psi_R = 0
                double r = std::max(clifford_act(*fb, ms.su.psiL).approx_max(),
                                    clifford_act(hat(*fb), ms.su.psiR).approx_max());
                iib_ok = iib_ok && r <= tol;
            }
            iib_note = iib_ok ? ("yes Fb=" + print_form(*fb)) : "no";
        }
        rep.checks.push_back({"iib-consistent", true, 0.0, iib_note});
        bool iia_ok = d_rho0.empty();
        std::string iia_note = iia_ok ? "yes" : "no";
        if (iia_ok && !d_rho1.empty()) {
            std::optional<MultiForm<S>> fb;
            for (int opt = 0; opt < 2; ++opt) {
                MultiForm<S> cand = (opt == 0) ? -d_rho1 : (-traits::imag_unit()) * d_rho1;
                if (cand.imag_part().empty()) {
                    fb = cand;
                    break;
                }
            }
            iia_ok = fb.has_value();
            if (iia_ok) {
                auto space = rr_space(ms.su, Parity::even);
                iia_ok = is_rr(space, *fb) && dH_exact(*fb);
                double r = std::max(clifford_act(*fb, ms.su.psiL).approx_max(),
                                    clifford_act(hat(*fb), ms.su.psiR).approx_max());
                iia_ok = iia_ok && r <= tol;
            }
            iia_note = iia_ok ? ("yes Fb=" + print_form(*fb)) : "no";
        }
        rep.checks.push_back({"iia-consistent", true, 0.0, iia_note});
        // expectation flags from the scenario file
        for (const auto& [key, got] : {std::pair<std::string, bool>{"iib", iib_ok},
                                       std::pair<std::string, bool>{"iia", iia_ok}}) {
            auto it = ps.text.expect.find(key);
            if (it == ps.text.expect.end()) continue;
            bool want = (it->second == "true");
            rep.checks.push_back({"expect-" + key, got == want, got == want ? 0. : 1.,
                                  got ? "yes" : "no"});
        }
    }
    // (d) Hodge-duality partner consistency
    {
        GenMetric<S> gm(MetricData<S>::identity(n), MultiForm<S>(n));
        RationalRng rng(seed + 7);
        double r = 0;
        for (int t = 0; t < 5; ++t) {
            auto Fb = rng.form<S>(n, -1, 1, true);
            auto Fa = hodge_dual_partner(Fb, gm);
            r = std::max(r, form_res(hat(Fa) + g_tilde(gm.g, hat(Fb))));
            int s = ((n * (n + 1) / 2) % 2) ? -1 : 1;
            r = std::max(r, form_res(hodge_dual_partner(Fa, gm) - traits::from_int(s) * Fb));
        }
        rep.checks.push_back({"hodge-partner", r <= tol, r, ""});
    }
    return rep;
}

template <class S>
Report no_go_probe(const PreparedScenario<S>& ps) {
    using traits = scalar_traits<S>;
    Report rep;
    rep.suite = "no-go";
    rep.mode = traits::exact ? "exact" : "float";
    rep.fields = {{"scenario", ps.text.name.empty() ? "(unnamed)" : ps.text.name},
                  {"algebra", ps.model.salamon}};
    const auto& ms = ps.structure;
    auto mod = ms.su.psiL.module;
    auto kernel = gravdil_witness_kernel(ms.model, mod, ms.flux.H, ms.flux.alpha);
    rep.fields.push_back({"witness-kernel-dim", std::to_string(kernel.size())});
    if (auto it = ps.text.expect.find("kernel"); it != ps.text.expect.end()) {
        bool want_empty = (it->second == "empty");
        bool ok = want_empty == kernel.empty();
        rep.checks.push_back({"expect-kernel", ok, ok ? 0.0 : 1.0, it->second});
    }
    if (kernel.empty()) {
        rep.checks.push_back({"witness-kernel", true, 0.0, "empty"});
        return rep;
    }
    auto cr = curvature_report(ms.model, mod, ms.flux.H, ms.flux.alpha, &kernel.front());
    double r1 = traits::approx_abs(cr.scalar_plus - traits::from_int(2) * cr.laplace_phi_proxy);
    double r2 = traits::approx_abs(cr.scalar_plus + traits::from_int(3) * cr.h_norm_sq);
    const double tol = traits::exact ? 0.0 : 1e-10;
    rep.checks.push_back({"scal-identity", r1 <= tol, r1, "S+ = 2 d*alpha"});
    rep.checks.push_back({"dilH-identity", r2 <= tol, r2, "S+ = -3|H|^2"});
    return rep;
}

}  // namespace gg
