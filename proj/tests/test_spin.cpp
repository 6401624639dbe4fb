#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gg/random.hpp"
#include "gg/spin.hpp"

using namespace gg;
using S = Exact;
using T = scalar_traits<S>;

TEST_CASE("module invariants for all supported n") {
    for (int n = 2; n <= 8; ++n) {
        auto mod = build_spin_module<S>(n);  // construction asserts Clifford + equivariance
        int m = n / 2;
        int expect = ((m * (m + 1) / 2) % 2) ? -1 : 1;
        CHECK(mod->a_square == T::from_int(expect));
        // unitarity of the charge conjugation matrix
        RationalRng rng(n);
        auto psi = rng.spinor<S>(mod);
        auto phi = rng.spinor<S>(mod);
        CHECK(q_product(charge_conjugate(psi), charge_conjugate(phi)) ==
              T::conj(q_product(psi, phi)));
        // q(a Psi, Phi) = q(Psi, hat(a) Phi) on blades
        for (Blade b = 0; b < (Blade{1} << n); b += 3) {
            auto a = MultiForm<S>::blade_form(n, b);
            CHECK(q_product(clifford_act(a, psi), phi) ==
                  q_product(psi, clifford_act(hat(a), phi)));
        }
    }
}

TEST_CASE("charge conjugation signs n=4 and n=6") {
    auto m6 = build_spin_module<S>(6);
    CHECK(m6->a_square == T::one());  // m = 3
    auto m4 = build_spin_module<S>(4);
    CHECK(m4->a_square == -T::one());  // m = 2
    // chirality preservation iff m even
    RationalRng rng(1);
    auto p6 = rng.chiral_spinor<S>(m6, Chirality::plus);
    CHECK(m6->chirality_of(charge_conjugate(p6)) == Chirality::minus);
    auto p4 = rng.chiral_spinor<S>(m4, Chirality::plus);
    CHECK(m4->chirality_of(charge_conjugate(p4)) == Chirality::plus);
}

TEST_CASE("volume action") {
    auto mod = build_spin_module<S>(6);
    RationalRng rng(2);
    auto psi = rng.chiral_spinor<S>(mod, Chirality::plus);
    auto vol = MultiForm<S>::top(6);
    CHECK((clifford_act(vol, psi) + T::imag_unit() * psi).is_zero());  // varpi Psi+ = -i Psi+
}

TEST_CASE("clifford action basics") {
    auto mod = build_spin_module<S>(6);
    RationalRng rng(3);
    auto psi = rng.spinor<S>(mod);
    CHECK((gamma_act(1, gamma_act(1, psi)) + psi).is_zero());  // X.X = -g(X,X)
    CHECK((clifford_act(MultiForm<S>::scalar(6, T::one()), psi) - psi).is_zero());
    // star(a) . Psi = hat(a) . varpi . Psi
    auto a = rng.form<S>(6, -1, -1, true);
    auto g = MetricData<S>::identity(6);
    auto lhs = clifford_act(hodge_star(g, a), psi);
    auto rhs = clifford_act(hat(a), clifford_act(MultiForm<S>::top(6), psi));
    CHECK((lhs - rhs).is_zero());
    CHECK_THROWS_AS(clifford_act(MultiForm<S>(4), psi), std::invalid_argument);
}

TEST_CASE("purity") {
    auto mod = build_spin_module<S>(6);
    RationalRng rng(4);
    for (int t = 0; t < 5; ++t) {
        auto psi = rng.chiral_spinor<S>(mod, Chirality::plus);
        auto res = purity_test(psi);
        CHECK(res.is_pure);
        CHECK(res.annihilator_dimension == 3);
        // annihilator spans an isotropic subspace: sum_i z_i w_i = 0 for basis pairs
        for (const auto& z : res.annihilator_basis)
            for (const auto& w : res.annihilator_basis) {
                S ip = T::zero();
                for (int i = 0; i < 6; ++i) ip += z[i] * w[i];
                CHECK(T::is_zero(ip));
            }
    }
    // top Fock state in dimension 4 is pure
    auto m4 = build_spin_module<S>(4);
    auto psi4 = m4->auto_pure(m4);
    CHECK(purity_test(psi4).is_pure);
    // generic mixed-chirality spinor in dimension 8 is not pure
    auto m8 = build_spin_module<S>(8);
    RationalRng rng8(5);
    auto psi8 = rng8.spinor<S>(m8);
    CHECK_FALSE(purity_test(psi8).is_pure);
    CHECK_THROWS_AS(purity_test(Spinor<S>(m4, std::vector<S>(4, T::zero()))),
                    std::invalid_argument);
}

TEST_CASE("complex structure from pure spinor") {
    auto mod = build_spin_module<S>(6);
    // Fock vector annihilated by (e_{2k-1} - i e_{2k})/2 has J e1 = e2 etc.
    std::vector<S> v(8, T::zero());
    v[7] = T::one();  // |111> in the slot basis
    Spinor<S> psi(mod, v);
    REQUIRE(purity_test(psi).is_pure);
    auto J = complex_structure_from_pure(psi);
    CHECK(J(1, 0) == T::one());   // J e1 = e2
    CHECK(J(0, 1) == -T::one());  // J e2 = -e1
    // conjugate spinor gives -J; rescaling gives the same J
    auto Jc = complex_structure_from_pure(charge_conjugate(psi));
    CHECK((J + Jc).is_zero());
    auto Js = complex_structure_from_pure(T::from_ratio(3, 7) * psi);
    CHECK((J - Js).is_zero());
    // random pure spinors: J^2 = -Id and J orthogonal (verified in ctor) plus Jaction
    RationalRng rng(6);
    for (int t = 0; t < 3; ++t) {
        auto p = rng.unit_pure_spinor<S>(mod);
        auto Jr = complex_structure_from_pure(p);
        for (int k = 1; k <= 6; ++k) {
            std::vector<S> JX(6);
            for (int i = 0; i < 6; ++i) JX[i] = Jr(i, k - 1);
            auto lhs = gamma_act(k, p);
            auto rhs = T::imag_unit() * vector_act(JX, p);
            CHECK((lhs - rhs).is_zero());
        }
    }
}

TEST_CASE("fierz examples") {
    auto mod = build_spin_module<S>(6);
    RationalRng rng(7);
    auto psi = rng.unit_chiral_spinor<S>(mod, Chirality::plus);
    // degree-0 part of [A(Psi) x Psi] is mhat = +1 for unit Psi (m = 3)
    auto r0 = fierz(charge_conjugate(psi), psi);
    CHECK(r0.scalar_part() == T::one());
    // degree-0 part of [Psi x Psi] vanishes for chiral Psi, m odd
    auto r1 = fierz(psi, psi);
    CHECK(T::is_zero(r1.scalar_part()));
    CHECK(r1.parity() == Parity::odd);
    CHECK_THROWS_AS(fierz(psi, Spinor<S>(build_spin_module<S>(4), std::vector<S>(4, T::one()))),
                    std::invalid_argument);
}

TEST_CASE("fierz inverse roundtrips") {
    auto mod = build_spin_module<S>(6);
    RationalRng rng(8);
    auto psi = rng.spinor<S>(mod);
    auto phi = rng.spinor<S>(mod);
    auto T1 = fierz_inverse(fierz(psi, phi), mod);
    CHECK((T1 - tensor_square(psi, phi)).is_zero());
    auto F = rng.form<S>(6, -1, -1, true);
    CHECK(fierz_tensor(fierz_inverse(F, mod), mod) == F);
    auto m5 = build_spin_module<S>(5);
    CHECK_THROWS_AS(fierz_inverse(MultiForm<S>(5), m5), std::domain_error);
}

TEST_CASE("su basis blocks") {
    auto mod = build_spin_module<S>(6);
    auto psi = mod->auto_pure(mod);
    auto B = su_basis(psi);  // orthonormality asserted inside
    int cm = 0, cmbar = 0, v = 0;
    for (auto b : B.block) {
        cm += b == SUBlock::cm;
        cmbar += b == SUBlock::cm_bar;
        v += b == SUBlock::v || b == SUBlock::v_bar;
    }
    CHECK(cm == 3);
    CHECK(cmbar == 3);
    CHECK(v == 0);  // V = {0} for m = 3
    // chirality pattern: C + C^m in Delta_+, bar(C^m) + C' in Delta_-
    for (std::size_t i = 0; i < B.vectors.size(); ++i) {
        if (B.block[i] == SUBlock::trivial_psi || B.block[i] == SUBlock::cm)
            CHECK(B.chi[i] == Chirality::plus);
        else
            CHECK(B.chi[i] == Chirality::minus);
    }
    // m = 4: W = lambda^2 (dimension 6), W~ = 0
    auto m8 = build_spin_module<S>(8);
    auto psi8 = m8->auto_pure(m8);
    auto B8 = su_basis(psi8);
    int w = 0, wt = 0;
    for (auto b : B8.block) {
        w += b == SUBlock::w;
        wt += b == SUBlock::w_tilde;
    }
    CHECK(w == 6);
    CHECK(wt == 0);
    CHECK_THROWS_AS(su_basis(T::from_int(2) * psi), std::invalid_argument);
}

TEST_CASE("bilinear contractions") {
    auto mod = build_spin_module<S>(6);
    RationalRng rng(9);
    auto psi = rng.unit_chiral_spinor<S>(mod, Chirality::plus);
    auto phi = rng.spinor<S>(mod);
    // xi = Psi unit: first contraction returns Phi
    auto [f1, s1] = bilinear_contractions(psi, phi, psi);
    CHECK((f1 - phi).is_zero());
    // xi q-orthogonal to Psi: first contraction vanishes
    auto xi = gamma_act(1, charge_conjugate(psi));  // element of the C^m block
    CHECK(T::is_zero(q_product(xi, psi)));
    auto [f2, s2] = bilinear_contractions(psi, phi, xi);
    CHECK(f2.is_zero());
    // random triple, both branches
    auto a = rng.spinor<S>(mod), b = rng.spinor<S>(mod), c = rng.spinor<S>(mod);
    auto [first, second] = bilinear_contractions(a, b, c);
    CHECK((first - q_product(c, a) * b).is_zero());
    CHECK((second - q_product(c, b) * a).is_zero());
}

TEST_CASE("spinor serialisation convention string") {
    auto mod = build_spin_module<S>(6);
    CHECK(mod->convention == "recursive-v1");
}

TEST_CASE("su basis for generic pure spinors in float mode") {
    // generic pure spinors need irrational frame normalisers: float mode handles them
    using F = Floating;
    auto mod = build_spin_module<F>(6);
    RationalRng rng(13);
    auto psi = rng.unit_pure_spinor<F>(mod);
    auto B = su_basis(psi);  // orthonormality asserted inside (1e-12)
    CHECK(B.vectors.size() == 8);
    // the exact-mode error for such spinors is explicit
    auto modx = build_spin_module<S>(6);
    RationalRng rng2(13);
    auto psix = rng2.unit_pure_spinor<S>(modx);
    CHECK_THROWS_AS(su_basis(psix), std::domain_error);
}
