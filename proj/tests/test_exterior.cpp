#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gg/exterior.hpp"
#include "gg/form_literal.hpp"
#include "gg/random.hpp"

using namespace gg;
using S = Exact;
using T = scalar_traits<S>;

namespace {
MultiForm<S> F(const std::string& lit, int n = 6) { return parse_form<S>(lit, n); }
}  // namespace

TEST_CASE("wedge basics") {
    CHECK(wedge(F("e1"), F("e2")) == F("e12"));
    CHECK(wedge(F("e1"), F("e1")).empty());
    CHECK(wedge(F("e1 + e2"), F("e34")) == F("e134 + e234"));
    CHECK(wedge(F("e2"), F("e1")) == F("-1*e12"));
    // associativity and graded commutativity on random forms
    RationalRng rng(3);
    for (int t = 0; t < 10; ++t) {
        auto a = rng.form<S>(5, -1, -1, true);
        auto b = rng.form<S>(5, -1, -1, true);
        auto c = rng.form<S>(5, -1, -1, true);
        CHECK(wedge(wedge(a, b), c) == wedge(a, wedge(b, c)));
        for (int p = 0; p <= 5; ++p)
            for (int q = 0; q <= 5; ++q) {
                auto ap = a.degree_part(p), bq = b.degree_part(q);
                auto lhs = wedge(ap, bq);
                auto rhs = wedge(bq, ap);
                if ((p * q) % 2) rhs = -rhs;
                CHECK(lhs == rhs);
            }
    }
    CHECK_THROWS_AS(wedge(F("e1", 4), F("e2", 6)), std::invalid_argument);
}

TEST_CASE("contract basics and anti-derivation") {
    CHECK(contract_dir(1, F("e12")) == F("e2"));
    CHECK(contract_dir(2, F("e12")) == F("-1*e1"));
    CHECK(contract_dir(1, F("1")).empty());
    RationalRng rng(5);
    for (int t = 0; t < 10; ++t) {
        auto X = rng.vector<S>(6);
        for (int p = 0; p <= 6; ++p) {
            auto a = rng.form<S>(6, p, -1, true);
            auto b = rng.form<S>(6, -1, -1, true);
            auto lhs = contract(X, wedge(a, b));
            auto rhs = wedge(contract(X, a), b) +
                       T::from_int(p % 2 ? -1 : 1) * wedge(a, contract(X, b));
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("sign twists") {
    CHECK(hat(F("e1")) == F("-1*e1"));
    CHECK(hat(F("e123")) == F("e123"));
    CHECK(tilde(F("e12")) == F("e12"));
    CHECK(tilde(F("e1")) == F("-1*e1"));
    RationalRng rng(7);
    auto a = rng.form<S>(6, -1, -1, true);
    CHECK(hat(hat(a)) == a);
    CHECK(tilde(tilde(a)) == a);
}

TEST_CASE("mukai pairing") {
    CHECK(T::is_zero(mukai_pair(F("1"), F("1"))));
    CHECK(mukai_pair(F("e12"), F("e3456")) == T::one());
    // independent of the trivialisation: nu1 = e^{2 phi} nu0, rho^{nu1} = e^{-phi} rho^{nu0}
    RationalRng rng(11);
    auto a = rng.form<S>(6, -1, -1, true);
    auto b = rng.form<S>(6, -1, -1, true);
    S t = T::from_ratio(3, 5);
    VolumeElement<S> nu1(6, t * t);
    S inv = T::one() / t;
    CHECK(mukai_pair(inv * a, inv * b, nu1) == mukai_pair(a, b));
    // invariant under simultaneous B-transform
    auto B = rng.form<S>(6, 2, -1, false);
    CHECK(mukai_pair(b_transform(B, a), b_transform(B, b)) == mukai_pair(a, b));
}

TEST_CASE("hodge star") {
    auto g = MetricData<S>::identity(6);
    CHECK(hodge_star(g, F("1")) == F("e123456"));
    CHECK(hodge_star(g, F("e1")) == F("e23456"));
    // star star sign per degree
    RationalRng rng(13);
    for (int n : {4, 5, 6}) {
        auto gn = MetricData<S>::identity(n);
        auto a = rng.form<S>(n, -1, -1, true);
        for (int p = 0; p <= n; ++p) {
            auto ap = a.degree_part(p);
            auto ss = hodge_star(gn, hodge_star(gn, ap));
            auto expect = T::from_int((p * (n - p)) % 2 ? -1 : 1) * ap;
            CHECK(ss == expect);
        }
    }
}

TEST_CASE("formid identities for basis forms, n in 4,5,6, random metrics") {
    RationalRng rng(17);
    for (int n : {4, 5, 6}) {
        int m = n / 2;
        auto g = rng.metric<S>(n);
        for (Blade b = 0; b < (Blade{1} << n); ++b) {
            auto a = MultiForm<S>::blade_form(n, b);
            int p = blade_degree(b);
            int s = (n % 2 == 0) ? ((m + p) % 2 ? -1 : 1) : ((m + 1) % 2 ? -1 : 1);
            CHECK(hodge_star(g, hat(a)) == T::from_int(s) * hat(hodge_star(g, a)));
        }
        // star(X ^ a) = X _| star(tilde a) needs X and its dual identified: orthonormal frame
        auto gid = MetricData<S>::identity(n);
        auto a = rng.form<S>(n, -1, -1, true);
        for (int i = 1; i <= n; ++i) {
            std::vector<S> X(n, T::zero());
            X[i - 1] = T::one();
            CHECK(hodge_star(gid, wedge(MultiForm<S>::basis(n, i), a)) ==
                  contract(X, hodge_star(gid, tilde(a))));
        }
    }
}

TEST_CASE("g_tilde operator") {
    auto g = MetricData<S>::identity(6);
    CHECK(g_tilde(g, F("1")) == F("e123456"));
    RationalRng rng(19);
    auto rho = rng.form<S>(6, -1, -1, true);
    CHECK(g_tilde(g, g_tilde(g, rho)) == -rho);  // (-1)^{n(n+1)/2}, n = 6
    auto tau = rng.form<S>(6, -1, -1, true);
    CHECK(mukai_pair(g_tilde(g, rho), tau) == -mukai_pair(rho, g_tilde(g, tau)));
    // Q^+(rho, rho) = |rho|^2 >= 0 with equality iff rho = 0 (even forms, n = 6)
    auto ev = rng.form<S>(6, -1, 0, false);
    S Q = -mukai_pair(ev, g_tilde(g, ev));
    S l2 = T::zero();
    for (const auto& [b, c] : ev.terms()) l2 += c * c;
    CHECK(Q == l2);
    CHECK(T::is_positive(Q));
}

TEST_CASE("general metric: cholesky and star") {
    RationalRng rng(23);
    auto g = rng.metric<S>(4);
    const auto& L = g.cholesky_factor();
    CHECK((L * L.transposed() - g.matrix()).is_zero());
    // star 1 is the Riemannian volume form sqrt(det g) e^{1..n}
    CHECK(hodge_star(g, F("1", 4)) == g.volume_form());
    CHECK(g.riemannian_volume().pair_top(g.volume_form()) == T::one());
    // star_g star_g sign law holds for the non-identity metric too
    auto a = rng.form<S>(4, 2, -1, true);
    CHECK(hodge_star(g, hodge_star(g, a)) == a);
    // degenerate metric rejected
    Matrix<S> bad = Matrix<S>::identity(3);
    bad(2, 2) = T::zero();
    CHECK_THROWS_AS(MetricData<S>{bad}, std::domain_error);
}

TEST_CASE("volume element") {
    VolumeElement<S> nu(6, T::from_ratio(4, 9));
    CHECK(nu.pair_top(nu.dual_form()) == T::one());
    CHECK_THROWS_AS(VolumeElement<S>(6, T::from_int(-1)), std::invalid_argument);
}

TEST_CASE("form literal roundtrip") {
    auto f = F("3*e12 - (1/2)*e3456 + (0,1)*e135 + 2");
    auto g = parse_form<S>(print_form(f), 6);
    CHECK(f == g);
    CHECK(print_form(MultiForm<S>(6)) == "0");
    CHECK_THROWS_AS(F("e21"), std::invalid_argument);   // indices must ascend
    CHECK_THROWS_AS(F("e17"), std::invalid_argument);   // out of range
    CHECK_THROWS_AS(F("e0"), std::invalid_argument);    // zero index
    // dense view roundtrip
    RationalRng rng(29);
    auto a = rng.form<S>(6, -1, -1, true);
    CHECK(MultiForm<S>::from_dense(6, a.dense()) == a);
}

TEST_CASE("parity tags") {
    CHECK(F("1 + e12").parity() == Parity::even);
    CHECK(F("e1 + e345").parity() == Parity::odd);
    CHECK(F("1 + e1").parity() == Parity::mixed);
}
