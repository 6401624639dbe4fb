#pragma once

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <string>
#include <vector>

#include "gg/multiform.hpp"
#include "gg/scalar.hpp"

namespace gg {

// Form literal grammar: terms like `3*e12 - (1/2)*e3456 + (0,1)*e135`; `eK` wedges basis
// covectors with ascending digits; `(a,b)` is a+bi; bare scalars are degree-0 terms;
// whitespace is insignificant. Numbers are integers, fractions a/b, or decimals.

namespace literal_detail {

inline void skip_ws(const std::string& s, std::size_t& i) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
}

template <class S>
S parse_real(const std::string& s, std::size_t& i) {
    skip_ws(s, i);
    bool neg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = (s[i++] == '-');
    skip_ws(s, i);
    std::string digits, frac;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) digits += s[i++];
    if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) frac += s[i++];
    }
    if (digits.empty() && frac.empty()) throw std::invalid_argument("form literal: number expected");
    long num = std::stol(digits.empty() ? "0" : digits);
    long den = 1;
    for (char c : frac) {
        num = num * 10 + (c - '0');
        den *= 10;
    }
    skip_ws(s, i);
    if (i < s.size() && s[i] == '/') {
        ++i;
        skip_ws(s, i);
        std::string d2;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) d2 += s[i++];
        if (d2.empty()) throw std::invalid_argument("form literal: denominator expected");
        den *= std::stol(d2);
    }
    if (den == 0) throw std::invalid_argument("form literal: zero denominator");
    S v = scalar_traits<S>::from_ratio(num, den);
    return neg ? -v : v;
}

template <class S>
S parse_scalar(const std::string& s, std::size_t& i) {
    skip_ws(s, i);
    if (i < s.size() && s[i] == '(') {
        // either a parenthesised real "(1/2)" or a complex pair "(a,b)"
        ++i;
        S re = parse_real<S>(s, i);
        skip_ws(s, i);
        if (i < s.size() && s[i] == ')') {
            ++i;
            return re;
        }
        if (i >= s.size() || s[i] != ',') throw std::invalid_argument("form literal: ',' expected");
        ++i;
        S im = parse_real<S>(s, i);
        skip_ws(s, i);
        if (i >= s.size() || s[i] != ')') throw std::invalid_argument("form literal: ')' expected");
        ++i;
        return re + scalar_traits<S>::imag_unit() * im;
    }
    return parse_real<S>(s, i);
}

}  // namespace literal_detail

template <class S>
MultiForm<S> parse_form(const std::string& text, int n) {
    using namespace literal_detail;
    MultiForm<S> out(n);
    std::size_t i = 0;
    skip_ws(text, i);
    if (i == text.size()) return out;
    bool first = true;
    while (i < text.size()) {
        skip_ws(text, i);
        if (i == text.size()) break;
        int sign = 1;
        if (text[i] == '+' || text[i] == '-') {
            sign = (text[i] == '-') ? -1 : 1;
            ++i;
        } else if (!first) {
            throw std::invalid_argument("form literal: '+' or '-' expected between terms");
        }
        first = false;
        skip_ws(text, i);
        S coef = scalar_traits<S>::one();
        bool have_coef = false;
        if (i < text.size() && text[i] != 'e') {
            coef = parse_scalar<S>(text, i);
            have_coef = true;
            skip_ws(text, i);
            if (i < text.size() && text[i] == '*') {
                ++i;
                skip_ws(text, i);
            }
        }
        Blade b = 0;
        if (i < text.size() && text[i] == 'e') {
            ++i;
            int prev = 0;
            bool any = false;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
                int d = text[i] - '0';
                if (d < 1 || d > n)
                    throw std::invalid_argument("form literal: index out of range");
                if (d <= prev)
                    throw std::invalid_argument("form literal: blade indices must ascend");
                b |= Blade{1} << (d - 1);
                prev = d;
                any = true;
                ++i;
            }
            if (!any) throw std::invalid_argument("form literal: blade digits expected after 'e'");
        } else if (!have_coef) {
            throw std::invalid_argument("form literal: term expected");
        }
        out.add_term(b, sign < 0 ? -coef : coef);
        skip_ws(text, i);
    }
    return out;
}

template <class S>
std::string print_form(const MultiForm<S>& f) {
    using traits = scalar_traits<S>;
    if (f.empty()) return "0";
    // order terms by (degree, blade mask) for stable output
    std::vector<std::pair<Blade, S>> terms(f.terms().begin(), f.terms().end());
    std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
        int da = blade_degree(a.first), db = blade_degree(b.first);
        return da != db ? da < db : a.first < b.first;
    });
    std::string out;
    for (const auto& [b, c] : terms) {
        std::string blade;
        if (b != 0) {
            blade = "e";
            for (int i = 1; i <= f.dimension(); ++i)
                if (b & (Blade{1} << (i - 1))) blade += static_cast<char>('0' + i);
        }
        S coef = c;
        std::string sign = " + ";
        if (traits::is_real(coef) && !traits::is_positive(coef) && !traits::is_zero(coef)) {
            sign = " - ";
            coef = -coef;
        }
        std::string cs = traits::display(coef);
        std::string term;
        if (blade.empty())
            term = cs;
        else if (cs == "1")
            term = blade;
        else
            term = cs + "*" + blade;
        if (out.empty())
            out = (sign == " - " ? "-" : "") + term;
        else
            out += sign + term;
    }
    return out;
}

}  // namespace gg
