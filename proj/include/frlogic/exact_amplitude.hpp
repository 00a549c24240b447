// Copyright 2026 The frlogic Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Exact amplitudes in the multiquadratic field Q[sqrt2, sqrt3, sqrt5], plus
 * the floating complex amplitude used for oracle and phase runs.
 */
#pragma once

#include <array>
#include <cctype>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>

#include <gmpxx.h>

#include "error.hpp"

namespace frlogic {

using FloatAmp = std::complex<double>;

/**
 * Exact element a + b*sqrt2 + c*sqrt3 + d*sqrt6 (+ the sqrt5 family).
 *
 * Coefficients are indexed by a bit mask over the primes {2, 3, 5}: mask 0 is
 * the rational part, mask 1 is sqrt2, mask 2 is sqrt3, mask 3 is sqrt6, and
 * masks 4..7 are sqrt5, sqrt10, sqrt15, sqrt30. Products of radicals reduce
 * with sqrt(m)*sqrt(n) = gcd-part * sqrt(m xor n), so the set is closed under
 * + - * and, via conjugation, under division by nonzero elements.
 */
class QuadAmp {
  public:
    static constexpr std::size_t kPrimeCount = 3;
    static constexpr std::size_t kTermCount = std::size_t{1} << kPrimeCount;
    static constexpr std::array<unsigned, kPrimeCount> kPrimes{2, 3, 5};

    QuadAmp() = default;
    QuadAmp(long value) { coeffs_[0] = value; } // NOLINT(google-explicit-constructor)
    QuadAmp(mpq_class value) { // NOLINT(google-explicit-constructor)
        value.canonicalize();
        coeffs_[0] = std::move(value);
    }

    /// a + b*sqrt2 + c*sqrt3 + d*sqrt6.
    static QuadAmp from_terms(mpq_class a, mpq_class b, mpq_class c, mpq_class d) {
        QuadAmp q;
        q.coeffs_[0] = std::move(a);
        q.coeffs_[1] = std::move(b);
        q.coeffs_[2] = std::move(c);
        q.coeffs_[3] = std::move(d);
        q.canonicalize();
        return q;
    }

    /// coefficient * sqrt(radical) for a squarefree radical built from 2, 3, 5.
    static QuadAmp term(mpq_class coefficient, unsigned radical) {
        const auto mask = mask_of_radical(radical);
        if (!mask) {
            throw Error(ErrorKind::NotRepresentable,
                        "sqrt" + std::to_string(radical) + " is outside Q[sqrt2,sqrt3,sqrt5]");
        }
        QuadAmp q;
        q.coeffs_[*mask] = std::move(coefficient);
        q.canonicalize();
        return q;
    }

    static QuadAmp sqrt2() { return term(1, 2); }
    static QuadAmp sqrt3() { return term(1, 3); }
    static QuadAmp sqrt6() { return term(1, 6); }
    static QuadAmp inv_sqrt2() { return term(mpq_class(1, 2), 2); }
    static QuadAmp inv_sqrt3() { return term(mpq_class(1, 3), 3); }
    static QuadAmp inv_sqrt6() { return term(mpq_class(1, 6), 6); }
    static QuadAmp inv_sqrt12() { return term(mpq_class(1, 6), 3); }

    /// Square root of a non-negative rational, when it lies in the field.
    static QuadAmp sqrt_of(const mpq_class &value) {
        if (sgn(value) < 0) {
            throw Error(ErrorKind::NotRepresentable, "square root of a negative number");
        }
        if (sgn(value) == 0) {
            return {};
        }
        // sqrt(n/d) = sqrt(n*d)/d
        mpz_class m = value.get_num() * value.get_den();
        unsigned radical = 1;
        mpz_class outside = 1;
        for (unsigned p : kPrimes) {
            unsigned count = 0;
            while (mpz_divisible_ui_p(m.get_mpz_t(), p) != 0) {
                mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
                ++count;
            }
            for (unsigned i = 0; i < count / 2; ++i) {
                outside *= p;
            }
            if (count % 2 == 1) {
                radical *= p;
            }
        }
        if (mpz_perfect_square_p(m.get_mpz_t()) == 0) {
            throw Error(ErrorKind::NotRepresentable,
                        "sqrt(" + value.get_str() + ") is outside Q[sqrt2,sqrt3,sqrt5]");
        }
        mpz_class root;
        mpz_sqrt(root.get_mpz_t(), m.get_mpz_t());
        mpq_class coefficient(outside * root, value.get_den());
        coefficient.canonicalize();
        return term(coefficient, radical);
    }

    /// Square root of a value that must be a non-negative rational.
    static QuadAmp sqrt_of(const QuadAmp &value) {
        if (!value.is_rational()) {
            throw Error(ErrorKind::NotRepresentable,
                        "square root of irrational " + value.str());
        }
        return sqrt_of(value.rational());
    }

    [[nodiscard]] const mpq_class &coeff(std::size_t mask) const { return coeffs_.at(mask); }
    [[nodiscard]] const mpq_class &a() const { return coeffs_[0]; }
    [[nodiscard]] const mpq_class &b() const { return coeffs_[1]; }
    [[nodiscard]] const mpq_class &c() const { return coeffs_[2]; }
    [[nodiscard]] const mpq_class &d() const { return coeffs_[3]; }
    [[nodiscard]] const mpq_class &rational() const { return coeffs_[0]; }

    [[nodiscard]] bool is_zero() const {
        for (const auto &c : coeffs_) {
            if (sgn(c) != 0) {
                return false;
            }
        }
        return true;
    }

    [[nodiscard]] bool is_rational() const {
        for (std::size_t i = 1; i < kTermCount; ++i) {
            if (sgn(coeffs_[i]) != 0) {
                return false;
            }
        }
        return true;
    }

    [[nodiscard]] bool is_one() const { return is_rational() && coeffs_[0] == 1; }

    /// True when only the rational/sqrt2/sqrt3/sqrt6 coefficients are used.
    [[nodiscard]] bool in_base_ring() const {
        for (std::size_t i = 4; i < kTermCount; ++i) {
            if (sgn(coeffs_[i]) != 0) {
                return false;
            }
        }
        return true;
    }

    QuadAmp &operator+=(const QuadAmp &rhs) {
        for (std::size_t i = 0; i < kTermCount; ++i) {
            coeffs_[i] += rhs.coeffs_[i];
        }
        return *this;
    }
    QuadAmp &operator-=(const QuadAmp &rhs) {
        for (std::size_t i = 0; i < kTermCount; ++i) {
            coeffs_[i] -= rhs.coeffs_[i];
        }
        return *this;
    }
    QuadAmp &operator*=(const QuadAmp &rhs) {
        *this = *this * rhs;
        return *this;
    }
    QuadAmp &operator/=(const QuadAmp &rhs) {
        *this = *this / rhs;
        return *this;
    }

    friend QuadAmp operator+(QuadAmp lhs, const QuadAmp &rhs) { return lhs += rhs; }
    friend QuadAmp operator-(QuadAmp lhs, const QuadAmp &rhs) { return lhs -= rhs; }
    friend QuadAmp operator-(QuadAmp value) {
        for (auto &c : value.coeffs_) {
            c = -c;
        }
        return value;
    }

    friend QuadAmp operator*(const QuadAmp &lhs, const QuadAmp &rhs) {
        QuadAmp out;
        for (std::size_t i = 0; i < kTermCount; ++i) {
            if (sgn(lhs.coeffs_[i]) == 0) {
                continue;
            }
            for (std::size_t j = 0; j < kTermCount; ++j) {
                if (sgn(rhs.coeffs_[j]) == 0) {
                    continue;
                }
                out.coeffs_[i ^ j] += lhs.coeffs_[i] * rhs.coeffs_[j] * shared_factor(i & j);
            }
        }
        return out;
    }

    friend QuadAmp operator/(const QuadAmp &lhs, const QuadAmp &rhs) { return lhs * rhs.inverse(); }

    friend bool operator==(const QuadAmp &lhs, const QuadAmp &rhs) { return lhs.coeffs_ == rhs.coeffs_; }
    friend bool operator!=(const QuadAmp &lhs, const QuadAmp &rhs) { return !(lhs == rhs); }

    /// Multiplicative inverse by successive Galois conjugation.
    [[nodiscard]] QuadAmp inverse() const {
        if (is_zero()) {
            throw Error(ErrorKind::InvalidArgument, "division by zero amplitude");
        }
        QuadAmp reduced = *this;
        QuadAmp numerator(1);
        for (std::size_t bit = 0; bit < kPrimeCount; ++bit) {
            const QuadAmp conj = reduced.conjugate_at(bit);
            numerator *= conj;
            reduced *= conj;
        }
        // reduced is now rational and nonzero
        const mpq_class scale = 1 / reduced.coeffs_[0];
        for (auto &c : numerator.coeffs_) {
            c *= scale;
        }
        return numerator;
    }

    /// Exact sign (-1, 0, +1) of the real number this element denotes.
    [[nodiscard]] int sign() const { return sign_below(kPrimeCount); }

    friend bool operator<(const QuadAmp &lhs, const QuadAmp &rhs) { return (lhs - rhs).sign() < 0; }
    friend bool operator>(const QuadAmp &lhs, const QuadAmp &rhs) { return rhs < lhs; }
    friend bool operator<=(const QuadAmp &lhs, const QuadAmp &rhs) { return !(rhs < lhs); }
    friend bool operator>=(const QuadAmp &lhs, const QuadAmp &rhs) { return !(lhs < rhs); }

    [[nodiscard]] QuadAmp abs() const { return sign() < 0 ? -*this : *this; }

    [[nodiscard]] double to_double() const {
        double out = 0.0;
        for (std::size_t i = 0; i < kTermCount; ++i) {
            if (sgn(coeffs_[i]) != 0) {
                out += coeffs_[i].get_d() * std::sqrt(static_cast<double>(radical_of(i)));
            }
        }
        return out;
    }

    /// Canonical text: terms ordered 1, sqrt2, sqrt3, sqrt6, sqrt5, ..., zeros omitted.
    [[nodiscard]] std::string str() const {
        std::string out;
        for (std::size_t i = 0; i < kTermCount; ++i) {
            const mpq_class &c = coeffs_[i];
            if (sgn(c) == 0) {
                continue;
            }
            const bool negative = sgn(c) < 0;
            const mpq_class magnitude = negative ? mpq_class(-c) : c;
            if (out.empty()) {
                out += negative ? "-" : "";
            } else {
                out += negative ? " - " : " + ";
            }
            if (i == 0) {
                out += magnitude.get_str();
            } else if (magnitude == 1) {
                out += "sqrt" + std::to_string(radical_of(i));
            } else {
                out += magnitude.get_str() + "*sqrt" + std::to_string(radical_of(i));
            }
        }
        return out.empty() ? "0" : out;
    }

    static constexpr unsigned radical_of(std::size_t mask) {
        unsigned r = 1;
        for (std::size_t bit = 0; bit < kPrimeCount; ++bit) {
            if ((mask >> bit) & 1U) {
                r *= kPrimes[bit];
            }
        }
        return r;
    }

    static std::optional<std::size_t> mask_of_radical(unsigned radical) {
        std::size_t mask = 0;
        for (std::size_t bit = 0; bit < kPrimeCount; ++bit) {
            if (radical % kPrimes[bit] == 0) {
                radical /= kPrimes[bit];
                mask |= std::size_t{1} << bit;
                if (radical % kPrimes[bit] == 0) {
                    return std::nullopt;
                }
            }
        }
        if (radical != 1) {
            return std::nullopt;
        }
        return mask;
    }

  private:
    static mpq_class shared_factor(std::size_t mask) { return mpq_class(radical_of(mask)); }

    void canonicalize() {
        for (auto &c : coeffs_) {
            c.canonicalize();
        }
    }

    [[nodiscard]] QuadAmp conjugate_at(std::size_t bit) const {
        QuadAmp out = *this;
        for (std::size_t i = 0; i < kTermCount; ++i) {
            if ((i >> bit) & 1U) {
                out.coeffs_[i] = -out.coeffs_[i];
            }
        }
        return out;
    }

    // Sign of an element using only primes with index < limit. Splits
    // x = u + v*sqrt(p) on the highest prime and compares u^2 with p*v^2.
    [[nodiscard]] int sign_below(std::size_t limit) const {
        if (limit == 0) {
            return sgn(coeffs_[0]);
        }
        const std::size_t bit = limit - 1;
        QuadAmp u;
        QuadAmp v;
        for (std::size_t i = 0; i < kTermCount; ++i) {
            if ((i >> bit) & 1U) {
                v.coeffs_[i & ~(std::size_t{1} << bit)] = coeffs_[i];
            } else {
                u.coeffs_[i] = coeffs_[i];
            }
        }
        const int su = u.sign_below(bit);
        const int sv = v.sign_below(bit);
        if (sv == 0) {
            return su;
        }
        if (su == 0) {
            return sv;
        }
        if (su == sv) {
            return su;
        }
        const QuadAmp diff = u * u - QuadAmp(static_cast<long>(kPrimes[bit])) * v * v;
        return su * diff.sign_below(bit);
    }

    std::array<mpq_class, kTermCount> coeffs_{};
};

inline std::ostream &operator<<(std::ostream &os, const QuadAmp &q) { return os << q.str(); }

inline QuadAmp quad_add(const QuadAmp &x, const QuadAmp &y) { return x + y; }
inline QuadAmp quad_mul(const QuadAmp &x, const QuadAmp &y) { return x * y; }
/// |x|^2; every exact amplitude is real, so this is x*x.
inline QuadAmp quad_abs_sq(const QuadAmp &x) { return x * x; }
inline FloatAmp quad_to_float(const QuadAmp &x) { return {x.to_double(), 0.0}; }

/**
 * A parsed amplitude literal. `exact` is empty when the literal uses a
 * float-only construct (decimal phase, `i`, `phase(...)`, `cos`, `sin`).
 */
struct AmpLiteral {
    std::optional<QuadAmp> exact;
    FloatAmp approx{0.0, 0.0};
    std::string text;
};

namespace detail {

class AmpExpressionParser {
  public:
    explicit AmpExpressionParser(std::string_view src) : src_(src) {}

    struct Value {
        std::optional<QuadAmp> exact;
        FloatAmp approx;
    };

    Value parse_expression() {
        if (++depth_ > kMaxDepth) {
            fail("nesting depth below 64");
        }
        struct DepthGuard {
            int &depth;
            ~DepthGuard() { --depth; }
        } guard{depth_};
        Value v = parse_term();
        for (;;) {
            skip_ws();
            if (peek() == '+' || peek() == '-') {
                // A '+'/'-' followed by whitespace and '|' belongs to the ket sum.
                std::size_t save = pos_;
                char op = src_[pos_++];
                skip_ws();
                if (at_end() || peek() == '|') {
                    pos_ = save;
                    return v;
                }
                pos_ = save + 1;
                Value rhs = parse_term();
                v = combine(v, rhs, op);
            } else {
                return v;
            }
        }
    }

    [[nodiscard]] std::size_t position() const { return pos_; }

    [[noreturn]] void fail(const std::string &expected) const {
        throw ParseError(1, pos_ + 1, expected);
    }

  private:
    Value parse_term() {
        Value v = parse_unary();
        for (;;) {
            skip_ws();
            if (peek() == '*' || peek() == '/') {
                char op = src_[pos_++];
                Value rhs = parse_unary();
                v = combine(v, rhs, op);
            } else {
                return v;
            }
        }
    }

    Value parse_unary() {
        bool negate = false;
        for (;;) {
            skip_ws();
            if (peek() == '-') {
                negate = !negate;
            } else if (peek() != '+') {
                break;
            }
            ++pos_;
        }
        Value v = parse_atom();
        if (negate) {
            if (v.exact) {
                v.exact = -*v.exact;
            }
            v.approx = -v.approx;
        }
        return v;
    }

    Value parse_atom() {
        skip_ws();
        if (at_end()) {
            fail("amplitude");
        }
        char ch = peek();
        if (ch == '(') {
            ++pos_;
            Value v = parse_expression();
            expect(')');
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(ch)) != 0 || ch == '.') {
            return parse_number();
        }
        if (std::isalpha(static_cast<unsigned char>(ch)) != 0) {
            std::size_t start = pos_;
            while (!at_end() && std::isalpha(static_cast<unsigned char>(peek())) != 0) {
                ++pos_;
            }
            std::string word(src_.substr(start, pos_ - start));
            if (word == "sqrt") {
                skip_ws();
                if (peek() == '(') {
                    ++pos_;
                    Value inner = parse_expression();
                    expect(')');
                    Value out;
                    out.approx = std::sqrt(inner.approx);
                    if (inner.exact) {
                        if (!inner.exact->is_rational() || sgn(inner.exact->rational()) < 0) {
                            fail("non-negative rational under sqrt");
                        }
                        try {
                            out.exact = QuadAmp::sqrt_of(inner.exact->rational());
                        } catch (const Error &) {
                            out.exact.reset();
                        }
                    }
                    return out;
                }
                std::size_t digits_start = pos_;
                while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())) != 0) {
                    ++pos_;
                }
                if (digits_start == pos_ || pos_ - digits_start > 6) {
                    fail("radical after sqrt");
                }
                unsigned radical = static_cast<unsigned>(
                    std::stoul(std::string(src_.substr(digits_start, pos_ - digits_start))));
                Value out;
                out.approx = std::sqrt(static_cast<double>(radical));
                try {
                    out.exact = QuadAmp::sqrt_of(mpq_class(radical));
                } catch (const Error &) {
                    out.exact.reset();
                }
                return out;
            }
            if (word == "i") {
                return Value{std::nullopt, FloatAmp{0.0, 1.0}};
            }
            if (word == "pi") {
                return Value{std::nullopt, FloatAmp{M_PI, 0.0}};
            }
            if (word == "phase" || word == "cos" || word == "sin") {
                expect('(');
                Value inner = parse_expression();
                expect(')');
                double angle = inner.approx.real();
                if (word == "phase") {
                    return Value{std::nullopt, std::polar(1.0, angle)};
                }
                return Value{std::nullopt, FloatAmp{word == "cos" ? std::cos(angle) : std::sin(angle), 0.0}};
            }
            pos_ = start;
            fail("amplitude");
        }
        fail("amplitude");
    }

    Value parse_number() {
        std::size_t start = pos_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())) != 0) {
            ++pos_;
        }
        std::string integral(src_.substr(start, pos_ - start));
        std::string fraction;
        if (!at_end() && peek() == '.') {
            ++pos_;
            std::size_t fs = pos_;
            while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())) != 0) {
                ++pos_;
            }
            fraction = std::string(src_.substr(fs, pos_ - fs));
        }
        if (integral.empty() && fraction.empty()) {
            fail("number");
        }
        if (integral.size() + fraction.size() > 60) {
            fail("number of at most 60 digits");
        }
        long exponent = 0;
        if (!at_end() && (peek() == 'e' || peek() == 'E')) {
            std::size_t es = pos_ + 1;
            bool negative = false;
            if (es < src_.size() && (src_[es] == '+' || src_[es] == '-')) {
                negative = src_[es] == '-';
                ++es;
            }
            std::size_t ee = es;
            while (ee < src_.size() && ee - es < 4 && std::isdigit(static_cast<unsigned char>(src_[ee])) != 0) {
                ++ee;
            }
            if (ee > es) {
                exponent = std::stol(std::string(src_.substr(es, ee - es)));
                exponent = negative ? -exponent : exponent;
                pos_ = ee;
            }
        }
        if (exponent > 400 || exponent < -400) {
            fail("exponent within 400");
        }
        mpz_class numerator(integral + fraction, 10);
        mpz_class denominator = 1;
        const long shift = exponent - static_cast<long>(fraction.size());
        for (long i = 0; i < (shift < 0 ? -shift : shift); ++i) {
            (shift < 0 ? denominator : numerator) *= 10;
        }
        mpq_class value(numerator, denominator);
        value.canonicalize();
        return Value{QuadAmp(value), FloatAmp{value.get_d(), 0.0}};
    }

    Value combine(const Value &lhs, const Value &rhs, char op) {
        Value out;
        switch (op) {
        case '+':
            out.approx = lhs.approx + rhs.approx;
            if (lhs.exact && rhs.exact) {
                out.exact = *lhs.exact + *rhs.exact;
            }
            break;
        case '-':
            out.approx = lhs.approx - rhs.approx;
            if (lhs.exact && rhs.exact) {
                out.exact = *lhs.exact - *rhs.exact;
            }
            break;
        case '*':
            out.approx = lhs.approx * rhs.approx;
            if (lhs.exact && rhs.exact) {
                out.exact = *lhs.exact * *rhs.exact;
            }
            break;
        default:
            if (rhs.exact ? rhs.exact->is_zero() : std::abs(rhs.approx) == 0.0) {
                fail("nonzero divisor");
            }
            out.approx = lhs.approx / rhs.approx;
            if (lhs.exact && rhs.exact) {
                out.exact = *lhs.exact / *rhs.exact;
            }
            break;
        }
        return out;
    }

    void skip_ws() {
        while (!at_end() && (peek() == ' ' || peek() == '\t')) {
            ++pos_;
        }
    }
    void expect(char ch) {
        skip_ws();
        if (at_end() || peek() != ch) {
            fail(std::string("'") + ch + "'");
        }
        ++pos_;
    }
    [[nodiscard]] bool at_end() const { return pos_ >= src_.size(); }
    [[nodiscard]] char peek() const { return at_end() ? '\0' : src_[pos_]; }

    static constexpr int kMaxDepth = 64;
    std::string_view src_;
    std::size_t pos_ = 0;
    int depth_ = 0;
};

} // namespace detail

/**
 * Parses an amplitude literal from the front of `src`: sums, differences,
 * products and quotients of integers, decimals, `p/q`, `sqrtN`, `sqrt(expr)`,
 * and the float-only `i`, `pi`, `phase(x)`, `cos(x)`, `sin(x)`.
 * `consumed` receives the number of characters used.
 */
inline AmpLiteral parse_amp_literal(std::string_view src, std::size_t *consumed = nullptr) {
    detail::AmpExpressionParser parser(src);
    auto value = parser.parse_expression();
    AmpLiteral out;
    out.exact = std::move(value.exact);
    out.approx = value.approx;
    std::size_t used = parser.position();
    out.text = std::string(src.substr(0, used));
    while (!out.text.empty() && (out.text.back() == ' ' || out.text.back() == '\t')) {
        out.text.pop_back();
    }
    if (consumed != nullptr) {
        *consumed = used;
    }
    return out;
}

/// Parses a whole string as an exact amplitude.
inline QuadAmp parse_quad(std::string_view src) {
    std::size_t used = 0;
    AmpLiteral lit = parse_amp_literal(src, &used);
    while (used < src.size() && (src[used] == ' ' || src[used] == '\t')) {
        ++used;
    }
    if (used != src.size()) {
        throw ParseError(1, used + 1, "end of amplitude");
    }
    if (!lit.exact) {
        throw Error(ErrorKind::NotRepresentable, "'" + std::string(src) + "' has no exact value");
    }
    return *lit.exact;
}

} // namespace frlogic
