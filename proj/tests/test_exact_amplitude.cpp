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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "frlogic/exact_amplitude.hpp"

namespace {

using frlogic::QuadAmp;

QuadAmp q(const char *text) { return frlogic::parse_quad(text); }

TEST(QuadAdd, AdditiveInverse) { EXPECT_TRUE(quad_add(q("1/sqrt2"), q("-1/sqrt2")).is_zero()); }

TEST(QuadAdd, ConjugatesSum) { EXPECT_EQ(quad_add(q("1 + sqrt2"), q("1 - sqrt2")), QuadAmp(2)); }

TEST(QuadAdd, RationalizesInverseRoot) {
    const QuadAmp sum = quad_add(q("1/sqrt3"), q("1/sqrt3"));
    EXPECT_EQ(sum, QuadAmp::from_terms(0, 0, mpq_class(2, 3), 0));
    EXPECT_EQ(sum.str(), "2/3*sqrt3");
}

TEST(QuadMul, Products) {
    EXPECT_EQ(quad_mul(q("1/sqrt2"), q("1/sqrt2")), QuadAmp(mpq_class(1, 2)));
    EXPECT_EQ(quad_mul(q("1 + sqrt2"), q("1 - sqrt2")), QuadAmp(-1));
    EXPECT_EQ(quad_mul(q("sqrt3/3"), q("sqrt2/2")), QuadAmp::from_terms(0, 0, 0, mpq_class(1, 6)));
}

TEST(QuadAbsSq, Coefficients) {
    EXPECT_EQ(quad_abs_sq(q("3/sqrt12")), QuadAmp(mpq_class(3, 4)));
    EXPECT_EQ(quad_abs_sq(q("-1/sqrt12")), QuadAmp(mpq_class(1, 12)));
    EXPECT_TRUE(quad_abs_sq(QuadAmp()).is_zero());
}

TEST(QuadToFloat, KnownConstants) {
    EXPECT_EQ(quad_to_float(q("1/2")).real(), 0.5);
    EXPECT_NEAR(quad_to_float(q("1/sqrt2")).real(), 0.7071067811865476, 1e-15);
    EXPECT_NEAR(quad_to_float(q("sqrt3/2")).real(), 0.8660254037844386, 1e-15);
}

TEST(QuadAmp, FifthRootsStayExact) {
    const QuadAmp a = QuadAmp::sqrt_of(mpq_class(1, 10));
    const QuadAmp b = QuadAmp::sqrt_of(mpq_class(9, 10));
    EXPECT_EQ(a * a + b * b, QuadAmp(1));
    EXPECT_EQ(a * a, QuadAmp(mpq_class(1, 10)));
    EXPECT_EQ(a.str(), "1/10*sqrt10");
}

TEST(QuadAmp, SqrtOfIrrationalRejected) {
    EXPECT_THROW((void)QuadAmp::sqrt_of(mpq_class(7)), frlogic::Error);
    EXPECT_THROW((void)QuadAmp::sqrt_of(mpq_class(-1)), frlogic::Error);
    EXPECT_TRUE(QuadAmp::sqrt_of(mpq_class(0)).is_zero());
}

TEST(QuadAmp, InverseAndDivision) {
    const QuadAmp x = q("1 + sqrt2 - 2*sqrt3 + sqrt6/5");
    EXPECT_EQ(x * x.inverse(), QuadAmp(1));
    EXPECT_EQ(q("1/sqrt6") / q("1/sqrt2"), q("1/sqrt3"));
    EXPECT_THROW((void)QuadAmp().inverse(), frlogic::Error);
}

TEST(QuadAmp, OrderingMatchesFloats) {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> d(-9, 9);
    for (int i = 0; i < 500; ++i) {
        const QuadAmp x = QuadAmp::from_terms(d(rng), d(rng), d(rng), d(rng));
        const QuadAmp y = QuadAmp::from_terms(d(rng), d(rng), d(rng), d(rng));
        const double dx = x.to_double();
        const double dy = y.to_double();
        if (std::abs(dx - dy) > 1e-9) {
            EXPECT_EQ(x < y, dx < dy) << x << " vs " << y;
        }
        EXPECT_EQ(x.sign(), dx > 1e-12 ? 1 : (dx < -1e-12 ? -1 : x.sign()));
    }
    EXPECT_EQ(q("sqrt2 - sqrt3 + 1/3").sign(), 1);
    EXPECT_EQ(q("sqrt6 - 5/2").sign(), -1);
}

TEST(QuadAmp, CanonicalText) {
    EXPECT_EQ(q("-1 + sqrt2").str(), "-1 + sqrt2");
    EXPECT_EQ(q("0").str(), "0");
    EXPECT_EQ(q("2/4").str(), "1/2");
    EXPECT_EQ(q("-sqrt6/6").str(), "-1/6*sqrt6");
}

TEST(AmpLiteral, ParsesExactAndFloatForms) {
    auto lit = frlogic::parse_amp_literal("sqrt(2/3)");
    ASSERT_TRUE(lit.exact);
    EXPECT_EQ(*lit.exact, q("sqrt6/3"));
    auto dec = frlogic::parse_amp_literal("0.25");
    ASSERT_TRUE(dec.exact);
    EXPECT_EQ(*dec.exact, QuadAmp(mpq_class(1, 4)));
    auto lead = frlogic::parse_amp_literal("0.0625");
    EXPECT_EQ(*lead.exact, QuadAmp(mpq_class(1, 16)));
    auto sci = frlogic::parse_amp_literal("25e-2");
    EXPECT_EQ(*sci.exact, QuadAmp(mpq_class(1, 4)));
    auto phase = frlogic::parse_amp_literal("phase(1.5707963267948966)/sqrt3");
    EXPECT_FALSE(phase.exact);
    EXPECT_NEAR(phase.approx.imag(), 1.0 / std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(phase.approx.real(), 0.0, 1e-15);
}

TEST(AmpLiteral, RejectsGarbageWithPosition) {
    try {
        (void)frlogic::parse_quad("1/sqrt");
        FAIL() << "expected a parse error";
    } catch (const frlogic::ParseError &e) {
        EXPECT_GE(e.col(), 1U);
    }
    EXPECT_THROW((void)frlogic::parse_quad("((((1"), frlogic::ParseError);
    EXPECT_THROW((void)frlogic::parse_quad(std::string(200, '(') + "1" + std::string(200, ')')), frlogic::ParseError);
    EXPECT_THROW((void)frlogic::parse_quad("sqrt(7)"), frlogic::Error);
}

} // namespace
