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
#pragma once

#include <cmath>
#include <complex>
#include <concepts>
#include <sstream>
#include <string>

#include "exact_amplitude.hpp"

namespace frlogic {

/// Absolute tolerance for zero / one decisions in float mode.
inline constexpr double kFloatTolerance = 1e-9;
/// Float amplitudes below this magnitude are dropped from sparse states.
inline constexpr double kFloatPrune = 1e-14;

template <class Amp> struct amp_traits;

template <> struct amp_traits<QuadAmp> {
    using prob_type = QuadAmp;
    static constexpr bool exact = true;
    static constexpr const char *mode_name = "exact";

    static bool is_zero(const QuadAmp &x) { return x.is_zero(); }
    static QuadAmp conj(const QuadAmp &x) { return x; }
    static prob_type abs_sq(const QuadAmp &x) { return x * x; }
    static prob_type real_part(const QuadAmp &x) { return x; }
    static QuadAmp from_prob(const prob_type &p) { return p; }
    static QuadAmp one() { return QuadAmp(1); }
    static QuadAmp inv_sqrt2() { return QuadAmp::inv_sqrt2(); }
    static QuadAmp inv_sqrt(const prob_type &p) { return QuadAmp::sqrt_of(p).inverse(); }

    static QuadAmp from_literal(const AmpLiteral &lit) {
        if (!lit.exact) {
            throw Error(ErrorKind::NotRepresentable,
                        "amplitude '" + lit.text + "' is only available in float mode");
        }
        return *lit.exact;
    }

    static bool prob_is_zero(const prob_type &p) { return p.is_zero(); }
    static bool prob_is_one(const prob_type &p) { return p.is_one(); }
    static bool prob_equal(const prob_type &a, const prob_type &b) { return a == b; }
    static bool prob_positive(const prob_type &p) { return p.sign() > 0; }
    static prob_type prob_abs(const prob_type &p) { return p.abs(); }
    static double to_double(const prob_type &p) { return p.to_double(); }
    static FloatAmp to_complex(const QuadAmp &x) { return {x.to_double(), 0.0}; }
    static std::string str(const QuadAmp &x) { return x.str(); }
};

template <> struct amp_traits<FloatAmp> {
    using prob_type = double;
    static constexpr bool exact = false;
    static constexpr const char *mode_name = "float";

    static bool is_zero(const FloatAmp &x) { return std::abs(x) < kFloatPrune; }
    static FloatAmp conj(const FloatAmp &x) { return std::conj(x); }
    static prob_type abs_sq(const FloatAmp &x) { return std::norm(x); }
    static prob_type real_part(const FloatAmp &x) { return x.real(); }
    static FloatAmp from_prob(const prob_type &p) { return {p, 0.0}; }
    static FloatAmp one() { return {1.0, 0.0}; }
    static FloatAmp inv_sqrt2() { return {1.0 / std::sqrt(2.0), 0.0}; }
    static FloatAmp inv_sqrt(const prob_type &p) { return {1.0 / std::sqrt(p), 0.0}; }

    static FloatAmp from_literal(const AmpLiteral &lit) { return lit.approx; }

    static bool prob_is_zero(const prob_type &p) { return std::abs(p) < kFloatTolerance; }
    static bool prob_is_one(const prob_type &p) { return std::abs(p - 1.0) < kFloatTolerance; }
    static bool prob_equal(const prob_type &a, const prob_type &b) { return std::abs(a - b) < kFloatTolerance; }
    static bool prob_positive(const prob_type &p) { return p >= kFloatTolerance; }
    static prob_type prob_abs(const prob_type &p) { return std::abs(p); }
    static double to_double(const prob_type &p) { return p; }
    static FloatAmp to_complex(const FloatAmp &x) { return x; }
    static std::string str(const FloatAmp &x) {
        std::ostringstream os;
        os.precision(12);
        if (std::abs(x.imag()) < kFloatPrune) {
            os << x.real();
        } else {
            os << "(" << x.real() << (x.imag() < 0 ? " - " : " + ") << std::abs(x.imag()) << "*i)";
        }
        return os.str();
    }
    static std::string str(double p) {
        std::ostringstream os;
        os.precision(12);
        os << p;
        return os.str();
    }
};

template <class Amp>
concept Amplitude = requires { typename amp_traits<Amp>::prob_type; };

template <Amplitude Amp> using prob_t = typename amp_traits<Amp>::prob_type;

} // namespace frlogic
