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
 * Bundled scenarios: the two-friend/two-Wigner experiment and its variants,
 * the three-spin A-B-C chain, and the referee verifications.
 */
#pragma once

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "scenario.hpp"

namespace frlogic::library {

namespace build {

inline AmpLiteral lit(const std::string &text) {
    std::size_t used = 0;
    AmpLiteral out = parse_amp_literal(text, &used);
    if (used != text.size()) {
        throw Error(ErrorKind::InvalidArgument, "bad literal '" + text + "'");
    }
    return out;
}

inline Event ev(const std::string &reg, std::size_t step, const std::string &label, BasisSpec basis = BasisSpec::z_basis()) {
    auto o = parse_label(label);
    if (!o) {
        throw Error(ErrorKind::InvalidArgument, "bad label '" + label + "'");
    }
    return Event{reg, std::move(basis), *o, step};
}

inline KetTerm term(const std::string &amp, std::vector<unsigned> labels) { return KetTerm{std::move(labels), lit(amp)}; }

inline MeasurementStep step(std::size_t index, const std::string &agent, const std::string &target, BasisSpec basis,
                            StepStyle style) {
    MeasurementStep s;
    s.index = index;
    s.agent = agent;
    s.targets = {target};
    s.basis = std::move(basis);
    s.style = style;
    return s;
}

inline StatementSpec statement(const std::string &id, std::vector<Event> premises, Event conclusion, EvalMode mode,
                               std::optional<Classification> expect, std::optional<std::string> p = std::nullopt,
                               Claim claim = Claim::certain) {
    StatementSpec s;
    s.statement = Statement{id, std::move(premises), std::move(conclusion), mode, claim};
    s.expect = expect;
    if (p) {
        s.expect_p = lit(*p);
    }
    return s;
}

inline TransitivityCheck transitivity(const std::string &a, const std::string &b, std::optional<bool> valid,
                                      std::optional<std::string> combined, std::optional<std::string> violation) {
    TransitivityCheck t{a, b, valid, std::nullopt, std::nullopt};
    if (combined) {
        t.expect_combined = lit(*combined);
    }
    if (violation) {
        t.expect_violation = lit(*violation);
    }
    return t;
}

inline CompatibleCheck compatible(Event a, Event b, bool expect, std::optional<std::string> defect,
                                  std::vector<Event> given = {}) {
    CompatibleCheck c{std::move(a), std::move(b), std::move(given), expect, std::nullopt};
    if (defect) {
        c.expect_defect = lit(*defect);
    }
    return c;
}

inline ChainCheck chain(std::vector<Event> events, const std::string &p) { return ChainCheck{std::move(events), lit(p)}; }

inline std::string float_text(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

/// The two spins of the original experiment and its four steps.
inline void fr_frame(Scenario &s, const std::vector<KetTerm> &initial) {
    s.registers = {{"barred", LabelStyle::spin}, {"unbarred", LabelStyle::spin}};
    s.initial.terms = initial;
    s.steps = {
        step(1, "Fbar", "barred", BasisSpec::z_basis(), StepStyle::absorb),
        step(2, "F", "unbarred", BasisSpec::z_basis(), StepStyle::absorb),
        step(3, "Wbar", "mem.Fbar", BasisSpec::x_basis(), StepStyle::preserve),
        step(4, "W", "mem.F", BasisSpec::x_basis(), StepStyle::preserve),
    };
}

inline std::vector<KetTerm> fr_initial() {
    return {term("1/sqrt3", {0, 1}), term("1/sqrt3", {1, 0}), term("1/sqrt3", {1, 1})};
}

inline StatementSpec fr_statement(int which, std::optional<Classification> expect, std::optional<std::string> p) {
    switch (which) {
    case 1:
        return statement("S1p", {ev("mem.W", 4, "minus"), ev("mem.Wbar", 3, "minus")}, ev("mem.Wbar", 3, "minus"),
                         EvalMode::forward, expect, p);
    case 2:
        return statement("S2", {ev("mem.Wbar", 3, "minus")}, ev("mem.F", 2, "up"), EvalMode::retrodictive, expect, p);
    case 3:
        return statement("S3", {ev("mem.F", 2, "up")}, ev("mem.Fbar", 1, "down"), EvalMode::retrodictive, expect, p);
    default:
        return statement("S4", {ev("mem.Fbar", 1, "down")}, ev("mem.W", 4, "plus"), EvalMode::forward, expect, p);
    }
}

} // namespace build

/// The full two-friend/two-Wigner experiment with its statement suite and checks.
inline Scenario fr_full() {
    using namespace build;
    Scenario s;
    s.name = "fr_full";
    s.description = "Two friends absorb their spins, two Wigners read the friends' records in the x basis.";
    fr_frame(s, fr_initial());
    s.statements = {
        fr_statement(1, Classification::Holds, "1"),
        fr_statement(2, Classification::Holds, "1"),
        fr_statement(3, Classification::Holds, "1"),
        fr_statement(4, Classification::Holds, "1"),
    };
    s.checks = {
        transitivity("S1p", "S2", false, "1/2", "1/2"),
        transitivity("S2", "S3", false, "1/2", "1/2"),
        transitivity("S3", "S4", false, "1/2", "1/2"),
        compatible(ev("mem.Wbar", 3, "minus"), ev("mem.Fbar", 1, "down"), false, "1/3"),
        compatible(ev("mem.W", 4, "minus"), ev("mem.F", 2, "up"), false, "1/3"),
        compatible(ev("mem.F", 2, "up"), ev("mem.Wbar", 3, "minus"), true, "0"),
        compatible(ev("mem.F", 2, "up"), ev("mem.W", 4, "plus"), false, "1/2", {ev("mem.Fbar", 1, "down")}),
        chain({ev("mem.Fbar", 1, "down")}, "2/3"),
        chain({ev("mem.F", 2, "up"), ev("mem.Wbar", 3, "minus")}, "1/6"),
        chain({ev("mem.Wbar", 3, "minus")}, "1/6"),
        ConjunctionCheck{{ev("mem.F", 2, "up"), ev("mem.Wbar", 3, "minus"), ev("mem.W", 4, "minus")},
                         ev("mem.Fbar", 1, "down"), false, std::nullopt},
        MineCheck{},
        MinedCheck{ev("mem.W", 4, "minus"), ev("mem.Fbar", 1, "up"), EvalMode::retrodictive},
        MinedCheck{ev("mem.Wbar", 3, "minus"), ev("mem.F", 2, "up"), EvalMode::retrodictive},
        MinedCheck{ev("mem.F", 2, "up"), ev("mem.Fbar", 1, "down"), EvalMode::retrodictive},
        MinedCheck{ev("mem.Fbar", 1, "down"), ev("mem.W", 4, "plus"), EvalMode::forward},
    };
    JointSpec joint;
    joint.registers = {"mem.Wbar", "mem.W"};
    joint.expect = {{"plus_plus", lit("3/4")},
                    {"plus_minus", lit("1/12")},
                    {"minus_plus", lit("1/12")},
                    {"minus_minus", lit("1/12")}};
    s.joint = joint;
    return s;
}

/// fr_full's steps only, optionally with steps 1/2 and 3/4 exchanged.
inline Scenario fr_reordered(bool swap12, bool swap34) {
    Scenario s = fr_full();
    s.name = std::string("fr_reordered") + (swap12 ? "_12" : "") + (swap34 ? "_34" : "");
    s.statements.clear();
    s.checks.clear();
    auto &st = s.steps;
    if (swap12) {
        std::swap(st[0], st[1]);
    }
    if (swap34) {
        std::swap(st[2], st[3]);
    }
    for (std::size_t i = 0; i < st.size(); ++i) {
        st[i].index = i + 1;
    }
    s.joint->step.reset();
    return s;
}

/// The two-term sub-experiment (barred spin down) with the OR-composition exhibit.
inline Scenario fr_sub34() {
    using namespace build;
    Scenario s;
    s.name = "fr_sub34";
    s.description = "Second and third initial terms only; the friend's which-path record spoils W's certainty.";
    fr_frame(s, {term("1/sqrt2", {1, 0}), term("1/sqrt2", {1, 1})});
    s.statements = {
        fr_statement(3, Classification::Holds, "1"),
        statement("S4m", {ev("mem.Fbar", 1, "down")}, ev("mem.F", 2, "up"), EvalMode::forward, Classification::Probabilistic,
                  "1/2", Claim::probabilistic),
        fr_statement(4, Classification::Holds, "1"),
        statement("S3L", {ev("mem.Fbar", 1, "down"), ev("mem.F", 2, "up")}, ev("mem.W", 4, "plus"), EvalMode::forward,
                  Classification::Probabilistic, "1/2", Claim::probabilistic),
        statement("S3R", {ev("mem.Fbar", 1, "down"), ev("mem.F", 2, "down")}, ev("mem.W", 4, "plus"), EvalMode::forward,
                  Classification::Probabilistic, "1/2", Claim::probabilistic),
    };
    s.checks = {
        transitivity("S3", "S4m", true, "1", "1/2"),
        OrCheck{{"S3L", "S3R"}, "S4", true},
        compatible(ev("mem.F", 2, "up"), ev("mem.W", 4, "plus"), false, "1/2"),
    };
    return s;
}

/**
 * Three spins: c_a on |up,up,up>, c_b on |down,up,down> (or |down,up,up>
 * when `second_c_up`), each measured in z by its own agent in order A, B, C.
 */
inline Scenario abc(const std::string &c_a, const std::string &c_b, bool second_c_up = false, std::string name = "abc") {
    using namespace build;
    Scenario s;
    s.name = std::move(name);
    s.description = "Three spins measured in turn; B's statement is only probabilistic.";
    s.registers = {{"A", LabelStyle::spin}, {"B", LabelStyle::spin}, {"C", LabelStyle::spin}};
    s.initial.terms = {term(c_a, {0, 0, 0})};
    const AmpLiteral b = lit(c_b);
    if (b.exact ? !b.exact->is_zero() : std::abs(b.approx) > 0.0) {
        s.initial.terms.push_back(term(c_b, {1, 0, second_c_up ? 0U : 1U}));
    }
    s.steps = {
        step(1, "A", "A", BasisSpec::z_basis(), StepStyle::absorb),
        step(2, "B", "B", BasisSpec::z_basis(), StepStyle::absorb),
        step(3, "C", "C", BasisSpec::z_basis(), StepStyle::absorb),
    };
    // validate normalization eagerly
    if (auto a = lit(c_a); a.exact && b.exact) {
        (void)initial_state<QuadAmp>(s);
    } else {
        (void)initial_state<FloatAmp>(s);
        s.mode = Mode::floating;
    }
    const bool single = s.initial.terms.size() == 1 || second_c_up;
    const auto pa = [&]() -> std::string {
        if (single) {
            return "1";
        }
        const AmpLiteral a = lit(c_a);
        if (a.exact) {
            return (*a.exact * *a.exact).str();
        }
        return float_text(std::norm(a.approx));
    }();
    const auto pb_text = [&]() -> std::string {
        const AmpLiteral a = lit(c_a);
        if (single) {
            return "0";
        }
        if (a.exact) {
            return (QuadAmp(1) - *a.exact * *a.exact).str();
        }
        return float_text(1.0 - std::norm(a.approx));
    }();
    s.statements = {
        statement("SA", {ev("mem.A", 1, "up")}, ev("mem.B", 2, "up"), EvalMode::forward, Classification::Holds, "1"),
        statement("ST", {ev("mem.A", 1, "up")}, ev("mem.C", 3, "up"), EvalMode::forward, Classification::Holds, "1"),
        statement("SB", {ev("mem.B", 2, "up")}, ev("mem.C", 3, "up"), EvalMode::forward,
                  single ? Classification::Holds : Classification::Probabilistic, pa, Claim::probabilistic),
        statement("SBup", {ev("mem.B", 2, "up"), ev("mem.A", 1, "up")}, ev("mem.C", 3, "up"), EvalMode::forward,
                  Classification::Holds, "1", Claim::probabilistic),
    };
    s.checks = {
        transitivity("SA", "SB", true, "1", pb_text),
        ConjunctionCheck{{ev("mem.B", 2, "up"), ev("mem.A", 1, "up")}, ev("mem.C", 3, "up"), true, Classification::Holds},
    };
    if (s.initial.terms.size() == 2) {
        s.statements.push_back(statement("SBdown", {ev("mem.B", 2, "up"), ev("mem.A", 1, "down")}, ev("mem.C", 3, "up"),
                                         EvalMode::forward, second_c_up ? Classification::Holds : Classification::Fails,
                                         second_c_up ? "1" : "0", Claim::probabilistic));
        s.checks.push_back(OrCheck{{"SBup", "SBdown"}, "SB", false});
    } else {
        s.checks.push_back(OrCheck{{"SBup"}, "SB", false});
    }
    return s;
}

/// Referee pair measuring the initial spins directly; bases given as "z"/"x" for R (unbarred) and Rbar (barred).
inline Scenario referee_math(const std::string &r_basis, const std::string &rbar_basis) {
    using namespace build;
    Scenario s;
    s.name = "referee_" + r_basis + rbar_basis;
    s.description = "Referees read the initial spins: R on unbarred in " + r_basis + ", Rbar on barred in " + rbar_basis + ".";
    s.registers = {{"barred", LabelStyle::spin}, {"unbarred", LabelStyle::spin}};
    s.initial.terms = fr_initial();
    auto basis = [](const std::string &b) { return b == "x" ? BasisSpec::x_basis() : BasisSpec::z_basis(); };
    s.steps = {
        step(1, "Rbar", "barred", basis(rbar_basis), StepStyle::absorb),
        step(2, "R", "unbarred", basis(r_basis), StepStyle::absorb),
    };
    StateCheck final{2, {}};
    if (r_basis == "z" && rbar_basis == "z") {
        final.ket.terms = fr_initial();
        s.statements = {statement("MS3", {ev("mem.R", 2, "up")}, ev("mem.Rbar", 2, "down"), EvalMode::forward,
                                  Classification::Holds, "1")};
    } else if (r_basis == "z") {
        final.ket.terms = {term("2/sqrt6", {0, 1}), term("1/sqrt6", {0, 0}), term("-1/sqrt6", {1, 0})};
        s.statements = {statement("MS2", {ev("mem.Rbar", 2, "minus")}, ev("mem.R", 2, "up"), EvalMode::forward,
                                  Classification::Holds, "1")};
    } else {
        final.ket.terms = {term("1/sqrt6", {0, 0}), term("-1/sqrt6", {0, 1}), term("2/sqrt6", {1, 0})};
        s.statements = {statement("MS4", {ev("mem.Rbar", 2, "down")}, ev("mem.R", 2, "plus"), EvalMode::forward,
                                  Classification::Holds, "1")};
    }
    s.checks = {final};
    return s;
}

inline std::vector<Scenario> referee_math_statements() {
    return {referee_math("z", "z"), referee_math("z", "x"), referee_math("x", "z")};
}

/// The experiment with referee R observing F's record and Rbar observing Wbar's record.
inline Scenario referee_fr_observation() {
    using namespace build;
    Scenario s;
    s.name = "referee_fr";
    s.description = "R observes F's record after step 2, Rbar observes Wbar's record after Wbar's measurement.";
    s.registers = {{"barred", LabelStyle::spin}, {"unbarred", LabelStyle::spin}};
    s.initial.terms = fr_initial();
    s.steps = {
        step(1, "Fbar", "barred", BasisSpec::z_basis(), StepStyle::absorb),
        step(2, "F", "unbarred", BasisSpec::z_basis(), StepStyle::absorb),
        step(3, "R", "mem.F", BasisSpec::z_basis(), StepStyle::preserve),
        step(4, "Wbar", "mem.Fbar", BasisSpec::x_basis(), StepStyle::preserve),
        step(5, "Rbar", "mem.Wbar", BasisSpec::z_basis(), StepStyle::preserve),
    };
    s.statements = {
        statement("RS2", {ev("mem.Rbar", 5, "minus")}, ev("mem.R", 5, "up"), EvalMode::forward, Classification::Holds, "1"),
        statement("RS2F", {ev("mem.Rbar", 5, "minus")}, ev("mem.F", 2, "up"), EvalMode::retrodictive,
                  Classification::Holds, "1"),
    };
    s.checks = {
        chain({ev("mem.Wbar", 4, "minus")}, "1/6"),
        chain({ev("mem.Rbar", 5, "minus")}, "1/6"),
        chain({ev("mem.Rbar", 5, "minus"), ev("mem.R", 5, "up")}, "1/6"),
    };
    return s;
}

/// Initial relative phase phi between the barred-up and barred-down terms (float only).
inline Scenario fr_phase(double phi, std::string name = "") {
    using namespace build;
    Scenario s;
    s.name = name.empty() ? "fr_phase" : std::move(name);
    s.description = "Relative phase phi on the barred-down terms; Statement 2 weakens to 1/(3 - 2 cos phi).";
    s.mode = Mode::floating;
    const std::string ph = float_text(phi);
    fr_frame(s, {term("1/sqrt3", {0, 1}), term("phase(" + ph + ")/sqrt3", {1, 0}), term("phase(" + ph + ")/sqrt3", {1, 1})});
    const double p2 = 1.0 / (3.0 - 2.0 * std::cos(phi));
    const bool holds = std::abs(p2 - 1.0) < kFloatTolerance;
    s.statements = {fr_statement(2, holds ? Classification::Holds : Classification::Fails, float_text(p2))};
    return s;
}

/// The three collapse branches: Fbar up; Fbar down; Fbar down then F down.
inline std::vector<Scenario> fr_collapse_variants() {
    using namespace build;
    auto base = [](const std::string &name, const std::string &desc) {
        Scenario s;
        s.name = name;
        s.description = desc;
        fr_frame(s, fr_initial());
        return s;
    };
    std::vector<Scenario> out;
    {
        Scenario s = base("fr_collapse_fbar_up", "Fbar's measurement collapses onto up.");
        force_collapse(s, 1, 0U);
        s.statements = {fr_statement(2, Classification::Fails, "0"), fr_statement(3, Classification::Vacuous, std::nullopt),
                        fr_statement(4, Classification::Vacuous, std::nullopt)};
        out.push_back(s);
    }
    {
        Scenario s = base("fr_collapse_fbar_down", "Fbar's measurement collapses onto down.");
        force_collapse(s, 1, 1U);
        s.statements = {fr_statement(2, Classification::Fails, "1/2"), fr_statement(3, Classification::Holds, "1"),
                        fr_statement(4, Classification::Holds, "1")};
        out.push_back(s);
    }
    {
        Scenario s = base("fr_collapse_fbar_down_f_down", "Fbar collapses onto down, then F collapses onto down.");
        force_collapse(s, 1, 1U);
        force_collapse(s, 2, 1U);
        s.statements = {fr_statement(2, Classification::Fails, "0"), fr_statement(3, Classification::Vacuous, std::nullopt),
                        fr_statement(4, Classification::Fails, "1/2")};
        out.push_back(s);
    }
    return out;
}

/// Every bundled scenario, in corpus order.
inline std::vector<Scenario> all() {
    std::vector<Scenario> out{fr_full(), fr_sub34()};
    out.push_back(abc("1/sqrt2", "1/sqrt2", false, "abc_equal"));
    out.push_back(abc("sqrt(1/10)", "sqrt(9/10)", false, "abc_weighted"));
    out.push_back(abc("1/sqrt2", "1/sqrt2", true, "abc_coincidence"));
    out.push_back(abc("1", "0", false, "abc_single"));
    for (auto &s : referee_math_statements()) {
        out.push_back(std::move(s));
    }
    out.push_back(referee_fr_observation());
    out.push_back(fr_phase(0.0, "fr_phase_0"));
    out.push_back(fr_phase(std::numbers::pi / 2, "fr_phase_half_pi"));
    out.push_back(fr_phase(std::numbers::pi, "fr_phase_pi"));
    for (auto &s : fr_collapse_variants()) {
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace frlogic::library
