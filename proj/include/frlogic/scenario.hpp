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
 * Mode-independent experiment descriptions and their evaluation.
 *
 * A Scenario holds literals rather than amplitudes so the same description
 * runs in exact and float mode. run_scenario() builds the history, evaluates
 * every statement and check, and compares against the stated expectations.
 */
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "amplitude_traits.hpp"
#include "error.hpp"
#include "exact_amplitude.hpp"
#include "measurement_engine.hpp"
#include "state_space.hpp"
#include "statement_logic.hpp"

namespace frlogic {

enum class Mode { exact, floating };

inline const char *to_string(Mode m) { return m == Mode::exact ? "exact" : "float"; }

struct RegisterDecl {
    std::string name;
    LabelStyle style = LabelStyle::spin;
};

struct KetExpr {
    std::vector<KetTerm> terms;
};

struct StatementSpec {
    Statement statement;
    std::optional<Classification> expect;
    std::optional<AmpLiteral> expect_p;
};

struct TransitivityCheck {
    std::string first;
    std::string second;
    std::optional<bool> expect_valid;
    std::optional<AmpLiteral> expect_combined;
    std::optional<AmpLiteral> expect_violation;
};

struct CompatibleCheck {
    Event first;
    Event second;
    std::vector<Event> given;
    std::optional<bool> expect_compatible;
    std::optional<AmpLiteral> expect_defect;
};

struct OrCheck {
    std::vector<std::string> branches;
    std::string merged;
    std::optional<bool> expect_divergence;
};

struct ConjunctionCheck {
    std::vector<Event> premises;
    Event conclusion;
    std::optional<bool> expect_compatible;
    std::optional<Classification> expect_verdict;
};

struct ChainCheck {
    std::vector<Event> events;
    std::optional<AmpLiteral> expect_p;
};

struct StateCheck {
    std::size_t step = 0;
    KetExpr ket;
};

struct MineCheck {};

/// Expects the mined list to contain premise => conclusion as Holds.
struct MinedCheck {
    Event premise;
    Event conclusion;
    std::optional<EvalMode> mode;
};

using Check = std::variant<TransitivityCheck, CompatibleCheck, OrCheck, ConjunctionCheck, ChainCheck, StateCheck,
                           MineCheck, MinedCheck>;

/// Joint z-basis distribution of some registers at one snapshot.
struct JointSpec {
    std::vector<std::string> registers;
    std::optional<std::size_t> step;
    std::map<std::string, AmpLiteral> expect;
};

struct Scenario {
    std::string name;
    std::string description;
    Mode mode = Mode::exact;
    std::optional<std::uint64_t> seed;
    std::vector<RegisterDecl> registers;
    KetExpr initial;
    std::vector<MeasurementStep> steps;
    std::vector<StatementSpec> statements;
    std::vector<Check> checks;
    std::optional<JointSpec> joint;

    [[nodiscard]] const StatementSpec *find_statement(std::string_view id) const {
        for (const auto &s : statements) {
            if (s.statement.id == id) {
                return &s;
            }
        }
        return nullptr;
    }
};

/// Turns step k into a collapse onto `outcome`, keeping its record style.
inline void force_collapse(Scenario &scn, std::size_t step, std::optional<unsigned> outcome) {
    if (step == 0 || step > scn.steps.size()) {
        throw Error(ErrorKind::InvalidArgument, "no step " + std::to_string(step) + " to collapse");
    }
    auto &st = scn.steps[step - 1];
    if (st.style != StepStyle::collapse) {
        st.collapse_base = st.style;
        st.style = StepStyle::collapse;
    }
    st.collapse_outcome = outcome;
}

// ---------------------------------------------------------------------------
// Results
// ---------------------------------------------------------------------------

/// A probability or amplitude from either mode, ready for printing.
struct Number {
    std::optional<QuadAmp> exact;
    double value = 0.0;

    static Number of(const QuadAmp &q) { return Number{q, q.to_double()}; }
    static Number of(double d) { return Number{std::nullopt, d}; }

    [[nodiscard]] std::string str() const {
        if (exact) {
            return exact->str();
        }
        return amp_traits<FloatAmp>::str(value);
    }
};

struct StatementResult {
    std::string id;
    std::string text;
    EvalMode mode = EvalMode::forward;
    Claim claim = Claim::certain;
    Classification classification = Classification::Vacuous;
    Number probability;
    Number premise_probability;
    std::vector<Diagnostic> diagnostics;
    std::optional<Classification> expected;
    std::optional<std::string> expected_p;
    bool matched = true;
};

struct MinedRow {
    std::string premise;
    std::string conclusion;
    bool forward_holds = false;
    bool retro_holds = false;
    bool trivial = false;
    Number forward_p;
    Number retro_p;
};

struct CheckResult {
    std::string kind;
    std::string title;
    std::vector<std::pair<std::string, Number>> numbers;
    std::vector<std::pair<std::string, std::string>> fields;
    std::vector<std::pair<std::string, bool>> flags;
    std::vector<Diagnostic> diagnostics;
    std::vector<MinedRow> mined;
    bool has_expectation = false;
    bool matched = true;
    std::string error;
};

struct SnapshotSummary {
    std::size_t step = 0;
    std::string label;
    std::vector<std::string> registers;
    std::size_t terms = 0;
    Number norm_sq;
    std::string ket;
};

struct JointResult {
    std::size_t step = 0;
    std::vector<std::string> registers;
    std::vector<std::pair<std::string, Number>> probabilities;
    bool matched = true;
    bool has_expectation = false;
};

struct CollapseSummary {
    std::size_t step = 0;
    std::string outcome;
    Number probability;
    bool sampled = false;
};

struct ScenarioResult {
    std::string name;
    std::string description;
    Mode mode = Mode::exact;
    std::vector<SnapshotSummary> snapshots;
    std::vector<CollapseSummary> collapses;
    std::vector<StatementResult> statements;
    std::vector<CheckResult> checks;
    std::optional<JointResult> joint;

    [[nodiscard]] bool all_matched() const {
        for (const auto &s : statements) {
            if (!s.matched) {
                return false;
            }
        }
        for (const auto &c : checks) {
            if (!c.matched) {
                return false;
            }
        }
        return !joint || joint->matched;
    }
};

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace detail {

template <Amplitude Amp> Number to_number(const prob_t<Amp> &p) {
    if constexpr (amp_traits<Amp>::exact) {
        return Number::of(p);
    } else {
        return Number::of(static_cast<double>(p));
    }
}

template <Amplitude Amp> bool literal_matches(const prob_t<Amp> &p, const AmpLiteral &lit) {
    if constexpr (amp_traits<Amp>::exact) {
        if (lit.exact) {
            return p == *lit.exact;
        }
        return std::abs(p.to_double() - lit.approx.real()) < kFloatTolerance && std::abs(lit.approx.imag()) < kFloatTolerance;
    } else {
        return std::abs(p - lit.approx.real()) < kFloatTolerance && std::abs(lit.approx.imag()) < kFloatTolerance;
    }
}

template <Amplitude Amp> StateVector<Amp> build_ket(const std::vector<Register> &regs, const KetExpr &ket, bool allow_unnormalized) {
    std::vector<std::pair<std::vector<unsigned>, Amp>> terms;
    for (const auto &t : ket.terms) {
        terms.emplace_back(t.labels, amp_traits<Amp>::from_literal(t.amp));
    }
    return make_state<Amp>(regs, terms, allow_unnormalized);
}

template <Amplitude Amp> std::string statement_text(const History<Amp> &h, const Statement &s) {
    std::string out = "if ";
    for (std::size_t i = 0; i < s.premises.size(); ++i) {
        out += (i > 0 ? " and " : "") + event_text(h, s.premises[i]);
    }
    return out + " then " + event_text(h, s.conclusion);
}

inline void expectation(CheckResult &r, bool ok) {
    r.has_expectation = true;
    r.matched = r.matched && ok;
}

template <Amplitude Amp> const Statement &need_statement(const Scenario &scn, const std::string &id) {
    const auto *s = scn.find_statement(id);
    if (s == nullptr) {
        throw Error(ErrorKind::SemanticError, "no statement with id '" + id + "'");
    }
    return s->statement;
}

template <Amplitude Amp> CheckResult run_check(const Scenario &scn, const History<Amp> &h, const TransitivityCheck &c) {
    CheckResult r;
    r.kind = "transitivity";
    r.title = c.first + " then " + c.second;
    const auto rep = check_transitivity(h, need_statement<Amp>(scn, c.first), need_statement<Amp>(scn, c.second));
    r.fields.push_back({"combined", statement_text(h, rep.combined)});
    r.fields.push_back({"first", to_string(rep.first.classification)});
    r.fields.push_back({"second", to_string(rep.second.classification)});
    r.fields.push_back({"combined_verdict", to_string(rep.combined_verdict.classification)});
    r.numbers.push_back({"first_p", to_number<Amp>(rep.first.probability)});
    r.numbers.push_back({"second_p", to_number<Amp>(rep.second.probability)});
    r.numbers.push_back({"combined_p", to_number<Amp>(rep.combined_verdict.probability)});
    r.numbers.push_back({"combined_forward_p", to_number<Amp>(rep.combined_forward.probability)});
    r.numbers.push_back({"combined_retro_p", to_number<Amp>(rep.combined_retro.probability)});
    r.numbers.push_back({"predicted_p", to_number<Amp>(rep.predicted)});
    r.numbers.push_back({"violation", to_number<Amp>(rep.violation)});
    r.flags.push_back({"transitivity_valid", rep.transitivity_valid});
    r.flags.push_back({"contradiction", rep.contradiction});
    for (const auto &d : rep.combined_verdict.diagnostics) {
        r.diagnostics.push_back(d);
    }
    if (c.expect_valid) {
        expectation(r, rep.transitivity_valid == *c.expect_valid);
    }
    if (c.expect_combined) {
        expectation(r, literal_matches<Amp>(rep.combined_verdict.probability, *c.expect_combined));
    }
    if (c.expect_violation) {
        expectation(r, literal_matches<Amp>(rep.violation, *c.expect_violation));
    }
    return r;
}

template <Amplitude Amp> CheckResult run_check(const Scenario &, const History<Amp> &h, const CompatibleCheck &c) {
    using T = amp_traits<Amp>;
    CheckResult r;
    r.kind = "compatible";
    r.title = event_text(h, c.first) + " with " + event_text(h, c.second);
    bool compatible = true;
    prob_t<Amp> defect{};
    if (c.given.empty()) {
        auto res = conjunction_compatible(h, c.first, c.second);
        compatible = res.compatible;
        defect = res.defect;
    } else {
        const Event &a = c.first.step <= c.second.step ? c.first : c.second;
        const Event &b = c.first.step <= c.second.step ? c.second : c.first;
        defect = disturbance_defect(h, Observable{a.reg, a.basis, a.step}, b, c.given);
        compatible = T::prob_is_zero(defect);
        std::string g;
        for (const auto &e : c.given) {
            g += (g.empty() ? "" : " and ") + event_text(h, e);
        }
        r.fields.push_back({"given", g});
    }
    r.numbers.push_back({"defect", to_number<Amp>(defect)});
    r.flags.push_back({"compatible", compatible});
    if (c.expect_compatible) {
        expectation(r, compatible == *c.expect_compatible);
    }
    if (c.expect_defect) {
        expectation(r, literal_matches<Amp>(defect, *c.expect_defect));
    }
    return r;
}

template <Amplitude Amp> CheckResult run_check(const Scenario &scn, const History<Amp> &h, const OrCheck &c) {
    CheckResult r;
    r.kind = "or";
    std::vector<Statement> branches;
    for (const auto &id : c.branches) {
        branches.push_back(need_statement<Amp>(scn, id));
        r.title += (r.title.empty() ? "" : " or ") + id;
    }
    r.title += " merged " + c.merged;
    const auto rep = or_composition_check(h, branches, need_statement<Amp>(scn, c.merged));
    for (std::size_t i = 0; i < branches.size(); ++i) {
        r.numbers.push_back({c.branches[i] + "_p", to_number<Amp>(rep.branches[i].probability)});
        r.numbers.push_back({c.branches[i] + "_weight", to_number<Amp>(rep.weights[i])});
    }
    r.numbers.push_back({"expected_p", to_number<Amp>(rep.expected)});
    r.numbers.push_back({"merged_p", to_number<Amp>(rep.merged.probability)});
    r.fields.push_back({"expected_verdict", to_string(rep.expected_classification)});
    r.fields.push_back({"merged_verdict", to_string(rep.merged.classification)});
    r.flags.push_back({"divergence", rep.divergence});
    if (c.expect_divergence) {
        expectation(r, rep.divergence == *c.expect_divergence);
    }
    return r;
}

template <Amplitude Amp> CheckResult run_check(const Scenario &, const History<Amp> &h, const ConjunctionCheck &c) {
    CheckResult r;
    r.kind = "conjunction";
    r.title = statement_text(h, Statement{"", c.premises, c.conclusion});
    const auto rep = conjunction_premise_check(h, c.premises, c.conclusion);
    r.fields.push_back({"verdict", to_string(rep.verdict.classification)});
    r.numbers.push_back({"p", to_number<Amp>(rep.verdict.probability)});
    r.numbers.push_back({"premise_p", to_number<Amp>(rep.verdict.premise_probability)});
    for (const auto &pair : rep.pairs) {
        r.numbers.push_back({event_text(h, pair.first) + " | " + event_text(h, pair.second), to_number<Amp>(pair.defect)});
    }
    r.flags.push_back({"all_compatible", rep.all_compatible});
    r.diagnostics = rep.verdict.diagnostics;
    if (c.expect_compatible) {
        expectation(r, rep.all_compatible == *c.expect_compatible);
    }
    if (c.expect_verdict) {
        expectation(r, rep.verdict.classification == *c.expect_verdict);
    }
    return r;
}

template <Amplitude Amp> CheckResult run_check(const Scenario &, const History<Amp> &h, const ChainCheck &c) {
    CheckResult r;
    r.kind = "chain";
    for (const auto &e : c.events) {
        r.title += (r.title.empty() ? "" : ", ") + event_text(h, e);
    }
    const auto p = chain_probability(h, c.events);
    r.numbers.push_back({"p", to_number<Amp>(p)});
    if (c.expect_p) {
        expectation(r, literal_matches<Amp>(p, *c.expect_p));
    }
    return r;
}

template <Amplitude Amp> CheckResult run_check(const Scenario &, const History<Amp> &h, const StateCheck &c) {
    using T = amp_traits<Amp>;
    CheckResult r;
    r.kind = "state";
    r.title = "snapshot " + std::to_string(c.step);
    const auto actual = canonical(h.snapshot(c.step));
    const auto expected = build_ket<Amp>(actual.registers(), c.ket, true);
    r.fields.push_back({"actual", actual.str()});
    r.fields.push_back({"expected", expected.str()});
    bool same = actual.terms().size() == expected.terms().size();
    for (const auto &[key, amp] : expected.terms()) {
        auto it = actual.terms().find(key);
        same = same && it != actual.terms().end() && T::prob_is_zero(T::abs_sq(it->second - amp));
    }
    r.flags.push_back({"equal", same});
    expectation(r, same);
    return r;
}

/// Mines a history at most once per run.
template <Amplitude Amp> class MineCache {
  public:
    const std::vector<MinedStatement<Amp>> &get(const History<Amp> &h) {
        if (!mined_) {
            mined_ = mine_statements(h);
        }
        return *mined_;
    }

  private:
    std::optional<std::vector<MinedStatement<Amp>>> mined_;
};

template <Amplitude Amp>
CheckResult run_check(const Scenario &, const History<Amp> &h, const MineCheck &, MineCache<Amp> &cache) {
    CheckResult r;
    r.kind = "mine";
    r.title = "mined statements";
    std::size_t nontrivial = 0;
    for (const auto &m : cache.get(h)) {
        MinedRow row;
        row.premise = event_text(h, m.statement.premises.front());
        row.conclusion = event_text(h, m.statement.conclusion);
        row.forward_holds = m.forward_holds();
        row.retro_holds = m.retro_holds();
        row.trivial = m.trivial;
        row.forward_p = to_number<Amp>(m.forward.probability);
        row.retro_p = to_number<Amp>(m.retro.probability);
        nontrivial += m.trivial ? 0 : 1;
        r.mined.push_back(std::move(row));
    }
    r.numbers.push_back({"holding", Number::of(static_cast<double>(r.mined.size()))});
    r.numbers.push_back({"nontrivial", Number::of(static_cast<double>(nontrivial))});
    return r;
}

template <Amplitude Amp>
CheckResult run_check(const Scenario &, const History<Amp> &h, const MinedCheck &c, MineCache<Amp> &cache) {
    CheckResult r;
    r.kind = "mined";
    r.title = statement_text(h, Statement{"", {c.premise}, c.conclusion});
    bool found = false;
    for (const auto &m : cache.get(h)) {
        if (!same_event(h, m.statement.premises.front(), c.premise) || !same_event(h, m.statement.conclusion, c.conclusion)) {
            continue;
        }
        const bool holds = !c.mode ? (m.forward_holds() || m.retro_holds())
                                   : (*c.mode == EvalMode::forward ? m.forward_holds() : m.retro_holds());
        found = found || holds;
        r.numbers.push_back({"forward_p", to_number<Amp>(m.forward.probability)});
        r.numbers.push_back({"retro_p", to_number<Amp>(m.retro.probability)});
    }
    r.flags.push_back({"found", found});
    expectation(r, found);
    return r;
}

template <Amplitude Amp> std::string joint_key(const StateVector<Amp> &s, const std::vector<std::size_t> &idx, const std::vector<unsigned> &labels) {
    std::string key;
    for (std::size_t j = 0; j < idx.size(); ++j) {
        key += (j > 0 ? "_" : "") + s.label_text(idx[j], labels[j]);
    }
    return key;
}

} // namespace detail

/// Builds the initial state of a scenario in amplitude type Amp.
template <Amplitude Amp> StateVector<Amp> initial_state(const Scenario &scn) {
    std::vector<Register> regs;
    for (const auto &d : scn.registers) {
        regs.push_back(make_register(d.name, d.style));
    }
    return detail::build_ket<Amp>(regs, scn.initial, false);
}

template <Amplitude Amp> History<Amp> run_history(const Scenario &scn) {
    return run_experiment(initial_state<Amp>(scn), scn.steps, scn.seed);
}

/// Runs everything in a scenario. Check-level errors are reported on the check.
template <Amplitude Amp> ScenarioResult evaluate_scenario(const Scenario &scn, const History<Amp> &h) {
    using T = amp_traits<Amp>;
    ScenarioResult out;
    out.name = scn.name;
    out.description = scn.description;
    out.mode = T::exact ? Mode::exact : Mode::floating;
    for (std::size_t k = 0; k < h.snapshots.size(); ++k) {
        SnapshotSummary s;
        s.step = k;
        s.label = k == 0 ? "initial" : h.step(k).agent + " " + to_string(h.step(k).style);
        for (const auto &r : h.snapshot(k).registers()) {
            s.registers.push_back(r.name);
        }
        s.terms = h.snapshot(k).terms().size();
        s.norm_sq = detail::to_number<Amp>(h.snapshot(k).norm_sq());
        s.ket = h.snapshot(k).str();
        out.snapshots.push_back(std::move(s));
    }
    for (const auto &c : h.collapse_log) {
        const auto &snap = h.snapshot(c.step);
        out.collapses.push_back({c.step, snap.label_text(snap.index_of(h.records.at(c.step - 1)), c.outcome),
                                 detail::to_number<Amp>(c.probability), c.sampled});
    }
    for (const auto &spec : scn.statements) {
        StatementResult r;
        r.id = spec.statement.id;
        r.mode = spec.statement.mode;
        r.claim = spec.statement.claim;
        r.expected = spec.expect;
        if (spec.expect_p) {
            r.expected_p = spec.expect_p->text;
        }
        try {
            r.text = detail::statement_text(h, spec.statement);
            const auto v = evaluate_statement(h, spec.statement);
            r.classification = v.classification;
            r.probability = detail::to_number<Amp>(v.probability);
            r.premise_probability = detail::to_number<Amp>(v.premise_probability);
            r.diagnostics = v.diagnostics;
            if (spec.expect) {
                r.matched = v.classification == *spec.expect;
            }
            if (spec.expect_p) {
                r.matched = r.matched && detail::literal_matches<Amp>(v.probability, *spec.expect_p);
            }
        } catch (const Error &e) {
            r.diagnostics.push_back({std::string(to_string(e.kind())), e.what()});
            r.matched = false;
        }
        out.statements.push_back(std::move(r));
    }
    detail::MineCache<Amp> cache;
    for (const auto &check : scn.checks) {
        CheckResult r;
        try {
            r = std::visit(
                [&](const auto &c) {
                    using C = std::decay_t<decltype(c)>;
                    if constexpr (std::is_same_v<C, MineCheck> || std::is_same_v<C, MinedCheck>) {
                        return detail::run_check<Amp>(scn, h, c, cache);
                    } else {
                        return detail::run_check<Amp>(scn, h, c);
                    }
                },
                check);
        } catch (const Error &e) {
            r.kind = "error";
            r.error = std::string(to_string(e.kind())) + ": " + e.what();
            r.matched = false;
        }
        out.checks.push_back(std::move(r));
    }
    if (scn.joint) {
        JointResult j;
        j.step = scn.joint->step.value_or(h.step_count());
        j.registers = scn.joint->registers;
        const auto &snap = h.snapshot(j.step);
        std::vector<std::pair<std::string, BasisSpec>> meas;
        std::vector<std::size_t> idx;
        for (const auto &r : scn.joint->registers) {
            meas.emplace_back(r, BasisSpec::z_basis());
            idx.push_back(snap.index_of(r));
        }
        const auto canon = canonical(snap);
        for (const auto &[labels, p] : joint_probabilities(canon, meas)) {
            j.probabilities.emplace_back(detail::joint_key(canon, idx, labels), detail::to_number<Amp>(p));
        }
        for (const auto &[key, lit] : scn.joint->expect) {
            j.has_expectation = true;
            bool ok = false;
            for (std::size_t i = 0; i < j.probabilities.size(); ++i) {
                if (j.probabilities[i].first == key) {
                    const auto &num = j.probabilities[i].second;
                    if constexpr (T::exact) {
                        ok = lit.exact ? *num.exact == *lit.exact : std::abs(num.value - lit.approx.real()) < kFloatTolerance;
                    } else {
                        ok = std::abs(num.value - lit.approx.real()) < kFloatTolerance;
                    }
                }
            }
            j.matched = j.matched && ok;
        }
        out.joint = std::move(j);
    }
    return out;
}

/// Runs a scenario in its own mode (or the override) and evaluates it.
inline ScenarioResult run_scenario(const Scenario &scn, std::optional<Mode> mode_override = std::nullopt) {
    const Mode mode = mode_override.value_or(scn.mode);
    if (mode == Mode::exact) {
        return evaluate_scenario(scn, run_history<QuadAmp>(scn));
    }
    return evaluate_scenario(scn, run_history<FloatAmp>(scn));
}

} // namespace frlogic
