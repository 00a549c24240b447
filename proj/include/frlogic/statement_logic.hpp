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
 * "If ... then ..." statements over experiment histories.
 *
 * An Event is a projector on one register at one snapshot. Chains of events
 * are evaluated by projecting, evolving the (unnormalized) state through the
 * recorded steps, and projecting again. Statements are evaluated either by
 * forward insertion or by retrodiction (project on the premises, then carry
 * the state to the conclusion's snapshot, backwards if needed).
 */
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "amplitude_traits.hpp"
#include "error.hpp"
#include "measurement_engine.hpp"
#include "state_space.hpp"

namespace frlogic {

struct Event {
    std::string reg;
    BasisSpec basis;
    unsigned outcome = 0;
    std::size_t step = 0;

    friend bool operator==(const Event &, const Event &) = default;
};

enum class EvalMode { forward, retrodictive };
/// What the statement asserts: a certain conclusion, or only a likely one.
enum class Claim { certain, probabilistic };
enum class Classification { Holds, Vacuous, Fails, Probabilistic };

inline const char *to_string(EvalMode m) { return m == EvalMode::forward ? "forward" : "retro"; }
inline const char *to_string(Claim c) { return c == Claim::certain ? "certain" : "probabilistic"; }
inline const char *to_string(Classification c) {
    switch (c) {
    case Classification::Holds: return "Holds";
    case Classification::Vacuous: return "Vacuous";
    case Classification::Fails: return "Fails";
    case Classification::Probabilistic: return "Probabilistic";
    }
    return "?";
}

struct Statement {
    std::string id;
    std::vector<Event> premises;
    Event conclusion;
    EvalMode mode = EvalMode::forward;
    Claim claim = Claim::certain;
};

struct Diagnostic {
    std::string kind;
    std::string message;
};

template <Amplitude Amp> struct Verdict {
    Classification classification = Classification::Vacuous;
    prob_t<Amp> probability{};
    prob_t<Amp> premise_probability{};
    EvalMode mode = EvalMode::forward;
    std::vector<Diagnostic> diagnostics;

    [[nodiscard]] bool has(std::string_view kind) const {
        return std::any_of(diagnostics.begin(), diagnostics.end(), [&](const Diagnostic &d) { return d.kind == kind; });
    }
};

/// Label text for an event, e.g. `minus` for a sign-style record.
template <Amplitude Amp> std::string event_label(const History<Amp> &history, const Event &e) {
    if (e.basis.kind == BasisSpec::Kind::x) {
        return e.outcome == 0 ? "plus" : "minus";
    }
    if (e.basis.kind == BasisSpec::Kind::z && e.step < history.snapshots.size()) {
        const auto &s = history.snapshot(e.step);
        if (auto i = s.find(e.reg); i && s.registers()[*i].style == LabelStyle::sign) {
            return e.outcome == 0 ? "plus" : "minus";
        }
    }
    return e.outcome == 0 ? "up" : "down";
}

template <Amplitude Amp> std::string event_text(const History<Amp> &history, const Event &e) {
    std::string out = e.reg + "@" + std::to_string(e.step) + " == " + event_label(history, e);
    if (e.basis.kind != BasisSpec::Kind::z) {
        out += " basis=" + e.basis.str();
    }
    return out;
}

namespace detail {

template <Amplitude Amp> std::size_t resolve(const History<Amp> &history, const Event &e) {
    if (e.step >= history.snapshots.size()) {
        throw Error(ErrorKind::InvalidArgument,
                    "event step " + std::to_string(e.step) + " is past the last snapshot " +
                        std::to_string(history.snapshots.size() - 1));
    }
    if (!e.basis.single_register()) {
        throw Error(ErrorKind::InvalidArgument, "events use single-register bases");
    }
    if (e.outcome > 1) {
        throw Error(ErrorKind::InvalidArgument, "event outcomes are 0 or 1");
    }
    return history.snapshot(e.step).index_of(e.reg);
}

/// Canonical register name of an event at its snapshot.
template <Amplitude Amp> std::string resolved_name(const History<Amp> &history, const Event &e) {
    return history.snapshot(e.step).registers()[resolve(history, e)].name;
}

template <Amplitude Amp> bool same_event(const History<Amp> &history, const Event &a, const Event &b) {
    return a.step == b.step && a.outcome == b.outcome && a.basis == b.basis &&
           resolved_name(history, a) == resolved_name(history, b);
}

template <Amplitude Amp> void check_order(const History<Amp> &history, const std::vector<Event> &events) {
    for (std::size_t i = 0; i < events.size(); ++i) {
        resolve(history, events[i]);
        if (i > 0 && events[i].step < events[i - 1].step) {
            throw Error(ErrorKind::UnsortedEvents, "events must be sorted by step");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (events[j].step == events[i].step && !(events[j].basis == events[i].basis) &&
                resolved_name(history, events[j]) == resolved_name(history, events[i])) {
                throw Error(ErrorKind::IllFormedEvents, "register '" + events[i].reg + "' is read in two bases at step " +
                                                            std::to_string(events[i].step));
            }
        }
    }
}

template <Amplitude Amp> StateVector<Amp> project_event(const StateVector<Amp> &state, const Event &e) {
    return project(state, e.reg, e.basis, e.outcome);
}

/// State after inserting every event's projector in order; lives at the last event's step.
template <Amplitude Amp> StateVector<Amp> chain_state(const History<Amp> &history, const std::vector<Event> &events) {
    check_order(history, events);
    if (events.empty()) {
        throw Error(ErrorKind::InvalidArgument, "empty event chain");
    }
    StateVector<Amp> state = history.snapshot(events.front().step);
    std::size_t at = events.front().step;
    for (const auto &e : events) {
        state = evolve(history, std::move(state), at, e.step);
        at = e.step;
        state = project_event(state, e);
    }
    return state;
}

/// Moves a state living at snapshot `from` to snapshot `to`, forwards or backwards.
template <Amplitude Amp> StateVector<Amp> transport(const History<Amp> &history, StateVector<Amp> state, std::size_t from, std::size_t to) {
    if (to >= from) {
        return evolve(history, std::move(state), from, to);
    }
    return back_evolve(history, std::move(state), from, to);
}

template <Amplitude Amp> std::vector<Event> sorted_events(std::vector<Event> events) {
    std::stable_sort(events.begin(), events.end(), [](const Event &a, const Event &b) { return a.step < b.step; });
    return events;
}

template <Amplitude Amp>
Classification classify(const prob_t<Amp> &premise, const prob_t<Amp> &p, Claim claim) {
    using T = amp_traits<Amp>;
    if (T::prob_is_zero(premise)) {
        return Classification::Vacuous;
    }
    if (T::prob_is_one(p)) {
        return Classification::Holds;
    }
    if (claim == Claim::probabilistic && T::prob_positive(p) && T::prob_positive(prob_t<Amp>(1) - p)) {
        return Classification::Probabilistic;
    }
    return Classification::Fails;
}

} // namespace detail

/// norm² after inserting the events' projectors chronologically.
template <Amplitude Amp> prob_t<Amp> chain_probability(const History<Amp> &history, const std::vector<Event> &events) {
    if (events.empty()) {
        return history.snapshot(0).norm_sq();
    }
    return detail::chain_state(history, events).norm_sq();
}

/// Unconditional Born probability of a single event.
template <Amplitude Amp> prob_t<Amp> event_probability(const History<Amp> &history, const Event &e) {
    return chain_probability(history, std::vector<Event>{e});
}

/// Earlier observable for a disturbance check: a register read in a basis.
struct Observable {
    std::string reg;
    BasisSpec basis;
    std::size_t step = 0;
};

/**
 * |Pr(later | given) - sum_o Pr(earlier = o, later | given)|. `given` events
 * restrict to a branch (they are inserted chronologically with the others).
 */
template <Amplitude Amp>
prob_t<Amp> disturbance_defect(const History<Amp> &history, const Observable &earlier, const Event &later,
                               const std::vector<Event> &given = {}) {
    using T = amp_traits<Amp>;
    if (earlier.step > later.step) {
        throw Error(ErrorKind::InvalidArgument, "the earlier observable must not come after the later event");
    }
    auto with = [&](std::vector<Event> extra) {
        for (const auto &g : given) {
            extra.push_back(g);
        }
        return detail::sorted_events<Amp>(std::move(extra));
    };
    const prob_t<Amp> base = given.empty() ? prob_t<Amp>(1) : chain_probability(history, with({}));
    if (T::prob_is_zero(base)) {
        return prob_t<Amp>{};
    }
    const prob_t<Amp> undisturbed = chain_probability(history, with({later}));
    prob_t<Amp> decohered{};
    for (unsigned o = 0; o < 2; ++o) {
        Event e{earlier.reg, earlier.basis, o, earlier.step};
        decohered += chain_probability(history, with({e, later}));
    }
    return T::prob_abs(undisturbed - decohered) / base;
}

template <Amplitude Amp> struct CompatibilityResult {
    bool compatible = true;
    prob_t<Amp> defect{};
};

/// Two events may share an AND iff reading the earlier one's observable leaves the later one alone.
template <Amplitude Amp> CompatibilityResult<Amp> conjunction_compatible(const History<Amp> &history, const Event &e1, const Event &e2) {
    using T = amp_traits<Amp>;
    const Event &first = e1.step <= e2.step ? e1 : e2;
    const Event &second = e1.step <= e2.step ? e2 : e1;
    CompatibilityResult<Amp> out;
    if (first.step == second.step) {
        if (detail::resolved_name(history, first) != detail::resolved_name(history, second)) {
            return out;
        }
        if (!(first.basis == second.basis)) {
            throw Error(ErrorKind::IllFormedEvents, "register '" + first.reg + "' is read in two bases at step " +
                                                        std::to_string(first.step));
        }
        return out;
    }
    out.defect = disturbance_defect(history, Observable{first.reg, first.basis, first.step}, second);
    out.compatible = T::prob_is_zero(out.defect);
    return out;
}

namespace detail {

template <Amplitude Amp> prob_t<Amp> forward_conditional(const History<Amp> &history, const Statement &stmt, const prob_t<Amp> &premise) {
    std::vector<Event> all = stmt.premises;
    all.push_back(stmt.conclusion);
    return chain_probability(history, sorted_events<Amp>(std::move(all))) / premise;
}

template <Amplitude Amp>
prob_t<Amp> retro_conditional(const History<Amp> &history, const Statement &stmt, const prob_t<Amp> &premise) {
    const auto premises = sorted_events<Amp>(stmt.premises);
    StateVector<Amp> state = chain_state(history, premises);
    state = transport(history, std::move(state), premises.back().step, stmt.conclusion.step);
    return project_event(state, stmt.conclusion).norm_sq() / premise;
}

} // namespace detail

/// Evaluates a statement in its own mode. Pass `check_premises = false` to skip pairwise compatibility diagnostics.
template <Amplitude Amp>
Verdict<Amp> evaluate_statement(const History<Amp> &history, const Statement &stmt, bool check_premises = true) {
    using T = amp_traits<Amp>;
    if (stmt.premises.empty()) {
        throw Error(ErrorKind::InvalidArgument, "statement '" + stmt.id + "' has no premises");
    }
    detail::resolve(history, stmt.conclusion);
    const auto premises = detail::sorted_events<Amp>(stmt.premises);
    Verdict<Amp> v;
    v.mode = stmt.mode;
    v.premise_probability = chain_probability(history, premises);
    if (T::prob_is_zero(v.premise_probability)) {
        v.classification = Classification::Vacuous;
        return v;
    }
    if (stmt.mode == EvalMode::forward) {
        v.probability = detail::forward_conditional(history, stmt, v.premise_probability);
    } else {
        try {
            v.probability = detail::retro_conditional(history, stmt, v.premise_probability);
        } catch (const Error &e) {
            if (e.kind() != ErrorKind::OutsideRange) {
                throw;
            }
            v.diagnostics.push_back({"RecordErased", std::string(e.what()) + "; evaluated by forward insertion"});
            v.probability = detail::forward_conditional(history, stmt, v.premise_probability);
        }
    }
    if (T::prob_positive(v.probability - prob_t<Amp>(1))) {
        v.diagnostics.push_back({"ProbabilityAboveOne", "forward insertion of the conclusion raised the premise weight"});
    }
    if (check_premises) {
        for (std::size_t i = 0; i < premises.size(); ++i) {
            for (std::size_t j = i + 1; j < premises.size(); ++j) {
                auto c = conjunction_compatible(history, premises[i], premises[j]);
                if (!c.compatible) {
                    v.diagnostics.push_back({"IncompatiblePremises", event_text(history, premises[i]) + " and " +
                                                                         event_text(history, premises[j]) +
                                                                         " disturb each other (defect " +
                                                                         T::str(c.defect) + ")"});
                }
            }
        }
    }
    v.classification = detail::classify<Amp>(v.premise_probability, v.probability, stmt.claim);
    return v;
}

// ---------------------------------------------------------------------------
// Transitivity
// ---------------------------------------------------------------------------

template <Amplitude Amp> struct TransitivityReport {
    Verdict<Amp> first;
    Verdict<Amp> second;
    Statement combined;
    /// Combined statement evaluated in the second statement's mode.
    Verdict<Amp> combined_verdict;
    Verdict<Amp> combined_forward;
    Verdict<Amp> combined_retro;
    bool transitivity_valid = false;
    /// Conclusion probability the chained statements predict (that of the second statement).
    prob_t<Amp> predicted{};
    /// Fraction of runs on which the chained conclusion is wrong: |actual - predicted|.
    prob_t<Amp> violation{};
    bool contradiction = false;
};

template <Amplitude Amp>
TransitivityReport<Amp> check_transitivity(const History<Amp> &history, const Statement &s1, const Statement &s2) {
    using T = amp_traits<Amp>;
    if (s2.premises.size() != 1 || !detail::same_event(history, s1.conclusion, s2.premises.front())) {
        throw Error(ErrorKind::ChainMismatch, "the conclusion of '" + s1.id + "' is not the sole premise of '" + s2.id + "'");
    }
    TransitivityReport<Amp> r;
    r.first = evaluate_statement(history, s1);
    r.second = evaluate_statement(history, s2);
    r.combined = Statement{s1.id + "*" + s2.id, s1.premises, s2.conclusion, s2.mode, s2.claim};
    Statement fwd = r.combined;
    fwd.mode = EvalMode::forward;
    Statement retro = r.combined;
    retro.mode = EvalMode::retrodictive;
    r.combined_forward = evaluate_statement(history, fwd, false);
    r.combined_retro = evaluate_statement(history, retro, false);
    r.combined_verdict = s2.mode == EvalMode::forward ? r.combined_forward : r.combined_retro;
    r.predicted = r.second.probability;
    r.transitivity_valid = r.combined_verdict.classification != Classification::Vacuous &&
                           T::prob_is_one(r.combined_verdict.probability);
    r.violation = T::prob_abs(r.combined_verdict.probability - r.predicted);
    r.contradiction = !T::prob_is_zero(r.violation);
    return r;
}

/// |c_a|² / (|c_a|² + |c_b|²).
template <Amplitude Amp> prob_t<Amp> violation_fraction(const Amp &c_a, const Amp &c_b) {
    using T = amp_traits<Amp>;
    const auto wa = T::abs_sq(c_a);
    const auto wb = T::abs_sq(c_b);
    if (T::prob_is_zero(wa + wb)) {
        throw Error(ErrorKind::BothZero, "violation fraction needs a nonzero weight");
    }
    return wa / (wa + wb);
}

// ---------------------------------------------------------------------------
// OR composition
// ---------------------------------------------------------------------------

template <Amplitude Amp> struct OrReport {
    std::vector<Verdict<Amp>> branches;
    /// Premise probability of each branch, the weights of the classical average.
    std::vector<prob_t<Amp>> weights;
    prob_t<Amp> expected{};
    Classification expected_classification = Classification::Vacuous;
    Verdict<Amp> merged;
    bool divergence = false;
};

/**
 * Each branch = merged premises + one event from a complete outcome set of a
 * single observable. Missing outcomes must have zero weight.
 */
template <Amplitude Amp>
OrReport<Amp> or_composition_check(const History<Amp> &history, const std::vector<Statement> &branches, const Statement &merged) {
    using T = amp_traits<Amp>;
    if (branches.empty()) {
        throw Error(ErrorKind::IncompleteOutcomeSet, "no branches");
    }
    std::optional<Event> split;
    std::vector<bool> seen(2, false);
    for (const auto &b : branches) {
        if (!detail::same_event(history, b.conclusion, merged.conclusion)) {
            throw Error(ErrorKind::IncompleteOutcomeSet, "branch '" + b.id + "' has a different conclusion");
        }
        std::vector<Event> extra;
        std::vector<bool> used(merged.premises.size(), false);
        for (const auto &p : b.premises) {
            bool matched = false;
            for (std::size_t i = 0; i < merged.premises.size(); ++i) {
                if (!used[i] && detail::same_event(history, p, merged.premises[i])) {
                    used[i] = true;
                    matched = true;
                    break;
                }
            }
            if (!matched) {
                extra.push_back(p);
            }
        }
        if (extra.size() != 1 || std::find(used.begin(), used.end(), false) != used.end()) {
            throw Error(ErrorKind::IncompleteOutcomeSet,
                        "branch '" + b.id + "' must add exactly one event to the merged premises");
        }
        const Event &e = extra.front();
        detail::resolve(history, e);
        if (split) {
            if (split->step != e.step || !(split->basis == e.basis) ||
                detail::resolved_name(history, *split) != detail::resolved_name(history, e)) {
                throw Error(ErrorKind::IncompleteOutcomeSet, "branches split on different observables");
            }
        } else {
            split = e;
        }
        if (seen[e.outcome]) {
            throw Error(ErrorKind::IncompleteOutcomeSet, "two branches share an outcome");
        }
        seen[e.outcome] = true;
    }
    for (unsigned o = 0; o < 2; ++o) {
        if (!seen[o]) {
            Event missing = *split;
            missing.outcome = o;
            auto with = merged.premises;
            with.push_back(missing);
            if (!T::prob_is_zero(chain_probability(history, detail::sorted_events<Amp>(with)))) {
                throw Error(ErrorKind::IncompleteOutcomeSet, "outcome " + std::to_string(o) +
                                                                 " of the split observable has weight but no branch");
            }
        }
    }
    OrReport<Amp> r;
    prob_t<Amp> total{};
    prob_t<Amp> weighted{};
    for (const auto &b : branches) {
        r.branches.push_back(evaluate_statement(history, b));
        r.weights.push_back(r.branches.back().premise_probability);
        total += r.weights.back();
        if (r.branches.back().classification != Classification::Vacuous) {
            weighted += r.weights.back() * r.branches.back().probability;
        }
    }
    r.merged = evaluate_statement(history, merged);
    if (!T::prob_is_zero(total)) {
        r.expected = weighted / total;
        r.expected_classification = detail::classify<Amp>(total, r.expected, merged.claim);
    }
    r.divergence = !T::prob_equal(r.expected, r.merged.probability);
    return r;
}

// ---------------------------------------------------------------------------
// Multi-premise checks and mining
// ---------------------------------------------------------------------------

template <Amplitude Amp> struct PairDefect {
    Event first;
    Event second;
    bool compatible = true;
    prob_t<Amp> defect{};
};

template <Amplitude Amp> struct ConjunctionReport {
    Verdict<Amp> verdict;
    std::vector<PairDefect<Amp>> pairs;
    bool all_compatible = true;
};

/// Retrodictive evaluation of a multi-premise statement plus compatibility of every premise/premise and premise/conclusion pair.
template <Amplitude Amp>
ConjunctionReport<Amp> conjunction_premise_check(const History<Amp> &history, const std::vector<Event> &premises, const Event &conclusion) {
    ConjunctionReport<Amp> r;
    Statement s{"conjunction", premises, conclusion, EvalMode::retrodictive, Claim::certain};
    r.verdict = evaluate_statement(history, s, false);
    std::vector<Event> all = premises;
    all.push_back(conclusion);
    for (std::size_t i = 0; i < all.size(); ++i) {
        for (std::size_t j = i + 1; j < all.size(); ++j) {
            if (detail::same_event(history, all[i], all[j])) {
                continue;
            }
            auto c = conjunction_compatible(history, all[i], all[j]);
            r.pairs.push_back({all[i], all[j], c.compatible, c.defect});
            if (!c.compatible) {
                r.all_compatible = false;
                r.verdict.diagnostics.push_back(
                    {j + 1 == all.size() ? "IncompatibleConclusion" : "IncompatiblePremises",
                     event_text(history, all[i]) + " and " + event_text(history, all[j]) + " disturb each other (defect " +
                         amp_traits<Amp>::str(c.defect) + ")"});
            }
        }
    }
    return r;
}

template <Amplitude Amp> struct MinedStatement {
    Statement statement;
    Verdict<Amp> forward;
    Verdict<Amp> retro;
    /// Conclusion certain regardless of the premise, or premise and conclusion imply each other.
    bool trivial = false;

    [[nodiscard]] bool forward_holds() const { return forward.classification == Classification::Holds; }
    [[nodiscard]] bool retro_holds() const { return retro.classification == Classification::Holds; }
};

/**
 * Evaluates every ordered pair of single events (each live register, z and
 * x, each outcome with nonzero weight, each snapshot) in both modes and
 * returns the pairs that hold in at least one of them.
 */
template <Amplitude Amp> std::vector<MinedStatement<Amp>> mine_statements(const History<Amp> &history) {
    using T = amp_traits<Amp>;
    struct Node {
        Event event;
        prob_t<Amp> p;
        std::vector<std::optional<StateVector<Amp>>> at;
    };
    std::vector<Node> nodes;
    const std::size_t n = history.step_count();
    for (std::size_t k = 0; k <= n; ++k) {
        const auto &snap = history.snapshot(k);
        for (const auto &reg : snap.registers()) {
            for (const auto &basis : {BasisSpec::z_basis(), BasisSpec::x_basis()}) {
                for (unsigned o = 0; o < 2; ++o) {
                    Event e{reg.name, basis, o, k};
                    auto projected = detail::project_event(snap, e);
                    const auto p = projected.norm_sq();
                    if (T::prob_is_zero(p)) {
                        continue;
                    }
                    Node node{e, p, std::vector<std::optional<StateVector<Amp>>>(n + 1)};
                    node.at[k] = projected;
                    for (std::size_t j = k + 1; j <= n; ++j) {
                        node.at[j] = evolve(history, *node.at[j - 1], j - 1, j);
                    }
                    for (std::size_t j = k; j-- > 0;) {
                        if (!node.at[j + 1]) {
                            break;
                        }
                        try {
                            node.at[j] = back_evolve(history, *node.at[j + 1], j + 1, j);
                        } catch (const Error &) {
                            break;
                        }
                    }
                    nodes.push_back(std::move(node));
                }
            }
        }
    }
    auto joint = [&](const Node &first, const Node &second) {
        // first.step <= second.step; chain(first, second)
        return detail::project_event(*first.at[second.event.step], second.event).norm_sq();
    };
    std::vector<MinedStatement<Amp>> out;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> found;
    for (std::size_t ia = 0; ia < nodes.size(); ++ia) {
        for (std::size_t ib = 0; ib < nodes.size(); ++ib) {
            const Node &a = nodes[ia];
            const Node &b = nodes[ib];
            if (a.event.step == b.event.step && a.event.reg == b.event.reg) {
                continue;
            }
            MinedStatement<Amp> m;
            m.statement = Statement{"", {a.event}, b.event, EvalMode::forward, Claim::certain};
            m.forward.mode = EvalMode::forward;
            m.retro.mode = EvalMode::retrodictive;
            m.forward.premise_probability = a.p;
            m.retro.premise_probability = a.p;
            if (b.event.step >= a.event.step) {
                m.forward.probability = joint(a, b) / a.p;
                m.retro.probability = m.forward.probability;
            } else {
                m.forward.probability = joint(b, a) / a.p;
                if (a.at[b.event.step]) {
                    m.retro.probability = detail::project_event(*a.at[b.event.step], b.event).norm_sq() / a.p;
                } else {
                    m.retro.probability = m.forward.probability;
                    m.retro.diagnostics.push_back({"RecordErased", "back-evolution left the range of a preserving step"});
                }
            }
            m.forward.classification = detail::classify<Amp>(a.p, m.forward.probability, Claim::certain);
            m.retro.classification = detail::classify<Amp>(a.p, m.retro.probability, Claim::certain);
            if (!m.forward_holds() && !m.retro_holds()) {
                continue;
            }
            m.statement.mode = m.retro_holds() && !m.forward_holds() ? EvalMode::retrodictive : EvalMode::forward;
            m.trivial = T::prob_is_one(b.p);
            found[{ia, ib}] = out.size();
            out.push_back(std::move(m));
        }
    }
    for (const auto &[key, idx] : found) {
        auto back = found.find({key.second, key.first});
        if (back == found.end()) {
            continue;
        }
        auto &m = out[idx];
        const auto &r = out[back->second];
        if ((m.forward_holds() && r.forward_holds()) || (m.retro_holds() && r.retro_holds())) {
            m.trivial = true;
        }
    }
    return out;
}

} // namespace frlogic
