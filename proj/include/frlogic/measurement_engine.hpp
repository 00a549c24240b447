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
 * Collapse-free agent measurements and experiment histories.
 *
 * An absorbing step turns the target register into the agent's record
 * (identity on the abstract vector, new labels). A preserving step appends a
 * fresh record and applies the controlled copy sum_o P_o (x) |o><0|. A
 * collapse step does either of those, then keeps one record outcome and
 * rescales by 1/sqrt(p).
 */
#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "amplitude_traits.hpp"
#include "error.hpp"
#include "state_space.hpp"

namespace frlogic {

enum class StepStyle { absorb, preserve, collapse };

inline const char *to_string(StepStyle s) {
    switch (s) {
    case StepStyle::absorb: return "absorb";
    case StepStyle::preserve: return "preserve";
    case StepStyle::collapse: return "collapse";
    }
    return "?";
}

struct MeasurementStep {
    std::size_t index = 1;
    std::string agent;
    std::vector<std::string> targets;
    BasisSpec basis;
    StepStyle style = StepStyle::absorb;
    /// For collapse steps: how the record is written before the projection.
    StepStyle collapse_base = StepStyle::absorb;
    /// For collapse steps: the kept outcome; empty means sample it.
    std::optional<unsigned> collapse_outcome;

    [[nodiscard]] StepStyle record_style() const { return style == StepStyle::collapse ? collapse_base : style; }
};

/// One collapse performed while running an experiment.
template <Amplitude Amp> struct CollapseEntry {
    std::size_t step = 0;
    unsigned outcome = 0;
    prob_t<Amp> probability{};
    /// 1/sqrt(probability), the rescaling applied after the projection.
    Amp factor{};
    bool sampled = false;
};

template <Amplitude Amp> struct History {
    /// snapshots[k] is the state right after step k; snapshots[0] is the initial state.
    std::vector<StateVector<Amp>> snapshots;
    std::vector<MeasurementStep> steps;
    std::vector<CollapseEntry<Amp>> collapse_log;
    /// Record register written by each step (same order as steps).
    std::vector<std::string> records;

    [[nodiscard]] std::size_t step_count() const { return steps.size(); }
    [[nodiscard]] const StateVector<Amp> &snapshot(std::size_t k) const {
        if (k >= snapshots.size()) {
            throw Error(ErrorKind::InvalidArgument, "no snapshot after step " + std::to_string(k));
        }
        return snapshots[k];
    }
    [[nodiscard]] const MeasurementStep &step(std::size_t k) const { return steps.at(k - 1); }
    [[nodiscard]] const CollapseEntry<Amp> *collapse_at(std::size_t k) const {
        for (const auto &c : collapse_log) {
            if (c.step == k) {
                return &c;
            }
        }
        return nullptr;
    }
    [[nodiscard]] bool unitary_between(std::size_t from, std::size_t to) const {
        for (std::size_t k = from + 1; k <= to; ++k) {
            if (step(k).style == StepStyle::collapse) {
                return false;
            }
        }
        return true;
    }
};

namespace detail {

inline std::string record_name(const std::vector<Register> &registers, const std::string &agent) {
    const std::string base = "mem." + agent;
    auto taken = [&](const std::string &n) {
        for (const auto &r : registers) {
            if (r.name == n) {
                return true;
            }
        }
        return false;
    };
    if (!taken(base)) {
        return base;
    }
    for (std::size_t i = 2;; ++i) {
        std::string candidate = base + "." + std::to_string(i);
        if (!taken(candidate)) {
            return candidate;
        }
    }
}

inline LabelStyle record_label_style(const BasisSpec &basis, LabelStyle target_style) {
    if (basis.kind == BasisSpec::Kind::x) {
        return LabelStyle::sign;
    }
    if (basis.kind == BasisSpec::Kind::z) {
        return target_style;
    }
    return LabelStyle::spin;
}

template <Amplitude Amp> StateVector<Amp> absorb(StateVector<Amp> state, const MeasurementStep &step) {
    if (step.targets.size() != 1) {
        throw Error(ErrorKind::InvalidArgument, "an absorbing measurement takes exactly one target");
    }
    if (!step.basis.single_register()) {
        throw Error(ErrorKind::InvalidArgument, "an absorbing measurement needs a single-register basis");
    }
    const std::size_t i = state.index_of(step.targets.front());
    if (state.registers()[i].is_record()) {
        throw Error(ErrorKind::TargetIsRecord,
                    "register '" + state.registers()[i].name + "' is already a record of agent " + state.registers()[i].agent);
    }
    state = canonical(std::move(state));
    frame_from_z(state, i, step.basis);
    state.set_frame(i, BasisSpec::z_basis());
    Register &reg = state.register_at(i);
    std::vector<Register> others = state.registers();
    others.erase(others.begin() + static_cast<std::ptrdiff_t>(i));
    const std::string name = record_name(others, step.agent);
    reg.style = record_label_style(step.basis, reg.style);
    reg.agent = step.agent;
    reg.name = name;
    return state;
}

template <Amplitude Amp> OutcomeBasis<Amp> step_basis(const MeasurementStep &step) {
    return make_basis<Amp>(step.basis, step.targets.size());
}

template <Amplitude Amp> StateVector<Amp> preserve(StateVector<Amp> state, const MeasurementStep &step) {
    state = canonical(std::move(state));
    const auto positions = positions_of(state, step.targets);
    const auto basis = step_basis<Amp>(step);
    std::vector<typename StateVector<Amp>::Terms> parts;
    for (unsigned o = 0; o < basis.outcome_count(); ++o) {
        parts.push_back(project_terms(state, positions, basis, o));
    }
    if (parts.size() > 2) {
        for (std::size_t o = 2; o < parts.size(); ++o) {
            if (!parts[o].empty()) {
                throw Error(ErrorKind::ComplementNonzero,
                            "step " + std::to_string(step.index) +
                                ": the state has weight outside the listed basis states");
            }
        }
        parts.resize(2);
    }
    const LabelStyle target_style = state.registers()[positions.front()].style;
    Register rec = make_register(record_name(state.registers(), step.agent),
                                 record_label_style(step.basis, step.targets.size() == 1 ? target_style : LabelStyle::spin));
    rec.agent = step.agent;
    const std::size_t r = state.append_register(rec);
    typename StateVector<Amp>::Terms next;
    for (unsigned o = 0; o < parts.size(); ++o) {
        for (const auto &[key, amp] : parts[o]) {
            accumulate(next, key | (std::uint32_t{o} << r), amp);
        }
    }
    state.set_terms(std::move(next));
    return state;
}

/// Applies the unitary part of a step (absorb or preserve).
template <Amplitude Amp> StateVector<Amp> apply_unitary(StateVector<Amp> state, const MeasurementStep &step) {
    for (const auto &t : step.targets) {
        (void)state.index_of(t);
    }
    return step.record_style() == StepStyle::absorb ? absorb(std::move(state), step) : preserve(std::move(state), step);
}

/// Keeps only the given outcome of the record register (last-written record).
template <Amplitude Amp>
StateVector<Amp> keep_record(StateVector<Amp> state, const std::string &record, unsigned outcome, const Amp &factor) {
    const std::size_t r = state.index_of(record);
    typename StateVector<Amp>::Terms next;
    for (const auto &[key, amp] : state.terms()) {
        if (((key >> r) & 1U) == outcome) {
            insert_nonzero(next, key, amp * factor);
        }
    }
    state.set_terms(std::move(next));
    return state;
}

} // namespace detail

/// Register name the step writes its outcome into, given the state before it.
template <Amplitude Amp> std::string record_register_for(const StateVector<Amp> &before, const MeasurementStep &step) {
    if (step.record_style() == StepStyle::absorb) {
        std::vector<Register> regs = before.registers();
        const std::size_t i = before.index_of(step.targets.front());
        regs.erase(regs.begin() + static_cast<std::ptrdiff_t>(i));
        return detail::record_name(regs, step.agent);
    }
    return detail::record_name(before.registers(), step.agent);
}

/**
 * Applies one step to a normalized state. Collapse steps with no preset
 * outcome draw one from the Born distribution using `rng` (required then).
 * The optional `entry` receives the collapse bookkeeping.
 */
template <Amplitude Amp>
StateVector<Amp> apply_step(const StateVector<Amp> &state, const MeasurementStep &step, std::mt19937_64 *rng = nullptr,
                            CollapseEntry<Amp> *entry = nullptr) {
    using T = amp_traits<Amp>;
    const std::string record = record_register_for(state, step);
    StateVector<Amp> next = detail::apply_unitary(state, step);
    if (step.style != StepStyle::collapse) {
        return next;
    }
    const std::size_t r = next.index_of(record);
    std::array<prob_t<Amp>, 2> probs{};
    for (const auto &[key, amp] : next.terms()) {
        probs[(key >> r) & 1U] += T::abs_sq(amp);
    }
    CollapseEntry<Amp> log;
    log.step = step.index;
    if (step.collapse_outcome) {
        log.outcome = *step.collapse_outcome;
        if (log.outcome > 1) {
            throw Error(ErrorKind::InvalidArgument, "collapse outcome must be 0 or 1");
        }
    } else {
        if (rng == nullptr) {
            throw Error(ErrorKind::InvalidArgument, "sampling a collapse outcome needs a seed");
        }
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const double total = T::to_double(probs[0]) + T::to_double(probs[1]);
        log.outcome = u(*rng) * total < T::to_double(probs[0]) ? 0U : 1U;
        log.sampled = true;
    }
    log.probability = probs[log.outcome];
    if (T::prob_is_zero(log.probability)) {
        throw Error(ErrorKind::ZeroProbabilityCollapse,
                    "step " + std::to_string(step.index) + ": outcome " + std::to_string(log.outcome) +
                        " has probability zero");
    }
    log.factor = T::inv_sqrt(log.probability);
    next = detail::keep_record(std::move(next), record, log.outcome, log.factor);
    if (entry != nullptr) {
        *entry = log;
    }
    return next;
}

/// Runs the steps in order; step indices must be 1..n.
template <Amplitude Amp>
History<Amp> run_experiment(const StateVector<Amp> &initial, const std::vector<MeasurementStep> &steps,
                            std::optional<std::uint64_t> seed = std::nullopt) {
    History<Amp> h;
    h.snapshots.push_back(initial);
    std::optional<std::mt19937_64> rng;
    if (seed) {
        rng.emplace(*seed);
    }
    for (std::size_t k = 0; k < steps.size(); ++k) {
        if (steps[k].index != k + 1) {
            throw Error(ErrorKind::InvalidArgument, "step indices must run 1..n; found " +
                                                        std::to_string(steps[k].index) + " at position " +
                                                        std::to_string(k + 1));
        }
        const auto &before = h.snapshots.back();
        h.records.push_back(record_register_for(before, steps[k]));
        CollapseEntry<Amp> entry;
        auto next = apply_step(before, steps[k], rng ? &*rng : nullptr, &entry);
        if (steps[k].style == StepStyle::collapse) {
            h.collapse_log.push_back(entry);
        }
        h.snapshots.push_back(std::move(next));
        h.steps.push_back(steps[k]);
    }
    return h;
}

/**
 * Linear forward transport of a (possibly unnormalized) state living at
 * snapshot `from` to snapshot `to`, replaying the history's steps. Collapse
 * steps reuse the logged outcome and rescaling so that norms stay comparable
 * with the history's own snapshots.
 */
template <Amplitude Amp>
StateVector<Amp> evolve(const History<Amp> &history, StateVector<Amp> state, std::size_t from, std::size_t to) {
    if (to < from || to > history.step_count()) {
        throw Error(ErrorKind::InvalidArgument, "cannot evolve from step " + std::to_string(from) + " to " + std::to_string(to));
    }
    for (std::size_t k = from + 1; k <= to; ++k) {
        const auto &step = history.step(k);
        StateVector<Amp> next = detail::apply_unitary(state, step);
        if (step.style == StepStyle::collapse) {
            const auto *entry = history.collapse_at(k);
            if (entry == nullptr) {
                throw Error(ErrorKind::InvalidArgument, "collapse step " + std::to_string(k) + " has no log entry");
            }
            next = detail::keep_record(std::move(next), history.records.at(k - 1), entry->outcome, entry->factor);
        }
        next.set_unnormalized(state.unnormalized());
        state = std::move(next);
    }
    return state;
}

namespace detail {

template <Amplitude Amp>
StateVector<Amp> invert_step(StateVector<Amp> state, const MeasurementStep &step, const std::string &record,
                             const std::vector<Register> &before) {
    using T = amp_traits<Amp>;
    state = canonical(std::move(state));
    const std::size_t r = state.index_of(record);
    if (step.record_style() == StepStyle::absorb) {
        // relabel the record back to the physical register, read in the step basis
        const std::string &target = step.targets.front();
        const Register *original = nullptr;
        for (const auto &reg : before) {
            if (reg.name == target || reg.origin == target) {
                original = &reg;
            }
        }
        if (original == nullptr) {
            throw Error(ErrorKind::UnknownRegister, "no register named '" + target + "' before step " +
                                                         std::to_string(step.index));
        }
        state.register_at(r) = *original;
        state.set_frame(r, step.basis);
        frame_to_z(state, r);
        return state;
    }
    // preserve: split by record value and check each part sits in the matching range
    StateVector<Amp> without = state;
    std::array<typename StateVector<Amp>::Terms, 2> parts;
    for (const auto &[key, amp] : state.terms()) {
        parts[(key >> r) & 1U][key & ~(std::uint32_t{1} << r)] = amp;
    }
    without.set_terms({});
    without.drop_register(r);
    const auto positions = positions_of(without, step.targets);
    const auto basis = step_basis<Amp>(step);
    typename StateVector<Amp>::Terms merged;
    for (unsigned o = 0; o < 2; ++o) {
        StateVector<Amp> part = state;
        part.set_terms(parts[o]);
        part.drop_register(r);
        const auto projected = project_terms(part, positions, basis, o);
        for (const auto &[key, amp] : part.terms()) {
            auto it = projected.find(key);
            if (it == projected.end() || !T::is_zero(it->second - amp)) {
                throw Error(ErrorKind::OutsideRange, "step " + std::to_string(step.index) + ": record '" + record +
                                                         "' is not correlated with its target");
            }
        }
        if (projected.size() != part.terms().size()) {
            throw Error(ErrorKind::OutsideRange, "step " + std::to_string(step.index) + ": record '" + record +
                                                     "' is not correlated with its target");
        }
        for (const auto &[key, amp] : part.terms()) {
            accumulate(merged, key, amp);
        }
    }
    without.set_terms(std::move(merged));
    without.set_unnormalized(state.unnormalized());
    return without;
}

} // namespace detail

/**
 * Applies the inverse of steps from_step, from_step-1, ..., to_step+1 to a
 * state over the registers live at from_step.
 */
template <Amplitude Amp>
StateVector<Amp> back_evolve(const History<Amp> &history, StateVector<Amp> state, std::size_t from_step, std::size_t to_step) {
    if (to_step > from_step || from_step > history.step_count()) {
        throw Error(ErrorKind::InvalidArgument, "cannot back-evolve from step " + std::to_string(from_step) + " to " +
                                                    std::to_string(to_step));
    }
    if (!history.unitary_between(to_step, from_step)) {
        throw Error(ErrorKind::NonUnitarySegment, "a collapse step lies between steps " + std::to_string(to_step) +
                                                      " and " + std::to_string(from_step));
    }
    for (std::size_t k = from_step; k > to_step; --k) {
        state = detail::invert_step(std::move(state), history.step(k), history.records.at(k - 1),
                                    history.snapshot(k - 1).registers());
    }
    return state;
}

} // namespace frlogic
