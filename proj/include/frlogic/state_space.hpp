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
 * Sparse state vectors over named two-level registers.
 *
 * Terms are keyed by packed outcome bits: bit i holds the label of
 * registers()[i]. Every register also carries a frame, the single-register
 * basis its labels are expressed in; all physical operations work on the
 * canonical (all-z) form and change_basis is the only producer of other
 * frames.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "amplitude_traits.hpp"
#include "error.hpp"
#include "exact_amplitude.hpp"

namespace frlogic {

inline constexpr std::size_t kMaxRegisters = 24;

/// How a register's two labels are spelled: up/down or plus/minus.
enum class LabelStyle { spin, sign };

struct Register {
    std::string name;
    /// Name of the physical register this one was relabeled from (absorbing
    /// measurements); equals `name` for registers that were never relabeled.
    std::string origin;
    LabelStyle style = LabelStyle::spin;
    /// Owning agent for record registers, empty otherwise.
    std::string agent;

    [[nodiscard]] bool is_record() const { return !agent.empty(); }
    friend bool operator==(const Register &, const Register &) = default;
};

inline Register make_register(std::string name, LabelStyle style = LabelStyle::spin) {
    Register r;
    r.origin = name;
    r.name = std::move(name);
    r.style = style;
    return r;
}

/// Parses up/down/plus/minus/+/-/0/1/ok/fail (and the arrow glyphs) to 0 or 1.
inline std::optional<unsigned> parse_label(std::string_view text) {
    static const std::array<std::string_view, 8> zero{"up", "0", "+", "plus", "fail", "u", "↑", "p"};
    static const std::array<std::string_view, 8> one{"down", "1", "-", "minus", "ok", "d", "↓", "m"};
    for (auto z : zero) {
        if (text == z) {
            return 0U;
        }
    }
    for (auto o : one) {
        if (text == o) {
            return 1U;
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Bases
// ---------------------------------------------------------------------------

/// One term of a ket written in the experiment language: labels + amplitude.
struct KetTerm {
    std::vector<unsigned> labels;
    AmpLiteral amp;
};

/// Mode-independent description of a measurement basis.
struct BasisSpec {
    enum class Kind { z, x, theta, states };
    Kind kind = Kind::z;
    double theta = 0.0;
    /// For Kind::states: orthonormal target states over the measured registers.
    std::vector<std::vector<KetTerm>> states;

    static BasisSpec z_basis() { return {}; }
    static BasisSpec x_basis() {
        BasisSpec b;
        b.kind = Kind::x;
        return b;
    }
    static BasisSpec angle(double theta) {
        BasisSpec b;
        b.kind = Kind::theta;
        b.theta = theta;
        return b;
    }

    [[nodiscard]] bool single_register() const { return kind != Kind::states; }

    [[nodiscard]] std::string str() const {
        switch (kind) {
        case Kind::z: return "z";
        case Kind::x: return "x";
        case Kind::theta: {
            std::ostringstream os;
            os.precision(17);
            os << "theta(" << theta << ")";
            return os.str();
        }
        case Kind::states: {
            std::string out = "states(";
            for (std::size_t i = 0; i < states.size(); ++i) {
                if (i > 0) {
                    out += ";";
                }
                for (std::size_t j = 0; j < states[i].size(); ++j) {
                    if (j > 0) {
                        out += " + ";
                    }
                    out += "(" + states[i][j].amp.text + ") |";
                    for (std::size_t k = 0; k < states[i][j].labels.size(); ++k) {
                        out += (k > 0 ? "," : "") + std::to_string(states[i][j].labels[k]);
                    }
                    out += ">";
                }
            }
            return out + ")";
        }
        }
        return "z";
    }

    friend bool operator==(const BasisSpec &a, const BasisSpec &b) {
        if (a.kind != b.kind) {
            return false;
        }
        if (a.kind == Kind::theta) {
            return a.theta == b.theta;
        }
        if (a.kind == Kind::states) {
            return a.str() == b.str();
        }
        return true;
    }
};

/**
 * A materialized orthonormal basis over `arity` registers. Vectors are sparse
 * over local target configurations (bit j = j-th target). For multi-register
 * bases with fewer than 2^arity vectors the remaining outcome is the
 * orthogonal complement.
 */
template <Amplitude Amp> struct OutcomeBasis {
    BasisSpec spec;
    std::size_t arity = 1;
    std::vector<std::map<std::uint32_t, Amp>> vectors;
    bool has_complement = false;

    [[nodiscard]] std::size_t outcome_count() const { return vectors.size() + (has_complement ? 1 : 0); }
    [[nodiscard]] bool is_z() const { return spec.kind == BasisSpec::Kind::z; }
};

namespace detail {

template <Amplitude Amp> std::array<Amp, 2> theta_pair(double theta, bool second) {
    using T = amp_traits<Amp>;
    // v0 = cos|0> + sin|1>, v1 = sin|0> - cos|1>
    if constexpr (T::exact) {
        constexpr double eps = 1e-12;
        QuadAmp c;
        QuadAmp s;
        if (std::abs(theta) < eps) {
            c = QuadAmp(1);
        } else if (std::abs(theta - std::numbers::pi / 4) < eps) {
            c = QuadAmp::inv_sqrt2();
            s = QuadAmp::inv_sqrt2();
        } else if (std::abs(theta - std::numbers::pi / 2) < eps) {
            s = QuadAmp(1);
        } else {
            throw Error(ErrorKind::InexactBasis,
                        "theta(" + std::to_string(theta) + ") has no exact basis; use float mode");
        }
        return second ? std::array<Amp, 2>{s, -c} : std::array<Amp, 2>{c, s};
    } else {
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        return second ? std::array<Amp, 2>{Amp{s, 0.0}, Amp{-c, 0.0}} : std::array<Amp, 2>{Amp{c, 0.0}, Amp{s, 0.0}};
    }
}

template <Amplitude Amp> void insert_nonzero(std::map<std::uint32_t, Amp> &m, std::uint32_t key, const Amp &value) {
    if (!amp_traits<Amp>::is_zero(value)) {
        m[key] = value;
    }
}

template <Amplitude Amp> void accumulate(std::map<std::uint32_t, Amp> &m, std::uint32_t key, const Amp &value) {
    auto it = m.find(key);
    if (it == m.end()) {
        if (!amp_traits<Amp>::is_zero(value)) {
            m.emplace(key, value);
        }
        return;
    }
    it->second += value;
    if (amp_traits<Amp>::is_zero(it->second)) {
        m.erase(it);
    }
}

} // namespace detail

/// Materializes `spec` over `arity` registers in amplitude type Amp.
template <Amplitude Amp> OutcomeBasis<Amp> make_basis(const BasisSpec &spec, std::size_t arity = 1) {
    using T = amp_traits<Amp>;
    OutcomeBasis<Amp> out;
    out.spec = spec;
    out.arity = arity;
    if (spec.single_register()) {
        if (arity != 1) {
            throw Error(ErrorKind::InvalidArgument, "basis " + spec.str() + " measures a single register");
        }
        std::array<std::array<Amp, 2>, 2> v;
        switch (spec.kind) {
        case BasisSpec::Kind::z:
            v = {{{T::one(), Amp{}}, {Amp{}, T::one()}}};
            break;
        case BasisSpec::Kind::x:
            v = {{{T::inv_sqrt2(), T::inv_sqrt2()}, {T::inv_sqrt2(), -T::inv_sqrt2()}}};
            break;
        default:
            v = {detail::theta_pair<Amp>(spec.theta, false), detail::theta_pair<Amp>(spec.theta, true)};
            break;
        }
        for (const auto &pair : v) {
            std::map<std::uint32_t, Amp> vec;
            detail::insert_nonzero(vec, 0U, pair[0]);
            detail::insert_nonzero(vec, 1U, pair[1]);
            out.vectors.push_back(std::move(vec));
        }
        return out;
    }
    if (arity == 0 || arity > 8) {
        throw Error(ErrorKind::InvalidArgument, "multi-register basis needs 1..8 targets");
    }
    const std::size_t dim = std::size_t{1} << arity;
    if (spec.states.empty() || spec.states.size() > dim) {
        throw Error(ErrorKind::InvalidArgument, "states(...) basis needs 1..2^n target states");
    }
    for (const auto &state : spec.states) {
        std::map<std::uint32_t, Amp> vec;
        for (const auto &term : state) {
            if (term.labels.size() != arity) {
                throw Error(ErrorKind::InvalidArgument,
                            "basis ket has " + std::to_string(term.labels.size()) + " labels, expected " +
                                std::to_string(arity));
            }
            std::uint32_t local = 0;
            for (std::size_t j = 0; j < arity; ++j) {
                local |= (term.labels[j] & 1U) << j;
            }
            detail::accumulate(vec, local, T::from_literal(term.amp));
        }
        out.vectors.push_back(std::move(vec));
    }
    // orthonormality
    for (std::size_t i = 0; i < out.vectors.size(); ++i) {
        for (std::size_t j = i; j < out.vectors.size(); ++j) {
            Amp ip{};
            for (const auto &[k, a] : out.vectors[i]) {
                auto it = out.vectors[j].find(k);
                if (it != out.vectors[j].end()) {
                    ip += T::conj(a) * it->second;
                }
            }
            const auto expected = i == j ? T::one() : Amp{};
            if (!T::prob_equal(T::real_part(ip), T::real_part(expected)) ||
                !T::prob_is_zero(T::abs_sq(ip - expected))) {
                throw Error(ErrorKind::InvalidArgument, "basis states are not orthonormal");
            }
        }
    }
    out.has_complement = spec.states.size() < dim;
    return out;
}

// ---------------------------------------------------------------------------
// State vectors
// ---------------------------------------------------------------------------

template <Amplitude Amp> class StateVector {
  public:
    using traits = amp_traits<Amp>;
    using prob_type = prob_t<Amp>;
    using Terms = std::map<std::uint32_t, Amp>;

    StateVector() = default;

    StateVector(std::vector<Register> registers, Terms terms, bool unnormalized = false)
        : registers_(std::move(registers)), terms_(std::move(terms)), unnormalized_(unnormalized) {
        if (registers_.size() > kMaxRegisters) {
            throw Error(ErrorKind::InvalidArgument, "too many registers");
        }
        frames_.assign(registers_.size(), BasisSpec::z_basis());
        prune();
    }

    [[nodiscard]] const std::vector<Register> &registers() const { return registers_; }
    [[nodiscard]] const Terms &terms() const { return terms_; }
    [[nodiscard]] const std::vector<BasisSpec> &frames() const { return frames_; }
    [[nodiscard]] std::size_t size() const { return registers_.size(); }
    [[nodiscard]] bool unnormalized() const { return unnormalized_; }
    [[nodiscard]] bool empty() const { return terms_.empty(); }

    [[nodiscard]] bool is_canonical() const {
        return std::all_of(frames_.begin(), frames_.end(),
                           [](const BasisSpec &b) { return b.kind == BasisSpec::Kind::z; });
    }

    /// Index of a register by current name, falling back to a unique origin match.
    [[nodiscard]] std::optional<std::size_t> find(std::string_view name) const {
        for (std::size_t i = 0; i < registers_.size(); ++i) {
            if (registers_[i].name == name) {
                return i;
            }
        }
        std::optional<std::size_t> hit;
        for (std::size_t i = 0; i < registers_.size(); ++i) {
            if (registers_[i].origin == name) {
                if (hit) {
                    return std::nullopt;
                }
                hit = i;
            }
        }
        return hit;
    }

    [[nodiscard]] std::size_t index_of(std::string_view name) const {
        auto idx = find(name);
        if (!idx) {
            throw Error(ErrorKind::UnknownRegister, "no register named '" + std::string(name) + "'");
        }
        return *idx;
    }

    [[nodiscard]] prob_type norm_sq() const {
        prob_type total{};
        for (const auto &[k, a] : terms_) {
            total += traits::abs_sq(a);
        }
        return total;
    }

    /// Amplitude of a configuration given as one label per register.
    [[nodiscard]] Amp amplitude(const std::vector<unsigned> &labels) const {
        auto it = terms_.find(pack(labels));
        return it == terms_.end() ? Amp{} : it->second;
    }

    [[nodiscard]] std::uint32_t pack(const std::vector<unsigned> &labels) const {
        if (labels.size() != registers_.size()) {
            throw Error(ErrorKind::InvalidArgument, "configuration has " + std::to_string(labels.size()) +
                                                        " labels for " + std::to_string(registers_.size()) +
                                                        " registers");
        }
        std::uint32_t key = 0;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] > 1) {
                throw Error(ErrorKind::InvalidArgument, "labels are 0 or 1");
            }
            key |= labels[i] << i;
        }
        return key;
    }

    [[nodiscard]] std::vector<unsigned> unpack(std::uint32_t key) const {
        std::vector<unsigned> labels(registers_.size());
        for (std::size_t i = 0; i < labels.size(); ++i) {
            labels[i] = (key >> i) & 1U;
        }
        return labels;
    }

    /// Label text for register i, honoring its frame and label style.
    [[nodiscard]] std::string label_text(std::size_t i, unsigned label) const {
        const auto &frame = frames_[i];
        if (frame.kind == BasisSpec::Kind::x || (frame.kind == BasisSpec::Kind::z && registers_[i].style == LabelStyle::sign)) {
            return label == 0 ? "plus" : "minus";
        }
        if (frame.kind == BasisSpec::Kind::theta) {
            return label == 0 ? "t0" : "t1";
        }
        return label == 0 ? "up" : "down";
    }

    /// Ket text such as `1/3*sqrt3 |up,down> + ...` in register order.
    [[nodiscard]] std::string str() const {
        if (terms_.empty()) {
            return "0";
        }
        std::vector<std::pair<std::vector<unsigned>, Amp>> ordered;
        for (const auto &[key, amp] : terms_) {
            ordered.emplace_back(unpack(key), amp);
        }
        std::sort(ordered.begin(), ordered.end(), [](const auto &l, const auto &r) { return l.first < r.first; });
        std::string out;
        bool first = true;
        for (const auto &[labels, amp] : ordered) {
            std::string a = traits::str(amp);
            if (!first) {
                if (!a.empty() && a[0] == '-' && a.find(' ') == std::string::npos) {
                    out += " - ";
                    a.erase(0, 1);
                } else {
                    out += " + ";
                }
            }
            first = false;
            if (a.find(' ') != std::string::npos) {
                a = "(" + a + ")";
            }
            out += a + " |";
            for (std::size_t i = 0; i < registers_.size(); ++i) {
                out += (i > 0 ? "," : "") + label_text(i, labels[i]);
            }
            out += ">";
        }
        return out;
    }

    // -- low-level editing used by the engine; all keep the no-zero invariant --

    void set_terms(Terms terms) {
        terms_ = std::move(terms);
        prune();
    }
    void set_unnormalized(bool flag) { unnormalized_ = flag; }
    void set_frame(std::size_t i, BasisSpec frame) { frames_.at(i) = std::move(frame); }
    Register &register_at(std::size_t i) { return registers_.at(i); }

    /// Appends a register in label 0 (tensor with |0>).
    std::size_t append_register(Register reg) {
        if (registers_.size() >= kMaxRegisters) {
            throw Error(ErrorKind::InvalidArgument, "too many registers");
        }
        if (find_exact(reg.name)) {
            throw Error(ErrorKind::InvalidArgument, "register '" + reg.name + "' already exists");
        }
        registers_.push_back(std::move(reg));
        frames_.push_back(BasisSpec::z_basis());
        return registers_.size() - 1;
    }

    /// Removes register i; the caller guarantees it is in label 0 on every term.
    void drop_register(std::size_t i) {
        Terms next;
        const std::uint32_t low = (std::uint32_t{1} << i) - 1;
        for (const auto &[key, amp] : terms_) {
            const std::uint32_t packed = (key & low) | ((key >> (i + 1)) << i);
            detail::accumulate(next, packed, amp);
        }
        registers_.erase(registers_.begin() + static_cast<std::ptrdiff_t>(i));
        frames_.erase(frames_.begin() + static_cast<std::ptrdiff_t>(i));
        terms_ = std::move(next);
    }

    [[nodiscard]] std::optional<std::size_t> find_exact(std::string_view name) const {
        for (std::size_t i = 0; i < registers_.size(); ++i) {
            if (registers_[i].name == name) {
                return i;
            }
        }
        return std::nullopt;
    }

    friend bool operator==(const StateVector &a, const StateVector &b) {
        return a.registers_ == b.registers_ && a.frames_ == b.frames_ && a.terms_ == b.terms_;
    }

  private:
    void prune() {
        for (auto it = terms_.begin(); it != terms_.end();) {
            if (traits::is_zero(it->second)) {
                it = terms_.erase(it);
            } else {
                ++it;
            }
        }
    }

    std::vector<Register> registers_;
    std::vector<BasisSpec> frames_;
    Terms terms_;
    bool unnormalized_ = false;
};

namespace detail {

inline std::uint32_t extract_bits(std::uint32_t key, const std::vector<std::size_t> &positions) {
    std::uint32_t local = 0;
    for (std::size_t j = 0; j < positions.size(); ++j) {
        local |= ((key >> positions[j]) & 1U) << j;
    }
    return local;
}

inline std::uint32_t deposit_bits(std::uint32_t key, const std::vector<std::size_t> &positions, std::uint32_t local) {
    for (std::size_t j = 0; j < positions.size(); ++j) {
        key &= ~(std::uint32_t{1} << positions[j]);
        key |= ((local >> j) & 1U) << positions[j];
    }
    return key;
}

inline std::uint32_t mask_of(const std::vector<std::size_t> &positions) {
    std::uint32_t m = 0;
    for (auto p : positions) {
        m |= std::uint32_t{1} << p;
    }
    return m;
}

/// Groups terms by the configuration of the non-target registers.
template <Amplitude Amp>
std::map<std::uint32_t, std::map<std::uint32_t, Amp>> group_by_rest(const StateVector<Amp> &state,
                                                                   const std::vector<std::size_t> &positions) {
    std::map<std::uint32_t, std::map<std::uint32_t, Amp>> groups;
    const std::uint32_t target_mask = mask_of(positions);
    for (const auto &[key, amp] : state.terms()) {
        groups[key & ~target_mask][extract_bits(key, positions)] = amp;
    }
    return groups;
}

/// Component of `state` along basis vector `vec` on the targets: |v><v| psi.
template <Amplitude Amp>
typename StateVector<Amp>::Terms project_on_vector(const StateVector<Amp> &state, const std::vector<std::size_t> &positions,
                                                   const std::map<std::uint32_t, Amp> &vec) {
    using T = amp_traits<Amp>;
    typename StateVector<Amp>::Terms out;
    for (const auto &[rest, local] : group_by_rest(state, positions)) {
        Amp overlap{};
        for (const auto &[t, a] : local) {
            auto it = vec.find(t);
            if (it != vec.end()) {
                overlap += T::conj(it->second) * a;
            }
        }
        if (T::is_zero(overlap)) {
            continue;
        }
        for (const auto &[t, v] : vec) {
            accumulate(out, deposit_bits(rest, positions, t), overlap * v);
        }
    }
    return out;
}

/// Re-expresses register i (currently in frame `from`, canonical z assumed
/// when from is z) in the z frame.
template <Amplitude Amp> void frame_to_z(StateVector<Amp> &state, std::size_t i) {
    const BasisSpec frame = state.frames()[i];
    if (frame.kind == BasisSpec::Kind::z) {
        return;
    }
    const auto basis = make_basis<Amp>(frame);
    typename StateVector<Amp>::Terms next;
    const std::uint32_t bit = std::uint32_t{1} << i;
    for (const auto &[key, amp] : state.terms()) {
        const unsigned o = (key >> i) & 1U;
        for (const auto &[b, v] : basis.vectors[o]) {
            accumulate(next, (key & ~bit) | (b << i), amp * v);
        }
    }
    state.set_terms(std::move(next));
    state.set_frame(i, BasisSpec::z_basis());
}

/// Re-expresses canonical register i in the given single-register basis.
template <Amplitude Amp> void frame_from_z(StateVector<Amp> &state, std::size_t i, const BasisSpec &target) {
    using T = amp_traits<Amp>;
    if (target.kind == BasisSpec::Kind::z) {
        return;
    }
    const auto basis = make_basis<Amp>(target);
    typename StateVector<Amp>::Terms next;
    const std::uint32_t bit = std::uint32_t{1} << i;
    for (const auto &[key, amp] : state.terms()) {
        const unsigned b = (key >> i) & 1U;
        for (unsigned o = 0; o < 2; ++o) {
            auto it = basis.vectors[o].find(b);
            if (it != basis.vectors[o].end()) {
                accumulate(next, (key & ~bit) | (o << i), T::conj(it->second) * amp);
            }
        }
    }
    state.set_terms(std::move(next));
    state.set_frame(i, target);
}

} // namespace detail

/// Same abstract state with every register expressed in z.
template <Amplitude Amp> StateVector<Amp> canonical(StateVector<Amp> state) {
    for (std::size_t i = 0; i < state.size(); ++i) {
        detail::frame_to_z(state, i);
    }
    return state;
}

/**
 * Builds a state from (labels, amplitude) terms in register order. Repeated
 * configurations add. Throws NotNormalizedError with the exact deficit
 * unless `allow_unnormalized` is set.
 */
template <Amplitude Amp>
StateVector<Amp> make_state(std::vector<Register> registers,
                            const std::vector<std::pair<std::vector<unsigned>, Amp>> &terms,
                            bool allow_unnormalized = false) {
    using T = amp_traits<Amp>;
    if (terms.empty()) {
        throw Error(ErrorKind::InvalidArgument, "a state needs at least one term");
    }
    for (std::size_t i = 0; i < registers.size(); ++i) {
        for (std::size_t j = i + 1; j < registers.size(); ++j) {
            if (registers[i].name == registers[j].name) {
                throw Error(ErrorKind::InvalidArgument, "duplicate register '" + registers[i].name + "'");
            }
        }
    }
    StateVector<Amp> shell(registers, {});
    typename StateVector<Amp>::Terms packed;
    for (const auto &[labels, amp] : terms) {
        detail::accumulate(packed, shell.pack(labels), amp);
    }
    StateVector<Amp> state(std::move(registers), std::move(packed), allow_unnormalized);
    if (!allow_unnormalized) {
        const auto n = state.norm_sq();
        if (!T::prob_is_one(n)) {
            if constexpr (T::exact) {
                const QuadAmp deficit = QuadAmp(1) - n;
                throw NotNormalizedError(deficit.str(), deficit.to_double());
            } else {
                throw NotNormalizedError(T::str(1.0 - n), 1.0 - n);
            }
        }
    }
    return state;
}

/// Re-expresses one register in a single-register basis; the norm and all
/// inner products are unchanged.
template <Amplitude Amp> StateVector<Amp> change_basis(StateVector<Amp> state, std::string_view reg, const BasisSpec &basis) {
    if (!basis.single_register()) {
        throw Error(ErrorKind::InvalidArgument, "change_basis takes a single-register basis");
    }
    const std::size_t i = state.index_of(reg);
    detail::frame_to_z(state, i);
    detail::frame_from_z(state, i, basis);
    return state;
}

namespace detail {

template <Amplitude Amp>
std::vector<std::size_t> positions_of(const StateVector<Amp> &state, const std::vector<std::string> &targets) {
    std::vector<std::size_t> positions;
    for (const auto &t : targets) {
        auto p = state.index_of(t);
        if (std::find(positions.begin(), positions.end(), p) != positions.end()) {
            throw Error(ErrorKind::InvalidArgument, "register '" + t + "' listed twice");
        }
        positions.push_back(p);
    }
    return positions;
}

/// Projection of a canonical state onto one outcome of `basis`.
template <Amplitude Amp>
typename StateVector<Amp>::Terms project_terms(const StateVector<Amp> &state, const std::vector<std::size_t> &positions,
                                               const OutcomeBasis<Amp> &basis, unsigned outcome) {
    if (outcome >= basis.outcome_count()) {
        throw Error(ErrorKind::InvalidArgument, "outcome " + std::to_string(outcome) + " out of range");
    }
    if (outcome < basis.vectors.size()) {
        return project_on_vector(state, positions, basis.vectors[outcome]);
    }
    // complement: psi - sum_k P_k psi
    auto out = state.terms();
    for (const auto &vec : basis.vectors) {
        for (const auto &[key, amp] : project_on_vector(state, positions, vec)) {
            accumulate(out, key, -amp);
        }
    }
    return out;
}

} // namespace detail

/**
 * Unnormalized component of `state` for one outcome of `basis` measured on
 * `targets`. The result is canonical and its norm² is the Born probability.
 */
template <Amplitude Amp>
StateVector<Amp> project(const StateVector<Amp> &state, const std::vector<std::string> &targets, const OutcomeBasis<Amp> &basis,
                         unsigned outcome) {
    if (targets.size() != basis.arity) {
        throw Error(ErrorKind::InvalidArgument, "basis arity does not match target count");
    }
    StateVector<Amp> c = canonical(state);
    const auto positions = detail::positions_of(c, targets);
    auto terms = detail::project_terms(c, positions, basis, outcome);
    StateVector<Amp> out = c;
    out.set_terms(std::move(terms));
    out.set_unnormalized(true);
    return out;
}

template <Amplitude Amp>
StateVector<Amp> project(const StateVector<Amp> &state, std::string_view reg, const BasisSpec &basis, unsigned outcome) {
    return project(state, std::vector<std::string>{std::string(reg)}, make_basis<Amp>(basis), outcome);
}

/// Outcome -> Born probability (relative to norm² of `state`, i.e. not renormalized).
template <Amplitude Amp>
std::map<unsigned, prob_t<Amp>> born_probabilities(const StateVector<Amp> &state, const std::vector<std::string> &targets,
                                                   const OutcomeBasis<Amp> &basis) {
    std::map<unsigned, prob_t<Amp>> out;
    for (unsigned o = 0; o < basis.outcome_count(); ++o) {
        out[o] = project(state, targets, basis, o).norm_sq();
    }
    return out;
}

template <Amplitude Amp>
std::map<unsigned, prob_t<Amp>> born_probabilities(const StateVector<Amp> &state, std::string_view reg, const BasisSpec &basis) {
    return born_probabilities(state, std::vector<std::string>{std::string(reg)}, make_basis<Amp>(basis));
}

/// Joint distribution of several single-register measurements (product basis).
template <Amplitude Amp>
std::map<std::vector<unsigned>, prob_t<Amp>>
joint_probabilities(const StateVector<Amp> &state, const std::vector<std::pair<std::string, BasisSpec>> &measurements) {
    std::map<std::vector<unsigned>, prob_t<Amp>> out;
    const std::size_t n = measurements.size();
    for (std::uint32_t combo = 0; combo < (std::uint32_t{1} << n); ++combo) {
        StateVector<Amp> s = canonical(state);
        std::vector<unsigned> labels(n);
        for (std::size_t j = 0; j < n; ++j) {
            labels[j] = (combo >> j) & 1U;
            s = project(s, measurements[j].first, measurements[j].second, labels[j]);
        }
        out[labels] = s.norm_sq();
    }
    return out;
}

/// <s1|s2>, conjugate-linear in the first argument. Register sets must match
/// by name; order may differ.
template <Amplitude Amp> Amp inner_product(const StateVector<Amp> &s1, const StateVector<Amp> &s2) {
    using T = amp_traits<Amp>;
    if (s1.size() != s2.size()) {
        throw Error(ErrorKind::RegisterMismatch, "states have different register counts");
    }
    const StateVector<Amp> a = canonical(s1);
    const StateVector<Amp> b = canonical(s2);
    std::vector<std::size_t> perm(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto j = b.find_exact(a.registers()[i].name);
        if (!j) {
            throw Error(ErrorKind::RegisterMismatch, "register '" + a.registers()[i].name + "' missing");
        }
        perm[i] = *j;
    }
    Amp total{};
    for (const auto &[key, amp] : a.terms()) {
        std::uint32_t other = 0;
        for (std::size_t i = 0; i < perm.size(); ++i) {
            other |= ((key >> i) & 1U) << perm[i];
        }
        auto it = b.terms().find(other);
        if (it != b.terms().end()) {
            total += T::conj(amp) * it->second;
        }
    }
    return total;
}

/// Scales every amplitude by `factor`.
template <Amplitude Amp> StateVector<Amp> scaled(StateVector<Amp> state, const Amp &factor) {
    typename StateVector<Amp>::Terms next;
    for (const auto &[k, a] : state.terms()) {
        detail::insert_nonzero(next, k, a * factor);
    }
    state.set_terms(std::move(next));
    return state;
}

/// Converts an exact state to float amplitudes (registers and frames kept).
inline StateVector<FloatAmp> to_float(const StateVector<QuadAmp> &state) {
    StateVector<FloatAmp>::Terms terms;
    for (const auto &[k, a] : state.terms()) {
        terms.emplace(k, quad_to_float(a));
    }
    StateVector<FloatAmp> out(state.registers(), std::move(terms), state.unnormalized());
    for (std::size_t i = 0; i < state.size(); ++i) {
        out.set_frame(i, state.frames()[i]);
    }
    return out;
}

} // namespace frlogic
