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
 * The experiment-description language: a line-oriented parser producing a
 * Scenario, and the matching emitter.
 *
 * @code
 * scenario fr_full
 * register barred
 * register unbarred
 * state 1/sqrt3 |up,down> + 1/sqrt3 |down,up> + 1/sqrt3 |down,down>
 * step 1: Fbar absorbs barred in z
 * step 3: Wbar measures mem.Fbar in x
 * statement S2: if mem.Wbar@3 == minus then mem.F@2 == up mode=retro expect=Holds
 * check transitivity S2 S3
 * @endcode
 */
#pragma once

#include <cctype>
#include <charconv>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "error.hpp"
#include "exact_amplitude.hpp"
#include "measurement_engine.hpp"
#include "scenario.hpp"
#include "state_space.hpp"
#include "statement_logic.hpp"

namespace frlogic::dsl {

/// A parsed file: the scenario plus the source line of each clause.
struct ExperimentFile {
    Scenario scenario;
    std::vector<std::size_t> step_lines;
    std::vector<std::size_t> statement_lines;
    std::vector<std::size_t> check_lines;

    [[nodiscard]] std::size_t transitivity_checks() const {
        std::size_t n = 0;
        for (const auto &c : scenario.checks) {
            n += std::holds_alternative<TransitivityCheck>(c) ? 1 : 0;
        }
        return n;
    }
};

namespace detail {

inline bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '.' || c == '\'';
}

/// Cursor over one source line; columns are 1-based.
class LineCursor {
  public:
    LineCursor(std::string_view text, std::size_t line) : text_(text), line_(line) {}

    [[nodiscard]] bool at_end() {
        skip_ws();
        return pos_ >= text_.size();
    }
    [[nodiscard]] char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }
    [[nodiscard]] std::size_t line() const { return line_; }
    [[nodiscard]] std::size_t col() const { return pos_ + 1; }
    [[nodiscard]] std::string_view rest() const { return text_.substr(pos_); }
    void advance(std::size_t n) { pos_ = std::min(text_.size(), pos_ + n); }

    [[noreturn]] void fail(const std::string &expected) const { throw ParseError(line_, pos_ + 1, expected); }

    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r')) {
            ++pos_;
        }
    }

    std::string name(const std::string &what) {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && is_name_char(text_[pos_])) {
            ++pos_;
        }
        if (start == pos_) {
            fail(what);
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    /// Consumes `word` if it is next (as a whole word); returns whether it did.
    bool accept(std::string_view word) {
        skip_ws();
        if (text_.substr(pos_, word.size()) != word) {
            return false;
        }
        const std::size_t after = pos_ + word.size();
        if (after < text_.size() && is_name_char(word.back()) && is_name_char(text_[after])) {
            return false;
        }
        pos_ = after;
        return true;
    }

    void expect(std::string_view word) {
        if (!accept(word)) {
            fail("'" + std::string(word) + "'");
        }
    }

    std::size_t number(const std::string &what) {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])) != 0) {
            ++pos_;
        }
        std::size_t value = 0;
        const auto *first = text_.data() + start;
        const auto *last = text_.data() + pos_;
        if (start == pos_ || std::from_chars(first, last, value).ec != std::errc{}) {
            pos_ = start;
            fail(what);
        }
        return value;
    }

    std::uint64_t number64(const std::string &what) {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])) != 0) {
            ++pos_;
        }
        std::uint64_t value = 0;
        if (start == pos_ || std::from_chars(text_.data() + start, text_.data() + pos_, value).ec != std::errc{}) {
            pos_ = start;
            fail(what);
        }
        return value;
    }

    /// A token up to the next whitespace.
    std::string token(const std::string &what) {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != ' ' && text_[pos_] != '\t' && text_[pos_] != '\r') {
            ++pos_;
        }
        if (start == pos_) {
            fail(what);
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    /// Amplitude literal starting here; stops before a ket bar or at whitespace-free end.
    AmpLiteral amplitude(const std::string &what) {
        skip_ws();
        const std::size_t start = pos_;
        try {
            std::size_t used = 0;
            AmpLiteral lit = parse_amp_literal(text_.substr(pos_), &used);
            pos_ += used;
            return lit;
        } catch (const ParseError &e) {
            throw ParseError(line_, start + e.col(), what + " (" + e.expected() + ")");
        } catch (const Error &e) {
            throw ParseError(line_, start + 1, what + " (" + e.what() + ")");
        }
    }

    /// Literal written without spaces, as in key=value options.
    AmpLiteral compact_amplitude(const std::string &what) {
        const std::size_t start = pos_;
        const std::string tok = token(what);
        try {
            std::size_t used = 0;
            AmpLiteral lit = parse_amp_literal(tok, &used);
            if (used != tok.size()) {
                throw ParseError(1, used + 1, "end of literal");
            }
            return lit;
        } catch (const ParseError &e) {
            throw ParseError(line_, start + e.col(), what + " (" + e.expected() + ")");
        } catch (const Error &e) {
            throw ParseError(line_, start + 1, what + " (" + e.what() + ")");
        }
    }

    /// Text inside balanced parentheses; the cursor must sit on '('.
    std::string_view parenthesized(const std::string &what) {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != '(') {
            fail("'(' after " + what);
        }
        std::size_t depth = 0;
        for (std::size_t i = pos_; i < text_.size(); ++i) {
            if (text_[i] == '(') {
                ++depth;
            } else if (text_[i] == ')') {
                if (--depth == 0) {
                    auto inner = text_.substr(pos_ + 1, i - pos_ - 1);
                    inner_offset_ = pos_ + 1;
                    pos_ = i + 1;
                    return inner;
                }
            }
        }
        fail("')' closing " + what);
    }

    [[nodiscard]] std::size_t inner_offset() const { return inner_offset_; }

  private:
    std::string_view text_;
    std::size_t line_;
    std::size_t pos_ = 0;
    std::size_t inner_offset_ = 0;
};

inline unsigned label(LineCursor &c) {
    c.skip_ws();
    const std::size_t col = c.col();
    std::string tok;
    if (c.peek() == '+' || c.peek() == '-') {
        tok = std::string(1, c.peek());
        c.advance(1);
    } else {
        tok = c.name("outcome label");
    }
    auto o = parse_label(tok);
    if (!o) {
        throw ParseError(c.line(), col, "outcome label (up, down, plus, minus, +, -, 0, 1, ok, fail)");
    }
    return *o;
}

inline std::string negated_text(const std::string &text) {
    const bool simple = text.find_first_of(" +-") == std::string::npos;
    return simple ? "-" + text : "-(" + text + ")";
}

/// `amp |l,l> (+|- amp |l,l>)*`, stopping at end, ';' or ')'.
inline std::vector<KetTerm> ket(LineCursor &c) {
    std::vector<KetTerm> terms;
    bool first = true;
    for (;;) {
        bool negative = false;
        if (!first) {
            if (c.peek() == '+') {
                c.advance(1);
            } else if (c.peek() == '-') {
                negative = true;
                c.advance(1);
            } else {
                break;
            }
        }
        KetTerm t;
        if (c.peek() == '|') {
            t.amp = parse_amp_literal("1");
        } else {
            t.amp = c.amplitude("amplitude");
        }
        if (negative) {
            if (t.amp.exact) {
                t.amp.exact = -*t.amp.exact;
            }
            t.amp.approx = -t.amp.approx;
            t.amp.text = negated_text(t.amp.text);
        }
        if (c.peek() != '|') {
            c.fail("'|' opening a ket");
        }
        c.advance(1);
        for (;;) {
            t.labels.push_back(label(c));
            if (c.peek() == ',') {
                c.advance(1);
                continue;
            }
            if (c.peek() == '>') {
                c.advance(1);
                break;
            }
            c.fail("',' or '>' in ket");
        }
        terms.push_back(std::move(t));
        first = false;
    }
    return terms;
}

inline BasisSpec basis(LineCursor &c) {
    if (c.accept("theta")) {
        const auto inner = c.parenthesized("theta");
        const std::size_t offset = c.inner_offset();
        try {
            std::size_t used = 0;
            AmpLiteral lit = parse_amp_literal(inner, &used);
            while (used < inner.size() && inner[used] == ' ') {
                ++used;
            }
            if (used != inner.size() || std::abs(lit.approx.imag()) > 0.0 || !std::isfinite(lit.approx.real())) {
                throw ParseError(1, used + 1, "real angle");
            }
            return BasisSpec::angle(lit.approx.real());
        } catch (const ParseError &e) {
            throw ParseError(c.line(), offset + e.col(), "angle (" + e.expected() + ")");
        }
    }
    if (c.accept("states")) {
        const auto inner = c.parenthesized("states");
        const std::size_t offset = c.inner_offset();
        BasisSpec b;
        b.kind = BasisSpec::Kind::states;
        std::string padded(offset, ' ');
        padded += inner;
        LineCursor sub(padded, c.line());
        sub.advance(offset);
        for (;;) {
            b.states.push_back(ket(sub));
            if (sub.peek() == ';') {
                sub.advance(1);
                continue;
            }
            if (!sub.at_end()) {
                sub.fail("';' or ')' in states(...)");
            }
            break;
        }
        return b;
    }
    if (c.accept("z")) {
        return BasisSpec::z_basis();
    }
    if (c.accept("x")) {
        return BasisSpec::x_basis();
    }
    c.fail("basis (z, x, theta(...), states(...))");
}

inline Event event(LineCursor &c) {
    Event e;
    e.reg = c.name("register name");
    if (c.peek() != '@') {
        c.fail("'@' after register name");
    }
    c.advance(1);
    e.step = c.number("step number");
    c.expect("==");
    e.outcome = label(c);
    if (c.accept("basis=")) {
        e.basis = basis(c);
        if (!e.basis.single_register()) {
            c.fail("single-register basis for an event");
        }
    }
    return e;
}

inline std::vector<Event> event_list(LineCursor &c) {
    std::vector<Event> out{event(c)};
    while (c.accept("and")) {
        out.push_back(event(c));
    }
    return out;
}

inline Classification classification(LineCursor &c) {
    const std::size_t col = c.col();
    const auto word = c.name("verdict");
    if (word == "Holds") {
        return Classification::Holds;
    }
    if (word == "Vacuous") {
        return Classification::Vacuous;
    }
    if (word == "Fails") {
        return Classification::Fails;
    }
    if (word == "Probabilistic") {
        return Classification::Probabilistic;
    }
    throw ParseError(c.line(), col, "verdict (Holds, Vacuous, Fails, Probabilistic)");
}

inline EvalMode eval_mode(LineCursor &c) {
    if (c.accept("forward")) {
        return EvalMode::forward;
    }
    if (c.accept("retro")) {
        return EvalMode::retrodictive;
    }
    c.fail("mode (forward or retro)");
}

/// Tracks register names through the steps without amplitudes.
class NameTracker {
  public:
    explicit NameTracker(const std::vector<RegisterDecl> &decls) {
        for (const auto &d : decls) {
            regs_.push_back(make_register(d.name, d.style));
        }
        history_.push_back(regs_);
    }

    void apply(const MeasurementStep &step, std::size_t line) {
        for (const auto &t : step.targets) {
            if (!find(t)) {
                throw SemanticError(line, ErrorKind::UnknownRegister, "no register '" + t + "' before step " +
                                                                          std::to_string(step.index));
            }
        }
        if (step.record_style() == StepStyle::absorb) {
            if (step.targets.size() != 1) {
                throw SemanticError(line, ErrorKind::InvalidArgument, "an absorbing step takes one target");
            }
            auto i = *find(step.targets.front());
            if (regs_[i].is_record()) {
                throw SemanticError(line, ErrorKind::TargetIsRecord, "'" + step.targets.front() + "' is already a record");
            }
            std::vector<Register> others = regs_;
            others.erase(others.begin() + static_cast<std::ptrdiff_t>(i));
            regs_[i].name = frlogic::detail::record_name(others, step.agent);
            regs_[i].agent = step.agent;
        } else {
            Register r = make_register(frlogic::detail::record_name(regs_, step.agent));
            r.agent = step.agent;
            regs_.push_back(r);
        }
        history_.push_back(regs_);
    }

    void check_event(const Event &e, std::size_t line) const {
        if (e.step >= history_.size()) {
            throw SemanticError(line, ErrorKind::InvalidArgument, "event at step " + std::to_string(e.step) +
                                                                      " is past the last step");
        }
        const auto &regs = history_[e.step];
        bool hit = false;
        for (const auto &r : regs) {
            hit = hit || r.name == e.reg || r.origin == e.reg;
        }
        if (!hit) {
            throw SemanticError(line, ErrorKind::UnknownRegister, "no register '" + e.reg + "' at step " + std::to_string(e.step));
        }
    }

    [[nodiscard]] bool live(const std::string &name, std::size_t step) const {
        if (step >= history_.size()) {
            return false;
        }
        for (const auto &r : history_[step]) {
            if (r.name == name || r.origin == name) {
                return true;
            }
        }
        return false;
    }

  private:
    [[nodiscard]] std::optional<std::size_t> find(const std::string &name) const {
        for (std::size_t i = 0; i < regs_.size(); ++i) {
            if (regs_[i].name == name) {
                return i;
            }
        }
        for (std::size_t i = 0; i < regs_.size(); ++i) {
            if (regs_[i].origin == name) {
                return i;
            }
        }
        return std::nullopt;
    }

    std::vector<Register> regs_;
    std::vector<std::vector<Register>> history_;
};

} // namespace detail

/**
 * Parses a whole experiment file. Throws ParseError{line, col, expected} on
 * syntax errors and SemanticError for unknown registers, duplicate or
 * missing step indices, unknown statement ids, and non-normalized states.
 */
inline ExperimentFile parse(std::string_view text) {
    using detail::LineCursor;
    ExperimentFile out;
    Scenario &s = out.scenario;
    bool have_state = false;
    std::size_t state_line = 0;
    std::vector<std::size_t> event_lines;
    std::vector<std::pair<Event, std::size_t>> events;
    std::vector<std::pair<std::string, std::size_t>> statement_refs;
    std::size_t line_no = 0;
    std::size_t last_line = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        ++line_no;
        std::string_view raw = text.substr(start, end - start);
        start = end + 1;
        if (auto hash = raw.find('#'); hash != std::string_view::npos) {
            raw = raw.substr(0, hash);
        }
        LineCursor c(raw, line_no);
        if (c.at_end()) {
            if (end == text.size()) {
                break;
            }
            continue;
        }
        last_line = line_no;
        if (c.accept("scenario")) {
            s.name = c.name("scenario name");
        } else if (c.accept("description")) {
            c.skip_ws();
            s.description = std::string(c.rest());
            while (!s.description.empty() && (s.description.back() == ' ' || s.description.back() == '\r')) {
                s.description.pop_back();
            }
            c.advance(c.rest().size());
        } else if (c.accept("mode")) {
            if (c.accept("exact")) {
                s.mode = Mode::exact;
            } else if (c.accept("float")) {
                s.mode = Mode::floating;
            } else {
                c.fail("'exact' or 'float'");
            }
        } else if (c.accept("seed")) {
            s.seed = c.number64("seed");
        } else if (c.accept("register")) {
            if (!s.steps.empty() || have_state) {
                throw ParseError(line_no, 1, "register declarations before the state and steps");
            }
            RegisterDecl d;
            d.name = c.name("register name");
            for (const auto &r : s.registers) {
                if (r.name == d.name) {
                    throw SemanticError(line_no, ErrorKind::InvalidArgument, "register '" + d.name + "' declared twice");
                }
            }
            if (c.accept("style=")) {
                if (c.accept("spin")) {
                    d.style = LabelStyle::spin;
                } else if (c.accept("sign")) {
                    d.style = LabelStyle::sign;
                } else {
                    c.fail("'spin' or 'sign'");
                }
            }
            s.registers.push_back(d);
        } else if (c.accept("state")) {
            if (have_state) {
                throw SemanticError(line_no, ErrorKind::InvalidArgument, "a second initial state");
            }
            s.initial.terms = detail::ket(c);
            have_state = true;
            state_line = line_no;
        } else if (c.accept("step")) {
            MeasurementStep st;
            st.index = c.number("step number");
            if (c.peek() != ':') {
                c.fail("':' after step number");
            }
            c.advance(1);
            st.agent = c.name("agent name");
            bool absorbs = false;
            if (c.accept("absorbs")) {
                absorbs = true;
            } else if (!c.accept("measures")) {
                c.fail("'absorbs' or 'measures'");
            }
            st.targets.push_back(c.name("target register"));
            while (c.peek() == ',') {
                c.advance(1);
                st.targets.push_back(c.name("target register"));
            }
            c.expect("in");
            st.basis = detail::basis(c);
            bool preserving = false;
            std::optional<std::optional<unsigned>> collapse;
            while (!c.at_end()) {
                if (c.accept("preserving")) {
                    preserving = true;
                } else if (c.accept("collapse=")) {
                    if (c.accept("sample")) {
                        collapse = std::optional<unsigned>{};
                    } else {
                        collapse = detail::label(c);
                    }
                } else {
                    c.fail("'preserving', 'collapse=' or end of line");
                }
            }
            if (absorbs && preserving) {
                throw ParseError(line_no, 1, "either 'absorbs' or 'preserving', not both");
            }
            if (absorbs) {
                st.style = StepStyle::absorb;
            } else if (preserving || st.targets.size() > 1 || !st.basis.single_register()) {
                st.style = StepStyle::preserve;
            } else {
                // a plain 'measures' on a record observes it; on a fresh system it absorbs it
                st.style = st.targets.front().rfind("mem.", 0) == 0 ? StepStyle::preserve : StepStyle::absorb;
            }
            if (collapse) {
                st.collapse_base = st.style;
                st.style = StepStyle::collapse;
                st.collapse_outcome = *collapse;
            }
            s.steps.push_back(st);
            out.step_lines.push_back(line_no);
        } else if (c.accept("statement")) {
            StatementSpec spec;
            spec.statement.id = c.name("statement id");
            if (c.peek() != ':') {
                c.fail("':' after statement id");
            }
            c.advance(1);
            c.expect("if");
            spec.statement.premises = detail::event_list(c);
            c.expect("then");
            spec.statement.conclusion = detail::event(c);
            while (!c.at_end()) {
                if (c.accept("mode=")) {
                    spec.statement.mode = detail::eval_mode(c);
                } else if (c.accept("claim=")) {
                    if (c.accept("certain")) {
                        spec.statement.claim = Claim::certain;
                    } else if (c.accept("probabilistic")) {
                        spec.statement.claim = Claim::probabilistic;
                    } else {
                        c.fail("'certain' or 'probabilistic'");
                    }
                } else if (c.accept("expect=")) {
                    spec.expect = detail::classification(c);
                } else if (c.accept("p=")) {
                    spec.expect_p = c.compact_amplitude("probability");
                } else {
                    c.fail("'mode=', 'claim=', 'expect=', 'p=' or end of line");
                }
            }
            if (s.find_statement(spec.statement.id) != nullptr) {
                throw SemanticError(line_no, ErrorKind::InvalidArgument, "statement '" + spec.statement.id + "' defined twice");
            }
            for (const auto &e : spec.statement.premises) {
                events.emplace_back(e, line_no);
            }
            events.emplace_back(spec.statement.conclusion, line_no);
            s.statements.push_back(std::move(spec));
            out.statement_lines.push_back(line_no);
        } else if (c.accept("check")) {
            if (c.accept("transitivity")) {
                TransitivityCheck t;
                t.first = c.name("statement id");
                t.second = c.name("statement id");
                statement_refs.emplace_back(t.first, line_no);
                statement_refs.emplace_back(t.second, line_no);
                while (!c.at_end()) {
                    if (c.accept("expect=")) {
                        if (c.accept("valid")) {
                            t.expect_valid = true;
                        } else if (c.accept("violated")) {
                            t.expect_valid = false;
                        } else {
                            c.fail("'valid' or 'violated'");
                        }
                    } else if (c.accept("combined=")) {
                        t.expect_combined = c.compact_amplitude("probability");
                    } else if (c.accept("violation=")) {
                        t.expect_violation = c.compact_amplitude("probability");
                    } else {
                        c.fail("'expect=', 'combined=', 'violation=' or end of line");
                    }
                }
                s.checks.emplace_back(std::move(t));
            } else if (c.accept("compatible")) {
                CompatibleCheck k;
                k.first = detail::event(c);
                k.second = detail::event(c);
                events.emplace_back(k.first, line_no);
                events.emplace_back(k.second, line_no);
                while (!c.at_end()) {
                    if (c.accept("given")) {
                        k.given = detail::event_list(c);
                        for (const auto &e : k.given) {
                            events.emplace_back(e, line_no);
                        }
                    } else if (c.accept("expect=")) {
                        if (c.accept("compatible")) {
                            k.expect_compatible = true;
                        } else if (c.accept("incompatible")) {
                            k.expect_compatible = false;
                        } else {
                            c.fail("'compatible' or 'incompatible'");
                        }
                    } else if (c.accept("defect=")) {
                        k.expect_defect = c.compact_amplitude("defect");
                    } else {
                        c.fail("'given', 'expect=', 'defect=' or end of line");
                    }
                }
                s.checks.emplace_back(std::move(k));
            } else if (c.accept("or")) {
                OrCheck o;
                o.branches.push_back(c.name("statement id"));
                while (c.peek() == ',') {
                    c.advance(1);
                    o.branches.push_back(c.name("statement id"));
                }
                c.expect("merged");
                o.merged = c.name("statement id");
                for (const auto &b : o.branches) {
                    statement_refs.emplace_back(b, line_no);
                }
                statement_refs.emplace_back(o.merged, line_no);
                while (!c.at_end()) {
                    if (c.accept("expect=")) {
                        if (c.accept("divergent")) {
                            o.expect_divergence = true;
                        } else if (c.accept("consistent")) {
                            o.expect_divergence = false;
                        } else {
                            c.fail("'divergent' or 'consistent'");
                        }
                    } else {
                        c.fail("'expect=' or end of line");
                    }
                }
                s.checks.emplace_back(std::move(o));
            } else if (c.accept("conjunction")) {
                ConjunctionCheck k;
                c.expect("if");
                k.premises = detail::event_list(c);
                c.expect("then");
                k.conclusion = detail::event(c);
                for (const auto &e : k.premises) {
                    events.emplace_back(e, line_no);
                }
                events.emplace_back(k.conclusion, line_no);
                while (!c.at_end()) {
                    if (c.accept("expect=")) {
                        if (c.accept("compatible")) {
                            k.expect_compatible = true;
                        } else if (c.accept("incompatible")) {
                            k.expect_compatible = false;
                        } else {
                            c.fail("'compatible' or 'incompatible'");
                        }
                    } else if (c.accept("verdict=")) {
                        k.expect_verdict = detail::classification(c);
                    } else {
                        c.fail("'expect=', 'verdict=' or end of line");
                    }
                }
                s.checks.emplace_back(std::move(k));
            } else if (c.accept("chain")) {
                ChainCheck k;
                k.events = detail::event_list(c);
                for (const auto &e : k.events) {
                    events.emplace_back(e, line_no);
                }
                while (!c.at_end()) {
                    if (c.accept("p=")) {
                        k.expect_p = c.compact_amplitude("probability");
                    } else {
                        c.fail("'p=' or end of line");
                    }
                }
                s.checks.emplace_back(std::move(k));
            } else if (c.accept("state")) {
                StateCheck k;
                k.step = c.number("snapshot step");
                k.ket.terms = detail::ket(c);
                if (!c.at_end()) {
                    c.fail("end of line after ket");
                }
                s.checks.emplace_back(std::move(k));
            } else if (c.accept("mined")) {
                MinedCheck k;
                c.expect("if");
                k.premise = detail::event(c);
                c.expect("then");
                k.conclusion = detail::event(c);
                events.emplace_back(k.premise, line_no);
                events.emplace_back(k.conclusion, line_no);
                while (!c.at_end()) {
                    if (c.accept("mode=")) {
                        k.mode = detail::eval_mode(c);
                    } else {
                        c.fail("'mode=' or end of line");
                    }
                }
                s.checks.emplace_back(std::move(k));
            } else if (c.accept("mine")) {
                s.checks.emplace_back(MineCheck{});
            } else {
                c.fail("check kind (transitivity, compatible, or, conjunction, chain, state, mine, mined)");
            }
            out.check_lines.push_back(line_no);
        } else if (c.accept("joint")) {
            JointSpec j;
            j.registers.push_back(c.name("register name"));
            while (c.peek() == ',') {
                c.advance(1);
                j.registers.push_back(c.name("register name"));
            }
            if (c.peek() == '@') {
                c.advance(1);
                j.step = c.number("snapshot step");
            }
            if (c.accept("expect")) {
                while (!c.at_end()) {
                    std::string key = c.name("outcome key");
                    if (c.peek() != '=') {
                        c.fail("'=' after outcome key");
                    }
                    c.advance(1);
                    j.expect[key] = c.compact_amplitude("probability");
                }
            }
            if (!c.at_end()) {
                c.fail("'expect' or end of line");
            }
            s.joint = std::move(j);
        } else {
            c.fail("clause (scenario, description, mode, seed, register, state, step, statement, check, joint)");
        }
        if (!c.at_end()) {
            c.fail("end of line");
        }
        if (end == text.size()) {
            break;
        }
    }
    if (s.registers.empty()) {
        throw ParseError(last_line == 0 ? 1 : last_line + 1, 1, "register declaration");
    }
    if (!have_state) {
        throw ParseError(last_line + 1, 1, "state clause");
    }
    // semantics
    for (const auto &t : s.initial.terms) {
        if (t.labels.size() != s.registers.size()) {
            throw SemanticError(state_line, ErrorKind::RegisterMismatch,
                                "ket has " + std::to_string(t.labels.size()) + " labels for " +
                                    std::to_string(s.registers.size()) + " registers");
        }
    }
    try {
        bool exact = s.mode == Mode::exact;
        for (const auto &t : s.initial.terms) {
            exact = exact && t.amp.exact.has_value();
        }
        if (exact) {
            (void)initial_state<QuadAmp>(s);
        } else {
            (void)initial_state<FloatAmp>(s);
        }
    } catch (const NotNormalizedError &e) {
        throw SemanticError(state_line, ErrorKind::NotNormalized, "state norm^2 differs from 1 by " + e.deficit());
    } catch (const Error &e) {
        throw SemanticError(state_line, e.kind(), e.what());
    }
    std::set<std::size_t> seen;
    for (std::size_t i = 0; i < s.steps.size(); ++i) {
        if (!seen.insert(s.steps[i].index).second) {
            throw SemanticError(out.step_lines[i], ErrorKind::InvalidArgument,
                                "duplicate step index " + std::to_string(s.steps[i].index));
        }
    }
    std::stable_sort(s.steps.begin(), s.steps.end(),
                     [](const MeasurementStep &a, const MeasurementStep &b) { return a.index < b.index; });
    for (std::size_t i = 0; i < s.steps.size(); ++i) {
        if (s.steps[i].index != i + 1) {
            throw SemanticError(out.step_lines.empty() ? 1 : out.step_lines[std::min(i, out.step_lines.size() - 1)],
                                ErrorKind::InvalidArgument, "step indices must run 1..n; missing step " + std::to_string(i + 1));
        }
    }
    detail::NameTracker names(s.registers);
    for (std::size_t i = 0; i < s.steps.size(); ++i) {
        std::size_t line = 0;
        for (std::size_t j = 0; j < s.steps.size(); ++j) {
            line = out.step_lines[j];
            if (s.steps[i].index == j + 1) {
                break;
            }
        }
        names.apply(s.steps[i], line);
    }
    for (const auto &[e, line] : events) {
        names.check_event(e, line);
    }
    if (s.joint) {
        for (const auto &r : s.joint->registers) {
            if (!names.live(r, s.joint->step.value_or(s.steps.size()))) {
                throw SemanticError(last_line, ErrorKind::UnknownRegister, "joint register '" + r + "' is not live");
            }
        }
    }
    for (const auto &[id, line] : statement_refs) {
        if (s.find_statement(id) == nullptr) {
            throw SemanticError(line, ErrorKind::InvalidArgument, "no statement with id '" + id + "'");
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Emitter
// ---------------------------------------------------------------------------

namespace detail {

inline std::string label_word(unsigned o, bool sign) {
    if (sign) {
        return o == 0 ? "plus" : "minus";
    }
    return o == 0 ? "up" : "down";
}

inline std::string ket_text(const std::vector<KetTerm> &terms, const std::vector<bool> &sign_style) {
    std::string out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const auto &t = terms[i];
        if (i > 0) {
            out += " + ";
        }
        out += t.amp.text + " |";
        for (std::size_t j = 0; j < t.labels.size(); ++j) {
            const bool sign = j < sign_style.size() && sign_style[j];
            out += (j > 0 ? "," : "") + label_word(t.labels[j], sign);
        }
        out += ">";
    }
    return out;
}

inline std::string basis_text(const BasisSpec &b) {
    switch (b.kind) {
    case BasisSpec::Kind::z: return "z";
    case BasisSpec::Kind::x: return "x";
    case BasisSpec::Kind::theta: {
        std::ostringstream os;
        os.precision(17);
        os << "theta(" << b.theta << ")";
        return os.str();
    }
    case BasisSpec::Kind::states: {
        std::string out = "states(";
        for (std::size_t i = 0; i < b.states.size(); ++i) {
            out += (i > 0 ? "; " : "") + ket_text(b.states[i], {});
        }
        return out + ")";
    }
    }
    return "z";
}

/// Emits events with labels matching the register's style at that step, when known.
class EventWriter {
  public:
    explicit EventWriter(const Scenario &s) {
        std::vector<Register> regs;
        for (const auto &d : s.registers) {
            regs.push_back(make_register(d.name, d.style));
        }
        snaps_.push_back(regs);
        for (const auto &st : s.steps) {
            try {
                if (st.record_style() == StepStyle::absorb) {
                    std::size_t i = index(regs, st.targets.front());
                    std::vector<Register> others = regs;
                    others.erase(others.begin() + static_cast<std::ptrdiff_t>(i));
                    regs[i].name = frlogic::detail::record_name(others, st.agent);
                    regs[i].agent = st.agent;
                    regs[i].style = frlogic::detail::record_label_style(st.basis, regs[i].style);
                } else {
                    LabelStyle target = st.targets.size() == 1 ? regs[index(regs, st.targets.front())].style : LabelStyle::spin;
                    Register r = make_register(frlogic::detail::record_name(regs, st.agent),
                                               frlogic::detail::record_label_style(st.basis, target));
                    r.agent = st.agent;
                    regs.push_back(r);
                }
            } catch (const Error &) {
            }
            snaps_.push_back(regs);
        }
    }

    [[nodiscard]] std::string text(const Event &e) const {
        bool sign = e.basis.kind == BasisSpec::Kind::x;
        if (e.basis.kind == BasisSpec::Kind::z && e.step < snaps_.size()) {
            for (const auto &r : snaps_[e.step]) {
                if (r.name == e.reg || r.origin == e.reg) {
                    sign = r.style == LabelStyle::sign;
                    break;
                }
            }
        }
        std::string out = e.reg + "@" + std::to_string(e.step) + " == " + label_word(e.outcome, sign);
        if (e.basis.kind != BasisSpec::Kind::z) {
            out += " basis=" + basis_text(e.basis);
        }
        return out;
    }

    [[nodiscard]] std::string list(const std::vector<Event> &events) const {
        std::string out;
        for (std::size_t i = 0; i < events.size(); ++i) {
            out += (i > 0 ? " and " : "") + text(events[i]);
        }
        return out;
    }

  private:
    static std::size_t index(const std::vector<Register> &regs, const std::string &name) {
        for (std::size_t i = 0; i < regs.size(); ++i) {
            if (regs[i].name == name) {
                return i;
            }
        }
        for (std::size_t i = 0; i < regs.size(); ++i) {
            if (regs[i].origin == name) {
                return i;
            }
        }
        throw Error(ErrorKind::UnknownRegister, name);
    }

    std::vector<std::vector<Register>> snaps_;
};

inline std::string compact(const AmpLiteral &lit) {
    std::string out;
    for (char ch : lit.text) {
        if (ch != ' ' && ch != '\t') {
            out += ch;
        }
    }
    return out;
}

} // namespace detail

/// Writes a scenario in the experiment language; parse(emit(s)) reproduces s.
inline std::string emit(const Scenario &s) {
    std::ostringstream os;
    detail::EventWriter ev(s);
    os << "# frlogic experiment description\n";
    if (!s.name.empty()) {
        os << "scenario " << s.name << "\n";
    }
    if (!s.description.empty()) {
        os << "description " << s.description << "\n";
    }
    if (s.mode == Mode::floating) {
        os << "mode float\n";
    }
    if (s.seed) {
        os << "seed " << *s.seed << "\n";
    }
    os << "\n";
    std::vector<bool> sign;
    for (const auto &r : s.registers) {
        os << "register " << r.name << (r.style == LabelStyle::sign ? " style=sign" : "") << "\n";
        sign.push_back(r.style == LabelStyle::sign);
    }
    os << "state " << detail::ket_text(s.initial.terms, sign) << "\n\n";
    for (const auto &st : s.steps) {
        const StepStyle base = st.record_style();
        os << "step " << st.index << ": " << st.agent << (base == StepStyle::absorb ? " absorbs " : " measures ");
        for (std::size_t i = 0; i < st.targets.size(); ++i) {
            os << (i > 0 ? "," : "") << st.targets[i];
        }
        os << " in " << detail::basis_text(st.basis);
        const bool implied_preserve =
            st.targets.size() > 1 || !st.basis.single_register() || st.targets.front().rfind("mem.", 0) == 0;
        if (base == StepStyle::preserve && !implied_preserve) {
            os << " preserving";
        }
        if (st.style == StepStyle::collapse) {
            if (st.collapse_outcome) {
                os << " collapse=" << *st.collapse_outcome;
            } else {
                os << " collapse=sample";
            }
        }
        os << "\n";
    }
    if (!s.statements.empty()) {
        os << "\n";
    }
    for (const auto &spec : s.statements) {
        const auto &st = spec.statement;
        os << "statement " << st.id << ": if " << ev.list(st.premises) << " then " << ev.text(st.conclusion)
           << " mode=" << to_string(st.mode);
        if (st.claim == Claim::probabilistic) {
            os << " claim=probabilistic";
        }
        if (spec.expect) {
            os << " expect=" << to_string(*spec.expect);
        }
        if (spec.expect_p) {
            os << " p=" << detail::compact(*spec.expect_p);
        }
        os << "\n";
    }
    if (!s.checks.empty()) {
        os << "\n";
    }
    for (const auto &check : s.checks) {
        std::visit(
            [&](const auto &c) {
                using C = std::decay_t<decltype(c)>;
                if constexpr (std::is_same_v<C, TransitivityCheck>) {
                    os << "check transitivity " << c.first << " " << c.second;
                    if (c.expect_valid) {
                        os << " expect=" << (*c.expect_valid ? "valid" : "violated");
                    }
                    if (c.expect_combined) {
                        os << " combined=" << detail::compact(*c.expect_combined);
                    }
                    if (c.expect_violation) {
                        os << " violation=" << detail::compact(*c.expect_violation);
                    }
                } else if constexpr (std::is_same_v<C, CompatibleCheck>) {
                    os << "check compatible " << ev.text(c.first) << " " << ev.text(c.second);
                    if (!c.given.empty()) {
                        os << " given " << ev.list(c.given);
                    }
                    if (c.expect_compatible) {
                        os << " expect=" << (*c.expect_compatible ? "compatible" : "incompatible");
                    }
                    if (c.expect_defect) {
                        os << " defect=" << detail::compact(*c.expect_defect);
                    }
                } else if constexpr (std::is_same_v<C, OrCheck>) {
                    os << "check or ";
                    for (std::size_t i = 0; i < c.branches.size(); ++i) {
                        os << (i > 0 ? "," : "") << c.branches[i];
                    }
                    os << " merged " << c.merged;
                    if (c.expect_divergence) {
                        os << " expect=" << (*c.expect_divergence ? "divergent" : "consistent");
                    }
                } else if constexpr (std::is_same_v<C, ConjunctionCheck>) {
                    os << "check conjunction if " << ev.list(c.premises) << " then " << ev.text(c.conclusion);
                    if (c.expect_compatible) {
                        os << " expect=" << (*c.expect_compatible ? "compatible" : "incompatible");
                    }
                    if (c.expect_verdict) {
                        os << " verdict=" << to_string(*c.expect_verdict);
                    }
                } else if constexpr (std::is_same_v<C, ChainCheck>) {
                    os << "check chain " << ev.list(c.events);
                    if (c.expect_p) {
                        os << " p=" << detail::compact(*c.expect_p);
                    }
                } else if constexpr (std::is_same_v<C, StateCheck>) {
                    os << "check state " << c.step << " " << detail::ket_text(c.ket.terms, {});
                } else if constexpr (std::is_same_v<C, MineCheck>) {
                    os << "check mine";
                } else {
                    os << "check mined if " << ev.text(c.premise) << " then " << ev.text(c.conclusion);
                    if (c.mode) {
                        os << " mode=" << to_string(*c.mode);
                    }
                }
                os << "\n";
            },
            check);
    }
    if (s.joint) {
        os << "\njoint ";
        for (std::size_t i = 0; i < s.joint->registers.size(); ++i) {
            os << (i > 0 ? "," : "") << s.joint->registers[i];
        }
        if (s.joint->step) {
            os << " @" << *s.joint->step;
        }
        if (!s.joint->expect.empty()) {
            os << " expect";
            for (const auto &[key, lit] : s.joint->expect) {
                os << " " << key << "=" << detail::compact(lit);
            }
        }
        os << "\n";
    }
    return os.str();
}

} // namespace frlogic::dsl
