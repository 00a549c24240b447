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
 * Text and JSON renderings of a ScenarioResult.
 */
#pragma once

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "scenario.hpp"

namespace frlogic::report {

using json = nlohmann::ordered_json;

namespace detail {

inline std::string decimal(double v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

inline std::string shown(const Number &n) {
    if (n.exact) {
        const std::string sym = n.exact->str();
        const std::string dec = decimal(n.value);
        return sym == dec ? sym : sym + " (" + dec + ")";
    }
    return decimal(n.value);
}

inline std::string pad(const std::string &s, std::size_t width) {
    // count code points so arrows and bars align
    std::size_t len = 0;
    for (unsigned char ch : s) {
        len += (ch & 0xC0U) != 0x80U ? 1 : 0;
    }
    return len >= width ? s : s + std::string(width - len, ' ');
}

class Table {
  public:
    explicit Table(std::vector<std::string> header) : rows_{std::move(header)} {}
    void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

    [[nodiscard]] std::string str(const std::string &indent = "  ") const {
        std::vector<std::size_t> widths;
        for (const auto &row : rows_) {
            widths.resize(std::max(widths.size(), row.size()), 0);
            for (std::size_t i = 0; i < row.size(); ++i) {
                std::size_t len = 0;
                for (unsigned char ch : row[i]) {
                    len += (ch & 0xC0U) != 0x80U ? 1 : 0;
                }
                widths[i] = std::max(widths[i], len);
            }
        }
        std::string out;
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            std::string line = indent;
            for (std::size_t i = 0; i < rows_[r].size(); ++i) {
                line += i + 1 == rows_[r].size() ? rows_[r][i] : pad(rows_[r][i], widths[i]) + "  ";
            }
            out += line + "\n";
            if (r == 0) {
                std::size_t total = 0;
                for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
                    total += widths[i] + 2;
                }
                total += rows_[0].empty() ? 0 : std::max<std::size_t>(rows_[0].back().size(), 8);
                out += indent + std::string(total, '-') + "\n";
            }
        }
        return out;
    }

  private:
    std::vector<std::vector<std::string>> rows_;
};

inline std::string diagnostics_text(const std::vector<Diagnostic> &ds) {
    std::string out;
    for (const auto &d : ds) {
        out += (out.empty() ? "" : "; ") + d.kind + ": " + d.message;
    }
    return out;
}

} // namespace detail

/// {rational, sqrt2, sqrt3, sqrt6, float}; sqrt5-family keys appear only when nonzero.
inline json number_json(const Number &n) {
    json j = json::object();
    if (n.exact) {
        static constexpr const char *kKeys[] = {"rational", "sqrt2",  "sqrt3",  "sqrt6",
                                                "sqrt5",    "sqrt10", "sqrt15", "sqrt30"};
        for (std::size_t m = 0; m < 8; ++m) {
            if (m < 4 || sgn(n.exact->coeff(m)) != 0) {
                j[kKeys[m]] = n.exact->coeff(m).get_str();
            }
        }
        j["symbolic"] = n.exact->str();
    }
    j["float"] = n.value;
    return j;
}

inline json diagnostics_json(const std::vector<Diagnostic> &ds) {
    json arr = json::array();
    for (const auto &d : ds) {
        arr.push_back({{"kind", d.kind}, {"message", d.message}});
    }
    return arr;
}

inline json to_json(const ScenarioResult &r) {
    json j;
    j["scenario"] = r.name;
    j["description"] = r.description;
    j["mode"] = to_string(r.mode);
    j["matched"] = r.all_matched();
    json snaps = json::array();
    for (const auto &s : r.snapshots) {
        snaps.push_back({{"step", s.step},
                         {"label", s.label},
                         {"registers", s.registers},
                         {"terms", s.terms},
                         {"norm_sq", number_json(s.norm_sq)},
                         {"ket", s.ket}});
    }
    j["snapshots"] = snaps;
    json collapses = json::array();
    for (const auto &c : r.collapses) {
        collapses.push_back(
            {{"step", c.step}, {"outcome", c.outcome}, {"probability", number_json(c.probability)}, {"sampled", c.sampled}});
    }
    j["collapses"] = collapses;
    json stmts = json::array();
    for (const auto &s : r.statements) {
        json row{{"id", s.id},
                 {"text", s.text},
                 {"mode", to_string(s.mode)},
                 {"claim", to_string(s.claim)},
                 {"classification", to_string(s.classification)},
                 {"probability", number_json(s.probability)},
                 {"premise_probability", number_json(s.premise_probability)},
                 {"diagnostics", diagnostics_json(s.diagnostics)}};
        if (s.expected) {
            row["expected"] = to_string(*s.expected);
        }
        if (s.expected_p) {
            row["expected_p"] = *s.expected_p;
        }
        row["matched"] = s.matched;
        stmts.push_back(row);
    }
    j["statements"] = stmts;
    json checks = json::array();
    for (const auto &c : r.checks) {
        json row{{"kind", c.kind}, {"title", c.title}};
        json nums = json::object();
        for (const auto &[k, v] : c.numbers) {
            nums[k] = number_json(v);
        }
        row["numbers"] = nums;
        json fields = json::object();
        for (const auto &[k, v] : c.fields) {
            fields[k] = v;
        }
        row["fields"] = fields;
        json flags = json::object();
        for (const auto &[k, v] : c.flags) {
            flags[k] = v;
        }
        row["flags"] = flags;
        row["diagnostics"] = diagnostics_json(c.diagnostics);
        if (!c.mined.empty()) {
            json mined = json::array();
            for (const auto &m : c.mined) {
                mined.push_back({{"premise", m.premise},
                                 {"conclusion", m.conclusion},
                                 {"forward_holds", m.forward_holds},
                                 {"retro_holds", m.retro_holds},
                                 {"trivial", m.trivial},
                                 {"forward_p", number_json(m.forward_p)},
                                 {"retro_p", number_json(m.retro_p)}});
            }
            row["mined"] = mined;
        }
        if (!c.error.empty()) {
            row["error"] = c.error;
        }
        row["has_expectation"] = c.has_expectation;
        row["matched"] = c.matched;
        checks.push_back(row);
    }
    j["checks"] = checks;
    if (r.joint) {
        json joint = json::object();
        json detail = json::object();
        for (const auto &[k, v] : r.joint->probabilities) {
            joint[k] = v.str();
            detail[k] = number_json(v);
        }
        j["joint"] = joint;
        j["joint_detail"] = {{"step", r.joint->step},
                             {"registers", r.joint->registers},
                             {"probabilities", detail},
                             {"matched", r.joint->matched}};
    }
    return j;
}

inline std::string to_text(const ScenarioResult &r) {
    using detail::Table;
    std::ostringstream os;
    os << "scenario " << r.name << "  [" << to_string(r.mode) << "]\n";
    if (!r.description.empty()) {
        os << "  " << r.description << "\n";
    }
    os << "\nsnapshots\n";
    Table snaps({"step", "label", "terms", "norm^2", "state"});
    for (const auto &s : r.snapshots) {
        std::string regs;
        for (const auto &name : s.registers) {
            regs += (regs.empty() ? "" : ",") + name;
        }
        snaps.add({std::to_string(s.step), s.label, std::to_string(s.terms), s.norm_sq.str(), "[" + regs + "] " + s.ket});
    }
    os << snaps.str();
    if (!r.collapses.empty()) {
        os << "\ncollapses\n";
        Table t({"step", "outcome", "probability", "sampled"});
        for (const auto &c : r.collapses) {
            t.add({std::to_string(c.step), c.outcome, detail::shown(c.probability), c.sampled ? "yes" : "no"});
        }
        os << t.str();
    }
    if (!r.statements.empty()) {
        os << "\nstatements\n";
        Table t({"id", "mode", "verdict", "p", "p(premise)", "expected", "", "statement"});
        for (const auto &s : r.statements) {
            std::string expected = s.expected ? std::string(to_string(*s.expected)) : "-";
            if (s.expected_p) {
                expected += " p=" + *s.expected_p;
            }
            t.add({s.id, to_string(s.mode), to_string(s.classification), detail::shown(s.probability),
                   detail::shown(s.premise_probability), expected, s.matched ? "ok" : "MISMATCH", s.text});
        }
        os << t.str();
        for (const auto &s : r.statements) {
            if (!s.diagnostics.empty()) {
                os << "  " << s.id << ": " << detail::diagnostics_text(s.diagnostics) << "\n";
            }
        }
    }
    if (!r.checks.empty()) {
        os << "\nchecks\n";
        for (const auto &c : r.checks) {
            os << "  [" << (c.matched ? "ok" : "MISMATCH") << "] " << c.kind << ": " << c.title << "\n";
            if (!c.error.empty()) {
                os << "      error: " << c.error << "\n";
            }
            for (const auto &[k, v] : c.numbers) {
                os << "      " << detail::pad(k, 22) << detail::shown(v) << "\n";
            }
            for (const auto &[k, v] : c.fields) {
                os << "      " << detail::pad(k, 22) << v << "\n";
            }
            for (const auto &[k, v] : c.flags) {
                os << "      " << detail::pad(k, 22) << (v ? "yes" : "no") << "\n";
            }
            if (!c.diagnostics.empty()) {
                os << "      " << detail::diagnostics_text(c.diagnostics) << "\n";
            }
            if (!c.mined.empty()) {
                Table t({"premise", "conclusion", "forward", "retro", "trivial"});
                for (const auto &m : c.mined) {
                    t.add({m.premise, m.conclusion, m.forward_holds ? "Holds" : "-", m.retro_holds ? "Holds" : "-",
                           m.trivial ? "yes" : "no"});
                }
                os << t.str("      ");
            }
        }
    }
    if (r.joint) {
        os << "\njoint distribution at step " << r.joint->step << " of ";
        for (std::size_t i = 0; i < r.joint->registers.size(); ++i) {
            os << (i > 0 ? ", " : "") << r.joint->registers[i];
        }
        os << (r.joint->has_expectation ? (r.joint->matched ? "  [ok]" : "  [MISMATCH]") : "") << "\n";
        Table t({"outcome", "probability"});
        for (const auto &[k, v] : r.joint->probabilities) {
            t.add({k, detail::shown(v)});
        }
        os << t.str();
    }
    os << "\nresult: " << (r.all_matched() ? "all expectations met" : "expectation mismatch") << "\n";
    return os.str();
}

} // namespace frlogic::report
