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
// Acceptance checks: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "frlogic/frlogic.hpp"
#include "oracle/dense_oracle.hpp"

namespace {

using frlogic::BasisSpec;
using frlogic::Classification;
using frlogic::EvalMode;
using frlogic::Event;
using frlogic::QuadAmp;
using frlogic::Statement;
using H = frlogic::History<QuadAmp>;
namespace lib = frlogic::library;

/// Collects failures for one criterion.
class Probe {
  public:
    void require(bool ok, const std::string &what) {
        if (!ok) {
            failures_.push_back(what);
        }
    }
    void exact(const QuadAmp &got, const QuadAmp &want, const std::string &what) {
        require(got == want, what + ": got " + got.str() + ", want " + want.str());
    }
    void near(double got, double want, const std::string &what) {
        std::ostringstream os;
        os.precision(17);
        os << what << ": got " << got << ", want " << want;
        require(std::abs(got - want) <= 1e-9, os.str());
    }
    [[nodiscard]] const std::vector<std::string> &failures() const { return failures_; }

  private:
    std::vector<std::string> failures_;
};

QuadAmp r(long n, long d) { return QuadAmp(mpq_class(n, d)); }

Event ev(const std::string &reg, std::size_t step, unsigned outcome) { return Event{reg, BasisSpec::z_basis(), outcome, step}; }

Statement stmt(std::string id, std::vector<Event> premises, Event conclusion, EvalMode mode,
               frlogic::Claim claim = frlogic::Claim::certain) {
    return Statement{std::move(id), std::move(premises), std::move(conclusion), mode, claim};
}

const Event kFbarDown = ev("mem.Fbar", 1, 1);
const Event kFbarUp = ev("mem.Fbar", 1, 0);
const Event kFUp = ev("mem.F", 2, 0);
const Event kWbarMinus = ev("mem.Wbar", 3, 1);
const Event kWMinus = ev("mem.W", 4, 1);
const Event kWPlus = ev("mem.W", 4, 0);

const Statement kS1p = stmt("1'", {kWMinus, kWbarMinus}, kWbarMinus, EvalMode::forward);
const Statement kS2 = stmt("2", {kWbarMinus}, kFUp, EvalMode::retrodictive);
const Statement kS3 = stmt("3", {kFUp}, kFbarDown, EvalMode::retrodictive);
const Statement kS4 = stmt("4", {kFbarDown}, kWPlus, EvalMode::forward);

const H &fr() {
    static const H h = frlogic::run_history<QuadAmp>(lib::fr_full());
    return h;
}

const oracle::Simulation &fr_oracle() {
    static const oracle::Simulation sim(lib::fr_full());
    return sim;
}

const std::vector<std::pair<std::vector<unsigned>, QuadAmp>> kJoint{
    {{0, 0}, r(3, 4)}, {{0, 1}, r(1, 12)}, {{1, 0}, r(1, 12)}, {{1, 1}, r(1, 12)}};

void final_distribution(Probe &p) {
    const auto joint = frlogic::joint_probabilities(frlogic::canonical(fr().snapshot(4)),
                                                    {{"mem.Wbar", BasisSpec::z_basis()}, {"mem.W", BasisSpec::z_basis()}});
    for (const auto &[labels, want] : kJoint) {
        p.exact(joint.at(labels), want, "joint " + std::to_string(labels[0]) + std::to_string(labels[1]));
    }
    const auto res = frlogic::run_scenario(lib::fr_full());
    p.require(res.joint && res.joint->matched, "scenario joint expectation");
}

void statement_suite(Probe &p) {
    for (const auto &s : {kS1p, kS2, kS3, kS4}) {
        const auto v = frlogic::evaluate_statement(fr(), s);
        p.require(v.classification == Classification::Holds, "Statement " + s.id + " is " + to_string(v.classification));
        p.exact(v.probability, QuadAmp(1), "Statement " + s.id + " probability");
    }
}

void transitivity(Probe &p) {
    for (const auto &[a, b] : {std::pair{kS1p, kS2}, std::pair{kS2, kS3}, std::pair{kS3, kS4}}) {
        const auto rep = frlogic::check_transitivity(fr(), a, b);
        p.exact(rep.combined_verdict.probability, r(1, 2), a.id + "o" + b.id + " combined");
        p.exact(rep.violation, r(1, 2), a.id + "o" + b.id + " violation");
        p.require(!rep.transitivity_valid, a.id + "o" + b.id + " reported valid");
    }
    p.exact(frlogic::violation_fraction(QuadAmp::inv_sqrt2(), QuadAmp::inv_sqrt2()), r(1, 2), "violation fraction c_a = c_b");
}

void backward_inference(Probe &p) {
    bool found = false;
    for (const auto &m : frlogic::mine_statements(fr())) {
        if (m.statement.premises.front() == kWMinus && m.statement.conclusion == kFbarUp) {
            found = true;
            p.require(m.retro_holds(), "mined W=-@4 => Fbar=up@1 does not hold retrodictively");
            p.exact(m.retro.probability, QuadAmp(1), "mined probability");
        }
    }
    p.require(found, "W=-@4 => Fbar=up@1 not mined");
    const auto v = frlogic::evaluate_statement(fr(), stmt("b", {kWMinus}, kFbarUp, EvalMode::retrodictive));
    p.require(v.classification == Classification::Holds, "direct evaluation is " + std::string(to_string(v.classification)));
}

void premise_incompatibility(Probe &p) {
    const auto p2p4 = frlogic::conjunction_compatible(fr(), kWbarMinus, kFbarDown);
    p.require(!p2p4.compatible && p2p4.defect > QuadAmp(), "(P2, P4) defect " + p2p4.defect.str());
    const auto p1p3 = frlogic::conjunction_compatible(fr(), kWMinus, kFUp);
    p.require(!p1p3.compatible && p1p3.defect > QuadAmp(), "(P1', P3) defect " + p1p3.defect.str());
    const auto conj = frlogic::conjunction_premise_check(fr(), {kFUp, kWbarMinus, kWMinus}, kFbarDown);
    p.require(!conj.all_compatible, "P1' with P3 conjunction not flagged");
    const auto ok = frlogic::conjunction_compatible(fr(), kFUp, kWbarMinus);
    p.require(ok.compatible, "(F record @2, Wbar=-@3) flagged incompatible");
    p.exact(ok.defect, QuadAmp(), "(F record @2, Wbar=-@3) defect");
}

const std::vector<std::vector<Classification>> kCollapseTable{
    {Classification::Fails, Classification::Vacuous, Classification::Vacuous},
    {Classification::Fails, Classification::Holds, Classification::Holds},
    {Classification::Fails, Classification::Vacuous, Classification::Fails},
};

void collapse_table(Probe &p) {
    const auto variants = lib::fr_collapse_variants();
    p.require(variants.size() == 3, "three branches");
    for (std::size_t i = 0; i < variants.size() && i < 3; ++i) {
        const H h = frlogic::run_history<QuadAmp>(variants[i]);
        const Statement ss[] = {kS2, kS3, kS4};
        for (std::size_t j = 0; j < 3; ++j) {
            const auto v = frlogic::evaluate_statement(h, ss[j]);
            p.require(v.classification == kCollapseTable[i][j],
                      variants[i].name + " Statement " + ss[j].id + " is " + to_string(v.classification));
        }
        p.require(frlogic::run_scenario(variants[i]).all_matched(), variants[i].name + " expectations");
    }
}

void three_spins(Probe &p) {
    const H h = frlogic::run_history<QuadAmp>(lib::abc("1/sqrt2", "1/sqrt2", false, "abc"));
    const auto a = frlogic::evaluate_statement(h, stmt("A", {ev("mem.A", 1, 0)}, ev("mem.B", 2, 0), EvalMode::forward));
    const auto t = frlogic::evaluate_statement(h, stmt("T", {ev("mem.A", 1, 0)}, ev("mem.C", 3, 0), EvalMode::forward));
    const auto b = frlogic::evaluate_statement(
        h, stmt("B", {ev("mem.B", 2, 0)}, ev("mem.C", 3, 0), EvalMode::forward, frlogic::Claim::probabilistic));
    p.require(a.classification == Classification::Holds, "A is " + std::string(to_string(a.classification)));
    p.require(t.classification == Classification::Holds, "T is " + std::string(to_string(t.classification)));
    p.require(b.classification == Classification::Probabilistic, "B is " + std::string(to_string(b.classification)));
    p.exact(b.probability, r(1, 2), "B probability");
    const auto weighted = lib::abc("sqrt(1/10)", "sqrt(9/10)", false, "abc_weighted");
    const H hw = frlogic::run_history<QuadAmp>(weighted);
    const auto rep = frlogic::check_transitivity(
        hw, stmt("A", {ev("mem.A", 1, 0)}, ev("mem.B", 2, 0), EvalMode::forward),
        stmt("B", {ev("mem.B", 2, 0)}, ev("mem.C", 3, 0), EvalMode::forward, frlogic::Claim::probabilistic));
    p.exact(rep.violation, r(9, 10), "weighted violation");
    p.exact(frlogic::violation_fraction(QuadAmp::sqrt_of(mpq_class(9, 10)), QuadAmp::sqrt_of(mpq_class(1, 10))), r(9, 10),
            "violation fraction with the 9/10 weight first");
}

struct RefereeCase {
    const char *r_basis;
    const char *rbar_basis;
    std::vector<std::pair<std::vector<unsigned>, const char *>> amps;
};

const std::vector<RefereeCase> kReferee{
    {"z", "z", {{{0, 1}, "1/sqrt3"}, {{1, 0}, "1/sqrt3"}, {{1, 1}, "1/sqrt3"}}},
    {"z", "x", {{{0, 1}, "2/sqrt6"}, {{0, 0}, "1/sqrt6"}, {{1, 0}, "-1/sqrt6"}}},
    {"x", "z", {{{0, 0}, "1/sqrt6"}, {{0, 1}, "-1/sqrt6"}, {{1, 0}, "2/sqrt6"}}},
};

void referee(Probe &p) {
    for (const auto &c : kReferee) {
        const auto scn = lib::referee_math(c.r_basis, c.rbar_basis);
        const H h = frlogic::run_history<QuadAmp>(scn);
        const auto last = frlogic::canonical(h.snapshot(2));
        p.require(last.terms().size() == c.amps.size(), scn.name + " term count");
        for (const auto &[labels, text] : c.amps) {
            p.exact(last.amplitude(labels), frlogic::parse_quad(text), scn.name + " amplitude");
        }
        const auto res = frlogic::run_scenario(scn);
        p.require(res.all_matched(), scn.name + " expectations");
        for (const auto &s : res.statements) {
            p.require(s.probability.exact && *s.probability.exact == QuadAmp(1), scn.name + " " + s.id + " probability");
        }
    }
    const auto obs = frlogic::run_scenario(lib::referee_fr_observation());
    p.require(obs.all_matched(), "referee observation expectations");
}

const Statement kLeft = stmt("3L", {kFbarDown, kFUp}, kWPlus, EvalMode::forward, frlogic::Claim::probabilistic);
const Statement kRight = stmt("3R", {kFbarDown, ev("mem.F", 2, 1)}, kWPlus, EvalMode::forward, frlogic::Claim::probabilistic);

void or_composition(Probe &p) {
    const H h = frlogic::run_history<QuadAmp>(lib::fr_sub34());
    const auto rep = frlogic::or_composition_check(h, {kLeft, kRight}, kS4);
    p.exact(rep.branches.at(0).probability, r(1, 2), "3L");
    p.exact(rep.branches.at(1).probability, r(1, 2), "3R");
    p.exact(rep.merged.probability, QuadAmp(1), "merged");
    p.require(rep.divergence, "divergence not flagged");
}

void oracle_equivalence(Probe &p) {
    const auto &o = fr_oracle();
    // 1
    const auto joint = o.joint(4, {"mem.Wbar", "mem.W"});
    for (const auto &[labels, want] : kJoint) {
        p.near(joint.at(labels), want.to_double(), "oracle joint");
    }
    // 2, 3
    for (const auto &s : {kS1p, kS2, kS3, kS4}) {
        p.near(o.conditional(s), frlogic::evaluate_statement(fr(), s).probability.to_double(), "oracle Statement " + s.id);
    }
    for (const auto &[a, b] : {std::pair{kS1p, kS2}, std::pair{kS2, kS3}, std::pair{kS3, kS4}}) {
        const auto rep = frlogic::check_transitivity(fr(), a, b);
        p.near(o.conditional(rep.combined), rep.combined_verdict.probability.to_double(), "oracle combined " + a.id + "o" + b.id);
    }
    // 4
    p.near(o.retro({kWMinus}, kFbarUp), 1.0, "oracle backward inference");
    // 5
    p.near(o.defect(kFbarDown, kWbarMinus), frlogic::conjunction_compatible(fr(), kWbarMinus, kFbarDown).defect.to_double(),
           "oracle defect (P2, P4)");
    p.near(o.defect(kFUp, kWMinus), frlogic::conjunction_compatible(fr(), kWMinus, kFUp).defect.to_double(),
           "oracle defect (P1', P3)");
    p.near(o.defect(kFUp, kWbarMinus), 0.0, "oracle defect (F, Wbar)");
    p.near(o.defect(kFUp, kWPlus, {kFbarDown}), 0.5, "oracle restricted defect");
    // 6
    const auto variants = lib::fr_collapse_variants();
    for (std::size_t i = 0; i < variants.size(); ++i) {
        const oracle::Simulation sim(variants[i]);
        const H h = frlogic::run_history<QuadAmp>(variants[i]);
        for (const auto &s : {kS2, kS3, kS4}) {
            const double pre = sim.chain(s.premises);
            if (pre < 1e-12) {
                p.require(frlogic::evaluate_statement(h, s).classification == Classification::Vacuous,
                          variants[i].name + " oracle vacuous " + s.id);
                continue;
            }
            p.near(sim.conditional(s), frlogic::evaluate_statement(h, s).probability.to_double(),
                   variants[i].name + " oracle " + s.id);
        }
    }
    // 7
    {
        const auto scn = lib::abc("1/sqrt2", "1/sqrt2", false, "abc");
        const oracle::Simulation sim(scn);
        p.near(sim.forward({ev("mem.B", 2, 0)}, ev("mem.C", 3, 0)), 0.5, "oracle B");
        p.near(sim.forward({ev("mem.A", 1, 0)}, ev("mem.C", 3, 0)), 1.0, "oracle T");
        const oracle::Simulation w(lib::abc("sqrt(1/10)", "sqrt(9/10)", false, "w"));
        p.near(std::abs(w.forward({ev("mem.A", 1, 0)}, ev("mem.C", 3, 0)) - w.forward({ev("mem.B", 2, 0)}, ev("mem.C", 3, 0))),
               0.9, "oracle weighted violation");
    }
    // 8
    for (const auto &c : kReferee) {
        const oracle::Simulation sim(lib::referee_math(c.r_basis, c.rbar_basis));
        for (const auto &[labels, text] : c.amps) {
            const auto a = sim.amplitude(2, labels);
            p.near(a.real(), frlogic::parse_quad(text).to_double(), std::string("oracle referee ") + c.r_basis + c.rbar_basis);
            p.near(a.imag(), 0.0, "oracle referee imaginary part");
        }
    }
    // 9
    {
        const oracle::Simulation sim(lib::fr_sub34());
        p.near(sim.conditional(kLeft), 0.5, "oracle 3L");
        p.near(sim.conditional(kRight), 0.5, "oracle 3R");
        p.near(sim.conditional(kS4), 1.0, "oracle merged");
    }
    // phase
    for (double phi : {0.0, std::numbers::pi / 2, std::numbers::pi}) {
        const auto scn = lib::fr_phase(phi);
        const oracle::Simulation sim(scn);
        const double o2 = sim.conditional(kS2);
        p.near(o2, 1.0 / (3.0 - 2.0 * std::cos(phi)), "oracle phase formula at " + std::to_string(phi));
        const auto hf = frlogic::run_history<frlogic::FloatAmp>(scn);
        p.near(frlogic::evaluate_statement(hf, kS2).probability, o2, "engine phase at " + std::to_string(phi));
    }
}

void property_suites(Probe &p) {
    for (const auto &s : lib::all()) {
        if (s.mode == frlogic::Mode::exact) {
            for (const auto &snap : frlogic::run_history<QuadAmp>(s).snapshots) {
                p.exact(snap.norm_sq(), QuadAmp(1), s.name + " snapshot norm");
            }
        }
        for (const auto &snap : frlogic::run_history<frlogic::FloatAmp>(s).snapshots) {
            p.near(snap.norm_sq(), 1.0, s.name + " float snapshot norm");
        }
    }
    std::mt19937 rng(20261018);
    std::normal_distribution<double> g;
    const std::vector<frlogic::Register> regs{frlogic::make_register("a"), frlogic::make_register("b"),
                                              frlogic::make_register("c")};
    auto random_state = [&] {
        std::vector<std::pair<std::vector<unsigned>, frlogic::FloatAmp>> terms;
        double norm = 0.0;
        for (unsigned k = 0; k < 8; ++k) {
            const frlogic::FloatAmp a{g(rng), g(rng)};
            norm += std::norm(a);
            terms.push_back({{k & 1U, (k >> 1) & 1U, (k >> 2) & 1U}, a});
        }
        for (auto &t : terms) {
            t.second /= std::sqrt(norm);
        }
        return frlogic::make_state<frlogic::FloatAmp>(regs, terms);
    };
    const char *names[] = {"a", "b", "c"};
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const auto s1 = random_state();
        const auto s2 = random_state();
        const BasisSpec b = i % 2 == 0 ? BasisSpec::x_basis() : BasisSpec::angle(0.001 * i);
        const char *reg = names[i % 3];
        const auto before = frlogic::inner_product(s1, s2);
        const auto after = frlogic::inner_product(frlogic::change_basis(s1, reg, b), frlogic::change_basis(s2, reg, b));
        worst = std::max(worst, std::abs(after - before));
    }
    p.near(worst, 0.0, "basis change inner products over 1000 random states");
    const std::vector<std::pair<std::string, BasisSpec>> all_records{{"mem.Fbar", BasisSpec::z_basis()},
                                                                     {"mem.F", BasisSpec::z_basis()},
                                                                     {"mem.Wbar", BasisSpec::z_basis()},
                                                                     {"mem.W", BasisSpec::z_basis()}};
    const auto base = frlogic::joint_probabilities(frlogic::canonical(fr().snapshot(4)), all_records);
    for (auto [a, b] : {std::pair{true, false}, std::pair{false, true}}) {
        const H h = frlogic::run_history<QuadAmp>(lib::fr_reordered(a, b));
        p.require(frlogic::joint_probabilities(frlogic::canonical(h.snapshot(4)), all_records) == base,
                  std::string("step order ") + (a ? "1<->2" : "3<->4"));
    }
    for (const auto &s : lib::all()) {
        const std::string text = frlogic::dsl::emit(s);
        p.require(frlogic::dsl::emit(frlogic::dsl::parse(text).scenario) == text, s.name + " round trip");
        const auto path = std::filesystem::path(FRLOGIC_SCENARIO_DIR) / (s.name + ".fr");
        std::ifstream in(path, std::ios::binary);
        std::ostringstream file;
        file << in.rdbuf();
        p.require(file.str() == text, path.string() + " differs from the library");
    }
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Probe &)>>> criteria{
        {"FR final distribution 3/4, 1/12, 1/12, 1/12", final_distribution},
        {"Statements 1', 2, 3, 4 hold with probability 1", statement_suite},
        {"Transitivity chains 1'o2, 2o3, 3o4 at 1/2 with violation 1/2", transitivity},
        {"Backward inference W=-@4 => Fbar=up@1 mined and holds", backward_inference},
        {"Premise incompatibility and the compatible pair with defect 0", premise_incompatibility},
        {"Collapse verdict table", collapse_table},
        {"Three-spin statements and the 9/10 violation", three_spins},
        {"Referee final amplitudes and correlations", referee},
        {"OR composition: branches 1/2, merged 1", or_composition},
        {"Dense float oracle agrees within 1e-9, phase formula", oracle_equivalence},
        {"Property suites", property_suites},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Probe p;
        const auto start = std::chrono::steady_clock::now();
        try {
            criteria[i].second(p);
        } catch (const std::exception &e) {
            p.require(false, std::string("exception: ") + e.what());
        }
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        p.require(ms < 1000.0, "took " + std::to_string(ms) + " ms");
        const bool ok = p.failures().empty();
        failed += ok ? 0 : 1;
        std::cout << (ok ? "PASS" : "FAIL") << " " << (i + 1) << ": " << criteria[i].first;
        std::cout << " (" << std::fixed << std::setprecision(1) << ms << " ms)\n";
        for (const auto &f : p.failures()) {
            std::cout << "    " << f << "\n";
        }
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
