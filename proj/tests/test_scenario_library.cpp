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
#include <numbers>

#include <gtest/gtest.h>

#include "frlogic/scenario.hpp"
#include "frlogic/scenario_library.hpp"
#include "oracle/dense_oracle.hpp"

namespace {

using frlogic::Classification;
using frlogic::Mode;
using frlogic::QuadAmp;
namespace lib = frlogic::library;

bool float_only(const frlogic::Scenario &s) { return s.mode == Mode::floating; }

const frlogic::StatementResult &statement(const frlogic::ScenarioResult &r, const std::string &id) {
    for (const auto &s : r.statements) {
        if (s.id == id) {
            return s;
        }
    }
    throw std::runtime_error("no statement " + id);
}

TEST(Library, EveryScenarioMeetsItsExpectationsInBothModes) {
    for (const auto &s : lib::all()) {
        for (Mode m : {Mode::exact, Mode::floating}) {
            if (m == Mode::exact && float_only(s)) {
                continue;
            }
            const auto r = frlogic::run_scenario(s, m);
            EXPECT_TRUE(r.all_matched()) << s.name << " in " << frlogic::to_string(m);
            for (const auto &c : r.checks) {
                EXPECT_TRUE(c.error.empty()) << s.name << ": " << c.error;
            }
        }
    }
}

TEST(Library, CorpusNamesUnique) {
    std::set<std::string> names;
    for (const auto &s : lib::all()) {
        EXPECT_TRUE(names.insert(s.name).second) << s.name;
    }
    EXPECT_EQ(names.size(), 16U);
}

TEST(Library, FullExperimentJoint) {
    const auto r = frlogic::run_scenario(lib::fr_full());
    ASSERT_TRUE(r.joint);
    std::map<std::string, std::string> joint;
    for (const auto &[k, v] : r.joint->probabilities) {
        joint[k] = v.str();
    }
    EXPECT_EQ(joint["minus_minus"], "1/12");
    EXPECT_EQ(joint["plus_plus"], "3/4");
    EXPECT_EQ(statement(r, "S4").classification, Classification::Holds);
}

TEST(Library, SubExperiment) {
    const auto r = frlogic::run_scenario(lib::fr_sub34());
    EXPECT_EQ(statement(r, "S3").classification, Classification::Holds);
    EXPECT_EQ(statement(r, "S4m").classification, Classification::Probabilistic);
    EXPECT_EQ(*statement(r, "S4m").probability.exact, QuadAmp(mpq_class(1, 2)));
}

TEST(Library, ThreeSpinVariants) {
    const auto weighted = frlogic::run_scenario(lib::abc("sqrt(1/10)", "sqrt(9/10)", false, "w"));
    EXPECT_TRUE(weighted.all_matched());
    const auto &t = weighted.checks.front();
    ASSERT_EQ(t.kind, "transitivity");
    bool found = false;
    for (const auto &[k, v] : t.numbers) {
        if (k == "violation") {
            EXPECT_EQ(*v.exact, QuadAmp(mpq_class(9, 10)));
            found = true;
        }
    }
    EXPECT_TRUE(found);
    const auto single = frlogic::run_scenario(lib::abc("1", "0", false, "s"));
    EXPECT_EQ(statement(single, "SB").classification, Classification::Holds);
    EXPECT_THROW((void)lib::abc("1/2", "1/2", false, "bad"), frlogic::Error);
}

TEST(Library, CollapseTable) {
    const auto variants = lib::fr_collapse_variants();
    ASSERT_EQ(variants.size(), 3U);
    const std::vector<std::vector<Classification>> table{
        {Classification::Fails, Classification::Vacuous, Classification::Vacuous},
        {Classification::Fails, Classification::Holds, Classification::Holds},
        {Classification::Fails, Classification::Vacuous, Classification::Fails},
    };
    for (std::size_t i = 0; i < 3; ++i) {
        const auto r = frlogic::run_scenario(variants[i]);
        EXPECT_EQ(statement(r, "S2").classification, table[i][0]) << variants[i].name;
        EXPECT_EQ(statement(r, "S3").classification, table[i][1]) << variants[i].name;
        EXPECT_EQ(statement(r, "S4").classification, table[i][2]) << variants[i].name;
    }
}

TEST(Library, StepOrderInvariance) {
    const auto base = frlogic::run_scenario(lib::fr_full());
    for (auto [a, b] : {std::pair{true, false}, std::pair{false, true}, std::pair{true, true}}) {
        const auto r = frlogic::run_scenario(lib::fr_reordered(a, b));
        ASSERT_TRUE(r.joint);
        ASSERT_EQ(r.joint->probabilities.size(), base.joint->probabilities.size());
        for (std::size_t i = 0; i < r.joint->probabilities.size(); ++i) {
            EXPECT_EQ(r.joint->probabilities[i].first, base.joint->probabilities[i].first);
            EXPECT_EQ(*r.joint->probabilities[i].second.exact, *base.joint->probabilities[i].second.exact);
        }
    }
}

TEST(Library, RefereeObservationLeavesMarginalsAlone) {
    const oracle::Simulation full(lib::fr_full());
    const oracle::Simulation ref(lib::referee_fr_observation());
    const auto a = full.joint(3, {"mem.F", "mem.Wbar"});
    const auto b = ref.joint(4, {"mem.F", "mem.Wbar"});
    ASSERT_EQ(a.size(), b.size());
    for (const auto &[k, v] : a) {
        EXPECT_NEAR(v, b.at(k), 1e-12);
    }
}

TEST(Library, PhaseScenarioMatchesOracle) {
    for (double phi : {0.0, std::numbers::pi / 2, std::numbers::pi, 1.0}) {
        const auto scn = lib::fr_phase(phi);
        const oracle::Simulation sim(scn);
        const double o = sim.conditional(scn.statements.front().statement);
        const auto r = frlogic::run_scenario(scn);
        EXPECT_NEAR(statement(r, "S2").probability.value, o, 1e-9) << phi;
    }
}

TEST(Oracle, StatementsChainsAndStatesAgree) {
    for (const auto &s : lib::all()) {
        const oracle::Simulation sim(s);
        const auto r = frlogic::run_scenario(s, Mode::floating);
        for (std::size_t i = 0; i < s.statements.size(); ++i) {
            const auto &st = s.statements[i].statement;
            if (sim.chain(st.premises) < 1e-12) {
                EXPECT_EQ(r.statements[i].classification, Classification::Vacuous) << s.name << " " << st.id;
                continue;
            }
            EXPECT_NEAR(r.statements[i].probability.value, sim.conditional(st), 1e-9) << s.name << " " << st.id;
        }
        for (std::size_t i = 0; i < s.checks.size(); ++i) {
            if (const auto *c = std::get_if<frlogic::ChainCheck>(&s.checks[i])) {
                EXPECT_NEAR(r.checks[i].numbers.front().second.value, sim.chain(c->events), 1e-9) << s.name;
            }
        }
        for (std::size_t k = 0; k <= sim.steps(); ++k) {
            EXPECT_NEAR(sim.state(k).squaredNorm(), r.snapshots[k].norm_sq.value, 1e-9);
        }
    }
}

TEST(Oracle, RefereeAmplitudes) {
    const auto zx = lib::referee_math("z", "x");
    const oracle::Simulation sim(zx);
    const double s6 = std::sqrt(6.0);
    EXPECT_NEAR(sim.amplitude(2, {0, 1}).real(), 2 / s6, 1e-12);
    EXPECT_NEAR(sim.amplitude(2, {0, 0}).real(), 1 / s6, 1e-12);
    EXPECT_NEAR(sim.amplitude(2, {1, 0}).real(), -1 / s6, 1e-12);
    EXPECT_NEAR(std::abs(sim.amplitude(2, {1, 1})), 0.0, 1e-12);
}

} // namespace
