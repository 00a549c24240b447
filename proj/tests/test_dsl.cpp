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

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "frlogic/dsl.hpp"
#include "frlogic/scenario_library.hpp"

namespace {

using frlogic::ErrorKind;
namespace dsl = frlogic::dsl;

std::string read_file(const std::filesystem::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

const char *kSmall = R"(# two spins
scenario small
register a
register b
state 1/sqrt2 |up,up> + 1/sqrt2 |down,down>
step 1: Alice absorbs a in z
step 2: Bob measures b in x
statement S: if mem.Alice@1 == up then b@2 == up mode=forward
check compatible mem.Alice@1 == up b@2 == up
)";

TEST(Parse, BundledFullExperiment) {
    const auto f = dsl::parse(read_file(std::filesystem::path(FRLOGIC_SCENARIO_DIR) / "fr_full.fr"));
    EXPECT_EQ(f.scenario.steps.size(), 4U);
    EXPECT_EQ(f.scenario.statements.size(), 4U);
    EXPECT_EQ(f.transitivity_checks(), 3U);
}

TEST(Parse, EmptyInput) {
    try {
        (void)dsl::parse("");
        FAIL();
    } catch (const frlogic::ParseError &e) {
        EXPECT_EQ(e.line(), 1U);
        EXPECT_EQ(e.col(), 1U);
    }
}

TEST(Parse, NotNormalizedDeficit) {
    try {
        (void)dsl::parse("register a\nregister b\nstate 1/sqrt3 |up,up> + 1/sqrt3 |down,down>\n");
        FAIL();
    } catch (const frlogic::SemanticError &e) {
        EXPECT_EQ(e.cause(), ErrorKind::NotNormalized);
        EXPECT_EQ(e.line(), 3U);
        EXPECT_NE(std::string(e.what()).find("1/3"), std::string::npos);
    }
}

TEST(Parse, SmallScenario) {
    const auto f = dsl::parse(kSmall);
    const auto &s = f.scenario;
    EXPECT_EQ(s.name, "small");
    ASSERT_EQ(s.steps.size(), 2U);
    EXPECT_EQ(s.steps[0].style, frlogic::StepStyle::absorb);
    EXPECT_EQ(s.steps[1].style, frlogic::StepStyle::absorb);
    EXPECT_EQ(f.step_lines, (std::vector<std::size_t>{6, 7}));
    EXPECT_EQ(f.statement_lines, (std::vector<std::size_t>{8}));
    const auto r = frlogic::run_scenario(s);
    EXPECT_EQ(r.statements.front().classification, frlogic::Classification::Fails);
}

TEST(Parse, GrammarFeatures) {
    const auto f = dsl::parse(R"(
scenario features
mode float
seed 9
register a style=sign
register b
state |plus,up>
step 1: X measures a in theta(0.25) preserving collapse=sample
step 2: Y measures a,b in states(1/sqrt2 |0,0> + 1/sqrt2 |1,1>; 1/sqrt2 |0,0> - 1/sqrt2 |1,1>)
statement P: if mem.X@1 == 0 then mem.Y@2 == 1 mode=retro claim=probabilistic
check chain mem.X@1 == up p=0.5e0
check mine
joint mem.X,mem.Y @2
)");
    const auto &s = f.scenario;
    EXPECT_EQ(s.mode, frlogic::Mode::floating);
    EXPECT_EQ(s.seed, 9U);
    EXPECT_EQ(s.registers[0].style, frlogic::LabelStyle::sign);
    EXPECT_EQ(s.steps[0].style, frlogic::StepStyle::collapse);
    EXPECT_EQ(s.steps[0].collapse_base, frlogic::StepStyle::preserve);
    EXPECT_FALSE(s.steps[0].collapse_outcome);
    EXPECT_EQ(s.steps[1].basis.kind, frlogic::BasisSpec::Kind::states);
    EXPECT_EQ(s.steps[1].style, frlogic::StepStyle::preserve);
    EXPECT_EQ(s.statements[0].statement.claim, frlogic::Claim::probabilistic);
    EXPECT_EQ(s.statements[0].statement.mode, frlogic::EvalMode::retrodictive);
    EXPECT_EQ(dsl::parse(dsl::emit(s)).scenario.steps.size(), 2U);
    EXPECT_EQ(dsl::emit(dsl::parse(dsl::emit(s)).scenario), dsl::emit(s));
}

struct BadCase {
    const char *text;
    std::size_t line;
    bool semantic;
    ErrorKind cause;
};

TEST(Parse, PositionedErrors) {
    const std::vector<BadCase> cases{
        {"register a\nstate |up>\nstep 1: A absorbs nobody in z\n", 3, true, ErrorKind::UnknownRegister},
        {"register a\nregister b\nstate |up,up>\nstep 1: A absorbs a in z\nstep 1: B absorbs b in z\n", 5, true,
         ErrorKind::InvalidArgument},
        {"register a\nstate |up>\nstep 2: A absorbs a in z\n", 3, true, ErrorKind::InvalidArgument},
        {"register a\nstate |up>\nstep 1: A absorbs a in z\nstatement S: if mem.B@1 == up then a@0 == up\n", 4, true,
         ErrorKind::UnknownRegister},
        {"register a\nstate |up>\ncheck transitivity S T\n", 3, true, ErrorKind::InvalidArgument},
        {"register a\nstate |up>\nstep 1: A absorbs a in y\n", 3, false, ErrorKind::ParseError},
        {"register a\nstate 1/sqrt |up>\n", 2, false, ErrorKind::ParseError},
        {"register a\nstate |sideways>\n", 2, false, ErrorKind::ParseError},
        {"register a\nstate |up>\nbogus\n", 3, false, ErrorKind::ParseError},
        {"register a\nstate |up,down>\n", 2, true, ErrorKind::RegisterMismatch},
    };
    for (const auto &c : cases) {
        try {
            (void)dsl::parse(c.text);
            ADD_FAILURE() << "accepted: " << c.text;
        } catch (const frlogic::ParseError &e) {
            EXPECT_FALSE(c.semantic) << c.text << " -> " << e.what();
            EXPECT_EQ(e.line(), c.line) << c.text;
            EXPECT_GE(e.col(), 1U);
        } catch (const frlogic::SemanticError &e) {
            EXPECT_TRUE(c.semantic) << c.text << " -> " << e.what();
            EXPECT_EQ(e.line(), c.line) << c.text;
            EXPECT_EQ(e.cause(), c.cause) << c.text << " -> " << e.what();
        }
    }
}

TEST(Parse, ParseErrorColumn) {
    try {
        (void)dsl::parse("register a\nstate |up>\nstep 1: A absorbs a on z\n");
        FAIL();
    } catch (const frlogic::ParseError &e) {
        EXPECT_EQ(e.line(), 3U);
        EXPECT_EQ(e.col(), 21U);
    }
}

TEST(Parse, FuzzNeverCrashes) {
    std::mt19937 rng(2026);
    const std::string corpus = dsl::emit(frlogic::library::fr_full());
    std::uniform_int_distribution<int> byte(0, 255);
    for (int i = 0; i < 3000; ++i) {
        std::string text;
        if (i % 2 == 0) {
            const std::size_t len = rng() % 200;
            for (std::size_t j = 0; j < len; ++j) {
                text.push_back(static_cast<char>(byte(rng)));
            }
        } else {
            text = corpus;
            const int edits = 1 + static_cast<int>(rng() % 6);
            for (int e = 0; e < edits; ++e) {
                const std::size_t pos = rng() % text.size();
                switch (rng() % 3) {
                case 0: text[pos] = static_cast<char>(byte(rng)); break;
                case 1: text.erase(pos, 1 + rng() % 8); break;
                default: text.insert(pos, 1, "|<>,;()@=+-/*#\n 0123456789"[rng() % 27]); break;
                }
                if (text.empty()) {
                    text = "x";
                }
            }
        }
        try {
            auto f = dsl::parse(text);
            (void)frlogic::run_scenario(f.scenario);
        } catch (const frlogic::Error &) {
        }
    }
}

TEST(Emit, CorpusRoundTrip) {
    for (const auto &s : frlogic::library::all()) {
        const std::string text = dsl::emit(s);
        const auto again = dsl::parse(text);
        EXPECT_EQ(dsl::emit(again.scenario), text) << s.name;
        EXPECT_EQ(again.scenario.steps.size(), s.steps.size());
        EXPECT_EQ(again.scenario.statements.size(), s.statements.size());
        EXPECT_EQ(again.scenario.checks.size(), s.checks.size());
    }
}

TEST(Emit, CorpusFilesMatchLibrary) {
    for (const auto &s : frlogic::library::all()) {
        const auto path = std::filesystem::path(FRLOGIC_SCENARIO_DIR) / (s.name + ".fr");
        ASSERT_TRUE(std::filesystem::exists(path)) << path;
        EXPECT_EQ(read_file(path), dsl::emit(s)) << s.name;
    }
}

} // namespace
