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

#include <gtest/gtest.h>

#include "frlogic/measurement_engine.hpp"
#include "frlogic/scenario.hpp"
#include "frlogic/scenario_library.hpp"

namespace {

using frlogic::BasisSpec;
using frlogic::ErrorKind;
using frlogic::MeasurementStep;
using frlogic::QuadAmp;
using frlogic::StepStyle;
using State = frlogic::StateVector<QuadAmp>;

State psi0() { return frlogic::initial_state<QuadAmp>(frlogic::library::fr_full()); }

std::vector<MeasurementStep> fr_steps() { return frlogic::library::fr_full().steps; }

frlogic::History<QuadAmp> fr_history() { return frlogic::run_experiment(psi0(), fr_steps()); }

ErrorKind kind_of(const std::function<void()> &f) {
    try {
        f();
    } catch (const frlogic::Error &e) {
        return e.kind();
    }
    return ErrorKind::InvalidArgument;
}

TEST(ApplyStep, AbsorbRelabelsWithoutChangingAmplitudes) {
    const State s1 = frlogic::apply_step(psi0(), fr_steps()[0]);
    EXPECT_EQ(s1.registers()[0].name, "mem.Fbar");
    EXPECT_TRUE(s1.registers()[0].is_record());
    EXPECT_EQ(s1.terms(), psi0().terms());
}

TEST(ApplyStep, WignerPreserveEntanglesRecord) {
    const auto h = fr_history();
    const State &s3 = h.snapshot(3);
    EXPECT_EQ(s3.size(), 3U);
    EXPECT_EQ(s3.norm_sq(), QuadAmp(1));
    const State minus = frlogic::project(s3, "mem.Wbar", BasisSpec::z_basis(), 1);
    EXPECT_EQ(minus.norm_sq(), QuadAmp(mpq_class(1, 6)));
    for (const auto &[key, amp] : minus.terms()) {
        EXPECT_EQ(minus.unpack(key)[1], 0U) << "F record must read up in the minus branch";
    }
}

TEST(ApplyStep, CollapseKeepsOneTermRenormalized) {
    MeasurementStep st = fr_steps()[0];
    st.collapse_base = st.style;
    st.style = StepStyle::collapse;
    st.collapse_outcome = 0;
    frlogic::CollapseEntry<QuadAmp> entry;
    const State s = frlogic::apply_step(psi0(), st, nullptr, &entry);
    EXPECT_EQ(s.terms().size(), 1U);
    EXPECT_EQ(s.norm_sq(), QuadAmp(1));
    EXPECT_EQ(s.amplitude({0, 1}), QuadAmp(1));
    EXPECT_EQ(entry.probability, QuadAmp(mpq_class(1, 3)));
}

TEST(ApplyStep, Errors) {
    const State s1 = frlogic::apply_step(psi0(), fr_steps()[0]);
    MeasurementStep again = fr_steps()[0];
    again.targets = {"mem.Fbar"};
    EXPECT_EQ(kind_of([&] { (void)frlogic::apply_step(s1, again); }), ErrorKind::TargetIsRecord);

    MeasurementStep zero = fr_steps()[1];
    zero.collapse_base = StepStyle::absorb;
    zero.style = StepStyle::collapse;
    zero.collapse_outcome = 0;
    const State up = frlogic::make_state<QuadAmp>({frlogic::make_register("barred"), frlogic::make_register("unbarred")},
                                                  {{{0, 1}, QuadAmp(1)}});
    EXPECT_EQ(kind_of([&] { (void)frlogic::apply_step(up, zero); }), ErrorKind::ZeroProbabilityCollapse);

    MeasurementStep unknown = fr_steps()[0];
    unknown.targets = {"nobody"};
    EXPECT_EQ(kind_of([&] { (void)frlogic::apply_step(psi0(), unknown); }), ErrorKind::UnknownRegister);
}

TEST(RunExperiment, FinalDistribution) {
    const auto h = fr_history();
    const auto joint = frlogic::joint_probabilities(
        frlogic::canonical(h.snapshot(4)), {{"mem.Wbar", BasisSpec::z_basis()}, {"mem.W", BasisSpec::z_basis()}});
    EXPECT_EQ(joint.at({0, 0}), QuadAmp(mpq_class(3, 4)));
    EXPECT_EQ(joint.at({0, 1}), QuadAmp(mpq_class(1, 12)));
    EXPECT_EQ(joint.at({1, 0}), QuadAmp(mpq_class(1, 12)));
    EXPECT_EQ(joint.at({1, 1}), QuadAmp(mpq_class(1, 12)));
}

TEST(RunExperiment, EmptyStepList) {
    const auto h = frlogic::run_experiment(psi0(), {});
    EXPECT_EQ(h.snapshots.size(), 1U);
    EXPECT_EQ(h.snapshot(0), psi0());
}

TEST(RunExperiment, ThreeSpinBranches) {
    const auto scn = frlogic::library::abc("1/sqrt2", "1/sqrt2", false, "abc");
    const auto h = frlogic::run_history<QuadAmp>(scn);
    const State last = frlogic::canonical(h.snapshot(h.step_count()));
    ASSERT_EQ(last.terms().size(), 2U);
    for (const auto &[key, amp] : last.terms()) {
        EXPECT_EQ(amp * amp, QuadAmp(mpq_class(1, 2)));
    }
}

TEST(RunExperiment, StepIndicesMustBeConsecutive) {
    auto steps = fr_steps();
    steps[1].index = 5;
    EXPECT_THROW((void)frlogic::run_experiment(psi0(), steps), frlogic::Error);
}

TEST(RunExperiment, SampledCollapseIsSeeded) {
    auto steps = fr_steps();
    steps[0].collapse_base = steps[0].style;
    steps[0].style = StepStyle::collapse;
    const auto a = frlogic::run_experiment(psi0(), steps, 42U);
    const auto b = frlogic::run_experiment(psi0(), steps, 42U);
    ASSERT_EQ(a.collapse_log.size(), 1U);
    EXPECT_TRUE(a.collapse_log.front().sampled);
    EXPECT_EQ(a.collapse_log.front().outcome, b.collapse_log.front().outcome);
    EXPECT_EQ(a.snapshot(4), b.snapshot(4));
    EXPECT_THROW((void)frlogic::run_experiment(psi0(), steps), frlogic::Error);
}

TEST(BackEvolve, WMinusTracesToBarredUp) {
    const auto h = fr_history();
    const State projected = frlogic::project(h.snapshot(4), "mem.W", BasisSpec::z_basis(), 1);
    const State back = frlogic::canonical(frlogic::back_evolve(h, projected, 4, 1));
    ASSERT_EQ(back.registers()[0].name, "mem.Fbar");
    EXPECT_TRUE(back.amplitude({1, 0}).is_zero());
    EXPECT_TRUE(back.amplitude({1, 1}).is_zero());
    EXPECT_EQ(back.amplitude({0, 0}), -back.amplitude({0, 1}));
    EXPECT_FALSE(back.amplitude({0, 0}).is_zero());
}

TEST(BackEvolve, WbarMinusTracesToFUp) {
    const auto h = fr_history();
    const State projected = frlogic::project(h.snapshot(3), "mem.Wbar", BasisSpec::z_basis(), 1);
    const State back = frlogic::canonical(frlogic::back_evolve(h, projected, 3, 2));
    EXPECT_TRUE(back.amplitude({0, 1}).is_zero());
    EXPECT_TRUE(back.amplitude({1, 1}).is_zero());
    EXPECT_EQ(back.amplitude({0, 0}), -back.amplitude({1, 0}));
    EXPECT_EQ(back.norm_sq(), QuadAmp(mpq_class(1, 6)));
}

TEST(BackEvolve, ZeroStepsIsIdentity) {
    const auto h = fr_history();
    EXPECT_EQ(frlogic::back_evolve(h, h.snapshot(2), 2, 2), h.snapshot(2));
}

TEST(BackEvolve, FullHistoryReturnsToInitial) {
    const auto h = fr_history();
    EXPECT_EQ(frlogic::canonical(frlogic::back_evolve(h, h.snapshot(4), 4, 0)), frlogic::canonical(h.snapshot(0)));
}

TEST(BackEvolve, Errors) {
    const auto h = fr_history();
    const State decorrelated = frlogic::project(h.snapshot(3), "mem.Wbar", BasisSpec::x_basis(), 0);
    EXPECT_EQ(kind_of([&] { (void)frlogic::back_evolve(h, decorrelated, 3, 2); }), ErrorKind::OutsideRange);

    auto steps = fr_steps();
    steps[1].collapse_base = steps[1].style;
    steps[1].style = StepStyle::collapse;
    steps[1].collapse_outcome = 1;
    const auto hc = frlogic::run_experiment(psi0(), steps);
    EXPECT_EQ(kind_of([&] { (void)frlogic::back_evolve(hc, hc.snapshot(3), 3, 1); }), ErrorKind::NonUnitarySegment);
    EXPECT_NO_THROW((void)frlogic::back_evolve(hc, hc.snapshot(4), 4, 2));
}

} // namespace
