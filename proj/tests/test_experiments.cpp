#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"
#include "vch/error.hpp"
#include "vch/experiments.hpp"

#include <cmath>
#include <cstdlib>

using namespace vch;

namespace {

InitialData expression(double (*fn)(double)) {
    return [fn](const BasisPtr& b) { return sample(b, [fn](double x, double) { return fn(x); }); };
}

SweepPlan short_plan(double t_end = 0.2) {
    SweepPlan plan;
    plan.base.modes = 64;
    plan.base.t_end = t_end;
    plan.theta_list = {0.1, 0.05, 0.025};
    plan.n_list = {16, 32, 64};
    plan.u0 = expression([](double x) { return 1.0 + 0.5 * std::sin(x); });
    plan.u0_description = "1 + 0.5*sin(x)";
    plan.samples = 20;
    return plan;
}

}  // namespace

TEST_CASE("plan validation") {
    SweepPlan plan = short_plan();
    CHECK_NOTHROW(validate(plan));
    plan.theta_list = {0.1, 0.1};
    CHECK_THROWS_AS(validate(plan), PreconditionError);
    plan.theta_list = {0.05, 0.1};
    CHECK_THROWS_AS(validate(plan), PreconditionError);
    plan.theta_list = {1.5, 0.1};
    CHECK_THROWS_AS(validate(plan), PreconditionError);
    plan = short_plan();
    plan.n_list = {32, 16};
    CHECK_THROWS_AS(validate(plan), PreconditionError);
    plan = short_plan();
    plan.u0 = nullptr;
    CHECK_THROWS_AS(validate(plan), PreconditionError);
    plan = short_plan();
    plan.theta_list.clear();
    CHECK_THROWS_AS(theta_sweep(plan), PreconditionError);
}

TEST_CASE("single theta gives no gaps") {
    SweepPlan plan = short_plan();
    plan.theta_list = {0.1};
    plan.include_degenerate = false;
    const SweepReport r = theta_sweep(plan);
    CHECK(r.complete());
    CHECK(r.runs.size() == 1);
    CHECK(r.gaps.empty());
    CHECK_FALSE(r.degenerate_gap.has_value());
    CHECK(r.primary_count() == 1);
}

TEST_CASE("pure phase sweep") {
    SweepPlan plan = short_plan();
    plan.u0 = expression([](double) { return 1.0; });
    const SweepReport r = theta_sweep(plan);
    REQUIRE(r.complete());
    CHECK(r.runs.size() == 4);
    CHECK(r.runs.back().label == "degenerate");
    CHECK(r.primary_count() == 3);
    for (double g : r.gaps) CHECK(g == 0.0);
    REQUIRE(r.degenerate_gap.has_value());
    CHECK(*r.degenerate_gap == 0.0);
    for (std::size_t i = 0; i < r.primary_count(); ++i) {
        const double theta = plan.theta_list[i];
        CHECK(r.negativity_max[i] == doctest::Approx(theta * theta * kTwoPi).epsilon(1e-14));
    }
    const Verdict v = nonnegativity_report(r);
    CHECK(v.holds);
    CHECK(inequality_report(r).holds);
}

TEST_CASE("theta sweep on positive data") {
    const SweepPlan plan = short_plan();
    const SweepReport r = theta_sweep(plan);
    REQUIRE(r.complete());
    CHECK(r.runs[0].label == "theta_0.1");
    CHECK(r.runs[2].label == "theta_0.025");
    CHECK(r.gaps.size() == 2);
    for (std::size_t i = 1; i < r.negativity_max.size(); ++i) CHECK(r.negativity_max[i] < r.negativity_max[i - 1]);
    CHECK(r.c_fit == doctest::Approx(r.negativity_max[0] / negativity_bound_shape(0.1)));
    CHECK(r.min_u0 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::isfinite(r.entropy_u0));
    CHECK(r.entropy_k >= 0.0);
    const Verdict v = nonnegativity_report(r);
    CHECK(v.holds);
    CHECK(v.clauses.size() == 3);
    CHECK(inequality_report(r).holds);
}

TEST_CASE("nonnegativity verdict needs positive data") {
    SweepPlan plan = short_plan(0.02);
    plan.u0 = expression([](double x) { return std::sin(x); });
    plan.include_degenerate = false;
    const SweepReport r = theta_sweep(plan);
    CHECK_THROWS_AS(nonnegativity_report(r), PreconditionError);
    CHECK(std::isnan(r.entropy_u0));
    try {
        nonnegativity_report(r);
    } catch (const PreconditionError& e) {
        CHECK(std::string(e.what()).find("u_0(x) > 0") != std::string::npos);
    }
}

TEST_CASE("verdict failures name the broken clause") {
    SweepReport r = theta_sweep(short_plan(0.02));
    const std::size_t finest = r.primary_count() - 1;
    r.runs[finest].records.back().min_u = -0.5;
    Verdict v = nonnegativity_report(r);
    CHECK_FALSE(v.holds);
    bool found = false;
    for (const auto& c : v.clauses) {
        if (!c.holds) {
            CHECK(c.name == "finest-theta minimum");
            CHECK(c.detail.find("theta_0.025") != std::string::npos);
            found = true;
        }
    }
    CHECK(found);
    CHECK(v.text().find("[FAIL] finest-theta minimum") != std::string::npos);

    SweepReport s = theta_sweep(short_plan(0.02));
    s.negativity_max[2] = 10.0;
    CHECK_FALSE(nonnegativity_report(s).holds);

    SweepReport m = theta_sweep(short_plan(0.02));
    m.runs[1].records.back().mass += 1e-6;
    const Verdict iv = inequality_report(m);
    CHECK_FALSE(iv.holds);
    CHECK(iv.text().find("[FAIL] theta_0.05 mass") != std::string::npos);
}

TEST_CASE("blow-up marks the report partial") {
    SweepPlan plan = short_plan(0.02);
    plan.base.blowup_threshold = 1.2;
    const SweepReport r = theta_sweep(plan);
    CHECK_FALSE(r.complete());
    CHECK_FALSE(r.runs[0].failure.empty());
    CHECK_FALSE(inequality_report(r).holds);
}

TEST_CASE("refinement on smooth data converges spectrally") {
    SweepPlan plan = short_plan(0.1);
    const SweepReport r = n_refinement(plan);
    REQUIRE(r.complete());
    CHECK(r.kind == SweepKind::refinement);
    CHECK(r.runs[1].label == "modes_32");
    REQUIRE(r.gaps.size() == 2);
    CHECK(r.gaps[1] < r.gaps[0]);
    CHECK(refinement_report(r).holds);
    CHECK(inequality_report(r).holds);
}

TEST_CASE("refinement of exactly representable dynamics") {
    SweepPlan plan = short_plan(0.1);
    plan.base.physics.potential.kind = PotentialKind::zero;
    plan.base.physics.mobility = {MobilityKind::constant, 0.1};
    plan.n_list = {16, 32};
    // band-limited to |k| <= 4, inside both bases
    plan.u0 = expression([](double x) { return 1.0 + 0.3 * std::cos(x) - 0.2 * std::sin(3 * x) + 0.1 * std::cos(4 * x); });
    const SweepReport r = n_refinement(plan);
    REQUIRE(r.gaps.size() == 1);
    CHECK(r.gaps[0] < 1e-10);
}

TEST_CASE("identical mode counts give a zero gap") {
    SweepPlan plan = short_plan(0.05);
    plan.n_list = {32, 32};
    const SweepReport r = n_refinement(plan);
    REQUIRE(r.gaps.size() == 1);
    CHECK(r.gaps[0] == 0.0);
    CHECK(refinement_report(r).holds);
}

TEST_CASE("trajectory gap zero-pads the coarser run") {
    SweepPlan plan = short_plan(0.05);
    plan.n_list = {16, 32};
    const SweepReport r = n_refinement(plan);
    CHECK(trajectory_gap(r.runs[0], r.runs[1]) == r.gaps[0]);
    CHECK(trajectory_gap(r.runs[1], r.runs[0]) == r.gaps[0]);
    RunResult empty;
    CHECK_THROWS_AS(trajectory_gap(empty, r.runs[0]), PreconditionError);
}

TEST_CASE("reports are deterministic across thread counts") {
    SweepPlan plan = short_plan(0.05);
    plan.threads = 1;
    const SweepReport a = theta_sweep(plan);
    plan.threads = 4;
    const SweepReport b = theta_sweep(plan);
    REQUIRE(a.runs.size() == b.runs.size());
    for (std::size_t i = 0; i < a.runs.size(); ++i) {
        REQUIRE(a.runs[i].records.size() == b.runs[i].records.size());
        for (std::size_t k = 0; k < a.runs[i].records.size(); ++k) {
            CHECK(a.runs[i].records[k].energy == b.runs[i].records[k].energy);
            CHECK(a.runs[i].records[k].min_u == b.runs[i].records[k].min_u);
        }
    }
    CHECK(a.gaps == b.gaps);
}

TEST_CASE("thread count resolution") {
    CHECK(resolve_thread_count(3) == 3);
    ::setenv("VCH_THREADS", "5", 1);
    CHECK(resolve_thread_count(0) == 5);
    ::setenv("VCH_THREADS", "junk", 1);
    CHECK(resolve_thread_count(0) >= 1);
    ::unsetenv("VCH_THREADS");
    CHECK(resolve_thread_count(0) >= 1);
}

TEST_CASE("negativity bound shape") {
    CHECK(negativity_bound_shape(0.25) == doctest::Approx(0.0625 + 0.25 + 0.5));
    CHECK(negativity_bound_shape(0.01) == doctest::Approx(0.0001 + 0.01 + 0.1));
}
