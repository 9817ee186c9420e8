#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cylarm/sim.hpp"

using namespace cylarm;
using std::numbers::pi;

namespace {

const ScenarioSpec& scenario(const std::vector<ScenarioSpec>& all, const std::string& name) {
    for (const auto& s : all) {
        if (s.name == name) return s;
    }
    throw std::runtime_error("missing scenario " + name);
}

ControllerSetup asmc() {
    ControllerSetup c;
    c.kind = ControllerKind::asmc_nn;
    c.net = make_net_config(NetBounds::defaults());
    return c;
}

}  // namespace

TEST_SUITE("sim") {

TEST_CASE("rk4 on the harmonic oscillator") {
    using V2 = Eigen::Vector2d;
    auto f = [](double, const V2& x) { return V2(x[1], -x[0]); };
    const double dt = 1e-3;
    const int steps = static_cast<int>(std::lround(2 * pi / dt));
    V2 x(1.0, 0.0);
    for (int i = 0; i < steps; ++i) x = rk4_step(f, x, i * dt, dt);
    const double t_end = steps * dt;
    CHECK(std::abs(x[0] - std::cos(t_end)) < 1e-8);
    CHECK(std::abs(x[1] + std::sin(t_end)) < 1e-8);
    CHECK(std::abs(x[0] - 1.0) < 1e-6);

    auto local = [&](double h) { return (rk4_step(f, V2(1, 0), 0.0, h) - V2(std::cos(h), -std::sin(h))).norm(); };
    const double ratio = local(0.1) / local(0.05);
    CHECK(ratio >= 28.0);
    CHECK(ratio <= 36.0);

    auto zero = [](double, const V2&) { return V2(0, 0); };
    CHECK(rk4_step(zero, V2(3, 4), 0.0, 0.1) == V2(3, 4));
}

TEST_CASE("reference signals") {
    const auto all = paper_scenarios();
    const ReferenceSignal& sine = scenario(all, "sinusoidal").reference;
    CHECK((sine.at(0.25).q - Vec3::Ones()).norm() < 1e-15);
    CHECK((sine.at(0.0).qdot - Vec3::Constant(2 * pi)).norm() < 1e-12);
    // Derivatives agree with central differences.
    const double t = 0.37, h = 1e-5;
    const Vec3 fd_v = (sine.at(t + h).q - sine.at(t - h).q) / (2 * h);
    const Vec3 fd_a = (sine.at(t + h).qdot - sine.at(t - h).qdot) / (2 * h);
    CHECK((fd_v - sine.at(t).qdot).norm() < 1e-6);
    CHECK((fd_a - sine.at(t).qddot).norm() < 1e-5);

    const ReferenceSignal c = scenario(all, "constant").reference;
    CHECK(c.at(1.3).q == Vec3(pi / 3, pi / 2, pi));
    CHECK(c.at(1.3).qdot == Vec3::Zero());
}

TEST_CASE("table reference") {
    const ReferenceSignal r =
        ReferenceSignal::table({0.0, 1.0, 2.0, 3.0}, {Vec3::Zero(), Vec3(1, 2, 0), Vec3(0, 2, 1), Vec3(1, 0, 1)});
    CHECK(r.at(1.0).q == Vec3(1, 2, 0));
    CHECK(r.at(-1.0).q == Vec3::Zero());
    CHECK(r.at(5.0).q == Vec3(1, 0, 1));
    // Natural end conditions.
    CHECK(r.at(0.0 + 1e-12).qddot.norm() < 1e-9);
    const double t = 1.6, h = 1e-6;
    CHECK(((r.at(t + h).q - r.at(t - h).q) / (2 * h) - r.at(t).qdot).norm() < 1e-6);
    CHECK(((r.at(t + h).qdot - r.at(t - h).qdot) / (2 * h) - r.at(t).qddot).norm() < 1e-5);
    // Velocity is continuous across a knot.
    CHECK((r.at(2.0 - 1e-9).qdot - r.at(2.0 + 1e-9).qdot).norm() < 1e-6);
    CHECK_THROWS_AS(ReferenceSignal::table({0.0, 0.0}, {Vec3::Zero(), Vec3::Zero()}), std::invalid_argument);
}

TEST_CASE("disturbance profile") {
    const auto all = paper_scenarios();
    const DisturbanceProfile d = *scenario(all, "disturbance").disturbance;
    CHECK(d.at(0.4) == Vec3::Zero());
    CHECK(d.at(0.6) == Vec3(0, 0, 50));
    DisturbanceProfile pulse = d;
    pulse.shape = DisturbanceProfile::Shape::pulse;
    pulse.duration = 0.1;
    CHECK(pulse.at(0.55) == Vec3(0, 0, 50));
    CHECK(pulse.at(0.65) == Vec3::Zero());
    pulse.joint = 4;
    CHECK_THROWS_AS(pulse.validate(), std::invalid_argument);
}

TEST_CASE("built-in scenarios") {
    const auto all = paper_scenarios();
    REQUIRE(all.size() == 4);
    CHECK(all[0].name == "constant");
    CHECK(all[1].name == "uncertain");
    CHECK(all[2].name == "sinusoidal");
    CHECK(all[3].name == "disturbance");
    for (const auto& s : all) {
        CHECK(s.horizon == 2.0);
        CHECK(s.dt == 1e-3);
        CHECK(s.initial.q == Vec3::Zero());
        CHECK(s.initial.qdot == Vec3::Zero());
        CHECK(s.step_count() == 2000);
    }
    CHECK(all[1].mass_factors == Vec3(1.2, 0.8, 1.2));
    CHECK(!all[0].disturbance);
}

TEST_CASE("perturb params") {
    const ManipulatorParams p;
    const ManipulatorParams same = perturb_params(p, Vec3::Ones());
    CHECK(same.m1 == p.m1);
    CHECK(same.m2 == p.m2);
    CHECK(same.m3 == p.m3);
    const ManipulatorParams doubled = perturb_params(p, Vec3(2, 1, 1));
    CHECK(doubled.m1 == 2 * p.m1);
    CHECK(doubled.m2 == p.m2);
    CHECK(doubled.I3 == p.I3);
    const ManipulatorParams heavy = perturb_params(p, Vec3(1, 2, 1));
    CHECK(gravity_vector(heavy)[1] ==
          doctest::Approx(gravity_vector(p)[1] * (2 * p.m2 + p.m3) / (p.m2 + p.m3)));
    CHECK_THROWS_AS(perturb_params(p, Vec3(1, 0, 1)), std::invalid_argument);
}

TEST_CASE("run starting on the reference stays there") {
    ScenarioSpec spec = paper_scenarios()[0];
    spec.initial.q = spec.reference.target();
    const SimTrace tr = run_scenario(spec, asmc(), ManipulatorParams{});
    REQUIRE(tr.completed());
    double worst = 0.0;
    for (const auto& r : tr.records) worst = std::max(worst, r.e.norm());
    CHECK(worst < 1e-6);
}

TEST_CASE("trace shape and decomposition") {
    const SimTrace tr = run_scenario(paper_scenarios()[0], asmc(), ManipulatorParams{});
    REQUIRE(tr.completed());
    REQUIRE(tr.records.size() == 2001);
    for (std::size_t i = 0; i < tr.records.size(); ++i) {
        const auto& r = tr.records[i];
        CHECK(r.t == static_cast<double>(i) * 1e-3);
        CHECK(r.control.tau_total == (r.control.tau_eq + r.control.tau_sw) + r.control.tau_nn);
        CHECK(r.tau == r.control.tau_total);
    }
    REQUIRE(tr.final_weights);
    CHECK(tr.final_weights->norm() > 0.0);
}

TEST_CASE("constant scenario settles within half a second") {
    const auto spec = paper_scenarios()[0];
    const SimTrace tr = run_scenario(spec, asmc(), ManipulatorParams{});
    REQUIRE(tr.completed());
    const Vec3 target = spec.reference.target();
    for (const auto& r : tr.records) {
        if (r.t < 0.5) continue;
        for (int j = 0; j < 3; ++j) CHECK(std::abs(r.e[j]) < 0.01 * std::abs(target[j]));
    }
}

TEST_CASE("determinism and disturbance superposition") {
    const auto all = paper_scenarios();
    const SimTrace a = run_scenario(all[0], asmc(), ManipulatorParams{});
    const SimTrace b = run_scenario(all[0], asmc(), ManipulatorParams{});
    const SimTrace d = run_scenario(all[3], asmc(), ManipulatorParams{});
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].q == b.records[i].q);
        CHECK(a.records[i].V == b.records[i].V);
        if (a.records[i].t < 0.5) {
            CHECK(d.records[i].q == a.records[i].q);
            CHECK(d.records[i].control.tau_total == a.records[i].control.tau_total);
        }
    }
    CHECK(*a.final_weights == *b.final_weights);
}

TEST_CASE("pd records its torque as the switching term") {
    ControllerSetup pd;
    pd.kind = ControllerKind::pd;
    const SimTrace tr = run_scenario(paper_scenarios()[0], pd, ManipulatorParams{});
    REQUIRE(tr.completed());
    CHECK(!tr.final_weights);
    for (const auto& r : tr.records) {
        CHECK(r.control.tau_eq == Vec3::Zero());
        CHECK(r.control.tau_nn == Vec3::Zero());
    }
    CHECK(tr.records[0].control.tau_sw == pd.pd.kp.cwiseProduct(Vec3(pi / 3, pi / 2, pi)));
}

TEST_CASE("torque limit clamps the applied torque only") {
    ScenarioSpec spec = paper_scenarios()[0];
    spec.torque_limit = Vec3::Constant(500.0);
    ControllerSetup smc;
    smc.kind = ControllerKind::smc;
    const SimTrace tr = run_scenario(spec, smc, ManipulatorParams{});
    bool clipped = false;
    for (const auto& r : tr.records) {
        CHECK(r.tau.cwiseAbs().maxCoeff() <= 500.0);
        clipped = clipped || r.tau != r.control.tau_total;
    }
    CHECK(clipped);
}

TEST_CASE("literal reaching sign diverges") {
    ControllerSetup c = asmc();
    c.smc.reaching_sign = -1;
    const SimTrace tr = run_scenario(paper_scenarios()[0], c, ManipulatorParams{});
    CHECK_FALSE(tr.completed());
    CHECK(!tr.diagnostic.empty());
    CHECK(tr.records.size() < 2001);
}

TEST_CASE("singular plant aborts with a diagnostic") {
    ScenarioSpec spec = paper_scenarios()[0];
    spec.initial.q = Vec3(0, 0, ManipulatorParams{}.I3 / (4 * ManipulatorParams{}.m2));
    ControllerSetup smc;
    smc.kind = ControllerKind::smc;
    const SimTrace tr = run_scenario(spec, smc, ManipulatorParams{});
    CHECK(tr.status == SimStatus::singular_inertia);
    CHECK(tr.records.size() == 1);
}

TEST_CASE("scenario validation") {
    ScenarioSpec s = paper_scenarios()[0];
    s.dt = 3.0;
    CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("dt"), std::invalid_argument);
    s = paper_scenarios()[0];
    s.horizon = -1;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = paper_scenarios()[0];
    s.mass_factors = Vec3(1, -1, 1);
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

}
