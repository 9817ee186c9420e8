#include <doctest.h>

#include <numbers>
#include <random>

#include "cylarm/dynamics.hpp"
#include "support.hpp"

using namespace cylarm;
using std::numbers::pi;

TEST_SUITE("dynamics") {

TEST_CASE("inertia matrix at theta1 = 0, q3 = 1") {
    const ManipulatorParams p;
    const Mat3 A = inertia_matrix(p, Vec3(0, 0, 1));
    CHECK(A(0, 0) == doctest::Approx(testing::oracle_A11(p, 0, 1)).epsilon(1e-14));
    CHECK(A(0, 0) == doctest::Approx(-49.528888).epsilon(1e-8));
    CHECK(A(1, 1) == doctest::Approx(23.735183).epsilon(1e-8));
    CHECK(A(2, 2) == doctest::Approx(25.264444).epsilon(1e-8));
    CHECK(A(0, 2) == 0.0);
    CHECK(A(2, 0) == 0.0);
}

TEST_CASE("inertia matrix at theta1 = pi/2, q3 = 0") {
    const ManipulatorParams p;
    const Mat3 A = inertia_matrix(p, Vec3(pi / 2, 0, 0));
    CHECK(A(0, 0) == doctest::Approx(1.0));
    CHECK(A(0, 2) == doctest::Approx(0.0));
    CHECK(A(2, 2) == doctest::Approx(72.734810).epsilon(1e-8));
}

TEST_CASE("coupling entries vanish at the origin") {
    ManipulatorParams p;
    p.m1 = 3.0;
    p.m2 = 7.0;
    p.I3 = 2.5;
    const Mat3 A = inertia_matrix(p, Vec3::Zero());
    CHECK(A(0, 2) == 0.0);
    CHECK(A(2, 0) == 0.0);
    CHECK(A(0, 0) == 2.5);
}

TEST_CASE("zero pattern and entries on random states") {
    const ManipulatorParams p;
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int i = 0; i < 10000; ++i) {
        const Vec3 q(u(rng), u(rng), u(rng));
        const Mat3 A = inertia_matrix(p, q);
        CHECK(A(0, 1) == 0.0);
        CHECK(A(1, 0) == 0.0);
        CHECK(A(1, 2) == 0.0);
        CHECK(A(2, 1) == 0.0);
        CHECK(A(0, 0) == doctest::Approx(testing::oracle_A11(p, q[0], q[2])).epsilon(1e-12));
        CHECK(A(0, 2) == doctest::Approx(testing::oracle_A13(p, q[0], q[2])).epsilon(1e-12));
        CHECK(A(2, 0) == doctest::Approx(testing::oracle_A31(p, q[0])).epsilon(1e-12));
        CHECK(A(2, 2) == doctest::Approx(testing::oracle_A33(p, q[0])).epsilon(1e-12));

        JointState x{q, Vec3(u(rng), u(rng), u(rng))};
        CHECK(velocity_coupling(p, x)[1] == 0.0);
    }
}

TEST_CASE("velocity coupling") {
    const ManipulatorParams p;
    SUBCASE("theta1 = pi/2, q3 = 2, unit rates") {
        const Vec3 v = velocity_coupling(p, {Vec3(pi / 2, 0, 2), Vec3(1, 1, 1)});
        // B11 = 2 m1, B13 = m2, B31 = 4 m1; the C terms carry cos(theta1) = 0.
        CHECK(v[0] == doctest::Approx(2 * p.m1 + p.m2));
        CHECK(v[0] == doctest::Approx(85.367032).epsilon(1e-8));
        CHECK(v[1] == 0.0);
        CHECK(v[2] == doctest::Approx(145.469620).epsilon(1e-8));
    }
    SUBCASE("zero rates") {
        CHECK(velocity_coupling(p, {Vec3(0.3, 0.1, 0.7), Vec3::Zero()}) == Vec3::Zero());
    }
    SUBCASE("only q2 moving") {
        CHECK(velocity_coupling(p, {Vec3(pi / 4, 0, 1), Vec3(0, 1, 0)}).norm() == 0.0);
    }
    SUBCASE("cross term uses theta1' q3'") {
        const double th = pi / 4, q3 = 1.5;
        const Vec3 v = velocity_coupling(p, {Vec3(th, 0, q3), Vec3(2, 0, 3)});
        const double s = std::sin(th), c = std::cos(th);
        const double b11 = (p.m1 * s - 4 * p.m2 * c) * q3, b13 = -p.m1 * c + p.m2 * s;
        const double b31 = 2 * q3 * (p.m1 * s - p.m2 * c);
        const double c12 = -(p.m1 + p.m2) * s * c * q3, c32 = -(p.m1 + p.m2) * s * c;
        CHECK(v[0] == doctest::Approx(b11 * 4 + b13 * 9 + c12 * 6));
        CHECK(v[2] == doctest::Approx(b31 * 4 + c32 * 6));
    }
}

TEST_CASE("gravity vector") {
    ManipulatorParams p;
    CHECK(gravity_vector(p)[1] == doctest::Approx(356.400569).epsilon(1e-8));
    CHECK(gravity_vector(p)[0] == 0.0);
    CHECK(gravity_vector(p)[2] == 0.0);
    p.g = 0.0;
    CHECK(gravity_vector(p) == Vec3::Zero());
}

TEST_CASE("inverse dynamics") {
    const ManipulatorParams p;
    SUBCASE("static") {
        const Vec3 tau = inverse_dynamics(p, {Vec3(0.4, 0.2, 0.9), Vec3::Zero()}, Vec3::Zero(), Vec3::Zero());
        CHECK(tau == gravity_vector(p));
    }
    SUBCASE("theta1 = pi/2, q3 = 0, unit theta1 acceleration") {
        const Vec3 tau = inverse_dynamics(p, {Vec3(pi / 2, 0, 0), Vec3::Zero()}, Vec3(1, 0, 0), Vec3::Zero());
        CHECK(tau[0] == doctest::Approx(1.0));
        CHECK(tau[1] == doctest::Approx(356.400569).epsilon(1e-8));
        CHECK(tau[2] == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("external force adds") {
        const JointState x{Vec3(0.3, 0.1, 0.5), Vec3(0.2, -0.4, 0.6)};
        const Vec3 a(1, -2, 0.5);
        const Vec3 d = inverse_dynamics(p, x, a, Vec3(0, 0, 5)) - inverse_dynamics(p, x, a, Vec3::Zero());
        CHECK(d[0] == 0.0);
        CHECK(d[1] == 0.0);
        CHECK(d[2] == doctest::Approx(5.0).epsilon(1e-14));
    }
    SUBCASE("viscous friction") {
        ManipulatorParams f = p;
        f.viscous_friction = Vec3(1, 2, 3);
        const JointState x{Vec3(0.3, 0.1, 0.5), Vec3(0.2, -0.4, 0.6)};
        const Vec3 d = inverse_dynamics(f, x, Vec3::Zero(), Vec3::Zero()) -
                       inverse_dynamics(p, x, Vec3::Zero(), Vec3::Zero());
        CHECK((d - Vec3(0.2, -0.8, 1.8)).norm() < 1e-12);
    }
}

TEST_CASE("forward dynamics") {
    const ManipulatorParams p;
    SUBCASE("round trip on well-conditioned states") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(-1, 1);
        int used = 0;
        for (int i = 0; i < 2000 && used < 1000; ++i) {
            const JointState x{Vec3(3 * u(rng), u(rng), 0.05 + std::abs(u(rng))), Vec3(u(rng), u(rng), u(rng))};
            const Mat3 A = inertia_matrix(p, x.q);
            if (A.norm() * A.inverse().norm() > 1e6) continue;
            const Vec3 a(5 * u(rng), 5 * u(rng), 5 * u(rng));
            const Vec3 f(u(rng), u(rng), u(rng));
            const Vec3 back = forward_dynamics(p, x, inverse_dynamics(p, x, a, f), f);
            CHECK((back - a).norm() <= 1e-8 * std::max(1.0, a.norm()));
            ++used;
        }
        CHECK(used == 1000);
    }
    SUBCASE("singular where A11 vanishes") {
        const double q3 = p.I3 / (4 * p.m2);
        CHECK(q3 == doctest::Approx(0.019791).epsilon(1e-4));
        CHECK_THROWS_AS(forward_dynamics(p, {Vec3(0, 0, q3), Vec3::Zero()}, Vec3::Zero(), Vec3::Zero()),
                        SingularInertia);
    }
    SUBCASE("gravity compensation") {
        const JointState x{Vec3(1.0, 0.2, 0.5), Vec3::Zero()};
        CHECK(forward_dynamics(p, x, gravity_vector(p), Vec3::Zero()).norm() < 1e-12);
    }
    SUBCASE("affine in tau - f_ext") {
        const JointState x{Vec3(1.0, 0.2, 0.5), Vec3(0.1, 0.2, 0.3)};
        const Vec3 t1(1, 2, 3), t2(-4, 0.5, 2);
        const Vec3 base = forward_dynamics(p, x, Vec3::Zero(), Vec3::Zero());
        const Vec3 lhs = forward_dynamics(p, x, t1 + t2, Vec3(0, 0, 1)) - base;
        const Vec3 rhs = (forward_dynamics(p, x, t1, Vec3::Zero()) - base) +
                         (forward_dynamics(p, x, t2, Vec3(0, 0, 1)) - base);
        CHECK((lhs - rhs).norm() < 1e-10);
    }
}

TEST_CASE("reference model") {
    const ManipulatorParams p;
    SUBCASE("gravity compensation") {
        const Vec3 tau(0, (p.m2 + p.m3) * p.g, 0);
        CHECK(reference_model_dynamics(p, {Vec3(0.5, 0.3, 0.8), Vec3::Zero()}, tau, Vec3::Zero()).norm() < 1e-12);
    }
    SUBCASE("inertia at q3 = 0") {
        const Mat3 M = reference_model_inertia(p, Vec3::Zero());
        CHECK(M(0, 0) == p.I3);
        CHECK(M(1, 1) == p.m2 + p.m3);
        CHECK(M(2, 2) == p.m3);
        CHECK(M(0, 1) == 0.0);
    }
    SUBCASE("inverse of forward") {
        const JointState x{Vec3(0.5, 0.3, 0.8), Vec3(1, -2, 0.5)};
        const Vec3 a(0.3, -0.7, 2.0);
        const Vec3 tau = reference_model_inverse_dynamics(p, x, a, Vec3::Zero());
        CHECK((reference_model_dynamics(p, x, tau, Vec3::Zero()) - a).norm() < 1e-12);
        // Torque balance written out.
        CHECK(tau[0] == doctest::Approx((p.I3 + p.m3 * 0.64) * 0.3 + 2 * p.m3 * 0.8 * 0.5 * 1));
        CHECK(tau[1] == doctest::Approx((p.m2 + p.m3) * (-0.7) + (p.m2 + p.m3) * p.g));
        CHECK(tau[2] == doctest::Approx(p.m3 * 2.0 - p.m3 * 0.8 * 1));
    }
    SUBCASE("energy") {
        CHECK(reference_model_energy(p, {}) == 0.0);
        CHECK(reference_model_energy(p, {Vec3::Zero(), Vec3(1, 0, 0)}) == doctest::Approx(0.5));
        ManipulatorParams flat = p;
        flat.g = 1e-300;
        const JointState x{Vec3(0.2, 0.0, 0.7), Vec3(0.3, -0.2, 0.4)};
        const JointState x2{x.q, 2 * x.qdot};
        CHECK(reference_model_energy(flat, x2) == doctest::Approx(4 * reference_model_energy(flat, x)));
    }
}

TEST_CASE("parameter validation") {
    ManipulatorParams p;
    p.m2 = -1;
    CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("manipulator.m2"), std::invalid_argument);
    CHECK(plant_model_from_string("reference") == PlantModel::reference);
    CHECK_THROWS_AS(plant_model_from_string("other"), std::invalid_argument);
}

}
