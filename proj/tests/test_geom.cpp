#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <random>

#include "oracles.hpp"
#include "vegnav/errors.hpp"
#include "vegnav/geom/attitude.hpp"
#include "vegnav/geom/io.hpp"
#include "vegnav/geom/point_cloud_index.hpp"
#include "vegnav/geom/trajectory.hpp"

using namespace vegnav;
using geom::Mat3;
using geom::Vec2;
using geom::Vec3;

namespace {

Mat3 active_ry(double a) {
    Mat3 m;
    m << std::cos(a), 0, std::sin(a), 0, 1, 0, -std::sin(a), 0, std::cos(a);
    return m;
}

Mat3 active_rz(double a) {
    Mat3 m;
    m << std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a), 0, 0, 0, 1;
    return m;
}

}  // namespace

TEST_CASE("extract_pitch identity and convention") {
    CHECK(geom::extract_pitch(Mat3::Identity()) == doctest::Approx(0.0).epsilon(1e-15));

    // A rotation of +0.3 rad about the body y-axis. Rebuild candidates from
    // (roll, pitch, yaw) triples of the right magnitude and find which one
    // reproduces the matrix; the extracted pitch must match that triple.
    const Mat3 R = active_ry(0.3);
    struct Candidate {
        double roll, pitch, yaw;
    };
    const Candidate candidates[] = {
        {0.0, 0.3, 0.0}, {0.0, -0.3, 0.0}, {0.3, 0.0, 0.0}, {-0.3, 0.0, 0.0}};
    double matched_pitch = 1e9;
    for (const auto& c : candidates) {
        if ((geom::rotation_zyx(c.roll, c.pitch, c.yaw) - R).cwiseAbs().maxCoeff() < 1e-12)
            matched_pitch = c.pitch;
    }
    REQUIRE(matched_pitch != 1e9);
    CHECK(std::abs(matched_pitch) == doctest::Approx(0.3));
    CHECK(geom::extract_pitch(R) == doctest::Approx(matched_pitch).epsilon(1e-12));
}

TEST_CASE("extract_pitch is yaw-invariant") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ang(-1.2, 1.2), yaw(-M_PI, M_PI);
    for (int i = 0; i < 500; ++i) {
        const double r = ang(rng), p = ang(rng);
        const Mat3 R = geom::rotation_zyx(r, p, yaw(rng));
        const double p0 = geom::extract_pitch(R);
        // Extra yaw composed on the left in the same convention.
        const Mat3 Ry1 = geom::rotation_zyx(0.0, 0.0, yaw(rng)) * R;
        CHECK(std::abs(geom::extract_pitch(Ry1) - p0) < 1e-9);
        // An active yaw rotation is a pure yaw too.
        const Mat3 Ry2 = active_rz(yaw(rng)) * R;
        CHECK(std::abs(geom::extract_pitch(Ry2) - p0) < 1e-9);
    }
}

TEST_CASE("extract_roll examples") {
    CHECK(geom::extract_roll(Mat3::Identity()) == doctest::Approx(0.0).epsilon(1e-15));

    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> yaw(-M_PI, M_PI);
    for (int i = 0; i < 50; ++i) {
        const Mat3 R = geom::rotation_zyx(0.2, 0.1, yaw(rng));
        CHECK(std::abs(geom::extract_roll(R) - 0.2) < 1e-9);
        CHECK(std::abs(geom::extract_pitch(R) - 0.1) < 1e-9);
    }

    const Mat3 lock = geom::rotation_zyx(0.0, M_PI / 2.0, 0.0);
    CHECK_THROWS_AS((void)geom::extract_roll(lock), GimbalLockError);
    CHECK(geom::extract_pitch(lock) == doctest::Approx(M_PI / 2.0));
}

TEST_CASE("attitude round-trip recovers roll and pitch") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> ang(-1.2, 1.2), yaw(-M_PI, M_PI);
    double worst = 0.0;
    for (int i = 0; i < 2000; ++i) {
        const double r = ang(rng), p = ang(rng);
        const Mat3 R = geom::rotation_zyx(r, p, yaw(rng));
        REQUIRE(geom::is_rotation(R));
        worst = std::max(worst, std::abs(geom::extract_roll(R) - r));
        worst = std::max(worst, std::abs(geom::extract_pitch(R) - p));
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("slope_from_attitude") {
    CHECK(geom::slope_from_attitude(0.0, 0.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(geom::slope_from_attitude(0.3, 0.0) == doctest::Approx(0.3).epsilon(1e-12));
    // acos(cos(0.2)^2), cross-checked against the angle between the plane
    // normal and vertical below.
    CHECK(geom::slope_from_attitude(0.2, 0.2) == doctest::Approx(0.2818932819559634).epsilon(1e-12));

    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> ang(-1.2, 1.2);
    for (int i = 0; i < 200; ++i) {
        const double r = ang(rng), p = ang(rng);
        // Normal route: body z-axis of the composed rotation vs vertical.
        const Mat3 R = geom::rotation_zyx(r, p, ang(rng));
        const Vec3 body_z(R(2, 0), R(2, 1), R(2, 2));
        const double angle = std::acos(std::clamp(body_z.z(), -1.0, 1.0));
        CHECK(geom::slope_from_attitude(r, p) == doctest::Approx(angle).epsilon(1e-9));
        // Symmetry.
        CHECK(geom::slope_from_attitude(r, p) ==
              doctest::Approx(geom::slope_from_attitude(p, r)).epsilon(1e-12));
    }

    // Monotone non-decreasing in each |angle|.
    double prev = -1.0;
    for (double a = 0.0; a < 1.5; a += 0.05) {
        const double s = geom::slope_from_attitude(a, 0.7);
        CHECK(s >= prev);
        prev = s;
    }
}

TEST_CASE("attitude_from_normal matches rotation third row") {
    std::mt19937_64 rng(15);
    std::uniform_real_distribution<double> ang(-1.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double r = ang(rng), p = ang(rng);
        const Mat3 R = geom::rotation_zyx(r, p, ang(rng));
        double r2, p2;
        geom::attitude_from_normal(Vec3(R(2, 0), R(2, 1), R(2, 2)), r2, p2);
        CHECK(r2 == doctest::Approx(r).epsilon(1e-9));
        CHECK(p2 == doctest::Approx(p).epsilon(1e-9));
    }
}

TEST_CASE("radius_query basics") {
    geom::PointCloudIndex empty_idx(0.15);
    CHECK(empty_idx.radius_query(Vec2(0, 0), 1.0).empty());

    geom::PointCloudIndex one(0.15);
    one.insert(Vec3(0.5, -0.25, 3.0));
    const auto got = one.radius_query(Vec2(0.5, -0.25), 0.01);
    REQUIRE(got.size() == 1);
    CHECK(got[0].z() == 3.0);
}

TEST_CASE("radius_query equals brute force") {
    std::mt19937_64 rng(16);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const auto key3 = [](const Vec3& p) {
        return std::make_tuple(p.x(), p.y(), p.z());
    };
    for (int inst = 0; inst < 100; ++inst) {
        const int n = inst == 0 ? 1000 : 50 + static_cast<int>(rng() % 100);
        std::vector<Vec3> pts;
        pts.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) pts.emplace_back(u(rng), u(rng), u(rng));
        geom::PointCloudIndex idx(pts, 0.15);
        const Vec2 c(u(rng), u(rng));
        const double r = inst == 0 ? 0.15 : 0.05 + 0.3 * std::abs(u(rng));
        auto got = idx.radius_query(c, r);
        auto want = oracles::brute_force_radius(pts, c, r);
        const auto lt = [&](const Vec3& a, const Vec3& b) { return key3(a) < key3(b); };
        std::sort(got.begin(), got.end(), lt);
        std::sort(want.begin(), want.end(), lt);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == want[i]);
    }
}

TEST_CASE("trajectory history acceptance rules") {
    geom::TrajectoryHistory h(5, 0.05, 1e-4);
    CHECK(h.append(Vec3(0, 0, 0), Mat3::Identity(), 0.0));
    // Out of time order.
    CHECK_FALSE(h.append(Vec3(1, 0, 0), Mat3::Identity(), 0.0));
    // Below min stride.
    CHECK_FALSE(h.append(Vec3(0.01, 0, 0), Mat3::Identity(), 1.0));
    // Gimbal lock dropped.
    CHECK_FALSE(h.append(Vec3(1, 0, 0), geom::rotation_zyx(0, M_PI / 2, 0), 2.0));
    // Not a rotation.
    CHECK_FALSE(h.append(Vec3(1, 0, 0), 2.0 * Mat3::Identity(), 3.0));

    for (int i = 1; i <= 10; ++i)
        CHECK(h.append(Vec3(0.2 * i, 0, 0.1 * i), geom::rotation_zyx(0.01 * i, 0.02 * i, 0.5),
                       3.0 + i));
    CHECK(h.size() == 5);  // capacity cap, oldest dropped
    CHECK(h.back().position.x() == doctest::Approx(2.0));
    CHECK(h.back().roll == doctest::Approx(0.1).epsilon(1e-9));
    CHECK(h.back().pitch == doctest::Approx(0.2).epsilon(1e-9));

    const auto X = h.inputs();
    const auto Y = h.outputs_zrp();
    CHECK(X.rows() == 5);
    CHECK(Y.cols() == 3);
    CHECK(Y(4, 0) == doctest::Approx(1.0));
}

TEST_CASE("cloud and trajectory file round trips") {
    const std::string cloud_path = "test_cloud_tmp.xyz";
    std::vector<Vec3> pts = {{0.1, 0.2, 0.3}, {-1.0, 2.0, -3.0}, {4.5, 5.5, 6.5}};
    geom::save_cloud(cloud_path, pts);
    const auto loaded = geom::load_cloud(cloud_path);
    REQUIRE(loaded.size() == pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
        CHECK((loaded[i] - pts[i]).norm() < 1e-12);

    // Comments and blank lines are fine; malformed rows are not.
    {
        std::FILE* f = std::fopen(cloud_path.c_str(), "w");
        std::fputs("# header comment\n\n1 2 3\n4 5 6 # trailing\n", f);
        std::fclose(f);
        CHECK(geom::load_cloud(cloud_path).size() == 2);
        f = std::fopen(cloud_path.c_str(), "w");
        std::fputs("1 2\n", f);
        std::fclose(f);
        CHECK_THROWS_AS((void)geom::load_cloud(cloud_path), IoError);
    }
    CHECK_THROWS_AS((void)geom::load_cloud("does_not_exist.xyz"), IoError);

    const std::string traj_path = "test_traj_tmp.txt";
    geom::TrajectoryHistory h(50, 0.05, 1e-4);
    for (int i = 0; i < 4; ++i)
        h.append(Vec3(0.3 * i, 0.1 * i, 0.05 * i), geom::rotation_zyx(0.02 * i, -0.03 * i, 0.2),
                 static_cast<double>(i));
    geom::save_trajectory(traj_path, h);
    const auto h2 = geom::load_trajectory(traj_path);
    REQUIRE(h2.size() == h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        CHECK((h2[i].position - h[i].position).norm() < 1e-9);
        CHECK((h2[i].rotation - h[i].rotation).cwiseAbs().maxCoeff() < 1e-9);
        CHECK(h2[i].time == doctest::Approx(h[i].time));
    }
    std::remove(cloud_path.c_str());
    std::remove(traj_path.c_str());
}
