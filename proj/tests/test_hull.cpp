#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "swapsim/hull.hpp"
#include "swapsim/rng.hpp"

using namespace swapsim;

namespace {

PointCloud3 random_cloud(Rng& rng, int n, double scale = 1.0) {
    PointCloud3 cloud;
    for (int i = 0; i < n; ++i)
        cloud.points.push_back({rng.uniform(-scale, scale),
                                rng.uniform(-scale, scale),
                                rng.uniform(-scale, scale)});
    return cloud;
}

}  // namespace

TEST_CASE("unit cube hulls to volume 1 with 12 triangles") {
    PointCloud3 cloud;
    for (int i = 0; i < 8; ++i)
        cloud.points.push_back({static_cast<double>(i & 1),
                                static_cast<double>((i >> 1) & 1),
                                static_cast<double>((i >> 2) & 1)});
    // Interior points must not affect anything.
    cloud.points.push_back({0.5, 0.5, 0.5});
    const Hull3 hull = quickhull3(cloud);
    CHECK_FALSE(hull.degenerate);
    CHECK(hull.volume == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(hull.vertex_indices.size() == 8);
    CHECK(hull.faces.size() == 12);
    CHECK(hull_contains(hull, cloud, {0.5, 0.5, 0.5}));
    CHECK(hull_contains(hull, cloud, {1.0, 1.0, 1.0}, 1e-9));
    CHECK_FALSE(hull_contains(hull, cloud, {1.5, 0.5, 0.5}));
}

TEST_CASE("simplex volume matches the closed form") {
    PointCloud3 cloud;
    cloud.points = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    const Hull3 hull = quickhull3(cloud);
    CHECK(hull.volume == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    CHECK(hull.faces.size() == 4);
}

TEST_CASE("degenerate inputs are flagged, not crashed") {
    PointCloud3 flat;
    for (int i = 0; i < 12; ++i)
        flat.points.push_back({i * 0.1, std::sin(i * 0.7), 0.0});
    const Hull3 hull = quickhull3(flat);
    CHECK(hull.degenerate);
    CHECK(hull.volume == 0.0);

    PointCloud3 tiny;
    tiny.points = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    CHECK_THROWS_AS(quickhull3(tiny), std::invalid_argument);
}

TEST_CASE("every input point lies inside or on the hull") {
    Rng rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        PointCloud3 cloud = random_cloud(rng, 40 + trial);
        const Hull3 hull = quickhull3(cloud);
        if (hull.degenerate) continue;
        for (const Vec3& p : cloud.points)
            REQUIRE(hull_contains(hull, cloud, p, 1e-7));
    }
}

TEST_CASE("adding points never shrinks the hull") {
    Rng rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        PointCloud3 cloud = random_cloud(rng, 30);
        const double before = quickhull3(cloud).volume;
        for (int i = 0; i < 10; ++i)
            cloud.points.push_back({rng.uniform(-1.2, 1.2),
                                    rng.uniform(-1.2, 1.2),
                                    rng.uniform(-1.2, 1.2)});
        const double after = quickhull3(cloud).volume;
        REQUIRE(after >= before - 1e-12);
    }
}

TEST_CASE("rigid rotation preserves hull volume") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const PointCloud3 cloud = random_cloud(rng, 50);
        const double base = quickhull3(cloud).volume;
        const double a = rng.uniform(0.0, 6.28), b = rng.uniform(0.0, 6.28);
        const double ca = std::cos(a), sa = std::sin(a);
        const double cb = std::cos(b), sb = std::sin(b);
        PointCloud3 rotated;
        for (const Vec3& p : cloud.points) {
            // Rotate about z by a, then about x by b.
            const Vec3 q{ca * p.x - sa * p.y, sa * p.x + ca * p.y, p.z};
            rotated.points.push_back(
                {q.x, cb * q.y - sb * q.z, sb * q.y + cb * q.z});
        }
        const double turned = quickhull3(rotated).volume;
        REQUIRE(turned == doctest::Approx(base).epsilon(1e-9));
    }
}

TEST_CASE("hull volume agrees with rejection sampling") {
    Rng rng(321);
    PointCloud3 cloud = random_cloud(rng, 60);
    const Hull3 hull = quickhull3(cloud);
    const double sampled =
        hull_volume_oracle(hull, cloud, 400000, Rng(777), 4);
    CHECK(sampled == doctest::Approx(hull.volume).epsilon(0.02));
}

TEST_CASE("OFF export lists every vertex and face") {
    PointCloud3 cloud;
    cloud.points = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    const Hull3 hull = quickhull3(cloud);
    std::ostringstream os;
    write_off(hull, cloud, os);
    std::istringstream is(os.str());
    std::string line;
    REQUIRE(std::getline(is, line));
    CHECK(line == "OFF");
    // Skip comment lines between the magic and the count row.
    while (std::getline(is, line) && !line.empty() && line[0] == '#') {
    }
    std::istringstream counts(line);
    int nv = 0, nf = 0, ne = 0;
    counts >> nv >> nf >> ne;
    CHECK(nv == 4);
    CHECK(nf == 4);
    for (int i = 0; i < nv; ++i) {
        double x, y, z;
        REQUIRE((is >> x >> y >> z));
    }
    for (int i = 0; i < nf; ++i) {
        int k, a, b, c;
        REQUIRE((is >> k >> a >> b >> c));
        CHECK(k == 3);
        CHECK(a >= 0);
        CHECK(a < nv);
        CHECK(b < nv);
        CHECK(c < nv);
    }
}
