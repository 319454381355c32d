#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "swapsim/rng.hpp"
#include "swapsim/units.hpp"

using namespace swapsim;

TEST_CASE("angle and temperature conversions round-trip") {
    CHECK(deg_to_rad(180.0) == doctest::Approx(std::numbers::pi));
    CHECK(rad_to_deg(std::numbers::pi / 2.0) == doctest::Approx(90.0));
    for (double d : {-123.4, 0.0, 17.25, 360.0})
        CHECK(rad_to_deg(deg_to_rad(d)) == doctest::Approx(d));
    CHECK(celsius_to_kelvin(0.0) == doctest::Approx(273.15));
    CHECK(celsius_to_kelvin(40.0) == doctest::Approx(313.15));
    CHECK(kelvin_to_celsius(233.15) == doctest::Approx(-40.0));
    CHECK(hours_to_seconds(2.0) == doctest::Approx(7200.0));
    CHECK(seconds_to_hours(90.0) == doctest::Approx(0.025));
}

TEST_CASE("same seed reproduces the exact stream") {
    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different seeds give different streams") {
    Rng a(1), b(2);
    int same = 0;
    for (int i = 0; i < 64; ++i) same += a.next_u64() == b.next_u64();
    CHECK(same == 0);
}

TEST_CASE("uniform stays inside [0, 1) and fills the range") {
    Rng rng(7);
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    CHECK(lo < 1e-3);
    CHECK(hi > 1.0 - 1e-3);
}

TEST_CASE("bounded uniform and index sampling respect their ranges") {
    Rng rng(8);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform(-3.0, 5.0);
        REQUIRE(u >= -3.0);
        REQUIRE(u < 5.0);
        const std::uint64_t k = rng.uniform_index(7);
        REQUIRE(k < 7);
    }
    // All 7 buckets should get hit.
    std::vector<int> hits(7, 0);
    for (int i = 0; i < 7000; ++i) ++hits[rng.uniform_index(7)];
    for (int h : hits) CHECK(h > 0);
}

TEST_CASE("gaussian samples have the requested moments") {
    Rng rng(12345);
    const int n = 200000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double g = rng.gaussian();
        sum += g;
        sum_sq += g * g;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    CHECK(std::abs(mean) < 0.01);
    CHECK(std::abs(std::sqrt(var) - 1.0) < 0.01);
}

TEST_CASE("derived sub-streams depend only on seed and label") {
    Rng root(99);
    Rng a = root.derive("alpha");
    Rng b = Rng(99).derive("alpha");
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    Rng c = root.derive("alpha");
    Rng d = root.derive("beta");
    int same = 0;
    for (int i = 0; i < 64; ++i) same += c.next_u64() == d.next_u64();
    CHECK(same == 0);
}

TEST_CASE("indexed sub-streams are distinct per index but reproducible") {
    Rng root(5);
    Rng s3 = root.derive("sample", 3);
    Rng s3_again = root.derive("sample", 3);
    Rng s4 = root.derive("sample", 4);
    CHECK(s3.next_u64() == s3_again.next_u64());
    int same = 0;
    Rng x = root.derive("sample", 3);
    for (int i = 0; i < 64; ++i) same += x.next_u64() == s4.next_u64();
    CHECK(same == 0);
}

TEST_CASE("drawing from a derived stream leaves the parent untouched") {
    Rng root(17);
    Rng probe(17);
    Rng child = root.derive("child");
    for (int i = 0; i < 10; ++i) child.next_u64();
    for (int i = 0; i < 100; ++i) CHECK(root.next_u64() == probe.next_u64());
}
