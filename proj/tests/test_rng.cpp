#include <doctest.h>

#include "hmmlyap/rng.hpp"

using namespace hmmlyap::rng;

// The raw generator values are part of the reproducibility contract: every
// published number replays from a seed through exactly this pipeline.

TEST_CASE("splitmix64 finalizer reference values") {
    CHECK(mix64(0) == 0xe220a8397b1dcdafULL);
    CHECK(mix64(1) == 0x910a2dec89025cc1ULL);
    CHECK(mix64(14728) == 0x0ccc371fbd24a319ULL);
}

TEST_CASE("substream derivation reference values") {
    CHECK(substream(14728, 0) == 0xfdc843b3bd969456ULL);
    CHECK(substream(14728, 5) == 0xec04e77d01ae7957ULL);
    CHECK(substream(14728, 19) == 0xf6b306c2d7da6461ULL);
    CHECK(substream(1, 2) != substream(2, 1));
}

TEST_CASE("xoshiro256++ word stream") {
    Xoshiro256pp g(1);
    CHECK(g.next() == 0xcfc5d07f6f03c29bULL);
    CHECK(g.next() == 0xbf424132963fe08dULL);
    CHECK(g.next() == 0x19a37d5757aaf520ULL);
    CHECK(g.next() == 0xbf08119f05cd56d6ULL);
}

TEST_CASE("uniform01 reference values and range") {
    Xoshiro256pp g(42);
    CHECK(g.uniform01() == doctest::Approx(0.8143051451229099).epsilon(1e-15));
    CHECK(g.uniform01() == doctest::Approx(0.3188210400616611).epsilon(1e-15));
    CHECK(g.uniform01() == doctest::Approx(0.9838941681774888).epsilon(1e-15));
    for (int i = 0; i < 10000; ++i) {
        const double u = g.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("categorical scan order and tail fallback") {
    const double sure[2] = {1.0, 0.0};
    const double other[2] = {0.0, 1.0};
    Xoshiro256pp g(7);
    for (int i = 0; i < 100; ++i) {
        CHECK(g.categorical(sure, 2) == 0);
        CHECK(g.categorical(other, 2) == 1);
    }
    // Weights that do not reach 1 fall through to the last index whenever the
    // draw lands beyond them.
    const double short_sum[2] = {0.0, 0.0};
    for (int i = 0; i < 100; ++i) CHECK(g.categorical(short_sum, 2) == 1);
}

TEST_CASE("identical seeds give identical streams") {
    Xoshiro256pp a(999), b(999);
    for (int i = 0; i < 1000; ++i) CHECK(a.next() == b.next());
}
