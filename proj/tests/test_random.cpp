#include <catch_amalgamated.hpp>

#include "cesim/random.hpp"

using namespace cesim;

TEST_CASE("splitmix64 sequence from seed 42") {
    SplitMix64 sm(42);
    CHECK(sm.next() == 0xbdd732262feb6e95ull);
    CHECK(sm.next() == 0x28efe333b266f103ull);
    CHECK(sm.next() == 0x47526757130f9f52ull);
    CHECK(sm.next() == 0x581ce1ff0e4ae394ull);
}

TEST_CASE("xoshiro256** raw words from seed 42") {
    Xoshiro256StarStar rng(42);
    CHECK(rng.next_u64() == 0x15780b2e0c2ec716ull);
    CHECK(rng.next_u64() == 0x6104d9866d113a7eull);
    CHECK(rng.next_u64() == 0xae17533239e499a1ull);
    CHECK(rng.next_u64() == 0xecb8ad4703b360a1ull);
    CHECK(rng.next_u64() == 0xfde6dc7fe2ec5e64ull);
}

TEST_CASE("unit doubles are the top 53 bits") {
    Xoshiro256StarStar rng(42);
    CHECK(rng.u01() == 0.08386297105988216);
    CHECK(rng.u01() == 0.3789802506626686);
    CHECK(rng.u01() == 0.6800434110281394);
}

TEST_CASE("uniform_int floor mapping") {
    Xoshiro256StarStar rng(42);
    long long want[] = {0, 3, 6, 9, 9, 7, 7, 8};
    for (long long w : want) CHECK(rng.uniform_int(0, 9) == w);
}

TEST_CASE("uniform_int bounds are inclusive and respected") {
    Xoshiro256StarStar rng(7);
    for (int i = 0; i < 5000; ++i) {
        long long v = rng.uniform_int(14, 32);
        CHECK(v >= 14);
        CHECK(v <= 32);
    }
    Xoshiro256StarStar one(11);
    for (int i = 0; i < 50; ++i) CHECK(one.uniform_int(5, 5) == 5);
}

TEST_CASE("uniform_real affine mapping") {
    Xoshiro256StarStar rng(42);
    CHECK(rng.uniform_real(20.0, 60.0) == 23.354518842395287);
    CHECK(rng.uniform_real(20.0, 60.0) == 35.15921002650674);
    CHECK(rng.uniform_real(20.0, 60.0) == 47.201736441125576);
}

TEST_CASE("poisson by repeated multiplication") {
    Xoshiro256StarStar rng(42);
    long long want[] = {1, 9, 7, 1, 3, 3};
    for (long long w : want) CHECK(rng.poisson(3.0) == w);
    CHECK(rng.poisson(0.0) == 0);
    CHECK(rng.poisson(-2.0) == 0);
}

TEST_CASE("poisson mean is roughly the rate") {
    Xoshiro256StarStar rng(1234);
    double acc = 0.0;
    int n = 20000;
    for (int i = 0; i < n; ++i) acc += double(rng.poisson(4.0));
    CHECK(acc / n > 3.9);
    CHECK(acc / n < 4.1);
}

TEST_CASE("seed mixing is stable and spread out") {
    CHECK(mix_seed(42, 0) == 0x57e1faba65107204ull);
    CHECK(mix_seed(42, 1) == 0xfc991bca1a1aa1aeull);
    CHECK(mix_seed(42, 2) == 0x7e8fd40545bcdd70ull);
    CHECK(mix_seed(42, 3) == 0xcd110c61e9ac6a90ull);
    CHECK(mix_seed(42, 0, 1) != mix_seed(42, 0, 0));
    CHECK(mix_seed(43, 0) != mix_seed(42, 0));
}

TEST_CASE("same seed, same stream") {
    Xoshiro256StarStar a(987654321), b(987654321);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}
