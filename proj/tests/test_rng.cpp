#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "mimosec/rng.hpp"

using namespace mimosec;

TEST_CASE("seed paths are order-sensitive and reproducible") {
    const SeedPath root(42);
    CHECK(derive_seed(root / "a" / "b") == derive_seed(root / "a" / "b"));
    CHECK(derive_seed(root / "a" / "b") != derive_seed(root / "b" / "a"));
    CHECK(derive_seed(root / "a") != derive_seed(SeedPath(43) / "a"));
    CHECK(derive_seed(root / std::uint64_t{1}) != derive_seed(root / "1"));
}

TEST_CASE("a million distinct paths give distinct seeds") {
    std::vector<std::uint64_t> seeds;
    seeds.reserve(1000000);
    const SeedPath root(7);
    const char* labels[] = {"channels", "training", "data", "noise_bs", "jam",
                            "symbols", "tilde", "assign", "noise_adv", "lln"};
    for (std::uint64_t block = 0; block < 100000; ++block)
        for (const char* label : labels)
            seeds.push_back(derive_seed(root / label / block));
    std::sort(seeds.begin(), seeds.end());
    CHECK(std::adjacent_find(seeds.begin(), seeds.end()) == seeds.end());
}

TEST_CASE("uniform stays in (0, 1]") {
    Rng rng(123);
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform();
        CHECK(u > 0.0);
        CHECK(u <= 1.0);
    }
}

TEST_CASE("uniform_below is unbiased across a small range") {
    Rng rng(5);
    std::vector<int> counts(7, 0);
    const int n = 70000;
    for (int i = 0; i < n; ++i) ++counts[rng.uniform_below(7)];
    for (int c : counts) {
        // 5 sigma on a binomial(70000, 1/7)
        CHECK(std::abs(c - n / 7) < 5 * std::sqrt(n * (1.0 / 7) * (6.0 / 7)));
    }
}

TEST_CASE("gaussian moments") {
    Rng rng(99);
    double sum = 0.0, sum2 = 0.0, sum4 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double g = rng.gaussian();
        sum += g;
        sum2 += g * g;
        sum4 += g * g * g * g;
    }
    CHECK(std::abs(sum / n) < 4.0 / std::sqrt(static_cast<double>(n)));
    CHECK(sum2 / n == doctest::Approx(1.0).epsilon(0.02));
    CHECK(sum4 / n == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("complex gaussian splits variance between re and im") {
    Rng rng(17);
    double re2 = 0.0, im2 = 0.0, cross = 0.0;
    const int n = 200000;
    const double sigma2 = 2.5;
    for (int i = 0; i < n; ++i) {
        const auto z = rng.cgaussian(sigma2);
        re2 += z.real() * z.real();
        im2 += z.imag() * z.imag();
        cross += z.real() * z.imag();
    }
    CHECK(re2 / n == doctest::Approx(sigma2 / 2).epsilon(0.02));
    CHECK(im2 / n == doctest::Approx(sigma2 / 2).epsilon(0.02));
    CHECK(std::abs(cross / n) < 4 * sigma2 / 2 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("streams with the same seed are identical") {
    Rng a(SeedPath(11) / "x");
    Rng b(SeedPath(11) / "x");
    for (int i = 0; i < 1000; ++i) CHECK(a.gaussian() == b.gaussian());
}
