#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace mimosec {

/// Hierarchical seed path: a master seed plus an ordered list of labels
/// (short strings or indices). The same (master, path) always maps to the
/// same substream seed, independent of platform and execution order, so
/// Monte-Carlo draws for channels / noise / jamming / trials never collide
/// and never shift when an unrelated component adds or removes draws.
class SeedPath {
public:
    explicit SeedPath(std::uint64_t master) : master_(master) {}

    [[nodiscard]] SeedPath child(std::string_view label) const;
    [[nodiscard]] SeedPath child(std::uint64_t index) const;

    SeedPath operator/(std::string_view label) const { return child(label); }
    SeedPath operator/(std::uint64_t index) const { return child(index); }

    std::uint64_t master() const { return master_; }
    const std::vector<std::uint64_t>& elements() const { return elements_; }

private:
    std::uint64_t master_;
    std::vector<std::uint64_t> elements_;  // FNV-hashed labels / mixed indices
};

/// SplitMix64-style mixing of the path into a 64-bit substream seed.
std::uint64_t derive_seed(const SeedPath& path);

/// Deterministic random stream. Uniform output is the standardized
/// mt19937_64 sequence; Gaussian variates use an explicit Box-Muller
/// transform so results are bit-identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    explicit Rng(const SeedPath& path) : engine_(derive_seed(path)) {}

    /// Uniform on (0, 1]; never returns 0 so log() is safe.
    double uniform();

    /// Uniform integer in [0, n).
    std::uint64_t uniform_below(std::uint64_t n);

    /// Real N(0, 1).
    double gaussian();

    /// Circularly symmetric complex Gaussian CN(0, sigma2):
    /// independent re/im parts, each with variance sigma2 / 2.
    std::complex<double> cgaussian(double sigma2 = 1.0);

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace mimosec
