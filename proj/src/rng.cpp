#include "mimosec/rng.hpp"

#include <cmath>

namespace mimosec {

namespace {

// SplitMix64 finalizer (Steele, Lea, Flood 2014).
std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

SeedPath SeedPath::child(std::string_view label) const {
    SeedPath p(*this);
    p.elements_.push_back(fnv1a64(label));
    return p;
}

SeedPath SeedPath::child(std::uint64_t index) const {
    SeedPath p(*this);
    // Offset keeps raw indices out of the FNV image for small strings.
    p.elements_.push_back(mix64(index) ^ 0x5851f42d4c957f2dULL);
    return p;
}

std::uint64_t derive_seed(const SeedPath& path) {
    std::uint64_t s = mix64(path.master());
    for (std::uint64_t e : path.elements()) {
        s = mix64(s ^ e);
    }
    return s;
}

double Rng::uniform() {
    // 53-bit mantissa, shifted into (0, 1].
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

std::uint64_t Rng::uniform_below(std::uint64_t n) {
    // Rejection sampling for an unbiased draw.
    const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % n;
    std::uint64_t v;
    do {
        v = engine_();
    } while (v >= limit);
    return v % n;
}

double Rng::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
}

std::complex<double> Rng::cgaussian(double sigma2) {
    const double s = std::sqrt(sigma2 / 2.0);
    return {s * gaussian(), s * gaussian()};
}

}  // namespace mimosec
