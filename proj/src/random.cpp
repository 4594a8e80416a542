#include "gvar/random.hpp"

#include <cmath>
#include <numbers>

namespace gvar {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::seed_seq make_seed_seq(const RandomStream& s)
{
    return std::seed_seq{
        static_cast<std::uint32_t>(s.seed), static_cast<std::uint32_t>(s.seed >> 32),
        static_cast<std::uint32_t>(s.stream_id), static_cast<std::uint32_t>(s.stream_id >> 32)};
}

constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;

} // namespace

RandomStream RandomStream::substream(std::uint64_t k) const
{
    return {seed, splitmix64(stream_id ^ splitmix64(k + 0x632be59bd9b4e019ULL))};
}

RandomEngine::RandomEngine(const RandomStream& stream)
{
    auto seq = make_seed_seq(stream);
    engine_.seed(seq);
}

double RandomEngine::uniform() { return static_cast<double>(engine_() >> 11) * kTwoPow53Inv; }

double RandomEngine::uniform_open()
{
    return static_cast<double>((engine_() >> 11) + 1) * kTwoPow53Inv;
}

double RandomEngine::normal()
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform_open()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

double RandomEngine::exponential() { return -std::log(uniform_open()); }

double RandomEngine::sign() { return (engine_() >> 63) ? 1.0 : -1.0; }

} // namespace gvar
