#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace phasenas {

// xoshiro256** (Blackman & Vigna). Chosen over <random> engines so that the
// bit stream is identical on every platform and the full state is four words,
// which keeps checkpoints trivial.
class Rng {
public:
    using state_type = std::array<std::uint64_t, 4>;

    explicit Rng(std::uint64_t seed)
    {
        // splitmix64 expansion of the seed into the initial state
        std::uint64_t x = seed;
        for (auto& word : state_) {
            x += 0x9e3779b97f4a7c15ull;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
            word = z ^ (z >> 31);
        }
    }

    std::uint64_t next()
    {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // uniform integer in [0, bound), bound > 0; rejection keeps it unbiased
    std::uint64_t below(std::uint64_t bound)
    {
        const std::uint64_t threshold = -bound % bound;
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    // uniform double in [0, 1), 53 random bits
    double real01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return real01() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v)
    {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    state_type state() const { return state_; }
    void set_state(const state_type& s) { state_ = s; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k)
    {
        return (x << k) | (x >> (64 - k));
    }

    state_type state_{};
};

} // namespace phasenas
