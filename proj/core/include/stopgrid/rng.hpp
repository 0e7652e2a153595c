#pragma once

#include <cmath>
#include <cstdint>

namespace stopgrid {

/// splitmix64 mixer; used to expand (seed, stream) keys into generator state.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// xoshiro256++ (Blackman/Vigna). Seeded per path from (seed, path index),
/// which gives independent substreams and parallel determinism.
class Xoshiro256pp {
public:
    using result_type = std::uint64_t;

    Xoshiro256pp(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t sm = seed ^ (stream * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL);
        for (auto& word : s_) word = splitmix64(sm);
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }

    result_type operator()() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform double in [0,1) with 53 bits.
    double uniform() { return static_cast<double>(operator()() >> 11) * 0x1.0p-53; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
};

/// Marsaglia-Tsang ziggurat sampler for the standard normal (128 layers).
class ZigguratNormal {
public:
    ZigguratNormal() : t_(&tables()) {}

    template <typename Rng>
    double operator()(Rng& rng) const {
        for (;;) {
            const auto u = static_cast<std::uint32_t>(rng());
            const auto hz = static_cast<std::int32_t>(u);
            const std::uint32_t iz = u & 127u;
            const auto ahz = static_cast<std::uint32_t>(
                hz < 0 ? -static_cast<std::int64_t>(hz) : hz);
            if (ahz < t_->kn[iz]) {
                return hz * t_->wn[iz];
            }
            if (iz == 0) {
                // base-layer tail, |x| > r
                double x, y;
                do {
                    x = -std::log(rng.uniform() + 1e-300) / kR;
                    y = -std::log(rng.uniform() + 1e-300);
                } while (y + y < x * x);
                return hz > 0 ? kR + x : -kR - x;
            }
            const double x = hz * t_->wn[iz];
            if (t_->fn[iz] + rng.uniform() * (t_->fn[iz - 1] - t_->fn[iz]) <
                std::exp(-0.5 * x * x)) {
                return x;
            }
        }
    }

private:
    static constexpr double kR = 3.442619855899;

    struct Tables {
        std::uint32_t kn[128];
        double wn[128];
        double fn[128];
        Tables() {
            const double m1 = 2147483648.0;
            const double vn = 9.91256303526217e-3;
            double dn = kR, tn = kR;
            double q = vn / std::exp(-0.5 * dn * dn);
            kn[0] = static_cast<std::uint32_t>((dn / q) * m1);
            kn[1] = 0;
            wn[0] = q / m1;
            wn[127] = dn / m1;
            fn[0] = 1.0;
            fn[127] = std::exp(-0.5 * dn * dn);
            for (int i = 126; i >= 1; --i) {
                dn = std::sqrt(-2.0 * std::log(vn / dn + std::exp(-0.5 * dn * dn)));
                kn[i + 1] = static_cast<std::uint32_t>((dn / tn) * m1);
                tn = dn;
                fn[i] = std::exp(-0.5 * dn * dn);
                wn[i] = dn / m1;
            }
        }
    };

    static const Tables& tables() {
        static const Tables t;
        return t;
    }

    const Tables* t_;
};

} // namespace stopgrid
