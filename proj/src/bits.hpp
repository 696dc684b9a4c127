#pragma once

#include <array>
#include <bit>
#include <cstdint>

namespace ujc::detail {

// Fixed-width bitset with the handful of operations the exact solvers need.
template <int W>
struct Bits {
    std::array<std::uint64_t, W> w{};

    void set(int i) { w[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(int i) { w[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    bool test(int i) const { return (w[i >> 6] >> (i & 63)) & 1u; }

    bool any() const {
        for (auto x : w)
            if (x) return true;
        return false;
    }
    int count() const {
        int c = 0;
        for (auto x : w) c += std::popcount(x);
        return c;
    }
    int lowest() const {
        for (int k = 0; k < W; ++k)
            if (w[k]) return k * 64 + std::countr_zero(w[k]);
        return -1;
    }
    int count_and(const Bits& o) const {
        int c = 0;
        for (int k = 0; k < W; ++k) c += std::popcount(w[k] & o.w[k]);
        return c;
    }
    Bits operator&(const Bits& o) const {
        Bits r;
        for (int k = 0; k < W; ++k) r.w[k] = w[k] & o.w[k];
        return r;
    }
    Bits& operator&=(const Bits& o) {
        for (int k = 0; k < W; ++k) w[k] &= o.w[k];
        return *this;
    }
    Bits& operator|=(const Bits& o) {
        for (int k = 0; k < W; ++k) w[k] |= o.w[k];
        return *this;
    }
    Bits without(const Bits& o) const {
        Bits r;
        for (int k = 0; k < W; ++k) r.w[k] = w[k] & ~o.w[k];
        return r;
    }
    bool operator==(const Bits&) const = default;

    template <class F>
    void for_each(F&& f) const {
        for (int k = 0; k < W; ++k) {
            std::uint64_t x = w[k];
            while (x) {
                f(k * 64 + std::countr_zero(x));
                x &= x - 1;
            }
        }
    }
};

}  // namespace ujc::detail
