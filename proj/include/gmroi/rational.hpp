#ifndef GMROI_RATIONAL_HPP
#define GMROI_RATIONAL_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>

namespace gmroi {

// Exact nonnegative rational on uint64. Service-level comparisons must not
// flap at constraint boundaries, so everything the in-stock arithmetic
// touches goes through this type; float paths are explicit fallbacks.
struct Rat {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    static Rat make(std::uint64_t n, std::uint64_t d) {
        Rat r{n, d};
        r.normalize();
        return r;
    }

    void normalize() {
        const std::uint64_t g = std::gcd(num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    double to_double() const {
        return static_cast<double>(num) / static_cast<double>(den);
    }

    friend bool operator==(const Rat& a, const Rat& b) {
        return static_cast<unsigned __int128>(a.num) * b.den ==
               static_cast<unsigned __int128>(b.num) * a.den;
    }
    // a/b < c/d  <=>  a*d < c*b; u64 products always fit in u128.
    friend bool operator<(const Rat& a, const Rat& b) {
        return static_cast<unsigned __int128>(a.num) * b.den <
               static_cast<unsigned __int128>(b.num) * a.den;
    }
    friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
    friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
    friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
};

// Exact sum; nullopt when the reduced result does not fit u64.
inline std::optional<Rat> rat_add(const Rat& a, const Rat& b) {
    const std::uint64_t g = std::gcd(a.den, b.den);
    const std::uint64_t bq = b.den / g;
    const unsigned __int128 den =
        static_cast<unsigned __int128>(a.den) * bq;
    const unsigned __int128 num =
        static_cast<unsigned __int128>(a.num) * bq +
        static_cast<unsigned __int128>(b.num) * (a.den / g);
    // Reduce before the overflow verdict; gcd on u128 is cheap at this size.
    unsigned __int128 x = num, y = den;
    while (y != 0) {
        const unsigned __int128 t = x % y;
        x = y;
        y = t;
    }
    const unsigned __int128 rn = (x == 0) ? num : num / x;
    const unsigned __int128 rd = (x == 0) ? den : den / x;
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    if (rn > kMax || rd > kMax) return std::nullopt;
    return Rat{static_cast<std::uint64_t>(rn), static_cast<std::uint64_t>(rd)};
}

// Exact test of a >= k * b via cross multiplication; nullopt when the
// right-hand product cannot be formed even in 128 bits.
inline std::optional<bool> rat_ge_scaled(const Rat& a, const Rat& b,
                                         std::uint64_t k) {
    constexpr unsigned __int128 kMax = ~static_cast<unsigned __int128>(0);
    const unsigned __int128 lhs =
        static_cast<unsigned __int128>(a.num) * b.den;
    if (b.num != 0 && k > kMax / b.num) return std::nullopt;
    const unsigned __int128 kb = static_cast<unsigned __int128>(k) * b.num;
    if (a.den != 0 && kb > kMax / a.den) return std::nullopt;
    return lhs >= kb * a.den;
}

struct RatFromDouble {
    Rat value;
    bool exact = true;  // false when the double had to be rounded
};

// Exact binary decomposition of a nonnegative double (v = mant / 2^k) when
// the denominator fits u64; smaller values are rounded at denominator 1e18.
inline RatFromDouble rat_from_double(double v) {
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    if (!(v >= 0.0) || std::isinf(v)) return {Rat{0, 1}, false};
    if (v == 0.0) return {Rat{0, 1}, true};
    if (v >= 1e18) return {Rat{kMax, 1}, false};
    int exp = 0;
    const double frac = std::frexp(v, &exp);  // v = frac * 2^exp, frac in [0.5,1)
    const auto mant =
        static_cast<std::uint64_t>(std::ldexp(frac, 53));  // exact 53-bit integer
    const int pow2 = 53 - exp;                              // v = mant / 2^pow2
    if (pow2 <= 0) {
        return {Rat::make(mant << (-pow2), 1), true};
    }
    if (pow2 <= 63) {
        return {Rat::make(mant, std::uint64_t{1} << pow2), true};
    }
    return {Rat::make(static_cast<std::uint64_t>(std::llround(v * 1e18)),
                      1000000000000000000ull),
            false};
}

// Greatest double <= the exact rational (round-to-nearest can land above).
inline double rat_to_double_le(const Rat& r) {
    double d = r.to_double();
    const RatFromDouble back = rat_from_double(d);
    if (back.exact && back.value > r) d = std::nextafter(d, 0.0);
    return d;
}

}  // namespace gmroi

#endif  // GMROI_RATIONAL_HPP
