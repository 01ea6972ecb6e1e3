#pragma once

// Hermite constants: the exact table for rank 1..8 and 24, a Blichfeldt
// upper bound elsewhere, and high-accuracy fractional powers of gamma_beta.

#include <cmath>
#include <string>

#include "latred/errors.hpp"

namespace latred {

enum class Exactness { exact, upper_bound };

inline const char* to_string(Exactness e) {
    return e == Exactness::exact ? "exact" : "upper-bound";
}

struct HermiteValue {
    int beta = 0;
    double value = 0.0;  // gamma_beta itself
    Exactness exactness = Exactness::exact;
    // gamma_beta^beta as an exact rational when known (power_den == 0 otherwise).
    long long power_num = 0;
    long long power_den = 0;

    bool has_power_form() const { return power_den != 0; }
};

// gamma_beta^beta = 1, 4/3, 2, 4, 8, 64/3, 64, 256 for beta = 1..8, and 4^24
// at beta = 24; other ranks fall back to (2/pi) * Gamma(2 + beta/2)^(2/beta).
inline HermiteValue hermite_constant(int beta) {
    if (beta < 1) throw Error("hermite_constant: rank must be >= 1, got " + std::to_string(beta));
    static constexpr long long table[9][2] = {{1, 1},  {4, 3},  {2, 1}, {4, 1}, {8, 1},
                                              {64, 3}, {64, 1}, {256, 1}, {0, 0}};
    HermiteValue h;
    h.beta = beta;
    if (beta <= 8 || beta == 24) {
        h.exactness = Exactness::exact;
        if (beta == 24) {
            h.power_num = 1LL << 48;  // 4^24
            h.power_den = 1;
        } else {
            h.power_num = table[beta - 1][0];
            h.power_den = table[beta - 1][1];
        }
        h.value = static_cast<double>(
            powl(static_cast<long double>(h.power_num) / static_cast<long double>(h.power_den),
                 1.0L / static_cast<long double>(beta)));
    } else {
        h.exactness = Exactness::upper_bound;
        const long double b = beta;
        h.value = static_cast<double>(
            (2.0L / 3.14159265358979323846264338327950288L) *
            expl((2.0L / b) * lgammal(2.0L + b / 2.0L)));
    }
    return h;
}

// gamma_beta^(num/den), evaluated through the exact rational gamma^beta when
// the overall exponent of gamma^beta is an integer, otherwise in long double.
inline double hermite_power(const HermiteValue& h, long long num, long long den) {
    if (den == 0) throw Error("hermite_power: zero exponent denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    if (num == 0) return 1.0;
    if (h.has_power_form()) {
        const long long full_den = den * h.beta;
        if (num % full_den == 0) {
            long long e = num / full_den;
            bool invert = e < 0;
            if (invert) e = -e;
            long double p = 1.0L, q = 1.0L;
            for (long long t = 0; t < e; ++t) {
                p *= static_cast<long double>(h.power_num);
                q *= static_cast<long double>(h.power_den);
            }
            return static_cast<double>(invert ? q / p : p / q);
        }
        const long double base =
            static_cast<long double>(h.power_num) / static_cast<long double>(h.power_den);
        return static_cast<double>(
            powl(base, static_cast<long double>(num) / static_cast<long double>(full_den)));
    }
    return static_cast<double>(powl(static_cast<long double>(h.value),
                                    static_cast<long double>(num) / static_cast<long double>(den)));
}

}  // namespace latred
