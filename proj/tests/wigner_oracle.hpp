#pragma once

// Test-only oracle: Clebsch-Gordan coefficients via the Racah closed sum for
// the Wigner 3-j symbol, written independently of the closed-form j2 = 1
// table in the library.  Integer angular momenta only (enough for 2 x 1 -> 3);
// factorials are exact in double precision at these sizes.

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace oracle {

inline double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

inline double three_j(int j1, int j2, int j3, int m1, int m2, int m3) {
    if (m1 + m2 + m3 != 0) return 0.0;
    if (j3 < std::abs(j1 - j2) || j3 > j1 + j2) return 0.0;
    if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(m3) > j3) return 0.0;

    const double triangle = factorial(j1 + j2 - j3) * factorial(j1 - j2 + j3) *
                            factorial(-j1 + j2 + j3) / factorial(j1 + j2 + j3 + 1);
    const double prefactor =
        std::sqrt(triangle * factorial(j1 + m1) * factorial(j1 - m1) *
                  factorial(j2 + m2) * factorial(j2 - m2) * factorial(j3 + m3) *
                  factorial(j3 - m3));

    const int k_min = std::max({0, j2 - j3 - m1, j1 - j3 + m2});
    const int k_max = std::min({j1 + j2 - j3, j1 - m1, j2 + m2});
    double sum = 0.0;
    for (int k = k_min; k <= k_max; ++k) {
        const double term = factorial(k) * factorial(j1 + j2 - j3 - k) *
                            factorial(j1 - m1 - k) * factorial(j2 + m2 - k) *
                            factorial(j3 - j2 + m1 + k) * factorial(j3 - j1 - m2 + k);
        sum += (k % 2 ? -1.0 : 1.0) / term;
    }
    const int phase = ((j1 - j2 - m3) % 2 + 2) % 2;
    return (phase ? -1.0 : 1.0) * prefactor * sum;
}

// <j1 m1; j2 m2 | J M>
inline double clebsch_gordan(int j1, int m1, int j2, int m2, int J, int M) {
    if (m1 + m2 != M) return 0.0;
    const int phase = ((j1 - j2 + M) % 2 + 2) % 2;
    return (phase ? -1.0 : 1.0) * std::sqrt(2.0 * J + 1.0) *
           three_j(j1, j2, J, m1, m2, -M);
}

} // namespace oracle
