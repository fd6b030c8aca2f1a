#pragma once

// Integer-order Bessel functions of the first kind via Miller's downward
// recurrence, normalized with J₀ + 2·Σ J₂ₖ = 1.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "lzsm/error.hpp"

namespace lzsm {

namespace detail {

/// Starting order for the downward recurrence.
inline int miller_start(int n_max, double ax) {
    const int base = std::max(n_max, static_cast<int>(std::ceil(ax)));
    int start = base + 20 + static_cast<int>(std::ceil(std::sqrt(40.0 * base)));
    return start + (start & 1);  // even, so the normalization sum ends on J₀
}

}  // namespace detail

/// J₀(x) … J_{n_max}(x) in one downward sweep.
inline std::vector<double> bessel_j_sequence(int n_max, double x) {
    detail::require(n_max >= 0, "bessel order must be >= 0");
    detail::require_finite(x, "bessel argument must be finite");

    std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
    if (x == 0.0) {
        out[0] = 1.0;
        return out;
    }

    const double ax = std::abs(x);
    const int start = detail::miller_start(n_max, ax);
    constexpr double big = 1e250;

    double j_next = 0.0;    // J_{k+1}
    double j_cur = 1e-300;  // J_k, arbitrary seed
    double norm = 0.0;
    for (int k = start; k >= 0; --k) {
        if (k <= n_max) out[static_cast<std::size_t>(k)] = j_cur;
        if (k % 2 == 0) norm += (k == 0 ? 1.0 : 2.0) * j_cur;
        if (k == 0) break;
        const double j_prev = 2.0 * k / ax * j_cur - j_next;
        j_next = j_cur;
        j_cur = j_prev;
        if (std::abs(j_cur) > big) {
            j_cur /= big;
            j_next /= big;
            norm /= big;
            for (int i = k - 1; i <= n_max; ++i)
                if (i >= 0) out[static_cast<std::size_t>(i)] /= big;
        }
    }
    for (double& v : out) v /= norm;

    // J_n(−x) = (−1)ⁿ J_n(x)
    if (x < 0.0)
        for (std::size_t k = 1; k < out.size(); k += 2) out[k] = -out[k];
    return out;
}

/// J_n(x) for any integer n; J₋ₙ = (−1)ⁿ Jₙ.
inline double bessel_j(int n, double x) {
    const int an = std::abs(n);
    const double v = bessel_j_sequence(an, x)[static_cast<std::size_t>(an)];
    return (n < 0 && (an & 1)) ? -v : v;
}

}  // namespace lzsm
