#pragma once

#include <string>

namespace dtv {

/// Multi-index n = (n0,n1,n2,n3) of the potential sum(k) n_k(n_k+1) wp(z + omega_k/2).
struct DTVIndex {
    int n0 = 0, n1 = 0, n2 = 0, n3 = 0;

    constexpr int sum() const noexcept { return n0 + n1 + n2 + n3; }
    /// Half sum of n_k(n_k+1): the weight of the attached form and its degree in Z.
    constexpr int weight() const noexcept {
        return (n0 * (n0 + 1) + n1 * (n1 + 1) + n2 * (n2 + 1) + n3 * (n3 + 1)) / 2;
    }
    constexpr bool valid() const noexcept {
        return n0 >= 0 && n1 >= 0 && n2 >= 0 && n3 >= 0 &&
               (n0 >= 1 || n1 >= 1 || n2 >= 1 || n3 >= 1);
    }
    friend constexpr bool operator==(const DTVIndex&, const DTVIndex&) noexcept = default;
};

inline std::string to_string(DTVIndex n) {
    return std::to_string(n.n0) + "-" + std::to_string(n.n1) + "-" +
           std::to_string(n.n2) + "-" + std::to_string(n.n3);
}

} // namespace dtv
