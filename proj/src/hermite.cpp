#include "oscillent/hermite.hpp"

#include "oscillent/errors.hpp"

#include <cmath>
#include <numbers>

namespace oscillent {

double hermite_function(std::int64_t n, double xi) {
    if (n < 0) throw DomainError("hermite_function: n must be >= 0");
    constexpr double kBig = 0x1.0p+400;
    constexpr double kLogBig = 400.0 * std::numbers::ln2;
    const double h0 = 1.0 / std::sqrt(std::sqrt(std::numbers::pi));

    double log_scale = -0.5 * xi * xi;
    double prev = h0;
    if (n == 0) return prev * std::exp(log_scale);
    double cur = std::sqrt(2.0) * xi * h0;
    for (std::int64_t k = 2; k <= n; ++k) {
        const double kd = static_cast<double>(k);
        const double next = std::sqrt(2.0 / kd) * xi * cur - std::sqrt((kd - 1.0) / kd) * prev;
        prev = cur;
        cur = next;
        if (std::abs(cur) > kBig) {
            cur /= kBig;
            prev /= kBig;
            log_scale += kLogBig;
        }
    }
    if (cur == 0.0) return 0.0;
    const double log_mag = std::log(std::abs(cur)) + log_scale;
    if (log_mag < -745.0) return 0.0;
    return std::copysign(std::exp(log_mag), cur);
}

} // namespace oscillent
