#include "pscb/detect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pscb/errors.hpp"

namespace pscb {

namespace {

double xlogx_over(double x, double y) {
    if (x == 0.0) return 0.0;
    if (y == 0.0) return std::numeric_limits<double>::infinity();
    return x * std::log(x / y);
}

}  // namespace

double binary_kl(double x, double y) {
    if (!(x >= 0.0 && x <= 1.0) || !(y >= 0.0 && y <= 1.0)) throw InvalidArgument("binary_kl arguments must lie in [0,1]");
    if (x == y) return 0.0;
    return std::max(0.0, xlogx_over(x, y) + xlogx_over(1.0 - x, 1.0 - y));
}

double threshold_beta(double n, double delta) {
    if (n < 2.0) throw InvalidArgument("threshold_beta needs n >= 2");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("threshold_beta needs delta in (0,1)");
    const double x = std::log(3.0 * n * std::sqrt(n) / delta) / 2.0;
    const double q = x + 4.0 * std::log(1.0 + x + std::sqrt(2.0 * x));
    return 2.0 * q + 6.0 * std::log(1.0 + std::log(n));
}

void GlrBuffer::push(double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument("GLR observation outside [0,1]");
    prefix_.push_back(prefix_.back() + x);
}

double GlrBuffer::window_mean(std::size_t first, std::size_t last) const {
    if (first < 1 || last < first || last > size()) throw InvalidArgument("window outside the buffer");
    // Rounding can push a difference of prefix sums a hair outside [0,1].
    return std::clamp((prefix_[last] - prefix_[first - 1]) / static_cast<double>(last - first + 1), 0.0, 1.0);
}

GlrStatistic glr_statistic(const GlrBuffer& buf) {
    const std::size_t n = buf.size();
    if (n < 2) throw InsufficientData("GLR statistic needs at least two observations");
    const auto& prefix = buf.prefix_sums();
    const double total = prefix[n];
    const double pooled = std::clamp(total / static_cast<double>(n), 0.0, 1.0);

    GlrStatistic best{-1.0, 1};
    for (std::size_t s = 1; s < n; ++s) {
        const double head = std::clamp(prefix[s] / static_cast<double>(s), 0.0, 1.0);
        const double tail = std::clamp((total - prefix[s]) / static_cast<double>(n - s), 0.0, 1.0);
        const double value = static_cast<double>(s) * binary_kl(head, pooled) +
                             static_cast<double>(n - s) * binary_kl(tail, pooled);
        if (value > best.value) best = {value, s};
    }
    return best;
}

void validate(const GlrConfig& cfg) {
    if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) throw InvalidConfiguration("GLR delta must lie in (0,1)");
    if (cfg.check_every < 1) throw InvalidConfiguration("GLR check_every must be >= 1");
    if (cfg.min_samples < 2) throw InvalidConfiguration("GLR min_samples must be >= 2");
}

bool glr_test(const GlrBuffer& buf, const GlrConfig& cfg) {
    const std::size_t n = buf.size();
    if (n < static_cast<std::size_t>(std::max(2, cfg.min_samples))) return false;
    return glr_statistic(buf).value >= threshold_beta(static_cast<double>(n), cfg.delta);
}

}  // namespace pscb
