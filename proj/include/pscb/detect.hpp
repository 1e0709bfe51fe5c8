#pragma once

#include <cstddef>
#include <vector>

namespace pscb {

// Binary relative entropy kl(x, y) in nats with 0 log 0 = 0. Returns +infinity when y is 0 or 1
// and x differs from it.
double binary_kl(double x, double y);

// Detection threshold beta(n, delta) = 2 Q(log(3 n^{3/2} / delta) / 2) + 6 log(1 + log n), with
// Q(x) replaced by its closed-form upper bound x + 4 log(1 + x + sqrt(2x)).
double threshold_beta(double n, double delta);

// Observation stream since the last reset, stored as prefix sums so any window mean is O(1).
class GlrBuffer {
public:
    GlrBuffer() : prefix_{0.0} {}

    // Throws InvalidArgument unless x is in [0,1].
    void push(double x);
    void reset() noexcept { prefix_.assign(1, 0.0); }

    std::size_t size() const noexcept { return prefix_.size() - 1; }
    bool empty() const noexcept { return size() == 0; }

    // Mean of observations first..last (1-based, inclusive).
    double window_mean(std::size_t first, std::size_t last) const;
    double mean() const { return window_mean(1, size()); }
    double observation(std::size_t i) const { return prefix_.at(i) - prefix_.at(i - 1); }

    const std::vector<double>& prefix_sums() const noexcept { return prefix_; }

private:
    std::vector<double> prefix_;
};

struct GlrConfig {
    double delta = 0.05;
    int check_every = 1;
    int min_samples = 2;
};

struct GlrStatistic {
    double value = 0.0;
    std::size_t split = 0;  // last index of the first half, smallest maximizer
};

// sup_s s kl(mu_{1:s}, mu_{1:n}) + (n - s) kl(mu_{s+1:n}, mu_{1:n}) over s in [1, n-1].
// Throws InsufficientData when fewer than two observations are buffered.
GlrStatistic glr_statistic(const GlrBuffer& buf);

// True iff the statistic reaches beta(n, delta). False below max(2, min_samples) observations.
bool glr_test(const GlrBuffer& buf, const GlrConfig& cfg);

// Validates a detector configuration; throws InvalidConfiguration.
void validate(const GlrConfig& cfg);

}  // namespace pscb
