#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pscb/segment_table.hpp"

namespace pscb {

// Detection-delay bound ceil(4K beta(T, delta) / (p Delta^2) + K/p).
std::int64_t delay_bound_d(int num_arms, double p, double delta, int horizon, double delta_change);

struct SegmentLengthCheck {
    std::size_t segment = 0;   // 0-based
    int length = 0;
    std::int64_t required = 0;  // 2 max(d of the change before, d of the change after)
    bool satisfied = false;
};

struct GapAssumptionReport {
    std::vector<std::int64_t> delays;         // d_i per change-point
    std::vector<SegmentLengthCheck> segments;  // empty for stationary tables

    bool satisfied() const;
};

// Checks that every segment is at least twice as long as the detection delays of its bounding
// change-points (the first segment only sees d_1, the last only d_{N-1}).
GapAssumptionReport check_gap_assumption(const SegmentTable& table, double p, double delta);

struct BoundBreakdown {
    double ucb_term = 0.0;
    double uniform_term = 0.0;
    double delay_term = 0.0;
    double false_alarm_term = 0.0;
    double total = 0.0;
};

// Piecewise-stationary regret upper bound, term by term:
//   sum_i C_i + gap_max T p + sum_i gap_max^{i+1} d_i + 3 N T gap_max K delta
// with C_i = (6 L^2 K^2 log T / (gap_min^i)^2 + pi^2/6 + K) gap_max^i.
BoundBreakdown regret_upper_bound(const SegmentTable& table, int m, double alpha, double p, double delta, double lipschitz);

struct TunedParams {
    double delta = 0.0;
    double p = 0.0;
};

// delta = 1/T; p = sqrt(N K log T / T) when N is known, sqrt(K log T / T) otherwise; p <= 1.
TunedParams tuned_params(int horizon, int num_arms, std::optional<int> num_segments);

double lower_bound_m1();  // 1 / log(4/3)
double lower_bound_m2();  // 1 / (24 sqrt(log(4/3)))

// M2 sqrt(N K T); throws HypothesisNotMet when K < 3 or T < M1 N (K-1)^2 / K.
double minimax_lower_bound(int num_segments, int num_arms, int horizon);

}  // namespace pscb
