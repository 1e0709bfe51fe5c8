#include "pscb/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pscb/detect.hpp"
#include "pscb/env.hpp"
#include "pscb/errors.hpp"
#include "pscb/oracle.hpp"

namespace pscb {

std::int64_t delay_bound_d(int num_arms, double p, double delta, int horizon, double delta_change) {
    if (num_arms < 1) throw InvalidArgument("delay bound needs K >= 1");
    if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("delay bound needs p in (0,1]");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delay bound needs delta in (0,1)");
    if (horizon < 2) throw InvalidArgument("delay bound needs T >= 2");
    if (!(delta_change > 0.0 && delta_change <= 1.0)) {
        throw InvalidArgument("delay bound needs a change magnitude in (0,1]; a zero change is undetectable");
    }
    const double k = num_arms;
    const double d = 4.0 * k / (p * delta_change * delta_change) * threshold_beta(horizon, delta) + k / p;
    return static_cast<std::int64_t>(std::ceil(d));
}

bool GapAssumptionReport::satisfied() const {
    return std::all_of(segments.begin(), segments.end(), [](const SegmentLengthCheck& c) { return c.satisfied; });
}

GapAssumptionReport check_gap_assumption(const SegmentTable& table, double p, double delta) {
    GapAssumptionReport report;
    const std::size_t n = table.num_segments();
    if (n < 2) return report;

    const auto changes = change_point_report(Environment(table), 1);
    for (double gap : changes.change_gaps) {
        report.delays.push_back(delay_bound_d(table.num_arms(), p, delta, table.horizon(), gap));
    }
    for (std::size_t i = 0; i < n; ++i) {
        const std::int64_t before = i > 0 ? report.delays[i - 1] : 0;
        const std::int64_t after = i + 1 < n ? report.delays[i] : 0;
        SegmentLengthCheck check;
        check.segment = i;
        check.length = table.segment_length(i);
        check.required = 2 * std::max(before, after);
        check.satisfied = check.length >= check.required;
        report.segments.push_back(check);
    }
    return report;
}

BoundBreakdown regret_upper_bound(const SegmentTable& table, int m, double alpha, double p, double delta,
                                  double lipschitz) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("p must lie in [0,1]");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0,1)");
    const double K = table.num_arms();
    const double T = table.horizon();
    const double N = static_cast<double>(table.num_segments());

    std::vector<SuboptimalityGaps> gaps;
    for (std::size_t i = 0; i < table.num_segments(); ++i) {
        gaps.push_back(suboptimality_gaps(table, i, m, alpha));
        if (!(gaps.back().delta_min > 0.0)) {
            throw DegenerateGaps("segment " + std::to_string(i) + " has a zero minimum suboptimality gap");
        }
    }

    BoundBreakdown out;
    double gap_max = 0.0;
    for (const auto& g : gaps) {
        out.ucb_term += (6.0 * lipschitz * lipschitz * K * K * std::log(T) / (g.delta_min * g.delta_min) +
                         std::numbers::pi * std::numbers::pi / 6.0 + K) *
                        g.delta_max;
        gap_max = std::max(gap_max, g.delta_max);
    }
    out.uniform_term = gap_max * T * p;

    if (table.num_segments() > 1) {
        if (!(p > 0.0)) throw InvalidArgument("the delay term needs p > 0");
        const auto changes = change_point_report(Environment(table), m);
        for (std::size_t i = 0; i < changes.change_gaps.size(); ++i) {
            const auto d = delay_bound_d(table.num_arms(), p, delta, table.horizon(), changes.change_gaps[i]);
            out.delay_term += gaps[i + 1].delta_max * static_cast<double>(d);
        }
    }
    out.false_alarm_term = 3.0 * N * T * gap_max * K * delta;
    out.total = out.ucb_term + out.uniform_term + out.delay_term + out.false_alarm_term;
    return out;
}

TunedParams tuned_params(int horizon, int num_arms, std::optional<int> num_segments) {
    if (horizon < 2) throw InvalidArgument("tuned parameters need T >= 2");
    const double T = horizon;
    const double scale = num_segments ? static_cast<double>(*num_segments) * num_arms : num_arms;
    return {1.0 / T, std::min(1.0, std::sqrt(scale * std::log(T) / T))};
}

double lower_bound_m1() { return 1.0 / std::log(4.0 / 3.0); }
double lower_bound_m2() { return 1.0 / (24.0 * std::sqrt(std::log(4.0 / 3.0))); }

double minimax_lower_bound(int num_segments, int num_arms, int horizon) {
    if (auto failure = lower_bound_hypothesis_failure(num_segments, num_arms, horizon)) {
        throw HypothesisNotMet("lower bound requires " + *failure);
    }
    return lower_bound_m2() * std::sqrt(static_cast<double>(num_segments) * num_arms * horizon);
}

}  // namespace pscb
