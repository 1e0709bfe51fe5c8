#include "pscb/env.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "pscb/errors.hpp"
#include "pscb/oracle.hpp"
#include "pscb/rng.hpp"

namespace pscb {

Environment::Environment(SegmentTable table, std::uint64_t seed)
    : table_(std::make_shared<const SegmentTable>(std::move(table))), seed_(seed) {}

Environment Environment::with_seed(std::uint64_t seed) const {
    Environment copy = *this;
    copy.seed_ = seed;
    return copy;
}

double sample_reward(const Environment& env, int t, int arm) {
    auto mu = env.means_at(t);
    if (arm < 0 || static_cast<std::size_t>(arm) >= mu.size()) throw InvalidArgument("arm index out of range");
    const std::uint64_t bits = hash_combine(hash_combine(env.seed(), static_cast<std::uint64_t>(t)),
                                            static_cast<std::uint64_t>(arm));
    return to_unit_interval(bits) < mu[static_cast<std::size_t>(arm)] ? 1.0 : 0.0;
}

std::vector<double> sample_rewards(const Environment& env, int t) {
    std::vector<double> out(static_cast<std::size_t>(env.num_arms()));
    for (int k = 0; k < env.num_arms(); ++k) out[static_cast<std::size_t>(k)] = sample_reward(env, t, k);
    return out;
}

ChangePointReport change_point_report(const Environment& env, int m) {
    const SegmentTable& table = env.table();
    if (m < 1 || m > table.num_arms()) throw InvalidArgument("change_point_report needs 1 <= m <= K");
    ChangePointReport report;
    for (std::size_t i = 0; i + 1 < table.num_segments(); ++i) {
        const auto& before = table.segment(i).means;
        const auto& after = table.segment(i + 1).means;
        double gap = 0.0;
        for (std::size_t k = 0; k < before.size(); ++k) gap = std::max(gap, std::abs(after[k] - before[k]));
        const int nu = table.segment_end(i);
        report.change_points.push_back(nu);
        report.change_gaps.push_back(gap);
        if (top_m(before, m) != top_m(after, m)) report.optimal_super_arm_changes.push_back(nu);
    }
    return report;
}

namespace {

std::vector<Segment> equal_segments(int horizon, const std::vector<std::vector<double>>& rows) {
    const int n = static_cast<int>(rows.size());
    const int length = horizon / n;
    std::vector<Segment> segments;
    for (int i = 0; i < n; ++i) segments.push_back({1 + i * length, rows[static_cast<std::size_t>(i)]});
    return segments;
}

std::vector<std::vector<double>> default_synthetic_rows() {
    // Arm 0 drops by 0.6, then arm 1 drops by 0.6; the last two changes are small moves of arms
    // outside the top-2 set {2,3}.
    return {
        {0.9, 0.8, 0.5, 0.4, 0.3, 0.2},
        {0.3, 0.8, 0.5, 0.4, 0.3, 0.2},
        {0.3, 0.2, 0.5, 0.4, 0.3, 0.2},
        {0.3, 0.2, 0.5, 0.4, 0.3, 0.1},
        {0.3, 0.2, 0.5, 0.4, 0.25, 0.1},
    };
}

std::vector<std::vector<double>> generic_synthetic_rows(int num_arms, int num_segments) {
    std::vector<double> mu(static_cast<std::size_t>(num_arms));
    for (int k = 0; k < num_arms; ++k) {
        mu[static_cast<std::size_t>(k)] = num_arms == 1 ? 0.9 : 0.9 - 0.7 * k / (num_arms - 1);
    }
    std::vector<std::vector<double>> rows{mu};
    for (int i = 1; i < num_segments; ++i) {
        double& x = mu[static_cast<std::size_t>((i - 1) % num_arms)];
        x = std::clamp(x >= 0.5 ? x - 0.6 : x + 0.6, 0.0, 1.0);
        rows.push_back(mu);
    }
    return rows;
}

}  // namespace

Environment build_synthetic(int horizon, int num_arms, int m, int num_segments, std::uint64_t seed) {
    if (m < 1) throw InvalidConfiguration("synthetic instance needs m >= 1");
    if (num_arms < m) throw InvalidConfiguration("synthetic instance needs K >= m");
    if (num_segments < 1) throw InvalidConfiguration("synthetic instance needs N >= 1");
    if (horizon < 1 || num_segments > horizon) throw InvalidConfiguration("synthetic instance needs 1 <= N <= T");

    auto rows = (num_arms == 6 && num_segments == 5) ? default_synthetic_rows()
                                                     : generic_synthetic_rows(num_arms, num_segments);
    return Environment(SegmentTable(num_arms, horizon, equal_segments(horizon, rows)), seed);
}

double hard_instance_epsilon(int num_arms, int horizon) {
    return (num_arms - 1) / (4.0 * std::sqrt(static_cast<double>(horizon) * num_arms * std::log(4.0 / 3.0)));
}

std::optional<std::string> lower_bound_hypothesis_failure(int num_segments, int num_arms, int horizon) {
    if (num_arms < 3) return "K >= 3 (got K=" + std::to_string(num_arms) + ")";
    if (num_segments < 1) return "N >= 1 (got N=" + std::to_string(num_segments) + ")";
    const double threshold =
        num_segments * static_cast<double>(num_arms - 1) * (num_arms - 1) / (num_arms * std::log(4.0 / 3.0));
    if (static_cast<double>(horizon) < threshold) {
        return "T >= N (K-1)^2 / (K log(4/3)) = " + std::to_string(threshold) + " (got T=" + std::to_string(horizon) +
               ")";
    }
    return std::nullopt;
}

Environment build_hard_instance(int num_arms, int horizon, int num_segments, std::uint64_t seed) {
    if (auto failure = lower_bound_hypothesis_failure(num_segments, num_arms, horizon)) {
        throw InvalidConfiguration("hard instance requires " + *failure);
    }
    const int length = (horizon + num_segments - 1) / num_segments;
    if (horizon - (num_segments - 1) * length < 1) {
        throw InvalidConfiguration("hard instance layout leaves the last segment empty");
    }
    const double eps = hard_instance_epsilon(num_arms, horizon);

    std::mt19937_64 rng(seed);
    std::vector<Segment> segments;
    int best = std::uniform_int_distribution<int>(0, num_arms - 1)(rng);
    for (int i = 0; i < num_segments; ++i) {
        if (i > 0) {
            int draw = std::uniform_int_distribution<int>(0, num_arms - 2)(rng);
            best = draw >= best ? draw + 1 : draw;
        }
        std::vector<double> mu(static_cast<std::size_t>(num_arms), 0.5);
        mu[static_cast<std::size_t>(best)] = 0.5 + eps;
        segments.push_back({1 + i * length, std::move(mu)});
    }
    return Environment(SegmentTable(num_arms, horizon, std::move(segments)), seed);
}

}  // namespace pscb
