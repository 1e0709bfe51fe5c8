#include "pscb/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pscb/errors.hpp"

namespace pscb {

SuperArm::SuperArm(std::vector<int> arms) : arms_(std::move(arms)) {
    std::sort(arms_.begin(), arms_.end());
    if (!arms_.empty() && arms_.front() < 0) throw InvalidArgument("negative base-arm index");
    if (std::adjacent_find(arms_.begin(), arms_.end()) != arms_.end()) {
        throw InvalidArgument("duplicate base-arm index in super arm");
    }
}

bool SuperArm::contains(int arm) const noexcept {
    return std::binary_search(arms_.begin(), arms_.end(), arm);
}

std::uint64_t SuperArm::mask() const {
    std::uint64_t bits = 0;
    for (int k : arms_) {
        if (k >= 64) throw InvalidArgument("super-arm mask needs arm indices < 64");
        bits |= std::uint64_t{1} << k;
    }
    return bits;
}

std::string SuperArm::to_string() const {
    std::string out = "{";
    for (std::size_t i = 0; i < arms_.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(arms_[i]);
    }
    return out + "}";
}

double RewardFunction::lipschitz() const { return std::sqrt(static_cast<double>(m)); }

double reward(const SuperArm& s, std::span<const double> mu) {
    double total = 0.0;
    for (int k : s) {
        if (static_cast<std::size_t>(k) >= mu.size()) {
            throw InvalidArgument("arm " + std::to_string(k) + " out of range for K=" + std::to_string(mu.size()));
        }
        total += mu[static_cast<std::size_t>(k)];
    }
    return total;
}

namespace {

// Indices of the `count` best scores among `candidates`, descending, ties to the lower index.
std::vector<int> best_indices(std::span<const double> score, std::vector<int> candidates, std::size_t count) {
    auto better = [&](int a, int b) {
        double sa = score[static_cast<std::size_t>(a)];
        double sb = score[static_cast<std::size_t>(b)];
        if (sa != sb) return sa > sb;
        return a < b;
    };
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(count), candidates.end(),
                      better);
    candidates.resize(count);
    return candidates;
}

}  // namespace

SuperArm top_m(std::span<const double> mu, int m) {
    if (m < 1 || static_cast<std::size_t>(m) > mu.size()) {
        throw InvalidArgument("top_m needs 1 <= m <= K (m=" + std::to_string(m) + ", K=" + std::to_string(mu.size()) +
                              ")");
    }
    std::vector<int> all(mu.size());
    std::iota(all.begin(), all.end(), 0);
    return SuperArm(best_indices(mu, std::move(all), static_cast<std::size_t>(m)));
}

SuperArm top_m_with(std::span<const double> score, int m, int forced) {
    if (m < 1 || static_cast<std::size_t>(m) > score.size()) throw InvalidArgument("top_m_with needs 1 <= m <= K");
    if (forced < 0 || static_cast<std::size_t>(forced) >= score.size()) {
        throw InvalidArgument("forced arm out of range");
    }
    std::vector<int> rest;
    rest.reserve(score.size() - 1);
    for (int k = 0; k < static_cast<int>(score.size()); ++k) {
        if (k != forced) rest.push_back(k);
    }
    auto picked = best_indices(score, std::move(rest), static_cast<std::size_t>(m - 1));
    picked.push_back(forced);
    return SuperArm(std::move(picked));
}

std::vector<double> project(const SuperArm& s, std::span<const double> mu) {
    std::vector<double> out(mu.size(), 0.0);
    for (int k : s) {
        if (static_cast<std::size_t>(k) < mu.size()) out[static_cast<std::size_t>(k)] = mu[static_cast<std::size_t>(k)];
    }
    return out;
}

std::uint64_t binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t acc = 1;
    for (int i = 1; i <= k; ++i) {
        const auto factor = static_cast<std::uint64_t>(n - k + i);
        // Saturates slightly early near 2^64, far beyond any enumerable size.
        if (acc > kMax / factor) return kMax;
        acc = acc * factor / static_cast<std::uint64_t>(i);
    }
    return acc;
}

std::vector<SuperArm> enumerate_superarms(int num_arms, int m, std::size_t cap) {
    if (num_arms < 1 || m < 1 || m > num_arms) {
        throw InvalidArgument("enumerate_superarms needs 1 <= m <= K");
    }
    const std::uint64_t total = binomial(num_arms, m);
    if (total > cap) {
        throw CapacityError("C(" + std::to_string(num_arms) + "," + std::to_string(m) + ") = " + std::to_string(total) +
                            " exceeds the enumeration cap " + std::to_string(cap));
    }
    std::vector<SuperArm> out;
    out.reserve(static_cast<std::size_t>(total));
    std::vector<int> current(static_cast<std::size_t>(m));
    std::iota(current.begin(), current.end(), 0);
    while (true) {
        out.emplace_back(current);
        int i = m - 1;
        while (i >= 0 && current[static_cast<std::size_t>(i)] == num_arms - m + i) --i;
        if (i < 0) break;
        ++current[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < m; ++j) current[static_cast<std::size_t>(j)] = current[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

std::size_t superarm_rank(const SuperArm& s, int num_arms) {
    const int m = static_cast<int>(s.size());
    std::size_t rank = 0;
    int prev = -1;
    int pos = 0;
    for (int a : s) {
        if (a >= num_arms) throw InvalidArgument("arm index out of range in superarm_rank");
        for (int j = prev + 1; j < a; ++j) rank += static_cast<std::size_t>(binomial(num_arms - 1 - j, m - 1 - pos));
        prev = a;
        ++pos;
    }
    return rank;
}

SuboptimalityGaps suboptimality_gaps(std::span<const double> mu, int m, double alpha, std::size_t cap) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must lie in (0,1]");
    const auto arms = enumerate_superarms(static_cast<int>(mu.size()), m, cap);
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& s : arms) best = std::max(best, reward(s, mu));

    const double target = alpha * best;
    double bad_max = -std::numeric_limits<double>::infinity();
    double bad_min = std::numeric_limits<double>::infinity();
    bool any_bad = false;
    for (const auto& s : arms) {
        double r = reward(s, mu);
        if (r <= target && r < best) {
            any_bad = true;
            bad_max = std::max(bad_max, r);
            bad_min = std::min(bad_min, r);
        }
    }
    if (!any_bad) throw DegenerateGaps("no bad super arm: every super arm is within alpha of the optimum");
    return {target - bad_max, target - bad_min};
}

SuboptimalityGaps suboptimality_gaps(const SegmentTable& table, std::size_t segment, int m, double alpha,
                                     std::size_t cap) {
    return suboptimality_gaps(table.segment(segment).means, m, alpha, cap);
}

}  // namespace pscb
