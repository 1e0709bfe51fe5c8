#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "pscb/segment_table.hpp"

namespace pscb {

// A set of distinct base-arm indices held in ascending order.
class SuperArm {
public:
    SuperArm() = default;
    explicit SuperArm(std::vector<int> arms);
    SuperArm(std::initializer_list<int> arms) : SuperArm(std::vector<int>(arms)) {}

    std::span<const int> arms() const noexcept { return arms_; }
    std::size_t size() const noexcept { return arms_.size(); }
    bool empty() const noexcept { return arms_.empty(); }
    bool contains(int arm) const noexcept;

    // Bit k set iff arm k is in the set; requires every index < 64.
    std::uint64_t mask() const;
    std::string to_string() const;

    auto begin() const noexcept { return arms_.begin(); }
    auto end() const noexcept { return arms_.end(); }

    bool operator==(const SuperArm&) const = default;
    auto operator<=>(const SuperArm&) const = default;

private:
    std::vector<int> arms_;
};

struct RewardFunction {
    int m = 1;
    double alpha = 1.0;

    // Cauchy-Schwarz on the m-coordinate projection.
    double lipschitz() const;
};

double reward(const SuperArm& s, std::span<const double> mu);

// Exact top-m oracle; ties go to the lower index.
SuperArm top_m(std::span<const double> mu, int m);

// {forced} plus the m-1 best remaining arms by score (ties to the lower index).
SuperArm top_m_with(std::span<const double> score, int m, int forced);

std::vector<double> project(const SuperArm& s, std::span<const double> mu);

inline constexpr std::size_t kDefaultEnumerationCap = 100000;

// Saturates at UINT64_MAX.
std::uint64_t binomial(int n, int k);

// All C(K, m) subsets in lexicographic order.
std::vector<SuperArm> enumerate_superarms(int num_arms, int m, std::size_t cap = kDefaultEnumerationCap);

// Position of s in the enumerate_superarms(K, |s|) order.
std::size_t superarm_rank(const SuperArm& s, int num_arms);

struct SuboptimalityGaps {
    double delta_min = 0.0;
    double delta_max = 0.0;
};

// Gaps of the bad super arms, i.e. those with r(S) <= alpha * max r that do not themselves attain
// the maximum. Throws DegenerateGaps when no bad super arm exists.
SuboptimalityGaps suboptimality_gaps(std::span<const double> mu, int m, double alpha,
                                     std::size_t cap = kDefaultEnumerationCap);
SuboptimalityGaps suboptimality_gaps(const SegmentTable& table, std::size_t segment, int m, double alpha,
                                     std::size_t cap = kDefaultEnumerationCap);

}  // namespace pscb
