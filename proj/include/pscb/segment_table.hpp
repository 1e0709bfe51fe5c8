#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pscb {

struct Segment {
    int start = 1;  // first time step of the segment, 1-based
    std::vector<double> means;

    bool operator==(const Segment&) const = default;
};

// Piecewise-constant mean matrix over the horizon [1, T].
//
// Segment i (0-based) covers [start_i, end_i] where end_i = start_{i+1} - 1 (or T for the last
// segment). The change-points are the ends of all segments but the last, i.e. a change-point is
// the last time step of the old regime.
class SegmentTable {
public:
    // Validates every invariant; throws InvalidConfiguration on violation.
    SegmentTable(int num_arms, int horizon, std::vector<Segment> segments);

    int num_arms() const noexcept { return num_arms_; }
    int horizon() const noexcept { return horizon_; }
    std::size_t num_segments() const noexcept { return segments_.size(); }
    const std::vector<Segment>& segments() const noexcept { return segments_; }
    const Segment& segment(std::size_t i) const { return segments_.at(i); }

    int segment_start(std::size_t i) const { return segments_.at(i).start; }
    int segment_end(std::size_t i) const;
    int segment_length(std::size_t i) const { return segment_end(i) - segment_start(i) + 1; }

    // Index of the segment containing t; throws InvalidArgument when t is outside [1, T].
    std::size_t segment_index(int t) const;
    std::span<const double> means_at(int t) const;

    std::vector<int> change_points() const;

    bool operator==(const SegmentTable&) const = default;

private:
    int num_arms_;
    int horizon_;
    std::vector<Segment> segments_;
};

// CSV segment-table format:
//   K=<int>,T=<int>
//   start,mu_1,...,mu_K
// Lines starting with '#' and blank lines are ignored. Errors carry the 1-based line number.
SegmentTable parse_segment_table(std::string_view text);
SegmentTable load_segment_table(std::istream& in);
SegmentTable load_segment_table_file(const std::string& path);

std::string serialize_segment_table(const SegmentTable& table);

}  // namespace pscb
