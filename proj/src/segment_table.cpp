#include "pscb/segment_table.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>

#include "pscb/errors.hpp"

namespace pscb {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t comma = line.find(',', pos);
        out.push_back(trim(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos)));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
    T value{};
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return value;
}

int parse_header_field(std::string_view field, std::string_view key, int line) {
    if (field.substr(0, key.size()) != key || field.size() <= key.size() || field[key.size()] != '=') {
        throw ParseError(line, "expected header field '" + std::string(key) + "=<int>', got '" +
                                   std::string(field) + "'");
    }
    auto value = parse_number<int>(field.substr(key.size() + 1));
    if (!value) throw ParseError(line, "header field '" + std::string(key) + "' is not an integer");
    return *value;
}

}  // namespace

SegmentTable::SegmentTable(int num_arms, int horizon, std::vector<Segment> segments)
    : num_arms_(num_arms), horizon_(horizon), segments_(std::move(segments)) {
    if (num_arms_ < 1) throw InvalidConfiguration("segment table needs K >= 1");
    if (horizon_ < 1) throw InvalidConfiguration("segment table needs T >= 1");
    if (segments_.empty()) throw InvalidConfiguration("segment table has no segments");
    if (segments_.front().start != 1) throw InvalidConfiguration("first segment must start at t=1");
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const Segment& seg = segments_[i];
        if (seg.means.size() != static_cast<std::size_t>(num_arms_)) {
            throw InvalidConfiguration("segment " + std::to_string(i) + " has " +
                                       std::to_string(seg.means.size()) + " means, expected " +
                                       std::to_string(num_arms_));
        }
        if (seg.start > horizon_) {
            throw InvalidConfiguration("segment " + std::to_string(i) + " starts after the horizon");
        }
        for (double mu : seg.means) {
            if (!(mu >= 0.0 && mu <= 1.0)) {
                throw InvalidConfiguration("segment " + std::to_string(i) + " has a mean outside [0,1]");
            }
        }
        if (i > 0) {
            if (seg.start <= segments_[i - 1].start) {
                throw InvalidConfiguration("segment start times must be strictly increasing");
            }
            if (seg.means == segments_[i - 1].means) {
                throw InvalidConfiguration("segments " + std::to_string(i - 1) + " and " + std::to_string(i) +
                                           " have identical means");
            }
        }
    }
}

int SegmentTable::segment_end(std::size_t i) const {
    if (i >= segments_.size()) throw InvalidArgument("segment index out of range");
    return i + 1 < segments_.size() ? segments_[i + 1].start - 1 : horizon_;
}

std::size_t SegmentTable::segment_index(int t) const {
    if (t < 1 || t > horizon_) {
        throw InvalidArgument("time step " + std::to_string(t) + " outside [1, " + std::to_string(horizon_) + "]");
    }
    auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                               [](int value, const Segment& s) { return value < s.start; });
    return static_cast<std::size_t>(std::distance(segments_.begin(), it)) - 1;
}

std::span<const double> SegmentTable::means_at(int t) const {
    return segments_[segment_index(t)].means;
}

std::vector<int> SegmentTable::change_points() const {
    std::vector<int> out;
    for (std::size_t i = 0; i + 1 < segments_.size(); ++i) out.push_back(segment_end(i));
    return out;
}

SegmentTable parse_segment_table(std::string_view text) {
    std::optional<int> num_arms;
    std::optional<int> horizon;
    std::vector<Segment> segments;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        std::string_view line = trim(raw);
        if (line_no == 1 && line.substr(0, 3) == "\xEF\xBB\xBF") line = trim(line.substr(3));
        if (line.empty() || line.front() == '#') continue;

        auto fields = split_fields(line);
        if (!num_arms) {
            if (fields.size() != 2) throw ParseError(line_no, "header must be 'K=<int>,T=<int>'");
            num_arms = parse_header_field(fields[0], "K", line_no);
            horizon = parse_header_field(fields[1], "T", line_no);
            if (*num_arms < 1) throw ParseError(line_no, "K must be >= 1");
            if (*horizon < 1) throw ParseError(line_no, "T must be >= 1");
            continue;
        }

        if (fields.size() != static_cast<std::size_t>(*num_arms) + 1) {
            throw ParseError(line_no, "expected " + std::to_string(*num_arms + 1) + " fields, got " +
                                          std::to_string(fields.size()));
        }
        auto start = parse_number<int>(fields[0]);
        if (!start) throw ParseError(line_no, "start time '" + std::string(fields[0]) + "' is not an integer");
        if (segments.empty() && *start != 1) throw ParseError(line_no, "first segment must start at 1");
        if (!segments.empty() && *start <= segments.back().start) {
            throw ParseError(line_no, "start times must be strictly increasing");
        }
        if (*start < 1 || *start > *horizon) throw ParseError(line_no, "start time outside [1, T]");

        Segment seg;
        seg.start = *start;
        for (std::size_t k = 1; k < fields.size(); ++k) {
            auto mu = parse_number<double>(fields[k]);
            if (!mu) throw ParseError(line_no, "mean '" + std::string(fields[k]) + "' is not a number");
            if (!(*mu >= 0.0 && *mu <= 1.0)) {
                throw ParseError(line_no, "mean " + std::string(fields[k]) + " outside [0,1]");
            }
            seg.means.push_back(*mu);
        }
        if (!segments.empty() && seg.means == segments.back().means) {
            throw ParseError(line_no, "segment repeats the previous segment's means (no change)");
        }
        segments.push_back(std::move(seg));
    }

    if (!num_arms) throw ParseError(line_no, "missing 'K=<int>,T=<int>' header");
    if (segments.empty()) throw ParseError(line_no, "no segment rows");
    return SegmentTable(*num_arms, *horizon, std::move(segments));
}

SegmentTable load_segment_table(std::istream& in) {
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_segment_table(text);
}

SegmentTable load_segment_table_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open segment table '" + path + "'");
    return load_segment_table(in);
}

std::string serialize_segment_table(const SegmentTable& table) {
    std::ostringstream out;
    out << "K=" << table.num_arms() << ",T=" << table.horizon() << '\n';
    char buf[32];
    for (const Segment& seg : table.segments()) {
        out << seg.start;
        for (double mu : seg.means) {
            auto res = std::to_chars(buf, buf + sizeof buf, mu);
            out << ',' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace pscb
