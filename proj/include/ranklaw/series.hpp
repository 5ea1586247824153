#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <limits>
#include <tuple>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ranklaw {

// One raw input row: an item label and its positive size.
struct RawRecord {
  std::string label;
  double size = 0.0;
};

// Parse failure carrying the 1-based line number of the offending row.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Delimited-text layout: which columns hold the label and the size.
struct DelimiterConfig {
  char delimiter = ',';
  std::size_t label_column = 0;
  std::size_t size_column = 1;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == delim) {
      out.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

inline std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || s.empty()) return std::nullopt;
  return v;
}

}  // namespace detail

// Reads one record per line. The header row, if any, is recognized by a
// non-numeric size field on the first line and skipped.
inline std::vector<RawRecord> parse_records(std::istream& in, const DelimiterConfig& cfg = {}) {
  std::vector<RawRecord> records;
  std::string line;
  std::size_t line_no = 0;
  bool first_content_line = true;
  const std::size_t need = std::max(cfg.label_column, cfg.size_column) + 1;

  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    auto fields = detail::split(line, cfg.delimiter);
    if (fields.size() < need) {
      throw ParseError(line_no, "expected at least " + std::to_string(need) + " columns, got " +
                                    std::to_string(fields.size()));
    }
    auto size = detail::parse_double(fields[cfg.size_column]);
    if (!size) {
      if (first_content_line) {  // header row
        first_content_line = false;
        continue;
      }
      throw ParseError(line_no, "size field is not a number: '" +
                                    std::string(detail::trim(fields[cfg.size_column])) + "'");
    }
    first_content_line = false;
    if (!(*size > 0.0) || !std::isfinite(*size)) {
      throw ParseError(line_no, "size must be a positive finite number, got " +
                                    std::string(detail::trim(fields[cfg.size_column])));
    }
    std::string label(detail::trim(fields[cfg.label_column]));
    if (label.empty()) throw ParseError(line_no, "empty label");
    records.push_back({std::move(label), *size});
  }
  if (records.empty()) throw ParseError(line_no == 0 ? 1 : line_no, "no records in input");
  return records;
}

struct RankedEntry {
  int rank = 0;
  std::string label;
  double size = 0.0;
};

// A finite ranking: ranks exactly 1..N, sizes non-increasing, N >= 3.
// Immutable after construction; the constructor enforces the invariants.
class RankedSeries {
 public:
  explicit RankedSeries(std::vector<RankedEntry> entries) : entries_(std::move(entries)) {
    if (entries_.size() < 3) throw std::invalid_argument("ranked series needs at least 3 entries");
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      const auto& e = entries_[i];
      if (e.rank != static_cast<int>(i) + 1) throw std::invalid_argument("ranks must be exactly 1..N");
      if (!(e.size > 0.0) || !std::isfinite(e.size)) throw std::invalid_argument("sizes must be positive and finite");
      if (i > 0 && entries_[i - 1].size < e.size) throw std::invalid_argument("sizes must be non-increasing in rank");
    }
  }

  int size() const { return static_cast<int>(entries_.size()); }
  const std::vector<RankedEntry>& entries() const { return entries_; }
  const RankedEntry& at_rank(int rank) const { return entries_.at(static_cast<std::size_t>(rank) - 1); }

  std::vector<double> sizes() const {
    std::vector<double> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.size);
    return out;
  }

 private:
  std::vector<RankedEntry> entries_;
};

enum class TiePolicy { label_ascending, label_descending, input_order };

// Sorts by size descending and assigns dense ranks 1..N. Equal sizes are
// ordered by the tie policy so the result is deterministic.
inline RankedSeries rank_series(std::vector<RawRecord> records, TiePolicy ties = TiePolicy::label_ascending) {
  if (records.size() < 3) throw std::invalid_argument("too few records: need at least 3 to rank");
  std::stable_sort(records.begin(), records.end(), [ties](const RawRecord& a, const RawRecord& b) {
    if (a.size != b.size) return a.size > b.size;
    switch (ties) {
      case TiePolicy::label_ascending: return a.label < b.label;
      case TiePolicy::label_descending: return a.label > b.label;
      case TiePolicy::input_order: return false;
    }
    return false;
  });
  std::vector<RankedEntry> entries;
  entries.reserve(records.size());
  int rank = 1;
  for (auto& r : records) entries.push_back({rank++, std::move(r.label), r.size});
  return RankedSeries(std::move(entries));
}

struct UniversalPoint {
  double u = 0.0;
  double size = 0.0;
};

// Ranking mapped onto u = r/(N+1) in (0,1); keeps the original count.
class UniversalSeries {
 public:
  UniversalSeries(std::vector<UniversalPoint> points, int n) : points_(std::move(points)), n_(n) {
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (!(points_[i].u > 0.0) || !(points_[i].u < 1.0)) throw std::invalid_argument("u must lie in (0,1)");
      if (i > 0 && points_[i].u <= points_[i - 1].u) throw std::invalid_argument("u must be strictly increasing");
    }
  }

  const std::vector<UniversalPoint>& points() const { return points_; }
  int n() const { return n_; }

 private:
  std::vector<UniversalPoint> points_;
  int n_;
};

inline UniversalSeries to_universal(const RankedSeries& series) {
  const double denom = static_cast<double>(series.size()) + 1.0;
  std::vector<UniversalPoint> pts;
  pts.reserve(series.entries().size());
  for (const auto& e : series.entries()) pts.push_back({static_cast<double>(e.rank) / denom, e.size});
  return UniversalSeries(std::move(pts), series.size());
}

enum class MotionVerdict { stayed_in_top_k, moved_down_out, moved_up_in, outside_both, new_entry, departed };

inline std::string_view motion_verdict_name(MotionVerdict v) {
  switch (v) {
    case MotionVerdict::stayed_in_top_k: return "stayed-in-top-K";
    case MotionVerdict::moved_down_out: return "moved-down-out";
    case MotionVerdict::moved_up_in: return "moved-up-in";
    case MotionVerdict::outside_both: return "outside-both";
    case MotionVerdict::new_entry: return "new";
    case MotionVerdict::departed: return "departed";
  }
  return "?";
}

struct RankMotion {
  std::string label;
  std::optional<int> rank_a;
  std::optional<int> rank_b;
  MotionVerdict verdict = MotionVerdict::outside_both;
};

// Joins two rankings on label and classifies each label's move relative to
// the top-k cut. Output is ordered by rank_b, then rank_a, then label.
inline std::vector<RankMotion> rank_motion(const RankedSeries& series_a, const RankedSeries& series_b, int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (k > series_a.size() && k > series_b.size())
    throw std::invalid_argument("k exceeds the length of both series");

  std::unordered_map<std::string_view, int> in_b;
  for (const auto& e : series_b.entries()) in_b.emplace(e.label, e.rank);

  std::vector<RankMotion> out;
  std::unordered_map<std::string_view, bool> seen;
  for (const auto& e : series_a.entries()) {
    RankMotion m;
    m.label = e.label;
    m.rank_a = e.rank;
    auto it = in_b.find(e.label);
    if (it == in_b.end()) {
      m.verdict = MotionVerdict::departed;
    } else {
      m.rank_b = it->second;
      const bool top_a = e.rank <= k;
      const bool top_b = it->second <= k;
      if (top_a && top_b) m.verdict = MotionVerdict::stayed_in_top_k;
      else if (top_a && !top_b) m.verdict = MotionVerdict::moved_down_out;
      else if (!top_a && top_b) m.verdict = MotionVerdict::moved_up_in;
      else m.verdict = MotionVerdict::outside_both;
    }
    seen.emplace(e.label, true);
    out.push_back(std::move(m));
  }
  for (const auto& e : series_b.entries()) {
    if (seen.contains(e.label)) continue;
    RankMotion m;
    m.label = e.label;
    m.rank_b = e.rank;
    m.verdict = MotionVerdict::new_entry;
    out.push_back(std::move(m));
  }

  auto key = [](const RankMotion& m) {
    const int big = std::numeric_limits<int>::max();
    return std::make_tuple(m.rank_b.value_or(big), m.rank_a.value_or(big), std::string_view(m.label));
  };
  std::sort(out.begin(), out.end(), [&key](const RankMotion& a, const RankMotion& b) { return key(a) < key(b); });
  return out;
}

// Writes the same delimited format parse_records consumes, header included.
// Sizes are printed with shortest round-tripping precision.
inline void write_series(const RankedSeries& series, std::ostream& out, char delimiter = ',') {
  out << "label" << delimiter << "size\n";
  char buf[64];
  for (const auto& e : series.entries()) {
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), e.size);
    out << e.label << delimiter << std::string_view(buf, static_cast<std::size_t>(ptr - buf)) << '\n';
  }
}

}  // namespace ranklaw
