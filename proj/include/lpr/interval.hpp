#pragma once

#include <algorithm>
#include <cstddef>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "lpr/error.hpp"
#include "lpr/rational.hpp"

namespace lpr {

/// Half-open interval (a, b] with exact rational endpoints.
///
/// The empty set is a distinguished value (`Interval::empty()`); a
/// non-empty interval always has a < b.
class Interval {
 public:
  Interval(Rational lower, Rational upper)
      : lower_(std::move(lower)), upper_(std::move(upper)), empty_(false) {
    if (!(lower_ < upper_))
      throw DomainError("Interval: lower endpoint must be below upper endpoint (" +
                        lpr::to_string(lower_) + ", " + lpr::to_string(upper_) + "]");
  }

  static Interval empty() { return Interval(); }

  /// (lower, upper] when lower < upper, Empty otherwise.
  static Interval between(const Rational& lower, const Rational& upper) {
    return lower < upper ? Interval(lower, upper) : Interval();
  }

  bool is_empty() const { return empty_; }
  const Rational& lower() const { return lower_; }
  const Rational& upper() const { return upper_; }

  Rational length() const { return empty_ ? Rational(0) : Rational(upper_ - lower_); }
  Rational centre() const { return (lower_ + upper_) / 2; }

  /// Same centre, double length.
  Interval doubled() const {
    if (empty_) return Interval();
    Rational half = (upper_ - lower_) / 2;
    return Interval(lower_ - half, upper_ + half);
  }

  Interval shifted(const Rational& by) const {
    return empty_ ? Interval() : Interval(lower_ + by, upper_ + by);
  }

  Interval scaled(const Rational& factor) const {
    if (factor <= 0) throw DomainError("Interval::scaled: factor must be positive");
    return empty_ ? Interval() : Interval(lower_ * factor, upper_ * factor);
  }

  bool contains(const Rational& x) const { return !empty_ && lower_ < x && x <= upper_; }

  bool contains(const Interval& other) const {
    if (other.empty_) return true;
    return !empty_ && lower_ <= other.lower_ && other.upper_ <= upper_;
  }

  bool intersects(const Interval& other) const {
    if (empty_ || other.empty_) return false;
    return std::max(lower_, other.lower_) < std::min(upper_, other.upper_);
  }

  Interval intersection(const Interval& other) const {
    if (!intersects(other)) return Interval();
    return Interval(std::max(lower_, other.lower_), std::min(upper_, other.upper_));
  }

  friend bool operator==(const Interval& x, const Interval& y) {
    if (x.empty_ || y.empty_) return x.empty_ == y.empty_;
    return x.lower_ == y.lower_ && x.upper_ == y.upper_;
  }
  friend bool operator!=(const Interval& x, const Interval& y) { return !(x == y); }

  std::string str() const {
    if (empty_) return "empty";
    return "(" + lpr::to_string(lower_) + ", " + lpr::to_string(upper_) + "]";
  }

  friend std::ostream& operator<<(std::ostream& os, const Interval& i) { return os << i.str(); }

 private:
  Interval() = default;

  Rational lower_;
  Rational upper_;
  bool empty_ = true;
};

/// Pairwise disjoint, non-empty intervals sorted by left endpoint.
class DisjointFamily {
 public:
  DisjointFamily() = default;

  explicit DisjointFamily(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
    for (const auto& i : intervals_)
      if (i.is_empty()) throw DomainError("DisjointFamily: empty member");
    std::sort(intervals_.begin(), intervals_.end(),
              [](const Interval& x, const Interval& y) { return x.lower() < y.lower(); });
    for (std::size_t j = 1; j < intervals_.size(); ++j)
      if (intervals_[j - 1].upper() > intervals_[j].lower())
        throw PreconditionError("DisjointFamily: " + intervals_[j - 1].str() + " overlaps " +
                                intervals_[j].str());
  }

  std::size_t size() const { return intervals_.size(); }
  bool empty() const { return intervals_.empty(); }
  const Interval& operator[](std::size_t j) const { return intervals_[j]; }
  auto begin() const { return intervals_.begin(); }
  auto end() const { return intervals_.end(); }
  const std::vector<Interval>& intervals() const { return intervals_; }

  Rational min_length() const {
    if (intervals_.empty()) throw DomainError("DisjointFamily::min_length: empty family");
    Rational m = intervals_.front().length();
    for (const auto& i : intervals_) m = std::min(m, i.length());
    return m;
  }

  DisjointFamily scaled(const Rational& factor) const {
    std::vector<Interval> out;
    out.reserve(intervals_.size());
    for (const auto& i : intervals_) out.push_back(i.scaled(factor));
    return DisjointFamily(std::move(out));
  }

  friend bool operator==(const DisjointFamily& x, const DisjointFamily& y) {
    return x.intervals_ == y.intervals_;
  }

 private:
  std::vector<Interval> intervals_;
};

struct NormalizedFamily {
  Rational scale;
  DisjointFamily family;
};

/// Dilates the family so that every member has length at least 4.
/// The factor is 1 when this already holds, 4 / (min length) otherwise.
inline NormalizedFamily normalize_family(const DisjointFamily& family) {
  if (family.empty()) throw DomainError("normalize_family: empty family");
  Rational shortest = family.min_length();
  if (shortest >= 4) return {Rational(1), family};
  Rational scale = Rational(4) / shortest;
  return {scale, family.scaled(scale)};
}

/// Largest number of other members met by a member of `intervals`
/// (half-open intersection). Empty members are ignored.
inline std::size_t max_overlap_degree(std::vector<Interval> intervals) {
  intervals.erase(std::remove_if(intervals.begin(), intervals.end(),
                                 [](const Interval& i) { return i.is_empty(); }),
                  intervals.end());
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& x, const Interval& y) { return x.lower() < y.lower(); });
  std::vector<std::size_t> degree(intervals.size(), 0);
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    // Later members start at or after intervals[i].lower(); they meet it iff
    // they start strictly before its upper end.
    for (std::size_t j = i + 1; j < intervals.size() && intervals[j].lower() < intervals[i].upper();
         ++j) {
      ++degree[i];
      ++degree[j];
    }
  }
  return degree.empty() ? 0 : *std::max_element(degree.begin(), degree.end());
}

/// The well-distributedness degree d: the largest number of other doubled
/// members met by a doubled member.
inline std::size_t well_distributed_degree(const DisjointFamily& family) {
  std::vector<Interval> doubled;
  doubled.reserve(family.size());
  for (const auto& i : family) doubled.push_back(i.doubled());
  return max_overlap_degree(std::move(doubled));
}

/// True when no two non-empty members intersect.
inline bool pairwise_disjoint(std::vector<Interval> intervals) {
  return max_overlap_degree(std::move(intervals)) == 0;
}

}  // namespace lpr
