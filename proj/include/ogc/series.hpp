#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ogc/error.hpp"

namespace ogc {

// A time-indexed value that is either constant over the horizon or given
// explicitly per step.
template <class T>
class Series {
 public:
  Series() = default;

  static Series constant(T value) {
    Series s;
    s.values_.push_back(std::move(value));
    s.constant_ = true;
    return s;
  }

  static Series of(std::vector<T> values) {
    Series s;
    s.values_ = std::move(values);
    s.constant_ = false;
    return s;
  }

  const T& at(int step) const {
    if (values_.empty()) fail(ErrorCode::SeriesOutOfRange, "series is empty");
    if (constant_) return values_.front();
    if (step < 0 || static_cast<std::size_t>(step) >= values_.size()) {
      fail(ErrorCode::SeriesOutOfRange,
           "step " + std::to_string(step) + " outside series of length " +
               std::to_string(values_.size()));
    }
    return values_[static_cast<std::size_t>(step)];
  }

  bool is_constant() const noexcept { return constant_; }
  bool empty() const noexcept { return values_.empty(); }
  std::size_t length() const noexcept { return values_.size(); }
  bool covers(int horizon) const noexcept {
    return !values_.empty() && (constant_ || values_.size() >= static_cast<std::size_t>(horizon));
  }
  const std::vector<T>& values() const noexcept { return values_; }

 private:
  std::vector<T> values_;
  bool constant_ = true;
};

}  // namespace ogc
