#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace loopdl {

/// Unbounded integer. Values that fit in 64 bits are stored inline; anything
/// larger spills to a shared, immutable cpp_int.
class Int {
public:
  using Big = boost::multiprecision::cpp_int;

  Int() = default;
  Int(std::int64_t v) : small_(v) {}  // NOLINT: implicit by intent
  Int(int v) : small_(v) {}           // NOLINT
  explicit Int(const Big& v);

  /// Parses an optionally signed decimal literal. Throws std::invalid_argument.
  static Int parse(std::string_view text);

  bool is_small() const { return !big_; }
  bool is_zero() const { return !big_ && small_ == 0; }
  std::optional<std::int64_t> to_int64() const;
  Big to_big() const;
  std::string str() const;
  std::size_t hash() const;

  friend Int operator+(const Int& a, const Int& b);
  friend Int operator-(const Int& a, const Int& b);
  friend Int operator*(const Int& a, const Int& b);
  // Truncating division and remainder (sign of the dividend); divisor must be
  // nonzero.
  friend Int operator/(const Int& a, const Int& b);
  friend Int operator%(const Int& a, const Int& b);
  friend Int operator-(const Int& a);

  friend bool operator==(const Int& a, const Int& b);
  friend std::strong_ordering operator<=>(const Int& a, const Int& b);

private:
  std::int64_t small_ = 0;
  std::shared_ptr<const Big> big_;
};

std::ostream& operator<<(std::ostream& os, const Int& v);

}  // namespace loopdl
