#include "loopdl/int.hpp"

#include <limits>
#include <ostream>
#include <stdexcept>

namespace loopdl {

namespace {

constexpr auto kMin = std::numeric_limits<std::int64_t>::min();

bool fits(const Int::Big& v) {
  return v >= std::numeric_limits<std::int64_t>::min() &&
         v <= std::numeric_limits<std::int64_t>::max();
}

}  // namespace

Int::Int(const Big& v) {
  if (fits(v)) {
    small_ = static_cast<std::int64_t>(v);
  } else {
    big_ = std::make_shared<const Big>(v);
  }
}

Int Int::parse(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty integer literal");
  std::size_t i = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  if (i == text.size()) throw std::invalid_argument("bad integer literal");
  for (std::size_t j = i; j < text.size(); ++j) {
    if (text[j] < '0' || text[j] > '9') {
      throw std::invalid_argument("bad integer literal: " + std::string(text));
    }
  }
  return Int(Big(std::string(text)));
}

std::optional<std::int64_t> Int::to_int64() const {
  if (big_) return std::nullopt;
  return small_;
}

Int::Big Int::to_big() const { return big_ ? *big_ : Big(small_); }

std::string Int::str() const {
  return big_ ? big_->str() : std::to_string(small_);
}

std::size_t Int::hash() const {
  if (!big_) return std::hash<std::int64_t>{}(small_);
  return std::hash<std::string>{}(big_->str());
}

Int operator+(const Int& a, const Int& b) {
  std::int64_t r;
  if (!a.big_ && !b.big_ && !__builtin_add_overflow(a.small_, b.small_, &r)) {
    return Int(r);
  }
  return Int(a.to_big() + b.to_big());
}

Int operator-(const Int& a, const Int& b) {
  std::int64_t r;
  if (!a.big_ && !b.big_ && !__builtin_sub_overflow(a.small_, b.small_, &r)) {
    return Int(r);
  }
  return Int(a.to_big() - b.to_big());
}

Int operator*(const Int& a, const Int& b) {
  std::int64_t r;
  if (!a.big_ && !b.big_ && !__builtin_mul_overflow(a.small_, b.small_, &r)) {
    return Int(r);
  }
  return Int(a.to_big() * b.to_big());
}

Int operator/(const Int& a, const Int& b) {
  if (b.is_zero()) throw std::domain_error("division by zero");
  if (!a.big_ && !b.big_ && !(a.small_ == kMin && b.small_ == -1)) {
    return Int(a.small_ / b.small_);
  }
  return Int(Int::Big(a.to_big() / b.to_big()));
}

Int operator%(const Int& a, const Int& b) {
  if (b.is_zero()) throw std::domain_error("division by zero");
  if (!a.big_ && !b.big_) {
    if (b.small_ == -1) return Int(0);
    return Int(a.small_ % b.small_);
  }
  return Int(Int::Big(a.to_big() % b.to_big()));
}

Int operator-(const Int& a) {
  if (!a.big_ && a.small_ != kMin) return Int(-a.small_);
  return Int(Int::Big(-a.to_big()));
}

bool operator==(const Int& a, const Int& b) {
  if (!a.big_ && !b.big_) return a.small_ == b.small_;
  // Normalized: a spilled value never equals an inline one.
  if (!a.big_ || !b.big_) return false;
  return *a.big_ == *b.big_;
}

std::strong_ordering operator<=>(const Int& a, const Int& b) {
  if (!a.big_ && !b.big_) return a.small_ <=> b.small_;
  const auto c = a.to_big().compare(b.to_big());
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const Int& v) { return os << v.str(); }

}  // namespace loopdl
