#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <string>

namespace repetilab {

// Non-negative exact fraction in lowest terms. Comparisons cross-multiply
// in 128-bit arithmetic.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::uint64_t num, std::uint64_t den = 1) : num_(num), den_(den) {
    const std::uint64_t g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  constexpr std::uint64_t num() const { return num_; }
  constexpr std::uint64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend constexpr bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend constexpr std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const auto lhs = static_cast<unsigned __int128>(a.num_) * b.den_;
    const auto rhs = static_cast<unsigned __int128>(b.num_) * a.den_;
    return lhs <=> rhs;
  }

 private:
  std::uint64_t num_ = 0;
  std::uint64_t den_ = 1;
};

}  // namespace repetilab
