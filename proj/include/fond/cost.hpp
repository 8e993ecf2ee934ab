#ifndef FOND_COST_HPP
#define FOND_COST_HPP

#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>

namespace fond {

// Extended natural number: a saturating counter with an infinity sentinel.
// Used for heuristic values, bounds and the state-space size guard.
class ExtNat {
public:
    constexpr ExtNat() = default;
    constexpr ExtNat(std::uint64_t v) : value_(v) {}

    static constexpr ExtNat infinity() { return ExtNat(kInf); }

    constexpr bool is_infinite() const { return value_ == kInf; }
    constexpr bool is_finite() const { return value_ != kInf; }

    // Only meaningful for finite values.
    constexpr std::uint64_t value() const { return value_; }

    friend constexpr ExtNat operator+(ExtNat a, ExtNat b) {
        if (a.is_infinite() || b.is_infinite())
            return infinity();
        std::uint64_t sum = a.value_ + b.value_;
        if (sum < a.value_)  // wrapped
            return ExtNat(kInf - 1);
        return ExtNat(sum >= kInf ? kInf - 1 : sum);
    }

    // Saturating multiply, used by the |S| computation.
    friend constexpr ExtNat saturating_mul(ExtNat a, ExtNat b) {
        if (a.is_infinite() || b.is_infinite())
            return infinity();
        if (a.value_ == 0 || b.value_ == 0)
            return ExtNat(0);
        if (a.value_ > (kInf - 1) / b.value_)
            return ExtNat(kInf - 1);
        return ExtNat(a.value_ * b.value_);
    }

    friend constexpr auto operator<=>(ExtNat a, ExtNat b) = default;

    friend std::ostream& operator<<(std::ostream& os, ExtNat v) {
        if (v.is_infinite())
            return os << "inf";
        return os << v.value_;
    }

    std::string to_string() const {
        return is_infinite() ? "inf" : std::to_string(value_);
    }

private:
    static constexpr std::uint64_t kInf = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t value_ = 0;
};

constexpr ExtNat min(ExtNat a, ExtNat b) { return a < b ? a : b; }
constexpr ExtNat max(ExtNat a, ExtNat b) { return a < b ? b : a; }

}  // namespace fond

#endif
