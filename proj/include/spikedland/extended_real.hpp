#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace spiked {

/// A real number extended with the two infinities.
///
/// Complexity and rate functions are total on their domains and take the
/// values -inf (outside D_Sigma) or +inf (rates below the spectral edge).
/// Finite values behave like doubles; the infinities absorb finite summands.
class ExtendedReal {
public:
    enum class Tag { Finite, NegInf, PosInf };

    constexpr ExtendedReal() = default;
    constexpr ExtendedReal(double v) : value_(v) {}  // NOLINT: implicit by intent

    static constexpr ExtendedReal neg_inf() { return ExtendedReal(Tag::NegInf); }
    static constexpr ExtendedReal pos_inf() { return ExtendedReal(Tag::PosInf); }
    static ExtendedReal from_double(double v) {
        if (v == std::numeric_limits<double>::infinity()) return pos_inf();
        if (v == -std::numeric_limits<double>::infinity()) return neg_inf();
        if (v != v) throw std::domain_error("ExtendedReal: NaN has no extended value");
        return ExtendedReal(v);
    }

    constexpr Tag tag() const { return tag_; }
    constexpr bool is_finite() const { return tag_ == Tag::Finite; }
    constexpr bool is_neg_inf() const { return tag_ == Tag::NegInf; }
    constexpr bool is_pos_inf() const { return tag_ == Tag::PosInf; }

    /// Finite payload. Throws on an infinity.
    double value() const {
        if (tag_ != Tag::Finite) throw std::domain_error("ExtendedReal: value() on an infinity");
        return value_;
    }

    /// IEEE view: infinities map to +/-inf doubles.
    constexpr double to_double() const {
        switch (tag_) {
            case Tag::NegInf: return -std::numeric_limits<double>::infinity();
            case Tag::PosInf: return std::numeric_limits<double>::infinity();
            default: return value_;
        }
    }

    constexpr ExtendedReal operator-() const {
        switch (tag_) {
            case Tag::NegInf: return pos_inf();
            case Tag::PosInf: return neg_inf();
            default: return ExtendedReal(-value_);
        }
    }

    // (+inf) + (-inf) is undefined and throws.
    friend ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
        if (a.is_finite() && b.is_finite()) return ExtendedReal(a.value_ + b.value_);
        if ((a.is_neg_inf() && b.is_pos_inf()) || (a.is_pos_inf() && b.is_neg_inf()))
            throw std::domain_error("ExtendedReal: inf - inf is undefined");
        return a.is_finite() ? b : a;
    }
    friend ExtendedReal operator-(ExtendedReal a, ExtendedReal b) { return a + (-b); }

    friend constexpr bool operator==(ExtendedReal a, ExtendedReal b) {
        return a.tag_ == b.tag_ && (a.tag_ != Tag::Finite || a.value_ == b.value_);
    }
    friend constexpr bool operator<(ExtendedReal a, ExtendedReal b) {
        return a.to_double() < b.to_double();
    }
    friend constexpr bool operator>(ExtendedReal a, ExtendedReal b) { return b < a; }
    friend constexpr bool operator<=(ExtendedReal a, ExtendedReal b) { return !(b < a); }
    friend constexpr bool operator>=(ExtendedReal a, ExtendedReal b) { return !(a < b); }

private:
    constexpr explicit ExtendedReal(Tag t) : tag_(t) {}

    Tag tag_ = Tag::Finite;
    double value_ = 0.0;
};

inline ExtendedReal max(ExtendedReal a, ExtendedReal b) { return a < b ? b : a; }
inline ExtendedReal min(ExtendedReal a, ExtendedReal b) { return b < a ? b : a; }

/// Text form used by every emitted artifact: "-inf", "+inf" or %.17g.
std::string format_extended(ExtendedReal x);
std::string format_double(double x);

}  // namespace spiked
