#pragma once

#include <cmath>
#include <limits>

#include "hk/errors.hpp"

namespace hk {

// A real number held as sign * exp(log_mag). sign == 0 means exactly zero.
class ScaledValue {
public:
    // Largest |log_mag| for which to_double() is exact and finite.
    static constexpr double kMaxLog = 708.0;

    constexpr ScaledValue() = default;

    static ScaledValue from_log(int sign, double log_mag) {
        ScaledValue v;
        if (sign == 0 || log_mag == -std::numeric_limits<double>::infinity()) return v;
        v.sign_ = sign > 0 ? 1 : -1;
        v.log_mag_ = log_mag;
        return v;
    }

    static ScaledValue from_double(double x) {
        if (!std::isfinite(x)) throw InvalidArgument("ScaledValue::from_double: non-finite input");
        if (x == 0.0) return {};
        return from_log(x > 0 ? 1 : -1, std::log(std::fabs(x)));
    }

    int sign() const noexcept { return sign_; }
    double log_mag() const noexcept { return log_mag_; }
    bool is_zero() const noexcept { return sign_ == 0; }

    // Throws RangeError unless |log_mag| < kMaxLog.
    double to_double() const {
        if (sign_ == 0) return 0.0;
        if (!(std::fabs(log_mag_) < kMaxLog))
            throw RangeError("ScaledValue::to_double: log magnitude outside double range");
        return sign_ * std::exp(log_mag_);
    }

    // Underflow flushes to zero; overflow still throws.
    double to_double_or_zero() const {
        if (sign_ == 0 || log_mag_ < -kMaxLog) return 0.0;
        return to_double();
    }

    ScaledValue operator-() const noexcept {
        ScaledValue v = *this;
        v.sign_ = -v.sign_;
        return v;
    }

    friend ScaledValue operator*(const ScaledValue& x, const ScaledValue& y) noexcept {
        if (x.sign_ == 0 || y.sign_ == 0) return {};
        ScaledValue v;
        v.sign_ = x.sign_ * y.sign_;
        v.log_mag_ = x.log_mag_ + y.log_mag_;
        return v;
    }

    friend ScaledValue operator/(const ScaledValue& x, const ScaledValue& y) {
        if (y.sign_ == 0) throw InvalidArgument("ScaledValue: division by zero");
        if (x.sign_ == 0) return {};
        ScaledValue v;
        v.sign_ = x.sign_ * y.sign_;
        v.log_mag_ = x.log_mag_ - y.log_mag_;
        return v;
    }

    friend ScaledValue operator+(const ScaledValue& x, const ScaledValue& y) noexcept {
        if (x.sign_ == 0) return y;
        if (y.sign_ == 0) return x;
        const ScaledValue& big = x.log_mag_ >= y.log_mag_ ? x : y;
        const ScaledValue& small = x.log_mag_ >= y.log_mag_ ? y : x;
        double ratio = std::exp(small.log_mag_ - big.log_mag_) * (big.sign_ * small.sign_);
        if (ratio == -1.0) return {};
        ScaledValue v;
        v.sign_ = big.sign_;
        v.log_mag_ = big.log_mag_ + std::log1p(ratio);
        return v;
    }

    friend ScaledValue operator-(const ScaledValue& x, const ScaledValue& y) noexcept {
        return x + (-y);
    }

    // Scales by a plain double factor.
    ScaledValue scaled(double factor) const { return *this * from_double(factor); }

private:
    int sign_ = 0;
    double log_mag_ = 0.0;
};

}  // namespace hk
