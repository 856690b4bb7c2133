#include "msrcpsp/bignum.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace msrcpsp {

BigUint::BigUint(std::uint64_t value) {
    do {
        limbs_.push_back(static_cast<std::uint32_t>(value % kBase));
        value /= kBase;
    } while (value != 0);
}

void BigUint::trim() {
    while (limbs_.size() > 1 && limbs_.back() == 0) limbs_.pop_back();
}

BigUint& BigUint::mul_small(std::uint64_t factor) {
    if (factor == 0) {
        limbs_.assign(1, 0);
        return *this;
    }
    if (factor >= kBase) {
        *this = *this * BigUint(factor);
        return *this;
    }
    std::uint64_t carry = 0;
    for (auto& limb : limbs_) {
        std::uint64_t cur = static_cast<std::uint64_t>(limb) * factor + carry;
        limb = static_cast<std::uint32_t>(cur % kBase);
        carry = cur / kBase;
    }
    while (carry != 0) {
        limbs_.push_back(static_cast<std::uint32_t>(carry % kBase));
        carry /= kBase;
    }
    return *this;
}

BigUint BigUint::operator*(const BigUint& other) const {
    if (is_zero() || other.is_zero()) return BigUint(0);
    BigUint out;
    out.limbs_.assign(limbs_.size() + other.limbs_.size(), 0);
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        std::uint64_t carry = 0;
        for (std::size_t j = 0; j < other.limbs_.size(); ++j) {
            std::uint64_t cur = static_cast<std::uint64_t>(limbs_[i]) * other.limbs_[j] +
                                out.limbs_[i + j] + carry;
            out.limbs_[i + j] = static_cast<std::uint32_t>(cur % kBase);
            carry = cur / kBase;
        }
        std::size_t k = i + other.limbs_.size();
        while (carry != 0) {
            std::uint64_t cur = out.limbs_[k] + carry;
            out.limbs_[k] = static_cast<std::uint32_t>(cur % kBase);
            carry = cur / kBase;
            ++k;
        }
    }
    out.trim();
    return out;
}

BigUint BigUint::factorial(unsigned n) {
    BigUint out(1);
    for (unsigned i = 2; i <= n; ++i) out.mul_small(i);
    return out;
}

BigUint BigUint::pow(std::uint64_t base, unsigned exponent) {
    BigUint out(1);
    for (unsigned i = 0; i < exponent; ++i) out.mul_small(base);
    return out;
}

std::string BigUint::to_string() const {
    std::string out = std::to_string(limbs_.back());
    char buf[16];
    for (std::size_t i = limbs_.size() - 1; i-- > 0;) {
        std::snprintf(buf, sizeof(buf), "%09u", limbs_[i]);
        out += buf;
    }
    return out;
}

std::size_t BigUint::digit_count() const {
    return to_string().size();
}

std::string DecimalMagnitude::to_string() const {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.2fe%d", mantissa, exponent);
    return buf;
}

DecimalMagnitude magnitude(const BigUint& value) {
    const std::string digits = value.to_string();
    DecimalMagnitude mag;
    mag.exponent = static_cast<int>(digits.size()) - 1;
    // Round the leading digits to three significant figures; a carry such
    // as 9.995 -> 10.0 bumps the exponent.
    double lead = 0.0;
    const std::size_t take = std::min<std::size_t>(digits.size(), 15);
    for (std::size_t i = 0; i < take; ++i) lead = lead * 10.0 + (digits[i] - '0');
    lead /= std::pow(10.0, static_cast<double>(take - 1));
    mag.mantissa = std::round(lead * 100.0) / 100.0;
    if (mag.mantissa >= 10.0) {
        mag.mantissa /= 10.0;
        mag.exponent += 1;
    }
    return mag;
}

}  // namespace msrcpsp
