#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace msrcpsp {

// Unsigned arbitrary-precision integer, base 10^9 limbs, little-endian.
// Just enough arithmetic for n! * m^n style counts.
class BigUint {
public:
    BigUint() : limbs_{0} {}
    explicit BigUint(std::uint64_t value);

    BigUint& mul_small(std::uint64_t factor);

    static BigUint factorial(unsigned n);
    static BigUint pow(std::uint64_t base, unsigned exponent);

    BigUint operator*(const BigUint& other) const;
    bool operator==(const BigUint& other) const { return limbs_ == other.limbs_; }

    bool is_zero() const { return limbs_.size() == 1 && limbs_[0] == 0; }
    std::string to_string() const;
    std::size_t digit_count() const;

private:
    static constexpr std::uint64_t kBase = 1'000'000'000ULL;
    std::vector<std::uint32_t> limbs_;

    void trim();
};

// (mantissa, exponent) view of a large count, mantissa rounded to
// three significant digits, e.g. 1.18e288.
struct DecimalMagnitude {
    double mantissa = 0.0;
    int exponent = 0;

    std::string to_string() const;
};

DecimalMagnitude magnitude(const BigUint& value);

}  // namespace msrcpsp
