#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>

namespace tedm {

/// Exact token quantity. Conservation and cap checks compare these with ==,
/// so nothing on the accounting path goes through floating point.
using Quantity = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

/// Parses "123", "-0.25", "1.5e3" or "7/3" into an exact rational.
/// Throws Error{InvalidArgument} on malformed input.
Quantity parse_quantity(std::string_view text);

/// Exact decimal when the denominator is 2^a·5^b, otherwise rounded
/// half away from zero to `max_places`. Trailing zeros are trimmed.
std::string to_decimal_string(const Quantity& q, int max_places = 18);

/// Rounded to exactly `places` fractional digits, trailing zeros trimmed.
std::string to_fixed_string(const Quantity& q, int places);

double to_double(const Quantity& q);

/// Exact conversion: every finite double is a dyadic rational.
Quantity from_double(double value);

/// Largest multiple of `unit` that is <= q (unit > 0).
Quantity floor_to_unit(const Quantity& q, const Quantity& unit);

/// Rounds a reported metric to `places` decimals (default reporting precision).
double round_places(double value, int places = 6);

inline const Quantity& zero_quantity() {
    static const Quantity z{0};
    return z;
}

}  // namespace tedm
