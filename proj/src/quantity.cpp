#include "tedm/quantity.hpp"

#include "tedm/error.hpp"

#include <cctype>
#include <cmath>

namespace tedm {

namespace {

Integer pow10(int exponent) {
    Integer result = 1;
    for (int i = 0; i < exponent; ++i) result *= 10;
    return result;
}

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

[[noreturn]] void malformed(std::string_view text) {
    throw Error(ErrorCode::InvalidArgument, "malformed quantity '" + std::string(text) + "'");
}

// GMP reads a leading 0 as an octal prefix
Integer decimal_integer(std::string_view digits) {
    while (digits.size() > 1 && digits.front() == '0') digits.remove_prefix(1);
    return Integer{std::string(digits)};
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

Quantity parse_quantity(std::string_view raw) {
    std::string_view text = trim(raw);
    if (text.empty()) malformed(raw);

    bool negative = false;
    if (text.front() == '-' || text.front() == '+') {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        auto num = text.substr(0, slash);
        auto den = text.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) malformed(raw);
        Integer d = decimal_integer(den);
        if (d == 0) malformed(raw);
        Quantity q{decimal_integer(num), d};
        return negative ? Quantity(-q) : q;
    }

    int exponent = 0;
    if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
        auto exp_text = text.substr(e + 1);
        bool exp_negative = false;
        if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
            exp_negative = exp_text.front() == '-';
            exp_text.remove_prefix(1);
        }
        if (!all_digits(exp_text) || exp_text.size() > 4) malformed(raw);
        exponent = std::stoi(std::string(exp_text));
        if (exp_negative) exponent = -exponent;
        text = text.substr(0, e);
    }

    std::string digits;
    int fraction_digits = 0;
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        auto whole = text.substr(0, dot);
        auto frac = text.substr(dot + 1);
        if (whole.empty() && frac.empty()) malformed(raw);
        if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac))) malformed(raw);
        digits = std::string(whole) + std::string(frac);
        fraction_digits = static_cast<int>(frac.size());
    } else {
        if (!all_digits(text)) malformed(raw);
        digits = std::string(text);
    }

    Integer mantissa = decimal_integer(digits);
    int scale = fraction_digits - exponent;
    Quantity q = scale >= 0 ? Quantity(mantissa, pow10(scale)) : Quantity(mantissa * pow10(-scale));
    return negative ? Quantity(-q) : q;
}

std::string to_fixed_string(const Quantity& q, int places) {
    Integer num = boost::multiprecision::numerator(q);
    Integer den = boost::multiprecision::denominator(q);
    bool negative = num < 0;
    if (negative) num = -num;

    Integer scale = pow10(places);
    // round half away from zero
    Integer scaled = (num * scale * 2 + den) / (den * 2);
    std::string digits = scaled.str();
    if (static_cast<int>(digits.size()) <= places) digits.insert(0, places - digits.size() + 1, '0');

    std::string whole = digits.substr(0, digits.size() - places);
    std::string frac = digits.substr(digits.size() - places);
    while (!frac.empty() && frac.back() == '0') frac.pop_back();

    std::string out = whole;
    if (!frac.empty()) out += "." + frac;
    if (negative && scaled != 0) out.insert(0, "-");
    return out;
}

std::string to_decimal_string(const Quantity& q, int max_places) {
    Integer den = boost::multiprecision::denominator(q);
    int twos = 0, fives = 0;
    while (den % 2 == 0) { den /= 2; ++twos; }
    while (den % 5 == 0) { den /= 5; ++fives; }
    if (den == 1) {
        int places = std::max(twos, fives);
        if (places <= max_places) return to_fixed_string(q, places);
    }
    return to_fixed_string(q, max_places);
}

double to_double(const Quantity& q) { return q.convert_to<double>(); }

Quantity from_double(double value) {
    if (!std::isfinite(value)) throw Error(ErrorCode::InvalidArgument, "non-finite value");
    int exponent = 0;
    double mantissa = std::frexp(value, &exponent);
    // scale mantissa to a 53-bit integer
    auto bits = static_cast<long long>(std::ldexp(mantissa, 53));
    exponent -= 53;
    Quantity q{Integer(bits)};
    Integer two_pow = 1;
    for (int i = 0; i < std::abs(exponent); ++i) two_pow *= 2;
    return exponent >= 0 ? Quantity(q * two_pow) : Quantity(q / two_pow);
}

Quantity floor_to_unit(const Quantity& q, const Quantity& unit) {
    Quantity ratio = q / unit;
    Integer num = boost::multiprecision::numerator(ratio);
    Integer den = boost::multiprecision::denominator(ratio);
    Integer whole = num / den;
    if (num < 0 && whole * den != num) whole -= 1;
    return Quantity(whole) * unit;
}

double round_places(double value, int places) {
    double scale = std::pow(10.0, places);
    return std::round(value * scale) / scale;
}

}  // namespace tedm
