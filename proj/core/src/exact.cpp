#include "dcm/exact.hpp"

#include "dcm/error.hpp"

#include <cctype>

namespace dcm {

namespace {

using boost::multiprecision::cpp_int;

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

cpp_int parse_integer(std::string_view digits) {
    cpp_int out = 0;
    for (char c : digits) out = out * 10 + (c - '0');
    return out;
}

}  // namespace

Exact parse_exact(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (s.empty()) throw ParseError("empty number");

    bool negative = false;
    if (s.front() == '-' || s.front() == '+') {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }

    Exact result;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        auto num = s.substr(0, slash);
        auto den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) {
            throw ParseError("malformed ratio '" + std::string(text) + "'");
        }
        cpp_int d = parse_integer(den);
        if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
        result = Exact(parse_integer(num), d);
    } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
        auto whole = s.substr(0, dot);
        auto frac = s.substr(dot + 1);
        if ((!whole.empty() && !all_digits(whole)) || !all_digits(frac)) {
            throw ParseError("malformed decimal '" + std::string(text) + "'");
        }
        cpp_int scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        cpp_int whole_part = whole.empty() ? cpp_int(0) : parse_integer(whole);
        result = Exact(whole_part * scale + parse_integer(frac), scale);
    } else {
        if (!all_digits(s)) throw ParseError("malformed number '" + std::string(text) + "'");
        result = Exact(parse_integer(s));
    }
    return negative ? Exact(-result) : result;
}

std::string to_ratio_string(const Exact& value) {
    const auto& num = boost::multiprecision::numerator(value);
    const auto& den = boost::multiprecision::denominator(value);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

Exact round_half_up(const Exact& value, unsigned places) {
    cpp_int scale = 1;
    for (unsigned i = 0; i < places; ++i) scale *= 10;
    Exact shifted = value * scale + Exact(1, 2);
    // floor division on the reduced fraction
    cpp_int num = boost::multiprecision::numerator(shifted);
    cpp_int den = boost::multiprecision::denominator(shifted);
    cpp_int q = num / den;
    if (num % den != 0 && num < 0) q -= 1;
    return Exact(q, scale);
}

std::string format_fixed(const Exact& value, unsigned places) {
    Exact rounded = round_half_up(value, places);
    cpp_int scale = 1;
    for (unsigned i = 0; i < places; ++i) scale *= 10;
    cpp_int scaled = boost::multiprecision::numerator(Exact(rounded * scale));
    bool negative = scaled < 0;
    if (negative) scaled = -scaled;
    std::string digits = scaled.str();
    if (digits.size() <= places) digits.insert(0, places + 1 - digits.size(), '0');
    std::string out = negative ? "-" : "";
    out += digits.substr(0, digits.size() - places);
    if (places > 0) {
        out += '.';
        out += digits.substr(digits.size() - places);
    }
    return out;
}

double to_double(const Exact& value) {
    return value.convert_to<double>();
}

}  // namespace dcm
