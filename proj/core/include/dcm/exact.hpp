#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace dcm {

// Arbitrary-precision rational. Every value, weight and total in the pipeline
// is carried as an Exact; decimals only appear at display time.
using Exact = boost::multiprecision::cpp_rational;

// Accepts "17/4", "-3", "4.25", "1e2" is rejected. Throws ParseError.
Exact parse_exact(std::string_view text);

// Canonical ratio form: "17/4", "0", "-3".
std::string to_ratio_string(const Exact& value);

// Round half up (toward +infinity at the half) to `places` decimals.
Exact round_half_up(const Exact& value, unsigned places);

// Fixed-point display, e.g. format_fixed(100/17, 2) == "5.88".
std::string format_fixed(const Exact& value, unsigned places = 2);

double to_double(const Exact& value);

}  // namespace dcm
