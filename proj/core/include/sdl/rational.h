#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace sdl {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Accepts "p/q", integers and finite decimals ("0.3"). Throws InputError.
Rational parse_rational(std::string_view text);

// Always "num/den", also for integers ("2/1").
std::string to_string(const Rational& q);

BigInt floor(const Rational& q);
BigInt ceil(const Rational& q);
Rational pow(const Rational& base, unsigned exponent);

// Narrowing helpers; throw CapacityError when the value does not fit.
std::int64_t to_int64(const BigInt& v);

inline Rational ratio(std::int64_t num, std::int64_t den) { return Rational(num, den); }

}  // namespace sdl
