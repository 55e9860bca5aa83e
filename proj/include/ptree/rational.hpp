#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace ptree {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

// Accepts "p/q", "-p/q", integers and plain decimals ("0.25" is read as 1/4).
Rational parse_rational(std::string_view text);

// "p/q" in lowest terms, or just "p" when the denominator is 1.
std::string format_rational(const Rational& q);

Rational rational_pow(const Rational& base, std::uint64_t exponent);

double to_double(const Rational& q);

}  // namespace ptree
