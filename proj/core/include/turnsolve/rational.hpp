#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

namespace turnsolve {

/// Exact rational number used for all cost arithmetic. LP, matching and
/// solver comparisons must not drift, so nothing in the cost pipeline is
/// ever rounded.
using Rat = mpq_class;

/// Parses a rational from a decimal string ("0.5", "-3", "12.25") or a
/// fraction string ("1/3"). Returns nullopt on malformed input.
std::optional<Rat> rat_parse(const std::string& text);

/// Renders a rational as an exact decimal string when the denominator is of
/// the form 2^a*5^b, and as "p/q" otherwise.
std::string rat_str(const Rat& value);

/// Nearest double; only used where a tolerance-based consumer asks for it.
inline double rat_double(const Rat& value) { return value.get_d(); }

}  // namespace turnsolve
