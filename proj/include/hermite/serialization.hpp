#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "json.hpp"

#include "hermite/expansion.hpp"

namespace hermite {

/// Binary expansion container, all integers and doubles little-endian:
///
///   offset  size  field
///   0       4     magic "HXPN"
///   4       4     u32 format version (1)
///   8       4     u32 dimension d
///   12      4     u32 truncation degree N
///   16      8     ordering tag, ASCII "grlex" padded with NUL
///   24      8     u64 coefficient count
///   32      16·n  coefficients as interleaved (re, im) f64 pairs, grlex order
void write_expansion(std::ostream& out, const HermiteExpansion& e);
HermiteExpansion read_expansion(std::istream& in);

/// JSON mirror {"d", "N", "ordering": "grlex", "coeffs": [re, im, re, im, ...]}.
nlohmann::json expansion_to_json(const HermiteExpansion& e);
HermiteExpansion expansion_from_json(const nlohmann::json& j);

namespace detail {
void write_u32(std::ostream& out, std::uint32_t v);
void write_u64(std::ostream& out, std::uint64_t v);
void write_f64(std::ostream& out, double v);
std::uint32_t read_u32(std::istream& in);
std::uint64_t read_u64(std::istream& in);
double read_f64(std::istream& in);
} // namespace detail

} // namespace hermite
