#include "hermite/serialization.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <istream>
#include <ostream>

#include "hermite/errors.hpp"

namespace hermite {

namespace detail {

namespace {

template <typename U>
void write_le(std::ostream& out, U v) {
    std::array<char, sizeof(U)> bytes{};
    for (std::size_t i = 0; i < sizeof(U); ++i)
        bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFFu);
    out.write(bytes.data(), bytes.size());
    if (!out)
        throw IoError("write failed");
}

template <typename U>
U read_le(std::istream& in) {
    std::array<unsigned char, sizeof(U)> bytes{};
    in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
    if (!in)
        throw IoError("unexpected end of binary container");
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i)
        v |= static_cast<U>(bytes[i]) << (8 * i);
    return v;
}

} // namespace

void write_u32(std::ostream& out, std::uint32_t v) { write_le(out, v); }
void write_u64(std::ostream& out, std::uint64_t v) { write_le(out, v); }
void write_f64(std::ostream& out, double v) { write_le(out, std::bit_cast<std::uint64_t>(v)); }
std::uint32_t read_u32(std::istream& in) { return read_le<std::uint32_t>(in); }
std::uint64_t read_u64(std::istream& in) { return read_le<std::uint64_t>(in); }
double read_f64(std::istream& in) { return std::bit_cast<double>(read_le<std::uint64_t>(in)); }

} // namespace detail

namespace {

constexpr std::array<char, 4> expansion_magic{'H', 'X', 'P', 'N'};
constexpr std::uint32_t format_version = 1;
constexpr std::array<char, 8> grlex_tag{'g', 'r', 'l', 'e', 'x', '\0', '\0', '\0'};

} // namespace

void write_expansion(std::ostream& out, const HermiteExpansion& e) {
    out.write(expansion_magic.data(), expansion_magic.size());
    detail::write_u32(out, format_version);
    detail::write_u32(out, static_cast<std::uint32_t>(e.dim()));
    detail::write_u32(out, static_cast<std::uint32_t>(e.degree()));
    out.write(grlex_tag.data(), grlex_tag.size());
    detail::write_u64(out, e.size());
    for (const auto& c : e.coeffs()) {
        detail::write_f64(out, c.real());
        detail::write_f64(out, c.imag());
    }
    if (!out)
        throw IoError("failed to write expansion");
}

HermiteExpansion read_expansion(std::istream& in) {
    std::array<char, 4> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != expansion_magic)
        throw IoError("not an expansion container (bad magic)");
    if (detail::read_u32(in) != format_version)
        throw IoError("unsupported expansion container version");
    const auto dim = static_cast<int>(detail::read_u32(in));
    const auto degree = static_cast<int>(detail::read_u32(in));
    std::array<char, 8> tag{};
    in.read(tag.data(), tag.size());
    if (!in || tag != grlex_tag)
        throw IoError("unsupported coefficient ordering");
    const auto count = detail::read_u64(in);
    HermiteExpansion e(dim, degree);
    if (count != e.size())
        throw IoError("coefficient count does not match (d, N)");
    for (auto& c : e.coeffs()) {
        const double re = detail::read_f64(in);
        const double im = detail::read_f64(in);
        c = {re, im};
    }
    return e;
}

nlohmann::json expansion_to_json(const HermiteExpansion& e) {
    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto& c : e.coeffs()) {
        coeffs.push_back(c.real());
        coeffs.push_back(c.imag());
    }
    return {{"d", e.dim()}, {"N", e.degree()}, {"ordering", "grlex"}, {"coeffs", std::move(coeffs)}};
}

HermiteExpansion expansion_from_json(const nlohmann::json& j) {
    try {
        if (j.at("ordering").get<std::string>() != "grlex")
            throw IoError("unsupported coefficient ordering");
        HermiteExpansion e(j.at("d").get<int>(), j.at("N").get<int>());
        const auto& flat = j.at("coeffs");
        if (flat.size() != 2 * e.size())
            throw IoError("coefficient count does not match (d, N)");
        for (std::size_t i = 0; i < e.size(); ++i)
            e.coeffs()[i] = {flat[2 * i].get<double>(), flat[2 * i + 1].get<double>()};
        return e;
    } catch (const nlohmann::json::exception& ex) {
        throw IoError(std::string("malformed expansion JSON: ") + ex.what());
    }
}

} // namespace hermite
