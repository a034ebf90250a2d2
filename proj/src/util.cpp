#include "geoloc/util.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>

#include "geoloc/errors.hpp"

namespace geoloc {

std::string format_double(double v) {
    std::array<char, 64> buf;
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{}) throw Error("format_double: conversion failed");
    return std::string(buf.data(), ptr);
}

namespace {

template <class T>
T parse_number(std::string_view s, const char* what) {
    s = trim(s);
    T value{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ValidationError(std::string("invalid ") + what + ": '" + std::string(s) + "'");
    return value;
}

} // namespace

double parse_double(std::string_view s, const char* what) {
    return parse_number<double>(s, what);
}

std::uint64_t parse_u64(std::string_view s, const char* what) {
    return parse_number<std::uint64_t>(s, what);
}

std::int64_t parse_i64(std::string_view s, const char* what) {
    return parse_number<std::int64_t>(s, what);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find('\t', start);
        if (pos == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

void Fnv1a64::update(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = state_;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= static_cast<std::uint64_t>(p[i]);
        h *= 0x100000001b3ULL;
    }
    state_ = h;
}

std::uint64_t fnv1a64(std::span<const std::byte> bytes) {
    Fnv1a64 d;
    d.update(bytes.data(), bytes.size());
    return d.value();
}

std::uint64_t digest_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path.string());
    Fnv1a64 d;
    std::array<char, 65536> buf;
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        d.update(buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    return d.value();
}

std::string digest_hex(std::uint64_t digest) {
    std::array<char, 17> buf;
    std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(digest));
    return std::string(buf.data(), 16);
}

} // namespace geoloc
