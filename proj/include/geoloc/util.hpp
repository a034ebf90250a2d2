#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace geoloc {

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

/// Strict numeric parsers; `what` names the field in error messages.
double parse_double(std::string_view s, const char* what);
std::uint64_t parse_u64(std::string_view s, const char* what);
std::int64_t parse_i64(std::string_view s, const char* what);

std::string_view trim(std::string_view s);

/// Splits on single tab characters. Returns the fields; does not merge
/// consecutive separators.
std::vector<std::string_view> split_tabs(std::string_view line);

// FNV-1a 64-bit digest, used to fingerprint input files in manifests and
// score sidecars.
class Fnv1a64 {
public:
    void update(const void* data, std::size_t len);
    std::uint64_t value() const { return state_; }

private:
    std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::uint64_t fnv1a64(std::span<const std::byte> bytes);
std::uint64_t digest_file(const std::filesystem::path& path);
std::string digest_hex(std::uint64_t digest);

namespace detail {
inline constexpr std::size_t kReduceBlock = 4096;
}

/// Sum of f(i) for i in [0, n) with a fixed block structure: each 4096-element
/// block is summed serially, block partials are combined in index order. The
/// result is bit-identical for any thread count.
template <class F>
double blocked_sum(std::size_t n, F f) {
    const std::size_t nblocks = (n + detail::kReduceBlock - 1) / detail::kReduceBlock;
    if (nblocks <= 1) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += f(i);
        return s;
    }
    std::vector<double> partial(nblocks, 0.0);
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(nblocks); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * detail::kReduceBlock;
        const std::size_t hi = std::min(lo + detail::kReduceBlock, n);
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += f(i);
        partial[static_cast<std::size_t>(b)] = s;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

/// Max of f(i) for i in [0, n); 0 for empty ranges. Same blocking scheme as
/// blocked_sum (max is order-independent, the blocking just bounds memory).
template <class F>
double blocked_max(std::size_t n, F f) {
    const std::size_t nblocks = (n + detail::kReduceBlock - 1) / detail::kReduceBlock;
    if (nblocks <= 1) {
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i) m = std::max(m, f(i));
        return m;
    }
    std::vector<double> partial(nblocks, 0.0);
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(nblocks); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * detail::kReduceBlock;
        const std::size_t hi = std::min(lo + detail::kReduceBlock, n);
        double m = 0.0;
        for (std::size_t i = lo; i < hi; ++i) m = std::max(m, f(i));
        partial[static_cast<std::size_t>(b)] = m;
    }
    double total = 0.0;
    for (double p : partial) total = std::max(total, p);
    return total;
}

} // namespace geoloc
