#pragma once

// Seeded i.i.d. innovation streams.
//
// The generator is SplitMix64 evaluated in counter mode: the k-th raw word of
// the stream with seed s is mix(s + (k + 1) * golden_gamma). Every variate is
// therefore a pure function of (seed, index), which makes streams
// reproducible across platforms and lets simulators address pre-sample
// (negative) time indices without replaying the stream.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "lrdreg/error.hpp"

namespace lrdreg {

enum class InnovationLaw { standard_gaussian, centered_uniform };

inline std::string_view to_string(InnovationLaw law) {
  return law == InnovationLaw::standard_gaussian ? "gaussian" : "uniform";
}

inline InnovationLaw parse_innovation_law(std::string_view s) {
  if (s == "gaussian" || s == "standard-gaussian") return InnovationLaw::standard_gaussian;
  if (s == "uniform" || s == "centered-uniform" || s == "centered-uniform-unit-variance")
    return InnovationLaw::centered_uniform;
  fail(ErrorCategory::config, "unknown innovation law '" + std::string(s) + "'");
}

struct InnovationSpec {
  InnovationLaw law = InnovationLaw::standard_gaussian;
  std::uint64_t seed = 0;

  friend bool operator==(const InnovationSpec&, const InnovationSpec&) = default;
};

namespace detail {

inline constexpr std::uint64_t golden_gamma = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t raw_word(std::uint64_t seed, std::uint64_t counter) noexcept {
  return mix64(seed + (counter + 1) * golden_gamma);
}

// Uniform on (0, 1]: never zero, so log() in Box-Muller is finite.
inline double open_unit(std::uint64_t word) noexcept {
  return static_cast<double>((word >> 11) + 1) * 0x1.0p-53;
}

}  // namespace detail

/// Derives an independent child seed from a parent seed and a tag. Used by
/// the harness to fan a master seed out to (replicate, d, component) streams.
constexpr std::uint64_t split_seed(std::uint64_t parent, std::uint64_t tag) noexcept {
  return detail::mix64(detail::mix64(parent ^ 0x6a09e667f3bcc909ULL) + detail::mix64(tag + detail::golden_gamma));
}

constexpr std::uint64_t split_seed(std::uint64_t parent, std::uint64_t tag_a,
                                   std::uint64_t tag_b) noexcept {
  return split_seed(split_seed(parent, tag_a), tag_b);
}

/// Variate at signed time index `t` of the stream described by `spec`.
/// Gaussian variates come from Box-Muller on the counter pair (2p, 2p + 1),
/// with the cosine branch at even t and the sine branch at odd t.
inline double innovation_at(const InnovationSpec& spec, std::int64_t t) noexcept {
  const auto index = static_cast<std::uint64_t>(t);
  if (spec.law == InnovationLaw::centered_uniform) {
    const double u = static_cast<double>(detail::raw_word(spec.seed, index) >> 11) * 0x1.0p-53;
    return std::numbers::sqrt3 * (2.0 * u - 1.0);
  }
  const std::uint64_t pair = index >> 1;
  const double u1 = detail::open_unit(detail::raw_word(spec.seed, 2 * pair));
  const double u2 = detail::open_unit(detail::raw_word(spec.seed, 2 * pair + 1));
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return (index & 1U) ? radius * std::sin(angle) : radius * std::cos(angle);
}

/// Innovations for time indices first, first + 1, ..., first + n - 1.
inline std::vector<double> draw_innovations_from(const InnovationSpec& spec, std::int64_t first,
                                                 std::size_t n) {
  require(n > 0, ErrorCategory::empty_request, "draw_innovations: n must be positive");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = innovation_at(spec, first + static_cast<std::int64_t>(i));
  return out;
}

inline std::vector<double> draw_innovations(const InnovationSpec& spec, std::size_t n) {
  return draw_innovations_from(spec, 0, n);
}

}  // namespace lrdreg
