#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "elect/error.hpp"

namespace elect {

/// ⌈log₂ n⌉, with ⌈log₂ 1⌉ = 0.
constexpr unsigned ceil_log2(std::uint64_t n) noexcept { return n <= 1 ? 0u : static_cast<unsigned>(std::bit_width(n - 1)); }

/// 2⌈√(n log₂ n)⌉: the number of referees (walks) per candidate.
inline std::uint64_t quorum_size(std::uint64_t n) {
  if (n < 2) return 1;
  const double x = static_cast<double>(n) * std::log2(static_cast<double>(n));
  auto r = static_cast<std::uint64_t>(std::ceil(std::sqrt(x)));
  // guard the ceiling against rounding when n log n is a perfect square
  while (r > 0 && static_cast<double>((r - 1) * (r - 1)) >= x) --r;
  while (static_cast<double>(r * r) < x) ++r;
  return 2 * r;
}

/// 2 log₂ n / n, clamped to 1.
inline double candidate_probability(std::uint64_t n) {
  if (n < 2) return 1.0;
  return std::min(1.0, 2.0 * std::log2(static_cast<double>(n)) / static_cast<double>(n));
}

/// n⁴, the size of the rank domain {1..n⁴}.
inline std::uint64_t rank_domain_max(std::uint64_t n) {
  if (n >= (std::uint64_t{1} << 16)) throw error(errc::invalid_size, "n^4 overflows the rank type");
  return n * n * n * n;
}

enum class TokenType : std::uint8_t {
  walk = 1,
  win = 2,
  candidate = 3,
  notify = 4,
};

inline std::string_view to_string(TokenType t) {
  switch (t) {
    case TokenType::walk: return "WALK";
    case TokenType::win: return "WIN";
    case TokenType::candidate: return "CANDIDATE";
    case TokenType::notify: return "NOTIFY";
  }
  return "?";
}

inline TokenType token_type_from_string(std::string_view s) {
  if (s == "WALK") return TokenType::walk;
  if (s == "WIN") return TokenType::win;
  if (s == "CANDIDATE") return TokenType::candidate;
  if (s == "NOTIFY") return TokenType::notify;
  throw error(errc::parse, "unknown token type '" + std::string(s) + "'");
}

/// Wire message. Fields unused by a type are zero.
struct Token {
  TokenType type = TokenType::notify;
  std::uint64_t rank = 0;
  std::uint64_t count = 0;

  static constexpr Token walk(std::uint64_t rank, std::uint64_t count) { return {TokenType::walk, rank, count}; }
  static constexpr Token win(std::uint64_t rank, std::uint64_t count) { return {TokenType::win, rank, count}; }
  static constexpr Token candidate(std::uint64_t rank) { return {TokenType::candidate, rank, 0}; }
  static constexpr Token notify() { return {TokenType::notify, 0, 0}; }

  friend bool operator==(const Token&, const Token&) = default;
};

inline constexpr unsigned token_tag_bits = 3;

/// Canonical encoding length in bits for a network of n nodes:
///   WALK, WIN   tag + 4⌈log₂ n⌉ rank bits + ⌈log₂(ρ + 1)⌉ count bits
///   CANDIDATE   tag + 4⌈log₂ n⌉ rank bits
///   NOTIFY      tag
/// Ranks are encoded as rank - 1, so {1..n⁴} fits exactly.
inline unsigned bit_size(const Token& token, std::uint64_t n) {
  const unsigned rank_bits = 4 * ceil_log2(n);
  switch (token.type) {
    case TokenType::walk:
    case TokenType::win:
      return token_tag_bits + rank_bits + static_cast<unsigned>(std::bit_width(quorum_size(n)));
    case TokenType::candidate: return token_tag_bits + rank_bits;
    case TokenType::notify: return token_tag_bits;
  }
  return token_tag_bits;
}

}  // namespace elect
