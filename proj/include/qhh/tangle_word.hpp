#pragma once

// Tangle words: whitespace-separated tokens read bottom to top.
//
//   strands:<2n>   optional header, first token only: strand count at the bottom
//   cup:<i>        local maximum joining strands i, i+1 (count - 2)
//   cap:<i>        local minimum creating new strands i, i+1 (count + 2)
//   x+:<i>         positive crossing of strands i, i+1
//   x-:<i>         negative crossing of strands i, i+1
//
// Positions are 1-based. Errors carry the 1-based token index and its column.

#include <optional>
#include <string>
#include <vector>

namespace qhh {

struct Generator {
  enum class Kind { cup, cap, xpos, xneg };
  Kind kind = Kind::cup;
  int pos = 1;
  int token = 0;   // 1-based token index in the source text, 0 if synthesized
  int column = 0;  // 1-based column in the source text

  std::string format() const;
  bool operator==(const Generator& o) const { return kind == o.kind && pos == o.pos; }
};

struct TangleWord {
  int strands = 0;
  std::vector<Generator> gens;

  /// Strand count after the first k generators (k = 0 is the entry count).
  int strands_after(std::size_t k) const;
  int exit_strands() const { return strands_after(gens.size()); }
  bool closed() const { return strands == exit_strands(); }

  /// Canonical text: "strands:<k>" followed by the generators.
  std::string format() const;
  /// The word read from generator k onwards, then generators 0..k-1.
  TangleWord rotated(std::size_t k) const;
  /// The word with "x+:i x-:i" inserted before generator k.
  TangleWord with_r2(std::size_t k, int i) const;
  /// Positions i admissible for a crossing pair inserted before generator k.
  std::vector<int> r2_positions(std::size_t k) const;
};

/// Parses a word. `strands` supplies the entry count when the text has no header; if both are
/// given they must agree. Throws ParseError for malformed tokens, positions out of range,
/// odd strand counts, or a missing strand count.
TangleWord parse_tangle_word(const std::string& text, std::optional<int> strands = std::nullopt);

/// Checks positions and parities; throws ParseError naming the offending generator.
void validate(const TangleWord& w);

}  // namespace qhh
