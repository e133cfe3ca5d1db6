#include "qhh/tangle_word.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include "qhh/errors.hpp"

namespace qhh {

namespace {

int delta(Generator::Kind k) {
  switch (k) {
    case Generator::Kind::cup:
      return -2;
    case Generator::Kind::cap:
      return 2;
    default:
      return 0;
  }
}

std::string where(const Generator& g) {
  if (g.token == 0) return "generator " + g.format();
  return "token " + std::to_string(g.token) + " ('" + g.format() + "') at column " + std::to_string(g.column);
}

std::optional<int> parse_int(const std::string& s) {
  int v = 0;
  if (s.empty() || s.size() > 9) return std::nullopt;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

std::string Generator::format() const {
  const char* name = kind == Kind::cup ? "cup" : kind == Kind::cap ? "cap" : kind == Kind::xpos ? "x+" : "x-";
  return std::string(name) + ":" + std::to_string(pos);
}

int TangleWord::strands_after(std::size_t k) const {
  int s = strands;
  for (std::size_t i = 0; i < k && i < gens.size(); ++i) s += delta(gens[i].kind);
  return s;
}

std::string TangleWord::format() const {
  std::ostringstream os;
  os << "strands:" << strands;
  for (const auto& g : gens) os << " " << g.format();
  return os.str();
}

TangleWord TangleWord::rotated(std::size_t k) const {
  TangleWord w;
  w.strands = strands_after(k);
  w.gens.assign(gens.begin() + std::ptrdiff_t(k), gens.end());
  w.gens.insert(w.gens.end(), gens.begin(), gens.begin() + std::ptrdiff_t(k));
  for (auto& g : w.gens) g.token = g.column = 0;
  return w;
}

TangleWord TangleWord::with_r2(std::size_t k, int i) const {
  TangleWord w = *this;
  for (auto& g : w.gens) g.token = g.column = 0;
  const Generator a{Generator::Kind::xpos, i, 0, 0}, b{Generator::Kind::xneg, i, 0, 0};
  w.gens.insert(w.gens.begin() + std::ptrdiff_t(k), {a, b});
  return w;
}

std::vector<int> TangleWord::r2_positions(std::size_t k) const {
  std::vector<int> out;
  for (int i = 1; i < strands_after(k); ++i) out.push_back(i);
  return out;
}

void validate(const TangleWord& w) {
  if (w.strands < 0 || w.strands % 2 != 0) throw ParseError("strand count must be even and nonnegative, got " + std::to_string(w.strands));
  int s = w.strands;
  for (const auto& g : w.gens) {
    const int hi = g.kind == Generator::Kind::cap ? s + 1 : s - 1;
    if (g.pos < 1 || g.pos > hi)
      throw ParseError(where(g) + ": position out of range on " + std::to_string(s) + " strands (allowed 1.." + std::to_string(std::max(hi, 0)) + ")");
    s += delta(g.kind);
  }
}

TangleWord parse_tangle_word(const std::string& text, std::optional<int> strands) {
  TangleWord w;
  std::optional<int> header;
  int token = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    const std::string tok = text.substr(start, i - start);
    ++token;
    const int column = int(start) + 1;
    auto fail = [&](const std::string& why) -> ParseError {
      return ParseError("token " + std::to_string(token) + " ('" + tok + "') at column " + std::to_string(column) + ": " + why);
    };
    const auto colon = tok.find(':');
    if (colon == std::string::npos) throw fail("expected <name>:<integer>");
    const std::string name = tok.substr(0, colon);
    const auto value = parse_int(tok.substr(colon + 1));
    if (!value) throw fail("expected an integer after ':'");
    if (name == "strands") {
      if (token != 1) throw fail("the strands header must be the first token");
      if (*value < 0 || *value % 2 != 0) throw fail("strand count must be even and nonnegative");
      header = *value;
      continue;
    }
    Generator g;
    if (name == "cup")
      g.kind = Generator::Kind::cup;
    else if (name == "cap")
      g.kind = Generator::Kind::cap;
    else if (name == "x+")
      g.kind = Generator::Kind::xpos;
    else if (name == "x-")
      g.kind = Generator::Kind::xneg;
    else
      throw fail("unknown generator '" + name + "' (expected cup, cap, x+, x-)");
    if (*value < 1) throw fail("positions are 1-based");
    g.pos = *value;
    g.token = token;
    g.column = column;
    w.gens.push_back(g);
  }
  if (header && strands && *header != *strands)
    throw ParseError("strand count " + std::to_string(*strands) + " disagrees with the header strands:" + std::to_string(*header));
  if (!header && !strands) throw ParseError("missing strand count (give a strands:<2n> header or --strands)");
  w.strands = header ? *header : *strands;
  validate(w);
  return w;
}

}  // namespace qhh
