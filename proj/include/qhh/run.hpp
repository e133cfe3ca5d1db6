#pragma once

#include <iosfwd>
#include <optional>
#include <string>

namespace qhh {

enum class Mode { qhh_tangle, qhh_custom, verify };
enum class Format { text, json };

/// Exit statuses of run().
enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_precondition = 2, exit_internal = 3 };

struct RunConfig {
  Mode mode = Mode::qhh_tangle;
  /// "Q", "Fp:<p>", "Qq"; unset picks Qq when q is generic or in verify mode, else Q.
  std::optional<std::string> field;
  /// "generic", "<int>", "<num>/<den>"; unset picks generic over Qq, else 1.
  std::optional<std::string> q;
  int max_degree = 3;
  std::optional<int> strands;
  /// Inline tangle word.
  std::optional<std::string> word;
  /// Tangle word file (qhh-tangle) or JSON input document (qhh-custom).
  std::optional<std::string> input;
  Format format = Format::text;
};

std::string mode_name(Mode m);
/// Parses a mode name; throws ParseError.
Mode parse_mode(const std::string& s);

/// Runs one computation, writing the report to out and diagnostics to err. Never throws.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace qhh
