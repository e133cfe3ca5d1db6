#include <iostream>

#include <CLI11.hpp>

#include "qhh/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Quantum Hochschild homology of graded algebras, bimodules and tangle words"};
  std::string mode, format = "text";
  std::string field, q;
  qhh::RunConfig config;
  app.add_option("--mode", mode, "qhh-tangle, qhh-custom or verify-paper")->required()->check(CLI::IsMember({"qhh-tangle", "qhh-custom", "verify-paper"}));
  app.add_option("--field", field, "Q, Fp:<p> or Qq (default: Qq for generic q and verify-paper, else Q)");
  app.add_option("--q", q, "generic, <integer> or <num>/<den> (default: generic over Qq, else 1)");
  app.add_option("--max-degree", config.max_degree, "build the complex through this degree; homology is reported one below")->capture_default_str();
  app.add_option("--strands", config.strands, "strand count when the word has no strands:<2n> header");
  app.add_option("--word", config.word, "inline tangle word, read bottom to top");
  app.add_option("--input", config.input, "tangle word file (qhh-tangle) or JSON document (qhh-custom)");
  app.add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return qhh::exit_usage;
  }
  config.mode = qhh::parse_mode(mode);
  if (!field.empty()) config.field = field;
  if (!q.empty()) config.q = q;
  config.format = format == "json" ? qhh::Format::json : qhh::Format::text;
  return qhh::run(config, std::cout, std::cerr);
}
