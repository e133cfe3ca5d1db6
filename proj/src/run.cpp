#include "qhh/run.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "qhh/arc.hpp"
#include "qhh/serialize.hpp"
#include "qhh/verify.hpp"

namespace qhh {

namespace {

struct Resolved {
  FieldSpec field;
  QSpec q;
};

Resolved resolve(const RunConfig& c) {
  Resolved r;
  std::optional<QSpec> q;
  if (c.q) q = QSpec::parse(*c.q);
  if (c.field)
    r.field = FieldSpec::parse(*c.field);
  else if (c.mode == Mode::verify || (q && q->generic))
    r.field = FieldSpec::parse("Qq");
  else
    r.field = FieldSpec::parse("Q");
  const bool function_field = r.field.kind == FieldSpec::Kind::rational_functions;
  r.q = q ? *q : QSpec::parse(function_field ? "generic" : "1");
  if (r.q.generic && !function_field) throw ParseError("--q generic needs --field Qq (got " + r.field.name() + ")");
  return r;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read input file '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Json config_json(const RunConfig& c, const Resolved& r) {
  Json j;
  j["mode"] = mode_name(c.mode);
  j["field"] = r.field.name();
  j["q"] = r.q.name();
  j["max_degree"] = c.max_degree;
  if (c.strands) j["strands"] = *c.strands;
  if (c.word) j["word"] = *c.word;
  if (c.input) j["input"] = *c.input;
  return j;
}

std::string config_text(const Json& cfg) {
  std::ostringstream s;
  s << "mode " << cfg["mode"].get<std::string>() << ", field " << cfg["field"].get<std::string>() << ", q " << cfg["q"].get<std::string>()
    << ", max degree " << cfg["max_degree"].get<int>() << "\n";
  return s.str();
}

void emit_table(const RunConfig& c, const Json& cfg, const PoincareTable& t, std::ostream& out) {
  if (c.format == Format::json) {
    Json j = table_to_json(t);
    j["config"] = cfg;
    out << j.dump(2) << "\n";
    return;
  }
  out << config_text(cfg);
  if (cfg.contains("tangle")) out << "tangle " << cfg["tangle"].get<std::string>() << "\n";
  out << t.format_text();
}

int tangle_mode(const RunConfig& c, const Resolved& r, Json cfg, std::ostream& out) {
  if (c.word && c.input) throw ParseError("give the tangle word either inline (--word) or as a file (--input), not both");
  if (!c.word && !c.input) throw ParseError("qhh-tangle needs a tangle word (--word or --input)");
  const std::string text = c.word ? *c.word : read_file(*c.input);
  const TangleWord w = parse_tangle_word(text, c.strands);
  cfg["tangle"] = w.format();
  return with_field(r.field, [&](auto field) {
    using F = decltype(field);
    const auto q = make_q(field, r.q);
    ArcContext<F> ctx(field);
    emit_table(c, cfg, ctx.annular_qkh(w, q, c.max_degree), out);
    return int(exit_ok);
  });
}

int custom_mode(const RunConfig& c, const Resolved& r, const Json& cfg, std::ostream& out) {
  if (!c.input) throw ParseError("qhh-custom needs a JSON input document (--input)");
  if (c.word) throw ParseError("qhh-custom takes no tangle word");
  const Json doc = parse_json(read_file(*c.input));
  return with_field(r.field, [&](auto field) {
    using F = decltype(field);
    const auto q = make_q(field, r.q);
    const auto in = custom_input_from_json(field, doc);
    emit_table(c, cfg, qhh::qhh(HochschildSpec<F>{in.algebra, in.coefficients, q, c.max_degree}), out);
    return int(exit_ok);
  });
}

int verify_mode(const RunConfig& c, const Resolved& r, const Json& cfg, std::ostream& out) {
  const auto claims = with_field(r.field, [&](auto field) { return verify_claims(field, make_q(field, r.q), c.max_degree); });
  bool all = true;
  for (const auto& cl : claims) all = all && cl.pass();
  if (c.format == Format::json) {
    Json j;
    j["config"] = cfg;
    Json list = Json::array();
    for (const auto& cl : claims) {
      Json cases = Json::array();
      for (const auto& k : cl.cases) {
        Json e{{"name", k.name}, {"pass", k.pass}};
        if (!k.detail.empty()) e["detail"] = k.detail;
        cases.push_back(std::move(e));
      }
      list.push_back({{"claim", cl.claim}, {"pass", cl.pass()}, {"passed", cl.passed()}, {"total", cl.cases.size()}, {"cases", std::move(cases)}});
    }
    j["claims"] = std::move(list);
    j["all_pass"] = all;
    out << j.dump(2) << "\n";
  } else {
    out << config_text(cfg);
    for (const auto& cl : claims) {
      out << (cl.pass() ? "PASS " : "FAIL ") << cl.claim << " (" << cl.passed() << "/" << cl.cases.size() << " cases)\n";
      for (const auto& k : cl.cases)
        if (!k.pass) out << "  failed: " << k.name << (k.detail.empty() ? "" : ": " + k.detail) << "\n";
    }
  }
  return all ? exit_ok : exit_internal;
}

}  // namespace

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::qhh_tangle:
      return "qhh-tangle";
    case Mode::qhh_custom:
      return "qhh-custom";
    case Mode::verify:
    default:
      return "verify-paper";
  }
}

Mode parse_mode(const std::string& s) {
  if (s == "qhh-tangle") return Mode::qhh_tangle;
  if (s == "qhh-custom") return Mode::qhh_custom;
  if (s == "verify-paper") return Mode::verify;
  throw ParseError("unknown mode '" + s + "' (expected qhh-tangle, qhh-custom, verify-paper)");
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (c.max_degree < 1) throw ParseError("--max-degree must be at least 1");
    const Resolved r = resolve(c);
    const Json cfg = config_json(c, r);
    switch (c.mode) {
      case Mode::qhh_tangle:
        return tangle_mode(c, r, cfg, out);
      case Mode::qhh_custom:
        return custom_mode(c, r, cfg, out);
      case Mode::verify:
      default:
        return verify_mode(c, r, cfg, out);
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return exit_precondition;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << "\n";
    return exit_internal;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return exit_internal;
  }
}

}  // namespace qhh
