// Command-line front end: checks and elaborates declarations, decides
// equalities, enumerates classes and runs the initiality checks.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qwt/qwt.hpp"

namespace {

using namespace qwt;

enum Exit { Ok = 0, Usage = 1, Semantic = 2, Unknown = 3, Separated = 4, SelftestFailed = 5 };

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string file;
  std::size_t probe = 2;
  std::size_t max_rounds = 32;
  std::size_t max_nodes = 200000;
  std::size_t size_bound = 3;
  std::size_t carrier_bound = 3;
  std::vector<std::string> generators;
  std::string format = "json";
  std::string algebra;
  std::string target;
  std::string term;
  std::string lhs;
  std::string rhs;
  bool no_separate = false;
};

/// A loaded input: the theory, and the elaboration when it came from a .qit file.
struct Instance {
  Theory theory;
  std::vector<std::string> generators;
  std::optional<schema::Elaboration> elaboration;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json(const std::string& path) {
  std::string text = read_file(path);
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw IoError("'" + path + "' is not valid JSON");
  return j;
}

bool is_qit(const std::string& path) { return std::filesystem::path(path).extension() == ".qit"; }

Instance load(const Options& o) {
  Instance inst;
  inst.generators = o.generators;
  if (is_qit(o.file)) {
    auto decl = schema::parse_decl(read_file(o.file));
    inst.elaboration = schema::elaborate(decl, o.probe);
    inst.theory = inst.elaboration->theory;
    return inst;
  }
  Json j = read_json(o.file);
  try {
    inst.theory.signature = signature_from_json(j.at("signature"));
    inst.theory.equations = system_from_json(inst.theory.signature, j.at("equations"));
    if (j.contains("generators"))
      for (const auto& g : j.at("generators")) inst.generators.push_back(g.get<std::string>());
  } catch (const Json::exception& e) {
    fail(ErrorCode::Json, e.what());
  }
  return inst;
}

QWState make_state(const Instance& inst, const Options& o) {
  Bounds b;
  b.max_rounds = o.max_rounds;
  b.max_nodes = o.max_nodes;
  return QWState(inst.theory.signature, inst.theory.equations, b, inst.generators);
}

/// Declaration syntax first (`a :: b :: []`, `node a {0: leaf, _: leaf}`),
/// then the raw operator syntax (`cons[a](nil)`).
OpenTerm parse_literal(const Instance& inst, const std::string& text) {
  if (inst.elaboration) {
    try {
      return schema::elaborate_term(*inst.elaboration, schema::parse_pattern(text));
    } catch (const schema::SchemaError&) {
    }
  }
  return read_term(text);
}

void emit(const Options& o, const Json& j, const std::string& text) {
  if (o.format == "json")
    std::cout << j.dump(2) << '\n';
  else
    std::cout << text << '\n';
}

Json classification_json(const schema::Classification& c) {
  Json j = Json::object();
  j["recursive"] = c.recursive;
  j["conditional"] = c.conditional;
  j["finitary"] = c.finitary;
  return j;
}

int cmd_check(const Options& o) {
  Json j = Json::object();
  if (is_qit(o.file)) {
    auto decl = schema::parse_decl(read_file(o.file));
    schema::check_positivity(decl);
    auto cls = schema::classify(decl);
    if (cls.conditional)
      for (const auto& c : decl.constructors)
        for (const auto& e : c.telescope)
          if (schema::has_condition(e.type))
            schema::raise(schema::ErrorKind::ConditionalUnsupported, e.pos,
                          "constructor '" + c.name + "' has a condition; conditional declarations are not supported");
    j["name"] = decl.name;
    j["constructors"] = decl.element_count();
    j["equalities"] = decl.equality_count();
    j["classification"] = classification_json(cls);
    std::string text = decl.name + ": " + (cls.recursive ? "recursive" : "non-recursive") + ", " +
                       (cls.conditional ? "conditional" : "equational") + ", " +
                       (cls.finitary ? "finitary" : "infinitary");
    emit(o, j, text);
    return Ok;
  }
  Instance inst = load(o);
  j["operators"] = inst.theory.signature.size();
  j["equations"] = inst.theory.equations.size();
  emit(o, j,
       std::to_string(inst.theory.signature.size()) + " operators, " + std::to_string(inst.theory.equations.size()) +
           " equations");
  return Ok;
}

int cmd_elaborate(const Options& o) {
  Instance inst = load(o);
  Json j = to_json(inst.theory);
  if (inst.elaboration) j["classification"] = classification_json(inst.elaboration->classification);
  std::cout << j.dump(2) << '\n';
  return Ok;
}

int cmd_eq(const Options& o) {
  Instance inst = load(o);
  QWState st = make_state(inst, o);
  OpenTerm t = parse_literal(inst, o.lhs);
  OpenTerm u = parse_literal(inst, o.rhs);
  ClassId a = st.intern(t);
  ClassId b = st.intern(u);
  st.saturate();
  EqDecision d = st.decide_eq(a, b);
  Json j = Json::object();
  j["lhs"] = show(t);
  j["rhs"] = show(u);
  j["saturation"] = to_string(*st.last_saturation());
  if (d.proved) {
    j["verdict"] = "proved";
    j["derivation"] = derivation_to_json(st, d.derivation);
    emit(o, j, "proved (" + std::to_string(d.derivation.size()) + " steps)");
    return Ok;
  }
  if (!o.no_separate) {
    auto sep = find_separator(st.signature(), st.equations(), t, u, o.carrier_bound);
    if (sep.algebra) {
      j["verdict"] = "separated";
      j["algebra"] = to_json(*sep.algebra);
      emit(o, j, "separated by a " + std::to_string(sep.algebra->size()) + "-element algebra");
      return Separated;
    }
    j["separator_search"] = {{"tried", sep.tried}, {"exhausted", sep.exhausted}};
  }
  j["verdict"] = "unknown";
  emit(o, j, std::string("unknown") + (d.budget_exhausted ? " (saturation budget exhausted)" : ""));
  return Unknown;
}

int cmd_enumerate(const Options& o) {
  Instance inst = load(o);
  QWState st = make_state(inst, o);
  Enumeration en = st.enumerate(o.size_bound);
  Json classes = Json::array();
  std::ostringstream text;
  for (const auto& c : en.classes) {
    classes.push_back({{"id", c.id.value}, {"stage", c.stage}, {"representative", show(c.representative)}});
    text << show(c.representative) << '\n';
  }
  Json j = Json::object();
  j["size_bound"] = o.size_bound;
  j["status"] = to_string(en.status);
  j["count"] = en.classes.size();
  j["classes"] = std::move(classes);
  text << en.classes.size() << " classes (" << to_string(en.status) << ")";
  emit(o, j, text.str());
  return Ok;
}

FiniteAlgebra load_algebra(const QWState& st, const std::string& path) {
  if (path.empty()) throw CLI::ValidationError("--algebra", "an algebra file is required");
  return algebra_from_json(st.signature(), read_json(path));
}

int cmd_sat(const Options& o) {
  Instance inst = load(o);
  QWState st = make_state(inst, o);
  FiniteAlgebra alg = load_algebra(st, o.algebra);
  SatReport r = sat_check(alg, st.equations());
  emit(o, to_json(r, &alg), r.satisfied ? "satisfied" : "violated: " + r.equation);
  return r.satisfied ? Ok : Unknown;
}

RecTarget load_target(const QWState& st, const std::string& path) {
  Json j = read_json(path);
  if (j.contains("sat")) return rec_target_from_json(st.signature(), j);
  return make_rec_target(algebra_from_json(st.signature(), j), st.equations());
}

int cmd_rec(const Options& o) {
  Instance inst = load(o);
  QWState st = make_state(inst, o);
  if (o.target.empty() && o.algebra.empty()) throw CLI::ValidationError("--target", "a target algebra is required");
  RecTarget tgt = load_target(st, o.target.empty() ? o.algebra : o.target);
  ClassId c = st.intern(parse_literal(inst, o.term));
  st.saturate();
  Value v = qw_rec(st, tgt, c);
  Json j = Json::object();
  j["term"] = show(st.representative(c));
  j["value"] = tgt.algebra.label(v);
  emit(o, j, tgt.algebra.label(v));
  return Ok;
}

int cmd_separate(const Options& o) {
  Instance inst = load(o);
  QWState st = make_state(inst, o);
  OpenTerm t = parse_literal(inst, o.lhs);
  OpenTerm u = parse_literal(inst, o.rhs);
  auto sep = find_separator(st.signature(), st.equations(), t, u, o.carrier_bound);
  Json j = Json::object();
  j["found"] = sep.algebra.has_value();
  if (sep.algebra) j["algebra"] = to_json(*sep.algebra);
  j["tried"] = sep.tried;
  j["exhausted"] = sep.exhausted;
  emit(o, j, sep.algebra ? "separated" : "no separator found");
  return sep.algebra ? Ok : Unknown;
}

/// Default selftest target: an algebra separating the first two enumerated
/// classes, or the one-point algebra when there is nothing to separate.
RecTarget default_target(QWState& st, const std::vector<EnumeratedClass>& classes, std::size_t carrier_bound) {
  if (classes.size() >= 2) {
    auto sep = find_separator(st.signature(), st.equations(), classes[0].representative, classes[1].representative,
                              carrier_bound);
    if (sep.algebra) return make_rec_target(*sep.algebra, st.equations());
  }
  auto one = FiniteAlgebra::tabulate(st.signature(), 1, st.probe(),
                                     [](const std::string&, const std::vector<Value>&) { return Value{0}; });
  return make_rec_target(one, st.equations());
}

Json class_list(const std::vector<ClassId>& cs) {
  Json a = Json::array();
  for (ClassId c : cs) a.push_back(c.value);
  return a;
}

int cmd_selftest(const Options& o) {
  Instance inst = load(o);
  QWState st = make_state(inst, o);
  Enumeration en = st.enumerate(o.size_bound);
  std::vector<ClassId> frag;
  for (const auto& c : en.classes) frag.push_back(c.id);
  RecTarget tgt = o.target.empty() && o.algebra.empty() ? default_target(st, en.classes, o.carrier_bound)
                                                       : load_target(st, o.target.empty() ? o.algebra : o.target);

  Json report = Json::object();
  report["classes"] = frag.size();
  report["saturation"] = to_string(en.status);
  report["target"] = to_json(tgt);
  bool all_ok = true;
  std::ostringstream text;
  auto suite = [&](const std::string& name, auto&& body) {
    Json r = Json::object();
    try {
      body(r);
    } catch (const Error& e) {
      r["ok"] = false;
      r["error"] = e.what();
    }
    bool ok = r.value("ok", false);
    all_ok = all_ok && ok;
    text << (ok ? "ok   " : "FAIL ") << name << '\n';
    report[name] = std::move(r);
  };

  suite("replay", [&](Json& r) {
    auto rep = replay(st);
    r["ok"] = rep.ok;
    r["checked"] = rep.checked;
    if (!rep.ok) r["message"] = rep.message;
  });
  suite("qwequ", [&](Json& r) {
    auto q = check_qwequ(st, frag);
    r["ok"] = q.ok;
    r["instances"] = q.instances;
    r["proved"] = q.proved;
    if (!q.ok) {
      r["equation"] = *q.failed_equation;
      r["env"] = class_list(q.failed_env);
    }
  });
  suite("recHom", [&](Json& r) {
    auto h = check_rec_hom(st, tgt.algebra, frag);
    r["ok"] = h.ok;
    r["checked"] = h.checked;
    if (!h.ok) {
      Json cx = Json::object();
      cx["node"] = show(iota(*h.counterexample));
      cx["lhs"] = tgt.algebra.label(h.lhs);
      cx["rhs"] = tgt.algebra.label(h.rhs);
      r["counterexample"] = std::move(cx);
      return;
    }
    auto ind = check_representative_independence(st, tgt.algebra, st.classes());
    r["members_checked"] = ind.members_checked;
    if (!ind.ok) {
      r["ok"] = false;
      r["representative_dependence"] = {{"class", ind.cls->value}, {"member", ind.member->value}};
    }
  });
  suite("uniqueness", [&](Json& r) {
    auto u = check_uniq(st, tgt, frag, [&](ClassId c) { return qw_rec(st, tgt, c); });
    r["verdict"] = to_string(u.verdict);
    r["ok"] = u.verdict == UniqReport::Verdict::Ok;
    if (!assignment_count(tgt.algebra.size(), frag.size(), 1u << 20)) {
      r["search"] = "skipped: too many maps";
      return;
    }
    auto hs = search_homomorphisms(st, tgt, frag);
    r["maps_tried"] = hs.maps_tried;
    r["homomorphisms"] = hs.homomorphisms.size();
    bool matches = hs.homomorphisms.size() == 1;
    for (std::size_t i = 0; matches && i < frag.size(); ++i)
      matches = hs.homomorphisms[0][i] == qw_rec(st, tgt, frag[i]);
    if (!matches) r["ok"] = false;
  });
  suite("qwComp", [&](Json& r) {
    validate_target(tgt, st.equations());
    auto fam = constant_family(tgt.algebra);
    auto c = check_comp(st, fam, frag);
    r["checked"] = c.checked;
    r["ok"] = c.ok;
    if (!c.ok) {
      r["counterexample"] = show(iota(*c.counterexample));
      return;
    }
    auto coh = check_coherence(st, fam, frag);
    r["coherence_instances"] = coh.instances;
    if (!coh.ok) {
      r["ok"] = false;
      r["coherence_failure"] = {{"equation", *coh.equation}, {"reason", coh.reason}};
    }
  });
  report["ok"] = all_ok;
  text << frag.size() << " classes; " << (all_ok ? "all suites pass" : "failures");
  if (o.format == "json")
    std::cout << report.dump(2) << '\n';
  else
    std::cout << text.str() << '\n';
  return all_ok ? Ok : SelftestFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quotient W-type toolkit"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("file", o.file, "declaration (.qit) or theory (.json)")->required();
    sub->add_option("--probe", o.probe, "omega truncation depth")->check(CLI::PositiveNumber);
    sub->add_option("--max-rounds", o.max_rounds, "saturation rounds")->check(CLI::PositiveNumber);
    sub->add_option("--max-nodes", o.max_nodes, "node budget")->check(CLI::PositiveNumber);
    sub->add_option("--gen", o.generators, "generator name (free algebra mode)");
    sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "text"}));
  };

  auto* check = app.add_subcommand("check", "parse, positivity and classification");
  common(check);
  auto* elab = app.add_subcommand("elaborate", "print the (signature, equations) encoding");
  common(elab);
  auto* eq = app.add_subcommand("eq", "decide equality of two closed terms");
  common(eq);
  eq->add_option("lhs", o.lhs)->required();
  eq->add_option("rhs", o.rhs)->required();
  eq->add_option("--carrier-bound", o.carrier_bound, "largest separator carrier")->check(CLI::PositiveNumber);
  eq->add_flag("--no-separate", o.no_separate, "skip the separator search");
  auto* en = app.add_subcommand("enumerate", "classes of closed terms up to a size bound");
  common(en);
  en->add_option("--size-bound", o.size_bound)->check(CLI::PositiveNumber);
  auto* sat = app.add_subcommand("sat", "check an algebra against the equations");
  common(sat);
  sat->add_option("--algebra", o.algebra)->required();
  auto* rec = app.add_subcommand("rec", "evaluate the recursor on a term");
  common(rec);
  rec->add_option("--target", o.target, "algebra or target JSON");
  rec->add_option("--algebra", o.algebra, "algebra JSON");
  rec->add_option("--term", o.term)->required();
  auto* sep = app.add_subcommand("separate", "search for a separating algebra");
  common(sep);
  sep->add_option("lhs", o.lhs)->required();
  sep->add_option("rhs", o.rhs)->required();
  sep->add_option("--carrier-bound", o.carrier_bound)->check(CLI::PositiveNumber);
  auto* self = app.add_subcommand("selftest", "run the initiality checks on enumerated classes");
  common(self);
  self->add_option("--size-bound", o.size_bound)->check(CLI::PositiveNumber);
  self->add_option("--carrier-bound", o.carrier_bound)->check(CLI::PositiveNumber);
  self->add_option("--target", o.target, "algebra or target JSON");
  self->add_option("--algebra", o.algebra, "algebra JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return Usage;
  }

  try {
    if (*check) return cmd_check(o);
    if (*elab) return cmd_elaborate(o);
    if (*eq) return cmd_eq(o);
    if (*en) return cmd_enumerate(o);
    if (*sat) return cmd_sat(o);
    if (*rec) return cmd_rec(o);
    if (*sep) return cmd_separate(o);
    if (*self) return cmd_selftest(o);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return Usage;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return Usage;
  } catch (const schema::SchemaError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return Semantic;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return Semantic;
  }
  return Usage;
}
