#pragma once

#include <string>

#include "qwt/core/json_io.hpp"
#include "qwt/core/print.hpp"
#include "qwt/engine/qw_state.hpp"

namespace qwt {

inline Json payload_to_json(const Payload& p) {
  return detail::term_to_json(p, [](const ClassId& c) { return c.value; });
}

inline std::string show(const Payload& p) {
  std::ostringstream os;
  print_term(os, p, [](const ClassId& c) { return "#" + std::to_string(c.value); });
  return os.str();
}

inline Json edge_to_json(const QWState& st, const MergeRecord& r) {
  Json e = Json::object();
  e["a"] = r.a.value;
  e["b"] = r.b.value;
  e["rule"] = to_string(r.why.rule);
  if (r.why.rule == Rule::SqEq) {
    e["equation"] = st.equations().equations()[r.why.equation].name;
    Json env = Json::array();
    for (ClassId c : r.why.env) env.push_back(c.value);
    e["subst"] = std::move(env);
  }
  if (r.why.children) e["children"] = payload_to_json(iota(SNode<ClassId>{st.payload(r.a).op(), *r.why.children}));
  return e;
}

/// A proof-forest path as a list of steps, each carrying its edge.
inline Json derivation_to_json(const QWState& st, const std::vector<DerivationStep>& steps) {
  Json out = Json::array();
  for (const auto& s : steps) {
    Json o = Json::object();
    o["from"] = s.from.value;
    o["to"] = s.to.value;
    o["edge"] = edge_to_json(st, st.merge_log()[s.edge]);
    out.push_back(std::move(o));
  }
  return out;
}

/// Classes with their representatives and members, and the proof forest.
inline Json snapshot(QWState& st) {
  Json nodes = Json::array();
  for (std::uint32_t i = 0; i < st.node_count(); ++i) {
    Json n = Json::object();
    n["id"] = i;
    n["stage"] = st.node_stage(ClassId{i});
    n["payload"] = payload_to_json(st.payload(ClassId{i}));
    nodes.push_back(std::move(n));
  }
  Json classes = Json::array();
  for (ClassId c : st.classes()) {
    Json o = Json::object();
    o["id"] = c.value;
    o["stage"] = st.stage_of(c);
    o["representative"] = show(st.representative(c));
    Json members = Json::array();
    for (ClassId m : st.members(c)) members.push_back(m.value);
    o["members"] = std::move(members);
    classes.push_back(std::move(o));
  }
  Json edges = Json::array();
  for (const auto& r : st.merge_log()) edges.push_back(edge_to_json(st, r));
  Json j = Json::object();
  j["nodes"] = std::move(nodes);
  j["classes"] = std::move(classes);
  j["edges"] = std::move(edges);
  return j;
}

}  // namespace qwt
