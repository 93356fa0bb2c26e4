#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "phylosat/certify.hpp"
#include "phylosat/trees.hpp"

// JSON encodings. Flows are residue arrays, relations carry "r", "left",
// "right" and optionally "modulus" (default 3).

namespace phylosat::io {

using json = nlohmann::json;

inline json to_json(const Flow& f) {
  json out = json::array();
  for (int i = 0; i < f.leaves(); ++i) out.push_back(f.residue(i));
  return out;
}

inline json to_json(const FlowMultiset& side) {
  json out = json::array();
  for (const auto& f : side) out.push_back(to_json(f));
  return out;
}

inline json to_json(const Relation& rel) {
  json out{{"r", rel.leaves()}, {"left", to_json(rel.left())}, {"right", to_json(rel.right())}};
  if (rel.modulus() != 3) out["modulus"] = rel.modulus();
  return out;
}

inline json to_json(const Step& step) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, AddZeroFlow>) {
          return {{"kind", "add_zero"}};
        } else if constexpr (std::is_same_v<T, ApplyGenerator>) {
          return {{"kind", "apply"},
                  {"side", to_string(s.side)},
                  {"removed", to_json(s.removed)},
                  {"added", to_json(s.added)},
                  {"generator", {{"left", to_json(s.generator.left())}, {"right", to_json(s.generator.right())}}},
                  {"case", s.case_tag}};
        } else if constexpr (std::is_same_v<T, DeleteCommon>) {
          return {{"kind", "delete"}, {"flow", to_json(s.flow)}};
        } else {
          return {{"kind", "final"},
                  {"generator", {{"left", to_json(s.generator.left())}, {"right", to_json(s.generator.right())}}}};
        }
      },
      step);
}

inline json to_json(const Certificate& cert) {
  json steps = json::array();
  for (const auto& s : cert.steps) steps.push_back(to_json(s));
  return {{"original", to_json(cert.original)}, {"n", cert.n}, {"steps", std::move(steps)}};
}

inline json to_json(const CertificateStats& s) {
  return {{"n", s.n},           {"quadrics", s.quadrics},       {"cubics", s.cubics},
          {"deletes", s.deletes}, {"peak_degree", s.peak_degree}, {"peak_grading", s.peak_grading}};
}

inline json to_json(const VerifyReport& rep) {
  json out{{"accepted", rep.accepted},
           {"failing_step", rep.failing_step ? json(*rep.failing_step) : json(nullptr)},
           {"clause", rep.clause ? json(*rep.clause) : json(nullptr)},
           {"stats", to_json(rep.stats)}};
  if (!rep.accepted) {
    out["message"] = rep.message;
    out["state"] = {{"left", to_json(rep.left_at_failure)}, {"right", to_json(rep.right_at_failure)}};
  }
  return out;
}

inline json to_json(const Tree& t) {
  json vertices = json::array();
  for (int v = 0; v < t.vertices(); ++v) vertices.push_back(v);
  json edges = json::array();
  for (const auto& [a, b] : t.edges()) edges.push_back({a, b});
  return {{"vertices", vertices}, {"edges", edges}, {"root", t.root()}};
}

inline json to_json(const TreeFlow& f) {
  json out = json::object();
  for (std::size_t e = 0; e < f.labels.size(); ++e) out[std::to_string(e)] = f.labels[e];
  return out;
}

inline json to_json(const TreeRelation& rel) {
  json left = json::array(), right = json::array();
  for (const auto& f : rel.left) left.push_back(to_json(f));
  for (const auto& f : rel.right) right.push_back(to_json(f));
  return {{"left", left}, {"right", right}};
}

// ---- parsing ----

inline Error malformed(const std::string& what) { return Error(ErrorKind::Malformed, what); }

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw malformed(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

inline int int_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer()) throw malformed(std::string("field \"") + key + "\" must be an integer");
  return v.get<int>();
}

inline Flow flow_from_json(const json& j, int leaves, int modulus) {
  if (!j.is_array()) throw malformed("flow must be an array of residues");
  std::vector<int> labels;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw malformed("flow labels must be integers");
    labels.push_back(v.get<int>());
  }
  if (static_cast<int>(labels.size()) != leaves) {
    throw Error(ErrorKind::LeafCountMismatch,
                "flow has " + std::to_string(labels.size()) + " labels, expected " + std::to_string(leaves));
  }
  return Flow::from_residues(labels, modulus);
}

inline FlowMultiset side_from_json(const json& j, int leaves, int modulus) {
  if (!j.is_array()) throw malformed("side must be an array of flows");
  FlowMultiset out;
  for (const auto& f : j) out.push_back(flow_from_json(f, leaves, modulus));
  return out;
}

/// Reads the two sides without checking that they form a relation.
inline Relation raw_relation_from_json(const json& j, int leaves, int modulus) {
  return Relation::trusted(side_from_json(field(j, "left"), leaves, modulus),
                           side_from_json(field(j, "right"), leaves, modulus), leaves, modulus);
}

inline std::pair<int, int> shape_of(const json& j) {
  const int leaves = int_field(j, "r");
  const int modulus = j.contains("modulus") ? int_field(j, "modulus") : 3;
  if (leaves < 1) throw malformed("r must be positive");
  if (modulus < 2 || modulus > 255) throw malformed("modulus out of range");
  return {leaves, modulus};
}

/// Parses and validates a relation (sides are not canceled).
inline Relation relation_from_json(const json& j) {
  const auto [leaves, modulus] = shape_of(j);
  return Relation::validated(side_from_json(field(j, "left"), leaves, modulus),
                             side_from_json(field(j, "right"), leaves, modulus), leaves, modulus);
}

inline Side side_name(const json& j) {
  if (j == "left") return Side::Left;
  if (j == "right") return Side::Right;
  throw malformed("side must be \"left\" or \"right\"");
}

/// Parses a certificate without judging it; that is the verifier's job.
inline Certificate certificate_from_json(const json& j) {
  const json& orig = field(j, "original");
  const auto [leaves, modulus] = shape_of(orig);
  Certificate cert;
  cert.original = raw_relation_from_json(orig, leaves, modulus);
  cert.n = int_field(j, "n");
  const json& steps = field(j, "steps");
  if (!steps.is_array()) throw malformed("steps must be an array");
  for (const auto& s : steps) {
    const json& kind = field(s, "kind");
    if (kind == "add_zero") {
      cert.steps.emplace_back(AddZeroFlow{});
    } else if (kind == "apply") {
      ApplyGenerator g;
      g.side = side_name(field(s, "side"));
      g.removed = side_from_json(field(s, "removed"), leaves, modulus);
      g.added = side_from_json(field(s, "added"), leaves, modulus);
      g.generator = raw_relation_from_json(field(s, "generator"), leaves, modulus);
      if (s.contains("case")) g.case_tag = s.at("case").get<std::string>();
      cert.steps.emplace_back(std::move(g));
    } else if (kind == "delete") {
      cert.steps.emplace_back(DeleteCommon{flow_from_json(field(s, "flow"), leaves, modulus)});
    } else if (kind == "final") {
      cert.steps.emplace_back(EmitFinal{raw_relation_from_json(field(s, "generator"), leaves, modulus)});
    } else {
      throw malformed("unknown step kind");
    }
  }
  return cert;
}

inline Tree tree_from_json(const json& j) {
  const json& vertices = field(j, "vertices");
  if (!vertices.is_array()) throw malformed("vertices must be an array");
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (!vertices[i].is_number_integer() || vertices[i].get<long long>() != static_cast<long long>(i)) {
      throw malformed("vertices must be listed as 0, 1, ..., n-1");
    }
  }
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : field(j, "edges")) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
      throw malformed("edge must be a pair of vertex ids");
    }
    edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  return Tree(static_cast<int>(vertices.size()), std::move(edges), int_field(j, "root"));
}

inline json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw malformed("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw malformed(path + ": " + e.what());
  }
}

}  // namespace phylosat::io
