#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "deplab/coloring_model.hpp"
#include "deplab/connect.hpp"
#include "deplab/distribution.hpp"
#include "deplab/errors.hpp"
#include "deplab/graph.hpp"
#include "deplab/independence.hpp"
#include "deplab/scalar.hpp"
#include "deplab/thresholds.hpp"

namespace deplab {

// nlohmann's default object container keeps keys sorted, so serialized
// output is byte-for-byte deterministic for identical inputs.
using Json = nlohmann::json;

inline std::string mask_to_hex(EdgeMask mask) {
  if (mask == 0) return "0";
  static const char* digits = "0123456789abcdef";
  std::string out;
  while (mask != 0) {
    out.push_back(digits[static_cast<unsigned>(mask & 0xf)]);
    mask >>= 4;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

inline EdgeMask mask_from_hex(const std::string& text) {
  if (text.empty() || text.size() > 32)
    throw usage_error("malformed edge mask: \"" + text + "\"");
  EdgeMask out = 0;
  for (const char ch : text) {
    int digit;
    if (ch >= '0' && ch <= '9') {
      digit = ch - '0';
    } else if (ch >= 'a' && ch <= 'f') {
      digit = ch - 'a' + 10;
    } else {
      throw usage_error("malformed edge mask: \"" + text + "\"");
    }
    out = (out << 4) | static_cast<unsigned>(digit);
  }
  return out;
}

// ---- scalars ------------------------------------------------------------

inline Json json_from_scalar(const Scalar& s) {
  switch (s.kind()) {
    case ScalarKind::rational:
      return Json(format_rational(s.as_rational()));
    case ScalarKind::quadext: {
      const QuadExt& q = s.as_quadext();
      Json out;
      out["a"] = format_rational(q.a);
      out["b"] = format_rational(q.b);
      out["d"] = static_cast<std::int64_t>(q.d.convert_to<long long>());
      return out;
    }
    case ScalarKind::bigfloat: {
      Json out;
      out["precision"] = static_cast<std::int64_t>(s.as_bigfloat().precision());
      out["value"] = s.as_bigfloat().to_string();
      return out;
    }
  }
  throw kind_error("unreachable");
}

inline Scalar scalar_from_json(const Json& j) {
  if (j.is_string()) return Scalar(parse_rational(j.get<std::string>()));
  if (j.is_object()) {
    if (j.contains("d")) {
      const Rational a = parse_rational(j.at("a").get<std::string>());
      const Rational b = parse_rational(j.at("b").get<std::string>());
      const long long d = j.at("d").get<long long>();
      return Scalar(QuadExt{a, b, Int(d)});
    }
    if (j.contains("value")) {
      mpfr_prec_t prec = 0;
      if (j.contains("precision")) prec = j.at("precision").get<long>();
      return Scalar(BigFloat::from_string(j.at("value").get<std::string>(), prec));
    }
  }
  throw usage_error(
      "malformed scalar: expected \"p/q\", {a, b, d}, or {value, precision}");
}

// ---- graphs -------------------------------------------------------------

inline Json json_from_graph(const Graph& g) {
  Json edges = Json::array();
  for (const auto& [i, j] : g.edges()) edges.push_back(Json::array({i, j}));
  Json out;
  out["edges"] = std::move(edges);
  out["mask"] = mask_to_hex(g.mask);
  out["n"] = g.n;
  return out;
}

inline Graph graph_from_json(const Json& j) {
  const int n = j.at("n").get<int>();
  if (n < 1 || n > kMaxVertices)
    throw usage_error("graph vertex count must be in [1, 16]");
  EdgeMask mask = 0;
  for (const auto& edge : j.at("edges")) {
    if (!edge.is_array() || edge.size() != 2)
      throw usage_error("graph edges must be [i, j] pairs");
    mask |= edge_bit(edge[0].get<int>(), edge[1].get<int>(), n);
  }
  if (j.contains("mask") && mask_from_hex(j.at("mask").get<std::string>()) != mask)
    throw usage_error("graph edge list and mask disagree");
  return Graph(n, mask);
}

// ---- explicit distributions ---------------------------------------------

inline Json json_from_distribution(const ExplicitDistribution& d) {
  Json entries = Json::array();
  for (const auto& [mask, p] : d.entries) {
    Json entry;
    entry["graph"] = json_from_graph(Graph(d.n, mask));
    entry["p"] = json_from_scalar(p);
    entries.push_back(std::move(entry));
  }
  Json out;
  out["entries"] = std::move(entries);
  out["kind"] = kind_name(d.kind);
  out["n"] = d.n;
  return out;
}

inline ExplicitDistribution distribution_from_json(const Json& j) {
  const int n = j.at("n").get<int>();
  const ScalarKind kind = parse_kind(j.at("kind").get<std::string>());
  std::map<EdgeMask, Scalar> entries;
  for (const auto& entry : j.at("entries")) {
    const Graph g = graph_from_json(entry.at("graph"));
    if (g.n != n) throw usage_error("entry graph lives on the wrong vertex count");
    Scalar p = scalar_from_json(entry.at("p"));
    auto [it, fresh] = entries.emplace(g.mask, std::move(p));
    if (!fresh) throw usage_error("duplicate graph in distribution");
  }
  return make_distribution(n, kind, std::move(entries));
}

// ---- coloring models ----------------------------------------------------

inline Json json_from_model(const ColoringModel& m) {
  Json palettes = Json::array();
  for (const auto& palette : m.palettes) {
    Json probs = Json::array();
    for (const auto& p : palette) probs.push_back(json_from_scalar(p));
    Json entry;
    entry["probs"] = std::move(probs);
    palettes.push_back(std::move(entry));
  }
  Json rules;
  for (const auto& [key, matrix] : m.edge_rules) {
    Json rows = Json::array();
    for (const auto& row : matrix) {
      Json cells = Json::array();
      for (const auto cell : row) cells.push_back(static_cast<int>(cell));
      rows.push_back(std::move(cells));
    }
    rules[std::to_string(key.first) + "," + std::to_string(key.second)] =
        std::move(rows);
  }
  Json out;
  out["edge_functions"] = std::move(rules);
  out["n"] = m.n;
  out["palettes"] = std::move(palettes);
  return out;
}

inline ColoringModel model_from_json(const Json& j) {
  ColoringModel m;
  m.n = j.at("n").get<int>();
  for (const auto& entry : j.at("palettes")) {
    std::vector<Scalar> palette;
    for (const auto& p : entry.at("probs")) palette.push_back(scalar_from_json(p));
    m.palettes.push_back(std::move(palette));
  }
  for (const auto& [key, rows] : j.at("edge_functions").items()) {
    const auto comma = key.find(',');
    if (comma == std::string::npos)
      throw usage_error("edge-function keys must look like \"u,v\"");
    int u, v;
    try {
      u = std::stoi(key.substr(0, comma));
      v = std::stoi(key.substr(comma + 1));
    } catch (const std::exception&) {
      throw usage_error("edge-function keys must look like \"u,v\"");
    }
    std::vector<std::vector<std::uint8_t>> matrix;
    for (const auto& row : rows) {
      std::vector<std::uint8_t> cells;
      for (const auto& cell : row) cells.push_back(cell.get<std::uint8_t>());
      matrix.push_back(std::move(cells));
    }
    m.edge_rules[{u, v}] = std::move(matrix);
  }
  validate_model(m);
  return m;
}

// ---- independence certificates ------------------------------------------

namespace detail {

inline Json edge_as_pair(int index, int n) {
  const auto [i, j] = edge_endpoints(index, n);
  return Json::array({i, j});
}

inline Json edges_of_mask(EdgeMask mask, int n) {
  Json out = Json::array();
  for (const auto& [i, j] : Graph(n, mask).edges()) out.push_back(Json::array({i, j}));
  return out;
}

inline Json vertex_list(VertexMask w) {
  Json out = Json::array();
  for (const int v : vertices_of(w)) out.push_back(v);
  return out;
}

}  // namespace detail

inline Json json_from_certificate(const Certificate& cert, int n) {
  Json out;
  out["level"] = level_name(cert.level);
  if (cert.edge_e) out["edge_e"] = detail::edge_as_pair(*cert.edge_e, n);
  if (cert.edge_f) out["edge_f"] = detail::edge_as_pair(*cert.edge_f, n);
  if (cert.matching) {
    Json edges = Json::array();
    for (const int e : *cert.matching) edges.push_back(detail::edge_as_pair(e, n));
    out["matching"] = std::move(edges);
  }
  if (cert.set_w) out["set_w"] = detail::vertex_list(*cert.set_w);
  if (cert.pattern_w) out["subgraph_w"] = detail::edges_of_mask(*cert.pattern_w, n);
  if (cert.set_v) out["set_v"] = detail::vertex_list(*cert.set_v);
  if (cert.pattern_v) out["subgraph_v"] = detail::edges_of_mask(*cert.pattern_v, n);
  out["lhs"] = json_from_scalar(cert.lhs);
  out["rhs"] = json_from_scalar(cert.rhs);
  return out;
}

inline Json json_from_classification(const Classification& c, int n) {
  Json out;
  out["level"] = level_name(c.level);
  out["refutation"] =
      c.refutation ? json_from_certificate(*c.refutation, n) : Json(nullptr);
  return out;
}

// ---- search results and summaries ---------------------------------------

inline Json json_from_connect_result(const ConnectResult& r) {
  Json out;
  out["algorithm"] = r.algorithm;
  if (r.coloring) {
    Json colors = Json::array();
    for (const int c : *r.coloring) colors.push_back(c);
    out["coloring"] = std::move(colors);
  } else {
    out["coloring"] = nullptr;
  }
  Json diag;
  for (const auto& [k, v] : r.diagnostics) diag[k] = v;
  out["diagnostics"] = std::move(diag);
  out["outcome"] = outcome_name(r.outcome);
  return out;
}

inline Json json_from_mc(const McEstimate& e) {
  Json out;
  out["estimate"] = e.estimate;
  out["successes"] = e.successes;
  out["trials"] = e.trials;
  out["wilson_lower"] = e.wilson_lower;
  out["wilson_upper"] = e.wilson_upper;
  return out;
}

inline Json json_from_threshold_rows(const std::vector<ThresholdRow>& rows) {
  Json out = Json::array();
  for (const auto& row : rows) {
    Json entry;
    entry["lower"] = format_threshold_value(row.lower);
    entry["model"] = row.model;
    entry["n"] = row.n;
    entry["source"] = row.source;
    entry["upper"] = format_threshold_value(row.upper);
    out.push_back(std::move(entry));
  }
  return out;
}

// Parse text as JSON, converting parse errors into usage errors that keep
// the byte location.
inline Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& err) {
    throw usage_error(std::string("malformed JSON: ") + err.what());
  }
}

}  // namespace deplab
