#pragma once

// JSON encodings of fans, characteristic matrices, puzzles and certificates.
// Rationals are written as exact "p/q" (or "p") strings.

#include <string>
#include <vector>

#include <json.hpp>

#include "toricwedge/puzzle.hpp"
#include "toricwedge/shephard.hpp"

namespace toricwedge::io {

using json = nlohmann::ordered_json;

inline json rational_array(const QVector& v) {
  json out = json::array();
  for (const auto& q : v) out.push_back(to_string(q));
  return out;
}

inline QVector parse_rational_array(const json& j) {
  if (!j.is_array()) throw Error(ErrorKind::Parse, "expected an array of rationals");
  QVector out;
  for (const auto& x : j) {
    if (x.is_string()) out.push_back(parse_rational(x.get<std::string>()));
    else if (x.is_number_integer()) out.emplace_back(x.get<long long>());
    else throw Error(ErrorKind::Parse, "rationals must be strings or integers");
  }
  return out;
}

inline std::int64_t get_int(const json& j) {
  if (!j.is_number_integer()) throw Error(ErrorKind::Parse, "expected an integer, got " + j.dump());
  return j.get<std::int64_t>();
}

inline json rays_json(const RayList& rays) {
  json out = json::array();
  for (auto v : rays) out.push_back({v.x, v.y});
  return out;
}

inline json fan_json(const PlaneFan& fan) { return json{{"rays", rays_json(fan.rays())}}; }

inline RayList parse_rays(const json& j) {
  if (!j.is_object() || !j.contains("rays") || !j["rays"].is_array())
    throw Error(ErrorKind::Parse, "a fan needs a \"rays\" array");
  RayList rays;
  for (const auto& r : j["rays"]) {
    if (!r.is_array() || r.size() != 2) throw Error(ErrorKind::Parse, "each ray is a pair [x, y]");
    rays.push_back({get_int(r[0]), get_int(r[1])});
  }
  return rays;
}

inline PlaneFan parse_fan(const json& j) { return validate(parse_rays(j)); }

inline json matrix_json(const CharMatrix& cm) {
  json cols = json::array();
  for (std::size_t c = 0; c < cm.columns.size(); ++c) cols.push_back({{"label", cm.labels[c].str()}, {"v", cm.columns[c]}});
  return json{{"n", cm.n}, {"cols", cols}};
}

/// Columns are reordered into complex order; labels must cover i_1..i_{j_i} for every vertex.
inline CharMatrix parse_matrix(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("cols") || !j["cols"].is_array())
    throw Error(ErrorKind::Parse, "a matrix needs \"n\" and a \"cols\" array");
  CharMatrix cm;
  cm.n = static_cast<std::size_t>(get_int(j["n"]));
  std::vector<std::pair<VertexLabel, IntVector>> cols;
  for (const auto& c : j["cols"]) {
    if (!c.contains("label") || !c["label"].is_string() || !c.contains("v") || !c["v"].is_array())
      throw Error(ErrorKind::Parse, "each column needs \"label\" and \"v\"");
    IntVector v;
    for (const auto& x : c["v"]) v.push_back(get_int(x));
    if (v.size() != cm.n) throw Error(ErrorKind::DimensionMismatch, "column length differs from n");
    cols.emplace_back(VertexLabel::parse(c["label"].get<std::string>()), std::move(v));
  }
  std::sort(cols.begin(), cols.end());
  for (auto& [lab, v] : cols) {
    cm.labels.push_back(lab);
    cm.columns.push_back(std::move(v));
  }
  if (cm.labels.empty()) throw Error(ErrorKind::Parse, "matrix has no columns");
  if (cm.labels != wedge_vertices(cm.signature()))
    throw Error(ErrorKind::LabelMismatch, "column labels are not the vertices of a wedged polygon");
  return cm;
}

inline json grid_vertex_json(const GridVertex& a) { return json(a); }

inline json puzzle_json(const Puzzle& p) {
  json edges = json::array();
  for (const auto& e : p.edges)
    edges.push_back({{"color", e.color}, {"from", grid_vertex_json(e.from)}, {"to", grid_vertex_json(e.to)}, {"e", e.e}});
  return json{{"m", p.signature.m}, {"J", p.signature.J}, {"base", fan_json(p.base())}, {"edges", edges}};
}

inline Puzzle parse_puzzle(const json& j) {
  if (!j.contains("m") || !j.contains("J") || !j.contains("base"))
    throw Error(ErrorKind::Parse, "a puzzle needs \"m\", \"J\" and \"base\"");
  std::vector<int> J;
  for (const auto& x : j["J"]) J.push_back(static_cast<int>(get_int(x)));
  const auto sig = WedgeSignature::make(static_cast<std::size_t>(get_int(j["m"])), J);
  std::vector<PuzzleEdge> edges;
  if (j.contains("edges"))
    for (const auto& e : j["edges"]) {
      PuzzleEdge pe;
      pe.color = static_cast<int>(get_int(e.at("color")));
      for (const auto& x : e.at("from")) pe.from.push_back(static_cast<int>(get_int(x)));
      for (const auto& x : e.at("to")) pe.to.push_back(static_cast<int>(get_int(x)));
      pe.e = get_int(e.at("e"));
      edges.push_back(std::move(pe));
    }
  return puzzle_from_edges(sig, parse_fan(j["base"]), std::move(edges));
}

inline json certificate_json(const PolytopalityVerdict& v, const std::vector<std::vector<VertexLabel>>& facets) {
  json out;
  out["verdict"] = v.polytopal ? "projective" : "not_projective";
  const auto& c = v.certificate;
  if (c.point) {
    out["witness"] = rational_array(*c.point);
    json bary = json::object();
    for (std::size_t f = 0; f < facets.size() && f < c.barycentric.size(); ++f) {
      std::string key;
      for (const auto& l : facets[f]) key += (key.empty() ? "" : ",") + l.str();
      bary[key] = rational_array(c.barycentric[f]);
    }
    out["barycentric"] = bary;
  }
  if (c.heights) out["heights"] = rational_array(*c.heights);
  return out;
}

inline json diagram_json(const ShephardDiagram& dg) {
  json points = json::object();
  for (std::size_t k = 0; k < dg.size(); ++k) points[dg.labels[k].str()] = rational_array(dg.points[k]);
  return json{{"weights", rational_array(dg.weights)}, {"ambient_dim", dg.ambient_dim}, {"points", points}};
}

}  // namespace toricwedge::io
