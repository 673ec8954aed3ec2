// Command-line front end: check, classify, reduce, shephard.
//
// Exit codes: 0 projective (oracles agree), 1 not strongly polytopal,
// 2 invalid input, 3 oracle disagreement.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "toricwedge/io.hpp"

namespace tw = toricwedge;
using tw::io::json;

namespace {

enum Exit { kProjective = 0, kNotPolytopal = 1, kInvalid = 2, kDisagreement = 3 };

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw tw::Error(tw::ErrorKind::Parse, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw tw::Error(tw::ErrorKind::Parse, e.what());
  }
}

void write_json(const json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw tw::Error(tw::ErrorKind::Parse, "cannot write " + path);
  out << j.dump(2) << '\n';
}

/// A fan, a characteristic matrix or a puzzle, as a checked matrix over its wedge complex.
tw::CharMatrix read_input(const json& j) {
  if (j.contains("rays")) return tw::to_char_matrix(tw::io::parse_fan(j));
  if (j.contains("base")) return tw::assemble_matrix(tw::io::parse_puzzle(j));
  auto cm = tw::io::parse_matrix(j);
  const auto cx = tw::build_complex(cm.signature());
  if (cm.n != cm.signature().fan_dimension())
    throw tw::Error(tw::ErrorKind::DimensionMismatch, "row count must be d - m + 2");
  if (!tw::check_nonsingular(cm, cx)) throw tw::Error(tw::ErrorKind::NotNonSingular, "some facet minor is not +-1");
  const auto p = tw::puzzle_from_matrix(cm);
  if (!p || !tw::validate_puzzle(*p))
    throw tw::Error(tw::ErrorKind::InvalidPuzzle, "the projections do not form a puzzle of plane fans");
  return cm;
}

struct Certified {
  json record;
  bool projective = false;
  bool agree = true;
};

Certified certify(const tw::CharMatrix& cm) {
  const auto cx = tw::build_complex(cm.signature());
  const auto facets = tw::facet_labels(cx);
  const auto dg = tw::shephard_diagram(cm);
  tw::PolytopalityVerdict shephard{false, tw::s_sigma(dg, facets)};
  shephard.polytopal = shephard.certificate.kind == tw::PolytopalityCertificate::Kind::InteriorPoint;
  const auto support = tw::support_function_polytopal(cm, cx);
  Certified out;
  out.projective = shephard.polytopal && support.polytopal;
  out.agree = shephard.polytopal == support.polytopal;
  if (shephard.polytopal && !tw::verify_interior_point(dg, facets, shephard.certificate)) out.agree = false;
  if (support.polytopal && !tw::verify_heights(cm, cx, *support.certificate.heights)) out.agree = false;
  out.record = tw::io::certificate_json(shephard, facets);
  if (support.certificate.heights) out.record["heights"] = tw::io::rational_array(*support.certificate.heights);
  if (!out.agree) out.record["verdict"] = "oracle_disagreement";
  return out;
}

int cmd_check(const std::string& in, const std::string& out) {
  const auto cm = read_input(read_json(in));
  const auto c = certify(cm);
  write_json(c.record, out);
  if (!c.agree) return kDisagreement;
  return c.projective ? kProjective : kNotPolytopal;
}

int cmd_classify(std::size_t m, const std::vector<int>& J, std::int64_t depth, std::int64_t e_bound,
                 std::size_t workers, const std::string& out) {
  const auto sig = tw::WedgeSignature::make(m, J);
  if (depth < 0 || e_bound < 0) throw tw::Error(tw::ErrorKind::PreconditionViolated, "bounds must be non-negative");
  const auto puzzles = tw::enumerate_puzzles(sig, depth, e_bound, workers);
  const auto certified = tw::parallel_map(
      puzzles, [](const tw::Puzzle& p) { return certify(tw::assemble_matrix(p)); }, workers);
  json classes = json::array();
  std::size_t projective = 0, disagreements = 0, irreducible = 0;
  for (std::size_t k = 0; k < puzzles.size(); ++k) {
    const auto cm = tw::assemble_matrix(puzzles[k]);
    projective += certified[k].projective;
    disagreements += !certified[k].agree;
    irreducible += tw::is_irreducible(puzzles[k]);
    classes.push_back({{"puzzle", tw::io::puzzle_json(puzzles[k])},
                       {"irreducible", tw::is_irreducible(puzzles[k])},
                       {"matrix", tw::io::matrix_json(cm)},
                       {"verdict", certified[k].record["verdict"]},
                       {"certificate", certified[k].record}});
  }
  const tw::Rational fraction =
      puzzles.empty() ? tw::Rational(1) : tw::Rational(static_cast<long long>(projective), static_cast<long long>(puzzles.size()));
  json summary{{"m", m},
               {"J", J},
               {"base_depth", depth},
               {"e_bound", e_bound},
               {"classes", puzzles.size()},
               {"irreducible", irreducible},
               {"projective", projective},
               {"not_projective", puzzles.size() - projective - disagreements},
               {"oracle_disagreements", disagreements},
               {"fraction_projective", tw::to_string(fraction)}};
  write_json(json{{"summary", summary}, {"classes", classes}}, out);
  std::cerr << "classes " << puzzles.size() << ", projective " << projective << ", fraction "
            << tw::to_string(fraction) << '\n';
  if (disagreements) return kDisagreement;
  return projective == puzzles.size() ? kProjective : kNotPolytopal;
}

int cmd_reduce(const std::string& in, const std::string& out) {
  const auto fan = tw::io::parse_fan(read_json(in));
  const auto red = tw::reduce_to_base(fan);
  const auto base = tw::identify_base(red.base);
  json kind = base.is_cp2 ? json{{"kind", "CP2"}} : json{{"kind", "Hirzebruch"}, {"d", base.hirzebruch_d}};
  write_json(json{{"trace", red.trace}, {"base", kind}, {"base_fan", tw::io::fan_json(red.base)}}, out);
  return 0;
}

int cmd_shephard(const std::string& in, const std::string& out) {
  const auto cm = read_input(read_json(in));
  const auto cx = tw::build_complex(cm.signature());
  const auto facets = tw::facet_labels(cx);
  const auto dg = tw::shephard_diagram(cm);
  json cofaces = json::object();
  for (const auto& f : facets) {
    std::string key;
    for (const auto& l : f) key += (key.empty() ? "" : ",") + l.str();
    json labs = json::array();
    for (auto k : tw::coface_indices(dg, f)) labs.push_back(dg.labels[k].str());
    cofaces[key] = labs;
  }
  auto result = tw::io::diagram_json(dg);
  result["cofaces"] = cofaces;
  const auto cert = tw::s_sigma(dg, facets);
  result["witness"] = cert.point ? tw::io::rational_array(*cert.point) : json(nullptr);
  write_json(result, out);
  return 0;
}

std::vector<int> parse_j(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw tw::Error(tw::ErrorKind::Parse, "bad entry '" + item + "' in --j");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Toric manifolds over wedged polygons: classification and projectivity certificates"};
  app.require_subcommand(1);
  app.fallthrough();
  std::size_t workers = 0;
  app.add_option("--workers", workers, "worker threads (TORICWEDGE_WORKERS overrides)");

  std::string in, out;
  auto* check = app.add_subcommand("check", "validate a fan, matrix or puzzle and certify projectivity");
  check->add_option("--in", in, "input JSON")->required();
  check->add_option("--out", out, "certificate JSON (default stdout)");

  std::size_t m = 0;
  std::string jtext;
  std::int64_t depth = 0, e_bound = 0;
  auto* classify = app.add_subcommand("classify", "enumerate puzzles over P_m(J) and certify each");
  classify->add_option("--m", m, "number of polygon vertices")->required();
  classify->add_option("--j", jtext, "comma-separated multiplicities j_1,...,j_m")->required();
  classify->add_option("--base-depth", depth, "largest Hirzebruch parameter among base fans")->required();
  classify->add_option("--e-bound", e_bound, "bound on |e| for shift parameters")->required();
  classify->add_option("--out", out, "results JSON (default stdout)");

  auto* reduce = app.add_subcommand("reduce", "blow a plane fan down to CP^2 or a Hirzebruch surface");
  reduce->add_option("--in", in, "fan JSON")->required();
  reduce->add_option("--out", out, "trace JSON (default stdout)");

  auto* shephard = app.add_subcommand("shephard", "emit the Shephard diagram of a fan or matrix");
  shephard->add_option("--in", in, "input JSON")->required();
  shephard->add_option("--out", out, "diagram JSON (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInvalid;
  }
  if (std::getenv("TORICWEDGE_WORKERS") || workers == 0) workers = tw::default_workers();

  try {
    if (*check) return cmd_check(in, out);
    if (*classify) return cmd_classify(m, parse_j(jtext), depth, e_bound, workers, out);
    if (*reduce) return cmd_reduce(in, out);
    if (*shephard) return cmd_shephard(in, out);
  } catch (const tw::Error& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kInvalid;
  }
  return kInvalid;
}
