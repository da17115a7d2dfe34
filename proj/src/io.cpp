#include "acu/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace acu::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::SchemaViolation, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) bad("expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(std::string("missing field '") + key + "'");
  return *it;
}

void check_version(const Json& j) {
  auto it = j.find("schema_version");
  if (it == j.end()) return;
  if (!it->is_string() || it->get<std::string>().rfind("1.", 0) != 0)
    bad("unsupported schema_version");
}

Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json opt_int(const std::optional<int>& x) { return x ? Json(*x) : Json(nullptr); }

Json stages_json(const std::vector<StageMeasure>& st) {
  Json a = Json::array();
  for (const StageMeasure& s : st)
    a.push_back({{"name", s.name},
                 {"value", number_or_null(s.value)},
                 {"bound", number_or_null(s.bound)},
                 {"relation", s.at_least ? ">=" : "<="}});
  return a;
}

}  // namespace

Json matrix_to_json(const Matrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::InvalidInput, "matrix_to_json: not square");
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index k = 0; k < m.cols(); ++k) row.push_back(Json::array({m(i, k).real(), m(i, k).imag()}));
    rows.push_back(std::move(row));
  }
  return {{"n", m.rows()}, {"entries", std::move(rows)}};
}

Matrix matrix_from_json(const Json& j) {
  const Json& jn = field(j, "n");
  if (!jn.is_number_integer() || jn.get<long long>() <= 0) bad("'n' must be a positive integer");
  const Index n = jn.get<Index>();
  check_dimension(n, "matrix file");
  const Json& e = field(j, "entries");
  if (!e.is_array() || static_cast<Index>(e.size()) != n) bad("'entries' must hold n rows");
  Matrix m(n, n);
  for (Index i = 0; i < n; ++i) {
    const Json& row = e[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != n) bad("every row must hold n entries");
    for (Index k = 0; k < n; ++k) {
      const Json& z = row[static_cast<std::size_t>(k)];
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number())
        bad("entries must be [re, im] number pairs");
      const double re = z[0].get<double>(), im = z[1].get<double>();
      if (!std::isfinite(re) || !std::isfinite(im)) throw Error(ErrorCode::InvalidInput, "non-finite matrix entry");
      m(i, k) = Complex(re, im);
    }
  }
  return m;
}

Json pair_to_json(const PairFile& p) {
  Json j = {{"schema_version", kSchemaVersion},
            {"kind", "pair"},
            {"u", matrix_to_json(p.u)},
            {"v", matrix_to_json(p.v)},
            {"description", p.description},
            {"expected_invariant", opt_int(p.expected_invariant)}};
  return j;
}

PairFile pair_from_json(const Json& j) {
  check_version(j);
  PairFile p;
  p.u = matrix_from_json(field(j, "u"));
  p.v = matrix_from_json(field(j, "v"));
  if (p.u.rows() != p.v.rows()) bad("u and v differ in size");
  if (auto it = j.find("description"); it != j.end() && it->is_string()) p.description = it->get<std::string>();
  if (auto it = j.find("expected_invariant"); it != j.end() && it->is_number_integer())
    p.expected_invariant = it->get<int>();
  return p;
}

Json path_to_json(const UnitaryPath& path) {
  Json segs = Json::array();
  for (const Segment& s : path.segments())
    segs.push_back({{"label", s.label()},
                    {"base", matrix_to_json(s.base())},
                    {"generator", matrix_to_json(s.generator())},
                    {"block_diagonal", s.block_diagonal()}});
  return {{"schema_version", kSchemaVersion},
          {"kind", "path"},
          {"n", path.dim()},
          {"segments", std::move(segs)},
          {"stage_boundaries", path.stage_boundaries()}};
}

UnitaryPath path_from_json(const Json& j) {
  check_version(j);
  const Json& segs = field(j, "segments");
  if (!segs.is_array() || segs.empty()) bad("'segments' must be a non-empty array");
  std::vector<Segment> out;
  for (const Json& s : segs) {
    const Matrix base = matrix_from_json(field(s, "base"));
    const Matrix gen = matrix_from_json(field(s, "generator"));
    if (base.rows() != gen.rows()) bad("segment base and generator differ in size");
    UnitaryMatrix(base, 1e-8);
    HermitianMatrix(gen, 1e-8);
    std::string label;
    if (auto it = s.find("label"); it != s.end() && it->is_string()) label = it->get<std::string>();
    bool block = false;
    if (auto it = s.find("block_diagonal"); it != s.end() && it->is_boolean()) block = it->get<bool>();
    out.emplace_back(label, base, gen, block);
  }
  std::vector<double> stages;
  if (auto it = j.find("stage_boundaries"); it != j.end() && it->is_array())
    for (const Json& x : *it) {
      if (!x.is_number()) bad("stage boundaries must be numbers");
      stages.push_back(x.get<double>());
    }
  return UnitaryPath(std::move(out), std::move(stages));
}

Json to_json(const InvariantReport& r) {
  Json j = {{"schema_version", kSchemaVersion},
            {"kind", "invariants"},
            {"winding", opt_int(r.winding)},
            {"isospec", opt_int(r.isospec)},
            {"delta", r.delta},
            {"mode", to_string(r.mode)},
            {"sign_convention", r.sign_convention},
            {"notes", r.notes}};
  if (r.arcs)
    j["arcs"] = {{"I", {{"start", r.arcs->i.start()}, {"length", r.arcs->i.length()}}},
                 {"J", {{"start", r.arcs->j.start()}, {"length", r.arcs->j.length()}}}};
  else
    j["arcs"] = nullptr;
  return j;
}

Json to_json(const HomotopyCertificate& c) {
  Json qs = Json::array();
  for (const StageMeasure& s : c.quantbeek_stages)
    qs.push_back({{"name", s.name}, {"value", number_or_null(s.value)}, {"bound", number_or_null(s.bound)}});
  return {{"schema_version", kSchemaVersion},
          {"kind", "homotopy_certificate"},
          {"N", c.N},
          {"delta", c.delta},
          {"mode", to_string(c.mode)},
          {"max_commutator_sampled", c.max_commutator_sampled},
          {"max_commutator_tilde", c.max_commutator_tilde},
          {"sample_density", c.sample_density},
          {"tilde_u_error", c.tilde_u_error},
          {"quantbeek_epsilon", c.quantbeek_epsilon},
          {"w_dist", c.w_dist},
          {"z_conjugation", c.z_conjugation},
          {"y_conjugation", c.y_conjugation},
          {"gamma0_residual", c.gamma0_residual},
          {"gamma3_residual", c.gamma3_residual},
          {"v3_commutator", c.v3_commutator},
          {"start_defect", c.start_defect},
          {"end_defect", c.end_defect},
          {"continuity", c.continuity},
          {"generator_norms", c.generator_norms},
          {"quantbeek_stages", std::move(qs)},
          {"notes", c.notes},
          {"short_circuit", c.short_circuit}};
}

Json to_json(const PipelineReport& r) {
  return {{"schema_version", kSchemaVersion},
          {"kind", "pipeline_report"},
          {"mode", to_string(r.mode)},
          {"delta", r.delta},
          {"path_delta", r.path_delta},
          {"eps", r.eps},
          {"gamma", r.gamma},
          {"d", r.d},
          {"N", r.N},
          {"n", r.n},
          {"n_total", r.n_total},
          {"distance_u", r.distance_u},
          {"distance_v", r.distance_v},
          {"commutator_residual", r.commutator_residual},
          {"unitarity_u", r.unitarity_u},
          {"unitarity_v", r.unitarity_v},
          {"winding", opt_int(r.winding)},
          {"isospec", opt_int(r.isospec)},
          {"stages", stages_json(r.stages)},
          {"notes", r.notes},
          {"flagged", r.flagged},
          {"short_circuit", r.short_circuit},
          {"runtime_ms", r.runtime_ms}};
}

Json read_json(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + file);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::SchemaViolation, file + ": " + e.what());
  }
}

void write_text(const std::string& file, const std::string& text) {
  std::ofstream out(file);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + file);
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + file);
}

void write_json(const std::string& file, const Json& j) { write_text(file, j.dump(2) + "\n"); }

}  // namespace acu::io
