#include "helpers.hpp"

#include <cstdio>
#include <filesystem>
#include <limits>

#include "acu/generators.hpp"
#include "acu/io.hpp"

using namespace acu;
using io::Json;

TEST(Io, MatrixRoundTripIsLossless) {
  oracle::Gen g(81);
  for (int t = 0; t < 10; ++t) {
    Matrix a = g.gauss(1 + t, 1 + t);
    a(0, 0) = Complex(1.0 / 3.0, -2.0 / 7.0);
    const Json j = Json::parse(io::matrix_to_json(a).dump());
    const Matrix b = io::matrix_from_json(j);
    EXPECT_EQ(a, b);
  }
}

TEST(Io, PairRoundTripThroughFile) {
  const Instance inst = make_instance({InstanceKind::Voiculescu, 5, 0, 0});
  const std::string f = (std::filesystem::temp_directory_path() / "acu_pair_test.json").string();
  io::write_json(f, io::pair_to_json({inst.u.matrix(), inst.v.matrix(), "v5", -1}));
  const io::PairFile p = io::pair_from_json(io::read_json(f));
  EXPECT_EQ(p.u, inst.u.matrix());
  EXPECT_EQ(p.v, inst.v.matrix());
  EXPECT_EQ(p.description, "v5");
  EXPECT_EQ(p.expected_invariant, -1);
  std::remove(f.c_str());
}

TEST(Io, Rejections) {
  EXPECT_CODE(io::matrix_from_json(Json::parse(R"({"n": 2, "entries": [[[1,0],[0,0]]]})")),
              ErrorCode::SchemaViolation);
  EXPECT_CODE(io::matrix_from_json(Json::parse(R"({"n": 1, "entries": [[[1]]]})")), ErrorCode::SchemaViolation);
  EXPECT_CODE(io::matrix_from_json(Json::parse(R"({"entries": []})")), ErrorCode::SchemaViolation);
  EXPECT_CODE(io::matrix_from_json(Json::parse(R"({"n": 1, "entries": [[["a", 0]]]})")),
              ErrorCode::SchemaViolation);
  Json nan = Json::parse(R"({"n": 1, "entries": [[[0, 0]]]})");
  nan["entries"][0][0][0] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_CODE(io::matrix_from_json(nan), ErrorCode::InvalidInput);
  const std::string f = (std::filesystem::temp_directory_path() / "acu_overflow.json").string();
  io::write_text(f, R"({"n": 1, "entries": [[[1e400, 0]]]})");
  EXPECT_CODE(io::read_json(f), ErrorCode::SchemaViolation);
  std::remove(f.c_str());
  Json pair = io::pair_to_json({Matrix::Identity(2, 2), Matrix::Identity(2, 2), "", std::nullopt});
  pair["schema_version"] = "2.0";
  EXPECT_CODE(io::pair_from_json(pair), ErrorCode::SchemaViolation);
  pair["schema_version"] = "1.0";
  pair["v"] = io::matrix_to_json(Matrix::Identity(3, 3));
  EXPECT_CODE(io::pair_from_json(pair), ErrorCode::SchemaViolation);
  EXPECT_CODE(io::read_json("/nonexistent/acu.json"), ErrorCode::IoError);
}

TEST(Io, PathRoundTrip) {
  const Instance inst = make_instance({InstanceKind::Doubled, 8, 0, 0});
  HomotopyConfig hc;
  hc.mode = Mode::BestEffort;
  const Homotopy h = build_homotopy(inst.u, inst.v, hc);
  const UnitaryPath p = io::path_from_json(Json::parse(io::path_to_json(h.path).dump()));
  ASSERT_EQ(p.segments().size(), h.path.segments().size());
  for (double s : {0.0, 0.3, 0.77, 1.0}) EXPECT_LT(oracle::norm2(p.at(s) - h.path.at(s)), 1e-13);
  EXPECT_EQ(p.stage_boundaries(), h.path.stage_boundaries());
  EXPECT_EQ(p.segments()[3].block_diagonal(), h.path.segments()[3].block_diagonal());
}

TEST(Io, ReportsCarryVersionAndKind) {
  const Instance inst = make_instance({InstanceKind::PerturbedCommuting, 4, 1e-3, 1});
  ApproximateConfig cfg;
  cfg.mode = Mode::BestEffort;
  const ApproximantPair r = approximate(inst.u, inst.v, cfg);
  const Json j = io::to_json(r.report);
  EXPECT_EQ(j["schema_version"], "1.0");
  EXPECT_EQ(j["kind"], "pipeline_report");
  EXPECT_EQ(j["distance_u"].get<double>(), r.report.distance_u);
  EXPECT_TRUE(j["stages"].is_array());
  InvariantConfig ic;
  ic.mode = Mode::BestEffort;
  const Json k = io::to_json(compute_invariants(inst.u, inst.v, ic));
  EXPECT_EQ(k["kind"], "invariants");
  EXPECT_EQ(k["winding"], 0);
}
