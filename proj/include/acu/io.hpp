#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "acu/gap_opening.hpp"
#include "acu/homotopy.hpp"
#include "acu/invariants.hpp"
#include "acu/linalg.hpp"

namespace acu::io {

using Json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "1.0";

// {"n": n, "entries": [[[re, im], ...], ...]}, row-major
Json matrix_to_json(const Matrix& m);
// SchemaViolation on malformed or non-square data, InvalidInput on non-finite entries.
Matrix matrix_from_json(const Json& j);

struct PairFile {
  Matrix u;
  Matrix v;
  std::string description;
  std::optional<int> expected_invariant;
};
Json pair_to_json(const PairFile& p);
PairFile pair_from_json(const Json& j);

Json path_to_json(const UnitaryPath& path);
UnitaryPath path_from_json(const Json& j);

Json to_json(const InvariantReport& r);
Json to_json(const HomotopyCertificate& c);
Json to_json(const PipelineReport& r);

Json read_json(const std::string& file);
void write_json(const std::string& file, const Json& j);
void write_text(const std::string& file, const std::string& text);

}  // namespace acu::io
