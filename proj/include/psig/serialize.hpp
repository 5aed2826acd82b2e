#pragma once

#include "psig/graph.hpp"
#include "psig/monotones.hpp"
#include "psig/reflect.hpp"
#include "psig/tensor.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace psig {

// All *_from_json loaders throw std::invalid_argument with a one-line message
// on schema problems; structural graph validity beyond the schema is the
// caller's business (validate / verify_certificate).

nlohmann::json graph_to_json(const PsiGraph& g);
PsiGraph graph_from_json(const nlohmann::json& j);

nlohmann::json state_to_json(const PureState& s);
PureState state_from_json(const nlohmann::json& j);

// Certificates may embed their graph so a file is verifiable on its own.
nlohmann::json certificate_to_json(const ConvexityCertificate& cert,
                                   const PsiGraph* graph = nullptr);

struct LoadedCertificate {
  ConvexityCertificate cert;
  std::optional<PsiGraph> graph;
};
LoadedCertificate certificate_from_json(const nlohmann::json& j);

// Fuzzing configuration: a monotone spec plus the state shape to draw.
struct FuzzSpecFile {
  MonotoneSpec spec;
  std::vector<int> dims;
};
FuzzSpecFile fuzz_spec_from_json(const nlohmann::json& j);

// File helpers; read errors and parse errors both surface as
// std::invalid_argument naming the path.
nlohmann::json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace psig
