#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "qtopo/bench.hpp"
#include "qtopo/designer.hpp"
#include "qtopo/graph.hpp"
#include "qtopo/router.hpp"

namespace qtopo::io {

using nlohmann::json;

/// Malformed JSON input; the CLI maps it to the input error category.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {"n": int, "edges": [[u, v, weight], ...], "labels": [...]}. With
/// `weights` false the weight is omitted.
json graph_to_json(const CouplingGraph& g, bool weights);
/// Accepts [u, v] and [u, v, w] edges; labels are optional.
CouplingGraph graph_from_json(const json& j);

json map_to_json(const QubitMap& map, const CouplingGraph& pcg);
/// Reads {"map": [...]} as written by map_to_json.
QubitMap map_from_json(const json& j);

json audit_to_json(const DesignAudit& audit, const CouplingGraph& ccg);
json summary_to_json(const BenchSummary& s);

json read_json_file(const std::string& path);
/// Writes `text` to `path`, or to stdout when path is "-".
void write_text(const std::string& path, const std::string& text);

}  // namespace qtopo::io
