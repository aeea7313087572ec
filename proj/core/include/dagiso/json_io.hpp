#pragma once

// JSON wire formats.
//
//   DAG        {"n": 3, "edges": [[0,1],[1,2]]}
//   CiStatement {"i": 2, "j": 0, "cond": [1]}
//   MinorSpec  {"rows": [2,1], "cols": [0,1]}
//   SymPoint   {"q": 2147483647, "mat": [[1,5],[5,1]]}   or
//              {"q": "rational", "mat": [["1","1/2"],["1/2","3"]]}
//
// Node ids are 0-based on the wire unless `one_based` is set, in which case
// every node id read or written is shifted by one.

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "dagiso/ci.hpp"
#include "dagiso/classify.hpp"
#include "dagiso/dag.hpp"
#include "dagiso/isodag.hpp"
#include "dagiso/variety.hpp"

namespace dagiso {

using Json = nlohmann::json;

Json dag_to_json(const Dag& g, bool one_based = false);
/// Throws InputError on schema violations or invalid graphs.
Dag dag_from_json(const Json& j, bool one_based = false);

Json nodes_to_json(std::span<const Node> nodes, bool one_based = false);
Json permutation_to_json(const Permutation& p, bool one_based = false);
Json ci_to_json(const CiStatement& s, bool one_based = false);
CiStatement ci_from_json(const Json& j, bool one_based = false);
Json minor_to_json(const MinorSpec& m, bool one_based = false);
Json tree_relation_to_json(const TreeRelation& r, bool one_based = false);
Json pattern_to_json(const Pattern& p, bool one_based = false);

/// "p" or "p/q".
Json rational_to_json(const mpq_class& q);

Json point_to_json(const FpPoint& p);
Json point_to_json(const RationalPoint& p);
/// Reads either variant of the SymPoint format as an exact rational matrix;
/// finite-field entries are taken as integer representatives.
FieldMatrix<RationalField> rational_matrix_from_json(const Json& j);
FpPoint fp_point_from_json(const Json& j);

Json verdict_to_json(const IsoVerdict& v, bool one_based = false);
Json report_to_json(const ClassReport& r, bool one_based = false);

const char* mode_name(ClassifyMode mode);
ClassifyMode mode_from_name(const std::string& name);

Json read_json_file(const std::filesystem::path& path);

}  // namespace dagiso
