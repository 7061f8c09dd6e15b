#pragma once

// JSON documents for tableaux ("rkn-tableau/1") and CSV for trajectories.
// Numbers are written with 17 significant digits so that finite doubles
// round-trip exactly and output is byte-deterministic.

#include <json.hpp>

#include <string>

#include "csrkn/integrator.hpp"
#include "csrkn/parametric.hpp"
#include "csrkn/tableau.hpp"

namespace csrkn {

using Json = nlohmann::json;

inline constexpr const char* kTableauFormat = "rkn-tableau/1";

/// "%.17g"; non-finite values throw ValidationError.
std::string format_double(double x);

/// Deterministic rendering: sorted keys, doubles via format_double,
/// compact or indented by two spaces.
std::string dump_json(const Json& j, bool pretty = false);

struct TableauDocument {
  RknTableau<double> tableau;
  TableauMeta meta;
};

Json to_json(const RknTableau<double>& t, const TableauMeta& meta = {});
Json to_json(const ParametricTableau& pt, const TableauMeta& meta = {});

/// True when any numeric leaf is a {"const", "lin"} object.
bool is_parametric_document(const Json& j);

/// Throws ParseError naming the offending field (e.g. "b", "a_bar[1][0]")
/// and ValidationError when sizes disagree with "r".
TableauDocument tableau_from_json(const Json& j);
ParametricTableau parametric_from_json(const Json& j);

std::string serialize(const RknTableau<double>& t, const TableauMeta& meta = {},
                      bool pretty = false);
std::string serialize(const ParametricTableau& pt, const TableauMeta& meta = {},
                      bool pretty = false);
TableauDocument deserialize_tableau(const std::string& text);
ParametricTableau deserialize_parametric(const std::string& text);

/// File helpers; I/O errors throw ParseError carrying the path.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
TableauDocument load_tableau(const std::string& path);

/// Header t,q1..qd,p1..pd[,H]; one row per state.
std::string trajectory_csv(const Trajectory<double>& traj);

}  // namespace csrkn
