#pragma once

// Serialisation of paths, skeletons, limit paths and exact results.

#include <string>
#include <vector>

#include <json.hpp>

#include "gasket/eraser.hpp"
#include "gasket/exact.hpp"
#include "gasket/lattice.hpp"
#include "gasket/limit.hpp"

namespace gasket::io {

using nlohmann::json;

json to_json(Coord c);
json to_json(const Path& w);
/// List of {corner, level, entry, exit, kind, exit_index}.
json to_json(const Skeleton& s);
/// The same layout for one level of a limit path; exit_index counts cells.
json skeleton_json(const std::vector<LimitCell>& cells, int depth);

/// Rational as "num/den" (or "num").
std::string rational_string(const Rational& q);
/// Fixed number of significant digits.
std::string real_string(const Real& x, int digits = 40);

/// {"a,b": "num/den"} for the coefficient of x^a y^b.
json coefficient_map(const BivariatePoly& p);

/// The shape table, both kernels, generating functions and spectral data.
json exact_report(const ShapeTable& table, const OffspringLaws& laws, const EigenData& eig,
                  const MomentTable& moments);

/// CSV with header `step,i,j`.
std::string path_csv(const Path& w);
/// CSV with header `t,x,y`, 15 significant digits.
std::string polyline_csv(const std::vector<PolylinePoint>& line);

struct SvgStyle {
  /// Draw the unit triangles of the gasket of this span behind the path (-1: none).
  int backdrop_level = -1;
  double size = 800.0;
};

/// Standalone SVG of a lattice path in the Euclidean embedding.
std::string lattice_path_svg(const Path& w, const SvgStyle& style = {});
/// Standalone SVG of a limit path, one polyline per stored level.
std::string limit_path_svg(const RefinedPath& p, const SvgStyle& style = {});

/// Throws error(io_error) if the file cannot be written.
void write_file(const std::string& filename, const std::string& content);

}  // namespace gasket::io
