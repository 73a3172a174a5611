#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "igalbm/nurbs_patch.hpp"

namespace igalbm {

enum class GeometryKind { UnitSquare, PeriodicBox, CurvedQuad, QuarterAnnulus };

struct GeometryParams {
  int degree = 2;
  // Elements per direction. For periodic directions this equals the number
  // of basis functions (and collocation points).
  int elements_u = 8;
  int elements_v = 8;
  double length = 1.0;     // box side (unit_square, periodic_box, curved_quad)
  double height = 0.0;     // y extent of the box builders when > 0, else length
  double amplitude = 0.1;  // curved_quad interior perturbation, in units of length
  double r_inner = 1.0;    // quarter_annulus
  double r_outer = 2.0;
};

std::string_view geometry_name(GeometryKind kind);
std::optional<GeometryKind> geometry_from_name(std::string_view name);
std::vector<std::string> registered_geometries();

/// Builds one of the benchmark patches.
///
///  - unit_square: clamped box [0, L]^2 with the identity-like map x = L xi.
///  - periodic_box: the same box on unclamped periodic knot vectors; the
///    control net repeats with translations (L, 0) and (0, L).
///  - curved_quad: the clamped box with every interior control point moved by
///      dx = a L sin(pi g_u) sin(2 pi g_v),  dy = a L sin(2 pi g_u) sin(pi g_v)
///    where (g_u, g_v) are its Greville abscissae. Boundary control points
///    stay put, so the edges remain the straight sides of the box while the
///    interior grid lines bend. The determinant stays positive for
///    a below roughly 0.2 (see tests); larger amplitudes are rejected.
///  - quarter_annulus: r in [r_inner, r_outer] along xi, angle 0..pi/2
///    along eta. The arc is the exact rational quadratic with weights
///    (1, sqrt(2)/2, 1), re-expressed in the requested degree and element
///    count; it needs degree >= 2.
///
/// Throws SetupError when det J <= 0 at any Greville point.
NurbsPatch2D build_geometry(GeometryKind kind, const GeometryParams& params);

/// Human-readable dump (JSON) of knots, degrees, control points, weights.
std::string dump_patch(const NurbsPatch2D& patch);

}  // namespace igalbm
