#pragma once

// Deterministic SVG picture of a region: unit circle, eigenvalue dots,
// chord lines and the boundary of Omega_k as a filled polyline.

#include <rankrange/region.hpp>
#include <rankrange/spectrum.hpp>

#include <iomanip>
#include <optional>
#include <sstream>
#include <string>

namespace rankrange {

inline std::string render_svg(const EigenSystem& es, const OmegaRegion& region,
                              std::optional<Complex> marker = std::nullopt, int size = 480,
                              int samples = 720) {
  const double half = size / 2.0, scale = size * 0.42;
  auto x = [&](Complex z) { return half + scale * z.real(); };
  auto y = [&](Complex z) { return half - scale * z.imag(); };

  std::ostringstream s;
  s << std::fixed << std::setprecision(3);
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
    << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<circle class=\"unit-circle\" cx=\"" << half << "\" cy=\"" << half << "\" r=\"" << scale
    << "\" fill=\"none\" stroke=\"#888\" stroke-width=\"1\"/>\n";

  try {
    const auto pts = boundary_samples(region, samples);
    s << "<polygon class=\"omega\" fill=\"#4a90d9\" fill-opacity=\"0.35\" stroke=\"#1f5fa8\" "
         "stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i)
      s << (i ? " " : "") << x(pts[i]) << ',' << y(pts[i]);
    s << "\"/>\n";
  } catch (const Error& e) {
    if (e.code() != ErrorCode::EmptyRegion) throw;
    s << "<!-- empty region -->\n";
  }

  for (const auto& c : region.constraints()) {
    if (c.kind != ChordKind::HalfPlane) continue;
    s << "<line class=\"chord\" x1=\"" << x(c.a) << "\" y1=\"" << y(c.a) << "\" x2=\"" << x(c.b)
      << "\" y2=\"" << y(c.b) << "\" stroke=\"#d9534f\" stroke-width=\"0.8\"/>\n";
  }
  for (int j = 1; j <= es.dim(); ++j) {
    const Complex z = es.eigenvalue(j);
    s << "<circle class=\"eigenvalue\" cx=\"" << x(z) << "\" cy=\"" << y(z)
      << "\" r=\"3.5\" fill=\"black\"><title>" << j << "</title></circle>\n";
  }
  if (marker)
    s << "<circle class=\"target\" cx=\"" << x(*marker) << "\" cy=\"" << y(*marker)
      << "\" r=\"3\" fill=\"#f0ad4e\"/>\n";
  s << "</svg>\n";
  return s.str();
}

}  // namespace rankrange
