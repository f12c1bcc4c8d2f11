// Library tour on the fifth roots of unity: region, membership, projector.

#include <rankrange/rankrange.hpp>

#include <cstdio>

int main() {
  using namespace rankrange;
  const double step = kTwoPi / 5;
  const auto es = ingest_spectrum({0.0, step, 2 * step, 3 * step, 4 * step});

  const auto region = build_region(es, 2);
  for (const auto& c : region.constraints())
    std::printf("chord %d-%d  distance from 0: %.6f\n", c.start, c.end, c.margin(0.0));

  const Complex lambda(0.05, -0.1);
  std::printf("lambda inside Omega_2: %s\n", to_string(contains(region, lambda)));

  const auto p = construct_projector(es, 2, lambda);
  std::printf("case %s, method %s\n", std::string(to_string(p.plan.dimension_case)).c_str(),
              std::string(to_string(p.method)).c_str());
  std::printf("||P sigma P - lambda P|| = %.2e (triangle vectors alone: %.2e)\n",
              p.residuals.compression, p.elementary_compression);
  return p.residuals.pass ? 0 : 1;
}
