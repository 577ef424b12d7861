#pragma once

#include "sixvertex/bethe.hpp"
#include "sixvertex/lattice.hpp"
#include "sixvertex/numerics.hpp"

#include <cstdint>
#include <vector>

namespace sixvertex::testing_support {

inline Complex uniform_complex(UniformStream& rng, double re, double im) {
  const double x = rng.uniform(-re, re);
  const double y = rng.uniform(-im, im);
  return {x, y};
}

/// Generic parameters for either boundary.
inline ModelParams random_params(Boundary b, int sites, int magnons, UniformStream& rng) {
  ModelParams p;
  p.boundary = b;
  p.sites = sites;
  p.magnons = magnons;
  p.gamma = Complex{rng.uniform(0.35, 0.9), rng.uniform(-0.2, 0.2)};
  for (int j = 0; j < sites; ++j) p.mu.push_back(uniform_complex(rng, 0.4, 0.2));
  p.phi1 = Complex{rng.uniform(0.8, 1.2), rng.uniform(-0.2, 0.2)};
  p.phi2 = Complex{rng.uniform(1.4, 2.2), rng.uniform(-0.4, 0.4)};
  p.h = Complex{rng.uniform(-0.6, 0.6), rng.uniform(0.2, 0.5)};
  p.hbar = Complex{rng.uniform(-0.6, 0.6), rng.uniform(-0.5, -0.2)};
  return p;
}

inline std::vector<Complex> random_points(UniformStream& rng, std::size_t n, double re = 1.0, double im = 0.7) {
  std::vector<Complex> v(n);
  for (auto& z : v) z = uniform_complex(rng, re, im);
  return v;
}

}  // namespace sixvertex::testing_support
