#include "funk/sphere_field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "funk/error.hpp"

namespace funk {

double FieldGrid::nu(int i) const { return std::numbers::pi * i / (nu_count - 1); }

double FieldGrid::tau(int j) const { return 2.0 * std::numbers::pi * j / tau_count; }

FieldGrid sample_field(const SphereField& field, const UnitVector& pole, int nu_count, int tau_count) {
  if (nu_count < 3 || tau_count < 4) {
    throw Error(ErrorKind::InvalidArgument, "field grid needs nu_count >= 3 and tau_count >= 4");
  }
  FieldGrid grid{pole, nu_count, tau_count, {}};
  grid.values.resize(static_cast<std::size_t>(nu_count) * static_cast<std::size_t>(tau_count));
  for (int i = 0; i < nu_count; ++i) {
    for (int j = 0; j < tau_count; ++j) {
      grid.values[static_cast<std::size_t>(i * tau_count + j)] = field(sph_to_vec(pole, grid.nu(i), grid.tau(j)));
    }
  }
  return grid;
}

SphereField grid_field(FieldGrid grid) {
  if (grid.nu_count < 3 || grid.tau_count < 4) {
    throw Error(ErrorKind::InvalidArgument, "field grid needs nu_count >= 3 and tau_count >= 4");
  }
  if (grid.values.size() != static_cast<std::size_t>(grid.nu_count) * static_cast<std::size_t>(grid.tau_count)) {
    throw Error(ErrorKind::InvalidArgument, "field grid value count does not match its shape");
  }
  const auto t = static_cast<std::size_t>(grid.tau_count);
  for (std::size_t row : {std::size_t{0}, static_cast<std::size_t>(grid.nu_count - 1)}) {
    auto first = grid.values.begin() + static_cast<std::ptrdiff_t>(row * t);
    const double mean = std::accumulate(first, first + static_cast<std::ptrdiff_t>(t), 0.0) / static_cast<double>(t);
    std::fill(first, first + static_cast<std::ptrdiff_t>(t), mean);
  }
  auto shared = std::make_shared<const FieldGrid>(std::move(grid));
  return SphereField(
      [g = shared](const UnitVector& w) {
        const SphericalCoords c = vec_to_sph(g->pole, w);
        const double di = c.nu * (g->nu_count - 1) / std::numbers::pi;
        const double dj = c.tau * g->tau_count / (2.0 * std::numbers::pi);
        int i0 = static_cast<int>(std::floor(di));
        i0 = std::clamp(i0, 0, g->nu_count - 2);
        const double fi = std::clamp(di - i0, 0.0, 1.0);
        int j0 = static_cast<int>(std::floor(dj));
        const double fj = dj - j0;
        j0 %= g->tau_count;
        const int j1 = (j0 + 1) % g->tau_count;
        const double lo = (1.0 - fj) * g->at(i0, j0) + fj * g->at(i0, j1);
        const double hi = (1.0 - fj) * g->at(i0 + 1, j0) + fj * g->at(i0 + 1, j1);
        return (1.0 - fi) * lo + fi * hi;
      },
      Smoothness::Continuous);
}

}  // namespace funk
