#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "funk/geometry.hpp"

namespace funk {

enum class Smoothness { Continuous, C1, Analytic };

/// A real function on S^2. Evaluators must be deterministic and free of side
/// effects; they may be called concurrently.
class SphereField {
 public:
  using Evaluator = std::function<double(const UnitVector&)>;

  SphereField(Evaluator eval, Smoothness smoothness)
      : eval_(std::make_shared<const Evaluator>(std::move(eval))), smoothness_(smoothness) {}

  double operator()(const UnitVector& w) const { return (*eval_)(w); }
  Smoothness smoothness() const { return smoothness_; }

 private:
  std::shared_ptr<const Evaluator> eval_;
  Smoothness smoothness_;
};

/// Samples of a field on a full-sphere (nu, tau) grid relative to `pole`:
/// nu_i = i pi / (nu_count - 1) for i = 0..nu_count-1 (both poles included),
/// tau_j = 2 pi j / tau_count. values is row-major with tau fastest.
struct FieldGrid {
  UnitVector pole;
  int nu_count = 0;
  int tau_count = 0;
  std::vector<double> values;

  double nu(int i) const;
  double tau(int j) const;
  double at(int i, int j) const { return values[static_cast<std::size_t>(i * tau_count + j)]; }
};

FieldGrid sample_field(const SphereField& field, const UnitVector& pole, int nu_count, int tau_count);

/// Bilinear interpolant in (nu, tau) with periodic tau; the nu = 0 and nu = pi
/// rows are replaced by their means so the poles are single-valued.
/// Throws InvalidArgument for counts below (3, 4) or a size mismatch.
SphereField grid_field(FieldGrid grid);

}  // namespace funk
