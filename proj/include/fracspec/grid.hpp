#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>

#include "fracspec/linalg.hpp"

namespace fracspec {

// Uniform interior grid on an interval [lo, hi] or the square [lo, hi]^2.
// Spacing h = (hi - lo)/(n_per_axis + 1); nodes are strictly interior:
// x_i = lo + (i+1) h. 2D nodes are ordered p = ix * n + iy.
class Grid {
 public:
  int dimension() const { return dim_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  // per-axis bounds; both axes coincide except for translated squares
  double axis_lo(int axis) const { return axis == 0 ? lo_ : loy_; }
  double axis_hi(int axis) const { return axis == 0 ? hi_ : hiy_; }
  std::size_t n_per_axis() const { return n_; }
  double h() const { return h_; }
  std::size_t node_count() const { return points_.size(); }

  const std::array<double, 2>& point(std::size_t p) const { return points_[p]; }
  double boundary_distance(std::size_t p) const { return delta_[p]; }
  const std::vector<std::array<double, 2>>& points() const { return points_; }

  std::size_t index2(std::size_t ix, std::size_t iy) const { return ix * n_ + iy; }

  static std::shared_ptr<const Grid> interval(double lo, double hi, std::size_t n);
  static std::shared_ptr<const Grid> square(double lo, double hi, std::size_t n);
  // square of the given side with independent axis origins
  static std::shared_ptr<const Grid> square_at(double lox, double loy, double side,
                                               std::size_t n);

 private:
  int dim_ = 1;
  double lo_ = 0.0, hi_ = 1.0, loy_ = 0.0, hiy_ = 1.0, h_ = 0.0;
  std::size_t n_ = 0;
  std::vector<std::array<double, 2>> points_;
  Vector delta_;
};

using GridPtr = std::shared_ptr<const Grid>;

// Per-node real values on a grid.
struct ScalarField {
  GridPtr grid;
  Vector values;

  ScalarField() = default;
  ScalarField(GridPtr g, Vector v);
  static ScalarField zeros(GridPtr g);
  static ScalarField constant(GridPtr g, double c);
  static ScalarField sample(GridPtr g,
                            const std::function<double(double, double)>& f);

  double sup_abs() const;
  // max |finite-difference gradient| over neighboring nodes
  double grad_sup() const;
};

enum class MassRole { quadrature, metric };

// Diagonal lumped mass: M_ii = h^d * weight(x_i). A metric-role mass requires
// strictly positive weight.
SymmetricMatrix mass_matrix(const Grid& grid, const ScalarField* weight = nullptr,
                            MassRole role = MassRole::quadrature);

// f^T M g
double integrate(const ScalarField& f, const ScalarField& g,
                 const SymmetricMatrix& mass);

}  // namespace fracspec
