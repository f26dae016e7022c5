#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "ogc/error.hpp"

namespace ogc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

class FeasibleSet;

struct Box {
  Vector lower;
  Vector upper;
};

struct Ball {
  Vector center;
  double radius = 0.0;
};

// Probability simplex {x >= 0, sum x = 1}.
struct Simplex {
  int dimension = 1;
};

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

// {(P, Q) : p_min <= P <= p_max, P^2 + Q^2 <= s_rated^2}
struct InverterDisk {
  double p_min = 0.0;
  double p_max = 0.0;
  double s_rated = 1.0;
};

// {x : lower <= matrix * x + offset <= upper}, rows with infinite bounds are
// inactive on that side.
struct HalfspaceBand {
  Matrix matrix;
  Vector offset;
  Vector lower;
  Vector upper;
};

struct Product {
  std::vector<FeasibleSet> factors;
};

struct Intersection {
  std::vector<FeasibleSet> members;
};

struct FinitePoints {
  std::vector<Vector> points;
};

using SetShape = std::variant<Box, Ball, Simplex, Interval, InverterDisk, HalfspaceBand,
                              Product, Intersection, FinitePoints>;

class FeasibleSet {
 public:
  static FeasibleSet box(Vector lower, Vector upper);
  static FeasibleSet ball(Vector center, double radius);
  static FeasibleSet simplex(int dimension);
  static FeasibleSet interval(double lower, double upper);
  static FeasibleSet singleton(double value) { return interval(value, value); }
  // PV form: 0 <= P <= p_available.
  static FeasibleSet inverter_disk(double p_available, double s_rated);
  static FeasibleSet inverter_disk(double p_min, double p_max, double s_rated);
  static FeasibleSet halfspace_band(Matrix matrix, Vector offset, Vector lower, Vector upper);
  // {x : normal . x <= bound}
  static FeasibleSet halfspace(Vector normal, double bound);
  static FeasibleSet product(std::vector<FeasibleSet> factors);
  static FeasibleSet intersection(std::vector<FeasibleSet> members);
  static FeasibleSet finite_points(std::vector<Vector> points);

  int dimension() const noexcept { return dimension_; }
  bool is_convex() const noexcept;
  bool is_bounded() const noexcept;
  const SetShape& shape() const noexcept { return shape_; }
  std::string kind() const;

  template <class T>
  const T* as() const noexcept {
    return std::get_if<T>(&shape_);
  }

 private:
  FeasibleSet(SetShape shape, int dimension) : shape_(std::move(shape)), dimension_(dimension) {}

  SetShape shape_;
  int dimension_ = 0;
};

// B is the largest norm over the set, D its diameter.
struct SetBounds {
  double norm_bound = 0.0;
  double diameter = 0.0;
};

struct ProjectionOptions {
  double tol = 1e-9;
  int max_iter = 10000;
};

Vector project(const FeasibleSet& set, const Vector& point, const ProjectionOptions& options = {});

// Dykstra's alternating projection. Band members are split into one half-space
// per active row side before iterating.
Vector project_intersection(std::span<const FeasibleSet> members, const Vector& point,
                            double tol = 1e-9, int max_iter = 10000);

bool contains(const FeasibleSet& set, const Vector& point, double tol = 1e-9);

// Euclidean distance from point to the set (exact for closed-form variants).
double distance(const FeasibleSet& set, const Vector& point, const ProjectionOptions& options = {});

SetBounds bounds(const FeasibleSet& set);

Vector sample_uniform_ball(int dimension, double radius, std::mt19937_64& rng);

}  // namespace ogc
