#pragma once

#include <memory>
#include <variant>
#include <vector>

#include "ogc/geometry.hpp"

namespace ogc {

class CostFunction;

// Contiguous block of coordinates inside a larger decision vector.
struct Slice {
  int offset = 0;
  int length = 0;
};

// sign * c1 * P + c2 * Q^2 over (P, Q).
struct LinearQuadraticPQ {
  double c1 = 0.0;
  double c2 = 0.0;
  int sign = -1;
};

// Expected cost of a finite set under a distribution.
//   Simplex encoding:  sum_i values[i] * y[i] over a point of the simplex.
//   Binary encoding:   (1 - y) * values[0] + y * values[1] for a scalar
//                      probability y of the second outcome.
struct ExpectedFinite {
  enum class Encoding { Simplex, Binary };
  std::vector<double> values;
  Encoding encoding = Encoding::Simplex;
};

// 0.5 * (weights . x + offset - target)^2
struct QuadraticTracking {
  Vector weights;
  double offset = 0.0;
  double target = 0.0;
};

struct WeightedSum {
  struct Term {
    double weight = 1.0;
    std::shared_ptr<const CostFunction> cost;
    Slice slice;
  };
  std::vector<Term> terms;
  int dimension = 0;
};

using CostShape = std::variant<LinearQuadraticPQ, ExpectedFinite, QuadraticTracking, WeightedSum>;

class CostFunction {
 public:
  static CostFunction linear_quadratic_pq(double c1, double c2, int sign);
  static CostFunction expected_finite(std::vector<double> values);
  static CostFunction expected_binary(double value_off, double value_on);
  static CostFunction quadratic_tracking(Vector weights, double offset, double target);
  // Slices of device terms must be pairwise disjoint; terms spanning the whole
  // declared dimension (system-wide terms) may overlap them.
  static CostFunction weighted_sum(std::vector<WeightedSum::Term> terms, int dimension);

  int dimension() const noexcept { return dimension_; }
  const CostShape& shape() const noexcept { return shape_; }

  template <class T>
  const T* as() const noexcept {
    return std::get_if<T>(&shape_);
  }

 private:
  CostFunction(CostShape shape, int dimension) : shape_(std::move(shape)), dimension_(dimension) {}

  CostShape shape_;
  int dimension_ = 0;
};

double evaluate(const CostFunction& cost, const Vector& point);
Vector gradient(const CostFunction& cost, const Vector& point);

// Every variant is at most quadratic, so the Hessian is constant.
Matrix hessian(const CostFunction& cost);

// Spectral norm of the Hessian, i.e. the Lipschitz constant of the gradient.
double gradient_lipschitz(const CostFunction& cost);

}  // namespace ogc
