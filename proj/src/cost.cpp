#include "ogc/cost.hpp"

#include <algorithm>
#include <cmath>

namespace ogc {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_point(const CostFunction& cost, const Vector& point) {
  if (point.size() != cost.dimension()) {
    fail(ErrorCode::DimensionMismatch, "cost expects dimension " + std::to_string(cost.dimension()) +
                                           ", got " + std::to_string(point.size()));
  }
}

}  // namespace

CostFunction CostFunction::linear_quadratic_pq(double c1, double c2, int sign) {
  require(std::isfinite(c1) && std::isfinite(c2), ErrorCode::InvalidArgument,
          "cost coefficients must be finite");
  require(c2 >= 0.0, ErrorCode::InvalidArgument, "reactive penalty c2 must be >= 0");
  require(sign == 1 || sign == -1, ErrorCode::InvalidArgument, "sign must be +1 or -1");
  return CostFunction(LinearQuadraticPQ{c1, c2, sign}, 2);
}

CostFunction CostFunction::expected_finite(std::vector<double> values) {
  require(!values.empty(), ErrorCode::InvalidArgument, "expected cost needs at least one value");
  require(std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); }),
          ErrorCode::InvalidArgument, "expected cost values must be finite");
  const int dim = static_cast<int>(values.size());
  return CostFunction(ExpectedFinite{std::move(values), ExpectedFinite::Encoding::Simplex}, dim);
}

CostFunction CostFunction::expected_binary(double value_off, double value_on) {
  require(std::isfinite(value_off) && std::isfinite(value_on), ErrorCode::InvalidArgument,
          "expected cost values must be finite");
  return CostFunction(ExpectedFinite{{value_off, value_on}, ExpectedFinite::Encoding::Binary}, 1);
}

CostFunction CostFunction::quadratic_tracking(Vector weights, double offset, double target) {
  require(weights.size() > 0, ErrorCode::InvalidArgument, "tracking weights must be non-empty");
  require(weights.allFinite() && std::isfinite(offset) && std::isfinite(target),
          ErrorCode::InvalidArgument, "tracking parameters must be finite");
  const int dim = static_cast<int>(weights.size());
  return CostFunction(QuadraticTracking{std::move(weights), offset, target}, dim);
}

CostFunction CostFunction::weighted_sum(std::vector<WeightedSum::Term> terms, int dimension) {
  require(dimension > 0, ErrorCode::InvalidArgument, "weighted sum dimension must be > 0");
  std::vector<bool> covered(static_cast<std::size_t>(dimension), false);
  for (const auto& t : terms) {
    require(t.cost != nullptr, ErrorCode::InvalidArgument, "weighted sum term without a cost");
    require(std::isfinite(t.weight), ErrorCode::InvalidArgument, "term weight must be finite");
    require(t.slice.offset >= 0 && t.slice.length > 0 &&
                t.slice.offset + t.slice.length <= dimension,
            ErrorCode::DimensionMismatch, "term slice outside the declared dimension");
    require(t.cost->dimension() == t.slice.length, ErrorCode::DimensionMismatch,
            "term cost dimension does not match its slice");
    if (t.slice.length == dimension) continue;
    for (int i = t.slice.offset; i < t.slice.offset + t.slice.length; ++i) {
      require(!covered[static_cast<std::size_t>(i)], ErrorCode::InvalidArgument,
              "weighted sum slices overlap at coordinate " + std::to_string(i));
      covered[static_cast<std::size_t>(i)] = true;
    }
  }
  return CostFunction(WeightedSum{std::move(terms), dimension}, dimension);
}

double evaluate(const CostFunction& cost, const Vector& point) {
  check_point(cost, point);
  return std::visit(
      Overloaded{
          [&](const LinearQuadraticPQ& c) {
            return c.sign * c.c1 * point(0) + c.c2 * point(1) * point(1);
          },
          [&](const ExpectedFinite& c) {
            if (c.encoding == ExpectedFinite::Encoding::Binary) {
              return (1.0 - point(0)) * c.values[0] + point(0) * c.values[1];
            }
            return Eigen::Map<const Vector>(c.values.data(), static_cast<Eigen::Index>(c.values.size()))
                .dot(point);
          },
          [&](const QuadraticTracking& c) {
            const double r = c.weights.dot(point) + c.offset - c.target;
            return 0.5 * r * r;
          },
          [&](const WeightedSum& c) {
            double total = 0.0;
            for (const auto& t : c.terms) {
              total += t.weight * evaluate(*t.cost, point.segment(t.slice.offset, t.slice.length));
            }
            return total;
          },
      },
      cost.shape());
}

Vector gradient(const CostFunction& cost, const Vector& point) {
  check_point(cost, point);
  return std::visit(
      Overloaded{
          [&](const LinearQuadraticPQ& c) -> Vector {
            Vector g(2);
            g << c.sign * c.c1, 2.0 * c.c2 * point(1);
            return g;
          },
          [&](const ExpectedFinite& c) -> Vector {
            if (c.encoding == ExpectedFinite::Encoding::Binary) {
              return Vector::Constant(1, c.values[1] - c.values[0]);
            }
            return Eigen::Map<const Vector>(c.values.data(), static_cast<Eigen::Index>(c.values.size()));
          },
          [&](const QuadraticTracking& c) -> Vector {
            const double r = c.weights.dot(point) + c.offset - c.target;
            return r * c.weights;
          },
          [&](const WeightedSum& c) -> Vector {
            Vector g = Vector::Zero(c.dimension);
            for (const auto& t : c.terms) {
              g.segment(t.slice.offset, t.slice.length) +=
                  t.weight * gradient(*t.cost, point.segment(t.slice.offset, t.slice.length));
            }
            return g;
          },
      },
      cost.shape());
}

Matrix hessian(const CostFunction& cost) {
  return std::visit(
      Overloaded{
          [&](const LinearQuadraticPQ& c) -> Matrix {
            Matrix h = Matrix::Zero(2, 2);
            h(1, 1) = 2.0 * c.c2;
            return h;
          },
          [&](const ExpectedFinite&) -> Matrix {
            return Matrix::Zero(cost.dimension(), cost.dimension());
          },
          [&](const QuadraticTracking& c) -> Matrix { return c.weights * c.weights.transpose(); },
          [&](const WeightedSum& c) -> Matrix {
            Matrix h = Matrix::Zero(c.dimension, c.dimension);
            for (const auto& t : c.terms) {
              h.block(t.slice.offset, t.slice.offset, t.slice.length, t.slice.length) +=
                  t.weight * hessian(*t.cost);
            }
            return h;
          },
      },
      cost.shape());
}

double gradient_lipschitz(const CostFunction& cost) {
  const Matrix h = hessian(cost);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace ogc
