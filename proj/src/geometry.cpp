#include "ogc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

namespace ogc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_dimension(const FeasibleSet& set, const Vector& point) {
  if (point.size() != set.dimension()) {
    fail(ErrorCode::DimensionMismatch, "point has dimension " + std::to_string(point.size()) +
                                           ", set " + set.kind() + " has dimension " +
                                           std::to_string(set.dimension()));
  }
}

bool all_finite(const Vector& v) { return v.allFinite(); }

// Effective active-power range of an inverter disk.
struct DiskRange {
  double lo;
  double hi;
  bool empty() const { return lo > hi; }
};

DiskRange disk_range(const InverterDisk& d) {
  return {std::max(d.p_min, -d.s_rated), std::min(d.p_max, d.s_rated)};
}

Vector project_simplex(const Vector& v) {
  const Eigen::Index n = v.size();
  std::vector<double> sorted(v.data(), v.data() + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double threshold = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    cumulative += sorted[static_cast<std::size_t>(j)];
    const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (sorted[static_cast<std::size_t>(j)] - candidate > 0.0) threshold = candidate;
  }
  return (v.array() - threshold).max(0.0).matrix();
}

// Rounding in radial scaling can leave a point one ulp outside the circle;
// pull it in so projected points pass the exact membership test.
void pull_inside_circle(double& p, double& q, double s) {
  for (int i = 0; i < 8 && p * p + q * q > s * s; ++i) {
    p = std::nextafter(p, 0.0);
    q = std::nextafter(q, 0.0);
  }
}

Vector project_disk(const InverterDisk& disk, const Vector& x) {
  const DiskRange range = disk_range(disk);
  if (range.empty()) {
    fail(ErrorCode::EmptySet, "inverter disk power interval [" + std::to_string(disk.p_min) + ", " +
                                  std::to_string(disk.p_max) + "] misses [-s, s] with s = " +
                                  std::to_string(disk.s_rated));
  }
  const double p = x(0);
  const double q = x(1);
  const double s = disk.s_rated;
  if (p >= range.lo && p <= range.hi && p * p + q * q <= s * s) return x;

  // The projection lies on the boundary: either on an arc of the circle or on
  // one of the two vertical segments P = lo, P = hi.
  Vector best(2);
  double best_dist = kInf;
  auto consider = [&](double cp, double cq) {
    const double d = (cp - p) * (cp - p) + (cq - q) * (cq - q);
    if (d < best_dist) {
      best_dist = d;
      best << cp, cq;
    }
  };
  const double r = std::hypot(p, q);
  if (r > 0.0) {
    double rp = p * s / r;
    double rq = q * s / r;
    pull_inside_circle(rp, rq, s);
    if (rp >= range.lo && rp <= range.hi) consider(rp, rq);
  }
  for (double edge : {range.lo, range.hi}) {
    double q_max = std::sqrt(std::max(0.0, s * s - edge * edge));
    for (int i = 0; i < 8 && edge * edge + q_max * q_max > s * s; ++i) {
      q_max = std::nextafter(q_max, 0.0);
    }
    consider(edge, std::clamp(q, -q_max, q_max));
  }
  return best;
}

Vector project_ball(const Ball& ball, const Vector& x) {
  const Vector diff = x - ball.center;
  const double r = diff.norm();
  if (r <= ball.radius) return x;
  Vector out = ball.center + diff * (ball.radius / r);
  for (int i = 0; i < 8 && (out - ball.center).norm() > ball.radius; ++i) {
    out = ball.center + (out - ball.center) * (1.0 - 0x1p-52);
  }
  return out;
}

Vector project_finite(const FinitePoints& fp, const Vector& x) {
  std::size_t best = 0;
  double best_dist = kInf;
  for (std::size_t i = 0; i < fp.points.size(); ++i) {
    const double d = (fp.points[i] - x).squaredNorm();
    if (d < best_dist) {
      best_dist = d;
      best = i;
    }
  }
  return fp.points[best];
}

// One Dykstra member: either a closed-form set or a single half-space
// {normal . x <= bound}.
struct Atom {
  const FeasibleSet* set = nullptr;
  Vector normal;
  double bound = 0.0;
  double normal_sq = 0.0;

  Vector project(const Vector& x, const ProjectionOptions& options) const {
    if (set != nullptr) return ogc::project(*set, x, options);
    const double excess = normal.dot(x) - bound;
    if (excess <= 0.0) return x;
    return x - (excess / normal_sq) * normal;
  }

  double violation(const Vector& x, const ProjectionOptions& options) const {
    if (set != nullptr) return (ogc::project(*set, x, options) - x).norm();
    return std::max(0.0, normal.dot(x) - bound) / std::sqrt(normal_sq);
  }
};

void add_halfspace(std::vector<Atom>& atoms, const Vector& normal, double bound) {
  if (!std::isfinite(bound)) {
    if (bound > 0) return;  // +inf: inactive
    fail(ErrorCode::EmptySet, "half-space with bound -inf");
  }
  const double nsq = normal.squaredNorm();
  if (nsq == 0.0) {
    if (bound < 0.0) fail(ErrorCode::EmptySet, "zero-row band constraint cannot be satisfied");
    return;
  }
  atoms.push_back(Atom{nullptr, normal, bound, nsq});
}

void flatten(const FeasibleSet& member, std::vector<Atom>& atoms) {
  if (!member.is_convex()) {
    fail(ErrorCode::InvalidArgument, "intersection member " + member.kind() + " is not convex");
  }
  if (const auto* inter = member.as<Intersection>()) {
    for (const auto& m : inter->members) flatten(m, atoms);
    return;
  }
  if (const auto* band = member.as<HalfspaceBand>()) {
    for (Eigen::Index i = 0; i < band->matrix.rows(); ++i) {
      const Vector row = band->matrix.row(i).transpose();
      add_halfspace(atoms, row, band->upper(i) - band->offset(i));
      add_halfspace(atoms, -row, band->offset(i) - band->lower(i));
    }
    return;
  }
  atoms.push_back(Atom{&member, Vector(), 0.0, 0.0});
}

std::string format_vector(const Vector& v) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v(i);
  os << ")";
  return os.str();
}

}  // namespace

FeasibleSet FeasibleSet::box(Vector lower, Vector upper) {
  require(lower.size() == upper.size(), ErrorCode::DimensionMismatch,
          "box bounds have different dimensions");
  require(lower.size() > 0, ErrorCode::InvalidArgument, "box must have dimension >= 1");
  require(all_finite(lower) && all_finite(upper), ErrorCode::Unbounded,
          "box bounds must be finite");
  require((lower.array() <= upper.array()).all(), ErrorCode::InvalidArgument,
          "box lower bound exceeds upper bound");
  const int dim = static_cast<int>(lower.size());
  return FeasibleSet(Box{std::move(lower), std::move(upper)}, dim);
}

FeasibleSet FeasibleSet::ball(Vector center, double radius) {
  require(center.size() > 0, ErrorCode::InvalidArgument, "ball must have dimension >= 1");
  require(all_finite(center), ErrorCode::InvalidArgument, "ball center must be finite");
  require(std::isfinite(radius), ErrorCode::Unbounded, "ball radius must be finite");
  require(radius >= 0.0, ErrorCode::InvalidArgument, "ball radius must be >= 0");
  const int dim = static_cast<int>(center.size());
  return FeasibleSet(Ball{std::move(center), radius}, dim);
}

FeasibleSet FeasibleSet::simplex(int dimension) {
  require(dimension >= 1, ErrorCode::InvalidArgument, "simplex dimension must be >= 1");
  return FeasibleSet(Simplex{dimension}, dimension);
}

FeasibleSet FeasibleSet::interval(double lower, double upper) {
  require(std::isfinite(lower) && std::isfinite(upper), ErrorCode::Unbounded,
          "interval bounds must be finite");
  require(lower <= upper, ErrorCode::InvalidArgument, "interval lower bound exceeds upper bound");
  return FeasibleSet(Interval{lower, upper}, 1);
}

FeasibleSet FeasibleSet::inverter_disk(double p_available, double s_rated) {
  return inverter_disk(0.0, p_available, s_rated);
}

FeasibleSet FeasibleSet::inverter_disk(double p_min, double p_max, double s_rated) {
  require(std::isfinite(s_rated) && s_rated > 0.0, ErrorCode::InvalidArgument,
          "inverter rated power must be finite and > 0");
  require(std::isfinite(p_min) && std::isfinite(p_max), ErrorCode::InvalidArgument,
          "inverter power limits must be finite");
  require(p_min <= p_max, ErrorCode::InvalidArgument, "inverter p_min exceeds p_max");
  return FeasibleSet(InverterDisk{p_min, p_max, s_rated}, 2);
}

FeasibleSet FeasibleSet::halfspace_band(Matrix matrix, Vector offset, Vector lower, Vector upper) {
  const auto rows = matrix.rows();
  require(offset.size() == rows && lower.size() == rows && upper.size() == rows,
          ErrorCode::DimensionMismatch, "band offset/limits must have one entry per matrix row");
  require(matrix.cols() > 0, ErrorCode::InvalidArgument, "band matrix must have columns");
  require(matrix.allFinite() && offset.allFinite(), ErrorCode::InvalidArgument,
          "band matrix and offset must be finite");
  for (Eigen::Index i = 0; i < rows; ++i) {
    require(!std::isnan(lower(i)) && !std::isnan(upper(i)), ErrorCode::InvalidArgument,
            "band limits must not be NaN");
    require(lower(i) <= upper(i), ErrorCode::InvalidArgument,
            "band lower limit exceeds upper limit in row " + std::to_string(i));
  }
  const int dim = static_cast<int>(matrix.cols());
  return FeasibleSet(
      HalfspaceBand{std::move(matrix), std::move(offset), std::move(lower), std::move(upper)}, dim);
}

FeasibleSet FeasibleSet::halfspace(Vector normal, double bound) {
  Matrix m = normal.transpose();
  Vector zero = Vector::Zero(1);
  Vector lo = Vector::Constant(1, -kInf);
  Vector hi = Vector::Constant(1, bound);
  return halfspace_band(std::move(m), std::move(zero), std::move(lo), std::move(hi));
}

FeasibleSet FeasibleSet::product(std::vector<FeasibleSet> factors) {
  require(!factors.empty(), ErrorCode::InvalidArgument, "product needs at least one factor");
  int dim = 0;
  for (const auto& f : factors) dim += f.dimension();
  return FeasibleSet(Product{std::move(factors)}, dim);
}

FeasibleSet FeasibleSet::intersection(std::vector<FeasibleSet> members) {
  require(!members.empty(), ErrorCode::InvalidArgument, "intersection needs at least one member");
  const int dim = members.front().dimension();
  bool any_bounded = false;
  for (const auto& m : members) {
    require(m.dimension() == dim, ErrorCode::DimensionMismatch,
            "intersection members must share one ambient dimension");
    require(m.is_convex(), ErrorCode::InvalidArgument, "intersection members must be convex");
    any_bounded = any_bounded || m.is_bounded();
  }
  require(any_bounded, ErrorCode::Unbounded, "intersection needs at least one bounded member");
  return FeasibleSet(Intersection{std::move(members)}, dim);
}

FeasibleSet FeasibleSet::finite_points(std::vector<Vector> points) {
  require(!points.empty(), ErrorCode::EmptySet, "finite point set is empty");
  const auto dim = points.front().size();
  require(dim > 0, ErrorCode::InvalidArgument, "points must have dimension >= 1");
  for (const auto& p : points) {
    require(p.size() == dim, ErrorCode::DimensionMismatch, "points must share one dimension");
    require(all_finite(p), ErrorCode::InvalidArgument, "points must be finite");
  }
  return FeasibleSet(FinitePoints{std::move(points)}, static_cast<int>(dim));
}

bool FeasibleSet::is_convex() const noexcept {
  if (const auto* p = as<Product>()) {
    return std::all_of(p->factors.begin(), p->factors.end(),
                       [](const FeasibleSet& f) { return f.is_convex(); });
  }
  return !std::holds_alternative<FinitePoints>(shape_);
}

bool FeasibleSet::is_bounded() const noexcept {
  if (std::holds_alternative<HalfspaceBand>(shape_)) return false;
  if (const auto* p = as<Product>()) {
    return std::all_of(p->factors.begin(), p->factors.end(),
                       [](const FeasibleSet& f) { return f.is_bounded(); });
  }
  return true;
}

std::string FeasibleSet::kind() const {
  static constexpr const char* kNames[] = {"Box",          "Ball",          "Simplex",
                                           "Interval",     "InverterDisk",  "HalfspaceBand",
                                           "Product",      "Intersection",  "FinitePoints"};
  return kNames[shape_.index()];
}

Vector project(const FeasibleSet& set, const Vector& point, const ProjectionOptions& options) {
  check_dimension(set, point);
  return std::visit(
      Overloaded{
          [&](const Box& b) -> Vector { return point.cwiseMax(b.lower).cwiseMin(b.upper); },
          [&](const Ball& b) -> Vector { return project_ball(b, point); },
          [&](const Simplex&) -> Vector { return project_simplex(point); },
          [&](const Interval& i) -> Vector {
            return Vector::Constant(1, std::clamp(point(0), i.lower, i.upper));
          },
          [&](const InverterDisk& d) -> Vector { return project_disk(d, point); },
          [&](const HalfspaceBand&) -> Vector {
            const FeasibleSet members[] = {set};
            return project_intersection(members, point, options.tol, options.max_iter);
          },
          [&](const Product& p) -> Vector {
            Vector out(point.size());
            Eigen::Index offset = 0;
            for (const auto& f : p.factors) {
              const Eigen::Index n = f.dimension();
              out.segment(offset, n) = project(f, point.segment(offset, n), options);
              offset += n;
            }
            return out;
          },
          [&](const Intersection& i) -> Vector {
            return project_intersection(i.members, point, options.tol, options.max_iter);
          },
          [&](const FinitePoints& fp) -> Vector { return project_finite(fp, point); },
      },
      set.shape());
}

Vector project_intersection(std::span<const FeasibleSet> members, const Vector& point, double tol,
                            int max_iter) {
  require(!members.empty(), ErrorCode::InvalidArgument, "intersection needs at least one member");
  require(tol > 0.0, ErrorCode::InvalidArgument, "tolerance must be > 0");
  require(max_iter > 0, ErrorCode::InvalidArgument, "max_iter must be > 0");
  for (const auto& m : members) check_dimension(m, point);

  std::vector<Atom> atoms;
  for (const auto& m : members) flatten(m, atoms);
  const ProjectionOptions inner{tol, max_iter};
  if (atoms.empty()) return point;
  if (atoms.size() == 1) return atoms.front().project(point, inner);

  auto max_violation = [&](const Vector& x) {
    double worst = 0.0;
    for (const auto& a : atoms) worst = std::max(worst, a.violation(x, inner));
    return worst;
  };
  if (max_violation(point) <= tol) return point;

  std::vector<Vector> increments(atoms.size(), Vector::Zero(point.size()));
  Vector x = point;
  for (int iter = 0; iter < max_iter; ++iter) {
    double increment_change = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const Vector shifted = x + increments[i];
      const Vector projected = atoms[i].project(shifted, inner);
      Vector next_increment = shifted - projected;
      increment_change += (next_increment - increments[i]).squaredNorm();
      increments[i] = std::move(next_increment);
      x = projected;
    }
    if (std::sqrt(increment_change) < tol && max_violation(x) <= tol) return x;
  }

  std::vector<double> violations;
  violations.reserve(atoms.size());
  for (const auto& a : atoms) violations.push_back(a.violation(x, inner));
  const double worst = *std::max_element(violations.begin(), violations.end());
  throw ConvergenceError("Dykstra projection did not converge in " + std::to_string(max_iter) +
                             " cycles; last iterate " + format_vector(x) +
                             ", max member violation " + std::to_string(worst),
                         std::vector<double>(x.data(), x.data() + x.size()),
                         std::move(violations));
}

bool contains(const FeasibleSet& set, const Vector& point, double tol) {
  if (point.size() != set.dimension()) return false;
  return std::visit(
      Overloaded{
          [&](const Box& b) {
            return ((point - b.lower).array() >= -tol).all() &&
                   ((b.upper - point).array() >= -tol).all();
          },
          [&](const Ball& b) { return (point - b.center).norm() <= b.radius + tol; },
          [&](const Simplex&) {
            return (point.array() >= -tol).all() && std::abs(point.sum() - 1.0) <= tol;
          },
          [&](const Interval& i) { return point(0) >= i.lower - tol && point(0) <= i.upper + tol; },
          [&](const InverterDisk& d) {
            const DiskRange r = disk_range(d);
            if (r.empty()) return false;
            return point(0) >= r.lo - tol && point(0) <= r.hi + tol &&
                   std::hypot(point(0), point(1)) <= d.s_rated + tol;
          },
          [&](const HalfspaceBand& b) {
            const Vector v = b.matrix * point + b.offset;
            return ((v - b.lower).array() >= -tol).all() && ((b.upper - v).array() >= -tol).all();
          },
          [&](const Product& p) {
            Eigen::Index offset = 0;
            for (const auto& f : p.factors) {
              const Eigen::Index n = f.dimension();
              if (!contains(f, point.segment(offset, n), tol)) return false;
              offset += n;
            }
            return true;
          },
          [&](const Intersection& i) {
            return std::all_of(i.members.begin(), i.members.end(),
                               [&](const FeasibleSet& m) { return contains(m, point, tol); });
          },
          [&](const FinitePoints& fp) {
            return std::any_of(fp.points.begin(), fp.points.end(),
                               [&](const Vector& p) { return (p - point).norm() <= tol; });
          },
      },
      set.shape());
}

double distance(const FeasibleSet& set, const Vector& point, const ProjectionOptions& options) {
  return (project(set, point, options) - point).norm();
}

SetBounds bounds(const FeasibleSet& set) {
  return std::visit(
      Overloaded{
          [&](const Box& b) -> SetBounds {
            return {b.lower.cwiseAbs().cwiseMax(b.upper.cwiseAbs()).norm(),
                    (b.upper - b.lower).norm()};
          },
          [&](const Ball& b) -> SetBounds { return {b.center.norm() + b.radius, 2.0 * b.radius}; },
          [&](const Simplex& s) -> SetBounds {
            return {1.0, s.dimension >= 2 ? std::sqrt(2.0) : 0.0};
          },
          [&](const Interval& i) -> SetBounds {
            return {std::max(std::abs(i.lower), std::abs(i.upper)), i.upper - i.lower};
          },
          [&](const InverterDisk& d) -> SetBounds {
            const DiskRange r = disk_range(d);
            if (r.empty()) fail(ErrorCode::EmptySet, "inverter disk is empty");
            // Extreme points lie on the circle; the widest chord is vertical
            // through the strip edge nearest to P = 0.
            if (r.lo <= 0.0 && r.hi >= 0.0) return {d.s_rated, 2.0 * d.s_rated};
            const double p_near = std::min(std::abs(r.lo), std::abs(r.hi));
            return {d.s_rated, 2.0 * std::sqrt(std::max(0.0, d.s_rated * d.s_rated - p_near * p_near))};
          },
          [&](const HalfspaceBand&) -> SetBounds {
            fail(ErrorCode::Unbounded, "a half-space band alone is unbounded");
          },
          [&](const Product& p) -> SetBounds {
            double b2 = 0.0;
            double d2 = 0.0;
            for (const auto& f : p.factors) {
              const SetBounds fb = bounds(f);
              b2 += fb.norm_bound * fb.norm_bound;
              d2 += fb.diameter * fb.diameter;
            }
            return {std::sqrt(b2), std::sqrt(d2)};
          },
          [&](const Intersection& i) -> SetBounds {
            SetBounds out{kInf, kInf};
            for (const auto& m : i.members) {
              if (!m.is_bounded()) continue;
              const SetBounds mb = bounds(m);
              out.norm_bound = std::min(out.norm_bound, mb.norm_bound);
              out.diameter = std::min(out.diameter, mb.diameter);
            }
            return out;
          },
          [&](const FinitePoints& fp) -> SetBounds {
            SetBounds out;
            for (std::size_t i = 0; i < fp.points.size(); ++i) {
              out.norm_bound = std::max(out.norm_bound, fp.points[i].norm());
              for (std::size_t j = i + 1; j < fp.points.size(); ++j) {
                out.diameter = std::max(out.diameter, (fp.points[i] - fp.points[j]).norm());
              }
            }
            return out;
          },
      },
      set.shape());
}

Vector sample_uniform_ball(int dimension, double radius, std::mt19937_64& rng) {
  require(dimension >= 0, ErrorCode::InvalidArgument, "dimension must be >= 0");
  require(radius >= 0.0 && std::isfinite(radius), ErrorCode::InvalidArgument,
          "radius must be finite and >= 0");
  Vector out = Vector::Zero(dimension);
  if (dimension == 0 || radius == 0.0) return out;
  std::normal_distribution<double> normal(0.0, 1.0);
  double norm = 0.0;
  while (norm == 0.0) {
    for (int i = 0; i < dimension; ++i) out(i) = normal(rng);
    norm = out.norm();
  }
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double scale = radius * std::pow(uniform(rng), 1.0 / dimension);
  return out * (scale / norm);
}

}  // namespace ogc
