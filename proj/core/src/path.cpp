#include "shuttle/path.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shuttle/error.hpp"

namespace shuttle {
namespace {

// sum_k c_k x^k together with first two derivatives.
Kinematics horner3(const std::vector<double>& c, double x) {
  double p = 0.0, dp = 0.0, ddp = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    ddp = ddp * x + 2.0 * dp;
    dp = dp * x + p;
    p = p * x + *it;
  }
  return {p, dp, ddp};
}

double horner(const std::vector<double>& c, double x) {
  double p = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) p = p * x + *it;
  return p;
}

std::vector<double> differentiate(const std::vector<double>& c) {
  if (c.size() <= 1) return {0.0};
  std::vector<double> d(c.size() - 1);
  for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = static_cast<double>(k) * c[k];
  return d;
}

}  // namespace

const char* to_string(PathRole role) noexcept {
  return role == PathRole::Reference ? "reference" : "trap";
}

// ---------------------------------------------------------------------------
// PolyPath

PolyPath::PolyPath(std::vector<double> coefficients, double duration, PathRole role)
    : coefficients_(std::move(coefficients)), duration_(duration), role_(role) {
  require(!coefficients_.empty(), "polynomial needs at least one coefficient");
  require(static_cast<int>(coefficients_.size()) - 1 <= kMaxPolynomialDegree,
          "polynomial degree exceeds " + std::to_string(kMaxPolynomialDegree));
  require(std::isfinite(duration_) && duration_ > 0, "path duration must be positive");
  for (double c : coefficients_) require(std::isfinite(c), "polynomial coefficients must be finite");
}

double PolyPath::position(double t) const { return horner(coefficients_, t / duration_); }

double PolyPath::velocity(double t) const { return at(t).velocity; }

double PolyPath::acceleration(double t) const { return at(t).acceleration; }

Kinematics PolyPath::at(double t) const {
  const auto k = horner3(coefficients_, t / duration_);
  return {k.position, k.velocity / duration_, k.acceleration / (duration_ * duration_)};
}

double PolyPath::derivative(int order, double t) const {
  return horner(time_derivative_coefficients(order), t / duration_);
}

double PolyPath::end_value() const {
  double sum = 0.0;
  for (double c : coefficients_) sum += c;
  return sum;
}

std::vector<double> PolyPath::time_derivative_coefficients(int order) const {
  require(order >= 0, "derivative order must be non-negative");
  std::vector<double> c = coefficients_;
  for (int i = 0; i < order; ++i) {
    c = differentiate(c);
    for (double& v : c) v /= duration_;
  }
  return c;
}

PolyPath PolyPath::scaled(double factor) const {
  std::vector<double> c = coefficients_;
  for (double& v : c) v *= factor;
  return PolyPath(std::move(c), duration_, role_);
}

PolyPath PolyPath::with_role(PathRole role) const { return PolyPath(coefficients_, duration_, role); }

// ---------------------------------------------------------------------------
// SampledPath

SampledPath::SampledPath(double duration, std::vector<double> positions,
                         std::vector<double> velocities, std::vector<double> accelerations,
                         std::vector<Jump> jumps)
    : duration_(duration),
      positions_(std::move(positions)),
      velocities_(std::move(velocities)),
      accelerations_(std::move(accelerations)),
      jumps_(std::move(jumps)) {
  require(std::isfinite(duration_) && duration_ > 0, "sampled path duration must be positive");
  require(positions_.size() >= 2, "sampled path needs at least two samples");
  require(velocities_.size() == positions_.size() && accelerations_.size() == positions_.size(),
          "sampled path arrays must share one length");
  for (const Jump& j : jumps_) {
    require(j.time >= 0 && j.time <= duration_, "jump time outside the path duration");
  }
  std::sort(jumps_.begin(), jumps_.end(),
            [](const Jump& a, const Jump& b) { return a.time < b.time; });
}

SampledPath SampledPath::from(const PolyPath& path, std::size_t samples) {
  require(samples >= 2, "need at least two samples");
  std::vector<double> x(samples), v(samples), a(samples);
  const double h = path.duration() / static_cast<double>(samples - 1);
  for (std::size_t i = 0; i < samples; ++i) {
    const auto k = path.at(h * static_cast<double>(i));
    x[i] = k.position;
    v[i] = k.velocity;
    a[i] = k.acceleration;
  }
  return SampledPath(path.duration(), std::move(x), std::move(v), std::move(a));
}

std::vector<double> SampledPath::times() const {
  std::vector<double> t(size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = time(i);
  return t;
}

bool SampledPath::has_interior_jumps() const noexcept {
  return std::any_of(jumps_.begin(), jumps_.end(),
                     [&](const Jump& j) { return j.time > 0 && j.time < duration_; });
}

Kinematics SampledPath::at(double t) const {
  const double h = step();
  const std::size_t last = size() - 1;
  double u = std::clamp(t, 0.0, duration_) / h;
  auto i = static_cast<std::size_t>(std::floor(u));
  if (i >= last) i = last - 1;
  const double s = u - static_cast<double>(i);

  const double x0 = positions_[i], x1 = positions_[i + 1];
  const double m0 = velocities_[i] * h, m1 = velocities_[i + 1] * h;
  const double s2 = s * s, s3 = s2 * s;
  const double pos = (2 * s3 - 3 * s2 + 1) * x0 + (s3 - 2 * s2 + s) * m0 +
                     (-2 * s3 + 3 * s2) * x1 + (s3 - s2) * m1;
  const double dpos = (6 * s2 - 6 * s) * x0 + (3 * s2 - 4 * s + 1) * m0 +
                      (-6 * s2 + 6 * s) * x1 + (3 * s2 - 2 * s) * m1;
  const double acc = (1 - s) * accelerations_[i] + s * accelerations_[i + 1];
  return {pos, dpos / h, acc};
}

// ---------------------------------------------------------------------------
// PiecewisePath

PiecewisePath::PiecewisePath(std::vector<double> knots, std::vector<std::vector<double>> pieces,
                             double rest_before, double rest_after)
    : knots_(std::move(knots)),
      pieces_(std::move(pieces)),
      rest_before_(rest_before),
      rest_after_(rest_after) {
  require(knots_.size() >= 2, "piecewise path needs at least two knots");
  require(pieces_.size() + 1 == knots_.size(), "one polynomial piece per knot interval");
  require(knots_.front() == 0.0, "piecewise path must start at t = 0");
  for (std::size_t j = 1; j < knots_.size(); ++j) {
    require(knots_[j] > knots_[j - 1], "knots must be strictly increasing");
  }
  for (const auto& p : pieces_) require(!p.empty(), "empty polynomial piece");
}

Kinematics PiecewisePath::at(std::size_t segment, double t) const {
  const auto& c = pieces_.at(segment);
  return horner3(c, t - knots_[segment]);
}

Kinematics PiecewisePath::at(double t) const {
  auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
  std::size_t seg = it == knots_.begin() ? 0 : static_cast<std::size_t>(it - knots_.begin()) - 1;
  seg = std::min(seg, pieces_.size() - 1);
  return at(seg, t);
}

std::vector<Jump> PiecewisePath::jumps() const {
  std::vector<Jump> out;
  const auto push = [&](double t, const Kinematics& left, const Kinematics& right) {
    const double dx = right.position - left.position;
    const double dv = right.velocity - left.velocity;
    if (dx != 0.0 || dv != 0.0) out.push_back({t, dx, dv});
  };
  push(0.0, {rest_before_, 0.0, 0.0}, at(0, 0.0));
  for (std::size_t j = 1; j < pieces_.size(); ++j) {
    push(knots_[j], at(j - 1, knots_[j]), at(j, knots_[j]));
  }
  push(duration(), at(pieces_.size() - 1, duration()), {rest_after_, 0.0, 0.0});
  return out;
}

// ---------------------------------------------------------------------------
// TrapPath helpers

double duration_of(const TrapPath& path) {
  return std::visit([](const auto& p) { return p.duration(); }, path);
}

std::vector<double> breakpoints_of(const TrapPath& path) {
  if (const auto* pw = std::get_if<PiecewisePath>(&path)) return pw->knots();
  return {0.0, duration_of(path)};
}

Kinematics evaluate(const TrapPath& path, std::size_t segment, double t) {
  if (const auto* pw = std::get_if<PiecewisePath>(&path)) return pw->at(segment, t);
  return std::visit([t](const auto& p) { return p.at(t); }, path);
}

double initial_position(const TrapPath& path) {
  if (const auto* pw = std::get_if<PiecewisePath>(&path)) return pw->rest_before();
  return evaluate(path, 0, 0.0).position;
}

double final_position(const TrapPath& path) {
  if (const auto* pw = std::get_if<PiecewisePath>(&path)) return pw->rest_after();
  return evaluate(path, 0, duration_of(path)).position;
}

SampledPath sample(const TrapPath& path, std::size_t samples) {
  if (const auto* poly = std::get_if<PolyPath>(&path)) return SampledPath::from(*poly, samples);
  if (const auto* sp = std::get_if<SampledPath>(&path); sp && sp->size() == samples) return *sp;
  require(samples >= 2, "need at least two samples");
  const double tf = duration_of(path);
  const double h = tf / static_cast<double>(samples - 1);
  std::vector<double> x(samples), v(samples), a(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const auto k = std::visit([&](const auto& p) { return p.at(h * static_cast<double>(i)); }, path);
    x[i] = k.position;
    v[i] = k.velocity;
    a[i] = k.acceleration;
  }
  std::vector<Jump> jumps;
  if (const auto* pw = std::get_if<PiecewisePath>(&path)) jumps = pw->jumps();
  if (const auto* sp = std::get_if<SampledPath>(&path)) jumps = sp->jumps();
  return SampledPath(tf, std::move(x), std::move(v), std::move(a), std::move(jumps));
}

std::size_t align_steps_to_breakpoints(const TrapPath& path, std::size_t steps) {
  const auto knots = breakpoints_of(path);
  if (knots.size() <= 2) return steps;
  const double tf = knots.back();
  for (std::size_t m = steps; m <= 4 * steps + 16; ++m) {
    const bool aligned = std::all_of(knots.begin(), knots.end(), [&](double k) {
      const double u = k / tf * static_cast<double>(m);
      return std::abs(u - std::round(u)) <= 1e-9 * static_cast<double>(m);
    });
    if (aligned) return m;
  }
  throw InvalidArgument("breakpoints cannot be aligned with a uniform step grid");
}

std::size_t SegmentCursor::advance(double t) {
  const double tol = 1e-9 * knots_.back();
  while (segment_ + 2 < knots_.size() && t >= knots_[segment_ + 1] - tol) ++segment_;
  return segment_;
}

}  // namespace shuttle
