#include "shuttle/potential.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "shuttle/error.hpp"

namespace shuttle {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool positive(double v) { return std::isfinite(v) && v > 0; }

}  // namespace

PotentialModel::PotentialModel(double mass, PotentialShape shape) : mass_(mass), shape_(shape) {
  require(positive(mass_), "mass must be positive");
  std::visit(overloaded{
                 [](const Harmonic& h) { require(positive(h.omega), "harmonic omega must be positive"); },
                 [](const Lattice& l) {
                   require(positive(l.depth), "lattice depth must be positive");
                   require(positive(l.wavenumber), "lattice wavenumber must be positive");
                   require(std::isfinite(l.phase), "lattice phase must be finite");
                 },
                 [](const Gaussian& g) {
                   require(positive(g.depth), "gaussian depth must be positive");
                   require(positive(g.waist), "gaussian waist must be positive");
                 },
             },
             shape_);
}

PotentialModel PotentialModel::harmonic(double mass, double omega) {
  return PotentialModel(mass, Harmonic{omega});
}
PotentialModel PotentialModel::lattice(double mass, double depth, double wavenumber, double phase) {
  return PotentialModel(mass, Lattice{depth, wavenumber, phase});
}
PotentialModel PotentialModel::gaussian(double mass, double depth, double waist) {
  return PotentialModel(mass, Gaussian{depth, waist});
}

std::string PotentialModel::name() const {
  return std::visit(overloaded{[](const Harmonic&) { return std::string("harmonic"); },
                               [](const Lattice&) { return std::string("lattice"); },
                               [](const Gaussian&) { return std::string("gaussian"); }},
                    shape_);
}

double PotentialModel::value(double y) const {
  return std::visit(overloaded{
                        [&](const Harmonic& h) { return 0.5 * mass_ * h.omega * h.omega * y * y; },
                        [&](const Lattice& l) {
                          const double s = std::sin(l.wavenumber * y + l.phase);
                          return l.depth * s * s;
                        },
                        [&](const Gaussian& g) {
                          return -g.depth * std::exp(-2.0 * y * y / (g.waist * g.waist));
                        },
                    },
                    shape_);
}

double PotentialModel::slope(double y) const {
  return std::visit(overloaded{
                        [&](const Harmonic& h) { return mass_ * h.omega * h.omega * y; },
                        [&](const Lattice& l) {
                          return l.depth * l.wavenumber * std::sin(2.0 * (l.wavenumber * y + l.phase));
                        },
                        [&](const Gaussian& g) {
                          const double w2 = g.waist * g.waist;
                          return 4.0 * g.depth * y / w2 * std::exp(-2.0 * y * y / w2);
                        },
                    },
                    shape_);
}

double PotentialModel::frequency() const {
  return std::visit(overloaded{
                        [](const Harmonic& h) { return h.omega; },
                        [&](const Lattice& l) { return l.wavenumber * std::sqrt(2.0 * l.depth / mass_); },
                        [&](const Gaussian& g) {
                          return std::sqrt(4.0 * g.depth / (mass_ * g.waist * g.waist));
                        },
                    },
                    shape_);
}

double PotentialModel::well_center() const {
  if (const auto* l = std::get_if<Lattice>(&shape_)) {
    const double n = std::round(l->phase / std::numbers::pi);
    return (n * std::numbers::pi - l->phase) / l->wavenumber;
  }
  return 0.0;
}

double PotentialModel::minimum_value() const {
  if (const auto* g = std::get_if<Gaussian>(&shape_)) return -g->depth;
  return 0.0;
}

double PotentialModel::support_half_width() const {
  return std::visit(overloaded{
                        [](const Harmonic&) { return std::numeric_limits<double>::infinity(); },
                        [](const Lattice& l) { return 0.5 * std::numbers::pi / l.wavenumber; },
                        [](const Gaussian& g) { return 2.0 * g.waist; },
                    },
                    shape_);
}

bool PotentialModel::inside_support(double y) const {
  return std::abs(y - well_center()) <= support_half_width();
}

PotentialModel PotentialModel::perturbed(const LatticePerturbation& p) const {
  if (const auto* l = std::get_if<Lattice>(&shape_)) {
    return PotentialModel(mass_, Lattice{l->depth * p.amplitude_scale, l->wavenumber * p.wavenumber_scale,
                                         l->phase + p.phase_shift});
  }
  require(p.amplitude_scale == 1.0 && p.wavenumber_scale == 1.0 && p.phase_shift == 0.0,
          "parameter fluctuations are defined for lattice potentials only");
  return *this;
}

}  // namespace shuttle
