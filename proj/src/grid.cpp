#include "mems/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mems {
namespace {

void require_size(const RadialGrid& g, const Vector& u, const char* what) {
  if (u.size() != g.size()) {
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(g.size()) +
                                " node values, got " + std::to_string(u.size()));
  }
}

}  // namespace

RadialGrid::RadialGrid(int n) : n_(n), h_(1.0 / n) {
  if (n < kMinIntervals) {
    throw std::invalid_argument("RadialGrid: need at least 16 intervals, got " + std::to_string(n));
  }
  constexpr double pi = std::numbers::pi;
  nodes_.resize(n + 1);
  weights_.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    nodes_[i] = i * h_;
    weights_[i] = 2.0 * pi * nodes_[i] * h_;
  }
  weights_[0] = pi * h_ * h_ / 4.0;
  weights_[n] = pi * (h_ - h_ * h_ / 4.0);
  nodes_[n] = 1.0;
}

CylinderGrid::CylinderGrid(std::shared_ptr<const RadialGrid> radial, int m)
    : radial_(std::move(radial)), m_(m), k_(1.0 / m) {
  if (!radial_) throw std::invalid_argument("CylinderGrid: null radial grid");
  if (m < RadialGrid::kMinIntervals) {
    throw std::invalid_argument("CylinderGrid: need at least 16 eta intervals, got " +
                                std::to_string(m));
  }
  eta_weights_ = Vector::Constant(m + 1, k_);
  eta_weights_[0] = eta_weights_[m] = 0.5 * k_;
}

Vector radial_laplacian(const RadialGrid& g, const Vector& u) {
  require_size(g, u, "radial_laplacian");
  const int n = g.n();
  const double h = g.h();
  const double h2 = h * h;
  Vector out(n + 1);
  out[0] = 4.0 * (u[1] - u[0]) / h2;
  for (int i = 1; i < n; ++i) {
    const double r = g.r(i);
    out[i] = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / h2 + (u[i + 1] - u[i - 1]) / (2.0 * h * r);
  }
  out[n] = boundary_laplacian(g, u);
  return out;
}

Vector radial_derivative(const RadialGrid& g, const Vector& u) {
  require_size(g, u, "radial_derivative");
  const int n = g.n();
  const double h = g.h();
  Vector out(n + 1);
  out[0] = 0.0;
  for (int i = 1; i < n; ++i) out[i] = (u[i + 1] - u[i - 1]) / (2.0 * h);
  out[n] = boundary_normal_derivative(g, u);
  return out;
}

Vector radial_second_derivative(const RadialGrid& g, const Vector& u) {
  require_size(g, u, "radial_second_derivative");
  const int n = g.n();
  const double h2 = g.h() * g.h();
  Vector out(n + 1);
  out[0] = 2.0 * (u[1] - u[0]) / h2;
  for (int i = 1; i < n; ++i) out[i] = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / h2;
  out[n] = boundary_second_derivative(g, u);
  return out;
}

double integrate_disc(const RadialGrid& g, const Vector& f) {
  require_size(g, f, "integrate_disc");
  return g.weights().dot(f);
}

double inner_disc(const RadialGrid& g, const Vector& a, const Vector& b) {
  require_size(g, a, "inner_disc");
  require_size(g, b, "inner_disc");
  return (g.weights().array() * a.array() * b.array()).sum();
}

double boundary_normal_derivative(const RadialGrid& g, const Vector& u) {
  require_size(g, u, "boundary_normal_derivative");
  const int n = g.n();
  return (3.0 * u[n] - 4.0 * u[n - 1] + u[n - 2]) / (2.0 * g.h());
}

double boundary_second_derivative(const RadialGrid& g, const Vector& u) {
  require_size(g, u, "boundary_second_derivative");
  const int n = g.n();
  const double h2 = g.h() * g.h();
  return (2.0 * u[n] - 5.0 * u[n - 1] + 4.0 * u[n - 2] - u[n - 3]) / h2;
}

double boundary_laplacian(const RadialGrid& g, const Vector& u) {
  return boundary_second_derivative(g, u) + boundary_normal_derivative(g, u);
}

}  // namespace mems
