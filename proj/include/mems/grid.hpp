#pragma once

#include <Eigen/Core>

#include <memory>

namespace mems {

using Vector = Eigen::VectorXd;

/// Uniform node-centred grid r_i = i/n, i = 0..n, on the unit radius.
///
/// Quadrature uses finite-volume cell areas: node 0 owns the disc of radius
/// h/2, interior nodes the annuli [r_i - h/2, r_i + h/2], node n the half
/// annulus [1 - h/2, 1]. The weights sum to pi exactly, integrate smooth
/// radial functions to O(h^2), and make the discrete radial Laplacian with
/// Dirichlet data symmetric in the induced inner product.
class RadialGrid {
 public:
  static constexpr int kMinIntervals = 16;

  explicit RadialGrid(int n);

  int n() const { return n_; }
  int size() const { return n_ + 1; }
  double h() const { return h_; }
  double r(int i) const { return i * h_; }
  const Vector& nodes() const { return nodes_; }
  const Vector& weights() const { return weights_; }

 private:
  int n_;
  double h_;
  Vector nodes_;
  Vector weights_;
};

/// Tensor grid of the fixed cylinder D x (0,1) in (r, eta).
class CylinderGrid {
 public:
  CylinderGrid(std::shared_ptr<const RadialGrid> radial, int m);
  CylinderGrid(int n, int m) : CylinderGrid(std::make_shared<const RadialGrid>(n), m) {}

  const RadialGrid& radial() const { return *radial_; }
  const std::shared_ptr<const RadialGrid>& radial_ptr() const { return radial_; }
  int m() const { return m_; }
  double k() const { return k_; }
  double eta(int j) const { return j * k_; }
  /// Trapezoid weights in eta, summing to 1.
  const Vector& eta_weights() const { return eta_weights_; }

 private:
  std::shared_ptr<const RadialGrid> radial_;
  int m_;
  double k_;
  Vector eta_weights_;
};

/// Second-order approximation of u'' + u'/r.
///
/// Interior nodes use centred differences; r = 0 uses the mirror condition
/// u_{-1} = u_1, giving 2 u''(0). The entry at r = 1 is the one-sided value
/// of boundary_laplacian.
Vector radial_laplacian(const RadialGrid& g, const Vector& u);

/// u'(r): zero at the axis, centred inside, one-sided 3-point at r = 1.
Vector radial_derivative(const RadialGrid& g, const Vector& u);

/// u''(r): mirror at the axis, centred inside, one-sided 4-point at r = 1.
Vector radial_second_derivative(const RadialGrid& g, const Vector& u);

/// Quadrature of f over the unit disc.
double integrate_disc(const RadialGrid& g, const Vector& f);

/// Weighted inner product matching integrate_disc.
double inner_disc(const RadialGrid& g, const Vector& a, const Vector& b);

/// One-sided 3-point approximation of u'(1) (the outward normal derivative).
double boundary_normal_derivative(const RadialGrid& g, const Vector& u);

/// One-sided 4-point approximation of u''(1).
double boundary_second_derivative(const RadialGrid& g, const Vector& u);

/// u''(1) + u'(1): the Laplacian at the rim from one-sided stencils.
double boundary_laplacian(const RadialGrid& g, const Vector& u);

/// Evaluates f at the grid nodes.
template <class F>
Vector sample(const RadialGrid& g, F&& f) {
  Vector out(g.size());
  for (int i = 0; i <= g.n(); ++i) out[i] = f(g.r(i));
  return out;
}

}  // namespace mems
