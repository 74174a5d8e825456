#include "mems/potential.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <vector>

namespace mems {
namespace {

// Fills the full (n+1) x (m+1) grid with Dirichlet values on the bottom,
// top and side; interior entries are overwritten by the solve.
Eigen::MatrixXd boundary_frame(const CylinderGrid& cg, const PlateField& u, const BoundaryData& data) {
  const RadialGrid& g = cg.radial();
  const int n = g.n();
  const int m = cg.m();
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(n + 1, m + 1);
  for (int i = 0; i <= n; ++i) {
    phi(i, 0) = data(g.r(i), -1.0);
    phi(i, m) = data(g.r(i), u.values[i]);
  }
  for (int j = 0; j <= m; ++j) phi(n, j) = data(1.0, (1.0 + u.values[n]) * cg.eta(j) - 1.0);
  return phi;
}

}  // namespace

PotentialSolver::PotentialSolver(std::shared_ptr<const CylinderGrid> grid) : grid_(std::move(grid)) {
  if (!grid_) throw std::invalid_argument("PotentialSolver: null grid");
  const int n = grid_->radial().n();
  const int m = grid_->m();
  const int unknowns = n * (m - 1);
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(9 * unknowns);
  for (int i = 0; i < n; ++i) {
    for (int j = 1; j < m; ++j) {
      for (int di = -1; di <= 1; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          const int ii = i + di;
          const int jj = j + dj;
          if (ii < 0 || ii >= n || jj < 1 || jj >= m) continue;
          t.emplace_back(index(i, j), index(ii, jj), 0.0);
        }
      }
    }
  }
  matrix_.resize(unknowns, unknowns);
  matrix_.setFromTriplets(t.begin(), t.end());
  matrix_.makeCompressed();
  lu_.analyzePattern(matrix_);
}

int PotentialSolver::index(int i, int j) const { return i * (grid_->m() - 1) + (j - 1); }

void PotentialSolver::check_source(const PlateField& u, bool require_conforming) const {
  const RadialGrid& g = grid_->radial();
  if (u.values.size() != g.size()) throw std::invalid_argument("PotentialSolver: plate field has wrong size");
  if (!u.values.allFinite()) throw std::invalid_argument("PotentialSolver: plate field is not finite");
  const double umin = u.min();
  if (umin <= -1.0 + 1e-12) {
    throw TouchdownError(fmt::format("touchdown: min u = {:.17g}", umin));
  }
  if (require_conforming && std::abs(u.rim()) > 1e-12) {
    throw std::invalid_argument(fmt::format("PotentialSolver: u(1) = {} violates the hinged condition", u.rim()));
  }
}

PotentialField PotentialSolver::solve(const PlateField& u, const Params& p, bool require_conforming) {
  check_source(u, require_conforming);
  const Vector& uv = u.values;
  const int n = grid_->radial().n();
  const BoundaryData data = [&](double r, double z) {
    // psi = (1 + z)/(1 + u(r)); r only takes node values here.
    const int i = static_cast<int>(std::lround(r * n));
    return (1.0 + z) / (1.0 + uv[i]);
  };
  return solve_dirichlet(u, p, data);
}

PotentialField PotentialSolver::solve_dirichlet(const PlateField& u, const Params& p, const BoundaryData& data) {
  check_source(u, false);
  const CylinderGrid& cg = *grid_;
  const RadialGrid& g = cg.radial();
  const int n = g.n();
  const int m = cg.m();
  const double h = g.h();
  const double k = cg.k();
  const double e2 = p.eps * p.eps;

  const Vector& uv = u.values;
  const Vector ur = radial_derivative(g, uv);
  const Vector lap = radial_laplacian(g, uv);

  Eigen::MatrixXd phi = boundary_frame(cg, u, data);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(matrix_.rows());

  auto add = [&](int row, int i, int j, double coef) {
    if (i < n && j >= 1 && j < m) {
      matrix_.coeffRef(row, index(i, j)) += coef;
    } else {
      rhs[row] -= coef * phi(i, j);
    }
  };

  for (int k_ = 0; k_ < matrix_.outerSize(); ++k_) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(matrix_, k_); it; ++it) it.valueRef() = 0.0;
  }

  for (int i = 0; i < n; ++i) {
    const double gap = 1.0 + uv[i];
    for (int j = 1; j < m; ++j) {
      const double eta = cg.eta(j);
      const int row = index(i, j);
      const double a = e2 * gap * gap;
      const double c = 1.0 + e2 * eta * eta * ur[i] * ur[i];
      const double d = e2 * eta * (2.0 * ur[i] * ur[i] - gap * lap[i]);
      // eta part
      add(row, i, j - 1, c / (k * k) - d / (2.0 * k));
      add(row, i, j, -2.0 * c / (k * k));
      add(row, i, j + 1, c / (k * k) + d / (2.0 * k));
      if (i == 0) {
        // 2 phi_rr with the mirror phi_{-1} = phi_1; u_r(0) = 0 kills the cross term.
        add(row, 0, j, -4.0 * a / (h * h));
        add(row, 1, j, 4.0 * a / (h * h));
        continue;
      }
      const double r = g.r(i);
      const double b = -2.0 * e2 * eta * gap * ur[i];
      add(row, i - 1, j, a * (1.0 / (h * h) - 1.0 / (2.0 * h * r)));
      add(row, i, j, -2.0 * a / (h * h));
      add(row, i + 1, j, a * (1.0 / (h * h) + 1.0 / (2.0 * h * r)));
      const double cross = b / (4.0 * h * k);
      add(row, i + 1, j + 1, cross);
      add(row, i + 1, j - 1, -cross);
      add(row, i - 1, j + 1, -cross);
      add(row, i - 1, j - 1, cross);
    }
  }

  lu_.factorize(matrix_);
  if (lu_.info() != Eigen::Success) throw SolverError("PotentialSolver: factorization failed");
  const Eigen::VectorXd x = lu_.solve(rhs);
  if (lu_.info() != Eigen::Success || !x.allFinite()) throw SolverError("PotentialSolver: solve failed");
  for (int i = 0; i < n; ++i) {
    for (int j = 1; j < m; ++j) phi(i, j) = x[index(i, j)];
  }
  return {grid_, std::move(phi), u};
}

PotentialField solve_potential(std::shared_ptr<const CylinderGrid> grid, const PlateField& u, const Params& p,
                               bool require_conforming) {
  PotentialSolver solver(std::move(grid));
  return solver.solve(u, p, require_conforming);
}

Vector vertical_field(const PotentialField& phi) {
  const CylinderGrid& cg = *phi.grid;
  const int n = cg.radial().n();
  const int m = cg.m();
  const double k = cg.k();
  Vector out(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double phi_eta = (3.0 * phi.values(i, m) - 4.0 * phi.values(i, m - 1) + phi.values(i, m - 2)) / (2.0 * k);
    out[i] = phi_eta / (1.0 + phi.source.values[i]);
  }
  return out;
}

TraceForce trace_force(const PotentialField& phi, const Params& p) {
  const RadialGrid& g = phi.grid->radial();
  const Vector dz = vertical_field(phi);
  const Vector ur = radial_derivative(g, phi.source.values);
  const Vector top = phi.values.col(phi.grid->m());
  const Vector phi_r = radial_derivative(g, top);
  const double e2 = p.eps * p.eps;
  Vector out(g.size());
  for (int i = 0; i <= g.n(); ++i) {
    const double tangential = phi_r[i] - ur[i] * dz[i];
    out[i] = e2 * tangential * tangential + dz[i] * dz[i];
  }
  return {phi.grid->radial_ptr(), std::move(out)};
}

MaxPrincipleReport check_max_principle(const PotentialField& phi) {
  const CylinderGrid& cg = *phi.grid;
  const int n = cg.radial().n();
  const int m = cg.m();
  const Vector& u = phi.source.values;
  double sup = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= m; ++j) {
      const double z = (1.0 + u[i]) * cg.eta(j) - 1.0;
      sup = std::max(sup, phi.values(i, j) - (1.0 + z - u[i]));
    }
  }
  return {sup, vertical_field(phi).minCoeff()};
}

double boundary_gradient_identity(const PotentialField& phi) {
  const CylinderGrid& cg = *phi.grid;
  const RadialGrid& g = cg.radial();
  const int m = cg.m();
  const Vector dz = vertical_field(phi);
  const Vector ur = radial_derivative(g, phi.source.values);
  const Vector row1 = phi.values.col(m - 1);
  const Vector row2 = phi.values.col(m - 2);
  const Vector phi_r = 2.0 * radial_derivative(g, row1) - radial_derivative(g, row2);
  double worst = 0.0;
  for (int i = 0; i <= g.n(); ++i) {
    const double grad_t = phi_r[i] - ur[i] * dz[i];
    worst = std::max(worst, std::abs(grad_t + ur[i] * dz[i]));
  }
  return worst;
}

void write_potential_csv(std::ostream& out, const PotentialField& phi) {
  const CylinderGrid& cg = *phi.grid;
  out << "r,eta,phi\n";
  for (int i = 0; i <= cg.radial().n(); ++i) {
    for (int j = 0; j <= cg.m(); ++j) {
      out << fmt::format("{:.17g},{:.17g},{:.17g}\n", cg.radial().r(i), cg.eta(j), phi.values(i, j));
    }
  }
}

}  // namespace mems

namespace mems {

double mms_error(int n, double eps, double k, double amp) {
  auto cg = std::make_shared<const CylinderGrid>(n, n);
  const auto g = cg->radial_ptr();
  const PlateField u = PlateField::from(g, [amp](double r) { return amp * (1.0 - r * r); });
  const auto exact = [eps, k](double r, double z) { return std::cyl_bessel_j(0.0, k * r) * std::sinh(eps * k * (1.0 + z)); };
  Params p;
  p.eps = eps;
  PotentialSolver solver(cg);
  const PotentialField phi = solver.solve_dirichlet(u, p, exact);
  double err = 0.0;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      const double z = (1.0 + u.values[i]) * cg->eta(j) - 1.0;
      err = std::max(err, std::abs(phi.values(i, j) - exact(g->r(i), z)));
    }
  }
  return err;
}

std::vector<MmsRow> mms_study(const std::vector<int>& levels, double eps, double k, double amp) {
  std::vector<MmsRow> rows;
  for (std::size_t l = 0; l < levels.size(); ++l) {
    const double e = mms_error(levels[l], eps, k, amp);
    const double order = l == 0 ? std::nan("") : std::log(rows.back().error / e) / std::log(double(levels[l]) / levels[l - 1]);
    rows.push_back({levels[l], e, order});
  }
  return rows;
}

}  // namespace mems
