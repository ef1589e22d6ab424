// Piecewise-linear finite elements for -Δu = f, u = 0 on the boundary:
// assembly, Jacobi-preconditioned conjugate gradients, residual error
// indicator, threshold marking.

#include "trigen/fem.hpp"

#include <algorithm>
#include <cmath>

namespace trigen {

namespace {

// Element stiffness and load for one triangle. K_ij = area * grad_i . grad_j
// where grad_i is the gradient of the hat function of local vertex i;
// the load splits f * area evenly over the three vertices.
struct LocalElement {
  double K[3][3];
  double load_third;
};

inline LocalElement p1_element(const Point2& p0, const Point2& p1, const Point2& p2,
                               double source) {
  // Edge vectors opposite each vertex; grad_i = perp(e_i) / (2 area), and
  // perp preserves dot products, so K_ij = e_i . e_j / (4 area).
  const Point2 e[3] = {p2 - p1, p0 - p2, p1 - p0};
  const double area = tri_area(p0, p1, p2);
  LocalElement el;
  const double inv = 1.0 / (4.0 * area);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) el.K[i][j] = dot(e[i], e[j]) * inv;
  }
  el.load_third = source * area / 3.0;
  return el;
}

SparseSystem make_structure(const TriMesh& mesh) {
  SparseSystem sys;
  const std::size_t nv = mesh.vertices.size();
  if (mesh.boundary_vertex.size() != nv || !mesh.adjacency_valid) {
    throw MeshError("assemble: adjacency not built");
  }

  sys.vertex_to_unknown.assign(nv, -1);
  for (std::size_t v = 0; v < nv; ++v) {
    if (!mesh.boundary_vertex[v]) {
      sys.vertex_to_unknown[v] = std::int32_t(sys.unknown_to_vertex.size());
      sys.unknown_to_vertex.push_back(VertexIndex(v));
    }
  }
  sys.unknowns = sys.unknown_to_vertex.size();
  if (sys.unknowns == 0) {
    sys.row_ptr.assign(1, 0);
    return sys;
  }

  // Column pattern per row from the element connectivity.
  std::vector<std::vector<std::uint32_t>> cols(sys.unknowns);
  for (const Tri& tri : mesh.triangles) {
    for (int i = 0; i < 3; ++i) {
      const std::int32_t ri = sys.vertex_to_unknown[tri[i]];
      if (ri < 0) continue;
      for (int j = 0; j < 3; ++j) {
        const std::int32_t cj = sys.vertex_to_unknown[tri[j]];
        if (cj >= 0) cols[std::size_t(ri)].push_back(std::uint32_t(cj));
      }
    }
  }
  sys.row_ptr.assign(sys.unknowns + 1, 0);
  for (std::size_t r = 0; r < sys.unknowns; ++r) {
    auto& c = cols[r];
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    sys.row_ptr[r + 1] = sys.row_ptr[r] + c.size();
  }
  sys.col_idx.reserve(sys.row_ptr.back());
  for (const auto& c : cols) sys.col_idx.insert(sys.col_idx.end(), c.begin(), c.end());
  sys.values.assign(sys.col_idx.size(), 0.0);
  sys.rhs.assign(sys.unknowns, 0.0);
  return sys;
}

inline std::size_t csr_pos(const SparseSystem& sys, std::size_t row, std::uint32_t col) {
  const auto begin = sys.col_idx.begin() + std::ptrdiff_t(sys.row_ptr[row]);
  const auto end = sys.col_idx.begin() + std::ptrdiff_t(sys.row_ptr[row + 1]);
  const auto it = std::lower_bound(begin, end, col);
  return std::size_t(it - sys.col_idx.begin());
}

// Scatter one element into the global system; the accumulation order over
// triangles is what both assembly variants share.
inline void scatter(SparseSystem& sys, const Tri& tri, const LocalElement& el) {
  for (int i = 0; i < 3; ++i) {
    const std::int32_t ri = sys.vertex_to_unknown[tri[i]];
    if (ri < 0) continue;
    sys.rhs[std::size_t(ri)] += el.load_third;
    for (int j = 0; j < 3; ++j) {
      const std::int32_t cj = sys.vertex_to_unknown[tri[j]];
      if (cj < 0) continue;
      sys.values[csr_pos(sys, std::size_t(ri), std::uint32_t(cj))] += el.K[i][j];
    }
  }
}

}  // namespace

SparseSystem assemble(const TriMesh& mesh, double source) {
  SparseSystem sys = make_structure(mesh);
  if (sys.unknowns == 0) return sys;

  const std::size_t nt = mesh.triangles.size();
  std::vector<LocalElement> local(nt);
#pragma omp parallel for schedule(static)
  for (std::size_t t = 0; t < nt; ++t) {
    const Tri& tri = mesh.triangles[t];
    local[t] = p1_element(mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]],
                          source);
  }
  for (std::size_t t = 0; t < nt; ++t) scatter(sys, mesh.triangles[t], local[t]);
  return sys;
}

SparseSystem assemble_serial(const TriMesh& mesh, double source) {
  SparseSystem sys = make_structure(mesh);
  if (sys.unknowns == 0) return sys;

  for (const Tri& tri : mesh.triangles) {
    const LocalElement el = p1_element(mesh.vertices[tri[0]], mesh.vertices[tri[1]],
                                       mesh.vertices[tri[2]], source);
    scatter(sys, tri, el);
  }
  return sys;
}

FemSolution solve(const SparseSystem& sys, double tol, std::size_t max_iter) {
  FemSolution sol;
  sol.nodal_values.assign(sys.vertex_to_unknown.size(), 0.0);
  const std::size_t n = sys.unknowns;
  if (n == 0) return sol;
  if (max_iter == 0) max_iter = 20 * n;

  const auto spmv = [&sys, n](const std::vector<double>& x, std::vector<double>& y) {
    for (std::size_t r = 0; r < n; ++r) {
      double acc = 0.0;
      for (std::size_t k = sys.row_ptr[r]; k < sys.row_ptr[r + 1]; ++k) {
        acc += sys.values[k] * x[sys.col_idx[k]];
      }
      y[r] = acc;
    }
  };
  const auto dot_v = [n](const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
  };

  const double b_norm = std::sqrt(dot_v(sys.rhs, sys.rhs));
  if (b_norm == 0.0) return sol;  // zero load: zero solution, zero iterations

  std::vector<double> diag(n, 1.0);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t pos = csr_pos(sys, r, std::uint32_t(r));
    if (pos < sys.row_ptr[r + 1] && sys.col_idx[pos] == r && sys.values[pos] > 0.0) {
      diag[r] = sys.values[pos];
    }
  }

  std::vector<double> x(n, 0.0), r(sys.rhs), z(n), p(n), Ap(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
  p = z;
  double rz = dot_v(r, z);

  while (true) {
    const double r_norm = std::sqrt(dot_v(r, r));
    if (r_norm <= tol * b_norm) break;
    if (sol.solver_iterations >= max_iter) {
      throw SolverError("conjugate gradient did not converge: relative residual " +
                            std::to_string(r_norm / b_norm) + " after " +
                            std::to_string(sol.solver_iterations) + " iterations",
                        r_norm / b_norm, sol.solver_iterations);
    }
    spmv(p, Ap);
    const double pAp = dot_v(p, Ap);
    if (!(pAp > 0.0)) {
      throw SolverError("conjugate gradient broke down (matrix not positive definite)",
                        r_norm / b_norm, sol.solver_iterations);
    }
    const double alpha = rz / pAp;
    for (std::size_t i = 0; i < n; ++i) x[i] += alpha * p[i];
    for (std::size_t i = 0; i < n; ++i) r[i] -= alpha * Ap[i];
    for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
    const double rz_next = dot_v(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    ++sol.solver_iterations;

    // Guard against recurrence drift: refresh the residual occasionally.
    if (sol.solver_iterations % 128 == 0) {
      spmv(x, Ap);
      for (std::size_t i = 0; i < n; ++i) r[i] = sys.rhs[i] - Ap[i];
    }
  }

  // Report the true residual, not the recurrence value.
  spmv(x, Ap);
  double true_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = sys.rhs[i] - Ap[i];
    true_sq += d * d;
  }
  sol.residual_norm = std::sqrt(true_sq) / b_norm;

  for (std::size_t i = 0; i < n; ++i) sol.nodal_values[sys.unknown_to_vertex[i]] = x[i];
  return sol;
}

namespace {

inline void estimate_one(const TriMesh& mesh, const std::vector<Point2>& grad,
                         double source, EstimatorVariant variant, std::size_t t,
                         double& eta_out) {
  const Tri& tri = mesh.triangles[t];
  const Point2& a = mesh.vertices[tri[0]];
  const Point2& b = mesh.vertices[tri[1]];
  const Point2& c = mesh.vertices[tri[2]];
  const double area = tri_area(a, b, c);
  const double h = tri_longest_edge(a, b, c);

  const double fa = source * area;
  const double elem = variant == EstimatorVariant::Paper ? h * h * fa * fa
                                                         : h * h * source * source * area;

  double jumps = 0.0;
  for (int k = 0; k < 3; ++k) {
    const std::int32_t n = mesh.neighbors[t][k];
    if (n < 0) continue;
    const VertexIndex u = tri[(k + 1) % 3];
    const VertexIndex v = tri[(k + 2) % 3];
    if (mesh.constrained.contains(u, v)) continue;
    const Point2 e = mesh.vertices[v] - mesh.vertices[u];
    const double len = norm(e);
    const Point2 normal{e.y / len, -e.x / len};
    const Point2 dg = grad[t] - grad[std::size_t(n)];
    const double jump = dot(dg, normal);
    jumps += len * (jump * jump);
  }

  double eta = std::sqrt(elem + 0.5 * h * jumps);
  // The element term alone already gives eta >= h * area * |f|; keep that
  // exact even when the square root dips by an ulp.
  const double lower = h * area * std::fabs(source);
  if (variant == EstimatorVariant::Paper && eta < lower) eta = lower;
  eta_out = eta;
}

inline Point2 solution_gradient(const TriMesh& mesh, const std::vector<double>& u,
                                std::size_t t) {
  const Tri& tri = mesh.triangles[t];
  const Point2& p0 = mesh.vertices[tri[0]];
  const Point2& p1 = mesh.vertices[tri[1]];
  const Point2& p2 = mesh.vertices[tri[2]];
  const double inv = 1.0 / (2.0 * tri_area(p0, p1, p2));
  const Point2 e[3] = {p2 - p1, p0 - p2, p1 - p0};
  Point2 g{0.0, 0.0};
  for (int i = 0; i < 3; ++i) {
    // grad of hat i = perp(e_i) / (2 area) with perp(v) = (-v.y, v.x)
    g.x += u[tri[i]] * (-e[i].y) * inv;
    g.y += u[tri[i]] * e[i].x * inv;
  }
  return g;
}

template <bool Parallel>
ErrorField estimate_impl(const TriMesh& mesh, const FemSolution& solution, double source,
                         EstimatorVariant variant) {
  if (!mesh.adjacency_valid) throw MeshError("estimate: adjacency not built");
  if (solution.nodal_values.size() != mesh.vertices.size()) {
    throw MeshError("estimate: solution size does not match the mesh");
  }
  const std::size_t nt = mesh.triangles.size();
  ErrorField field;
  field.eta.assign(nt, 0.0);

  std::vector<Point2> grad(nt);
  if constexpr (Parallel) {
#pragma omp parallel for schedule(static)
    for (std::size_t t = 0; t < nt; ++t) {
      grad[t] = solution_gradient(mesh, solution.nodal_values, t);
    }
#pragma omp parallel for schedule(static)
    for (std::size_t t = 0; t < nt; ++t) {
      estimate_one(mesh, grad, source, variant, t, field.eta[t]);
    }
  } else {
    for (std::size_t t = 0; t < nt; ++t) {
      grad[t] = solution_gradient(mesh, solution.nodal_values, t);
    }
    for (std::size_t t = 0; t < nt; ++t) {
      estimate_one(mesh, grad, source, variant, t, field.eta[t]);
    }
  }

  for (const double e : field.eta) field.eta_max = std::fmax(field.eta_max, e);
  return field;
}

}  // namespace

ErrorField estimate(const TriMesh& mesh, const FemSolution& solution, double source,
                    EstimatorVariant variant) {
  return estimate_impl<true>(mesh, solution, source, variant);
}

ErrorField estimate_serial(const TriMesh& mesh, const FemSolution& solution, double source,
                           EstimatorVariant variant) {
  return estimate_impl<false>(mesh, solution, source, variant);
}

std::vector<std::uint32_t> mark(const ErrorField& errors, double theta) {
  if (!(theta > 0.0) || !(theta < 1.0)) {
    throw Error("mark: theta must lie strictly between 0 and 1");
  }
  if (errors.eta.empty()) throw Error("mark: empty error field");
  const double threshold = theta * errors.eta_max;
  std::vector<std::uint32_t> marked;
  for (std::size_t t = 0; t < errors.eta.size(); ++t) {
    if (errors.eta[t] > threshold) marked.push_back(std::uint32_t(t));
  }
  return marked;
}

}  // namespace trigen
