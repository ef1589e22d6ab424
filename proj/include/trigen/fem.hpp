#pragma once

#include <cstdint>
#include <vector>

#include "trigen/config.hpp"
#include "trigen/mesh.hpp"

namespace trigen {

/// Linear system for -Δu = f with u = 0 on all boundary vertices,
/// discretized with piecewise-linear elements. Rows/columns enumerate
/// interior vertices in vertex order; the symmetric matrix is stored fully
/// in CSR with sorted column indices.
struct SparseSystem {
  std::size_t unknowns = 0;
  std::vector<std::int32_t> vertex_to_unknown;  // -1 for boundary vertices
  std::vector<VertexIndex> unknown_to_vertex;
  std::vector<std::size_t> row_ptr;
  std::vector<std::uint32_t> col_idx;
  std::vector<double> values;
  std::vector<double> rhs;
};

/// Assemble stiffness matrix and load vector for constant source `source`.
/// Element kernels run in parallel; the scatter is sequential in triangle
/// order, so the result is bitwise identical to assemble_serial. A mesh
/// whose vertices are all on the boundary yields unknowns == 0.
SparseSystem assemble(const TriMesh& mesh, double source = 1.0);

/// Sequential reference implementation of assemble.
SparseSystem assemble_serial(const TriMesh& mesh, double source = 1.0);

struct FemSolution {
  std::vector<double> nodal_values;  // per vertex; 0 on the boundary
  std::size_t solver_iterations = 0;
  double residual_norm = 0.0;  // final relative residual |b - Ax| / |b|
};

/// Jacobi-preconditioned conjugate gradient. Sequential by design. Stops at
/// relative residual <= tol; throws SolverError when max_iter is exhausted.
/// A zero right-hand side returns the zero solution immediately.
FemSolution solve(const SparseSystem& system, double tol = 1e-10, std::size_t max_iter = 0);

struct ErrorField {
  std::vector<double> eta;  // one indicator per triangle
  double eta_max = 0.0;
};

/// Residual error indicator per triangle:
///   eta_T^2 = elem(T) + 1/2 * h_T * sum_e len(e) * jump_e^2
/// over the interior non-constrained edges e of T, where jump_e is the
/// normal jump of the solution gradient across e. The element term is
/// h^2 (f A)^2 for Paper and h^2 f^2 A for Classical. Paper indicators are
/// floored at h_T * A_T * |f| so the element-term lower bound holds even
/// under rounding. Parallel over triangles, bitwise identical to
/// estimate_serial.
ErrorField estimate(const TriMesh& mesh, const FemSolution& solution, double source = 1.0,
                    EstimatorVariant variant = EstimatorVariant::Paper);

/// Sequential reference implementation of estimate.
ErrorField estimate_serial(const TriMesh& mesh, const FemSolution& solution, double source = 1.0,
                           EstimatorVariant variant = EstimatorVariant::Paper);

/// Indices of all triangles with eta_T strictly above theta * eta_max,
/// ascending. Throws Error when theta is outside (0, 1) or the field is
/// empty.
std::vector<std::uint32_t> mark(const ErrorField& errors, double theta);

}  // namespace trigen
