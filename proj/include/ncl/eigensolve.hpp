#ifndef NCL_EIGENSOLVE_HPP
#define NCL_EIGENSOLVE_HPP

// Smallest eigenpairs of a symmetric positive semidefinite operator via a
// locally optimal block preconditioned conjugate-gradient iteration with
// Rayleigh-Ritz extraction. Deterministic for a fixed seed.

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "ncl/grid.hpp"

namespace ncl {

class SymOperator {
 public:
  virtual ~SymOperator() = default;
  virtual int64_t dim() const = 0;
  virtual void apply(const double* x, double* y) const = 0;  // y = A x
  virtual double diagonal(int64_t i) const = 0;

  void apply_block(const Eigen::MatrixXd& x, Eigen::MatrixXd& y) const;
};

// Matrix-free 7-point Laplacian on a voxel grid.
class GridLaplacianOperator : public SymOperator {
 public:
  explicit GridLaplacianOperator(const VoxelGrid& grid);
  int64_t dim() const override { return grid_->count(); }
  void apply(const double* x, double* y) const override;
  double diagonal(int64_t) const override { return 6.0 * inv_h2_; }

 private:
  const VoxelGrid* grid_;
  double inv_h2_;
};

class SparseMatrixOperator : public SymOperator {
 public:
  explicit SparseMatrixOperator(const SparseSymMatrix& m) : m_(&m) {}
  int64_t dim() const override { return m_->order; }
  void apply(const double* x, double* y) const override { m_->apply(x, y); }
  double diagonal(int64_t i) const override;

 private:
  const SparseSymMatrix* m_;
};

struct SolveOptions {
  int k = 3;
  double tol = 1e-6;      // relative residual target
  int max_iter = 800;
  uint64_t seed = 0x9e3779b97f4a7c15ull;
  bool shift_invert = false;  // CG inner solves as preconditioner
  double cg_tol = 1e-2;
  int cg_max_iter = 100;
  // Optional warm-start block (n rows); leading columns of the seeded start
  // block are replaced by it, keeping the run deterministic.
  Eigen::MatrixXd initial;
};

struct Spectrum {
  std::vector<double> eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;      // columns, l2-normalized
  std::vector<double> residuals;     // ||A v - lambda v||
  bool converged = false;
  int iterations = 0;

  std::vector<double> gaps() const;  // lambda_{j+1} - lambda_j
  std::vector<double> eigenvector(int j) const;
};

Spectrum smallest_eigenpairs(const SymOperator& op, const SolveOptions& opt);

struct SimplicityReport {
  bool simple = false;
  double gap = 0.0;
};

// lambda_j is simple iff the gap to lambda_{j+1} clears both the solver
// noise floor and a configured absolute floor. j is 1-based.
SimplicityReport simplicity_report(const Spectrum& spec, int j, double tol,
                                   double gap_floor = 0.0);

}  // namespace ncl

#endif
