#include "ncl/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace ncl {

void SymOperator::apply_block(const Eigen::MatrixXd& x, Eigen::MatrixXd& y) const {
  y.resize(x.rows(), x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c)
    apply(x.col(c).data(), y.col(c).data());
}

GridLaplacianOperator::GridLaplacianOperator(const VoxelGrid& grid)
    : grid_(&grid), inv_h2_(1.0 / (grid.h * grid.h)) {}

void GridLaplacianOperator::apply(const double* x, double* y) const {
  const auto& offsets = grid_->adj_offsets();
  const auto& adj = grid_->adj();
  const int n = grid_->count();
  const double diag = 6.0 * inv_h2_;
  for (int r = 0; r < n; ++r) {
    double acc = diag * x[r];
    for (int32_t e = offsets[r]; e < offsets[r + 1]; ++e) acc -= inv_h2_ * x[adj[e]];
    y[r] = acc;
  }
}

double SparseMatrixOperator::diagonal(int64_t i) const {
  for (int64_t e = m_->row_offsets[i]; e < m_->row_offsets[i + 1]; ++e)
    if (m_->col_indices[e] == i) return m_->values[e];
  return 0.0;
}

std::vector<double> Spectrum::gaps() const {
  std::vector<double> g;
  for (size_t j = 0; j + 1 < eigenvalues.size(); ++j)
    g.push_back(eigenvalues[j + 1] - eigenvalues[j]);
  return g;
}

std::vector<double> Spectrum::eigenvector(int j) const {
  return {eigenvectors.col(j).data(), eigenvectors.col(j).data() + eigenvectors.rows()};
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Symmetric whitening orthonormalization; drops near-dependent directions.
MatrixXd orthonormalize(const MatrixXd& s) {
  if (s.cols() == 0) return s;
  const MatrixXd gram = s.transpose() * s;
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(gram);
  const double cutoff = 1e-12 * eig.eigenvalues().cwiseAbs().maxCoeff();
  int keep = 0;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i)
    if (eig.eigenvalues()(i) > cutoff) ++keep;
  MatrixXd f(s.cols(), keep);
  int c = 0;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i)
    if (eig.eigenvalues()(i) > cutoff)
      f.col(c++) = eig.eigenvectors().col(i) / std::sqrt(eig.eigenvalues()(i));
  return s * f;
}

// Unpreconditioned CG for A w = r, used by the shift-invert mode.
VectorXd cg_solve(const SymOperator& op, const VectorXd& rhs, double tol, int max_iter) {
  const int64_t n = op.dim();
  VectorXd x = VectorXd::Zero(n), r = rhs, p = rhs, ap(n);
  double rr = r.squaredNorm();
  const double target = tol * tol * rr;
  for (int it = 0; it < max_iter && rr > target; ++it) {
    op.apply(p.data(), ap.data());
    const double pap = p.dot(ap);
    if (pap <= 0.0) break;
    const double alpha = rr / pap;
    x += alpha * p;
    r -= alpha * ap;
    const double rr_new = r.squaredNorm();
    p = r + (rr_new / rr) * p;
    rr = rr_new;
  }
  return x;
}

}  // namespace

Spectrum smallest_eigenpairs(const SymOperator& op, const SolveOptions& opt) {
  const int64_t n = op.dim();
  if (opt.k < 1) throw std::invalid_argument("k must be >= 1");
  if (n < opt.k) throw std::invalid_argument("operator order smaller than k");
  const int block = static_cast<int>(std::min<int64_t>(opt.k + std::max(2, opt.k), n));

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  MatrixXd x(n, block);
  for (int c = 0; c < block; ++c)
    for (int64_t r = 0; r < n; ++r) x(r, c) = uni(rng);
  if (opt.initial.rows() == n && opt.initial.cols() > 0) {
    const int take = static_cast<int>(std::min<Eigen::Index>(opt.initial.cols(), block));
    x.leftCols(take) = opt.initial.leftCols(take);
  }
  x = orthonormalize(x);

  MatrixXd ax, p, ap, w, aw;
  op.apply_block(x, ax);

  VectorXd theta = VectorXd::Zero(block);
  VectorXd resid = VectorXd::Ones(block);
  bool converged = false;
  int iterations = 0;

  for (int iter = 0; iter < opt.max_iter; ++iter) {
    iterations = iter + 1;

    // Rayleigh-Ritz in the current block.
    {
      const MatrixXd g = x.transpose() * ax;
      Eigen::SelfAdjointEigenSolver<MatrixXd> eig(0.5 * (g + g.transpose()));
      theta = eig.eigenvalues();
      x = x * eig.eigenvectors();
      ax = ax * eig.eigenvectors();
    }

    MatrixXd r = ax - x * theta.asDiagonal();
    for (int c = 0; c < x.cols(); ++c) resid(c) = r.col(c).norm();

    const double scale = std::max(std::abs(theta(std::min<int>(opt.k, x.cols()) - 1)), 1e-300);
    bool all_ok = true;
    for (int c = 0; c < std::min<int>(opt.k, x.cols()); ++c)
      if (resid(c) > opt.tol * scale) all_ok = false;
    if (all_ok) {
      converged = true;
      break;
    }

    // Preconditioned residuals.
    w.resize(n, r.cols());
    if (opt.shift_invert) {
      for (int c = 0; c < r.cols(); ++c)
        w.col(c) = cg_solve(op, r.col(c), opt.cg_tol, opt.cg_max_iter);
    } else {
      for (int c = 0; c < r.cols(); ++c)
        for (int64_t i = 0; i < n; ++i) {
          const double d = op.diagonal(i);
          w(i, c) = d > 0.0 ? r(i, c) / d : r(i, c);
        }
    }

    // Project out the current and previous blocks, then orthonormalize.
    w -= x * (x.transpose() * w);
    if (p.cols() > 0) w -= p * ((p.transpose() * p).ldlt().solve(p.transpose() * w));
    w = orthonormalize(w);
    if (w.cols() == 0 && p.cols() == 0) break;  // stagnated

    op.apply_block(w, aw);

    MatrixXd s(n, x.cols() + w.cols() + p.cols());
    MatrixXd as(n, s.cols());
    s << x, w, p;
    as << ax, aw, ap;

    // Whitened generalized Rayleigh-Ritz on [X W P].
    const MatrixXd gram = s.transpose() * s;
    Eigen::SelfAdjointEigenSolver<MatrixXd> geig(0.5 * (gram + gram.transpose()));
    const double cutoff = 1e-12 * geig.eigenvalues().cwiseAbs().maxCoeff();
    int keep = 0;
    for (Eigen::Index i = 0; i < geig.eigenvalues().size(); ++i)
      if (geig.eigenvalues()(i) > cutoff) ++keep;
    MatrixXd f(s.cols(), keep);
    {
      int c = 0;
      for (Eigen::Index i = 0; i < geig.eigenvalues().size(); ++i)
        if (geig.eigenvalues()(i) > cutoff)
          f.col(c++) = geig.eigenvectors().col(i) / std::sqrt(geig.eigenvalues()(i));
    }
    const MatrixXd t = f.transpose() * (s.transpose() * as) * f;
    Eigen::SelfAdjointEigenSolver<MatrixXd> reig(0.5 * (t + t.transpose()));

    const int take = std::min<int>(block, keep);
    const MatrixXd y = f * reig.eigenvectors().leftCols(take);

    // Split the Ritz vectors into the X part and the correction (W,P) part.
    MatrixXd y_tail = y;
    y_tail.topRows(x.cols()).setZero();

    const MatrixXd x_new = s * y;
    const MatrixXd ax_new = as * y;
    p = s * y_tail;
    ap = as * y_tail;
    x = x_new;
    ax = ax_new;
  }

  // Final Rayleigh-Ritz and packaging.
  {
    const MatrixXd g = x.transpose() * ax;
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(0.5 * (g + g.transpose()));
    theta = eig.eigenvalues();
    x = x * eig.eigenvectors();
    ax = ax * eig.eigenvectors();
    const MatrixXd r = ax - x * theta.asDiagonal();
    for (int c = 0; c < x.cols(); ++c) resid(c) = r.col(c).norm();
  }

  Spectrum out;
  const int keep = std::min<int>(opt.k, static_cast<int>(x.cols()));
  out.eigenvalues.assign(theta.data(), theta.data() + keep);
  out.eigenvectors = x.leftCols(keep);
  for (int c = 0; c < keep; ++c) out.eigenvectors.col(c).normalize();
  out.residuals.assign(resid.data(), resid.data() + keep);
  out.converged = converged;
  out.iterations = iterations;
  return out;
}

SimplicityReport simplicity_report(const Spectrum& spec, int j, double tol,
                                   double gap_floor) {
  if (j < 1 || static_cast<size_t>(j + 1) > spec.eigenvalues.size())
    throw std::invalid_argument("simplicity report needs converged values j and j+1");
  const double gap = spec.eigenvalues[j] - spec.eigenvalues[j - 1];
  const double floor = std::max(10.0 * tol * std::abs(spec.eigenvalues[j - 1]), gap_floor);
  return {gap > floor, gap};
}

}  // namespace ncl
