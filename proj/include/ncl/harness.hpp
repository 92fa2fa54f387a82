#ifndef NCL_HARNESS_HPP
#define NCL_HARNESS_HPP

// Experiment orchestration: the four perturbation sequences, the epsilon
// sweep, and the search for a configuration exhibiting the containment
// property. Results go to CSV tables, VTK fields and a newline-delimited
// record store.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ncl/eigensolve.hpp"
#include "ncl/geometry.hpp"
#include "ncl/nodal.hpp"
#include "ncl/topology.hpp"

namespace ncl {

enum class StudyKind {
  Single,
  PassageSequence,
  SheetSequence,
  PoleSequence,
  SmoothSequence,
  EpsilonSweep,
  FindConfig,
};

const char* to_string(StudyKind kind);
StudyKind study_kind_from_string(const std::string& name);

struct ExperimentConfig {
  StudyKind study = StudyKind::Single;
  DomainKind target = DomainKind::Fournais;  // stage built by Single studies

  double r_outer = 1.8;
  int rooms = 2;               // M; centers default to the Fibonacci lattice
  std::vector<Vec3> centers;   // explicit centers override `rooms`
  double eps = -1.0;           // < 0: auto, 0.5 * epsilon_upper_bound
  int passage_n = 4;
  int sheet_m = 1;
  int pole_l = 8;
  double smooth_delta = 0.0;
  double smooth_width = 0.0;   // <= 0: 0.4 * delta

  std::vector<double> h_list = {0.05};
  std::vector<double> sweep;   // swept index values (n, m, l, delta or eps)

  int k = 3;
  double tol = 1e-6;
  int max_iter = 800;
  int shift_invert = -1;  // -1: auto (on for large grids), 0: off, 1: on
  uint64_t seed = 0x9e3779b97f4a7c15ull;
  double margin = -1.0;        // < 0: 2h
  double zero_band_rel = 1e-12;
  long node_budget = 3000000;  // rows above this are skipped, not run
  bool compute_euler = false;
  bool compute_betti = false;
  std::string out_dir;

  std::string to_kv() const;   // round-trips bit-exactly
  static ExperimentConfig from_kv(const std::string& text);

  double resolved_eps() const;           // applies the auto rule
  std::vector<Vec3> resolved_centers() const;
  DomainSpec build_domain(DomainKind stage, double index_value) const;
};

struct ResultRecord {
  std::string config_snapshot;  // pinned config that reproduces this row
  double index_value = 0.0;
  double h = 0.0;
  bool skipped = false;
  std::string skip_reason;

  std::vector<double> eigenvalues;
  std::vector<double> residuals;
  bool solver_converged = false;
  int solver_iterations = 0;

  int nodal_components = 0;
  bool verdict = false;
  bool courant_violation = false;
  double min_boundary_distance = 0.0;
  double margin = 0.0;

  int complement_components = 0;
  int j_observed = 0;
  bool connectivity_unresolved = false;
  long euler = 0;
  bool has_euler = false;
  std::array<int, 3> betti = {-1, -1, -1};

  long node_count = 0;
  double elapsed_seconds = 0.0;

  std::string to_json() const;
  static ResultRecord from_json(const std::string& line);
};

// Deterministic Fibonacci-lattice points on the unit sphere.
SpherePointSet fibonacci_centers(int count);

// Solve on a voxelization of `spec`, warm-starting large grids from a
// two-times-coarser solve (deterministic; the options' seed still governs).
Spectrum solve_domain(const DomainSpec& spec, const VoxelGrid& grid,
                      const SolveOptions& options);

// One row: build the domain stage at `index_value`, voxelize, solve, report.
ResultRecord run_single(const ExperimentConfig& config, DomainKind stage,
                        double index_value, double h);

std::vector<ResultRecord> run_sequence(const ExperimentConfig& config);

struct FindSpace {
  std::vector<int> room_counts = {8, 12, 16};
  double eps_fraction = 0.5;
  double r_outer = 1.8;
  double h_factor = 0.25;  // h = h_factor * eps
};

struct FindResult {
  bool found = false;
  ResultRecord best;
  std::vector<ResultRecord> log;
};

FindResult find_config(const ExperimentConfig& base, const FindSpace& space);

// Output writers.
void write_csv(const std::vector<ResultRecord>& rows, const std::string& path);
void append_record_store(const std::vector<ResultRecord>& rows, const std::string& path);
std::vector<ResultRecord> read_record_store(const std::string& path);
void write_vtk_scalar(const VoxelGrid& grid, const std::vector<double>& values,
                      const std::string& path, const std::string& field_name);
void write_vtk_labels(const VoxelGrid& grid, const std::vector<int>& labels,
                      const std::string& path, const std::string& field_name);

}  // namespace ncl

#endif
