#include "ncl/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ncl/kvconfig.hpp"

namespace ncl {

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  double v;
  while (in >> v) out.push_back(v);
  return out;
}

std::string join_doubles(const std::vector<double>& values) {
  std::string out;
  for (double v : values) {
    if (!out.empty()) out += ' ';
    out += format_double(v);
  }
  return out;
}

}  // namespace

const char* to_string(StudyKind kind) {
  switch (kind) {
    case StudyKind::Single: return "single";
    case StudyKind::PassageSequence: return "passage-sequence";
    case StudyKind::SheetSequence: return "sheet-sequence";
    case StudyKind::PoleSequence: return "pole-sequence";
    case StudyKind::SmoothSequence: return "smooth-sequence";
    case StudyKind::EpsilonSweep: return "epsilon-sweep";
    case StudyKind::FindConfig: return "find-config";
  }
  return "?";
}

StudyKind study_kind_from_string(const std::string& name) {
  for (StudyKind k : {StudyKind::Single, StudyKind::PassageSequence, StudyKind::SheetSequence,
                      StudyKind::PoleSequence, StudyKind::SmoothSequence,
                      StudyKind::EpsilonSweep, StudyKind::FindConfig})
    if (name == to_string(k)) return k;
  throw std::invalid_argument("unknown study kind: " + name);
}

SpherePointSet fibonacci_centers(int count) {
  if (count < 1) throw std::invalid_argument("need at least one center");
  SpherePointSet pts;
  const double golden_sq = std::pow((1.0 + std::sqrt(5.0)) / 2.0, 2);
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / count;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double az = 2.0 * std::numbers::pi * i / golden_sq;
    pts.centers.push_back({rho * std::cos(az), rho * std::sin(az), z});
  }
  return pts;
}

double ExperimentConfig::resolved_eps() const {
  if (eps >= 0.0) return eps;
  SpherePointSet pts;
  pts.centers = resolved_centers();
  return 0.5 * epsilon_upper_bound(pts);
}

std::vector<Vec3> ExperimentConfig::resolved_centers() const {
  if (!centers.empty()) return centers;
  return fibonacci_centers(rooms).centers;
}

DomainSpec ExperimentConfig::build_domain(DomainKind stage, double index_value) const {
  if (stage == DomainKind::Ball) return make_ball(r_outer);
  if (stage == DomainKind::Shell) return make_shell(1.0, r_outer);

  SpherePointSet pts;
  pts.centers = resolved_centers();
  double e = resolved_eps();
  if (stage == DomainKind::Fournais && index_value > 0.0) e = index_value;
  DomainSpec s = make_fournais(pts, e, r_outer);
  if (stage == DomainKind::Fournais) return s;

  int n = passage_n;
  if (stage == DomainKind::Passage && index_value > 0.0)
    n = static_cast<int>(std::lround(index_value));
  s = make_passage(s, n);
  if (stage == DomainKind::Passage) return s;

  int m = sheet_m;
  if (stage == DomainKind::Sheet && index_value > 0.0)
    m = static_cast<int>(std::lround(index_value));
  s = make_sheet(s, m);
  if (stage == DomainKind::Sheet) return s;

  int l = pole_l;
  if (stage == DomainKind::Pole && index_value > 0.0)
    l = static_cast<int>(std::lround(index_value));
  s = make_pole(s, l);
  if (stage == DomainKind::Pole) return s;

  double d = smooth_delta;
  if (stage == DomainKind::Smoothed && index_value > 0.0) d = index_value;
  const double w = smooth_width > 0.0 ? smooth_width : 0.4 * d;
  return smooth_domain(s, d, w, 0.0);
}

std::string ExperimentConfig::to_kv() const {
  kv::Block b;
  b.set("study", to_string(study));
  b.set("target", ncl::to_string(target));
  b.set_double("r_outer", r_outer);
  b.set_int("rooms", rooms);
  b.set_int("centers", static_cast<long>(centers.size()));
  for (size_t i = 0; i < centers.size(); ++i) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g", centers[i].x, centers[i].y,
                  centers[i].z);
    b.set("center." + std::to_string(i), buf);
  }
  b.set("eps", eps < 0.0 ? "auto" : format_double(eps));
  b.set_int("n", passage_n);
  b.set_int("m", sheet_m);
  b.set_int("l", pole_l);
  b.set_double("delta", smooth_delta);
  b.set_double("width", smooth_width);
  b.set("h_list", join_doubles(h_list));
  b.set("sweep", join_doubles(sweep));
  b.set_int("k", k);
  b.set_double("tol", tol);
  b.set_int("max_iter", max_iter);
  b.set_int("shift_invert", shift_invert);
  b.set("seed", std::to_string(seed));
  b.set("margin", margin < 0.0 ? "auto" : format_double(margin));
  b.set_double("zero_band_rel", zero_band_rel);
  b.set_int("node_budget", node_budget);
  b.set_int("compute_euler", compute_euler ? 1 : 0);
  b.set_int("compute_betti", compute_betti ? 1 : 0);
  if (!out_dir.empty()) b.set("out_dir", out_dir);
  return kv::format(b);
}

ExperimentConfig ExperimentConfig::from_kv(const std::string& text) {
  const kv::Block b = kv::parse(text);
  ExperimentConfig c;
  c.study = study_kind_from_string(b.get_or("study", "single"));
  c.target = domain_kind_from_string(b.get_or("target", "fournais"));
  c.r_outer = b.get_double_or("r_outer", 1.8);
  c.rooms = static_cast<int>(b.get_int_or("rooms", 2));
  const long nc = b.get_int_or("centers", 0);
  for (long i = 0; i < nc; ++i) {
    std::istringstream in(b.get("center." + std::to_string(i)));
    Vec3 z;
    in >> z.x >> z.y >> z.z;
    c.centers.push_back(z);
  }
  const std::string eps_text = b.get_or("eps", "auto");
  c.eps = eps_text == "auto" ? -1.0 : std::stod(eps_text);
  c.passage_n = static_cast<int>(b.get_int_or("n", 4));
  c.sheet_m = static_cast<int>(b.get_int_or("m", 1));
  c.pole_l = static_cast<int>(b.get_int_or("l", 8));
  c.smooth_delta = b.get_double_or("delta", 0.0);
  c.smooth_width = b.get_double_or("width", 0.0);
  if (b.has("h_list")) c.h_list = parse_double_list(b.get("h_list"));
  if (b.has("sweep")) c.sweep = parse_double_list(b.get("sweep"));
  c.k = static_cast<int>(b.get_int_or("k", 3));
  c.tol = b.get_double_or("tol", 1e-6);
  c.max_iter = static_cast<int>(b.get_int_or("max_iter", 800));
  c.shift_invert = static_cast<int>(b.get_int_or("shift_invert", -1));
  if (b.has("seed")) c.seed = std::stoull(b.get("seed"));
  const std::string margin_text = b.get_or("margin", "auto");
  c.margin = margin_text == "auto" ? -1.0 : std::stod(margin_text);
  c.zero_band_rel = b.get_double_or("zero_band_rel", 1e-12);
  c.node_budget = b.get_int_or("node_budget", 3000000);
  c.compute_euler = b.get_int_or("compute_euler", 0) != 0;
  c.compute_betti = b.get_int_or("compute_betti", 0) != 0;
  c.out_dir = b.get_or("out_dir", "");
  return c;
}

namespace {

ExperimentConfig pin_config(const ExperimentConfig& config, DomainKind stage,
                            double index_value, double h) {
  ExperimentConfig pinned = config;
  pinned.study = StudyKind::Single;
  pinned.target = stage;
  pinned.h_list = {h};
  pinned.sweep.clear();
  if (index_value > 0.0) {
    switch (stage) {
      case DomainKind::Fournais: pinned.eps = index_value; break;
      case DomainKind::Passage: pinned.passage_n = static_cast<int>(std::lround(index_value)); break;
      case DomainKind::Sheet: pinned.sheet_m = static_cast<int>(std::lround(index_value)); break;
      case DomainKind::Pole: pinned.pole_l = static_cast<int>(std::lround(index_value)); break;
      case DomainKind::Smoothed: pinned.smooth_delta = index_value; break;
      default: break;
    }
  }
  return pinned;
}

}  // namespace

namespace {

// Trilinear prolongation of coarse-grid columns (spacing 2h) onto fine nodes.
Eigen::MatrixXd prolong(const VoxelGrid& coarse, const Eigen::MatrixXd& vecs,
                        const VoxelGrid& fine) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(fine.count(), vecs.cols());
  for (int n = 0; n < fine.count(); ++n) {
    const auto& c = fine.nodes[n];
    for (int axis_mask = 0; axis_mask < 8; ++axis_mask) {
      double weight = 1.0;
      int idx[3];
      for (int a = 0; a < 3; ++a) {
        const double pos = 0.5 * c[a];
        const int lo = static_cast<int>(std::floor(pos));
        const double frac = pos - lo;
        const bool hi = (axis_mask >> a) & 1;
        idx[a] = lo + (hi ? 1 : 0);
        weight *= hi ? frac : 1.0 - frac;
      }
      if (weight == 0.0) continue;
      const int32_t cn = coarse.node_at(idx[0], idx[1], idx[2]);
      if (cn >= 0) out.row(n) += weight * vecs.row(cn);
    }
  }
  return out;
}

}  // namespace

Spectrum solve_domain(const DomainSpec& spec, const VoxelGrid& grid,
                      const SolveOptions& options) {
  GridLaplacianOperator op(grid);
  SolveOptions opt = options;
  if (grid.count() > 100000 && opt.initial.rows() == 0) {
    // two-grid warm start: solve at 2h and prolong the Ritz block
    try {
      const VoxelGrid coarse = voxelize(spec, 2.0 * grid.h);
      GridLaplacianOperator cop(coarse);
      SolveOptions copt = options;
      copt.shift_invert = options.shift_invert || coarse.count() > 100000;
      const Spectrum cs = smallest_eigenpairs(cop, copt);
      opt.initial = prolong(coarse, cs.eigenvectors, grid);
    } catch (const std::exception&) {
      // fall back to the seeded random start
    }
  }
  return smallest_eigenpairs(op, opt);
}

ResultRecord run_single(const ExperimentConfig& config, DomainKind stage,
                        double index_value, double h) {
  ResultRecord rec;
  rec.index_value = index_value;
  rec.h = h;
  rec.config_snapshot = pin_config(config, stage, index_value, h).to_kv();

  const auto t0 = std::chrono::steady_clock::now();
  try {
    const DomainSpec spec = config.build_domain(stage, index_value);

    // coarse budget check before touching the lattice
    const long box_side = 2 * (static_cast<long>(spec.bounding_radius() / h) + 2) + 1;
    if (box_side * box_side * box_side > 8 * config.node_budget) {
      rec.skipped = true;
      rec.skip_reason = "over node budget at this h";
      return rec;
    }

    const VoxelGrid grid = voxelize(spec, h);
    rec.node_count = grid.count();
    if (grid.count() > config.node_budget) {
      rec.skipped = true;
      rec.skip_reason = "over node budget at this h";
      return rec;
    }

    SolveOptions opt;
    opt.k = config.k;
    opt.tol = config.tol;
    opt.max_iter = config.max_iter;
    opt.seed = config.seed;
    opt.shift_invert =
        config.shift_invert < 0 ? grid.count() > 100000 : config.shift_invert != 0;
    const Spectrum spec_out = solve_domain(spec, grid, opt);
    rec.eigenvalues = spec_out.eigenvalues;
    rec.residuals = spec_out.residuals;
    rec.solver_converged = spec_out.converged;
    rec.solver_iterations = spec_out.iterations;

    if (config.k >= 2) {
      const double margin = config.margin < 0.0 ? 2.0 * h : config.margin;
      const NodalReport nodal =
          containment_report(grid, spec_out.eigenvector(1), margin, config.zero_band_rel);
      rec.nodal_components = nodal.significant_count;
      rec.verdict = nodal.verdict;
      rec.courant_violation = nodal.courant_violation;
      rec.min_boundary_distance = nodal.min_boundary_distance;
      rec.margin = margin;
    }

    const TopologyReport topo = complement_components(grid, (grid.box_half + 1) * h);
    rec.complement_components = topo.complement_components;
    rec.j_observed = topo.j_observed;
    rec.connectivity_unresolved = topo.connectivity_unresolved;
    if (config.compute_euler) {
      rec.euler = euler_characteristic(grid);
      rec.has_euler = true;
    }
    if (config.compute_betti && grid.count() <= 32 * 32 * 32) rec.betti = betti_mod2(grid);
  } catch (const std::exception& ex) {
    rec.skipped = true;
    rec.skip_reason = ex.what();
  }
  rec.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

std::vector<ResultRecord> run_sequence(const ExperimentConfig& config) {
  DomainKind stage = config.target;
  std::vector<double> values = config.sweep;

  switch (config.study) {
    case StudyKind::Single:
      values = {-1.0};
      break;
    case StudyKind::PassageSequence:
      stage = DomainKind::Passage;
      if (values.empty()) values = {2, 4, 8};
      break;
    case StudyKind::SheetSequence:
      stage = DomainKind::Sheet;
      if (values.empty()) values = {1, 2, 4};
      break;
    case StudyKind::PoleSequence:
      stage = DomainKind::Pole;
      if (values.empty()) values = {4, 8, 16};
      break;
    case StudyKind::SmoothSequence: {
      stage = DomainKind::Smoothed;
      if (values.empty()) {
        const DomainSpec pole = config.build_domain(DomainKind::Pole, -1.0);
        const double delta0 =
            std::min({1.0 / (2.0 * pole.pole_l), pole.eps / (2.0 * pole.sheet_m),
                      1.0 / (2.0 * pole.passage_n)});
        values = {delta0 / 2.0, delta0 / 4.0, delta0 / 8.0};
      }
      break;
    }
    case StudyKind::EpsilonSweep: {
      stage = DomainKind::Fournais;
      if (values.empty()) {
        SpherePointSet pts;
        pts.centers = config.resolved_centers();
        const double cap = epsilon_upper_bound(pts);
        values = {0.9 * cap, 0.6 * cap, 0.4 * cap, 0.25 * cap, 0.15 * cap};
      }
      break;
    }
    case StudyKind::FindConfig:
      throw std::invalid_argument("find-config runs through find_config()");
  }

  std::vector<ResultRecord> rows;
  for (double value : values)
    for (double h : config.h_list) rows.push_back(run_single(config, stage, value, h));
  return rows;
}

FindResult find_config(const ExperimentConfig& base, const FindSpace& space) {
  FindResult result;
  for (int m_rooms : space.room_counts) {  // documented order: as given
    ExperimentConfig config = base;
    config.rooms = m_rooms;
    config.centers.clear();
    config.r_outer = space.r_outer;
    SpherePointSet pts = fibonacci_centers(m_rooms);
    config.eps = space.eps_fraction * epsilon_upper_bound(pts);
    const double h = space.h_factor * config.eps;
    ResultRecord rec = run_single(config, DomainKind::Fournais, -1.0, h);
    result.log.push_back(rec);
    if (!result.found && !rec.skipped && rec.nodal_components == 2 && rec.verdict) {
      result.found = true;
      result.best = rec;
    }
  }
  return result;
}

namespace {

using nlohmann::json;

json record_to_json(const ResultRecord& r) {
  json j;
  j["config"] = r.config_snapshot;
  j["index_value"] = r.index_value;
  j["h"] = r.h;
  j["skipped"] = r.skipped;
  j["skip_reason"] = r.skip_reason;
  j["eigenvalues"] = r.eigenvalues;
  j["residuals"] = r.residuals;
  j["solver_converged"] = r.solver_converged;
  j["solver_iterations"] = r.solver_iterations;
  j["nodal_components"] = r.nodal_components;
  j["verdict"] = r.verdict;
  j["courant_violation"] = r.courant_violation;
  j["min_boundary_distance"] = r.min_boundary_distance;
  j["margin"] = r.margin;
  j["complement_components"] = r.complement_components;
  j["j_observed"] = r.j_observed;
  j["connectivity_unresolved"] = r.connectivity_unresolved;
  j["euler"] = r.euler;
  j["has_euler"] = r.has_euler;
  j["betti"] = r.betti;
  j["node_count"] = r.node_count;
  j["elapsed_seconds"] = r.elapsed_seconds;
  return j;
}

ResultRecord record_from_json(const json& j) {
  ResultRecord r;
  r.config_snapshot = j.at("config").get<std::string>();
  r.index_value = j.at("index_value").get<double>();
  r.h = j.at("h").get<double>();
  r.skipped = j.at("skipped").get<bool>();
  r.skip_reason = j.at("skip_reason").get<std::string>();
  r.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
  r.residuals = j.at("residuals").get<std::vector<double>>();
  r.solver_converged = j.at("solver_converged").get<bool>();
  r.solver_iterations = j.at("solver_iterations").get<int>();
  r.nodal_components = j.at("nodal_components").get<int>();
  r.verdict = j.at("verdict").get<bool>();
  r.courant_violation = j.at("courant_violation").get<bool>();
  r.min_boundary_distance = j.at("min_boundary_distance").get<double>();
  r.margin = j.at("margin").get<double>();
  r.complement_components = j.at("complement_components").get<int>();
  r.j_observed = j.at("j_observed").get<int>();
  r.connectivity_unresolved = j.at("connectivity_unresolved").get<bool>();
  r.euler = j.at("euler").get<long>();
  r.has_euler = j.at("has_euler").get<bool>();
  r.betti = j.at("betti").get<std::array<int, 3>>();
  r.node_count = j.at("node_count").get<long>();
  r.elapsed_seconds = j.at("elapsed_seconds").get<double>();
  return r;
}

}  // namespace

std::string ResultRecord::to_json() const { return record_to_json(*this).dump(); }

ResultRecord ResultRecord::from_json(const std::string& line) {
  return record_from_json(json::parse(line));
}

void write_csv(const std::vector<ResultRecord>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "index,h,nodes,lambda1,lambda2,lambda3,gap12,gap23,nodal_components,"
         "verdict,min_boundary_distance,margin,complement_components,j_observed,"
         "converged,skipped,elapsed_seconds\r\n";
  for (const ResultRecord& r : rows) {
    auto lam = [&](size_t i) {
      return i < r.eigenvalues.size() ? format_double(r.eigenvalues[i]) : std::string();
    };
    auto gap = [&](size_t i) {
      return i + 1 < r.eigenvalues.size()
                 ? format_double(r.eigenvalues[i + 1] - r.eigenvalues[i])
                 : std::string();
    };
    out << format_double(r.index_value) << ',' << format_double(r.h) << ',' << r.node_count
        << ',' << lam(0) << ',' << lam(1) << ',' << lam(2) << ',' << gap(0) << ',' << gap(1)
        << ',' << r.nodal_components << ',' << (r.verdict ? 1 : 0) << ','
        << format_double(r.min_boundary_distance) << ',' << format_double(r.margin) << ','
        << r.complement_components << ',' << r.j_observed << ','
        << (r.solver_converged ? 1 : 0) << ',' << (r.skipped ? 1 : 0) << ','
        << format_double(r.elapsed_seconds) << "\r\n";
  }
}

namespace {
constexpr const char* kStoreHeader = "{\"schema\":\"ncl-results\",\"version\":1}";
}

void append_record_store(const std::vector<ResultRecord>& rows, const std::string& path) {
  const bool fresh = !std::ifstream(path).good();
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot open " + path);
  if (fresh) out << kStoreHeader << '\n';
  for (const ResultRecord& r : rows) out << r.to_json() << '\n';
}

std::vector<ResultRecord> read_record_store(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != kStoreHeader)
    throw std::runtime_error("record store missing schema header");
  std::vector<ResultRecord> rows;
  while (std::getline(in, line))
    if (!line.empty()) rows.push_back(ResultRecord::from_json(line));
  return rows;
}

namespace {

template <typename T, typename Fn>
void write_vtk(const VoxelGrid& grid, const std::string& path, const std::string& name,
               const std::string& vtk_type, Fn value_at) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  const int side = grid.side();
  const double origin = -grid.box_half * grid.h;
  out << "# vtk DataFile Version 3.0\n"
      << name << "\nASCII\nDATASET STRUCTURED_POINTS\n"
      << "DIMENSIONS " << side << ' ' << side << ' ' << side << '\n'
      << "ORIGIN " << origin << ' ' << origin << ' ' << origin << '\n'
      << "SPACING " << grid.h << ' ' << grid.h << ' ' << grid.h << '\n'
      << "POINT_DATA " << static_cast<long>(side) * side * side << '\n'
      << "SCALARS " << name << ' ' << vtk_type << " 1\nLOOKUP_TABLE default\n";
  for (int k = -grid.box_half; k <= grid.box_half; ++k)
    for (int j = -grid.box_half; j <= grid.box_half; ++j)
      for (int i = -grid.box_half; i <= grid.box_half; ++i) {
        const int32_t n = grid.node_at(i, j, k);
        out << (n >= 0 ? value_at(n) : T(0)) << '\n';
      }
}

}  // namespace

void write_vtk_scalar(const VoxelGrid& grid, const std::vector<double>& values,
                      const std::string& path, const std::string& field_name) {
  write_vtk<double>(grid, path, field_name, "double",
                    [&](int32_t n) { return values[n]; });
}

void write_vtk_labels(const VoxelGrid& grid, const std::vector<int>& labels,
                      const std::string& path, const std::string& field_name) {
  write_vtk<int>(grid, path, field_name, "int",
                 [&](int32_t n) { return labels[n] + 1; });
}

}  // namespace ncl
