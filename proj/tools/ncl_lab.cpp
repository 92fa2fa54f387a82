// ncl-lab: command-line front end for the nodal containment lab.
//
//   oracle    reference eigenvalues and the outer-radius window
//   solve     one domain, one grid spacing: spectrum + nodal + topology
//   sweep     run the study described by a config file
//   find      search the default space for a containment-positive instance
//   topology  complement components / Euler / Betti of a voxelized domain

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ncl/harness.hpp"
#include "ncl/oracles.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ncl::ExperimentConfig load_config(const std::string& path) {
  return path.empty() ? ncl::ExperimentConfig{} : ncl::ExperimentConfig::from_kv(slurp(path));
}

void print_row(const ncl::ResultRecord& r) {
  std::cout << "index=" << r.index_value << " h=" << r.h;
  if (r.skipped) {
    std::cout << " skipped (" << r.skip_reason << ")\n";
    return;
  }
  std::cout << " nodes=" << r.node_count << " lambda=[";
  for (size_t i = 0; i < r.eigenvalues.size(); ++i)
    std::cout << (i ? " " : "") << r.eigenvalues[i];
  std::cout << "] nodal=" << r.nodal_components << " verdict=" << (r.verdict ? "true" : "false")
            << " min_bdist=" << r.min_boundary_distance << " J=" << r.j_observed
            << (r.solver_converged ? "" : " UNCONVERGED") << '\n';
}

void emit(const std::vector<ncl::ResultRecord>& rows, const std::string& out_dir) {
  if (out_dir.empty()) return;
  std::filesystem::create_directories(out_dir);
  ncl::write_csv(rows, out_dir + "/results.csv");
  ncl::append_record_store(rows, out_dir + "/results.jsonl");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"perturbed ball-and-shell spectral lab"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  double h_override = -1.0, margin_override = -1.0;
  long long seed_override = -1;
  auto add_common = [&](CLI::App* cmd) {
    cmd->set_help_flag("--help", "print help");  // frees --h for the spacing
    cmd->add_option("--config", config_path, "key-value config file");
    cmd->add_option("--h", h_override, "grid spacing override");
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--seed", seed_override, "eigensolver seed override");
    cmd->add_option("--margin", margin_override, "containment margin override");
  };

  auto* oracle = app.add_subcommand("oracle", "reference values");
  double r1 = 1.0, r2 = 1.8;
  oracle->add_option("--r1", r1, "inner radius");
  oracle->add_option("--r", r2, "outer radius");

  auto* solve = app.add_subcommand("solve", "single run");
  add_common(solve);
  auto* sweep = app.add_subcommand("sweep", "run the configured study");
  add_common(sweep);
  auto* find = app.add_subcommand("find", "search for a containment-positive config");
  add_common(find);
  auto* topo = app.add_subcommand("topology", "voxel topology report");
  add_common(topo);
  bool with_euler = false, with_betti = false;
  topo->add_flag("--euler", with_euler, "compute the Euler characteristic");
  topo->add_flag("--betti", with_betti, "compute mod-2 Betti numbers (<= 32^3)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (oracle->parsed()) {
      const auto win = ncl::oracles::choose_R_window(r1);
      std::cout << "lambda1(ball r=" << r1
                << ") = " << ncl::oracles::ball_eigenvalue(r1, ncl::oracles::BallMode::Ground).value
                << '\n'
                << "lambda2(ball r=" << r1 << ") = "
                << ncl::oracles::ball_eigenvalue(r1, ncl::oracles::BallMode::FirstExcited).value
                << '\n'
                << "lambda1(shell " << r1 << ".." << r2
                << ") = " << ncl::oracles::shell_ground_eigenvalue(r1, r2).value << '\n'
                << "R window for r1=" << r1 << ": (" << win.first << ", " << win.second << ")\n";
      return 0;
    }

    ncl::ExperimentConfig config = load_config(config_path);
    if (h_override > 0.0) config.h_list = {h_override};
    if (seed_override >= 0) config.seed = static_cast<uint64_t>(seed_override);
    if (margin_override >= 0.0) config.margin = margin_override;
    if (!out_dir.empty()) config.out_dir = out_dir;

    if (solve->parsed()) {
      config.study = ncl::StudyKind::Single;
      const auto rows = ncl::run_sequence(config);
      for (const auto& r : rows) print_row(r);
      emit(rows, config.out_dir);
      return 0;
    }

    if (sweep->parsed()) {
      const auto rows = ncl::run_sequence(config);
      for (const auto& r : rows) print_row(r);
      emit(rows, config.out_dir);
      return 0;
    }

    if (find->parsed()) {
      ncl::FindSpace space;
      const ncl::FindResult result = ncl::find_config(config, space);
      for (const auto& r : result.log) print_row(r);
      if (result.found) {
        std::cout << "found:\n" << result.best.config_snapshot;
      } else {
        std::cout << "not found at this resolution\n";
      }
      emit(result.log, config.out_dir);
      return result.found ? 0 : 2;
    }

    // topology
    const double h = config.h_list.empty() ? 0.05 : config.h_list.front();
    const ncl::DomainSpec spec = config.build_domain(config.target, -1.0);
    const ncl::VoxelGrid grid = ncl::voxelize(spec, h);
    const ncl::TopologyReport rep =
        ncl::complement_components(grid, (grid.box_half + 1) * grid.h);
    std::cout << "h=" << h << " nodes=" << grid.count()
              << " complement_components=" << rep.complement_components
              << " j_observed=" << rep.j_observed
              << (rep.connectivity_unresolved ? " (unresolved at this h)" : "") << '\n';
    if (with_euler) std::cout << "euler=" << ncl::euler_characteristic(grid) << '\n';
    if (with_betti) {
      const auto b = ncl::betti_mod2(grid);
      std::cout << "betti=[" << b[0] << " " << b[1] << " " << b[2] << "]\n";
    }
    return 0;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
}
