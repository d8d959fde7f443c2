// turnsolve: generate, solve, validate and render minimum-turn covering
// tour instances on grid graphs and geometric scenes.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "turnsolve/approx.hpp"
#include "turnsolve/exact.hpp"
#include "turnsolve/gen.hpp"
#include "turnsolve/io.hpp"
#include "turnsolve/lp.hpp"
#include "turnsolve/svg.hpp"
#include "turnsolve/validate.hpp"

using namespace turnsolve;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitLimit = 3;

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path);
  if (!in) throw Error(Errc::SyntaxError, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(Errc::SyntaxError, "cannot open '" + path + "' for writing");
  out << content;
}

int worker_count() {
  if (const char* env = std::getenv("TURNSOLVE_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

SolutionFile run_grid_solver(const GridInstance& inst, const std::string& mode,
                             const std::string& goal, const SolverLimits& limits) {
  SolutionFile sol;
  sol.goal = goal;
  if (mode == "approx") {
    ApproxResult res = goal == "tour" ? approx_tour(inst) : approx_cycle_cover(inst);
    sol.solver = "approx";
    sol.cover = std::move(res.cover);
    sol.cost = res.cost;
    sol.bound = res.lp_lower_bound;
    sol.guarantee = res.guarantee;
  } else {
    ExactSolution res = goal == "tour" ? solve_exact_tour(inst, limits)
                                       : solve_exact_cycle_cover(inst, limits);
    sol.solver = "exact";
    sol.cover = std::move(res.cover);
    sol.cost = res.cost;
    sol.bound = res.optimum;
  }
  return sol;
}

int cmd_solve(const std::string& instance_path, const std::string& mode, const std::string& goal,
              const std::string& out_path, const std::string& svg_path, double time_limit,
              int max_pixels) {
  ParsedInstance parsed = parse_instance(read_file(instance_path));
  SolverLimits limits;
  limits.max_pixels = max_pixels;
  if (time_limit > 0) limits.time_limit_seconds = time_limit;

  if (parsed.geo) {
    if (mode != "approx") {
      std::cerr << "exact solving is grid-only; use --mode approx for geometric instances\n";
      return kExitLimit;
    }
    const std::vector<Rat>* pen = parsed.geo_penalty ? &parsed.geo_penalties : nullptr;
    GeoApproxResult res = goal == "tour" ? geo_approx_tour(*parsed.geo, pen)
                                         : geo_approx_cycle_cover(*parsed.geo, pen);
    write_file(out_path, write_geo_solution(res, goal));
    if (!svg_path.empty()) write_file(svg_path, render_svg_geo(*parsed.geo, res));
    return 0;
  }

  const GridInstance& inst = *parsed.grid;
  try {
    if (mode == "both") {
      SolutionFile approx = run_grid_solver(inst, "approx", goal, limits);
      SolutionFile exact = run_grid_solver(inst, "exact", goal, limits);
      write_file(out_path, write_solution(inst, exact) + write_solution(inst, approx));
      if (!svg_path.empty()) write_file(svg_path, render_svg(inst, exact.cover));
      ValidationReport va = validate_cycle_cover(inst, approx.cover);
      ValidationReport ve = validate_cycle_cover(inst, exact.cover);
      if (!va.ok() || !ve.ok()) {
        std::cerr << "validation failed: " << va.summary() << " / " << ve.summary() << "\n";
        return kExitValidation;
      }
      if (exact.cost.total > 0) {
        Rat ratio = approx.cost.total / exact.cost.total;
        std::cerr << "approx/exact ratio " << rat_str(ratio) << "\n";
        if (approx.guarantee && ratio > *approx.guarantee) {
          std::cerr << "approximation exceeded its guarantee\n";
          return kExitValidation;
        }
      }
      return 0;
    }

    SolutionFile sol = run_grid_solver(inst, mode, goal, limits);
    ValidationReport report = validate_cycle_cover(inst, sol.cover);
    write_file(out_path, write_solution(inst, sol));
    if (!svg_path.empty()) write_file(svg_path, render_svg(inst, sol.cover));
    std::cerr << "validation: " << report.summary() << "\n";
    return report.ok() ? 0 : kExitValidation;
  } catch (const Error& e) {
    if (e.code() == Errc::SizeLimitExceeded || e.code() == Errc::TimeLimitExceeded) {
      std::cerr << e.what() << "\n";
      return kExitLimit;
    }
    throw;
  }
}

int cmd_bench(const std::string& kinds_csv, const std::string& sizes_csv, int seeds,
              const std::string& mode, const std::string& goal, const std::string& out_path,
              const std::string& variant_name) {
  std::vector<std::string> kinds;
  {
    std::istringstream in(kinds_csv);
    std::string item;
    while (std::getline(in, item, ',')) kinds.push_back(item);
  }
  std::vector<int> sizes;
  {
    std::istringstream in(sizes_csv);
    std::string item;
    while (std::getline(in, item, ',')) sizes.push_back(std::stoi(item));
  }
  CoverageVariant variant = variant_name == "subset"    ? CoverageVariant::Subset
                            : variant_name == "penalty" ? CoverageVariant::Penalty
                                                        : CoverageVariant::Full;

  struct Job {
    std::string id;
    GenParams params;
  };
  std::vector<Job> jobs;
  for (const std::string& kind : kinds)
    for (int n : sizes)
      for (int seed = 1; seed <= seeds; ++seed) {
        GenParams p;
        p.kind = kind;
        p.n = n;
        p.seed = static_cast<unsigned>(seed);
        p.variant = variant;
        p.kappa = 1;
        p.tau = 1;
        jobs.push_back({kind + "-" + std::to_string(n) + "-s" + std::to_string(seed), p});
      }

  std::vector<std::string> rows(jobs.size());
  std::mutex next_mutex;
  std::size_t next = 0;
  auto work = [&]() {
    while (true) {
      std::size_t mine;
      {
        std::lock_guard<std::mutex> lock(next_mutex);
        if (next >= jobs.size()) return;
        mine = next++;
      }
      const Job& job = jobs[mine];
      std::ostringstream row;
      try {
        GridInstance inst = gen_instance(job.params);
        auto t0 = std::chrono::steady_clock::now();
        Rat cost, bound;
        if (mode == "exact") {
          SolverLimits limits;
          limits.max_pixels = 1000000;
          ExactSolution res = goal == "tour" ? solve_exact_tour(inst, limits)
                                             : solve_exact_cycle_cover(inst, limits);
          cost = res.cost.total;
          bound = res.optimum;
        } else {
          ApproxResult res = goal == "tour" ? approx_tour(inst) : approx_cycle_cover(inst);
          cost = res.cost.total;
          bound = res.lp_lower_bound;
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::ostringstream ratio;
        if (bound > 0) ratio << rat_double(cost / bound);
        row << job.id << "," << inst.size() << "," << mode << "," << rat_str(cost) << ","
            << rat_str(bound) << "," << ratio.str() << "," << secs;
      } catch (const Error& e) {
        row << job.id << ",,,,,,error:" << e.what();
      }
      rows[mine] = row.str();
    }
  };

  int workers = std::min<int>(worker_count(), static_cast<int>(jobs.size()));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();

  std::ostringstream csv;
  csv << "instance,pixels,mode,cost,lp_bound,ratio,seconds\n";
  for (const std::string& row : rows) csv << row << "\n";
  write_file(out_path, csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minimum-turn cycle cover and tour solver"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "generate an instance");
  GenParams gen_params;
  std::string gen_variant = "full";
  std::string gen_kappa = "0", gen_tau = "1", gen_out;
  gen->add_option("--kind", gen_params.kind, "office|random-polyomino|corridor");
  gen->add_option("--n", gen_params.n, "target pixel count");
  gen->add_option("--scale", gen_params.scale, "cell blow-up (random-polyomino)");
  gen->add_option("--seed", gen_params.seed, "random seed");
  gen->add_option("--variant", gen_variant, "full|subset|penalty");
  gen->add_option("--kappa", gen_kappa, "distance weight (decimal)");
  gen->add_option("--tau", gen_tau, "turn weight (decimal)");
  gen->add_option("--out", gen_out, "output file (default stdout)");

  auto* solve = app.add_subcommand("solve", "solve an instance");
  std::string solve_instance, solve_mode = "approx", solve_goal = "cover";
  std::string solve_out, solve_svg;
  double solve_time_limit = 0;
  int solve_max_pixels = 60;
  unsigned solve_seed = 0;
  solve->add_option("instance", solve_instance, "instance file (- for stdin)")->required();
  solve->add_option("--mode", solve_mode, "approx|exact|both");
  solve->add_option("--goal", solve_goal, "cover|tour");
  solve->add_option("--out", solve_out, "solution file (default stdout)");
  solve->add_option("--svg", solve_svg, "also render the solution");
  solve->add_option("--time-limit", solve_time_limit, "seconds (exact solvers)");
  solve->add_option("--max-pixels", solve_max_pixels, "exact solver size cap");
  solve->add_option("--seed", solve_seed, "reserved; the pipeline is deterministic");

  auto* validate = app.add_subcommand("validate", "re-validate a solution file");
  std::string val_instance, val_solution;
  validate->add_option("instance", val_instance)->required();
  validate->add_option("solution", val_solution)->required();

  auto* render = app.add_subcommand("render", "render an instance (and solution) to SVG");
  std::string render_instance, render_solution, render_out;
  render->add_option("instance", render_instance)->required();
  render->add_option("solution", render_solution, "optional solution file");
  render->add_option("--out", render_out, "output SVG (default stdout)");

  auto* lp_cmd = app.add_subcommand("lp", "export the cycle cover LP in LP text format");
  std::string lp_instance, lp_out;
  lp_cmd->add_option("instance", lp_instance)->required();
  lp_cmd->add_option("--out", lp_out, "output file (default stdout)");

  auto* bench = app.add_subcommand("bench", "run a benchmark sweep, emit CSV");
  std::string bench_kinds = "random-polyomino", bench_sizes = "16,36,64";
  std::string bench_mode = "approx", bench_goal = "cover", bench_out, bench_variant = "full";
  int bench_seeds = 3;
  bench->add_option("--kinds", bench_kinds, "comma-separated generator kinds");
  bench->add_option("--sizes", bench_sizes, "comma-separated pixel counts");
  bench->add_option("--seeds", bench_seeds, "seeds per configuration");
  bench->add_option("--mode", bench_mode, "approx|exact");
  bench->add_option("--goal", bench_goal, "cover|tour");
  bench->add_option("--variant", bench_variant, "full|subset|penalty");
  bench->add_option("--out", bench_out, "CSV file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      gen_params.variant = gen_variant == "subset"    ? CoverageVariant::Subset
                           : gen_variant == "penalty" ? CoverageVariant::Penalty
                                                      : CoverageVariant::Full;
      auto kappa = rat_parse(gen_kappa);
      auto tau = rat_parse(gen_tau);
      if (!kappa || !tau) throw Error(Errc::SyntaxError, "bad kappa/tau");
      gen_params.kappa = *kappa;
      gen_params.tau = *tau;
      write_file(gen_out, write_instance(gen_instance(gen_params)));
      return 0;
    }
    if (*solve)
      return cmd_solve(solve_instance, solve_mode, solve_goal, solve_out, solve_svg,
                       solve_time_limit, solve_max_pixels);
    if (*validate) {
      ParsedInstance parsed = parse_instance(read_file(val_instance));
      if (!parsed.grid) {
        std::cerr << "validate expects a grid instance\n";
        return kExitValidation;
      }
      SolutionFile sol = parse_solution(read_file(val_solution));
      ValidationReport report = validate_cycle_cover(*parsed.grid, sol.cover);
      bool cost_matches = report.recomputed_cost.total == sol.cost.total;
      std::cout << "structural: " << report.summary() << "\n";
      std::cout << "cost: recomputed " << rat_str(report.recomputed_cost.total) << " vs stated "
                << rat_str(sol.cost.total) << (cost_matches ? " (match)" : " (MISMATCH)") << "\n";
      if (sol.goal == "tour" && sol.cover.cycles.size() > 1) {
        std::cout << "tour: has " << sol.cover.cycles.size() << " cycles (NOT a tour)\n";
        return kExitValidation;
      }
      return report.ok() && cost_matches ? 0 : kExitValidation;
    }
    if (*render) {
      ParsedInstance parsed = parse_instance(read_file(render_instance));
      if (!parsed.grid) {
        std::cerr << "render expects a grid instance (geometric scenes render via solve --svg)\n";
        return kExitValidation;
      }
      CycleCover cover;
      if (!render_solution.empty()) cover = parse_solution(read_file(render_solution)).cover;
      write_file(render_out, render_svg(*parsed.grid, cover));
      return 0;
    }
    if (*lp_cmd) {
      ParsedInstance parsed = parse_instance(read_file(lp_instance));
      if (!parsed.grid) {
        std::cerr << "lp export expects a grid instance\n";
        return kExitValidation;
      }
      TransitionOracle oracle(*parsed.grid);
      AtomicStripGraph asg = strips_from_grid(*parsed.grid, oracle);
      if (parsed.grid->variant() == CoverageVariant::Penalty) {
        std::vector<Rat> penalties;
        for (const Pixel& p : parsed.grid->pixels()) penalties.push_back(parsed.grid->penalty(p));
        asg = penalty_to_full(asg, penalties);
      }
      write_file(lp_out, lp_to_text(build_cc_lp(asg).lp));
      return 0;
    }
    if (*bench)
      return cmd_bench(bench_kinds, bench_sizes, bench_seeds, bench_mode, bench_goal, bench_out,
                       bench_variant);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (e.code() == Errc::SizeLimitExceeded || e.code() == Errc::TimeLimitExceeded)
      return kExitLimit;
    return 1;
  }
  return 0;
}
