// Copyright 2026 The MMACC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mmacc/accountant.hpp"
#include "mmacc/applications.hpp"
#include "mmacc/errors.hpp"
#include "mmacc/experiments.hpp"
#include "mmacc/matrices.hpp"
#include "mmacc/tail_bounds.hpp"
#include "mmacc/threading.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitUnachievable = 3;

std::string fmt(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

// Output sink: --out file or stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw mmacc::ParseError("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

struct CommonFlags {
  double pld_grid = 1e-4;
  double sens_grid = 1e-3;
  double inverse_grid = 1e-6;
  std::string adjacency = "both";
  int threads = 0;
  std::string out;

  void add_to(CLI::App* cmd, bool with_adjacency = true) {
    cmd->add_option("--pld-grid", pld_grid, "PLD loss grid spacing");
    cmd->add_option("--sens-grid", sens_grid, "sensitivity rounding grid");
    cmd->add_option("--inverse-grid", inverse_grid,
                    "loss inversion / epsilon search grid");
    if (with_adjacency) {
      cmd->add_option("--adjacency", adjacency, "remove, add, or both")
          ->check(CLI::IsMember({"remove", "add", "both"}));
    }
    cmd->add_option("--threads", threads,
                    "worker threads (default: MMACC_THREADS or all cores)");
    cmd->add_option("--out", out, "output file (default: stdout)");
  }

  mmacc::DiscretizationConfig discretization() const {
    mmacc::DiscretizationConfig cfg;
    cfg.pld_grid = pld_grid;
    cfg.sensitivity_grid = sens_grid;
    cfg.inverse_tolerance = inverse_grid;
    return cfg;
  }

  mmacc::AdjacencyMode adjacency_mode() const {
    if (adjacency == "remove") return mmacc::AdjacencyMode::kRemove;
    if (adjacency == "add") return mmacc::AdjacencyMode::kAdd;
    return mmacc::AdjacencyMode::kBoth;
  }

  void apply_threads() const {
    int n = threads;
    if (n <= 0) {
      if (const char* env = std::getenv("MMACC_THREADS")) {
        n = std::atoi(env);
      }
    }
    mmacc::set_thread_count(n);
  }
};

// delta, or an explicit delta1/delta2 split (default: delta/2 each).
struct DeltaFlags {
  double delta = 0.0;
  double delta1 = -1.0;
  double delta2 = -1.0;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--delta", delta, "total failure probability");
    cmd->add_option("--delta1", delta1, "tail-bound failure budget");
    cmd->add_option("--delta2", delta2, "PLD query budget");
  }

  std::pair<double, double> split() const {
    if (delta1 >= 0.0 && delta2 >= 0.0) return {delta1, delta2};
    if (!(delta > 0.0)) {
      throw mmacc::OutOfRangeError(
          "either --delta or both --delta1 and --delta2 are required");
    }
    return {delta / 2.0, delta / 2.0};
  }
};

nlohmann::ordered_json result_to_json(const mmacc::AccountingResult& r) {
  nlohmann::ordered_json j;
  j["epsilon"] = r.epsilon;
  j["delta_total"] = r.delta_total;
  j["delta1"] = r.delta1;
  j["delta2"] = r.delta2;
  j["max_ptilde"] = r.max_ptilde;
  j["max_ptilde_over_p"] = r.max_ptilde_over_p;
  j["unique_rows"] = r.unique_row_count;
  j["rows"] = r.row_count;
  j["runtime_ms"] = r.runtime_ms;
  j["non_adaptive_only"] = r.non_adaptive_only;
  return j;
}

int run(int argc, char** argv) {
  CLI::App app{
      "Amplified (epsilon, delta)-DP accounting for subsampled matrix "
      "mechanisms"};
  app.require_subcommand(1);

  // ---- mmcc ----
  auto mmcc_flags = std::make_shared<CommonFlags>();
  auto mmcc_delta = std::make_shared<DeltaFlags>();
  auto mmcc_opts = std::make_shared<std::tuple<std::string, double, double,
                                               std::int64_t, bool, bool>>();
  CLI::App* cmd_mmcc =
      app.add_subcommand("mmcc", "amplified accounting for a matrix");
  cmd_mmcc->add_option("--matrix", std::get<0>(*mmcc_opts), "CSV matrix file")
      ->required();
  cmd_mmcc->add_option("--p", std::get<1>(*mmcc_opts), "sampling probability")
      ->required();
  cmd_mmcc->add_option("--sigma", std::get<2>(*mmcc_opts), "noise stddev")
      ->required();
  std::get<3>(*mmcc_opts) = 1;
  cmd_mmcc->add_option("--b", std::get<3>(*mmcc_opts),
                       "min-separation (1 = i.i.d. sampling)");
  cmd_mmcc->add_flag("--all-groups", std::get<4>(*mmcc_opts),
                     "worst case over all b sampling groups");
  cmd_mmcc->add_flag("--independent-lower", std::get<5>(*mmcc_opts),
                     "heuristic lower-bound diagnostic (not a guarantee)");
  mmcc_delta->add_to(cmd_mmcc);
  mmcc_flags->add_to(cmd_mmcc);
  cmd_mmcc->callback([=]() {
    mmcc_flags->apply_threads();
    const auto& [path, p, sigma, b, all_groups, independent] = *mmcc_opts;
    mmacc::EncoderMatrix C = mmacc::load_csv(path);
    mmacc::AccountingParams params;
    params.p = p;
    params.sigma = sigma;
    std::tie(params.delta1, params.delta2) = mmcc_delta->split();
    params.b = b;
    params.adjacency = mmcc_flags->adjacency_mode();
    params.discretization = mmcc_flags->discretization();
    mmacc::AccountingResult result;
    if (independent) {
      result = mmacc::mmcc_independent_lower(C, params);
    } else if (all_groups) {
      result = mmacc::generalized_mmcc_all_groups(C, params);
    } else if (b > 1) {
      result = mmacc::generalized_mmcc(C, params);
    } else {
      result = mmacc::mmcc(C, params);
    }
    Output out(mmcc_flags->out);
    out.stream() << result_to_json(result).dump(2) << '\n';
  });

  // ---- tail-bounds ----
  auto tb_flags = std::make_shared<CommonFlags>();
  auto tb_opts = std::make_shared<std::tuple<std::string, double, double,
                                             double>>();
  CLI::App* cmd_tb = app.add_subcommand(
      "tail-bounds", "dump the participation bound table as CSV");
  cmd_tb->add_option("--matrix", std::get<0>(*tb_opts), "CSV matrix file")
      ->required();
  cmd_tb->add_option("--p", std::get<1>(*tb_opts), "sampling probability")
      ->required();
  cmd_tb->add_option("--sigma", std::get<2>(*tb_opts), "noise stddev")
      ->required();
  cmd_tb->add_option("--delta1", std::get<3>(*tb_opts), "failure budget")
      ->required();
  tb_flags->add_to(cmd_tb, /*with_adjacency=*/false);
  cmd_tb->callback([=]() {
    tb_flags->apply_threads();
    const auto& [path, p, sigma, delta1] = *tb_opts;
    mmacc::EncoderMatrix C = mmacc::load_csv(path);
    mmacc::TailBoundTable table =
        mmacc::probability_tail_bounds(C, p, sigma, delta1);
    mmacc::EncoderMatrix values;
    values.rows = table.rows;
    values.cols = table.cols;
    values.entries = table.values;
    Output out(tb_flags->out);
    mmacc::write_csv(values, out.stream());
  });

  // ---- matrix gen ----
  auto gen_opts = std::make_shared<
      std::tuple<std::string, std::int64_t, std::int64_t, std::string>>();
  CLI::App* cmd_matrix = app.add_subcommand("matrix", "matrix utilities");
  cmd_matrix->require_subcommand(1);
  CLI::App* cmd_gen =
      cmd_matrix->add_subcommand("gen", "generate an encoder matrix as CSV");
  cmd_gen
      ->add_option("--kind", std::get<0>(*gen_opts),
                   "binary-tree, prefix-opt, tree-restart, or identity")
      ->required()
      ->check(CLI::IsMember(
          {"binary-tree", "prefix-opt", "tree-restart", "identity"}));
  cmd_gen->add_option("--n", std::get<1>(*gen_opts), "columns")->required();
  std::get<2>(*gen_opts) = 1;
  cmd_gen->add_option("--height", std::get<2>(*gen_opts),
                      "tree height (tree-restart only)");
  cmd_gen->add_option("--out", std::get<3>(*gen_opts),
                      "output file (default: stdout)");
  cmd_gen->callback([=]() {
    const auto& [kind, n, height, out_path] = *gen_opts;
    mmacc::EncoderMatrix m;
    if (kind == "binary-tree") {
      m = mmacc::binary_tree(n);
    } else if (kind == "prefix-opt") {
      m = mmacc::prefix_opt(n);
    } else if (kind == "tree-restart") {
      m = mmacc::tree_restart(n, height);
    } else {
      m = mmacc::identity(n);
    }
    Output out(out_path);
    mmacc::write_csv(m, out.stream());
  });

  // ---- compose-sgd ----
  auto sgd_flags = std::make_shared<CommonFlags>();
  auto sgd_opts =
      std::make_shared<std::tuple<std::int64_t, double, double, double>>();
  CLI::App* cmd_sgd = app.add_subcommand(
      "compose-sgd", "subsampled-Gaussian self-composition baseline");
  cmd_sgd->add_option("--n", std::get<0>(*sgd_opts), "number of rounds")
      ->required();
  cmd_sgd->add_option("--p", std::get<1>(*sgd_opts), "sampling probability")
      ->required();
  cmd_sgd->add_option("--sigma", std::get<2>(*sgd_opts), "noise stddev")
      ->required();
  cmd_sgd->add_option("--delta", std::get<3>(*sgd_opts), "query budget")
      ->required();
  sgd_flags->add_to(cmd_sgd);
  cmd_sgd->callback([=]() {
    sgd_flags->apply_threads();
    const auto& [n, p, sigma, delta] = *sgd_opts;
    mmacc::AccountingParams params;
    params.p = p;
    params.sigma = sigma;
    params.delta1 = 0.0;
    params.delta2 = delta;
    params.adjacency = sgd_flags->adjacency_mode();
    params.discretization = sgd_flags->discretization();
    mmacc::AccountingResult result =
        mmacc::mmcc(mmacc::identity(n), params);
    Output out(sgd_flags->out);
    out.stream() << result_to_json(result).dump(2) << '\n';
  });

  // ---- apps ----
  CLI::App* cmd_apps =
      app.add_subcommand("apps", "further applications of the MoG engine");
  cmd_apps->require_subcommand(1);

  auto li_flags = std::make_shared<CommonFlags>();
  auto li_opts =
      std::make_shared<std::tuple<std::int64_t, double, double, double>>();
  CLI::App* cmd_li = cmd_apps->add_subcommand(
      "last-iterate-linear",
      "last iterate of subsampled noisy SGD on linear losses");
  cmd_li->add_option("--n", std::get<0>(*li_opts), "rounds")->required();
  cmd_li->add_option("--p", std::get<1>(*li_opts), "sampling probability")
      ->required();
  cmd_li->add_option("--sigma", std::get<2>(*li_opts), "per-round noise")
      ->required();
  cmd_li->add_option("--delta", std::get<3>(*li_opts), "delta")->required();
  li_flags->add_to(cmd_li, /*with_adjacency=*/false);
  cmd_li->callback([=]() {
    li_flags->apply_threads();
    const auto& [n, p, sigma, delta] = *li_opts;
    double epsilon = mmacc::last_iterate_linear_epsilon(
        n, p, sigma, delta, li_flags->discretization());
    nlohmann::ordered_json j;
    j["epsilon"] = epsilon;
    j["delta_total"] = delta;
    Output out(li_flags->out);
    out.stream() << j.dump(2) << '\n';
  });

  auto gp_flags = std::make_shared<CommonFlags>();
  auto gp_opts = std::make_shared<std::tuple<std::int64_t, double, double,
                                             std::int64_t, double,
                                             std::int64_t, std::int64_t>>();
  CLI::App* cmd_gp =
      cmd_apps->add_subcommand("group-privacy", "group privacy for DP-SGD");
  cmd_gp->add_option("--k", std::get<0>(*gp_opts), "group size")->required();
  cmd_gp->add_option("--p", std::get<1>(*gp_opts), "sampling probability");
  cmd_gp->add_option("--sigma", std::get<2>(*gp_opts), "noise stddev")
      ->required();
  cmd_gp->add_option("--n", std::get<3>(*gp_opts), "rounds")->required();
  cmd_gp->add_option("--delta", std::get<4>(*gp_opts), "delta")->required();
  std::get<5>(*gp_opts) = 0;
  std::get<6>(*gp_opts) = 0;
  cmd_gp->add_option("--population", std::get<5>(*gp_opts),
                     "dataset size (fixed-batch variant)");
  cmd_gp->add_option("--batch", std::get<6>(*gp_opts),
                     "batch size (fixed-batch variant)");
  gp_flags->add_to(cmd_gp, /*with_adjacency=*/false);
  cmd_gp->callback([=]() {
    gp_flags->apply_threads();
    const auto& [k, p, sigma, n, delta, population, batch] = *gp_opts;
    double epsilon;
    if (population > 0 && batch > 0) {
      epsilon = mmacc::group_privacy_fixed_batch_epsilon(
          k, population, batch, sigma, n, delta, gp_flags->discretization());
    } else {
      epsilon = mmacc::group_privacy_dpsgd_epsilon(
          k, p, sigma, n, delta, gp_flags->discretization());
    }
    nlohmann::ordered_json j;
    j["epsilon"] = epsilon;
    j["delta_total"] = delta;
    Output out(gp_flags->out);
    out.stream() << j.dump(2) << '\n';
  });

  // ---- experiment ----
  CLI::App* cmd_exp =
      app.add_subcommand("experiment", "paper-protocol experiment grids");
  cmd_exp->require_subcommand(1);

  auto tree_flags = std::make_shared<CommonFlags>();
  auto tree_opts =
      std::make_shared<std::tuple<std::vector<double>, int, double>>();
  CLI::App* cmd_tree = cmd_exp->add_subcommand(
      "tree", "binary-tree amplification grid (sigma = c sqrt(log n + 1))");
  std::get<0>(*tree_opts) = {10.0};
  std::get<1>(*tree_opts) = 8;
  std::get<2>(*tree_opts) = 1e-6;
  cmd_tree->add_option("--c", std::get<0>(*tree_opts), "noise multipliers");
  cmd_tree->add_option("--log-n-max", std::get<1>(*tree_opts),
                       "largest n = 2^log-n-max");
  cmd_tree->add_option("--delta", std::get<2>(*tree_opts), "total delta");
  tree_flags->add_to(cmd_tree, /*with_adjacency=*/false);
  cmd_tree->callback([=]() {
    tree_flags->apply_threads();
    const auto& [cs, log_n_max, delta] = *tree_opts;
    auto rows = mmacc::tree_experiment(cs, log_n_max, delta,
                                       tree_flags->discretization());
    Output out(tree_flags->out);
    out.stream() << "c,n,sigma,eps_unamplified,eps_amplified,ratio\n";
    for (const auto& r : rows) {
      out.stream() << fmt(r.c) << ',' << r.n << ',' << fmt(r.sigma) << ','
                   << fmt(r.eps_unamplified) << ',' << fmt(r.eps_amplified)
                   << ',' << fmt(r.ratio) << '\n';
    }
  });

  auto po_flags = std::make_shared<CommonFlags>();
  auto po_opts =
      std::make_shared<std::tuple<std::vector<double>, int, double>>();
  CLI::App* cmd_po = cmd_exp->add_subcommand(
      "prefix-opt", "near-optimal continual counting amplification grid");
  std::get<0>(*po_opts) = {10.0, 20.0, 40.0};
  std::get<1>(*po_opts) = 7;
  std::get<2>(*po_opts) = 1e-6;
  cmd_po->add_option("--c", std::get<0>(*po_opts), "noise multipliers");
  cmd_po->add_option("--log-n-max", std::get<1>(*po_opts),
                     "largest n = 2^log-n-max");
  cmd_po->add_option("--delta", std::get<2>(*po_opts), "total delta");
  po_flags->add_to(cmd_po, /*with_adjacency=*/false);
  cmd_po->callback([=]() {
    po_flags->apply_threads();
    const auto& [cs, log_n_max, delta] = *po_opts;
    auto rows = mmacc::prefix_opt_experiment(cs, log_n_max, delta,
                                             po_flags->discretization());
    Output out(po_flags->out);
    out.stream()
        << "c,n,sigma,col1_norm,eps_unamplified,eps_amplified,ratio\n";
    for (const auto& r : rows) {
      out.stream() << fmt(r.c) << ',' << r.n << ',' << fmt(r.sigma) << ','
                   << fmt(r.column_norm) << ',' << fmt(r.eps_unamplified)
                   << ',' << fmt(r.eps_amplified) << ',' << fmt(r.ratio)
                   << '\n';
    }
  });

  auto tr_flags = std::make_shared<CommonFlags>();
  auto tr_opts = std::make_shared<std::tuple<std::int64_t, std::int64_t,
                                             double, std::vector<double>,
                                             double>>();
  CLI::App* cmd_tr = cmd_exp->add_subcommand(
      "tree-restart", "restarted trees: i.i.d. vs min-separation sampling");
  std::get<0>(*tr_opts) = 128;
  std::get<1>(*tr_opts) = 4;
  std::get<2>(*tr_opts) = 1.0 / 16.0;
  std::get<3>(*tr_opts) = {20.0};
  std::get<4>(*tr_opts) = 1e-6;
  cmd_tr->add_option("--n", std::get<0>(*tr_opts), "steps");
  cmd_tr->add_option("--height", std::get<1>(*tr_opts), "tree height");
  cmd_tr->add_option("--p", std::get<2>(*tr_opts), "sampling probability");
  cmd_tr->add_option("--sigma", std::get<3>(*tr_opts), "noise stddev list");
  cmd_tr->add_option("--delta", std::get<4>(*tr_opts), "total delta");
  tr_flags->add_to(cmd_tr, /*with_adjacency=*/false);
  cmd_tr->callback([=]() {
    tr_flags->apply_threads();
    const auto& [n, height, p, sigmas, delta] = *tr_opts;
    auto rows = mmacc::tree_restart_experiment(n, height, p, sigmas, delta,
                                               tr_flags->discretization());
    Output out(tr_flags->out);
    out.stream() << "sigma,eps_mmcc_iid,eps_banded_minsep\n";
    for (const auto& r : rows) {
      out.stream() << fmt(r.sigma) << ',' << fmt(r.eps_mmcc_iid) << ','
                   << fmt(r.eps_banded_minsep) << '\n';
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const mmacc::UnachievableError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUnachievable;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
