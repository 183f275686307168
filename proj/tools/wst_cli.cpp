// Command-line front end for the wst shared library. Talks to the core
// exclusively through the C API in wst/wst.h.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wst/wst.h"

namespace {

constexpr int kExitVerifyFailed = 12;
constexpr int kExitUsage = 64;

struct InstanceArgs {
  std::string tree_file;
  std::string weights_file;
  std::string shape = "binary";
  int depth = 6;
  int size = 32;
  std::string profile = "corollary";
  std::string custom_weights;
  double q = 2.0;
  uint64_t seed = 1;
  double c0 = 1.0;
  bool auto_scale = false;
  int auto_scale_levels = 8;
};

void add_instance_options(CLI::App* cmd, InstanceArgs& args) {
  cmd->add_option("--tree", args.tree_file, "tree file (one '<id> <parent-or- -' line per node)");
  cmd->add_option("--weights", args.weights_file, "weight file ('<id> <alpha> <sigma>' per line)");
  cmd->add_option("--shape", args.shape, "generator shape: binary|chain|random")
      ->check(CLI::IsMember({"binary", "chain", "random"}));
  cmd->add_option("--depth", args.depth, "binary truncation depth");
  cmd->add_option("--size", args.size, "node count for chain/random shapes");
  cmd->add_option("--profile", args.profile,
                  "weight profile: corollary|constant|random-levels|custom")
      ->check(CLI::IsMember({"corollary", "constant", "random-levels", "custom"}));
  cmd->add_option("--custom-weights", args.custom_weights, "weight file for --profile custom");
  cmd->add_option("--q", args.q, "exponent q in (1,2]");
  cmd->add_option("--seed", args.seed, "generator seed");
  cmd->add_option("--c0", args.c0, "rescale alpha by c0^{-(1-1/q)} after loading");
  cmd->add_flag("--auto-scale", args.auto_scale,
                "rescale so the exact chain construction is feasible");
  cmd->add_option("--auto-scale-levels", args.auto_scale_levels, "chain depth for --auto-scale");
}

[[noreturn]] void die(wst_status st) {
  std::cerr << "error: " << wst_last_error() << "\n";
  std::exit(static_cast<int>(st));
}

wst_instance* open_instance(const InstanceArgs& args) {
  wst_instance* inst = nullptr;
  wst_status st;
  if (!args.tree_file.empty()) {
    if (args.weights_file.empty()) {
      std::cerr << "error: --tree requires --weights\n";
      std::exit(kExitUsage);
    }
    st = wst_instance_load(args.tree_file.c_str(), args.weights_file.c_str(), args.q, &inst);
  } else {
    int param = args.shape == "binary" ? args.depth : args.size;
    st = wst_instance_generate(args.shape.c_str(), param, args.profile.c_str(),
                               args.custom_weights.empty() ? nullptr : args.custom_weights.c_str(),
                               args.q, args.seed, &inst);
  }
  if (st != WST_OK) die(st);
  if (args.c0 != 1.0) {
    wst_instance* scaled = nullptr;
    st = wst_instance_normalize(inst, args.c0, &scaled);
    wst_instance_free(inst);
    if (st != WST_OK) die(st);
    inst = scaled;
  }
  if (args.auto_scale) {
    wst_instance* scaled = nullptr;
    double c0 = 1.0;
    st = wst_instance_auto_scale(inst, args.auto_scale_levels, &scaled, &c0);
    wst_instance_free(inst);
    if (st != WST_OK) die(st);
    std::cerr << "auto-scale: c0 = " << c0 << "\n";
    inst = scaled;
  }
  return inst;
}

std::string resolve_out_path(const std::string& path) {
  const char* dir = std::getenv("WST_OUT_DIR");
  if (!dir || path.empty() || path.find('/') != std::string::npos) return path;
  return std::string(dir) + "/" + path;
}

void emit(const std::string& out_file, const char* text) {
  if (out_file.empty()) {
    std::cout << text;
    return;
  }
  std::string path = resolve_out_path(out_file);
  std::ofstream out(path);
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    std::exit(kExitUsage);
  }
  out << text;
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stoi(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted summation operators on trees: metrics, nets, partitions,\n"
               "heavy/light decompositions and certified entropy-number bounds"};
  app.footer(
      "exit codes: 0 ok; 1..11 library errors (malformed tree/input, unknown node,\n"
      "  not comparable, size limit, infeasible net, empty measure, mismatched\n"
      "  partition, invariant violation, usage, internal); 12 verification failed;\n"
      "  64 bad command line.\n"
      "WST_OUT_DIR prefixes bare -o filenames.");
  app.set_config("--config", "", "flat key=value config file; command line overrides");
  app.require_subcommand(1);

  std::string out_file;

  // ---- gen-tree ----
  auto* gen = app.add_subcommand("gen-tree", "generate an instance and write tree/weight files");
  InstanceArgs gen_args;
  add_instance_options(gen, gen_args);
  std::string out_tree = "tree.txt", out_weights = "weights.txt";
  gen->add_option("--out-tree", out_tree, "output tree file");
  gen->add_option("--out-weights", out_weights, "output weight file");
  gen->callback([&] {
    wst_instance* inst = open_instance(gen_args);
    wst_status st = wst_instance_save(inst, resolve_out_path(out_tree).c_str(),
                                      resolve_out_path(out_weights).c_str());
    double kap = 0.0;
    if (st == WST_OK) st = wst_kappa(inst, &kap);
    int n = wst_instance_node_count(inst);
    wst_instance_free(inst);
    if (st != WST_OK) die(st);
    std::printf("nodes=%d kappa=%.12g tree=%s weights=%s\n", n, kap, out_tree.c_str(),
                out_weights.c_str());
  });

  // ---- dist ----
  auto* dist = app.add_subcommand("dist", "print d / d_I tables as CSV");
  InstanceArgs dist_args;
  add_instance_options(dist, dist_args);
  int dist_cap = 256;
  dist->add_option("--max-nodes", dist_cap, "refuse tables beyond this node count");
  dist->add_option("-o,--out", out_file, "output file (default stdout)");
  dist->callback([&] {
    wst_instance* inst = open_instance(dist_args);
    char* csv = nullptr;
    wst_status st = wst_dist_table_csv(inst, dist_cap, &csv);
    wst_instance_free(inst);
    if (st != WST_OK) die(st);
    emit(out_file, csv);
    wst_string_free(csv);
  });

  // ---- nets ----
  auto* nets = app.add_subcommand("nets", "covering numbers and order nets");
  InstanceArgs nets_args;
  add_instance_options(nets, nets_args);
  std::vector<double> eps_list;
  int grid_count = 0;
  double eps_min = 0.0, eps_max = 0.0;
  std::string metric = "dI", mode = "exact", kind = "order";
  int exact_cap = 64;
  nets->add_option("--eps", eps_list, "epsilon values");
  nets->add_option("--grid", grid_count, "geometric grid size between --eps-min and --eps-max");
  nets->add_option("--eps-min", eps_min, "grid lower end (default kappa/64)");
  nets->add_option("--eps-max", eps_max, "grid upper end (default 2*kappa)");
  nets->add_option("--metric", metric, "d|dI (order nets only)")->check(CLI::IsMember({"d", "dI"}));
  nets->add_option("--mode", mode, "exact|greedy")->check(CLI::IsMember({"exact", "greedy"}));
  nets->add_option("--kind", kind, "cover|order")->check(CLI::IsMember({"cover", "order"}));
  nets->add_option("--exact-cap", exact_cap, "node cap for the exact ball-cover solver");
  nets->add_option("-o,--out", out_file, "output file (default stdout)");
  nets->callback([&] {
    wst_instance* inst = open_instance(nets_args);
    if (grid_count > 0) {
      double kap = 0.0;
      if (wst_status st = wst_kappa(inst, &kap); st != WST_OK) die(st);
      if (eps_max <= 0) eps_max = 2 * kap;
      if (eps_min <= 0) eps_min = kap / 64;
      for (int i = 0; i < grid_count; ++i) {
        double t = grid_count == 1 ? 0.0 : static_cast<double>(i) / (grid_count - 1);
        eps_list.push_back(eps_min * std::pow(eps_max / eps_min, t));
      }
    }
    if (eps_list.empty()) {
      std::cerr << "error: need --eps or --grid\n";
      std::exit(kExitUsage);
    }
    char* csv = nullptr;
    wst_status st = wst_nets_csv(inst, eps_list.data(), static_cast<int>(eps_list.size()),
                                 kind == "cover" ? 0 : 1, metric == "d" ? 0 : 1,
                                 mode == "exact" ? 0 : 1, exact_cap, &csv);
    wst_instance_free(inst);
    if (st != WST_OK) die(st);
    emit(out_file, csv);
    wst_string_free(csv);
  });

  // ---- partitions ----
  auto* parts = app.add_subcommand("partitions", "root chains and tree partitions (JSON)");
  InstanceArgs part_args;
  add_instance_options(parts, part_args);
  int levels = 8;
  std::string pmode = "exact";
  bool members = false, no_minimality = false;
  parts->add_option("--levels", levels, "chain depth M");
  parts->add_option("--mode", pmode, "exact|greedy")->check(CLI::IsMember({"exact", "greedy"}));
  parts->add_flag("--members", members, "include per-level domain membership");
  parts->add_flag("--skip-minimality", no_minimality, "skip the property-(4) replacement test");
  parts->add_option("-o,--out", out_file, "output file (default stdout)");
  parts->callback([&] {
    wst_instance* inst = open_instance(part_args);
    char* json = nullptr;
    wst_status st = wst_partitions_json(inst, levels, pmode == "exact" ? 0 : 1,
                                        no_minimality ? 0 : 1, members ? 1 : 0, &json);
    wst_instance_free(inst);
    if (st != WST_OK) die(st);
    emit(out_file, json);
    wst_string_free(json);
  });

  // ---- decompose ----
  auto* dec = app.add_subcommand("decompose", "heavy/light decomposition for one measure (JSON)");
  InstanceArgs dec_args;
  add_instance_options(dec, dec_args);
  std::string mu = "random:1";
  int dec_n = 8, dec_levels = 0;
  dec->add_option("--mu", mu, "measure: 'random:<seed>' or a '<node> <value>' file");
  dec->add_option("--n", dec_n, "decomposition parameter n");
  dec->add_option("--levels", dec_levels, "chain depth (default max(n, 8))");
  dec->add_option("-o,--out", out_file, "output file (default stdout)");
  dec->callback([&] {
    wst_instance* inst = open_instance(dec_args);
    char* json = nullptr;
    wst_status st = wst_decompose_json(inst, mu.c_str(), dec_n,
                                       dec_levels > 0 ? dec_levels : std::max(dec_n, 8), &json);
    wst_instance_free(inst);
    if (st != WST_OK) die(st);
    emit(out_file, json);
    wst_string_free(json);
  });

  // ---- entropy ----
  auto* ent = app.add_subcommand("entropy", "certified entropy-number bounds (CSV)");
  InstanceArgs ent_args;
  add_instance_options(ent, ent_args);
  std::string n_grid = "4,8,16,32,64", op = "W", ent_mu = "random:1";
  int budget = 4096, ent_decomp_n = 0;
  uint64_t ent_seed = 1;
  ent->add_option("--n-grid", n_grid, "comma-separated entropy indices");
  ent->add_option("--budget", budget, "points budget for nets/packings");
  ent->add_option("--est-seed", ent_seed, "estimator seed (surrogate sampling)");
  ent->add_option("--operator", op, "V|W|W1|W2|W3|WL|xL")
      ->check(CLI::IsMember({"V", "W", "W1", "W2", "W3", "WL", "xL"}));
  ent->add_option("--mu", ent_mu, "measure for component operators");
  ent->add_option("--decomp-n", ent_decomp_n, "n for the light partition of component operators");
  ent->add_option("-o,--out", out_file, "output file (default stdout)");
  ent->callback([&] {
    wst_instance* inst = open_instance(ent_args);
    auto grid = parse_int_list(n_grid);
    char* csv = nullptr;
    wst_status st = wst_entropy_csv(inst, grid.data(), static_cast<int>(grid.size()), budget,
                                    ent_seed, op.c_str(), ent_mu.c_str(),
                                    ent_decomp_n > 0 ? ent_decomp_n : 8, &csv);
    wst_instance_free(inst);
    if (st != WST_OK) die(st);
    emit(out_file, csv);
    wst_string_free(csv);
  });

  // ---- verify ----
  auto* ver = app.add_subcommand("verify", "run the full invariant suite (JSON report)");
  InstanceArgs ver_args;
  add_instance_options(ver, ver_args);
  int chain_depth = 8, mu_count = 20, suite_seeds = 0, suite_size = 32, jobs = 1;
  ver->add_option("--chain-depth", chain_depth, "root chain depth for the partition checks");
  ver->add_option("--mu-count", mu_count, "sampled measures for decomposition checks");
  ver->add_option("--suite-seeds", suite_seeds,
                  "instead: run the suite on this many random-levels instances");
  ver->add_option("--suite-size", suite_size, "node count for --suite-seeds instances");
  ver->add_option("--jobs", jobs, "concurrent workers for --suite-seeds");
  ver->add_option("-o,--out", out_file, "output file (default stdout)");
  ver->callback([&] {
    if (suite_seeds > 0) {
      // independent instances; each worker owns its handle
      std::vector<std::future<int>> futures;
      std::vector<std::string> reports(suite_seeds);
      std::atomic<int> next{0};
      int workers = std::max(1, std::min(jobs, suite_seeds));
      auto work = [&]() {
        int failures = 0;
        for (int i = next.fetch_add(1); i < suite_seeds; i = next.fetch_add(1)) {
          wst_instance* inst = nullptr;
          wst_status st = wst_instance_generate("random", suite_size, "random-levels", nullptr,
                                                ver_args.q, ver_args.seed + i, &inst);
          if (st != WST_OK) {
            ++failures;
            continue;
          }
          int pass = 0;
          char* json = nullptr;
          st = wst_verify_json(inst, chain_depth, mu_count, ver_args.seed + i, &pass, &json);
          wst_instance_free(inst);
          if (st != WST_OK || !pass) ++failures;
          if (json) {
            reports[i] = json;
            wst_string_free(json);
          }
        }
        return failures;
      };
      for (int w = 0; w < workers; ++w) futures.push_back(std::async(std::launch::async, work));
      int failures = 0;
      for (auto& f : futures) failures += f.get();
      std::ostringstream os;
      os << "{\n  \"suite_seeds\": " << suite_seeds << ",\n  \"failures\": " << failures
         << ",\n  \"pass\": " << (failures == 0 ? "true" : "false") << "\n}\n";
      emit(out_file, os.str().c_str());
      if (failures > 0) std::exit(kExitVerifyFailed);
      return;
    }
    wst_instance* inst = open_instance(ver_args);
    int pass = 0;
    char* json = nullptr;
    wst_status st = wst_verify_json(inst, chain_depth, mu_count, ver_args.seed, &pass, &json);
    wst_instance_free(inst);
    if (st != WST_OK) die(st);
    emit(out_file, json);
    wst_string_free(json);
    if (!pass) std::exit(kExitVerifyFailed);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  return 0;
}
