#include "wst/wst.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "errors.hpp"
#include "verify.hpp"

using nlohmann::json;

namespace {

thread_local std::string g_last_error;

wst_status status_of(wst::ErrorCode c) {
  using wst::ErrorCode;
  switch (c) {
    case ErrorCode::malformed_tree: return WST_ERR_MALFORMED_TREE;
    case ErrorCode::malformed_input: return WST_ERR_MALFORMED_INPUT;
    case ErrorCode::unknown_node: return WST_ERR_UNKNOWN_NODE;
    case ErrorCode::not_comparable: return WST_ERR_NOT_COMPARABLE;
    case ErrorCode::size_limit: return WST_ERR_SIZE_LIMIT;
    case ErrorCode::infeasible_net: return WST_ERR_INFEASIBLE_NET;
    case ErrorCode::empty_measure: return WST_ERR_EMPTY_MEASURE;
    case ErrorCode::mismatched_partition: return WST_ERR_MISMATCHED_PARTITION;
    case ErrorCode::invariant_violation: return WST_ERR_INVARIANT;
    case ErrorCode::usage: return WST_ERR_USAGE;
  }
  return WST_ERR_INTERNAL;
}

template <typename F>
wst_status guarded(F&& f) {
  try {
    f();
    return WST_OK;
  } catch (const wst::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return WST_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

struct wst_instance {
  std::shared_ptr<const wst::WeightedTree> wt;
  std::shared_ptr<const wst::LevelPartition> lp;
  std::shared_ptr<const wst::DistanceContext> ctx;

  explicit wst_instance(wst::WeightedTree base) {
    wt = std::make_shared<wst::WeightedTree>(std::move(base));
    lp = std::make_shared<wst::LevelPartition>(wt);
    ctx = std::make_shared<wst::DistanceContext>(lp);
  }
};

namespace {

wst::SparseVec resolve_mu(const wst_instance& inst, const std::string& spec) {
  if (spec.rfind("random:", 0) == 0) {
    uint64_t seed = std::stoull(spec.substr(7));
    wst::Rng rng(seed);
    return wst::random_unit_mu(inst.wt->tree(), rng);
  }
  std::ifstream in(spec);
  if (!in) wst::fail(wst::ErrorCode::malformed_input, "cannot open mu file " + spec);
  std::vector<std::pair<int, double>> ent;
  int node;
  double val;
  while (in >> node >> val) {
    inst.wt->tree().check_node(node);
    ent.emplace_back(node, val);
  }
  return wst::SparseVec::from_pairs(std::move(ent));
}

wst::InstanceSpec::Profile parse_profile(const std::string& p) {
  using P = wst::InstanceSpec::Profile;
  if (p == "corollary") return P::corollary;
  if (p == "constant") return P::constant;
  if (p == "random-levels") return P::random_levels;
  if (p == "custom") return P::custom;
  wst::fail(wst::ErrorCode::usage, "unknown profile: " + p);
}

json chain_to_json(const wst::RootChain& chain, bool certified) {
  json levels = json::array();
  for (int m = 0; m <= chain.depth; ++m) {
    json level;
    level["m"] = m;
    if (m >= 1) level["eps"] = chain.eps[m];
    level["roots"] = chain.roots[m];
    levels.push_back(level);
  }
  return json{{"depth", chain.depth},
              {"q", chain.q},
              {"property4", certified ? "certified" : "unverified"},
              {"levels", levels}};
}

}  // namespace

extern "C" {

const char* wst_version(void) { return "0.1.0"; }

const char* wst_last_error(void) { return g_last_error.c_str(); }

wst_status wst_instance_load(const char* tree_path, const char* weights_path, double q,
                             wst_instance** out) {
  return guarded([&] {
    auto tree = std::make_shared<wst::RootedTree>(wst::read_tree_file(tree_path));
    *out = new wst_instance(wst::read_weights_file(weights_path, tree, q));
  });
}

wst_status wst_instance_generate(const char* shape, int depth_or_size, const char* profile,
                                 const char* weights_path, double q, uint64_t seed,
                                 wst_instance** out) {
  return guarded([&] {
    wst::InstanceSpec spec;
    spec = wst::parse_shape(shape, spec);
    spec.depth = depth_or_size;
    spec.size = depth_or_size;
    spec.profile = parse_profile(profile);
    if (weights_path) spec.weights_file = weights_path;
    spec.q = q;
    spec.seed = seed;
    *out = new wst_instance(wst::generate(spec));
  });
}

void wst_instance_free(wst_instance* inst) { delete inst; }

wst_status wst_instance_normalize(const wst_instance* inst, double c0, wst_instance** out) {
  return guarded([&] { *out = new wst_instance(inst->wt->normalize_c0(c0)); });
}

wst_status wst_instance_auto_scale(const wst_instance* inst, int levels, wst_instance** out,
                                   double* c0_used) {
  return guarded([&] {
    double c0 = wst::feasible_c0(*inst->ctx, levels);
    if (c0_used) *c0_used = c0;
    *out = new wst_instance(inst->wt->normalize_c0(c0));
  });
}

wst_status wst_instance_save(const wst_instance* inst, const char* tree_path,
                             const char* weights_path) {
  return guarded([&] {
    wst::write_tree_file(tree_path, inst->wt->tree());
    wst::write_weights_file(weights_path, *inst->wt);
  });
}

int wst_instance_node_count(const wst_instance* inst) { return inst->wt->tree().node_count(); }

wst_status wst_kappa(const wst_instance* inst, double* out) {
  return guarded([&] { *out = wst::kappa(*inst->wt); });
}

wst_status wst_distance(const wst_instance* inst, int t, int s, int metric, double* out) {
  return guarded([&] {
    switch (metric) {
      case 0: *out = inst->ctx->full_distance(t, s, wst::WeightKind::dyadic); break;
      case 1: *out = inst->ctx->localized_distance(t, s); break;
      case 2: *out = inst->ctx->full_distance(t, s, wst::WeightKind::original); break;
      default: wst::fail(wst::ErrorCode::usage, "metric must be 0, 1 or 2");
    }
  });
}

wst_status wst_dist_table_csv(const wst_instance* inst, int max_nodes, char** out_csv) {
  return guarded([&] {
    const int n = inst->wt->tree().node_count();
    if (n > max_nodes)
      wst::fail(wst::ErrorCode::size_limit,
                "distance table limited to " + std::to_string(max_nodes) + " nodes");
    std::ostringstream os;
    os << "t,s,d,d_I\n";
    for (int t = 0; t < n; ++t)
      for (int s = 0; s < n; ++s)
        os << t << ',' << s << ',' << format_double(inst->ctx->full_distance(t, s)) << ','
           << format_double(inst->ctx->localized_distance(t, s)) << '\n';
    *out_csv = dup_string(os.str());
  });
}

wst_status wst_nets_csv(const wst_instance* inst, const double* eps, int eps_count, int kind,
                        int metric, int mode, int exact_cap, char** out_csv) {
  return guarded([&] {
    std::ostringstream os;
    os << "epsilon,value,exact,centers\n";
    for (int i = 0; i < eps_count; ++i) {
      wst::CoveringResult r;
      auto solve_mode = mode == 0 ? wst::SolveMode::exact : wst::SolveMode::greedy;
      if (kind == 0) {
        r = wst::covering_number(*inst->ctx, eps[i], solve_mode, wst::WeightKind::dyadic, exact_cap);
      } else {
        auto nm = metric == 0 ? wst::NetMetric::d : wst::NetMetric::d_I;
        r = wst::order_net_number(*inst->ctx, eps[i], nm, solve_mode);
      }
      os << format_double(r.epsilon) << ',' << r.value << ',' << (r.exact ? 1 : 0) << ',';
      for (size_t j = 0; j < r.centers.size(); ++j) os << (j ? ";" : "") << r.centers[j];
      os << '\n';
    }
    *out_csv = dup_string(os.str());
  });
}

wst_status wst_epsilon_schedule(int m, double q, double* out) {
  return guarded([&] { *out = wst::epsilon_schedule(m, q); });
}

wst_status wst_partitions_json(const wst_instance* inst, int levels, int mode,
                               int check_minimality, int include_members, char** out_json) {
  return guarded([&] {
    auto solve_mode = mode == 0 ? wst::SolveMode::exact : wst::SolveMode::greedy;
    wst::RootChain chain = wst::construct_root_chain(*inst->ctx, levels, solve_mode);
    auto props = wst::check_chain_properties(*inst->ctx, chain,
                                             check_minimality && chain.property4_certified);
    wst::PartitionTree pt(inst->ctx, chain);
    auto crucial = wst::check_crucial(pt);
    std::string radius_detail;
    bool radius_ok = wst::check_domain_radius(pt, &radius_detail);

    json j = chain_to_json(chain, chain.property4_certified);
    j["checks"] = {
        {"nested", props.nested},
        {"size_bounded", props.size_bounded},
        {"nets_valid", props.nets_valid},
        {"minimal", chain.property4_certified ? json(props.minimal) : json("unverified")},
        {"domain_radius", radius_ok},
        {"crucial_triples", crucial.triples},
        {"crucial_violations", crucial.violations},
    };
    if (include_members) {
      json membership = json::array();
      for (int m = 0; m <= chain.depth; ++m) {
        json row = json::array();
        for (int v = 0; v < inst->wt->tree().node_count(); ++v) row.push_back(pt.domain_root(m, v));
        membership.push_back(row);
      }
      j["domain_root_per_level"] = membership;
    }
    *out_json = dup_string(j.dump(2));
  });
}

wst_status wst_decompose_json(const wst_instance* inst, const char* mu_spec, int n, int levels,
                              char** out_json) {
  return guarded([&] {
    int depth = std::max(levels, n);
    wst::RootChain chain = wst::construct_root_chain(*inst->ctx, depth, wst::SolveMode::exact);
    wst::PartitionTree pt(inst->ctx, chain);
    wst::SparseVec mu = resolve_mu(*inst, mu_spec);
    wst::EssentialTree et = wst::essential_tree(pt, mu, n);
    wst::LightPartition light = wst::light_partition(pt, et);
    auto cert = wst::w4_certificate(pt, light, mu, n);
    auto comp = wst::component_data(pt, light);

    json heavy = json::array();
    for (size_t i = 0; i < et.heavy.size(); ++i)
      heavy.push_back({{"level", et.heavy[i].level},
                       {"root", et.heavy[i].root},
                       {"mass", et.heavy_mass[i]}});
    json terminal = json::array();
    for (const auto& d : et.terminal) terminal.push_back({{"level", d.level}, {"root", d.root}});
    json lights = json::array();
    for (const auto& l : light.lights)
      lights.push_back({{"level", l.domain.level},
                        {"root", l.r_circ},
                        {"r_minus", l.r_minus},
                        {"r_bullet", l.r_bullet},
                        {"generic", l.generic}});
    json mu_json = json::array();
    for (const auto& [node, val] : mu.entries) mu_json.push_back({{"node", node}, {"value", val}});

    json j{{"n", n},
           {"mu", mu_json},
           {"heavy", heavy},
           {"terminal", terminal},
           {"terminal_level_sum", et.terminal_level_sum()},
           {"lights", lights},
           {"certificates",
            {{"w4", {{"norm", cert.norm}, {"bound", cert.bound}, {"pass", cert.pass}}},
             {"lb1",
              {{"essential_size", et.heavy.size()},
               {"pass", static_cast<int>(et.heavy.size()) <= n && et.terminal_level_sum() < n}}},
             {"components",
              {{"generic_checked", comp.checked},
               {"level1_generic", comp.level1_generic},
               {"x_violations", comp.x_violations},
               {"gamma_violations", comp.gamma_violations},
               {"count_violations", comp.count_violations},
               {"pass", comp.pass()}}}}}};
    *out_json = dup_string(j.dump(2));
  });
}

wst_status wst_entropy_csv(const wst_instance* inst, const int* n_grid, int n_count, int budget,
                           uint64_t seed, const char* op, const char* mu_spec, int decomp_n,
                           char** out_csv) {
  return guarded([&] {
    std::vector<int> grid(n_grid, n_grid + n_count);
    std::string name = op ? op : "W";
    std::vector<wst::EntropyReportRow> rows;
    double slope = 0.0;
    if (name == "V" || name == "W") {
      auto rep = wst::entropy_report(*inst->wt, *inst->lp, grid, budget, seed);
      rows = name == "W" ? rep.w_rows : rep.v_rows;
      std::vector<double> uppers;
      for (const auto& r : rows) uppers.push_back(r.upper);
      slope = wst::fit_log2_slope(grid, uppers);
    } else {
      if (!mu_spec || decomp_n < 1)
        wst::fail(wst::ErrorCode::usage, "component operators need mu_spec and decomp_n");
      wst::RootChain chain = wst::construct_root_chain(*inst->ctx, decomp_n, wst::SolveMode::exact);
      wst::PartitionTree pt(inst->ctx, chain);
      wst::SparseVec mu = resolve_mu(*inst, mu_spec);
      wst::EssentialTree et = wst::essential_tree(pt, mu, decomp_n);
      wst::LightPartition light = wst::light_partition(pt, et);
      wst::ColumnOperator cop;
      if (name == "xL")
        cop = wst::operator_xL(pt, light);
      else if (name == "WL")
        cop = wst::operator_W_component(pt, light, 0);
      else if (name == "W1" || name == "W2" || name == "W3")
        cop = wst::operator_W_component(pt, light, name[1] - '0');
      else
        wst::fail(wst::ErrorCode::usage, "unknown operator: " + name);
      wst::EntropyEstimator est(std::move(cop), budget, seed);
      std::vector<double> uppers;
      double cummin = std::numeric_limits<double>::infinity();
      for (int n : grid) {
        auto e = est.estimate(n);
        cummin = std::min(cummin, e.upper);
        rows.push_back({n, e.lower, cummin, e.method_lower, e.method_upper});
        uppers.push_back(cummin);
      }
      bool positive = true;
      for (double u : uppers) positive = positive && u > 0;
      slope = positive && grid.size() >= 2 ? wst::fit_log2_slope(grid, uppers) : 0.0;
    }
    std::ostringstream os;
    os << "n,lower,upper,method_lower,method_upper,slope_fit\n";
    for (const auto& r : rows)
      os << r.n << ',' << format_double(r.lower) << ',' << format_double(r.upper) << ','
         << r.method_lower << ',' << r.method_upper << ',' << format_double(slope) << '\n';
    *out_csv = dup_string(os.str());
  });
}

wst_status wst_verify_json(const wst_instance* inst, int chain_depth, int mu_count, uint64_t seed,
                           int* pass, char** out_json) {
  return guarded([&] {
    wst::VerifyOptions opt;
    if (chain_depth > 0) opt.chain_depth = chain_depth;
    if (mu_count > 0) opt.mu_count = mu_count;
    opt.seed = seed;
    auto rep = wst::run_verify(*inst->wt, opt);
    json checks = json::array();
    for (const auto& c : rep.checks)
      checks.push_back({{"name", c.name},
                        {"pass", c.pass},
                        {"informational", c.informational},
                        {"detail", c.detail}});
    json j{{"node_count", inst->wt->tree().node_count()},
           {"q", inst->wt->q()},
           {"checks", checks},
           {"pass", rep.pass}};
    *pass = rep.pass ? 1 : 0;
    *out_json = dup_string(j.dump(2));
  });
}

void wst_string_free(char* s) { std::free(s); }

}  // extern "C"
