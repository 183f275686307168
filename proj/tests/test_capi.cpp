// Exercises the shared-library surface end to end: lifecycle, error paths,
// and the serialized reports the CLI consumes.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <string>

#include <json.hpp>

#include "wst/wst.h"

namespace {

struct Handle {
  wst_instance* p = nullptr;
  ~Handle() { wst_instance_free(p); }
};

struct CStr {
  char* p = nullptr;
  ~CStr() { wst_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

}  // namespace

TEST_CASE("generate, inspect and save an instance") {
  Handle h;
  REQUIRE(wst_instance_generate("binary", 3, "corollary", nullptr, 2.0, 1, &h.p) == WST_OK);
  CHECK(wst_instance_node_count(h.p) == 15);

  double kap = 0.0;
  REQUIRE(wst_kappa(h.p, &kap) == WST_OK);
  CHECK(kap > 1.0);
  CHECK(kap < 1.3);

  std::string tree_path = "capi_tree.txt", weights_path = "capi_weights.txt";
  REQUIRE(wst_instance_save(h.p, tree_path.c_str(), weights_path.c_str()) == WST_OK);
  Handle back;
  REQUIRE(wst_instance_load(tree_path.c_str(), weights_path.c_str(), 2.0, &back.p) == WST_OK);
  CHECK(wst_instance_node_count(back.p) == 15);
  double kap2 = 0.0;
  REQUIRE(wst_kappa(back.p, &kap2) == WST_OK);
  CHECK(kap2 == kap);
  std::remove(tree_path.c_str());
  std::remove(weights_path.c_str());
}

TEST_CASE("distances and tables") {
  Handle h;
  REQUIRE(wst_instance_generate("chain", 3, "constant", nullptr, 2.0, 1, &h.p) == WST_OK);
  double d = 0.0;
  REQUIRE(wst_distance(h.p, 0, 2, 0, &d) == WST_OK);
  CHECK(d == doctest::Approx(std::sqrt(2.0)));
  REQUIRE(wst_distance(h.p, 1, 2, 1, &d) == WST_OK);
  CHECK(d == doctest::Approx(1.0));
  CHECK(wst_distance(h.p, 0, 9, 0, &d) == WST_ERR_UNKNOWN_NODE);
  CHECK(std::string(wst_last_error()).find("UnknownNode") != std::string::npos);

  CStr csv;
  REQUIRE(wst_dist_table_csv(h.p, 16, &csv.p) == WST_OK);
  CHECK(csv.str().rfind("t,s,d,d_I", 0) == 0);
  CHECK(wst_dist_table_csv(h.p, 2, &csv.p) == WST_ERR_SIZE_LIMIT);
}

TEST_CASE("nets CSV") {
  Handle h;
  REQUIRE(wst_instance_generate("chain", 3, "constant", nullptr, 2.0, 1, &h.p) == WST_OK);
  double eps[1] = {1.1};
  CStr csv;
  REQUIRE(wst_nets_csv(h.p, eps, 1, 1, 0, 0, 64, &csv.p) == WST_OK);
  CHECK(csv.str().find("1.1") != std::string::npos);
  CHECK(csv.str().find(",2,1,0;1") != std::string::npos);
}

TEST_CASE("partition and decomposition JSON") {
  Handle h;
  REQUIRE(wst_instance_generate("binary", 4, "corollary", nullptr, 2.0, 1, &h.p) == WST_OK);
  CStr js;
  REQUIRE(wst_partitions_json(h.p, 5, 0, 1, 0, &js.p) == WST_OK);
  auto j = nlohmann::json::parse(js.str());
  CHECK(j["checks"]["nested"].get<bool>());
  CHECK(j["checks"]["minimal"].get<bool>());
  CHECK(j["checks"]["crucial_violations"].get<int>() == 0);
  CHECK(j["levels"].size() == 6);

  CStr dj;
  REQUIRE(wst_decompose_json(h.p, "random:3", 4, 6, &dj.p) == WST_OK);
  auto d = nlohmann::json::parse(dj.str());
  CHECK(d["certificates"]["w4"]["pass"].get<bool>());
  CHECK(d["certificates"]["lb1"]["pass"].get<bool>());
  CHECK(d["certificates"]["components"]["pass"].get<bool>());
  CHECK(d["n"].get<int>() == 4);
}

TEST_CASE("entropy CSV for the localized operator and a component") {
  Handle h;
  REQUIRE(wst_instance_generate("binary", 4, "corollary", nullptr, 2.0, 1, &h.p) == WST_OK);
  int grid[3] = {2, 4, 8};
  CStr csv;
  REQUIRE(wst_entropy_csv(h.p, grid, 3, 256, 1, "W", nullptr, 0, &csv.p) == WST_OK);
  CHECK(csv.str().rfind("n,lower,upper,method_lower,method_upper,slope_fit", 0) == 0);

  CStr comp;
  REQUIRE(wst_entropy_csv(h.p, grid, 3, 256, 1, "W3", "random:5", 6, &comp.p) == WST_OK);
  CHECK(comp.str().find("\n2,") != std::string::npos);

  CHECK(wst_entropy_csv(h.p, grid, 3, 256, 1, "nope", nullptr, 4, &comp.p) == WST_ERR_USAGE);
}

TEST_CASE("verify JSON") {
  Handle h;
  REQUIRE(wst_instance_generate("random", 24, "random-levels", nullptr, 2.0, 9, &h.p) == WST_OK);
  int pass = 0;
  CStr js;
  REQUIRE(wst_verify_json(h.p, 6, 6, 9, &pass, &js.p) == WST_OK);
  CHECK(pass == 1);
  auto j = nlohmann::json::parse(js.str());
  CHECK(j["pass"].get<bool>());
  CHECK(j["checks"].size() >= 8);
}

TEST_CASE("error paths surface messages") {
  wst_instance* p = nullptr;
  CHECK(wst_instance_load("/nonexistent/tree", "/nonexistent/w", 2.0, &p) ==
        WST_ERR_MALFORMED_INPUT);
  CHECK(std::string(wst_last_error()).size() > 0);
  CHECK(wst_instance_generate("hexagon", 3, "corollary", nullptr, 2.0, 1, &p) == WST_ERR_USAGE);
  CHECK(wst_instance_generate("binary", 3, "corollary", nullptr, 7.0, 1, &p) ==
        WST_ERR_MALFORMED_INPUT);

  Handle h;
  REQUIRE(wst_instance_generate("binary", 2, "corollary", nullptr, 2.0, 1, &h.p) == WST_OK);
  double out = 0.0;
  CHECK(wst_epsilon_schedule(0, 2.0, &out) == WST_ERR_USAGE);
  REQUIRE(wst_epsilon_schedule(1, 2.0, &out) == WST_OK);
  CHECK(out == doctest::Approx(1.2011224087864498));
}

TEST_CASE("normalize and auto-scale") {
  Handle h;
  REQUIRE(wst_instance_generate("random", 16, "random-levels", nullptr, 2.0, 4, &h.p) == WST_OK);
  Handle scaled;
  double c0 = 0.0;
  REQUIRE(wst_instance_auto_scale(h.p, 5, &scaled.p, &c0) == WST_OK);
  CHECK(c0 >= 1.0);
  CStr js;
  REQUIRE(wst_partitions_json(scaled.p, 5, 0, 1, 0, &js.p) == WST_OK);
  auto j = nlohmann::json::parse(js.str());
  CHECK(j["checks"]["nets_valid"].get<bool>());

  Handle manual;
  REQUIRE(wst_instance_normalize(h.p, 4.0, &manual.p) == WST_OK);
  double k1 = 0, k2 = 0;
  REQUIRE(wst_kappa(h.p, &k1) == WST_OK);
  REQUIRE(wst_kappa(manual.p, &k2) == WST_OK);
  CHECK(k2 == doctest::Approx(k1 / 2).epsilon(1e-12));
}
