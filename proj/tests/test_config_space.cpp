#include <doctest.h>

#include <algorithm>
#include <set>

#include "modcash/config_space.hpp"

using namespace modcash;

namespace {
ModuleConfiguration conf(std::initializer_list<int> vals) {
  ModuleConfiguration m;
  int i = 0;
  for (int v : vals) m[i++] = v;
  return m;
}
}  // namespace

TEST_CASE("encode known vectors") {
  CHECK(encode_config(conf({0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0})) == 0);
  CHECK(encode_config(conf({0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1})) == 1);
  CHECK(encode_config(conf({1, 1, 1, 1, 1, 1, 1, 1, 1, 2, 2})) == 4607);
  CHECK(encode_config(conf({1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0})) == 2304);
}

TEST_CASE("decode known ids") {
  CHECK(decode_config(0) == conf({0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}));
  CHECK(decode_config(2) == conf({0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 2}));
  CHECK(decode_config(2304) == conf({1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}));
}

TEST_CASE("roundtrip covers all 4608 ids") {
  std::set<std::string> seen;
  for (int id = 0; id < kNumConfigs; ++id) {
    const ModuleConfiguration m = decode_config(id);
    CHECK(m.valid());
    CHECK(encode_config(m) == id);
    seen.insert(m.to_string());
  }
  CHECK(seen.size() == kNumConfigs);
}

TEST_CASE("confid monotone in each activation") {
  const ModuleConfiguration base = decode_config(1234);
  for (int d = 0; d < kNumModules; ++d) {
    ModuleConfiguration lo = base, hi = base;
    lo[d] = 0;
    hi[d] = kModuleCardinality[d] - 1;
    CHECK(encode_config(lo) < encode_config(hi));
  }
}

TEST_CASE("invalid configurations rejected") {
  CHECK_THROWS_AS(encode_config(conf({3, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0})),
                  std::invalid_argument);
  CHECK_THROWS_AS(encode_config(conf({0, 0, 0, 0, 0, 0, 0, 0, 2, 0, 0})),
                  std::invalid_argument);
  CHECK_THROWS_AS(decode_config(-1), std::invalid_argument);
  CHECK_THROWS_AS(decode_config(4608), std::invalid_argument);
}

TEST_CASE("activation string roundtrip") {
  CHECK(decode_config(2).to_string() == "00000000002");
  CHECK(encode_config(ModuleConfiguration::from_string("10000000000")) == 2304);
  for (int id : {0, 1, 17, 594, 4607})
    CHECK(ModuleConfiguration::from_string(decode_config(id).to_string()) ==
          decode_config(id));
  CHECK_THROWS_AS(ModuleConfiguration::from_string("123"),
                  std::invalid_argument);
}

TEST_CASE("default hyperparameters") {
  const Hyperparameters h = default_hyperparameters(5, 1.0);
  CHECK(h.c1 == doctest::Approx(2.0 / (6.3 * 6.3 + 1.0)).epsilon(1e-12));
  CHECK(h.valid());
  for (double mu_eff : {1.0, 2.0, 4.0, 100.0, 1e6}) {
    const Hyperparameters g = default_hyperparameters(5, mu_eff);
    CHECK(g.valid());
    CHECK(g.cc > 0.0);
    CHECK(g.cc <= 1.0);
    CHECK(g.c1 + g.c_mu <= 1.0 + 1e-15);
  }
}

TEST_CASE("repair rescales c_mu") {
  Hyperparameters h;
  h.c1 = 0.8;
  h.cc = 0.5;
  h.c_mu = 0.7;
  const Hyperparameters r = repair_hyperparameters(h);
  CHECK(r.c1 == doctest::Approx(0.8));
  CHECK(r.c_mu == doctest::Approx(0.2));
  CHECK(r.valid());
}

TEST_CASE("lhs stratification on the real dims") {
  const SearchSpace space = SearchSpace::cash();
  const int n = 250;
  const auto pairs = sample_lhs(space, n, 42);
  REQUIRE(static_cast<int>(pairs.size()) == n);
  // c1 occupies every stratum exactly once (repair only rescales c_mu)
  std::set<int> strata;
  for (const auto& p : pairs) {
    CHECK(p.config.valid());
    CHECK(p.hyper.valid());
    strata.insert(static_cast<int>(std::min(p.hyper.c1, 1.0 - 1e-12) * n));
  }
  CHECK(static_cast<int>(strata.size()) == n);
  CHECK(sample_lhs(space, n, 42) == pairs);  // determinism
  CHECK(sample_lhs(space, 1, 7).size() == 1);
}

TEST_CASE("uniform sampling is valid and deterministic") {
  const SearchSpace space = SearchSpace::cash();
  const auto a = sample_uniform(space, 100, 3);
  const auto b = sample_uniform(space, 100, 3);
  CHECK(a == b);
  for (const auto& p : a) {
    CHECK(p.config.valid());
    CHECK(p.hyper.valid());
  }
}

TEST_CASE("point conversion roundtrip") {
  const SearchSpace cash = SearchSpace::cash();
  CHECK(cash.num_dims() == 14);
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const CandidatePair p = cash.sample_uniform(rng);
    CHECK(cash.to_pair(cash.from_pair(p)) == p);
  }
  const SearchSpace ho = SearchSpace::hyper_only(decode_config(17));
  CHECK(ho.num_dims() == 3);
  const CandidatePair q = ho.sample_uniform(rng);
  CHECK(encode_config(q.config) == 17);
  CHECK(ho.to_pair(ho.from_pair(q)) == q);
}
