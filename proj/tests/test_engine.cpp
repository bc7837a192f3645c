#include <doctest.h>

#include <cmath>

#include "modcash/engine.hpp"
#include "modcash/pipelines.hpp"

using namespace modcash;

namespace {
CandidatePair pair_for(int conf_id) {
  return default_pair_for(decode_config(conf_id), 5);
}
}  // namespace

TEST_CASE("compute_weights") {
  CHECK(compute_weights(1, 0)[0] == doctest::Approx(1.0));
  CHECK(compute_weights(1, 1)[0] == doctest::Approx(1.0));

  const Eigen::VectorXd uniform = compute_weights(4, 1);
  for (int i = 0; i < 4; ++i) CHECK(uniform[i] == doctest::Approx(0.25));

  // log-rank weights: raw r_i = log(mu + 1/2) - log(i), normalized to sum 1
  const Eigen::VectorXd w = compute_weights(4, 0);
  double raw[4], sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    raw[i] = std::log(4.5) - std::log(i + 1.0);
    sum += raw[i];
  }
  for (int i = 0; i < 4; ++i)
    CHECK(w[i] == doctest::Approx(raw[i] / sum).epsilon(1e-12));
  CHECK(w.sum() == doctest::Approx(1.0).epsilon(1e-12));
  for (int i = 1; i < 4; ++i) CHECK(w[i] <= w[i - 1]);
}

TEST_CASE("init_es population sizing") {
  EsState s = init_es(pair_for(0), 5, 1);
  CHECK(s.lambda() == 8);
  CHECK(s.mu() == 4);
  EsState t = init_es(pair_for(0), 5, 1);
  CHECK(s.mean() == t.mean());
  EsState u = init_es(pair_for(0), 5, 2);
  CHECK(s.mean() != u.mean());
  CHECK((s.mean().cwiseAbs().maxCoeff() <= 5.0));
}

TEST_CASE("mirrored sampling gives exact negated pairs") {
  ModuleConfiguration m = decode_config(0);
  m[2] = 1;  // mirrored sampling
  EsState s = init_es(default_pair_for(m, 5), 5, 3);
  s.budget = 1000000;
  (void)s.ask();
  const auto& z = s.last_base();
  REQUIRE(z.size() == 8);
  for (int k = 0; k < 4; ++k)
    CHECK((z[2 * k + 1] + z[2 * k]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("orthogonal sampling gives orthogonal base blocks") {
  ModuleConfiguration m = decode_config(0);
  m[3] = 1;  // orthogonal sampling
  EsState s = init_es(default_pair_for(m, 5), 5, 3);
  s.budget = 1000000;
  (void)s.ask();
  const auto& z = s.last_base();
  REQUIRE(z.size() == 8);
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = i + 1; j < z.size(); ++j)
      if (i / 5 == j / 5) CHECK(std::fabs(z[i].dot(z[j])) < 1e-9);
}

TEST_CASE("zero learning rates keep the identity covariance") {
  CandidatePair p = pair_for(0);
  p.hyper.c1 = 0.0;
  p.hyper.c_mu = 0.0;
  EsState s = init_es(p, 5, 4);
  s.budget = 1000000;
  const Problem sphere = make_problem(1, 0, 5);
  for (int g = 0; g < 5; ++g) {
    const auto pop = s.ask();
    std::vector<double> fit;
    for (const auto& x : pop) fit.push_back(sphere.evaluate(x));
    s.tell(pop, fit);
  }
  const Eigen::MatrixXd err =
      s.covariance() - Eigen::MatrixXd::Identity(5, 5);
  CHECK(err.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("run determinism and budget accounting") {
  const Problem sphere = make_problem(1, 1, 5);
  const RunRecord a = run(pair_for(0), sphere, sphere.target_for(1e-8), 10000, 7);
  const RunRecord b = run(pair_for(0), sphere, sphere.target_for(1e-8), 10000, 7);
  CHECK(a.to_jsonl() == b.to_jsonl());
  CHECK(a.evaluations <= 10000);
  if (a.hitting_time) {
    CHECK(*a.hitting_time <= 10000);
    CHECK(a.best_f <= a.target);
  }
}

TEST_CASE("trivial targets and tiny budgets") {
  const Problem sphere = make_problem(1, 0, 5);
  // huge target: hit within the first generation
  const RunRecord easy = run(pair_for(0), sphere, 1e12, 10000, 5);
  REQUIRE(easy.hitting_time.has_value());
  CHECK(*easy.hitting_time <= 8);
  // one evaluation, impossible target
  const RunRecord hard = run(pair_for(0), sphere, -1.0, 1, 5);
  CHECK(!hard.hitting_time.has_value());
  CHECK(hard.evaluations <= 1);
}

TEST_CASE("every module smoke-runs within budget") {
  const Problem sphere = make_problem(1, 1, 5);
  for (int id : {1, 2, 4, 8, 16, 32, 64, 128, 256, 594, 1152, 2304, 3458, 4607}) {
    const RunRecord r =
        run(pair_for(id), sphere, sphere.target_for(1e-8), 3000, 11);
    CHECK(r.evaluations <= 3000);
    CHECK(std::isfinite(r.best_f));
  }
}

TEST_CASE("switch_run with identical configs equals run") {
  const Problem sphere = make_problem(1, 1, 5);
  const CandidatePair p = pair_for(0);
  const RunRecord plain = run(p, sphere, sphere.target_for(1e-8), 10000, 13);
  const RunRecord sw =
      switch_run(p, p, sphere.target_for(1e-2), sphere, sphere.target_for(1e-8),
                 10000, 13);
  CHECK(plain.to_jsonl() == sw.to_jsonl());
}

TEST_CASE("switch_run validation and monotonicity") {
  const Problem sphere = make_problem(1, 1, 5);
  const CandidatePair a = pair_for(0);
  const CandidatePair b = pair_for(2304);
  CHECK_THROWS_AS(
      switch_run(a, b, sphere.target_for(1e-8) - 1.0, sphere,
                 sphere.target_for(1e-8), 10000, 1),
      std::invalid_argument);
  const RunRecord at_split =
      run(a, sphere, sphere.target_for(1e-2), 10000, 17);
  const RunRecord sw = switch_run(a, b, sphere.target_for(1e-2), sphere,
                                  sphere.target_for(1e-8), 10000, 17);
  if (at_split.hitting_time && sw.hitting_time)
    CHECK(*sw.hitting_time >= *at_split.hitting_time);
}
