#include <doctest.h>

#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string>

#include "sgf/model.hpp"
#include "sgf/montecarlo.hpp"

namespace {

bool same_bits(const sgf::RateEstimate& a, const sgf::RateEstimate& b) {
  return std::memcmp(&a.mean_bpcu, &b.mean_bpcu, sizeof(double)) == 0 &&
         std::memcmp(&a.std_err, &b.std_err, sizeof(double)) == 0 && a.trials == b.trials &&
         a.admit_prob == b.admit_prob && a.sic_success_prob == b.sic_success_prob;
}

sgf::SystemParams symmetric(double dbm) {
  sgf::SystemParams p;
  p.p_gb_dbm = p.p_gf_dbm = dbm;
  return p;
}

}  // namespace

TEST_SUITE("montecarlo") {

TEST_CASE("rng: uniforms in (0, 1] and pure in (seed, trial, k)") {
  CHECK(sgf::rng::to_unit(0) > 0.0);
  CHECK(sgf::rng::to_unit(~0ULL) == 1.0);
  for (std::uint64_t i = 0; i < 1000; ++i) {
    for (unsigned k = 0; k < 4; ++k) {
      double u = sgf::rng::trial_uniform(42, i, k);
      CHECK(u > 0.0);
      CHECK(u <= 1.0);
      CHECK(u == sgf::rng::trial_uniform(42, i, k));
    }
  }
  CHECK(sgf::rng::trial_uniform(42, 0, 0) != sgf::rng::trial_uniform(43, 0, 0));
  CHECK(sgf::rng::sub_seed(1, 0) != sgf::rng::sub_seed(1, 1));
}

TEST_CASE("draw order is d_GF, d_GB, h_GF, h_GB") {
  sgf::SystemParams p;
  auto d = sgf::draw_channel(p, 9, 17);
  CHECK(d.d_gf_m == sgf::sample_distance(600, sgf::rng::trial_uniform(9, 17, 0)));
  CHECK(d.d_gb_m == sgf::sample_distance(600, sgf::rng::trial_uniform(9, 17, 1)));
  CHECK(d.h2_gf == sgf::sample_fading(1, sgf::rng::trial_uniform(9, 17, 2)));
  CHECK(d.h2_gb == sgf::sample_fading(1, sgf::rng::trial_uniform(9, 17, 3)));
}

TEST_CASE("zero trials rejected") { CHECK_THROWS_AS(sgf::simulate({}, 0, 1), std::invalid_argument); }

TEST_CASE("bit-identical across worker counts") {
  auto p = symmetric(-50);
  auto one = sgf::simulate(p, 100'003, 5, 1);
  for (unsigned jobs : {2u, 3u, 8u}) {
    auto many = sgf::simulate(p, 100'003, 5, jobs);
    CHECK(same_bits(one.gb, many.gb));
    CHECK(same_bits(one.gf, many.gf));
  }
  CHECK(one.gb.trials == 100'003);
}

TEST_CASE("matches a naive single-pass estimate") {
  auto p = symmetric(-50);
  const std::uint64_t n = 50'000;
  double sum_gb = 0, sum_gf = 0, sum_sq = 0;
  long admitted = 0, sic = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    auto o = sgf::evaluate_link(p, sgf::draw_channel(p, 8, i));
    double r = o.admitted ? std::log2(1 + o.gamma_gb) : 0.0;
    sum_gb += r;
    sum_sq += r * r;
    if (o.sic_ok) sum_gf += std::log2(1 + o.gamma_gf);
    admitted += o.admitted;
    sic += o.sic_ok;
  }
  auto r = sgf::simulate(p, n, 8);
  double mean = sum_gb / n;
  CHECK(r.gb.mean_bpcu == doctest::Approx(mean).epsilon(1e-12));
  CHECK(r.gf.mean_bpcu == doctest::Approx(sum_gf / n).epsilon(1e-12));
  double var = (sum_sq - n * mean * mean) / (n - 1);
  CHECK(r.gb.std_err == doctest::Approx(std::sqrt(var / n)).epsilon(1e-8));
  CHECK(r.gb.admit_prob == static_cast<double>(admitted) / n);
  CHECK(r.gf.sic_success_prob == static_cast<double>(sic) / n);
  CHECK(r.gb.admit_prob >= r.gb.sic_success_prob);
}

TEST_CASE("vanishing GB power") {
  sgf::SystemParams p;
  p.p_gb_dbm = -200;
  auto r = sgf::simulate(p, 200'000, 1);
  CHECK(r.gb.mean_bpcu < 1e-6);
  CHECK(r.gf.mean_bpcu < 1e-6);
}

TEST_CASE("standard error scales as 1/sqrt(trials)") {
  // High SNR keeps both per-trial rates light-tailed, so the sample
  // standard deviation is stable already at 1e4 trials.
  auto p = symmetric(20);
  auto small = sgf::simulate(p, 10'000, 21);
  auto large = sgf::simulate(p, 1'000'000, 21);
  for (auto [s, l] : {std::pair{small.gb.std_err, large.gb.std_err}, std::pair{small.gf.std_err, large.gf.std_err}}) {
    CHECK(s / l == doctest::Approx(10.0).epsilon(0.2));
  }
}

TEST_CASE("symmetric admission probability") {
  auto r = sgf::simulate(symmetric(-60), 1'000'000, 4);
  CHECK(std::abs(r.gb.admit_prob - 0.5) < 3 * std::sqrt(0.25 / 1e6));
}

TEST_CASE("GF rate bounded by the unconditioned rate") {
  sgf::SystemParams p;
  p.p_gf_dbm = -70;
  p.p_gb_dbm = -50;
  const std::uint64_t n = 200'000;
  auto r = sgf::simulate(p, n, 6);
  double bound = 0;
  for (std::uint64_t i = 0; i < n; ++i) bound += std::log2(1 + sgf::evaluate_link(p, sgf::draw_channel(p, 6, i)).gamma_gf);
  CHECK(r.gf.mean_bpcu <= bound / n);
}

TEST_CASE("sweep: singleton equals simulate with the derived seed") {
  sgf::SystemParams p;
  auto sweep = sgf::sweep_simulate(p, "rho_gb_db", {25.0}, 50'000, 77);
  REQUIRE(sweep.size() == 1);
  auto q = p;
  q.p_gb_dbm = q.noise_dbm + 25.0;
  auto direct = sgf::simulate(q, 50'000, sgf::rng::sub_seed(77, 0));
  CHECK(same_bits(sweep[0].result.gb, direct.gb));
  CHECK(same_bits(sweep[0].result.gf, direct.gf));
}

TEST_CASE("sweep: unknown axis lists valid names") {
  try {
    sgf::sweep_simulate({}, "bogus", {1.0}, 10, 1);
    FAIL("expected throw");
  } catch (const std::invalid_argument& e) {
    std::string msg = e.what();
    CHECK(msg.find("bogus") != std::string::npos);
    for (const auto& name : sgf::axis_names()) CHECK(msg.find(name) != std::string::npos);
  }
  CHECK_THROWS_AS(sgf::sweep_simulate({}, "rho_gb_db", {}, 10, 1), std::invalid_argument);
}

TEST_CASE("apply_axis") {
  sgf::SystemParams p;
  sgf::apply_axis(p, "rho_gf_db", 30);
  CHECK(p.p_gf_dbm == -60);
  sgf::apply_axis(p, "pathloss_exp", 3.1);
  CHECK(p.pathloss_exp == 3.1);
  sgf::apply_axis(p, "sic_threshold", 2);
  CHECK(p.sic_threshold == 2);
}

TEST_CASE("sweep over rho_GB: GB mean non-decreasing within noise") {
  std::vector<double> values;
  for (double v = 0; v <= 40; v += 5) values.push_back(v);
  auto sweep = sgf::sweep_simulate({}, "rho_gb_db", values, 1'000'000, 1, 2);
  for (std::size_t i = 1; i < sweep.size(); ++i) {
    const auto& a = sweep[i - 1].result.gb;
    const auto& b = sweep[i].result.gb;
    CAPTURE(values[i]);
    CHECK(b.mean_bpcu >= a.mean_bpcu - 3 * std::hypot(a.std_err, b.std_err));
  }
}

TEST_CASE("layer-cake reconstruction of the GB rate") {
  auto p = symmetric(-50);
  const std::uint64_t n = 1'000'000;
  auto sinr = sgf::admitted_gb_sinr(p, n, 13);
  auto r = sgf::simulate(p, n, 13);
  CHECK(static_cast<double>(sinr.size()) == doctest::Approx(r.gb.admit_prob * n));
  double rebuilt = sgf::layer_cake_gb_rate(sinr, n);
  CAPTURE(rebuilt);
  CAPTURE(r.gb.mean_bpcu);
  CHECK(std::abs(rebuilt - r.gb.mean_bpcu) < 0.02 * r.gb.mean_bpcu);
}

}  // TEST_SUITE
