#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sgf/model.hpp"
#include "sgf/montecarlo.hpp"

using doctest::Approx;

namespace {

struct Moments {
  double mean = 0.0, m2 = 0.0;
  long n = 0;
  void add(double x) {
    ++n;
    double d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }
  double stderr_() const { return std::sqrt(m2 / (n - 1) / n); }
};

sgf::ChannelDraw draw(std::uint64_t i) { return sgf::draw_channel(sgf::SystemParams{}, 99, i); }

}  // namespace

TEST_SUITE("model") {

TEST_CASE("dbm conversion") {
  CHECK(sgf::dbm_to_mw(0.0) == 1.0);
  CHECK(sgf::dbm_to_mw(20.0) == Approx(100.0).epsilon(1e-15));
  CHECK(sgf::dbm_to_mw(-90.0) == Approx(1e-9).epsilon(1e-15));
}

TEST_CASE("default parameters") {
  sgf::SystemParams p;
  CHECK(p.radius_m == 600.0);
  CHECK(p.pathloss_exp == 2.8);
  CHECK(p.noise_dbm == -90.0);
  CHECK(p.sic_threshold == 1.0);
  CHECK(p.rho_gb_db() == 30.0);
  CHECK(p.rho_gf_db() == 110.0);
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("validation names the field") {
  sgf::SystemParams p;
  p.pathloss_exp = -1.0;
  try {
    p.validate();
    FAIL("expected throw");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("pathloss_exp") != std::string::npos);
  }
  p = {};
  p.sic_threshold = -0.1;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.fading_mean_gf = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.p_gb_dbm = std::nan("");
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("sample_distance") {
  CHECK(sgf::sample_distance(600, 0.0) == 0.0);
  CHECK(sgf::sample_distance(600, 1.0) == 600.0);
  CHECK(sgf::sample_distance(600, 0.25) == 300.0);
  CHECK_THROWS_AS(sgf::sample_distance(600, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(sgf::sample_distance(600, 1.1), std::invalid_argument);
}

TEST_CASE("sample_fading") {
  CHECK(sgf::sample_fading(1.0, 1.0) == 0.0);
  CHECK(sgf::sample_fading(1.0, std::exp(-1.0)) == Approx(1.0).epsilon(1e-15));
  CHECK(sgf::sample_fading(2.5, std::exp(-1.0)) == Approx(2.5).epsilon(1e-15));
  CHECK_THROWS_AS(sgf::sample_fading(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(sgf::sample_fading(1.0, 1.5), std::invalid_argument);
}

TEST_CASE("sampler moments over 1e6 draws") {
  Moments dist, fade;
  for (std::uint64_t i = 0; i < 1'000'000; ++i) {
    dist.add(sgf::sample_distance(600, sgf::rng::trial_uniform(7, i, 0)));
    fade.add(sgf::sample_fading(1.0, sgf::rng::trial_uniform(7, i, 2)));
  }
  CHECK(std::abs(dist.mean - 400.0) < 3 * dist.stderr_());
  CHECK(std::abs(fade.mean - 1.0) < 3 * fade.stderr_());
}

TEST_CASE("received_power") {
  CHECK(sgf::received_power(0, 1, 1, 2.8) == 1.0);
  CHECK(sgf::received_power(0, 1, 10, 2) == Approx(0.01).epsilon(1e-15));
  CHECK(sgf::received_power(20, 0.5, 100, 2.8) == Approx(100 * 0.5 * std::pow(100.0, -2.8)).epsilon(1e-14));
  CHECK_THROWS_AS(sgf::received_power(0, 1, 0, 2.8), std::invalid_argument);
}

TEST_CASE("evaluate_link: hand cases") {
  sgf::SystemParams p;
  p.noise_dbm = 0.0;  // sigma^2 = 1 mW
  p.p_gb_dbm = 10 * std::log10(3.0);
  p.p_gf_dbm = 0.0;
  p.pathloss_exp = 2.0;
  sgf::ChannelDraw d{1.0, 1.0, 1.0, 1.0};
  auto out = sgf::evaluate_link(p, d);
  CHECK(out.admitted);
  CHECK(out.g_gb == Approx(3.0).epsilon(1e-14));
  CHECK(out.gamma_gb == Approx(1.5).epsilon(1e-14));
  CHECK(out.gamma_gf == Approx(1.0).epsilon(1e-14));
  CHECK(out.sic_ok);

  p.p_gb_dbm = 0.0;
  out = sgf::evaluate_link(p, d);
  CHECK(out.g_gf == out.g_gb);
  CHECK_FALSE(out.admitted);
  CHECK_FALSE(out.sic_ok);
  CHECK(out.gamma_gb == Approx(1.0));
}

TEST_CASE("evaluate_link: independent recomputation") {
  sgf::SystemParams p;
  for (std::uint64_t i = 0; i < 2000; ++i) {
    auto d = draw(i);
    auto out = sgf::evaluate_link(p, d);
    double s2 = std::pow(10.0, p.noise_dbm / 10);
    double ggf = std::pow(10.0, p.p_gf_dbm / 10) * d.h2_gf / std::pow(d.d_gf_m, p.pathloss_exp);
    double ggb = std::pow(10.0, p.p_gb_dbm / 10) * d.h2_gb / std::pow(d.d_gb_m, p.pathloss_exp);
    bool admitted = ggf < ggb;
    double gamma_gb = admitted ? ggb / (ggf + s2) : ggb / s2;
    REQUIRE(out.admitted == admitted);
    CHECK(out.gamma_gb == Approx(gamma_gb).epsilon(1e-12));
    CHECK(out.gamma_gf == Approx(ggf / s2).epsilon(1e-12));
    CHECK(out.sic_ok == (admitted && gamma_gb > p.sic_threshold));
  }
}

TEST_CASE("admission is invariant under common power scaling") {
  sgf::SystemParams a, b;
  a.p_gb_dbm = 10;
  a.p_gf_dbm = 12;
  b.p_gb_dbm = a.p_gb_dbm + 37.5;
  b.p_gf_dbm = a.p_gf_dbm + 37.5;
  for (std::uint64_t i = 0; i < 20000; ++i) {
    auto d = draw(i);
    CHECK(sgf::evaluate_link(a, d).admitted == sgf::evaluate_link(b, d).admitted);
  }
}

TEST_CASE("admission monotone in fading; gamma_gb decreasing in interference") {
  sgf::SystemParams p;
  p.p_gb_dbm = 0;
  p.p_gf_dbm = 0;
  for (std::uint64_t i = 0; i < 2000; ++i) {
    auto d = draw(i);
    auto base = sgf::evaluate_link(p, d);
    auto more_gf = d;
    more_gf.h2_gf *= 1.7;
    auto more_gb = d;
    more_gb.h2_gb *= 1.7;
    if (!base.admitted) CHECK_FALSE(sgf::evaluate_link(p, more_gf).admitted);
    if (base.admitted) CHECK(sgf::evaluate_link(p, more_gb).admitted);

    auto o = sgf::evaluate_link(p, more_gf);
    if (base.admitted && o.admitted) CHECK(o.gamma_gb < base.gamma_gb);

    auto gb_side = d;
    gb_side.h2_gb *= 3.0;
    gb_side.d_gb_m *= 0.5;
    CHECK(sgf::evaluate_link(p, gb_side).gamma_gf == base.gamma_gf);
  }
}

TEST_CASE("symmetric admission probability is one half") {
  sgf::SystemParams p;
  p.p_gb_dbm = p.p_gf_dbm = -40.0;
  auto r = sgf::simulate(p, 1'000'000, 5);
  double se = std::sqrt(0.25 / 1e6);
  CHECK(std::abs(r.gb.admit_prob - 0.5) < 3 * se);
}

}  // TEST_SUITE
