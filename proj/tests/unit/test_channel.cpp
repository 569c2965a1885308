#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "leojadce/channel.hpp"
#include "oracles.hpp"

using namespace leojadce;

namespace {

constexpr double kPi = std::numbers::pi;

double deg(double d) { return d * kPi / 180.0; }

// Same channel config with a near-deterministic rain fade so per-device
// moments only involve the Rician part.
ChannelConfig small_config(std::size_t k, std::size_t m) {
  ChannelConfig cfg;
  cfg.devices = k;
  cfg.antennas = m;
  cfg.los_seed = 99;
  cfg.link.rain_std_db = 1e-12;
  return cfg;
}

}  // namespace

TEST(LinkBudget, FreeSpaceLossAtThirtyGigahertz) {
  const LinkBudget lb = default_link_budget();
  const double fpl = free_space_loss(lb);
  EXPECT_NEAR(fpl, 6.3e-19, 0.05e-19);
  EXPECT_NEAR(10 * std::log10(fpl), -182.0, 0.1);
  const double c = 299792458.0;
  EXPECT_DOUBLE_EQ(fpl, std::pow(c / (4 * kPi * 30e9 * 1e6), 2));
}

TEST(LinkBudget, NoRainIsPlainBudget) {
  const LinkBudget lb = default_link_budget();
  const double expected = free_space_loss(lb) * std::pow(10.0, 3.4) / (1.38e-23 * 25e6);
  EXPECT_DOUBLE_EQ(large_scale_gain(lb, 0.0), expected);
}

TEST(LinkBudget, ThreeDecibelsHalvesTheGain) {
  const LinkBudget lb = default_link_budget();
  EXPECT_NEAR(large_scale_gain(lb, -3.01) / large_scale_gain(lb, 0.0), 0.5, 0.0005);
}

TEST(LinkBudget, Validation) {
  LinkBudget lb = default_link_budget();
  EXPECT_NO_THROW(lb.validate());
  lb.bandwidth_hz = 0.0;
  EXPECT_THROW(lb.validate(), std::invalid_argument);
}

TEST(Rain, LognormalParametersMatchMoments) {
  const auto p = rain_lognormal_params(-2.6, 1.63);
  const double mean = std::exp(p.m + p.s * p.s / 2);
  const double var = (std::exp(p.s * p.s) - 1) * mean * mean;
  EXPECT_NEAR(mean, 2.6, 1e-12);
  EXPECT_NEAR(std::sqrt(var), 1.63, 1e-12);
}

TEST(Rain, DegenerateSpreadGivesTheMean) {
  Rng rng(1);
  for (int i = 0; i < 100; ++i) EXPECT_NEAR(sample_rain_db(-2.6, 1e-9, rng), -2.6, 1e-7);
}

TEST(Rain, MonteCarloMomentsAndSign) {
  Rng rng(2);
  const int n = 1000000;
  double sum = 0, sq = 0;
  for (int i = 0; i < n; ++i) {
    const double r = sample_rain_db(-2.6, 1.63, rng);
    ASSERT_LE(r, 0.0);
    sum += r;
    sq += r * r;
  }
  const double mean = sum / n;
  EXPECT_NEAR(mean, -2.6, 3 * 1.63 / std::sqrt(n));
  EXPECT_NEAR(std::sqrt(sq / n - mean * mean), 1.63, 0.01);
}

TEST(Antenna, BoresightIsOne) {
  const LinkBudget lb = default_link_budget();
  EXPECT_NEAR(antenna_gain(0.0, lb), 1.0, 1e-9);
  EXPECT_NEAR(antenna_pattern(1e-6), 1.0, 1e-9);
  EXPECT_NEAR(antenna_pattern(2e-4), antenna_pattern(0.99e-4), 1e-7);
}

TEST(Antenna, HalfPowerAtThreeDecibelAngle) {
  const LinkBudget lb = default_link_budget();
  const double w = antenna_gain(deg(0.4), lb);
  EXPECT_GE(w * w, 0.45);
  EXPECT_LE(w * w, 0.55);
  EXPECT_NEAR(w * w, 0.5, 1e-9);
  // Half-power beamwidth ~ 70 lambda / D degrees: 0.8 deg at 1 cm gives ~0.9 m.
  EXPECT_GT(lb.dish_diameter_m, 0.8);
  EXPECT_LT(lb.dish_diameter_m, 1.1);
}

TEST(Antenna, PatternAtFiveMatchesSeries) {
  const double phi = 5.0;
  const double ref = oracle::bessel_series(1, phi) / (2 * phi) + 36 * oracle::bessel_series(3, phi) / std::pow(phi, 3);
  EXPECT_NEAR(antenna_pattern(phi), ref, 1e-13);
}

TEST(Antenna, EvenAndMaximalAtBoresight) {
  const LinkBudget lb = default_link_budget();
  const double at_zero = antenna_gain(0.0, lb);
  for (double d = -1.5; d <= 1.5; d += 0.01) {
    EXPECT_DOUBLE_EQ(antenna_gain(deg(d), lb), antenna_gain(deg(-d), lb));
    EXPECT_LE(antenna_gain(deg(d), lb), at_zero);
  }
}

TEST(Antenna, RejectsGrazingAngles) {
  EXPECT_THROW(antenna_gain(kPi / 2, default_link_budget()), std::domain_error);
}

TEST(Los, UnitNormUnitModulusAndFrozen) {
  const CVector a = los_direction(7, 3, 8);
  EXPECT_NEAR(a.norm(), 1.0, 1e-14);
  for (Index i = 0; i < a.size(); ++i) EXPECT_NEAR(std::abs(a(i)), 1.0 / std::sqrt(8.0), 1e-15);
  EXPECT_EQ(a, los_direction(7, 3, 8));
  EXPECT_NE(a, los_direction(7, 4, 8));
  EXPECT_NE(a, los_direction(8, 3, 8));
}

TEST(Geometry, RangesRespected) {
  ChannelConfig cfg = small_config(2000, 4);
  Rng rng(3);
  const DeviceGeometry g = draw_geometry(cfg, rng);
  for (std::size_t k = 0; k < cfg.devices; ++k) {
    EXPECT_GE(g.theta[k], 0.0);
    EXPECT_LE(g.theta[k], deg(0.4));
    EXPECT_GE(g.los_norm_sq[k], 0.6);
    EXPECT_LE(g.los_norm_sq[k], 0.7);
    EXPECT_GE(g.nlos_var[k], 0.2);
    EXPECT_LE(g.nlos_var[k], 0.25);
    EXPECT_EQ(g.rician[k], 8.0);
    EXPECT_EQ(g.tx_power[k], 1.0);
  }
}

TEST(Channels, ZeroActivityMeansNoActiveDevice) {
  ChannelConfig cfg = small_config(300, 4);
  cfg.activity = 0.0;
  Rng rng(4);
  const auto ch = draw_channels(cfg, rng);
  EXPECT_EQ(ch.active_count(), 0u);
  // Channels still exist for inactive devices.
  EXPECT_GT(ch.h.norm(), 0.0);
  EXPECT_EQ(device_state_matrix(ch), CMatrix::Zero(4, 300));
}

TEST(Channels, ExactActiveCount) {
  ChannelConfig cfg = small_config(50, 2);
  cfg.active_count = 7;
  for (int s = 0; s < 20; ++s) {
    Rng rng(100 + s);
    EXPECT_EQ(draw_channels(cfg, rng).active_count(), 7u);
  }
  cfg.active_count = 51;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Channels, ActivityFrequency) {
  ChannelConfig cfg = small_config(20000, 1);
  cfg.activity = 0.1;
  Rng rng(5);
  const auto ch = draw_channels(cfg, rng);
  EXPECT_NEAR(ch.active_count() / 20000.0, 0.1, 4 * std::sqrt(0.09 / 20000));
}

TEST(Channels, PureLosLimitIsDeterministic) {
  ChannelConfig cfg = small_config(3, 4);
  cfg.rician_factor = std::numeric_limits<double>::infinity();
  Rng geo_rng(6);
  const DeviceGeometry geo = draw_geometry(cfg, geo_rng);
  Rng rng(7);
  const auto first = draw_channels(cfg, geo, rng);
  for (int i = 0; i < 20; ++i) {
    const auto ch = draw_channels(cfg, geo, rng);
    for (std::size_t k = 0; k < 3; ++k) {
      const CVector expect = (ch.omega[k] * std::sqrt(ch.gain[k] * geo.los_norm_sq[k]) *
                              los_direction(cfg.los_seed, k, 4))
                                 .conjugate();
      EXPECT_LT((ch.h.col(static_cast<Index>(k)) - expect).norm(), 1e-9 * expect.norm());
      EXPECT_LT((ch.h.col(static_cast<Index>(k)) - first.h.col(static_cast<Index>(k))).norm(), 1e-9);
    }
  }
}

TEST(Channels, RicianMomentsMatchLaw) {
  ChannelConfig cfg = small_config(1, 4);
  Rng geo_rng(8);
  const DeviceGeometry geo = draw_geometry(cfg, geo_rng);
  const double lambda = 8.0;
  const int n = 100000;
  Rng rng(9);
  CVector sum = CVector::Zero(4);
  RVector sq = RVector::Zero(4);
  double omega = 0, gain = 0;
  std::vector<CVector> draws;
  draws.reserve(n);
  for (int i = 0; i < n; ++i) {
    const auto ch = draw_channels(cfg, geo, rng);
    // Work with h_k itself (the matrix holds its conjugate).
    draws.push_back(ch.h.col(0).conjugate());
    sum += draws.back();
    omega = ch.omega[0];
    gain = ch.gain[0];
  }
  const CVector mean = sum / n;
  for (const auto& d : draws) sq += (d - mean).cwiseAbs2();
  const RVector var = sq / (n - 1);

  const CVector expect_mean =
      omega * std::sqrt(lambda * gain / (lambda + 1)) * std::sqrt(geo.los_norm_sq[0]) * los_direction(cfg.los_seed, 0, 4);
  const double expect_var = omega * omega * gain * geo.nlos_var[0] / (lambda + 1);
  for (Index a = 0; a < 4; ++a) {
    // Each of re/im has variance expect_var / 2.
    const double se_mean = std::sqrt(expect_var / 2 / n);
    EXPECT_NEAR(mean(a).real(), expect_mean(a).real(), 3 * se_mean);
    EXPECT_NEAR(mean(a).imag(), expect_mean(a).imag(), 3 * se_mean);
    // |CN|^2 is exponential: sd of the variance estimate is expect_var / sqrt(n).
    EXPECT_NEAR(var(a), expect_var, 3 * expect_var / std::sqrt(n));
  }
}

TEST(StateMatrix, PowerScalingAndLoopOracle) {
  ChannelConfig cfg = small_config(6, 3);
  cfg.activity = 0.5;
  Rng rng(10);
  const auto ch = draw_channels(cfg, rng);
  const std::vector<double> power = {4.0, 1.0, 2.0, 0.5, 9.0, 3.0};
  const CMatrix x = device_state_matrix(ch, power);
  for (Index k = 0; k < 6; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    for (Index a = 0; a < 3; ++a) {
      const Complex expect = ch.active[uk] ? std::sqrt(power[uk]) * ch.h(a, k) : Complex(0.0);
      EXPECT_EQ(x(a, k), expect);
    }
  }
  EXPECT_THROW(device_state_matrix(ch, std::vector<double>{1.0}), std::invalid_argument);
}

TEST(StateMatrix, SingleActiveDeviceWithPowerFour) {
  ChannelConfig cfg = small_config(4, 2);
  cfg.active_count = 1;
  Rng rng(11);
  const auto ch = draw_channels(cfg, rng);
  const CMatrix x = device_state_matrix(ch, std::vector<double>(4, 4.0));
  for (Index k = 0; k < 4; ++k) {
    if (ch.active[static_cast<std::size_t>(k)]) {
      EXPECT_EQ(x.col(k), (2.0 * ch.h.col(k)).eval());
    } else {
      EXPECT_EQ(x.col(k), CVector::Zero(2));
    }
  }
}

TEST(Channels, SameSeedSameDraw) {
  ChannelConfig cfg = small_config(40, 4);
  Rng a(12);
  Rng b(12);
  const auto x = draw_channels(cfg, a);
  const auto y = draw_channels(cfg, b);
  EXPECT_EQ(x.h, y.h);
  EXPECT_EQ(x.active, y.active);
}

TEST(ChannelConfig, Validation) {
  ChannelConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.activity = 1.5;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = ChannelConfig{};
  cfg.los_norm_sq_min = 0.8;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = ChannelConfig{};
  cfg.nlos_var_min = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}
