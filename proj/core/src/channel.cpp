#include "leojadce/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "leojadce/special.hpp"

namespace leojadce {

namespace {

constexpr double kPi = std::numbers::pi;

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string("link budget: ") + name + " must be positive");
  }
}

}  // namespace

void LinkBudget::validate() const {
  require_positive(carrier_hz, "carrier_hz");
  require_positive(altitude_m, "altitude_m");
  require_positive(bandwidth_hz, "bandwidth_hz");
  require_positive(noise_temp_k, "noise_temp_k");
  require_positive(boltzmann, "boltzmann");
  require_positive(dish_diameter_m, "dish_diameter_m");
  require_positive(three_db_angle_deg, "three_db_angle_deg");
  require_positive(rain_std_db, "rain_std_db");
  if (!std::isfinite(g_over_t_db) || !std::isfinite(rain_mean_db)) {
    throw std::invalid_argument("link budget: non-finite dB quantity");
  }
  if (rain_mean_db == 0.0) throw std::invalid_argument("link budget: rain_mean_db must be non-zero");
}

double free_space_loss(const LinkBudget& lb) {
  const double r = kSpeedOfLight / (4.0 * kPi * lb.carrier_hz * lb.altitude_m);
  return r * r;
}

double large_scale_gain(const LinkBudget& lb, double rain_db) {
  return free_space_loss(lb) * db_to_linear(lb.g_over_t_db) / (lb.boltzmann * lb.bandwidth_hz) *
         db_to_linear(rain_db);
}

LogNormalParams rain_lognormal_params(double mean_db, double std_db) {
  const double mean = std::abs(mean_db);
  const double s2 = std::log1p((std_db / mean) * (std_db / mean));
  return {std::log(mean) - 0.5 * s2, std::sqrt(s2)};
}

double sample_rain_db(double mean_db, double std_db, Rng& rng) {
  const auto p = rain_lognormal_params(mean_db, std_db);
  return -std::exp(p.m + p.s * standard_normal(rng));
}

double antenna_pattern(double phi) {
  phi = std::abs(phi);
  if (phi < 1e-4) {
    // J1(p)/(2p) = 1/4 - p^2/32 + ..., 36 J3(p)/p^3 = 3/4 - 3 p^2/32 + ...
    return 1.0 - phi * phi / 8.0;
  }
  return bessel_j(1, phi) / (2.0 * phi) + 36.0 * bessel_j(3, phi) / (phi * phi * phi);
}

double antenna_gain(double theta_rad, const LinkBudget& lb) {
  if (!(std::abs(theta_rad) < kPi / 2.0)) throw std::domain_error("antenna_gain: |theta| >= pi/2");
  const double phi = kPi * lb.dish_diameter_m * lb.carrier_hz / kSpeedOfLight * std::sin(theta_rad);
  return antenna_pattern(phi);
}

double calibrate_dish_diameter(const LinkBudget& lb) {
  // The pattern decreases monotonically from 1 at phi = 0 to its first null
  // (~3.8); bisect for the half-power point.
  double lo = 0.0;
  double hi = 3.5;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double w = antenna_pattern(mid);
    (w * w > 0.5 ? lo : hi) = mid;
  }
  const double phi_3db = 0.5 * (lo + hi);
  const double theta = lb.three_db_angle_deg * kPi / 180.0;
  return phi_3db * kSpeedOfLight / (kPi * lb.carrier_hz * std::sin(theta));
}

LinkBudget default_link_budget() {
  LinkBudget lb;
  lb.dish_diameter_m = calibrate_dish_diameter(lb);
  return lb;
}

void ChannelConfig::validate() const {
  if (devices == 0) throw std::invalid_argument("channel: K must be positive");
  if (antennas == 0) throw std::invalid_argument("channel: M must be positive");
  if (!(activity >= 0.0 && activity <= 1.0)) throw std::invalid_argument("channel: p_a outside [0, 1]");
  if (active_count && *active_count > devices) throw std::invalid_argument("channel: active_count exceeds K");
  if (!(rician_factor >= 0.0)) throw std::invalid_argument("channel: rician factor must be >= 0");
  if (!(los_norm_sq_min >= 0.0 && los_norm_sq_min <= los_norm_sq_max)) {
    throw std::invalid_argument("channel: invalid LOS norm range");
  }
  if (!(nlos_var_min > 0.0 && nlos_var_min <= nlos_var_max)) {
    throw std::invalid_argument("channel: invalid NLOS variance range");
  }
  if (!(theta_max_deg >= 0.0 && theta_max_deg < 90.0)) {
    throw std::invalid_argument("channel: theta_max_deg outside [0, 90)");
  }
  if (!(tx_power > 0.0)) throw std::invalid_argument("channel: tx power must be positive");
  link.validate();
}

CVector los_direction(std::uint64_t los_seed, std::size_t device, std::size_t antennas) {
  Rng rng = make_stream(los_seed, 0x4c4f53ull /* "LOS" */, device);
  CVector v(static_cast<Index>(antennas));
  const double scale = 1.0 / std::sqrt(static_cast<double>(antennas));
  for (Index m = 0; m < v.size(); ++m) {
    v(m) = std::polar(scale, 2.0 * kPi * uniform01(rng));
  }
  return v;
}

DeviceGeometry draw_geometry(const ChannelConfig& cfg, Rng& rng) {
  const std::size_t k = cfg.devices;
  DeviceGeometry g;
  g.theta.resize(k);
  g.rician.assign(k, cfg.rician_factor);
  g.los_norm_sq.resize(k);
  g.nlos_var.resize(k);
  g.tx_power.assign(k, cfg.tx_power);
  const double theta_max = cfg.theta_max_deg * kPi / 180.0;
  for (std::size_t i = 0; i < k; ++i) {
    g.theta[i] = uniform(rng, 0.0, theta_max);
    g.los_norm_sq[i] = uniform(rng, cfg.los_norm_sq_min, cfg.los_norm_sq_max);
    g.nlos_var[i] = uniform(rng, cfg.nlos_var_min, cfg.nlos_var_max);
  }
  return g;
}

std::size_t ChannelRealization::active_count() const {
  std::size_t n = 0;
  for (auto a : active) n += a;
  return n;
}

ChannelRealization draw_channels(const ChannelConfig& cfg, Rng& rng) {
  DeviceGeometry geometry = draw_geometry(cfg, rng);
  return draw_channels(cfg, std::move(geometry), rng);
}

ChannelRealization draw_channels(const ChannelConfig& cfg, DeviceGeometry geometry, Rng& rng) {
  const std::size_t k = cfg.devices;
  const auto m = static_cast<Index>(cfg.antennas);
  if (geometry.theta.size() != k || geometry.rician.size() != k || geometry.los_norm_sq.size() != k ||
      geometry.nlos_var.size() != k || geometry.tx_power.size() != k) {
    throw std::invalid_argument("draw_channels: geometry does not cover K devices");
  }
  ChannelRealization ch;
  ch.geometry = std::move(geometry);
  ch.h.resize(m, static_cast<Index>(k));
  ch.active.resize(k);
  ch.gain.resize(k);
  ch.omega.resize(k);
  if (cfg.active_count) {
    // Partial Fisher-Yates over device indices.
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    for (std::size_t i = 0; i < *cfg.active_count; ++i) {
      const auto j = i + std::min(k - i - 1, static_cast<std::size_t>(uniform01(rng) * static_cast<double>(k - i)));
      std::swap(idx[i], idx[j]);
      ch.active[idx[i]] = 1;
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (!cfg.active_count) ch.active[i] = bernoulli(rng, cfg.activity) ? 1 : 0;
    const double rain = sample_rain_db(cfg.link.rain_mean_db, cfg.link.rain_std_db, rng);
    ch.gain[i] = large_scale_gain(cfg.link, rain);
    ch.omega[i] = antenna_gain(ch.geometry.theta[i], cfg.link);

    const double lambda = ch.geometry.rician[i];
    double los_amp = 1.0;
    double nlos_amp = 0.0;
    if (!std::isinf(lambda)) {
      los_amp = std::sqrt(lambda / (lambda + 1.0));
      nlos_amp = std::sqrt(1.0 / (lambda + 1.0));
    }
    const double g = ch.gain[i];
    const CVector los =
        std::sqrt(ch.geometry.los_norm_sq[i]) * los_direction(cfg.los_seed, i, cfg.antennas);
    const double v = ch.geometry.nlos_var[i];
    for (Index a = 0; a < m; ++a) {
      const Complex nlos = complex_normal(rng, v);
      // h_k is a row vector; store its conjugate transpose.
      const Complex h = ch.omega[i] * std::sqrt(g) * (los_amp * los(a) + nlos_amp * nlos);
      ch.h(a, static_cast<Index>(i)) = std::conj(h);
    }
  }
  return ch;
}

DeviceStateMatrix device_state_matrix(const ChannelRealization& ch, std::span<const double> tx_power) {
  if (tx_power.size() != ch.active.size()) {
    throw std::invalid_argument("device_state_matrix: power vector length differs from K");
  }
  DeviceStateMatrix x = CMatrix::Zero(ch.h.rows(), ch.h.cols());
  for (Index k = 0; k < ch.h.cols(); ++k) {
    if (ch.active[static_cast<std::size_t>(k)] != 0) {
      x.col(k) = std::sqrt(tx_power[static_cast<std::size_t>(k)]) * ch.h.col(k);
    }
  }
  return x;
}

DeviceStateMatrix device_state_matrix(const ChannelRealization& ch) {
  return device_state_matrix(ch, ch.geometry.tx_power);
}

}  // namespace leojadce
