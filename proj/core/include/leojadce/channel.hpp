#pragma once

// Ground-truth LEO satellite channels: link budget, log-normal rain fade,
// Bessel antenna pattern and Rician small-scale fading.

#include <cstdint>
#include <optional>
#include <vector>

#include "leojadce/rng.hpp"
#include "leojadce/tensor.hpp"
#include "leojadce/types.hpp"

namespace leojadce {

inline constexpr double kSpeedOfLight = 299792458.0;

struct LinkBudget {
  double carrier_hz = 30e9;
  double altitude_m = 1000e3;
  double bandwidth_hz = 25e6;
  /// Receiver noise temperature. Informational: the gain-to-noise-temperature
  /// ratio below already folds it into the budget.
  double noise_temp_k = 290.0;
  double boltzmann = 1.38e-23;
  double g_over_t_db = 34.0;
  /// Satellite dish diameter; see calibrate_dish_diameter().
  double dish_diameter_m = 0.0;
  double three_db_angle_deg = 0.4;
  double rain_mean_db = -2.6;
  double rain_std_db = 1.63;

  /// Throws std::invalid_argument when a physical quantity is not positive.
  void validate() const;
};

/// (c / (4 pi f d0))^2.
double free_space_loss(const LinkBudget& lb);

/// Linear large-scale power gain for a rain fade of `rain_db` (<= 0) dB.
double large_scale_gain(const LinkBudget& lb, double rain_db);

/// Rain fade in dB (<= 0). The fade magnitude is log-normal, with the normal
/// parameters moment-matched so the fade has mean `mean_db` and standard
/// deviation `std_db`.
double sample_rain_db(double mean_db, double std_db, Rng& rng);

/// Parameters (m, s) of the normal whose exponential has mean |mean_db| and
/// standard deviation std_db.
struct LogNormalParams {
  double m;
  double s;
};
LogNormalParams rain_lognormal_params(double mean_db, double std_db);

/// Amplitude pattern J1(phi)/(2 phi) + 36 J3(phi)/phi^3 with
/// phi = pi d_s f / c sin(theta); equals 1 at boresight.
double antenna_gain(double theta_rad, const LinkBudget& lb);

/// The same pattern as a function of phi.
double antenna_pattern(double phi);

/// Dish diameter for which antenna_gain(three_db_angle)^2 == 1/2.
double calibrate_dish_diameter(const LinkBudget& lb);

/// LinkBudget with every default filled in, including the calibrated dish.
LinkBudget default_link_budget();

struct ChannelConfig {
  std::size_t devices = 500;   // K
  std::size_t antennas = 8;    // M
  double activity = 0.1;       // p_a
  /// When set, exactly this many devices (a uniformly random subset) are
  /// active instead of independent Bernoulli(p_a) activity.
  std::optional<std::size_t> active_count;
  double rician_factor = 8.0;  // lambda; +inf gives a pure LOS channel
  double los_norm_sq_min = 0.6;
  double los_norm_sq_max = 0.7;
  double nlos_var_min = 0.2;
  double nlos_var_max = 0.25;
  double theta_max_deg = 0.4;  // off-axis angles drawn from U[0, theta_max]
  double tx_power = 1.0;       // xi, common to all devices
  /// Seed of the per-device LOS phase directions, which stay fixed for a
  /// scenario.
  std::uint64_t los_seed = 0;
  LinkBudget link = default_link_budget();

  void validate() const;
};

struct DeviceGeometry {
  std::vector<double> theta;        // off-axis angle, radians
  std::vector<double> rician;       // lambda_k
  std::vector<double> los_norm_sq;  // ||h_LOS||^2
  std::vector<double> nlos_var;     // v_NLOS
  std::vector<double> tx_power;     // xi_k
};

/// Unit-norm LOS direction with unit-modulus entries (scaled by 1/sqrt(M)) for
/// device k; depends only on (los_seed, k, M).
CVector los_direction(std::uint64_t los_seed, std::size_t device, std::size_t antennas);

DeviceGeometry draw_geometry(const ChannelConfig& cfg, Rng& rng);

struct ChannelRealization {
  /// M x K; column k holds h_k^H. Populated for inactive devices too.
  CMatrix h;
  std::vector<std::uint8_t> active;
  std::vector<double> gain;   // g_k
  std::vector<double> omega;  // antenna amplitude gain
  DeviceGeometry geometry;

  std::size_t active_count() const;
};

/// Draws geometry, activity, rain fades and Rician channels for every device.
ChannelRealization draw_channels(const ChannelConfig& cfg, Rng& rng);
/// Same for a fixed geometry: only activity, rain fades and NLOS components
/// are drawn.
ChannelRealization draw_channels(const ChannelConfig& cfg, DeviceGeometry geometry, Rng& rng);

/// X(:,k) = alpha_k sqrt(xi_k) h_k^H; inactive columns are exactly zero.
DeviceStateMatrix device_state_matrix(const ChannelRealization& ch, std::span<const double> tx_power);
DeviceStateMatrix device_state_matrix(const ChannelRealization& ch);

}  // namespace leojadce
