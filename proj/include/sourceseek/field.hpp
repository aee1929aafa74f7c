#ifndef SOURCESEEK_FIELD_HPP
#define SOURCESEEK_FIELD_HPP

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <variant>

#include "sourceseek/geometry.hpp"

namespace seeker::field {

/// Electromagnetic decay: received power cP / (1 + d)^alpha with d in meters.
/// Distances at the API are millimeters and converted internally.
struct EmDecayParams {
    double power = 1.0;           // P, source emission power
    double medium_constant = 1.0; // c
    double exponent = 2.0;        // alpha
    Vec2 source{0.0, 0.0};        // mm
};

/// Point source emitting vapor at a constant rate into a diffusive medium.
struct VaporParams {
    double emission_rate = 1.0; // mu, kg/s
    double diffusivity = 1.0;   // kappa, m^2/s
    Vec2 source{0.0, 0.0};      // rho, mm
    double start_time = 0.0;    // t0, s
};

/// Spherical acoustic source, intensity P / (4 pi r^2).
struct AcousticParams {
    double power = 1.0;    // P, W
    Vec2 source{0.0, 0.0}; // mm
};

using ModelParams = std::variant<EmDecayParams, VaporParams, AcousticParams>;

/// Frozen pseudo-random dB offsets on a regular grid, bilinearly interpolated
/// between nodes. Stands in for the measured map's local extrema. The 400 mm
/// default keeps the map's global optimum anchored near the source (like the
/// measured map, whose peak reads about -28 dBm at the center); finer grids
/// turn the optimum into a lottery among noise spikes several dB hotter than
/// the source.
struct NoiseParams {
    double sigma_db = 3.0;
    double grid_mm = 400.0;
    std::uint64_t seed = 1;
};

/// Complementary error function, |absolute error| <= 1e-9. Implemented with
/// fixed arithmetic (Maclaurin series + Laplace continued fraction) so
/// results never depend on the platform libm.
double erfc(double x);

double em_power(const EmDecayParams& params, double distance_mm);
/// Calibration that makes the source read exactly -28 dBm.
double default_em_calibration_db(const EmDecayParams& params);
double em_rssi_dbm(const EmDecayParams& params, double distance_mm,
                   double calibration_db);
double vapor_concentration(const VaporParams& params, const Vec2& r_mm, double t_s);
double acoustic_intensity(const AcousticParams& params, double distance_mm);

struct FieldSpec {
    Rect arena;
    ModelParams model = EmDecayParams{};
    NoiseParams noise;
    /// When absent: EM fields are calibrated so the source reads -28 dBm,
    /// vapor/acoustic fields use 0.
    std::optional<double> calibration_db;
    /// Evaluation time for the vapor backend (effectively steady state by
    /// default).
    double vapor_time_s = 1e12;
};

/// Immutable after construction; sample()/cost() are pure and safe for
/// concurrent readers.
struct SignalField {
    Rect arena;
    ModelParams model;
    NoiseParams noise;
    double calibration_db = 0.0;
    double vapor_time_s = 1e12;
    int nx = 0; // noise cells along x
    int ny = 0;
    Eigen::ArrayXXd noise_grid; // (ny + 1) x (nx + 1) offsets, row = y index
};

SignalField make_signal_field(const FieldSpec& spec);

Vec2 source_position(const SignalField& f);
/// Deterministic model value at p, without noise.
double model_value(const SignalField& f, const Vec2& p);
/// Bilinear interpolation of the frozen noise grid at p.
double noise_at(const SignalField& f, const Vec2& p);
/// Model value plus interpolated noise. Throws OutOfArena.
double sample(const SignalField& f, const Vec2& p);
/// Negative of sample(); the quantity the swarm minimizes.
double cost(const SignalField& f, const Vec2& p);

} // namespace seeker::field

#endif
