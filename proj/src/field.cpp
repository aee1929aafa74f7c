#include "sourceseek/field.hpp"

#include <cmath>

#include "sourceseek/rng.hpp"

namespace seeker::field {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kMmPerMeter = 1000.0;

double erf_series(double x) {
    // Maclaurin series of erf; used for |x| < 3 where cancellation stays
    // well below 1e-12.
    const double x2 = x * x;
    double term = x; // (-1)^n x^(2n+1) / n!
    double sum = x;  // running sum of term / (2n+1)
    for (int n = 1; n < 200; ++n) {
        term *= -x2 / n;
        const double add = term / (2 * n + 1);
        sum += add;
        if (std::abs(add) < 1e-18 * std::abs(sum) + 1e-300) break;
    }
    return sum * 2.0 / std::sqrt(kPi);
}

double erfc_continued_fraction(double x) {
    // Laplace continued fraction, accurate for x >= 3:
    // erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + (2/2)/(x + ...)))
    double f = 0.0;
    for (int n = 40; n >= 1; --n) f = (0.5 * n) / (x + f);
    return std::exp(-x * x) / std::sqrt(kPi) / (x + f);
}

} // namespace

double erfc(double x) {
    if (x < 0.0) return 2.0 - erfc(-x);
    if (x < 3.0) return 1.0 - erf_series(x);
    return erfc_continued_fraction(x);
}

double em_power(const EmDecayParams& params, double distance_mm) {
    if (distance_mm < 0.0)
        throw NegativeDistance("em_power: distance must be >= 0");
    const double d = distance_mm / kMmPerMeter;
    return params.medium_constant * params.power / std::pow(1.0 + d, params.exponent);
}

double default_em_calibration_db(const EmDecayParams& params) {
    return -28.0 - 10.0 * std::log10(params.medium_constant * params.power);
}

double em_rssi_dbm(const EmDecayParams& params, double distance_mm,
                   double calibration_db) {
    return 10.0 * std::log10(em_power(params, distance_mm)) + calibration_db;
}

double vapor_concentration(const VaporParams& params, const Vec2& r_mm, double t_s) {
    const double dist_mm = (r_mm - params.source).norm();
    if (dist_mm <= kGeomEps)
        throw AtSource("vapor_concentration is singular at the source");
    if (t_s <= params.start_time)
        throw TimeBeforeRelease("vapor_concentration: t must exceed the release time");
    const double dist = dist_mm / kMmPerMeter;
    const double spread = 2.0 * std::sqrt(params.diffusivity * (t_s - params.start_time));
    return params.emission_rate / (4.0 * kPi * params.diffusivity * dist) *
           erfc(dist / spread);
}

double acoustic_intensity(const AcousticParams& params, double distance_mm) {
    if (distance_mm <= 0.0)
        throw AtSource("acoustic_intensity is singular at the source");
    const double r = distance_mm / kMmPerMeter;
    return params.power / (4.0 * kPi * r * r);
}

SignalField make_signal_field(const FieldSpec& spec) {
    if (spec.arena.width() <= 0.0 || spec.arena.height() <= 0.0)
        throw InvalidConfig("field arena must have positive extent");
    if (spec.noise.sigma_db < 0.0) throw InvalidConfig("sigma_db must be >= 0");
    if (spec.noise.grid_mm <= 0.0) throw InvalidConfig("grid_mm must be > 0");

    if (const auto* em = std::get_if<EmDecayParams>(&spec.model)) {
        if (em->power <= 0.0 || em->medium_constant <= 0.0 || em->exponent <= 0.0)
            throw InvalidConfig("EM decay parameters must be strictly positive");
    } else if (const auto* vp = std::get_if<VaporParams>(&spec.model)) {
        if (vp->emission_rate <= 0.0 || vp->diffusivity <= 0.0)
            throw InvalidConfig("vapor parameters must be strictly positive");
        if (spec.vapor_time_s <= vp->start_time)
            throw InvalidConfig("vapor_time_s must exceed the release time");
    } else if (const auto* ac = std::get_if<AcousticParams>(&spec.model)) {
        if (ac->power <= 0.0)
            throw InvalidConfig("acoustic power must be strictly positive");
    }

    SignalField f;
    f.arena = spec.arena;
    f.model = spec.model;
    f.noise = spec.noise;
    f.vapor_time_s = spec.vapor_time_s;
    if (spec.calibration_db) {
        f.calibration_db = *spec.calibration_db;
    } else if (const auto* em = std::get_if<EmDecayParams>(&spec.model)) {
        f.calibration_db = default_em_calibration_db(*em);
    } else {
        f.calibration_db = 0.0;
    }

    f.nx = std::max(1, static_cast<int>(std::ceil(f.arena.width() / f.noise.grid_mm - 1e-9)));
    f.ny = std::max(1, static_cast<int>(std::ceil(f.arena.height() / f.noise.grid_mm - 1e-9)));
    f.noise_grid.resize(f.ny + 1, f.nx + 1);

    // Node (iy, ix) sits at arena.lo + grid_mm * (ix, iy). Fill order is part
    // of the determinism contract: row-major, y outer, x inner.
    Rng rng(derive_stream(f.noise.seed, kStreamFieldNoise));
    for (int iy = 0; iy <= f.ny; ++iy)
        for (int ix = 0; ix <= f.nx; ++ix)
            f.noise_grid(iy, ix) = f.noise.sigma_db * rng.normal();
    return f;
}

Vec2 source_position(const SignalField& f) {
    return std::visit([](const auto& m) { return m.source; }, f.model);
}

double model_value(const SignalField& f, const Vec2& p) {
    if (const auto* em = std::get_if<EmDecayParams>(&f.model)) {
        return em_rssi_dbm(*em, (p - em->source).norm(), f.calibration_db);
    }
    if (const auto* vp = std::get_if<VaporParams>(&f.model)) {
        // The field backend clamps the singular point; the standalone
        // function keeps its AtSource contract.
        const double dist = std::max((p - vp->source).norm(), 1e-9);
        const Vec2 at = vp->source + Vec2(dist, 0.0);
        return vapor_concentration(*vp, at, f.vapor_time_s) + f.calibration_db;
    }
    const auto& ac = std::get<AcousticParams>(f.model);
    const double dist = std::max((p - ac.source).norm(), 1e-9);
    return acoustic_intensity(ac, dist) + f.calibration_db;
}

double noise_at(const SignalField& f, const Vec2& p) {
    const double gx = (p.x() - f.arena.lo.x()) / f.noise.grid_mm;
    const double gy = (p.y() - f.arena.lo.y()) / f.noise.grid_mm;
    const int ix = std::min(std::max(static_cast<int>(std::floor(gx)), 0), f.nx - 1);
    const int iy = std::min(std::max(static_cast<int>(std::floor(gy)), 0), f.ny - 1);
    const double fx = std::clamp(gx - ix, 0.0, 1.0);
    const double fy = std::clamp(gy - iy, 0.0, 1.0);
    return (1.0 - fx) * (1.0 - fy) * f.noise_grid(iy, ix) +
           fx * (1.0 - fy) * f.noise_grid(iy, ix + 1) +
           (1.0 - fx) * fy * f.noise_grid(iy + 1, ix) +
           fx * fy * f.noise_grid(iy + 1, ix + 1);
}

double sample(const SignalField& f, const Vec2& p) {
    if (!f.arena.contains(p))
        throw OutOfArena("sample: point lies outside the arena");
    return model_value(f, p) + noise_at(f, p);
}

double cost(const SignalField& f, const Vec2& p) { return -sample(f, p); }

} // namespace seeker::field
