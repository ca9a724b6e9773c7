#pragma once

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "slcs2/geometry.hpp"
#include "slcs2/rng.hpp"

namespace slcs2 {

struct Wall {
    Vec2 a, b;
    double thickness = 1.0;
};

struct RadioConfig {
    double txPowerDbm = 20.0;
    double refLossDb = 40.0;         // loss at the reference distance
    double refDistance = 1.0;        // d0, meters
    double pathLossExponent = 3.0;   // gamma
    double shadowingSigmaDb = 4.0;
    double wallLossDb = 10.0;        // per wall crossed
    double noiseFloorDbm = -96.0;
    double snirThresholdDb = 10.0;
    double noiseTriggerDbm = -85.0;  // P_rs: "interference is high" level used by rules
    double detectionMarginDb = 6.0;  // jammer detects tx above noiseFloor + margin
};

inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

int count_wall_crossings(std::span<const Wall> walls, const Vec2& a, const Vec2& b);

// log-distance path loss, deterministic part; distances below d0 clamp to d0
double deterministic_path_loss(const RadioConfig& cfg, double dist, int wallsCrossed);

// full model: deterministic part + Normal(0, sigma) shadowing draw
double path_loss(const RadioConfig& cfg, const Vec2& a, const Vec2& b, std::span<const Wall> walls, Rng& rng);

// SNIR in dB given the received signal power and the summed received
// interference power (mW, excluding the thermal floor which is added here)
double snir_db(const RadioConfig& cfg, double rxPowerDbm, double interferenceMw);

inline bool reception_ok(const RadioConfig& cfg, double snirDb) { return snirDb >= cfg.snirThresholdDb; }

// distance at which the deterministic model, clear path and no interference,
// drops to exactly the SNIR threshold; the "net" observable
double comm_range(const RadioConfig& cfg);

} // namespace slcs2
