#include "slcs2/radio.hpp"

#include <algorithm>

namespace slcs2 {

int count_wall_crossings(std::span<const Wall> walls, const Vec2& a, const Vec2& b) {
    int n = 0;
    for (const Wall& w : walls)
        if (segments_intersect(a, b, w.a, w.b)) ++n;
    return n;
}

double deterministic_path_loss(const RadioConfig& cfg, double dist, int wallsCrossed) {
    double d = std::max(dist, cfg.refDistance);
    return cfg.refLossDb + 10.0 * cfg.pathLossExponent * std::log10(d / cfg.refDistance) +
           cfg.wallLossDb * wallsCrossed;
}

double path_loss(const RadioConfig& cfg, const Vec2& a, const Vec2& b, std::span<const Wall> walls, Rng& rng) {
    double base = deterministic_path_loss(cfg, a.dist(b), count_wall_crossings(walls, a, b));
    if (cfg.shadowingSigmaDb > 0.0)
        base += rng.normal(0.0, cfg.shadowingSigmaDb);
    return base;
}

double snir_db(const RadioConfig& cfg, double rxPowerDbm, double interferenceMw) {
    double denomMw = dbm_to_mw(cfg.noiseFloorDbm) + std::max(0.0, interferenceMw);
    return rxPowerDbm - mw_to_dbm(denomMw);
}

double comm_range(const RadioConfig& cfg) {
    double budget = cfg.txPowerDbm - cfg.refLossDb - cfg.noiseFloorDbm - cfg.snirThresholdDb;
    return cfg.refDistance * std::pow(10.0, budget / (10.0 * cfg.pathLossExponent));
}

} // namespace slcs2
