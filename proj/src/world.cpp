#include "slcs2/world.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace slcs2 {

std::string to_string(EnvType t) {
    switch (t) {
        case EnvType::Open: return "open";
        case EnvType::Urban: return "urban";
        case EnvType::OpenJammed: return "jammed";
        case EnvType::UrbanJammed: return "urban_jammed";
    }
    return "?";
}

std::string to_string(RangeClass r) { return r == RangeClass::Short ? "short" : "long"; }

EnvType parse_env_type(const std::string& s) {
    if (s == "open") return EnvType::Open;
    if (s == "urban") return EnvType::Urban;
    if (s == "jammed" || s == "open_jammed") return EnvType::OpenJammed;
    if (s == "urban_jammed") return EnvType::UrbanJammed;
    throw std::invalid_argument("unknown environment type: " + s);
}

RangeClass parse_range_class(const std::string& s) {
    if (s == "short") return RangeClass::Short;
    if (s == "long") return RangeClass::Long;
    throw std::invalid_argument("unknown range class: " + s);
}

double default_distance(RangeClass r) { return r == RangeClass::Short ? 600.0 : 1000.0; }
long default_time_limit(RangeClass r) { return r == RangeClass::Short ? 20000 : 40000; }

namespace {

struct Building {
    double x0, y0, x1, y1;
};

bool rect_contains(const Building& b, const Vec2& p, double pad) {
    return p.x >= b.x0 - pad && p.x <= b.x1 + pad && p.y >= b.y0 - pad && p.y <= b.y1 + pad;
}

} // namespace

std::vector<Wall> generate_urban(const WorldConfig& cfg, Rng& rng, int* buildingCount) {
    std::vector<Wall> walls;
    int maxCount = std::max(1, (int)(cfg.sourceSinkDistance / 10.0));
    int count = rng.uniform_int(1, maxCount);
    int placedTotal = 0;
    Vec2 source{cfg.edgeMargin, cfg.height() / 2.0};
    Vec2 sink{cfg.edgeMargin + cfg.sourceSinkDistance, cfg.height() / 2.0};
    for (int bIdx = 0; bIdx < count; ++bIdx) {
        double len = rng.uniform(10.0, 30.0);
        double wid = rng.uniform(10.0, 30.0);
        Building b{};
        bool placed = false;
        for (int tries = 0; tries < 1000 && !placed; ++tries) {
            double cx = rng.uniform(len / 2.0, cfg.width() - len / 2.0);
            double cy = rng.uniform(wid / 2.0, cfg.height() - wid / 2.0);
            b = Building{cx - len / 2.0, cy - wid / 2.0, cx + len / 2.0, cy + wid / 2.0};
            placed = !rect_contains(b, source, 2.0) && !rect_contains(b, sink, 2.0);
        }
        if (!placed) continue;
        ++placedTotal;
        double xm = (b.x0 + b.x1) / 2.0, ym = (b.y0 + b.y1) / 2.0;
        const Wall candidates[6] = {
            {{b.x0, b.y0}, {b.x1, b.y0}},  // bottom
            {{b.x0, b.y1}, {b.x1, b.y1}},  // top
            {{b.x0, b.y0}, {b.x0, b.y1}},  // left
            {{b.x1, b.y0}, {b.x1, b.y1}},  // right
            {{xm, b.y0}, {xm, b.y1}},      // vertical divider
            {{b.x0, ym}, {b.x1, ym}},      // horizontal divider
        };
        for (const Wall& w : candidates)
            if (rng.uniform01() < 0.5) walls.push_back(w);
    }
    if (buildingCount) *buildingCount = placedTotal;
    return walls;
}

Vec2 place_jammer(const WorldConfig& cfg, std::span<const Wall> walls, const Vec2& source, const Vec2& sink, Rng& rng) {
    // keep the endpoints usable: deterministic jam power at both must stay at or
    // below the thermal floor
    auto quiet_at = [&](const Vec2& p, const Vec2& node) {
        double pl = deterministic_path_loss(cfg.radio, p.dist(node),
                                            count_wall_crossings(walls, p, node));
        return cfg.radio.txPowerDbm - pl <= cfg.radio.noiseFloorDbm;
    };
    for (int tries = 0; tries < 200; ++tries) {
        Vec2 p{rng.uniform(0.0, cfg.width()), rng.uniform(0.0, cfg.height())};
        if (quiet_at(p, source) && quiet_at(p, sink)) return p;
    }
    Vec2 corners[4] = {{0, 0}, {cfg.width(), 0}, {0, cfg.height()}, {cfg.width(), cfg.height()}};
    Vec2 best = corners[0];
    double bestScore = -1.0;
    for (const Vec2& c : corners) {
        double score = std::min(c.dist(source), c.dist(sink));
        if (score > bestScore) { bestScore = score; best = c; }
    }
    return best;
}

World::World(const WorldConfig& cfg, uint64_t seed) : cfg_(cfg), rng_(seed) {
    source_ = Vec2{cfg_.edgeMargin, cfg_.height() / 2.0};
    sink_ = Vec2{cfg_.edgeMargin + cfg_.sourceSinkDistance, cfg_.height() / 2.0};
    if (env_has_walls(cfg_.type)) walls_ = generate_urban(cfg_, rng_);
    if (env_has_jammer(cfg_.type)) {
        Jammer j;
        j.pos = place_jammer(cfg_, walls_, source_, sink_, rng_);
        j.powerDbm = cfg_.radio.txPowerDbm;
        jammers_.push_back(j);
    }
    agents_.resize(cfg_.swarmSize);
    for (AgentBody& a : agents_) {
        bool ok = false;
        for (int tries = 0; tries < 200 && !ok; ++tries) {
            double ang = rng_.uniform(0.0, 2.0 * 3.14159265358979323846);
            double r = cfg_.spawnRadius * std::sqrt(rng_.uniform01());
            a.pos = source_ + Vec2{r * std::cos(ang), r * std::sin(ang)};
            ok = position_clear(a.pos) && a.pos.x > cfg_.agentRadius &&
                 a.pos.x < cfg_.width() - cfg_.agentRadius && a.pos.y > cfg_.agentRadius &&
                 a.pos.y < cfg_.height() - cfg_.agentRadius;
        }
        if (!ok) a.pos = source_;
    }
    packets_.resize(cfg_.packets);
    for (int i = 0; i < cfg_.packets; ++i)
        sourceQueue_.push_back(cfg_.packets - 1 - i);  // back of the vector leaves first
}

Vec2 World::node_pos(int id) const {
    if (id < (int)agents_.size()) return agents_[id].pos;
    if (id == source_id()) return source_;
    return sink_;
}

bool World::position_clear(const Vec2& p) const {
    for (const Wall& w : walls_) {
        double margin = w.thickness / 2.0 + cfg_.agentRadius;
        if (point_segment_distance(p, w.a, w.b) < margin) return false;
    }
    return true;
}

namespace {

bool sweep_clear(const std::vector<Wall>& walls, double agentRadius, const Vec2& from, const Vec2& to,
                 const Wall** hit) {
    for (const Wall& w : walls) {
        double margin = w.thickness / 2.0 + agentRadius;
        if (segment_segment_distance(from, to, w.a, w.b) < margin - 1e-9) {
            if (hit) *hit = &w;
            return false;
        }
    }
    return true;
}

} // namespace

Vec2 World::move_with_collisions(const Vec2& from, const Vec2& disp) const {
    if (disp.norm() < 1e-12) return from;
    auto clamped = [&](Vec2 p) {
        p.x = std::clamp(p.x, cfg_.agentRadius, cfg_.width() - cfg_.agentRadius);
        p.y = std::clamp(p.y, cfg_.agentRadius, cfg_.height() - cfg_.agentRadius);
        return p;
    };
    Vec2 goal = clamped(from + disp);
    Vec2 want = goal - from;
    const Wall* hit = nullptr;
    if (sweep_clear(walls_, cfg_.agentRadius, from, goal, &hit)) return goal;

    // bisect for the largest collision-free fraction of the displacement
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 32; ++it) {
        double mid = (lo + hi) / 2.0;
        if (sweep_clear(walls_, cfg_.agentRadius, from, from + want * mid, nullptr))
            lo = mid;
        else
            hi = mid;
    }
    Vec2 stopped = from + want * lo;

    // slide the unused part of the displacement along the blocking wall
    Vec2 rest = want * (1.0 - lo);
    Vec2 tangent = (hit->b - hit->a);
    if (tangent.norm() > 1e-12) {
        tangent = tangent.unit();
        Vec2 slide = tangent * rest.dot(tangent);
        if (slide.norm() > 1e-9) {
            Vec2 tryPos = clamped(stopped + slide);
            if (sweep_clear(walls_, cfg_.agentRadius, stopped, tryPos, nullptr)) return tryPos;
            double slo = 0.0, shi = 1.0;
            Vec2 sw = tryPos - stopped;
            for (int it = 0; it < 32; ++it) {
                double mid = (slo + shi) / 2.0;
                if (sweep_clear(walls_, cfg_.agentRadius, stopped, stopped + sw * mid, nullptr))
                    slo = mid;
                else
                    shi = mid;
            }
            return stopped + sw * slo;
        }
    }
    return stopped;
}

struct Transmission {
    int from = -1;
    int to = -1;
    int channel = 1;
    double powerDbm = 0.0;
    Vec2 pos{};
    int initiator = -1;  // agent whose command created this transmission
    bool isResponse = false;
};

StepReport World::resolve(const std::vector<ResolvedCommand>& cmds) {
    int n = (int)agents_.size();
    StepReport rep;
    rep.moved.assign(n, 0);
    rep.commanded.assign(n, 0);
    rep.commFailed.assign(n, 0);

    // movement
    for (int i = 0; i < n; ++i) {
        const ResolvedCommand& c = cmds[i];
        if (c.kind == ResolvedCommand::Kind::Idle) continue;
        rep.commanded[i] = 1;
        if (c.kind == ResolvedCommand::Kind::Move) {
            rep.moved[i] = 1;
            if (c.dir.norm() > 1e-12)
                agents_[i].pos = move_with_collisions(agents_[i].pos, c.dir.unit() * cfg_.agentSpeed);
        } else if (c.kind == ResolvedCommand::Kind::Orbit) {
            rep.moved[i] = 1;
            if (c.orbitValid) {
                Vec2 radial = agents_[i].pos - c.orbitCenter;
                double r = radial.norm();
                if (r > 1e-9) {
                    // rotate counter-clockwise by the arc the speed allows
                    double theta = cfg_.agentSpeed / r;
                    double ct = std::cos(theta), st = std::sin(theta);
                    Vec2 rotated{radial.x * ct - radial.y * st, radial.x * st + radial.y * ct};
                    Vec2 target = c.orbitCenter + rotated;
                    agents_[i].pos = move_with_collisions(agents_[i].pos, target - agents_[i].pos);
                }
            }
        }
    }

    // declare this step's data transmissions at post-move positions
    std::vector<Transmission> txs;
    for (int i = 0; i < n; ++i) {
        const ResolvedCommand& c = cmds[i];
        double txPower = cfg_.radio.txPowerDbm + 10.0 * std::log10(std::max(c.powerFrac, 1e-6));
        if (c.kind == ResolvedCommand::Kind::Send) {
            if (c.receiver >= 0 && agents_[i].packet >= 0)
                txs.push_back({i, c.receiver, c.channel, txPower, agents_[i].pos, i, false});
            else
                rep.commFailed[i] = 1;
        } else if (c.kind == ResolvedCommand::Kind::Collect) {
            if (c.receiver == source_id() && agents_[i].packet < 0 && !sourceQueue_.empty()) {
                txs.push_back({i, source_id(), c.channel, txPower, agents_[i].pos, i, false});
                txs.push_back({source_id(), i, c.channel, cfg_.radio.txPowerDbm, source_, i, true});
            } else {
                rep.commFailed[i] = 1;
            }
        }
    }

    // jammers lock onto the lowest active channel they can hear
    jammer_step(txs, rep);

    // reception; one initiating agent at a time, in id order
    auto interference_mw = [&](const Transmission& sig, const Vec2& rxPos, int rxNode) {
        double mw = 0.0;
        for (const Transmission& t : txs) {
            if (t.channel != sig.channel || t.from == sig.from || t.from == rxNode) continue;
            mw += dbm_to_mw(t.powerDbm - path_loss(cfg_.radio, t.pos, rxPos, walls_, rng_));
        }
        for (const Jammer& j : jammers_) {
            if (j.jammedChannel != sig.channel) continue;
            mw += dbm_to_mw(j.powerDbm - path_loss(cfg_.radio, j.pos, rxPos, walls_, rng_));
        }
        return mw;
    };
    auto receives = [&](const Transmission& sig) {
        Vec2 rxPos = node_pos(sig.to);
        double rx = sig.powerDbm - path_loss(cfg_.radio, sig.pos, rxPos, walls_, rng_);
        return reception_ok(cfg_.radio, snir_db(cfg_.radio, rx, interference_mw(sig, rxPos, sig.to)));
    };

    for (int i = 0; i < n; ++i) {
        const ResolvedCommand& c = cmds[i];
        if (c.kind == ResolvedCommand::Kind::Send) {
            auto it = std::find_if(txs.begin(), txs.end(), [&](const Transmission& t) {
                return t.initiator == i && !t.isResponse;
            });
            if (it == txs.end()) continue;
            int pk = agents_[i].packet;
            if (pk < 0) { rep.commFailed[i] = 1; continue; }  // custody lost earlier in this step
            bool capacityOk = c.receiver == sink_id() || c.receiver == source_id() ||
                              (c.receiver < n && agents_[c.receiver].packet < 0);
            if (capacityOk && receives(*it)) {
                agents_[i].packet = -1;
                PacketState& ps = packets_[pk];
                if (c.receiver == sink_id()) {
                    ps.phase = PacketPhase::Delivered;
                    ps.holder = -1;
                    ++delivered_;
                } else if (c.receiver == source_id()) {
                    ps.phase = PacketPhase::AtSource;
                    ps.holder = -1;
                    sourceQueue_.push_back(pk);
                } else {
                    ps.holder = c.receiver;
                    ps.touchedBy.insert(c.receiver);
                    agents_[c.receiver].packet = pk;
                }
                rep.transfers.push_back({i, c.receiver, pk, c.channel});
            } else {
                rep.commFailed[i] = 1;
            }
        } else if (c.kind == ResolvedCommand::Kind::Collect) {
            auto req = std::find_if(txs.begin(), txs.end(), [&](const Transmission& t) {
                return t.initiator == i && !t.isResponse;
            });
            if (req == txs.end()) continue;
            auto resp = std::find_if(txs.begin(), txs.end(), [&](const Transmission& t) {
                return t.initiator == i && t.isResponse;
            });
            if (agents_[i].packet >= 0 || sourceQueue_.empty()) { rep.commFailed[i] = 1; continue; }
            bool ok = receives(*req) && receives(*resp);
            if (ok) {
                int pk = sourceQueue_.back();
                sourceQueue_.pop_back();
                agents_[i].packet = pk;
                packets_[pk].phase = PacketPhase::Held;
                packets_[pk].holder = i;
                packets_[pk].touchedBy.insert(i);
                rep.transfers.push_back({source_id(), i, pk, c.channel});
            } else {
                rep.commFailed[i] = 1;
            }
        }
    }
    return rep;
}

void World::jammer_step(const std::vector<Transmission>& txs, StepReport& rep) {
    for (Jammer& j : jammers_) {
        j.jammedChannel = 0;
        int best = 0;
        for (const Transmission& t : txs) {
            if (best != 0 && t.channel >= best) continue;
            double rx = t.powerDbm - path_loss(cfg_.radio, t.pos, j.pos, walls_, rng_);
            if (rx >= cfg_.radio.noiseFloorDbm + cfg_.radio.detectionMarginDb)
                if (best == 0 || t.channel < best) best = t.channel;
        }
        j.jammedChannel = best;
        rep.jammedChannels.push_back(best);
    }
}

std::vector<int> World::contribution_counts() const {
    std::vector<int> counts(agents_.size(), 0);
    for (const PacketState& p : packets_) {
        if (p.phase != PacketPhase::Delivered) continue;
        for (int id : p.touchedBy)
            if (id >= 0 && id < (int)counts.size()) ++counts[id];
    }
    return counts;
}

} // namespace slcs2
