#include "fluxrec/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace fluxrec {

namespace {

double seg_lo(const Segment& s) {
    return std::holds_alternative<ConstantSegment>(s) ? std::get<ConstantSegment>(s).x_lo
                                                      : std::get<FanSegment>(s).x_lo();
}

double seg_hi(const Segment& s) {
    return std::holds_alternative<ConstantSegment>(s) ? std::get<ConstantSegment>(s).x_hi
                                                      : std::get<FanSegment>(s).x_hi();
}

void require_monotone(const std::vector<ProfileSample>& samples, double get(const State&),
                      const char* name) {
    double span = 0.0;
    for (const auto& s : samples)
        span = std::max(span, std::fabs(get(s.state)));
    const double slack = 1e-11 * (1.0 + span);
    int dir = 0;
    for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
        const double d = get(samples[k + 1].state) - get(samples[k].state);
        if (d > slack) {
            if (dir < 0) throw SchemaError(std::string("fan segment: ") + name +
                                           " is not monotone in x");
            dir = 1;
        } else if (d < -slack) {
            if (dir > 0) throw SchemaError(std::string("fan segment: ") + name +
                                           " is not monotone in x");
            dir = -1;
        }
    }
}

}  // namespace

State ObservedProfile::left_state() const {
    return std::get<ConstantSegment>(segments.front()).state;
}

State ObservedProfile::right_state() const {
    return std::get<ConstantSegment>(segments.back()).state;
}

void ObservedProfile::validate() const {
    if (!(T > 0.0)) throw SchemaError("profile: T must be positive");
    if (segments.empty()) throw SchemaError("profile: no segments");
    if (!std::holds_alternative<ConstantSegment>(segments.front()) ||
        !std::holds_alternative<ConstantSegment>(segments.back()))
        throw SchemaError("profile: first and last segments must be constant far fields");
    const double slack = 1e-12 * (1.0 + std::fabs(x_max - x_min));
    if (std::fabs(seg_lo(segments.front()) - x_min) > slack ||
        std::fabs(seg_hi(segments.back()) - x_max) > slack)
        throw SchemaError("profile: segments do not span [x_min, x_max]");
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const double lo = seg_lo(segments[i]);
        const double hi = seg_hi(segments[i]);
        if (!(hi >= lo)) throw SchemaError("profile: segment with negative width");
        if (i > 0 && std::fabs(seg_hi(segments[i - 1]) - lo) > slack)
            throw SchemaError("profile: segments do not tile without gaps or overlaps");
        if (const auto* fan = std::get_if<FanSegment>(&segments[i])) {
            if (fan->samples.size() < 2) throw SchemaError("profile: fan with < 2 samples");
            for (std::size_t k = 0; k + 1 < fan->samples.size(); ++k)
                if (!(fan->samples[k + 1].x > fan->samples[k].x))
                    throw SchemaError("profile: fan samples not strictly increasing in x");
            require_monotone(fan->samples, [](const State& s) { return s.u; }, "u");
            require_monotone(fan->samples, [](const State& s) { return s.v; }, "v");
        }
    }
}

ObservedProfile observe(const RiemannSolution& sol, double T, int samples_per_fan,
                        double margin) {
    if (!(T > 0.0)) throw Error("observe: T must be positive");
    if (samples_per_fan < 2) throw Error("observe: samples_per_fan must be at least 2");
    if (!(margin > 0.0)) throw Error("observe: margin must be positive");

    ObservedProfile p;
    p.T = T;
    if (sol.waves.empty()) {
        p.x_min = -margin;
        p.x_max = margin;
        p.segments.push_back(ConstantSegment{p.x_min, p.x_max, sol.left});
        return p;
    }

    p.x_min = sol.waves.front().min_speed() * T - margin;
    p.x_max = sol.waves.back().max_speed() * T + margin;

    double cursor = p.x_min;
    State cur_state = sol.waves.front().left;
    for (const auto& w : sol.waves) {
        const double lo = w.min_speed() * T;
        const double hi = w.max_speed() * T;
        p.segments.push_back(ConstantSegment{cursor, lo, cur_state});
        if (w.kind == WaveKind::Rarefaction) {
            FanSegment fan;
            fan.samples.reserve(samples_per_fan);
            fan.samples.push_back({lo, w.left});
            for (int i = 1; i + 1 < samples_per_fan; ++i) {
                const double xi =
                    w.xi_span.lo + w.xi_span.length() * i / (samples_per_fan - 1);
                fan.samples.push_back({xi * T, fan_state_at_xi(sol.flux_pair, w, xi)});
            }
            fan.samples.push_back({hi, w.right});
            p.segments.push_back(std::move(fan));
        }
        cursor = hi;
        cur_state = w.right;
    }
    p.segments.push_back(ConstantSegment{cursor, p.x_max, cur_state});
    p.validate();
    return p;
}

DetectedWaves detect_waves(const ObservedProfile& p, double jump_tol) {
    if (!(jump_tol > 0.0)) throw Error("detect_waves: jump_tol must be positive");
    p.validate();
    DetectedWaves out;
    for (std::size_t i = 0; i < p.segments.size(); ++i) {
        if (const auto* fan = std::get_if<FanSegment>(&p.segments[i])) {
            DetectedWave w;
            w.kind = WaveKind::Rarefaction;
            w.interval = {fan->x_lo(), fan->x_hi()};
            w.left = fan->samples.front().state;
            w.right = fan->samples.back().state;
            w.segment_index = static_cast<int>(i);
            out.waves.push_back(w);
            ++out.fan_count;
            continue;
        }
        if (i + 1 >= p.segments.size()) continue;
        const auto* a = std::get_if<ConstantSegment>(&p.segments[i]);
        const auto* b = std::get_if<ConstantSegment>(&p.segments[i + 1]);
        if (!a || !b) continue;
        const double jump =
            std::max(std::fabs(b->state.u - a->state.u), std::fabs(b->state.v - a->state.v));
        if (jump >= 0.1 * jump_tol && jump <= 10.0 * jump_tol)
            out.warnings.push_back("ambiguous jump " + fmt_full(jump) + " at x = " +
                                   fmt_full(a->x_hi) + " (tolerance " + fmt_full(jump_tol) +
                                   ")");
        if (jump > jump_tol) {
            DetectedWave w;
            w.kind = WaveKind::Shock;
            w.position = a->x_hi;
            w.left = a->state;
            w.right = b->state;
            w.segment_index = static_cast<int>(i + 1);
            out.waves.push_back(w);
            ++out.shock_count;
        }
    }
    return out;
}

namespace {

// Trapezoid integrals of u and v over a fan segment.
std::pair<double, double> fan_integrals(const FanSegment& fan) {
    double iu = 0.0, iv = 0.0;
    for (std::size_t k = 0; k + 1 < fan.samples.size(); ++k) {
        const double dx = fan.samples[k + 1].x - fan.samples[k].x;
        iu += 0.5 * dx * (fan.samples[k].state.u + fan.samples[k + 1].state.u);
        iv += 0.5 * dx * (fan.samples[k].state.v + fan.samples[k + 1].state.v);
    }
    return {iu, iv};
}

}  // namespace

EquivalentShock equivalent_shock(const ObservedProfile& p, int fan_segment_index) {
    if (fan_segment_index < 0 || fan_segment_index >= static_cast<int>(p.segments.size()))
        throw Error("equivalent_shock: segment index out of range");
    const auto* fan = std::get_if<FanSegment>(&p.segments[fan_segment_index]);
    if (!fan) throw Error("equivalent_shock: segment is not a fan");

    EquivalentShock es;
    es.interval = {fan->x_lo(), fan->x_hi()};
    const State sl = fan->samples.front().state;
    const State sr = fan->samples.back().state;
    es.du = sr.u - sl.u;
    es.dv = sr.v - sl.v;
    auto [iu, iv] = fan_integrals(*fan);

    const double x_lo = es.interval.lo, x_hi = es.interval.hi;
    const double scale_u = 1.0 + std::max(std::fabs(sl.u), std::fabs(sr.u));
    const double scale_v = 1.0 + std::max(std::fabs(sl.v), std::fabs(sr.v));

    // xi_u = (x u |_lo^hi - int u dx) / (u_hi - u_lo): only the observable
    // profile enters, never the inverse function itself.
    if (std::fabs(es.du) <= 1e-12 * scale_u) {
        es.degenerate_u = true;
        es.xi_u = es.interval.midpoint();
    } else {
        es.xi_u = (x_hi * sr.u - x_lo * sl.u - iu) / es.du;
        es.xi_u = std::clamp(es.xi_u, x_lo, x_hi);
    }
    if (std::fabs(es.dv) <= 1e-12 * scale_v) {
        es.degenerate_v = true;
        es.xi_v = es.interval.midpoint();
    } else {
        es.xi_v = (x_hi * sr.v - x_lo * sl.v - iv) / es.dv;
        es.xi_v = std::clamp(es.xi_v, x_lo, x_hi);
    }
    es.s_u = es.xi_u / p.T;
    es.s_v = es.xi_v / p.T;
    return es;
}

FluxIncrements nodal_flux_increments(const ObservedProfile& p, const DetectedWaves& waves) {
    // discontinuity supports must be ordered and pairwise disjoint
    double prev_hi = -std::numeric_limits<double>::infinity();
    for (const auto& w : waves.waves) {
        if (w.min_x() < prev_hi)
            throw InternalConsistencyError(
                "nodal_flux_increments: overlapping or unordered discontinuities");
        prev_hi = w.max_x();
    }

    FluxIncrements inc;
    for (const auto& w : waves.waves) {
        if (w.kind == WaveKind::Shock) {
            const double s = w.position / p.T;
            inc.df1 += s * (w.right.u - w.left.u);
            inc.df2 += s * (w.right.v - w.left.v);
        } else {
            const auto* fan = std::get_if<FanSegment>(&p.segments[w.segment_index]);
            if (!fan)
                throw InternalConsistencyError(
                    "nodal_flux_increments: fan wave does not reference a fan segment");
            auto [iu, iv] = fan_integrals(*fan);
            const State sl = fan->samples.front().state;
            const State sr = fan->samples.back().state;
            const double x_lo = fan->x_lo(), x_hi = fan->x_hi();
            // s_u * du and s_v * dv in jump-free form: exact also for
            // degenerate fans, whose contribution vanishes
            inc.df1 += (x_hi * sr.u - x_lo * sl.u - iu) / p.T;
            inc.df2 += (x_hi * sr.v - x_lo * sl.v - iv) / p.T;
        }
    }
    return inc;
}

nlohmann::json ObservedProfile::to_json() const {
    nlohmann::json segs = nlohmann::json::array();
    for (const auto& seg : segments) {
        if (const auto* c = std::get_if<ConstantSegment>(&seg)) {
            segs.push_back({{"kind", "constant"},
                            {"x_lo", c->x_lo},
                            {"x_hi", c->x_hi},
                            {"u", c->state.u},
                            {"v", c->state.v}});
        } else {
            const auto& fan = std::get<FanSegment>(seg);
            nlohmann::json samples = nlohmann::json::array();
            for (const auto& s : fan.samples) samples.push_back({s.x, s.state.u, s.state.v});
            segs.push_back({{"kind", "fan"}, {"samples", std::move(samples)}});
        }
    }
    return nlohmann::json{
        {"T", T}, {"x_min", x_min}, {"x_max", x_max}, {"segments", std::move(segs)}};
}

ObservedProfile ObservedProfile::from_json(const nlohmann::json& j) {
    ObservedProfile p;
    try {
        p.T = j.at("T").get<double>();
        p.x_min = j.at("x_min").get<double>();
        p.x_max = j.at("x_max").get<double>();
        for (const auto& seg : j.at("segments")) {
            const std::string kind = seg.at("kind").get<std::string>();
            if (kind == "constant") {
                p.segments.push_back(ConstantSegment{
                    seg.at("x_lo").get<double>(), seg.at("x_hi").get<double>(),
                    State{seg.at("u").get<double>(), seg.at("v").get<double>()}});
            } else if (kind == "fan") {
                FanSegment fan;
                for (const auto& s : seg.at("samples")) {
                    if (!s.is_array() || s.size() != 3)
                        throw SchemaError("profile JSON: fan sample must be [x, u, v]");
                    fan.samples.push_back(
                        {s[0].get<double>(), State{s[1].get<double>(), s[2].get<double>()}});
                }
                p.segments.push_back(std::move(fan));
            } else {
                throw SchemaError("profile JSON: unknown segment kind '" + kind + "'");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("profile JSON: ") + e.what());
    }
    p.validate();
    return p;
}

void ObservedProfile::write_csv(std::ostream& os) const {
    os << "x,u,v,segment_kind,segment_id\n";
    for (std::size_t i = 0; i < segments.size(); ++i) {
        if (const auto* c = std::get_if<ConstantSegment>(&segments[i])) {
            os << fmt_full(c->x_lo) << ',' << fmt_full(c->state.u) << ',' << fmt_full(c->state.v)
               << ",constant," << i << '\n';
            os << fmt_full(c->x_hi) << ',' << fmt_full(c->state.u) << ',' << fmt_full(c->state.v)
               << ",constant," << i << '\n';
        } else {
            for (const auto& s : std::get<FanSegment>(segments[i]).samples)
                os << fmt_full(s.x) << ',' << fmt_full(s.state.u) << ',' << fmt_full(s.state.v)
                   << ",fan," << i << '\n';
        }
    }
}

}  // namespace fluxrec
