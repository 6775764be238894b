#include "acfront/sim.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

namespace acfront {

double monotone_dt_limit(const BistableNonlinearity& f) {
    return 1.0 / (4.0 + f.sup_abs_derivative(-1.0, 2.0));
}

double default_dt(const BistableNonlinearity& f) { return 0.2 * monotone_dt_limit(f); }

SimConfig SimConfig::defaults(const BistableNonlinearity& f, double t_end) {
    SimConfig cfg;
    cfg.f = f;
    cfg.dt = default_dt(f);
    cfg.t_end = t_end;
    cfg.record_every = std::max(1, static_cast<int>(std::ceil(1.0 / cfg.dt - 1e-9)));
    return cfg;
}

void SimConfig::validate() const {
    if (!(dt > 0.0)) throw UsageError("time step must be positive");
    if (dt * (4.0 + f.sup_abs_derivative(-1.0, 2.0)) > 1.0 + 1e-12)
        throw UsageError("time step violates the monotone-scheme bound dt (4 + sup|g'|) <= 1");
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw UsageError("t_end must be finite and >= 0");
    if (record_every < 1) throw UsageError("record_every must be at least 1");
    if (threads < 1) throw UsageError("threads must be at least 1");
}

namespace {

void step_rows(const LatticeField& u, LatticeField& out, const BistableNonlinearity& f, double dt,
               int j_begin, int j_end) {
    const int w = u.width();
    const int h = u.height();
    for (int j = j_begin; j < j_end; ++j) {
        const int jm = wrap_index(j - 1, h, u.boundary_j());
        const int jp = wrap_index(j + 1, h, u.boundary_j());
        for (int ix = 0; ix < w; ++ix) {
            const double c = u.cell(ix, j);
            const double left = ix > 0 ? u.cell(ix - 1, j) : 0.0;
            const double right = ix + 1 < w ? u.cell(ix + 1, j) : 1.0;
            const double lap = right + u.cell(ix, jp) + left + u.cell(ix, jm) - 4.0 * c;
            out.cell(ix, j) = c + dt * (lap + f(c));
        }
    }
}

}  // namespace

void step_into(const LatticeField& u, LatticeField& out, const SimConfig& cfg) {
    if (out.width() != u.width() || out.height() != u.height() || out.i_offset() != u.i_offset() ||
        out.boundary_j() != u.boundary_j())
        out = LatticeField(u.width(), u.height(), u.i_offset(), u.boundary_j());
    const int parts = std::min(cfg.threads, u.height());
    if (parts <= 1) {
        step_rows(u, out, cfg.f, cfg.dt, 0, u.height());
    } else {
        std::vector<std::thread> workers;
        workers.reserve(static_cast<std::size_t>(parts));
        for (int p = 0; p < parts; ++p) {
            const int j0 = u.height() * p / parts;
            const int j1 = u.height() * (p + 1) / parts;
            workers.emplace_back(step_rows, std::cref(u), std::ref(out), std::cref(cfg.f), cfg.dt, j0, j1);
        }
        for (auto& t : workers) t.join();
    }
    if (!out.all_finite()) throw NonFinite("time step produced non-finite values");
}

LatticeField step(const LatticeField& u, const SimConfig& cfg) {
    LatticeField out(u.width(), u.height(), u.i_offset(), u.boundary_j());
    step_into(u, out, cfg);
    return out;
}

long step_count(const SimConfig& cfg) { return std::lround(cfg.t_end / cfg.dt); }

LatticeField run(LatticeField u0, const SimConfig& cfg, const Observer& observer) {
    cfg.validate();
    if (!u0.all_finite()) throw NonFinite("initial field is not finite");
    const long steps = step_count(cfg);
    LatticeField cur = std::move(u0);
    LatticeField next(cur.width(), cur.height(), cur.i_offset(), cur.boundary_j());
    if (observer) observer(0, 0.0, cur);
    for (long s = 1; s <= steps; ++s) {
        step_into(cur, next, cfg);
        std::swap(cur, next);
        if (observer && (s % cfg.record_every == 0 || s == steps)) observer(s, s * cfg.dt, cur);
    }
    return cur;
}

LatticeField residual_J(const LatticeField& u0, const LatticeField& u1, double dt,
                        const BistableNonlinearity& f) {
    if (u0.width() != u1.width() || u0.height() != u1.height() || u0.i_offset() != u1.i_offset())
        throw UsageError("residual needs two snapshots on the same window");
    if (!(dt > 0.0)) throw UsageError("snapshot spacing must be positive");
    LatticeField J(u0.width(), u0.height(), u0.i_offset(), u0.boundary_j());
    for (int j = 0; j < u0.height(); ++j)
        for (int i = u0.i_begin(); i < u0.i_end(); ++i) {
            const double v = u0.value(i, j);
            J.at(i, j) = (u1.value(i, j) - v) / dt - discrete_laplacian(u0, i, j) - f(v);
        }
    return J;
}

}  // namespace acfront
