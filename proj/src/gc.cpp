#include "gravc/gc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gravc {

namespace {

// Attraction grows linearly with distance inside this radius instead of
// following r^(1-p). Removes the near-contact singularity and keeps the
// discrete update stable for g = 1, dt = 1 (core stiffness <= 1).
constexpr double kNearFieldRadius = 1.0;

}  // namespace

GcEngine::GcEngine(int dim, GcParams params, std::uint64_t seed)
    : q_(dim), params_(params), seed_(seed), rng_(seed) {
    if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
    params_.validate();
}

void GcEngine::ingest(std::span<const double> coords) {
    if (static_cast<int>(coords.size()) != q_)
        throw std::invalid_argument("feature vector dimension mismatch");
    for (double c : coords) {
        if (!std::isfinite(c))
            throw std::invalid_argument("feature vector must be finite");
    }
    fixed_.insert(fixed_.end(), coords.begin(), coords.end());
    const double sigma = std::sqrt(params_.emission_spread);
    for (int k = 0; k < q_; ++k) pos_.push_back(coords[k] + sigma * rng_.normal());
    vel_.insert(vel_.end(), q_, 0.0);
    mass_.push_back(1.0);
    ++emissions_;
}

void GcEngine::add_mobile_unit(Vec position, Vec velocity, double mass) {
    if (static_cast<int>(position.size()) != q_ ||
        static_cast<int>(velocity.size()) != q_)
        throw std::invalid_argument("mobile unit dimension mismatch");
    pos_.insert(pos_.end(), position.begin(), position.end());
    vel_.insert(vel_.end(), velocity.begin(), velocity.end());
    mass_.push_back(mass);
    // emission_count() deliberately not touched: it tracks ingest() only
}

Vec damping_force(std::span<const double> velocity, double k_damp) {
    Vec f(velocity.size());
    for (std::size_t i = 0; i < velocity.size(); ++i) f[i] = -k_damp * velocity[i];
    return f;
}

void GcEngine::field_at(const double* x, double* out) const {
    for (int k = 0; k < q_; ++k) out[k] = 0.0;
    const std::size_t n = fixed_.size() / q_;
    if (n == 0) return;

    const double cutoff2 = params_.cutoff * params_.cutoff;
    const ExponentRule rule = params_.exponent_rule;
    std::uint64_t contributing = 0;

    for (std::size_t j = 0; j < n; ++j) {
        const double* d = &fixed_[j * q_];
        double r2 = 0.0;
        for (int k = 0; k < q_; ++k) {
            const double diff = d[k] - x[k];
            r2 += diff * diff;
        }
        if (r2 == 0.0 || r2 > cutoff2) continue;  // coincident or out of range
        ++contributing;
        const double r = std::sqrt(r2);
        const double rc = std::max(r, kNearFieldRadius);
        const double inv_denom =
            (rc == 1.0) ? 1.0 : std::exp(-rule(r) * std::log(rc));
        for (int k = 0; k < q_; ++k) out[k] += (d[k] - x[k]) * inv_denom;
    }
    if (contributing == 0) return;
    force_terms_ += contributing;
    const double scale = 1.0 / static_cast<double>(contributing);
    for (int k = 0; k < q_; ++k) out[k] *= scale;
}

Vec GcEngine::gravitational_force(std::span<const double> position,
                                  double mass) const {
    if (static_cast<int>(position.size()) != q_)
        throw std::invalid_argument("position dimension mismatch");
    Vec f(q_, 0.0);
    field_at(position.data(), f.data());
    for (double& v : f) v *= params_.g * mass;  // attractor unit mass folded in
    return f;
}

ClusterEstimate GcEngine::step() {
    const std::size_t n = mass_.size();
    if (n > 0) {
        accel_.assign(n * q_, 0.0);
        // forces from the pre-step snapshot; f_grav/m is mass-independent
        for (std::size_t i = 0; i < n; ++i)
            field_at(&pos_[i * q_], &accel_[i * q_]);
        const double dt = params_.dt;
        const double decay = 1.0 - params_.k_damp * dt;
        for (std::size_t i = 0; i < n; ++i) {
            for (int k = 0; k < q_; ++k) {
                double& v = vel_[i * q_ + k];
                v = decay * v + params_.g * accel_[i * q_ + k] * dt;
                pos_[i * q_ + k] += v * dt;
            }
        }
        combine_units();
    }
    ++steps_;
    if (steps_ % static_cast<std::uint64_t>(params_.enumerate_every) == 0)
        last_estimate_ = estimate();
    return last_estimate_;
}

void GcEngine::combine_units() {
    const int n = static_cast<int>(mass_.size());
    if (n < 2) return;

    // pairwise distances of the pre-merge configuration
    std::vector<double> dist(static_cast<std::size_t>(n) * n, 0.0);
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            double r2 = 0.0;
            for (int k = 0; k < q_; ++k) {
                const double d = pos_[a * q_ + k] - pos_[b * q_ + k];
                r2 += d * d;
            }
            const double r = std::sqrt(r2);
            dist[a * n + b] = r;
            dist[b * n + a] = r;
        }
    }

    struct Pair {
        double d;
        int a, b;
    };
    std::vector<Pair> pairs;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (dist[a * n + b] <= params_.merge_radius)
                pairs.push_back({dist[a * n + b], a, b});
    if (pairs.empty()) return;
    std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) {
        if (x.d != y.d) return x.d < y.d;
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    });

    std::vector<char> alive(n, 1);
    std::vector<int> live;
    live.reserve(n);
    for (int i = 0; i < n; ++i) live.push_back(i);

    auto mean_dist = [&](int i) {
        double s = 0.0;
        for (int j : live) s += dist[i * n + j];
        return s / static_cast<double>(live.size());
    };

    for (const Pair& p : pairs) {
        if (!alive[p.a] || !alive[p.b]) continue;  // pair references a removed unit
        const double ma = mean_dist(p.a);
        const double mb = mean_dist(p.b);
        const int keep = (mb < ma) ? p.b : p.a;  // tie keeps the lower index
        const int drop = (keep == p.a) ? p.b : p.a;

        const double mk = mass_[keep], md = mass_[drop];
        const double total = mk + md;
        for (int k = 0; k < q_; ++k) {
            pos_[keep * q_ + k] =
                (mk * pos_[keep * q_ + k] + md * pos_[drop * q_ + k]) / total;
            vel_[keep * q_ + k] =
                (mk * vel_[keep * q_ + k] + md * vel_[drop * q_ + k]) / total;
        }
        mass_[keep] = total;
        alive[drop] = 0;
        live.erase(std::find(live.begin(), live.end(), drop));
    }

    // reindex survivors
    int w = 0;
    for (int i = 0; i < n; ++i) {
        if (!alive[i]) continue;
        if (w != i) {
            for (int k = 0; k < q_; ++k) {
                pos_[w * q_ + k] = pos_[i * q_ + k];
                vel_[w * q_ + k] = vel_[i * q_ + k];
            }
            mass_[w] = mass_[i];
        }
        ++w;
    }
    pos_.resize(static_cast<std::size_t>(w) * q_);
    vel_.resize(static_cast<std::size_t>(w) * q_);
    mass_.resize(w);
}

ClusterEstimate GcEngine::estimate() const {
    ClusterEstimate est;
    for (std::size_t i = 0; i < mass_.size(); ++i) {
        if (mass_[i] >= params_.mass_threshold) {
            est.centroids.emplace_back(pos_.begin() + i * q_,
                                       pos_.begin() + (i + 1) * q_);
            est.masses.push_back(mass_[i]);
        }
    }
    est.k_hat = static_cast<int>(est.centroids.size());
    return est;
}

double GcEngine::total_mobile_mass() const {
    double s = 0.0;
    for (double m : mass_) s += m;
    return s;
}

std::vector<MobileUnit> GcEngine::mobile_units() const {
    std::vector<MobileUnit> units;
    units.reserve(mass_.size());
    for (std::size_t i = 0; i < mass_.size(); ++i) {
        MobileUnit u;
        u.position.assign(pos_.begin() + i * q_, pos_.begin() + (i + 1) * q_);
        u.velocity.assign(vel_.begin() + i * q_, vel_.begin() + (i + 1) * q_);
        u.mass = mass_[i];
        units.push_back(std::move(u));
    }
    return units;
}

std::vector<ClusterEstimate> run_stream(GcEngine& engine,
                                        std::span<const Vec> stream) {
    std::vector<ClusterEstimate> out;
    out.reserve(stream.size());
    for (const Vec& v : stream) {
        engine.ingest(v);
        out.push_back(engine.step());
    }
    return out;
}

}  // namespace gravc
