#include "ionet/diffusion.hpp"

#include "ionet/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <thread>

namespace ionet {

namespace {

void require_seed(std::size_t size, SectorIndex seed) {
    if (seed >= size)
        throw ConfigError(fmt::format("seed sector {} out of range for {} sectors", seed, size));
}

// Production after a round of link updates: x' = (I - theta)^-1 d with
// theta_ij = w_ij / x_j. Returns an error message instead of throwing so the
// cascade can stop with its partial state.
std::optional<std::string> reequilibrate(const Matrix& w, const Vector& d, Vector& x) {
    const std::size_t s = w.rows();
    Matrix theta(s, s);
    for (std::size_t i = 0; i < s; ++i) {
        for (std::size_t j = 0; j < s; ++j) {
            const double wij = w(i, j);
            if (wij == 0.0) continue;
            if (!(x[j] > 0.0))
                return fmt::format("sector {} has zero production but receives flow {}", j, wij);
            theta(i, j) = wij / x[j];
        }
    }
    if (spectral_radius_bound(theta) >= kSpectralRadiusLimit) {
        const double rho = spectral_radius(theta);
        if (rho >= kSpectralRadiusLimit)
            return fmt::format("spectral radius estimate {:.6g} >= {}", rho, kSpectralRadiusLimit);
    }
    Matrix a(s, s);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j) a(i, j) = (i == j ? 1.0 : 0.0) - theta(i, j);
    try {
        x = LuFactorization(std::move(a)).solve(d);
    } catch (const NumericalError& e) {
        return std::string(e.what());
    }
    return std::nullopt;
}

CascadeResult run_cascade(const IOTable& table, SectorIndex seed, const ShockParams& params,
                          bool update_production) {
    const std::size_t s = table.size();
    require_seed(s, seed);
    const Matrix& z0 = table.flows();
    const double keep = 1.0 - params.f();
    const double alpha = params.alpha();

    CascadeResult res;
    res.seed = seed;
    res.final_weights = z0;
    Matrix& w = res.final_weights;
    Vector x = table.production();

    std::vector<char> hit(s, 0);
    // Sum over hit k of z_hk + z_kh in pristine weights. For an unhit h the
    // strength change is exactly f times this, since each such link has been
    // scaled once, by its hit endpoint.
    Vector exposure(s, 0.0);

    auto strike = [&](const std::vector<SectorIndex>& sectors) {
        for (SectorIndex h : sectors) hit[h] = 1;
        for (SectorIndex h : sectors) {
            for (double& v : w.row(h)) v *= keep;
            for (std::size_t i = 0; i < s; ++i)
                if (i != h) w(i, h) *= keep;
        }
        for (SectorIndex h : sectors)
            for (std::size_t k = 0; k < s; ++k)
                if (!hit[k]) exposure[k] += z0(k, h) + z0(h, k);
    };

    auto abort_with = [&](int round, const std::string& why) {
        res.status = CascadeStatus::aborted;
        res.avalanche_size = static_cast<int>(res.hits.size());
        res.diagnostic = fmt::format("production update failed after round {}: {}", round, why);
        res.final_production = x;
        return res;
    };

    strike({seed});
    if (update_production) {
        if (auto err = reequilibrate(w, table.final_demand(), x)) return abort_with(0, *err);
    }

    for (int round = 1;; ++round) {
        std::vector<SectorIndex> newly;
        for (std::size_t h = 0; h < s; ++h) {
            if (hit[h] || exposure[h] == 0.0) continue;
            if (!(x[h] > 0.0)) {
                const auto why = fmt::format(
                    "threshold undefined: sector {} has production {} and incident flow {}", h,
                    x[h], exposure[h]);
                if (update_production) return abort_with(round - 1, why);
                throw DataError(why);
            }
            if (exposure[h] > alpha * x[h]) newly.push_back(h);
        }
        if (newly.empty()) break;
        for (SectorIndex h : newly) res.hits.push_back({h, round});
        res.rounds = round;
        strike(newly);
        if (update_production) {
            if (auto err = reequilibrate(w, table.final_demand(), x))
                return abort_with(round, *err);
        }
    }
    res.avalanche_size = static_cast<int>(res.hits.size());
    if (update_production) res.final_production = std::move(x);
    return res;
}

} // namespace

int model_number(Model model) noexcept { return static_cast<int>(model); }

Model model_from_number(int n) {
    if (n < 1 || n > 3) throw ConfigError(fmt::format("unknown model {}; expected 1, 2 or 3", n));
    return static_cast<Model>(n);
}

namespace {

// c / f rounded to 15 significant digits, so that (c, f) and (lambda c, lambda f)
// map to the same double even when their quotients differ in the last ulp.
double canonical_ratio(double c, double f) {
    return std::stod(fmt::format("{:.15g}", c / f));
}

} // namespace

ShockParams::ShockParams(double f, double c) : f_(f), c_(c), alpha_(canonical_ratio(c, f)) {
    if (!(f > 0.0 && f < 1.0))
        throw ConfigError(fmt::format("shock fraction f = {} must lie in (0, 1)", f));
    if (!(c > 0.0 && c < 1.0))
        throw ConfigError(fmt::format("capacity share c = {} must lie in (0, 1)", c));
}

std::optional<int> CascadeResult::round_of(SectorIndex sector) const {
    for (const Hit& h : hits)
        if (h.sector == sector) return h.round;
    return std::nullopt;
}

std::vector<SectorIndex> CascadeResult::hit_set() const {
    std::vector<SectorIndex> out;
    out.reserve(hits.size());
    for (const Hit& h : hits) out.push_back(h.sector);
    std::sort(out.begin(), out.end());
    return out;
}

DemandShockResult model1_demand_shock(const LeontiefSystem& system, SectorIndex seed,
                                      double shock_size) {
    require_seed(system.leontief.rows(), seed);
    if (!(shock_size > 0.0) || !std::isfinite(shock_size))
        throw ConfigError(fmt::format("shock size {} must be positive", shock_size));
    DemandShockResult res;
    res.seed = seed;
    res.delta_x = system.leontief.column(seed);
    for (double& v : res.delta_x) {
        v *= -shock_size;
        if (v < 0.0) ++res.avalanche_size;
    }
    return res;
}

CascadeResult model2_cascade(const IOTable& table, SectorIndex seed, const ShockParams& params) {
    return run_cascade(table, seed, params, false);
}

CascadeResult model3_cascade(const IOTable& table, SectorIndex seed, const ShockParams& params) {
    return run_cascade(table, seed, params, true);
}

std::vector<SeedOutcome> sweep_all_seeds(const IOTable& table, const SweepOptions& options) {
    std::vector<SectorIndex> seeds = options.seeds;
    if (seeds.empty()) {
        seeds.resize(table.size());
        for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = i;
    }
    for (SectorIndex s : seeds) require_seed(table.size(), s);
    if (options.model != Model::demand && !options.params)
        throw ConfigError("models 2 and 3 need shock parameters (f, c)");

    std::vector<SeedOutcome> out(seeds.size());
    for (std::size_t i = 0; i < seeds.size(); ++i) out[i].seed = seeds[i];

    std::optional<LeontiefSystem> system;
    if (options.model == Model::demand) {
        try {
            system = LeontiefSystem::from_table(table);
        } catch (const Error& e) {
            for (auto& o : out) {
                o.ok = false;
                o.error = e.what();
            }
            return out;
        }
    }

    auto run_one = [&](SeedOutcome& o) {
        try {
            switch (options.model) {
            case Model::demand: {
                const auto r = model1_demand_shock(*system, o.seed, options.shock_size);
                o.avalanche_size = r.avalanche_size;
                break;
            }
            case Model::link_updating:
            case Model::production_updating: {
                auto r = options.model == Model::link_updating
                             ? model2_cascade(table, o.seed, *options.params)
                             : model3_cascade(table, o.seed, *options.params);
                o.avalanche_size = static_cast<int>(r.hits.size());
                o.rounds = r.rounds;
                o.hits = std::move(r.hits);
                if (r.status == CascadeStatus::aborted) {
                    o.ok = false;
                    o.error = std::move(r.diagnostic);
                }
                break;
            }
            }
        } catch (const std::exception& e) {
            o.ok = false;
            o.error = e.what();
        }
    };

    if (out.empty()) return out;
    unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
    threads = std::clamp<unsigned>(threads, 1u, static_cast<unsigned>(out.size()));
    if (threads <= 1) {
        for (auto& o : out) run_one(o);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < out.size(); i = next++) run_one(out[i]);
        });
    pool.clear();
    return out;
}

} // namespace ionet
