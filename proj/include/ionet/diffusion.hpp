#pragma once

#include "ionet/iotable.hpp"
#include "ionet/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ionet {

enum class Model { demand = 1, link_updating = 2, production_updating = 3 };

int model_number(Model model) noexcept;
Model model_from_number(int n);

/// Shock reduction fraction f and capacity share c, both in (0, 1).
class ShockParams {
public:
    ShockParams(double f, double c);

    double f() const noexcept { return f_; }
    double c() const noexcept { return c_; }
    /// c / f to 15 significant digits; the only quantity Model 2 outcomes depend on.
    double alpha() const noexcept { return alpha_; }

    friend bool operator==(const ShockParams&, const ShockParams&) = default;

private:
    double f_;
    double c_;
    double alpha_;
};

struct DemandShockResult {
    SectorIndex seed = 0;
    Vector delta_x;
    int avalanche_size = 0;
};

struct Hit {
    SectorIndex sector;
    int round;
    friend bool operator==(const Hit&, const Hit&) = default;
};

enum class CascadeStatus { complete, aborted };

struct CascadeResult {
    SectorIndex seed = 0;
    /// Sectors hit after the seed, ordered by (round, sector). Never contains the seed.
    std::vector<Hit> hits;
    int avalanche_size = 0;
    /// Last round that hit at least one sector; 0 when only the seed was hit.
    int rounds = 0;
    Matrix final_weights;
    /// Production at termination. Model 3 only.
    Vector final_production;
    CascadeStatus status = CascadeStatus::complete;
    std::string diagnostic;

    std::optional<int> round_of(SectorIndex sector) const;
    std::vector<SectorIndex> hit_set() const;
};

/// delta_x = -shock_size * L e_seed; avalanche counts strictly negative entries,
/// the seed included.
DemandShockResult model1_demand_shock(const LeontiefSystem& system, SectorIndex seed,
                                      double shock_size = 1.0);

/// Threshold cascade with multiplicative link updating at fixed production.
///
/// Round 0 scales the seed's row and column by (1 - f). In every later round
/// each unhit sector h whose cumulative strength change exceeds c * x_h is
/// hit; all such sectors then scale their rows and columns together. Stops
/// on the first round that hits nobody.
CascadeResult model2_cascade(const IOTable& table, SectorIndex seed, const ShockParams& params);

/// Model 2 plus production re-equilibration after every round:
/// theta_ij = z_ij(t+1) / x_j(t), x(t+1) = (I - theta)^-1 d.
/// A failed production solve ends the cascade with status `aborted` and the
/// hits found so far.
CascadeResult model3_cascade(const IOTable& table, SectorIndex seed, const ShockParams& params);

struct SweepOptions {
    Model model = Model::link_updating;
    std::optional<ShockParams> params;
    double shock_size = 1.0;
    /// Restricts the sweep to these seeds; empty means all sectors.
    std::vector<SectorIndex> seeds;
    /// 0 picks std::thread::hardware_concurrency().
    unsigned threads = 0;
};

/// One seed of a sweep.
struct SeedOutcome {
    SectorIndex seed = 0;
    int avalanche_size = 0;
    int rounds = 0;
    std::vector<Hit> hits;
    bool ok = true;
    std::string error;
};

/// Runs every seed independently from the pristine table. Per-seed failures
/// are recorded in the outcome instead of aborting the sweep. Output is in
/// seed order regardless of threading.
std::vector<SeedOutcome> sweep_all_seeds(const IOTable& table, const SweepOptions& options);

} // namespace ionet
