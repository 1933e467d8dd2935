#pragma once

#include "afshar/apparatus.hpp"
#include "afshar/field.hpp"
#include "afshar/montecarlo.hpp"
#include "afshar/optics.hpp"
#include "afshar/visibility.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace afshar {

/// The five canonical experiment scenarios.
///   S1: both pinholes open, no wire grid
///   S2: both open, wires at the pattern minima (phi = 0)
///   S3: both open, wires at the pattern maxima (phi = +-pi)
///   S4: one pinhole open, grid present (same placement as S2)
///   S5: one pinhole open, no grid
enum class ScenarioId { S1, S2, S3, S4, S5 };

std::string to_string(ScenarioId id);
ScenarioId scenario_id_from_string(const std::string& name);

/// Full apparatus description shared by all five scenarios. Loaded from a
/// config file; every length is in meters, every angle in radians.
struct ExperimentConfig {
    int schema_version = 1;
    GridGeometry grid;
    double wavelength = 0.0;
    PinholePair pinholes;  ///< open_mask here is ignored; scenarios set it
    double grid_plane_z = 0.0;   ///< axial position of the wire grid
    double covering_ratio = 0.0; ///< a
    int wire_periods = 0;        ///< grid extent = wire_periods * fringe period
    WireMode wire_mode = WireMode::Absorbing;
    LensSpec lens;
    double detector_radius = 0.0;
    std::optional<double> detector_offset; ///< default: magnification * d / 2
    double photon_rate = 3.0e4;
    double mc_duration = 30.0;

    void validate() const;
    /// Fringe period of the ideal pattern at the grid plane.
    double fringe_period_at_grid() const;
    /// Grid extent used by the wire grid (wire_periods full periods).
    double wire_extent() const;
    DetectorRegions detectors() const;
    WireGridSpec wire_grid(double placement_phase) const;
};

struct Scenario {
    ScenarioId id = ScenarioId::S1;
    ExperimentConfig config;

    /// Pinhole mask for this scenario (single-pinhole scenarios open the
    /// left pinhole in the primary run).
    PinholePair pinholes(bool mirror = false) const;
    bool has_grid() const;
    bool single_pinhole() const;
    double placement_phase() const;

    void validate() const;
};

/// Downsampled grid-plane intensity kept for rendering.
struct IntensityImage {
    int nx = 0;
    int ny = 0;
    double dx = 0.0;
    double dy = 0.0;
    std::vector<float> intensity;
};

/// Power bookkeeping of one field pipeline pass (source to image plane).
struct PipelineFluxes {
    double emitted_power = 0.0;
    FluxSplit flux;              ///< image-plane split
    double blocked_power = 0.0;  ///< absorbed at the wires
    double loss_at_grid = 0.0;   ///< blocked / power incident on the grid extent
    double blocked_fraction = 0.0; ///< blocked / emitted
    double filtered_power = 0.0; ///< propagation band-limit losses
    double clipped_power = 0.0;  ///< lens aperture stop
    bool vignetting = false;

    /// Per-photon outcome probabilities implied by the power split.
    OutcomeProbabilities probabilities() const;
};

/// Everything produced by one scenario run. Single-pinhole scenarios also
/// carry the mirrored (right-pinhole) pass so the which-way estimator has
/// both of its inputs.
struct RunResult {
    ScenarioId id = ScenarioId::S1;
    PipelineFluxes main;
    std::optional<PipelineFluxes> mirror;
    IntensityProfile grid_plane_profile; ///< pre-mask, y-marginal
    std::vector<double> per_wire_blocked;
    double fringe_period = 0.0; ///< analytic period at the grid plane
    VisibilityReport visibility;
    std::optional<DualityReport> duality; ///< single-pinhole scenarios only
    std::optional<CountTally> tally;
    std::optional<CountTally> tally_mirror;
    std::uint64_t seed = 0;
    std::string config_hash;
    IntensityImage grid_image;
};

/// Runs the full pipeline for one scenario: source, propagation to the
/// grid plane, optional wire mask, lens imaging, detector fluxes, reports,
/// and (when mc is set) the photon-counting tallies.
/// Resolution/aliasing errors from the optics layer are rethrown with the
/// failing stage named.
RunResult run_scenario(const Scenario& scenario,
                       const std::optional<CountingConfig>& mc = std::nullopt);

/// One row of the cross-scenario comparison table.
struct SummaryRow {
    std::string key;
    double value = 0.0;
    bool flagged = false; ///< duality violation or degenerate bound
    bool missing = false; ///< prerequisite scenario absent (partial tables)
    std::vector<ScenarioId> provenance;
    std::string detail;
};

struct ComparisonTable {
    std::vector<SummaryRow> rows;

    const SummaryRow* find(const std::string& key) const;
};

/// Assembles the side-by-side analysis of a set of scenario results:
/// the square-profile lower bound (from S2's measured loss), the
/// transmitted-light visibility (needs both S2 and S3), the measured
/// profile visibility at the grid plane, the which-way parameter with and
/// without the grid, and the duality sums for each pairing. Every row
/// carries the scenario ids it was computed from.
///
/// With allow_partial = false, a missing prerequisite scenario raises
/// IncompleteInputError naming the missing id; with allow_partial = true
/// the affected rows are marked missing instead.
ComparisonTable compare_analyses(const std::vector<RunResult>& results,
                                 bool allow_partial = false);

} // namespace afshar
