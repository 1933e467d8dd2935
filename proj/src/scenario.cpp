#include "afshar/scenario.hpp"

#include "afshar/config.hpp"
#include "afshar/errors.hpp"
#include "afshar/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

namespace afshar {

namespace {

// Logical RNG stream ids; the mirror pass gets its own pair.
constexpr std::uint64_t kStreamCount = 0x636e740000000000ull;
constexpr std::uint64_t kStreamOutcome = 0x6f75746300000000ull;

std::uint64_t run_stream(std::uint64_t base, ScenarioId id, bool mirror) {
    return base + 2 * std::uint64_t(id) + (mirror ? 1 : 0);
}

std::string stage_tag(ScenarioId id, const char* stage) {
    return to_string(id) + "/" + stage + ": ";
}

template <typename F>
auto run_stage(ScenarioId id, const char* name, F&& f) {
    try {
        return f();
    } catch (const ResolutionError& e) {
        throw ResolutionError(stage_tag(id, name) + e.what());
    } catch (const AliasingError& e) {
        throw AliasingError(stage_tag(id, name) + e.what());
    } catch (const DomainError& e) {
        throw DomainError(stage_tag(id, name) + e.what());
    }
}

IntensityImage downsample_intensity(const Field2D& field, int target) {
    const int fx = std::max(1, field.nx() / target);
    const int fy = std::max(1, field.ny() / target);
    IntensityImage image;
    image.nx = field.nx() / fx;
    image.ny = field.ny() / fy;
    image.dx = field.dx() * fx;
    image.dy = field.dy() * fy;
    image.intensity.assign(std::size_t(image.nx) * image.ny, 0.0f);
    for (int iy = 0; iy < field.ny(); ++iy) {
        const int by = std::min(iy / fy, image.ny - 1);
        for (int ix = 0; ix < field.nx(); ++ix) {
            const int bx = std::min(ix / fx, image.nx - 1);
            image.intensity[std::size_t(by) * image.nx + bx] +=
                float(std::norm(field.at(ix, iy)));
        }
    }
    const float norm = 1.0f / float(fx * fy);
    for (float& v : image.intensity)
        v *= norm;
    return image;
}

struct PipelinePass {
    PipelineFluxes fluxes;
    IntensityProfile profile;
    IntensityImage image;
    std::vector<double> per_wire;
};

PipelinePass run_pipeline(const Scenario& scenario, bool mirror) {
    const ExperimentConfig& cfg = scenario.config;
    const ScenarioId id = scenario.id;
    PipelinePass pass;

    Field2D source = run_stage(id, "source", [&] {
        return make_two_pinhole_source(scenario.pinholes(mirror), cfg.grid, cfg.wavelength);
    });
    pass.fluxes.emitted_power = total_power(source);

    PropagationResult to_grid = run_stage(id, "propagate_to_grid", [&] {
        return propagate(source, cfg.grid_plane_z);
    });
    pass.fluxes.filtered_power += to_grid.filtered_power;

    Field2D at_grid = std::move(to_grid.field);
    {
        std::vector<double> marginal = at_grid.intensity_marginal_x();
        pass.profile.positions.resize(marginal.size());
        for (std::size_t i = 0; i < marginal.size(); ++i)
            pass.profile.positions[i] = at_grid.x(int(i));
        pass.profile.intensities = std::move(marginal);
        pass.image = downsample_intensity(at_grid, 256);
    }

    Field2D after_grid = [&] {
        if (!scenario.has_grid())
            return std::move(at_grid);
        MaskResult masked = run_stage(id, "wire_grid", [&] {
            return apply_wire_grid(at_grid, cfg.wire_grid(scenario.placement_phase()));
        });
        pass.fluxes.blocked_power = masked.loss.blocked_power;
        pass.fluxes.blocked_fraction = masked.loss.blocked_fraction;
        pass.fluxes.loss_at_grid = masked.loss.blocked_fraction_on_extent;
        pass.per_wire = std::move(masked.loss.per_wire_blocked);
        return std::move(masked.field);
    }();

    ImagingResult imaged = run_stage(id, "lens_imaging", [&] {
        return image_through_lens(after_grid, cfg.lens);
    });
    pass.fluxes.filtered_power += imaged.filtered_power;
    pass.fluxes.clipped_power = imaged.clipped_power;
    pass.fluxes.vignetting = imaged.vignetting;

    pass.fluxes.flux = run_stage(id, "detector_flux", [&] {
        return detector_flux(imaged.field, cfg.detectors());
    });
    return pass;
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

double field_k(const PipelineFluxes& left, const PipelineFluxes& right) {
    const auto run_k = [](const PipelineFluxes& pass, bool correct_is_1) {
        const double correct = correct_is_1 ? pass.flux.detector_1 : pass.flux.detector_2;
        const double wrong = correct_is_1 ? pass.flux.detector_2 : pass.flux.detector_1;
        if (correct + wrong <= 0.0)
            throw DomainError("which-way estimate undefined: no detector flux");
        return std::abs(correct - wrong) / (correct + wrong);
    };
    return 0.5 * (run_k(left, true) + run_k(right, false));
}

IntensityProfile restrict_profile(const IntensityProfile& profile, double half_span) {
    IntensityProfile out;
    for (std::size_t i = 0; i < profile.positions.size(); ++i) {
        if (std::abs(profile.positions[i]) <= half_span) {
            out.positions.push_back(profile.positions[i]);
            out.intensities.push_back(profile.intensities[i]);
        }
    }
    return out;
}

} // namespace

std::string to_string(ScenarioId id) {
    switch (id) {
    case ScenarioId::S1: return "S1";
    case ScenarioId::S2: return "S2";
    case ScenarioId::S3: return "S3";
    case ScenarioId::S4: return "S4";
    case ScenarioId::S5: return "S5";
    }
    return "?";
}

ScenarioId scenario_id_from_string(const std::string& name) {
    for (ScenarioId id : {ScenarioId::S1, ScenarioId::S2, ScenarioId::S3, ScenarioId::S4,
                          ScenarioId::S5})
        if (to_string(id) == name)
            return id;
    throw DomainError("unknown scenario id: " + name);
}

void ExperimentConfig::validate() const {
    if (schema_version != 1)
        throw DomainError("unsupported config schema_version (expected 1)");
    grid.validate();
    if (!(wavelength > 0.0))
        throw DomainError("wavelength must be positive");
    pinholes.validate();
    if (!(grid_plane_z > 0.0))
        throw DomainError("grid_plane_z must be positive");
    if (!(covering_ratio > 0.0) || !(covering_ratio < 1.0))
        throw DomainError("covering_ratio must lie in (0, 1)");
    if (wire_periods < 1)
        throw DomainError("wire_periods must be at least 1");
    lens.validate();
    if (lens.object_distance < grid_plane_z)
        throw DomainError("the lens must sit at or beyond the wire grid plane");
    if (!(detector_radius > 0.0))
        throw DomainError("detector_radius must be positive");
    if (!(photon_rate > 0.0) || !(mc_duration > 0.0))
        throw DomainError("photon_rate and mc_duration must be positive");
    detectors().validate();
}

double ExperimentConfig::fringe_period_at_grid() const {
    return fringe_period(wavelength, grid_plane_z, pinholes.separation);
}

double ExperimentConfig::wire_extent() const {
    return wire_periods * fringe_period_at_grid();
}

DetectorRegions ExperimentConfig::detectors() const {
    const double offset =
        detector_offset.value_or(0.5 * lens.magnification() * pinholes.separation);
    // Region 1 collects the (inverted) image of the left pinhole at +offset.
    return {offset, -offset, detector_radius};
}

WireGridSpec ExperimentConfig::wire_grid(double placement_phase) const {
    WireGridSpec spec;
    spec.period = fringe_period_at_grid();
    spec.covering_ratio = covering_ratio;
    spec.placement_phase = placement_phase;
    spec.extent = wire_extent();
    spec.mode = wire_mode;
    spec.pattern_phase = pinholes.relative_phase;
    return spec;
}

PinholePair Scenario::pinholes(bool mirror) const {
    PinholePair p = config.pinholes;
    if (single_pinhole())
        p.open_mask = mirror ? OpenMask::RightOnly : OpenMask::LeftOnly;
    else
        p.open_mask = OpenMask::Both;
    return p;
}

bool Scenario::has_grid() const {
    return id == ScenarioId::S2 || id == ScenarioId::S3 || id == ScenarioId::S4;
}

bool Scenario::single_pinhole() const {
    return id == ScenarioId::S4 || id == ScenarioId::S5;
}

double Scenario::placement_phase() const {
    return id == ScenarioId::S3 ? std::numbers::pi : 0.0;
}

void Scenario::validate() const { config.validate(); }

OutcomeProbabilities PipelineFluxes::probabilities() const {
    if (!(emitted_power > 0.0))
        throw DomainError("no emitted power; outcome probabilities undefined");
    OutcomeProbabilities p;
    p.detector_1 = flux.detector_1 / emitted_power;
    p.detector_2 = flux.detector_2 / emitted_power;
    p.blocked = blocked_power / emitted_power;
    p.elsewhere = std::max(0.0, 1.0 - p.detector_1 - p.detector_2 - p.blocked);
    return p;
}

RunResult run_scenario(const Scenario& scenario, const std::optional<CountingConfig>& mc) {
    scenario.validate();
    const ExperimentConfig& cfg = scenario.config;

    RunResult result;
    result.id = scenario.id;
    result.fringe_period = cfg.fringe_period_at_grid();
    result.config_hash = config_hash_hex(format_config(cfg));

    PipelinePass main = run_pipeline(scenario, false);
    result.main = main.fluxes;
    result.grid_plane_profile = std::move(main.profile);
    result.grid_image = std::move(main.image);
    result.per_wire_blocked = std::move(main.per_wire);

    std::optional<PipelinePass> mirror;
    if (scenario.single_pinhole()) {
        mirror = run_pipeline(scenario, true);
        result.mirror = mirror->fluxes;
    }

    // Visibility report: the measured profile visibility over the grid
    // extent, the square-profile lower bound from this run's own loss, and
    // the closed-form transmitted visibility for the configured ratio.
    VisibilityReport vis;
    vis.covering_ratio = cfg.covering_ratio;
    vis.loss_fraction = result.main.loss_at_grid;
    vis.v_standard = profile_visibility(
        restrict_profile(result.grid_plane_profile, 0.5 * cfg.wire_extent()),
        result.fringe_period);
    const FloresBound bound = flores_lower_bound(vis.loss_fraction, cfg.covering_ratio);
    vis.v_flores_lower_bound = bound.value;
    vis.flores_degenerate = bound.degenerate;
    vis.v_steuernagel_transmitted = steuernagel_visibility(cfg.covering_ratio);
    vis.notes = scenario.has_grid()
                    ? "loss_fraction is the blocked power over the power incident on the grid extent"
                    : "no grid in this scenario; loss_fraction is 0";
    result.visibility = vis;

    if (scenario.single_pinhole())
        result.duality = duality_check(clamp01(vis.v_standard),
                                       clamp01(field_k(result.main, *result.mirror)));

    if (mc) {
        mc->validate();
        result.seed = mc->rng_seed;
        const double mean = mc->photon_rate * mc->duration;
        const std::uint64_t n = sample_poisson(
            mean, mc->rng_seed, run_stream(kStreamCount, scenario.id, false));
        result.tally = sample_outcomes(n, result.main.probabilities(), mc->rng_seed,
                                       run_stream(kStreamOutcome, scenario.id, false));
        if (result.mirror) {
            const std::uint64_t n2 = sample_poisson(
                mean, mc->rng_seed, run_stream(kStreamCount, scenario.id, true));
            result.tally_mirror =
                sample_outcomes(n2, result.mirror->probabilities(), mc->rng_seed,
                                run_stream(kStreamOutcome, scenario.id, true));
        }
    }
    return result;
}

const SummaryRow* ComparisonTable::find(const std::string& key) const {
    for (const SummaryRow& row : rows)
        if (row.key == key)
            return &row;
    return nullptr;
}

ComparisonTable compare_analyses(const std::vector<RunResult>& results, bool allow_partial) {
    const auto lookup = [&](ScenarioId id) -> const RunResult* {
        for (const RunResult& r : results)
            if (r.id == id)
                return &r;
        return nullptr;
    };
    const auto require = [&](ScenarioId id, const char* row) -> const RunResult* {
        const RunResult* r = lookup(id);
        if (r == nullptr && !allow_partial)
            throw IncompleteInputError(std::string("missing scenario ") + to_string(id) +
                                       " required for row " + row);
        return r;
    };

    ComparisonTable table;
    const auto add_missing = [&](const std::string& key, ScenarioId id) {
        SummaryRow row;
        row.key = key;
        row.missing = true;
        row.detail = "missing prerequisite: " + to_string(id);
        table.rows.push_back(std::move(row));
    };

    const RunResult* s2 = require(ScenarioId::S2, "flores_lower_bound");

    // Measured fringe contrast of the pattern the wires sit in.
    if (s2 != nullptr) {
        SummaryRow row;
        row.key = "profile_visibility_at_grid";
        row.value = s2->visibility.v_standard;
        row.provenance = {ScenarioId::S2};
        row.detail = "per-period extrema over the grid extent";
        table.rows.push_back(std::move(row));
    } else {
        add_missing("profile_visibility_at_grid", ScenarioId::S2);
    }

    // Square-profile lower bound, fed by S2's measured loss alone.
    if (s2 != nullptr) {
        SummaryRow row;
        row.key = "flores_lower_bound";
        row.value = s2->visibility.v_flores_lower_bound;
        row.flagged = s2->visibility.flores_degenerate;
        row.provenance = {ScenarioId::S2};
        row.detail = "L = " + std::to_string(s2->visibility.loss_fraction) +
                     ", a = " + std::to_string(s2->visibility.covering_ratio);
        table.rows.push_back(std::move(row));
    } else {
        add_missing("flores_lower_bound", ScenarioId::S2);
    }

    // Transmission visibility needs both grid placements: two scenarios.
    const RunResult* s3 = require(ScenarioId::S3, "steuernagel_v_t");
    double v_t_fullwave = 0.0;
    bool have_v_t = false;
    if (s2 != nullptr && s3 != nullptr) {
        const double t_minima = 1.0 - s2->main.loss_at_grid;
        const double t_maxima = 1.0 - s3->main.loss_at_grid;
        v_t_fullwave = (t_minima - t_maxima) / (t_minima + t_maxima);
        have_v_t = true;
        SummaryRow row;
        row.key = "steuernagel_v_t";
        row.value = v_t_fullwave;
        row.provenance = {ScenarioId::S2, ScenarioId::S3};
        row.detail = "closed form sin(a pi)/(pi(1-a)) = " +
                     std::to_string(steuernagel_visibility(s2->visibility.covering_ratio));
        table.rows.push_back(std::move(row));
    } else {
        add_missing("steuernagel_v_t", s2 == nullptr ? ScenarioId::S2 : ScenarioId::S3);
    }

    const RunResult* s5 = require(ScenarioId::S5, "k_no_grid");
    double k_no_grid = 0.0;
    bool have_k = false;
    if (s5 != nullptr && s5->mirror) {
        k_no_grid = clamp01(field_k(s5->main, *s5->mirror));
        have_k = true;
        SummaryRow row;
        row.key = "k_no_grid";
        row.value = k_no_grid;
        row.provenance = {ScenarioId::S5};
        row.detail = "detector-count asymmetry over both single-pinhole runs";
        table.rows.push_back(std::move(row));
    } else {
        add_missing("k_no_grid", ScenarioId::S5);
    }

    const RunResult* s4 = require(ScenarioId::S4, "k_with_grid");
    if (s4 != nullptr && s4->mirror) {
        SummaryRow row;
        row.key = "k_with_grid";
        row.value = clamp01(field_k(s4->main, *s4->mirror));
        row.provenance = {ScenarioId::S4};
        row.detail = "detector-count asymmetry with the wire grid in place";
        table.rows.push_back(std::move(row));
    } else {
        add_missing("k_with_grid", ScenarioId::S4);
    }

    // Duality sums for each (V, K) pairing.
    if (s2 != nullptr && have_k) {
        const DualityReport dual =
            duality_check(clamp01(s2->visibility.v_flores_lower_bound), k_no_grid);
        SummaryRow row;
        row.key = "duality_flores";
        row.value = dual.sum_of_squares;
        row.flagged = dual.violated;
        row.provenance = {ScenarioId::S2, ScenarioId::S5};
        row.detail = "V = flores_lower_bound, K = k_no_grid";
        table.rows.push_back(std::move(row));
    } else {
        add_missing("duality_flores", s2 == nullptr ? ScenarioId::S2 : ScenarioId::S5);
    }

    if (have_v_t && have_k) {
        const DualityReport dual = duality_check(clamp01(v_t_fullwave), k_no_grid);
        SummaryRow row;
        row.key = "duality_steuernagel";
        row.value = dual.sum_of_squares;
        row.flagged = dual.violated;
        row.provenance = {ScenarioId::S2, ScenarioId::S3, ScenarioId::S5};
        row.detail = "V = steuernagel_v_t (full wave), K = k_no_grid";
        table.rows.push_back(std::move(row));
    } else {
        add_missing("duality_steuernagel",
                    !have_v_t ? (s2 == nullptr ? ScenarioId::S2 : ScenarioId::S3)
                              : ScenarioId::S5);
    }

    return table;
}

} // namespace afshar
