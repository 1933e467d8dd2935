#include "afshar/io.hpp"

#include "afshar/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace afshar {

namespace {

ordered_json fluxes_to_json(const PipelineFluxes& f) {
    ordered_json j;
    j["emitted_power"] = f.emitted_power;
    j["flux_detector_1"] = f.flux.detector_1;
    j["flux_detector_2"] = f.flux.detector_2;
    j["flux_elsewhere"] = f.flux.elsewhere;
    j["blocked_power"] = f.blocked_power;
    j["loss_at_grid"] = f.loss_at_grid;
    j["blocked_fraction"] = f.blocked_fraction;
    j["filtered_power"] = f.filtered_power;
    j["clipped_power"] = f.clipped_power;
    j["vignetting"] = f.vignetting;
    return j;
}

PipelineFluxes fluxes_from_json(const ordered_json& j) {
    PipelineFluxes f;
    f.emitted_power = j.at("emitted_power").get<double>();
    f.flux.detector_1 = j.at("flux_detector_1").get<double>();
    f.flux.detector_2 = j.at("flux_detector_2").get<double>();
    f.flux.elsewhere = j.at("flux_elsewhere").get<double>();
    f.blocked_power = j.at("blocked_power").get<double>();
    f.loss_at_grid = j.at("loss_at_grid").get<double>();
    f.blocked_fraction = j.at("blocked_fraction").get<double>();
    f.filtered_power = j.at("filtered_power").get<double>();
    f.clipped_power = j.at("clipped_power").get<double>();
    f.vignetting = j.at("vignetting").get<bool>();
    return f;
}

ordered_json tally_to_json(const CountTally& t) {
    ordered_json j;
    j["n_detector_1"] = t.n_detector_1;
    j["n_detector_2"] = t.n_detector_2;
    j["n_blocked"] = t.n_blocked;
    j["n_elsewhere"] = t.n_elsewhere;
    return j;
}

CountTally tally_from_json(const ordered_json& j) {
    CountTally t;
    t.n_detector_1 = j.at("n_detector_1").get<std::uint64_t>();
    t.n_detector_2 = j.at("n_detector_2").get<std::uint64_t>();
    t.n_blocked = j.at("n_blocked").get<std::uint64_t>();
    t.n_elsewhere = j.at("n_elsewhere").get<std::uint64_t>();
    return t;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string provenance_string(const std::vector<ScenarioId>& ids) {
    std::string out;
    for (const ScenarioId id : ids) {
        if (!out.empty())
            out += '+';
        out += to_string(id);
    }
    return out;
}

} // namespace

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open file for reading: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    if (in.bad())
        throw IoError("read failure on " + path);
    return out.str();
}

void atomic_write_file(const std::string& path, const std::string& contents) {
    const fs::path target(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
        if (ec)
            throw IoError("cannot create directory " + target.parent_path().string());
    }
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot open file for writing: " + tmp.string());
        out.write(contents.data(), std::streamsize(contents.size()));
        if (!out)
            throw IoError("write failure on " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec)
        throw IoError("cannot rename " + tmp.string() + " to " + path);
}

std::string to_csv(const std::vector<std::vector<std::string>>& rows) {
    std::string out;
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0)
                out += ',';
            out += csv_escape(row[i]);
        }
        out += '\n';
    }
    return out;
}

void write_manifest(const std::string& out_dir, const RunManifest& manifest) {
    ordered_json j;
    j["command"] = manifest.command;
    j["config_path"] = manifest.config_path;
    j["output_directory"] = manifest.output_directory;
    j["seed"] = manifest.seed;
    j["timestamp"] = manifest.timestamp;
    j["tool_version"] = manifest.tool_version;
    j["config_hash"] = manifest.config_hash;
    atomic_write_file((fs::path(out_dir) / "manifest.json").string(), j.dump(2) + "\n");
}

std::string run_result_to_json(const RunResult& result) {
    ordered_json j;
    j["scenario"] = to_string(result.id);
    j["seed"] = result.seed;
    j["config_hash"] = result.config_hash;
    j["fringe_period"] = result.fringe_period;
    j["main"] = fluxes_to_json(result.main);
    j["mirror"] = result.mirror ? fluxes_to_json(*result.mirror) : ordered_json(nullptr);

    ordered_json vis;
    vis["v_standard"] = result.visibility.v_standard;
    vis["v_flores_lower_bound"] = result.visibility.v_flores_lower_bound;
    vis["flores_degenerate"] = result.visibility.flores_degenerate;
    vis["v_steuernagel_transmitted"] = result.visibility.v_steuernagel_transmitted;
    vis["loss_fraction"] = result.visibility.loss_fraction;
    vis["covering_ratio"] = result.visibility.covering_ratio;
    vis["notes"] = result.visibility.notes;
    j["visibility"] = vis;

    if (result.duality) {
        ordered_json d;
        d["v"] = result.duality->v;
        d["k"] = result.duality->k;
        d["sum_of_squares"] = result.duality->sum_of_squares;
        d["violated"] = result.duality->violated;
        j["duality"] = d;
    } else {
        j["duality"] = nullptr;
    }

    j["tally"] = result.tally ? tally_to_json(*result.tally) : ordered_json(nullptr);
    j["tally_mirror"] =
        result.tally_mirror ? tally_to_json(*result.tally_mirror) : ordered_json(nullptr);
    j["per_wire_blocked"] = result.per_wire_blocked;

    ordered_json profile;
    profile["positions"] = result.grid_plane_profile.positions;
    profile["intensities"] = result.grid_plane_profile.intensities;
    j["grid_plane_profile"] = profile;

    ordered_json image;
    image["nx"] = result.grid_image.nx;
    image["ny"] = result.grid_image.ny;
    image["dx"] = result.grid_image.dx;
    image["dy"] = result.grid_image.dy;
    j["grid_image"] = image;

    return j.dump(2) + "\n";
}

RunResult run_result_from_json(const std::string& json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const std::exception& e) {
        throw IoError(std::string("malformed result JSON: ") + e.what());
    }
    RunResult result;
    result.id = scenario_id_from_string(j.at("scenario").get<std::string>());
    result.seed = j.at("seed").get<std::uint64_t>();
    result.config_hash = j.at("config_hash").get<std::string>();
    result.fringe_period = j.at("fringe_period").get<double>();
    result.main = fluxes_from_json(j.at("main"));
    if (!j.at("mirror").is_null())
        result.mirror = fluxes_from_json(j.at("mirror"));

    const ordered_json& vis = j.at("visibility");
    result.visibility.v_standard = vis.at("v_standard").get<double>();
    result.visibility.v_flores_lower_bound = vis.at("v_flores_lower_bound").get<double>();
    result.visibility.flores_degenerate = vis.at("flores_degenerate").get<bool>();
    result.visibility.v_steuernagel_transmitted =
        vis.at("v_steuernagel_transmitted").get<double>();
    result.visibility.loss_fraction = vis.at("loss_fraction").get<double>();
    result.visibility.covering_ratio = vis.at("covering_ratio").get<double>();
    result.visibility.notes = vis.at("notes").get<std::string>();

    if (!j.at("duality").is_null()) {
        DualityReport d;
        d.v = j.at("duality").at("v").get<double>();
        d.k = j.at("duality").at("k").get<double>();
        d.sum_of_squares = j.at("duality").at("sum_of_squares").get<double>();
        d.violated = j.at("duality").at("violated").get<bool>();
        result.duality = d;
    }
    if (!j.at("tally").is_null())
        result.tally = tally_from_json(j.at("tally"));
    if (!j.at("tally_mirror").is_null())
        result.tally_mirror = tally_from_json(j.at("tally_mirror"));
    result.per_wire_blocked = j.at("per_wire_blocked").get<std::vector<double>>();
    result.grid_plane_profile.positions =
        j.at("grid_plane_profile").at("positions").get<std::vector<double>>();
    result.grid_plane_profile.intensities =
        j.at("grid_plane_profile").at("intensities").get<std::vector<double>>();
    result.grid_image.nx = j.at("grid_image").at("nx").get<int>();
    result.grid_image.ny = j.at("grid_image").at("ny").get<int>();
    result.grid_image.dx = j.at("grid_image").at("dx").get<double>();
    result.grid_image.dy = j.at("grid_image").at("dy").get<double>();
    return result;
}

void persist_run_result(const std::string& out_dir, const RunResult& result) {
    const fs::path dir(out_dir);
    const std::string name = to_string(result.id);
    atomic_write_file((dir / "results" / (name + ".json")).string(),
                      run_result_to_json(result));

    // Raw profile dump.
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"x", "intensity"});
    for (std::size_t i = 0; i < result.grid_plane_profile.positions.size(); ++i)
        rows.push_back({format_double(result.grid_plane_profile.positions[i]),
                        format_double(result.grid_plane_profile.intensities[i])});
    atomic_write_file((dir / "profiles" / (name + ".csv")).string(), to_csv(rows));

    // Grid-plane intensity for later rendering.
    if (!result.grid_image.intensity.empty()) {
        std::string bytes(reinterpret_cast<const char*>(result.grid_image.intensity.data()),
                          result.grid_image.intensity.size() * sizeof(float));
        atomic_write_file((dir / "intensity" / (name + ".f32")).string(), bytes);
    }
}

std::vector<RunResult> load_run_results(const std::string& out_dir) {
    const fs::path dir = fs::path(out_dir) / "results";
    std::vector<RunResult> results;
    if (!fs::exists(dir))
        return results;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const fs::path& file : files) {
        RunResult result = run_result_from_json(read_file(file.string()));
        const fs::path f32 =
            fs::path(out_dir) / "intensity" / (to_string(result.id) + ".f32");
        if (fs::exists(f32)) {
            const std::string bytes = read_file(f32.string());
            result.grid_image.intensity.resize(bytes.size() / sizeof(float));
            std::memcpy(result.grid_image.intensity.data(), bytes.data(), bytes.size());
        }
        results.push_back(std::move(result));
    }
    return results;
}

std::string flux_table_csv(const std::vector<RunResult>& results) {
    const auto lookup = [&](ScenarioId id) -> const RunResult* {
        for (const RunResult& r : results)
            if (r.id == id)
                return &r;
        return nullptr;
    };

    std::vector<std::vector<std::string>> rows;
    rows.push_back({"scenario", "flux1", "flux2", "blocked", "elsewhere", "reduction",
                    "ci_low", "ci_high"});
    for (const RunResult& r : results) {
        const RunResult* baseline = nullptr;
        if (r.id == ScenarioId::S2 || r.id == ScenarioId::S3)
            baseline = lookup(ScenarioId::S1);
        else if (r.id == ScenarioId::S4)
            baseline = lookup(ScenarioId::S5);

        std::string reduction;
        std::string ci_low;
        std::string ci_high;
        if (baseline != nullptr) {
            if (r.tally && baseline->tally) {
                const FluxReduction red = flux_reduction(*r.tally, *baseline->tally);
                reduction = format_double(red.fraction);
                ci_low = format_double(red.ci_low);
                ci_high = format_double(red.ci_high);
            } else {
                const double with = r.main.flux.detector_1 + r.main.flux.detector_2;
                const double without =
                    baseline->main.flux.detector_1 + baseline->main.flux.detector_2;
                if (without > 0.0) {
                    const double frac = (without - with) / without;
                    reduction = format_double(frac);
                    ci_low = format_double(frac);
                    ci_high = format_double(frac);
                }
            }
        }
        rows.push_back({to_string(r.id), format_double(r.main.flux.detector_1),
                        format_double(r.main.flux.detector_2),
                        format_double(r.main.blocked_power),
                        format_double(r.main.flux.elsewhere), reduction, ci_low, ci_high});
    }
    return to_csv(rows);
}

std::string summary_csv(const ComparisonTable& table) {
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"key", "value", "flagged", "missing", "provenance", "detail"});
    for (const SummaryRow& row : table.rows)
        rows.push_back({row.key, row.missing ? "" : format_double(row.value),
                        row.flagged ? "1" : "0", row.missing ? "1" : "0",
                        provenance_string(row.provenance), row.detail});
    return to_csv(rows);
}

std::string summary_text(const ComparisonTable& table) {
    std::ostringstream out;
    out << "analysis summary\n";
    out << "----------------\n";
    for (const SummaryRow& row : table.rows) {
        out << row.key << ": ";
        if (row.missing) {
            out << "(" << row.detail << ")";
        } else {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.6g", row.value);
            out << buf;
            if (row.flagged)
                out << "  ** flagged **";
            if (!row.provenance.empty())
                out << "  [from " << provenance_string(row.provenance) << "]";
        }
        out << '\n';
    }
    return out.str();
}

std::string sweep_table_csv(const std::vector<SweepRow>& rows) {
    std::vector<std::vector<std::string>> csv;
    csv.push_back({"a", "L", "v_t_closed", "v_t_fullwave", "v_flores", "k_no_grid",
                   "k_with_grid", "dual_flores", "dual_steuernagel"});
    for (const SweepRow& row : rows)
        csv.push_back({format_double(row.a), format_double(row.loss),
                       format_double(row.v_t_closed), format_double(row.v_t_fullwave),
                       format_double(row.v_flores), format_double(row.k_no_grid),
                       format_double(row.k_with_grid), format_double(row.dual_flores),
                       format_double(row.dual_steuernagel)});
    return to_csv(csv);
}

void write_pgm_with_sidecar(const std::string& path, const IntensityImage& image) {
    if (image.intensity.empty() || image.nx <= 0 || image.ny <= 0)
        throw DomainError("cannot render an empty intensity image");
    float peak = 0.0f;
    for (float v : image.intensity)
        peak = std::max(peak, v);
    std::string body = "P5\n" + std::to_string(image.nx) + " " + std::to_string(image.ny) +
                       "\n255\n";
    body.reserve(body.size() + image.intensity.size());
    for (float v : image.intensity) {
        const int level = peak > 0.0f ? int(255.0f * v / peak + 0.5f) : 0;
        body += char(std::clamp(level, 0, 255));
    }
    atomic_write_file(path, body);

    ordered_json sidecar;
    sidecar["normalization_max"] = double(peak);
    sidecar["nx"] = image.nx;
    sidecar["ny"] = image.ny;
    sidecar["dx"] = image.dx;
    sidecar["dy"] = image.dy;
    atomic_write_file(path + ".json", sidecar.dump(2) + "\n");
}

} // namespace afshar
