#include "afshar/config.hpp"

#include "afshar/errors.hpp"
#include "afshar/io.hpp"

#include <cctype>
#include <cstdint>
#include <map>
#include <sstream>

namespace afshar {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return s.substr(b, e - b);
}

struct ParsedFile {
    // section -> key -> value, plus consumption tracking for typo detection
    std::map<std::string, std::map<std::string, std::string>> sections;
    mutable std::map<std::string, std::map<std::string, bool>> used;
};

ParsedFile parse_ini(const std::string& text) {
    ParsedFile file;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw DomainError("config line " + std::to_string(line_no) +
                                  ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            file.sections[section];
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw DomainError("config line " + std::to_string(line_no) +
                              ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw DomainError("config line " + std::to_string(line_no) +
                              ": empty key or value");
        file.sections[section][key] = value;
    }
    return file;
}

class Reader {
public:
    explicit Reader(const ParsedFile& file) : file_(file) {}

    bool has(const std::string& section, const std::string& key) const {
        auto s = file_.sections.find(section);
        return s != file_.sections.end() && s->second.count(key) > 0;
    }

    std::string raw(const std::string& section, const std::string& key) const {
        auto s = file_.sections.find(section);
        if (s == file_.sections.end() || s->second.count(key) == 0)
            throw DomainError("config: missing required field [" + section + "] " + key);
        file_.used[section][key] = true;
        return s->second.at(key);
    }

    double number(const std::string& section, const std::string& key) const {
        const std::string v = raw(section, key);
        try {
            std::size_t pos = 0;
            const double d = std::stod(v, &pos);
            if (pos != v.size())
                throw std::invalid_argument(v);
            return d;
        } catch (const std::exception&) {
            throw DomainError("config: field [" + section + "] " + key +
                              " is not a number: '" + v + "'");
        }
    }

    double number_or(const std::string& section, const std::string& key, double dflt) const {
        return has(section, key) ? number(section, key) : dflt;
    }

    int integer(const std::string& section, const std::string& key) const {
        const double d = number(section, key);
        const int i = int(d);
        if (double(i) != d)
            throw DomainError("config: field [" + section + "] " + key +
                              " must be an integer");
        return i;
    }

    void reject_unknown() const {
        for (const auto& [section, keys] : file_.sections)
            for (const auto& [key, value] : keys) {
                (void)value;
                if (!file_.used[section][key])
                    throw DomainError("config: unknown field [" + section + "] " + key);
            }
    }

private:
    const ParsedFile& file_;
};

} // namespace

std::string config_hash_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[std::size_t(i)] = digits[h & 0xF];
        h >>= 4;
    }
    return out;
}

ExperimentConfig parse_config(const std::string& text) {
    const ParsedFile file = parse_ini(text);
    const Reader r(file);

    ExperimentConfig cfg;
    cfg.schema_version = int(r.number_or("meta", "schema_version", 1));

    cfg.grid.nx = r.integer("grid", "nx");
    cfg.grid.ny = r.integer("grid", "ny");
    cfg.grid.dx = r.number("grid", "dx");
    cfg.grid.dy = r.number("grid", "dy");

    cfg.wavelength = r.number("source", "wavelength");
    cfg.pinholes.separation = r.number("source", "separation");
    cfg.pinholes.diameter = r.number("source", "diameter");
    cfg.pinholes.relative_phase = r.number_or("source", "relative_phase", 0.0);
    cfg.pinholes.open_mask = OpenMask::Both;

    cfg.grid_plane_z = r.number("wire_grid", "plane_z");
    cfg.covering_ratio = r.number("wire_grid", "covering_ratio");
    cfg.wire_periods = r.integer("wire_grid", "periods");
    if (r.has("wire_grid", "mode")) {
        const std::string mode = r.raw("wire_grid", "mode");
        if (mode == "absorbing")
            cfg.wire_mode = WireMode::Absorbing;
        else if (mode == "reflecting")
            cfg.wire_mode = WireMode::Reflecting;
        else
            throw DomainError("config: field [wire_grid] mode must be "
                              "'absorbing' or 'reflecting', got '" + mode + "'");
    }

    cfg.lens.focal_length = r.number("lens", "focal_length");
    cfg.lens.aperture_diameter = r.number("lens", "aperture_diameter");
    cfg.lens.object_distance = r.number("lens", "object_distance");
    cfg.lens.image_distance = r.number("lens", "image_distance");

    cfg.detector_radius = r.number("detectors", "radius");
    if (r.has("detectors", "offset"))
        cfg.detector_offset = r.number("detectors", "offset");

    cfg.photon_rate = r.number_or("montecarlo", "photon_rate", 3.0e4);
    cfg.mc_duration = r.number_or("montecarlo", "duration", 30.0);

    r.reject_unknown();
    cfg.validate();
    return cfg;
}

LoadedConfig load_config(const std::string& path) {
    LoadedConfig loaded;
    loaded.path = path;
    loaded.raw = read_file(path);
    loaded.hash = config_hash_hex(loaded.raw);
    loaded.config = parse_config(loaded.raw);
    return loaded;
}

std::string format_config(const ExperimentConfig& config) {
    std::ostringstream out;
    out << "[meta]\nschema_version = " << config.schema_version << "\n\n";
    out << "[grid]\n";
    out << "nx = " << config.grid.nx << "\n";
    out << "ny = " << config.grid.ny << "\n";
    out << "dx = " << format_double(config.grid.dx) << "\n";
    out << "dy = " << format_double(config.grid.dy) << "\n\n";
    out << "[source]\n";
    out << "wavelength = " << format_double(config.wavelength) << "\n";
    out << "separation = " << format_double(config.pinholes.separation) << "\n";
    out << "diameter = " << format_double(config.pinholes.diameter) << "\n";
    out << "relative_phase = " << format_double(config.pinholes.relative_phase) << "\n\n";
    out << "[wire_grid]\n";
    out << "plane_z = " << format_double(config.grid_plane_z) << "\n";
    out << "covering_ratio = " << format_double(config.covering_ratio) << "\n";
    out << "periods = " << config.wire_periods << "\n";
    out << "mode = " << to_string(config.wire_mode) << "\n\n";
    out << "[lens]\n";
    out << "focal_length = " << format_double(config.lens.focal_length) << "\n";
    out << "aperture_diameter = " << format_double(config.lens.aperture_diameter) << "\n";
    out << "object_distance = " << format_double(config.lens.object_distance) << "\n";
    out << "image_distance = " << format_double(config.lens.image_distance) << "\n\n";
    out << "[detectors]\n";
    out << "radius = " << format_double(config.detector_radius) << "\n";
    if (config.detector_offset)
        out << "offset = " << format_double(*config.detector_offset) << "\n";
    out << "\n[montecarlo]\n";
    out << "photon_rate = " << format_double(config.photon_rate) << "\n";
    out << "duration = " << format_double(config.mc_duration) << "\n";
    return out.str();
}

Scenario make_scenario(const ExperimentConfig& config, ScenarioId id) {
    Scenario scenario;
    scenario.id = id;
    scenario.config = config;
    scenario.validate();
    return scenario;
}

} // namespace afshar
