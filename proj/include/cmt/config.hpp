#pragma once

// Structured-text configuration: devices, pumps, thermal environment,
// amplifier chains and optimization targets. Format is line-based
// key/value under [section] headers; '#' starts a comment. All
// frequencies are plain Hz (keys carry the _hz suffix), angles are
// degrees. Unknown sections or keys are rejected.

#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cmt/device.hpp"
#include "cmt/effective.hpp"
#include "cmt/errors.hpp"
#include "cmt/noise.hpp"
#include "cmt/optimize.hpp"
#include "cmt/units.hpp"

namespace cmt {

struct ConfigValue {
    std::vector<double> numbers;
    int line = 0;

    double scalar(const std::string& key) const {
        if (numbers.size() != 1)
            throw config_error(key + ": expected a single value (line " +
                               std::to_string(line) + ")");
        return numbers[0];
    }
};

struct ConfigSection {
    std::string name;
    int line = 0;
    std::map<std::string, ConfigValue> entries;

    bool has(const std::string& key) const { return entries.count(key) > 0; }
    const ConfigValue& at(const std::string& key) const {
        auto it = entries.find(key);
        if (it == entries.end())
            throw config_error("section [" + name + "]: missing key '" + key + "' (line " +
                               std::to_string(line) + ")");
        return it->second;
    }
    double scalar(const std::string& key) const { return at(key).scalar(key); }
    double scalar_or(const std::string& key, double fallback) const {
        return has(key) ? scalar(key) : fallback;
    }

    void reject_unknown(const std::set<std::string>& known) const {
        for (const auto& [key, value] : entries)
            if (!known.count(key))
                throw config_error("section [" + name + "]: unknown key '" + key + "' (line " +
                                   std::to_string(value.line) + ")");
    }
};

using ConfigFile = std::vector<ConfigSection>;

inline ConfigFile parse_config_text(std::istream& in, const std::string& origin) {
    ConfigFile sections;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const auto begin = raw.find_first_not_of(" \t\r");
        if (begin == std::string::npos) continue;
        const auto end = raw.find_last_not_of(" \t\r");
        std::string text = raw.substr(begin, end - begin + 1);

        if (text.front() == '[') {
            if (text.back() != ']')
                throw config_error(origin + ":" + std::to_string(line_no) +
                                   ": malformed section header");
            ConfigSection section;
            section.name = text.substr(1, text.size() - 2);
            section.line = line_no;
            sections.push_back(std::move(section));
            continue;
        }

        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw config_error(origin + ":" + std::to_string(line_no) +
                               ": expected 'key = value'");
        if (sections.empty())
            throw config_error(origin + ":" + std::to_string(line_no) +
                               ": key/value before any section header");

        std::string key = text.substr(0, eq);
        key.erase(key.find_last_not_of(" \t") + 1);
        ConfigValue value;
        value.line = line_no;
        std::istringstream fields(text.substr(eq + 1));
        std::string field;
        while (fields >> field) {
            try {
                std::size_t used = 0;
                const double x = std::stod(field, &used);
                if (used != field.size()) throw std::invalid_argument(field);
                value.numbers.push_back(x);
            } catch (const std::exception&) {
                throw config_error(origin + ":" + std::to_string(line_no) +
                                   ": field '" + field + "' of key '" + key +
                                   "' is not a number");
            }
        }
        if (value.numbers.empty())
            throw config_error(origin + ":" + std::to_string(line_no) + ": key '" + key +
                               "' has no value");
        if (sections.back().entries.count(key))
            throw config_error(origin + ":" + std::to_string(line_no) + ": duplicate key '" +
                               key + "'");
        sections.back().entries.emplace(std::move(key), std::move(value));
    }
    return sections;
}

inline ConfigFile parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    return parse_config_text(in, path);
}

struct LoadedConfig {
    DeviceModel device;
    std::optional<PumpConfiguration> pumps;
    std::vector<std::string> warnings;
    double tuning_v_max = 0.0;  // voltage span of the tuning fixture, if given
};

/// Device (+ optional pump) description. Sections: [cavity.N], [mech.N],
/// [g0_hz], optional [tuning.N], optional [pump.I.J] and [sideband].
inline LoadedConfig load_device_config(const std::string& path) {
    const ConfigFile sections = parse_config_file(path);

    std::map<int, ConfigSection> cavities, mechanics, tunings;
    std::map<std::pair<int, int>, ConfigSection> pumps;
    std::optional<ConfigSection> g0_section, sideband_section;

    auto index_of = [](const std::string& name, const std::string& prefix, int line) {
        const std::string tail = name.substr(prefix.size());
        try {
            std::size_t used = 0;
            const int idx = std::stoi(tail, &used);
            if (used != tail.size() || idx < 1) throw std::invalid_argument(tail);
            return idx;
        } catch (const std::exception&) {
            throw config_error("line " + std::to_string(line) + ": bad section index in [" +
                               name + "]");
        }
    };

    for (const auto& section : sections) {
        const auto& name = section.name;
        if (name.rfind("cavity.", 0) == 0) {
            cavities.emplace(index_of(name, "cavity.", section.line), section);
        } else if (name.rfind("mech.", 0) == 0) {
            mechanics.emplace(index_of(name, "mech.", section.line), section);
        } else if (name.rfind("tuning.", 0) == 0) {
            tunings.emplace(index_of(name, "tuning.", section.line), section);
        } else if (name == "g0_hz") {
            g0_section = section;
        } else if (name == "sideband") {
            sideband_section = section;
        } else if (name.rfind("pump.", 0) == 0) {
            const std::string tail = name.substr(5);
            const auto dot = tail.find('.');
            if (dot == std::string::npos)
                throw config_error("line " + std::to_string(section.line) +
                                   ": pump sections are [pump.<cavity>.<mode>]");
            const int i = index_of("pump." + tail.substr(0, dot), "pump.", section.line);
            const int j = index_of("pump." + tail.substr(dot + 1), "pump.", section.line);
            pumps.emplace(std::make_pair(i, j), section);
        } else {
            throw config_error("line " + std::to_string(section.line) + ": unknown section [" +
                               name + "]");
        }
    }

    if (cavities.empty()) throw config_error(path + ": no [cavity.N] sections");
    if (mechanics.empty()) throw config_error(path + ": no [mech.N] sections");
    if (!g0_section) throw config_error(path + ": missing [g0_hz] section");

    LoadedConfig loaded;
    int expected = 1;
    for (const auto& [idx, section] : cavities) {
        if (idx != expected++)
            throw config_error(path + ": cavity indices must be contiguous from 1");
        section.reject_unknown({"f_hz", "kappa_int_hz", "kappa_ext_hz", "L_h", "Cs_f", "Cm_f"});
        CavityMode cavity;
        cavity.index = idx;
        cavity.omega = hz_to_rad(section.scalar("f_hz"));
        cavity.kappa_int = hz_to_rad(section.scalar("kappa_int_hz"));
        cavity.kappa_ext = hz_to_rad(section.scalar("kappa_ext_hz"));
        if (section.has("L_h")) cavity.inductance = section.scalar("L_h");
        if (section.has("Cs_f")) cavity.stray_capacitance = section.scalar("Cs_f");
        if (section.has("Cm_f")) cavity.motional_capacitance = section.scalar("Cm_f");
        loaded.device.cavities.push_back(cavity);
    }
    expected = 1;
    for (const auto& [idx, section] : mechanics) {
        if (idx != expected++)
            throw config_error(path + ": mech indices must be contiguous from 1");
        section.reject_unknown({"f_hz", "gamma_hz", "m_eff_kg", "x_zpf_m"});
        MechanicalMode mode;
        mode.index = idx;
        mode.omega_m = hz_to_rad(section.scalar("f_hz"));
        mode.gamma_m = hz_to_rad(section.scalar("gamma_hz"));
        if (section.has("m_eff_kg")) mode.effective_mass = section.scalar("m_eff_kg");
        if (section.has("x_zpf_m")) mode.x_zpf = section.scalar("x_zpf_m");
        loaded.device.mechanics.push_back(mode);
    }

    const int nc = loaded.device.num_cavities();
    const int nm = loaded.device.num_mechanics();
    loaded.device.couplings.g0.resize(nc, nm);
    {
        std::set<std::string> known;
        for (int i = 1; i <= nc; ++i) known.insert("cavity." + std::to_string(i));
        g0_section->reject_unknown(known);
        for (int i = 1; i <= nc; ++i) {
            const auto& row = g0_section->at("cavity." + std::to_string(i));
            if (static_cast<int>(row.numbers.size()) != nm)
                throw config_error(path + ": [g0_hz] cavity." + std::to_string(i) +
                                   " needs one value per mechanical mode");
            for (int j = 0; j < nm; ++j)
                loaded.device.couplings.g0(i - 1, j) = hz_to_rad(row.numbers[j]);
        }
    }

    if (!tunings.empty()) {
        loaded.device.tuning.assign(nc, std::nullopt);
        for (const auto& [idx, section] : tunings) {
            if (idx < 1 || idx > nc)
                throw config_error(path + ": tuning index out of range");
            section.reject_unknown({"alpha1_hz_per_v2", "alpha2_hz_per_v4", "sign", "v_max"});
            TuningCurve curve;
            curve.alpha1 = hz_to_rad(section.scalar("alpha1_hz_per_v2"));
            curve.alpha2 = hz_to_rad(section.scalar("alpha2_hz_per_v4"));
            curve.sign = section.scalar_or("sign", 1.0) < 0.0 ? -1 : +1;
            loaded.device.tuning[idx - 1] = curve;
            loaded.tuning_v_max = std::max(loaded.tuning_v_max, section.scalar_or("v_max", 0.0));
        }
    }

    loaded.warnings = loaded.device.validate();

    if (!pumps.empty() || sideband_section) {
        PumpConfiguration pump_config = PumpConfiguration::off(nc, nm);
        for (const auto& [index_pair, section] : pumps) {
            const auto [i, j] = index_pair;
            if (i < 1 || i > nc || j < 1 || j > nm)
                throw config_error(path + ": pump index out of range");
            section.reject_unknown({"photons", "phi_deg"});
            pump_config.photon_number(i - 1, j - 1) = section.scalar("photons");
            pump_config.phase(i - 1, j - 1) = deg_to_rad(section.scalar_or("phi_deg", 0.0));
        }
        if (sideband_section) {
            sideband_section->reject_unknown({"delta0_hz"});
            const auto& values = sideband_section->at("delta0_hz");
            if (values.numbers.size() != 2)
                throw config_error(path + ": [sideband] delta0_hz needs two values");
            pump_config.sideband_detuning(0) = hz_to_rad(values.numbers[0]);
            pump_config.sideband_detuning(1) = hz_to_rad(values.numbers[1]);
        }
        pump_config.validate(loaded.device);
        loaded.pumps = pump_config;
    }
    return loaded;
}

struct EnvironmentConfig {
    ThermalEnvironment environment;
    AmplifierChain amplifiers;
};

/// Thermal/amplifier description. Sections: [amplifiers] (gain_db, n_amp),
/// [environment] (cavity_occupancy or cavity_temp_k, mech_occupancy or
/// mech_temp_k).
inline EnvironmentConfig load_environment_config(const std::string& path,
                                                 const DeviceModel& device) {
    const ConfigFile sections = parse_config_file(path);
    const int nc = device.num_cavities();

    EnvironmentConfig out;
    bool have_amplifiers = false, have_environment = false;
    for (const auto& section : sections) {
        if (section.name == "amplifiers") {
            have_amplifiers = true;
            section.reject_unknown({"gain_db", "n_amp"});
            const auto& gain = section.at("gain_db");
            const auto& quanta = section.at("n_amp");
            if (static_cast<int>(gain.numbers.size()) != nc ||
                static_cast<int>(quanta.numbers.size()) != nc)
                throw config_error(path + ": [amplifiers] needs one gain_db and one n_amp "
                                   "per port");
            out.amplifiers.gain_db =
                Eigen::Map<const Eigen::VectorXd>(gain.numbers.data(), nc);
            out.amplifiers.added_quanta =
                Eigen::Map<const Eigen::VectorXd>(quanta.numbers.data(), nc);
        } else if (section.name == "environment") {
            have_environment = true;
            section.reject_unknown(
                {"cavity_occupancy", "cavity_temp_k", "mech_occupancy", "mech_temp_k"});
            Eigen::VectorXd cavity(nc);
            if (section.has("cavity_occupancy")) {
                const auto& v = section.at("cavity_occupancy");
                if (static_cast<int>(v.numbers.size()) != nc)
                    throw config_error(path + ": cavity_occupancy needs one value per cavity");
                cavity = Eigen::Map<const Eigen::VectorXd>(v.numbers.data(), nc);
            } else {
                const auto& v = section.at("cavity_temp_k");
                if (static_cast<int>(v.numbers.size()) != nc)
                    throw config_error(path + ": cavity_temp_k needs one value per cavity");
                for (int i = 0; i < nc; ++i)
                    cavity(i) = bose_occupancy(device.cavities[i].omega, v.numbers[i]);
            }
            Eigen::Vector2d mech;
            if (section.has("mech_occupancy")) {
                const auto& v = section.at("mech_occupancy");
                if (v.numbers.size() != 2)
                    throw config_error(path + ": mech_occupancy needs two values");
                mech << v.numbers[0], v.numbers[1];
            } else {
                const auto& v = section.at("mech_temp_k");
                if (v.numbers.size() != 2)
                    throw config_error(path + ": mech_temp_k needs two values");
                for (int j = 0; j < 2; ++j)
                    mech(j) = bose_occupancy(device.mechanics[j].omega_m, v.numbers[j]);
            }
            out.environment = ThermalEnvironment::from_occupancies(cavity, mech);
        } else {
            throw config_error(path + ": unknown section [" + section.name + "]");
        }
    }
    if (!have_amplifiers) throw config_error(path + ": missing [amplifiers] section");
    if (!have_environment) throw config_error(path + ": missing [environment] section");
    out.amplifiers.validate(nc);
    return out;
}

/// Optimization target: [target] with kind = 1 (isolate) or 2 (circulate)
/// expressed via dedicated keys.
inline OptimizationTarget load_target_config(const std::string& path) {
    const ConfigFile sections = parse_config_file(path);
    if (sections.size() != 1 || sections.front().name != "target")
        throw config_error(path + ": expected a single [target] section");
    const ConfigSection& section = sections.front();
    section.reject_unknown({"isolate_from", "isolate_to", "circulate_order", "band_hz",
                            "band_points", "weight", "min_isolation_db", "max_insertion_db"});

    OptimizationTarget target;
    const bool isolate = section.has("isolate_from") || section.has("isolate_to");
    const bool circulate = section.has("circulate_order");
    if (isolate == circulate)
        throw config_error(path + ": specify either isolate_from/isolate_to or "
                           "circulate_order");
    if (isolate) {
        target.kind = OptimizationTarget::Kind::isolate;
        target.from_port = static_cast<int>(section.scalar("isolate_from")) - 1;
        target.to_port = static_cast<int>(section.scalar("isolate_to")) - 1;
    } else {
        target.kind = OptimizationTarget::Kind::circulate;
        const auto& order = section.at("circulate_order");
        if (order.numbers.size() != 3)
            throw config_error(path + ": circulate_order needs three port indices");
        target.order.clear();
        for (const double v : order.numbers) target.order.push_back(static_cast<int>(v) - 1);
    }
    if (section.has("band_hz")) {
        const auto& band = section.at("band_hz");
        if (band.numbers.size() != 2)
            throw config_error(path + ": band_hz needs two values");
        target.band_min = hz_to_rad(band.numbers[0]);
        target.band_max = hz_to_rad(band.numbers[1]);
    }
    target.band_points = static_cast<int>(section.scalar_or("band_points", 1.0));
    target.insertion_weight = section.scalar_or("weight", 0.25);
    target.min_isolation_db = section.scalar_or("min_isolation_db", 0.0);
    target.max_insertion_db = section.scalar_or("max_insertion_db", 0.0);
    return target;
}

}  // namespace cmt
