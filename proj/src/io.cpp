#include "opuc/io.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace opuc {

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

void write_config(std::ostream& out, const Config& config, const std::string& line_prefix) {
    for (const auto& [key, value] : config) out << line_prefix << key << '=' << value << '\n';
}

namespace {

void strip(std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) {
        s.clear();
        return;
    }
    const auto end = s.find_last_not_of(" \t\r\n");
    s = s.substr(begin, end - begin + 1);
}

Config config_from_json(const nlohmann::json& j) {
    const nlohmann::json& obj = j.contains("config") ? j.at("config") : j;
    if (!obj.is_object()) throw std::invalid_argument("config JSON must be an object");
    Config config;
    for (const auto& [key, value] : obj.items()) {
        if (key == "timestamp") continue;
        if (value.is_string()) config[key] = value.get<std::string>();
        else config[key] = value.dump();
    }
    return config;
}

}  // namespace

Config read_config_text(std::istream& in) {
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::string probe = text;
    strip(probe);
    if (!probe.empty() && probe.front() == '{')
        return config_from_json(nlohmann::json::parse(probe));

    Config config;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        strip(line);
        while (!line.empty() && line.front() == '#') {
            line.erase(line.begin());
            strip(line);
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;  // data rows, headers, prose
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        strip(key);
        strip(value);
        if (key.empty() || key == "timestamp") continue;
        config[key] = value;
    }
    return config;
}

Config read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    return read_config_text(in);
}

std::string iso8601_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

DiscreteMeasure load_measure_csv(std::istream& in) {
    DiscreteMeasure measure;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        strip(line);
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            header_seen = true;
            if (line.find("center") != std::string::npos) continue;  // header row
        }
        std::istringstream row(line);
        std::string field;
        double values[3];
        for (int i = 0; i < 3; ++i) {
            if (!std::getline(row, field, ','))
                throw std::invalid_argument("measure rows need center,width,mass");
            values[i] = std::stod(field);
        }
        measure.cells.push_back({values[0], values[1], values[2]});
    }
    measure.validate();
    return measure;
}

}  // namespace opuc
