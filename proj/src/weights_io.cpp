#include "turbodec/weights_io.hpp"

#include <fstream>
#include <json.hpp>

#include "turbodec/errors.hpp"

namespace turbodec {

namespace {
using nlohmann::json;
}

std::string weights_to_json(const WeightSet& w) {
    json j;
    j["scheme"] = to_string(w.scheme);
    j["iterations"] = w.iterations;
    json rows = json::array();
    if (w.scheme == WeightScheme::shared) {
        for (const auto& row : w.shared) rows.push_back(row);
    } else if (w.scheme == WeightScheme::positional) {
        j["K"] = w.block_length;
        for (const auto& row : w.positional) {
            json r = json::array();
            for (const auto& slot : row) r.push_back(slot);
            rows.push_back(r);
        }
    }
    j["weights"] = rows;
    return j.dump(2);
}

WeightSet weights_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("weight file is not valid JSON: ") + e.what());
    }
    try {
        WeightSet w;
        w.scheme = scheme_from_name(j.at("scheme").get<std::string>());
        w.iterations = j.at("iterations").get<int>();
        if (w.scheme == WeightScheme::classical) return w;
        const json& rows = j.at("weights");
        if (!rows.is_array() || rows.size() != std::size_t(w.iterations))
            throw ConfigError("weight file: expected one row of 6 entries per iteration");
        if (w.scheme == WeightScheme::shared) {
            for (const auto& row : rows) {
                if (row.size() != 6) throw ConfigError("weight file: row must have 6 entries");
                std::array<double, 6> r{};
                for (int s = 0; s < 6; ++s) r[s] = row[s].get<double>();
                w.shared.push_back(r);
            }
        } else {
            w.block_length = j.at("K").get<std::size_t>();
            for (const auto& row : rows) {
                if (row.size() != 6) throw ConfigError("weight file: row must have 6 entries");
                std::array<std::vector<double>, 6> r;
                for (int s = 0; s < 6; ++s) {
                    r[s] = row[s].get<std::vector<double>>();
                    if (r[s].size() != w.block_length)
                        throw ConfigError("weight file: positional entry length != K");
                }
                w.positional.push_back(std::move(r));
            }
        }
        return w;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed weight file: ") + e.what());
    }
}

void save_weights(const std::string& path, const WeightSet& w) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    out << weights_to_json(w) << '\n';
}

WeightSet load_weights(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open weight file '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return weights_from_json(text);
}

}  // namespace turbodec
