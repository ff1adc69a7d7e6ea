#pragma once

#include <charconv>
#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "entropy_bounds/errors.hpp"
#include "entropy_bounds/states.hpp"

namespace entropy_bounds {

// 15 significant digits, '.' decimal, locale-free: identical bytes for
// identical doubles on a given platform.
inline std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x,
                                   std::chars_format::general, 15);
    if (res.ec != std::errc())
        throw numeric_failure("failed to format a double");
    return std::string(buf, res.ptr);
}

inline std::string format_optional(const std::optional<double>& x) {
    return x ? format_double(*x) : std::string();
}

// State serialization: {"weights": [...], "labels": [...]}.
inline nlohmann::json state_to_json(const SpectralState& state) {
    return nlohmann::json{{"weights", state.weights()}, {"labels", state.labels()}};
}

inline SpectralState state_from_json(const nlohmann::json& j) {
    if (!j.contains("weights"))
        throw parse_error("state JSON must contain a 'weights' array");
    std::vector<double> weights;
    std::vector<std::size_t> labels;
    try {
        weights = j.at("weights").get<std::vector<double>>();
        if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::size_t>>();
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("invalid state JSON: ") + e.what());
    }
    if (labels.empty() && !weights.empty()) {
        labels.resize(weights.size());
        for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = i;
    }
    return SpectralState(std::move(weights), std::move(labels));
}

inline SpectralState load_state(std::istream& in) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("invalid state JSON: ") + e.what());
    }
    return state_from_json(j);
}

// Comma-separated doubles, e.g. "0.75,0.25".
inline std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        const std::string item = text.substr(pos, comma - pos);
        try {
            std::size_t used = 0;
            values.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw parse_error("invalid number '" + item + "' in list");
        }
        pos = comma + 1;
    }
    if (values.empty()) throw parse_error("empty number list");
    return values;
}

inline std::vector<std::size_t> parse_index_list(const std::string& text) {
    std::vector<std::size_t> values;
    for (double v : parse_double_list(text)) {
        if (v < 0.0 || v != double(std::size_t(v)))
            throw parse_error("invalid label '" + format_double(v) + "' in list");
        values.push_back(std::size_t(v));
    }
    return values;
}

}  // namespace entropy_bounds
