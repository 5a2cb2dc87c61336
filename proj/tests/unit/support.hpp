#pragma once

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace hk_test {

inline double rel_err(double got, double want) { return std::fabs(got - want) / std::fabs(want); }

inline std::vector<double> log_points(double lo, double hi, int n) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    return out;
}

// Golden entries from tests/golden; the file path comes from the build.
inline const nlohmann::json& golden() {
    static const nlohmann::json doc = [] {
        std::ifstream in(HK_GOLDEN_FILE);
        if (!in) throw std::runtime_error("cannot open golden file " HK_GOLDEN_FILE);
        return nlohmann::json::parse(in);
    }();
    return doc;
}

inline double golden_value(const std::string& op, const nlohmann::json& inputs) {
    for (const auto& e : golden().at("entries"))
        if (e.at("op") == op && e.at("inputs") == inputs) return std::stod(e.at("value").get<std::string>());
    throw std::runtime_error("no golden entry for " + op + " " + inputs.dump());
}

}  // namespace hk_test
