#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hk/contour.hpp"

namespace hk::io {

inline constexpr const char* kSchema = "helix-kelvin/v1";

struct BranchConfig {
    bool doubly = false;
    double a = 1.0;   // simply connected radius
    double a1 = 1.0;  // annulus radii, doubly connected only
    double a2 = 0.5;
    double h = 1.0;
    int m = 3;
    dispersion::Branch branch = dispersion::Branch::Plus;
    Discretization disc;
};

struct BranchFile {
    BranchConfig config;
    std::vector<BranchPoint> points;
};

nlohmann::json to_json(const Contour& c);
nlohmann::json to_json(const BranchPoint& p);
nlohmann::json to_json(const BranchFile& f);

// Throws InvalidArgument on a missing field, wrong schema or invalid value.
Contour contour_from_json(const nlohmann::json& j);
BranchPoint point_from_json(const nlohmann::json& j);
BranchFile branch_from_json(const nlohmann::json& j);

BranchFile read_branch_file(const std::string& path);
void write_branch_file(const std::string& path, const BranchFile& f);

}  // namespace hk::io
