#include "hk/branch_io.hpp"

#include <fstream>

#include "hk/errors.hpp"

namespace hk::io {

using nlohmann::json;

namespace {

template <class T>
T field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw InvalidArgument(std::string("branch file: missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("branch file: bad field '") + key + "': " + e.what());
    }
}

json disc_to_json(const Discretization& d) {
    return {{"n_modes", d.n_modes}, {"n_theta", d.n_theta}, {"n_rho", d.n_rho}, {"k_max", d.k_max},
            {"tol", d.tol},         {"newton_tol", d.newton_tol}, {"newton_max_iter", d.newton_max_iter}};
}

Discretization disc_from_json(const json& j) {
    Discretization d;
    d.n_modes = field<int>(j, "n_modes");
    d.n_theta = field<int>(j, "n_theta");
    d.n_rho = field<int>(j, "n_rho");
    d.k_max = field<int>(j, "k_max");
    d.tol = field<double>(j, "tol");
    d.newton_tol = field<double>(j, "newton_tol");
    d.newton_max_iter = field<int>(j, "newton_max_iter");
    return d;
}

}  // namespace

json to_json(const Contour& c) {
    return {{"base_radius", c.base_radius}, {"m_fold", c.m_fold}, {"cos_coeffs", c.cos_coeffs}};
}

json to_json(const BranchPoint& p) {
    json cs = json::array();
    for (const auto& c : p.contours) cs.push_back(to_json(c));
    return {{"s", p.s},
            {"omega", p.omega},
            {"contours", cs},
            {"residual", p.residual},
            {"k_max_used", p.k_max_used},
            {"newton_history", p.newton_history}};
}

json to_json(const BranchFile& f) {
    const auto& c = f.config;
    json cfg = {{"kind", c.doubly ? "doubly" : "simply"}, {"h", c.h}, {"m", c.m}, {"disc", disc_to_json(c.disc)}};
    if (c.doubly) {
        cfg["a1"] = c.a1;
        cfg["a2"] = c.a2;
        cfg["branch"] = c.branch == dispersion::Branch::Plus ? "+" : "-";
    } else {
        cfg["a"] = c.a;
    }
    json pts = json::array();
    for (const auto& p : f.points) pts.push_back(to_json(p));
    return {{"schema", kSchema}, {"config", cfg}, {"points", pts}};
}

Contour contour_from_json(const json& j) {
    Contour c;
    c.base_radius = field<double>(j, "base_radius");
    c.m_fold = field<int>(j, "m_fold");
    c.cos_coeffs = field<std::vector<double>>(j, "cos_coeffs");
    c.validate();
    return c;
}

BranchPoint point_from_json(const json& j) {
    BranchPoint p;
    p.s = field<double>(j, "s");
    p.omega = field<double>(j, "omega");
    for (const auto& c : field<json>(j, "contours")) p.contours.push_back(contour_from_json(c));
    if (p.contours.empty() || p.contours.size() > 2) throw InvalidArgument("branch file: a point needs one or two contours");
    p.residual = field<double>(j, "residual");
    p.k_max_used = j.contains("k_max_used") ? field<int>(j, "k_max_used") : 0;
    if (j.contains("newton_history")) p.newton_history = field<std::vector<double>>(j, "newton_history");
    return p;
}

BranchFile branch_from_json(const json& j) {
    if (field<std::string>(j, "schema") != kSchema) throw InvalidArgument("branch file: unsupported schema");
    BranchFile f;
    const json cfg = field<json>(j, "config");
    const auto kind = field<std::string>(cfg, "kind");
    if (kind != "simply" && kind != "doubly") throw InvalidArgument("branch file: kind must be simply or doubly");
    auto& c = f.config;
    c.doubly = kind == "doubly";
    c.h = field<double>(cfg, "h");
    c.m = field<int>(cfg, "m");
    c.disc = disc_from_json(field<json>(cfg, "disc"));
    c.disc.validate(c.m);
    if (c.doubly) {
        c.a1 = field<double>(cfg, "a1");
        c.a2 = field<double>(cfg, "a2");
        const auto br = field<std::string>(cfg, "branch");
        if (br != "+" && br != "-") throw InvalidArgument("branch file: branch must be + or -");
        c.branch = br == "+" ? dispersion::Branch::Plus : dispersion::Branch::Minus;
    } else {
        c.a = field<double>(cfg, "a");
    }
    for (const auto& p : field<json>(j, "points")) {
        f.points.push_back(point_from_json(p));
        if (f.points.back().contours.size() != (c.doubly ? 2u : 1u))
            throw InvalidArgument("branch file: contour count does not match kind");
    }
    return f;
}

BranchFile read_branch_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open branch file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InvalidArgument("branch file " + path + ": " + e.what());
    }
    return branch_from_json(j);
}

void write_branch_file(const std::string& path, const BranchFile& f) {
    std::ofstream out(path);
    if (!out) throw InvalidArgument("cannot write " + path);
    out << to_json(f).dump(2) << '\n';
}

}  // namespace hk::io
