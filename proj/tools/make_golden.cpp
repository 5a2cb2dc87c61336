// Generates (or re-checks) the golden-value file from the extended-precision
// oracles alone; no double-precision library routine contributes to a value.
//
//   make_golden <out.json>          write
//   make_golden --check <in.json>   recompute and compare every entry

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hk/refcheck.hpp"

namespace {

using hk::refcheck::mp_real;
using nlohmann::ordered_json;

constexpr int kDigits = 25;
const char* kSeriesOracle = "refcheck::bessel_series_reference (power series, 40 working digits)";
const char* kPrimeOracle = "refcheck::bessel_prime_series_reference (differentiated series, 40 working digits)";
const char* kFormulaOracle = "closed-form formula in extended precision over refcheck series values";

std::string text(const mp_real& v) { return v.str(kDigits, std::ios_base::scientific); }

struct Entry {
    std::string op;
    ordered_json inputs;
    std::string oracle;
    std::function<mp_real()> compute;
};

mp_real ip(int n, double z) { return hk::refcheck::bessel_prime_series_reference(n, z).i; }
mp_real kp(int n, double z) { return hk::refcheck::bessel_prime_series_reference(n, z).k; }

// Arguments n a / h etc. are formed in double first, exactly as the library forms them.
mp_real omega_simply(int n, double a, double h) {
    const double x = n * a / h;
    const mp_real A(a), H(h);
    return (H * H + A * A) / (2 * H * H) + (A * A) / (H * H) * ip(n, x) * kp(n, x);
}

mp_real gamma(int n, double a, double b, double h) {
    const mp_real A(a), B(b), H(h);
    return -(A * B) / (H * H) * ip(n, n * b / h) * kp(n, n * a / h);
}

mp_real upsilon(double a, double b, double h) {
    const mp_real A(a), B(b), H(h);
    return (H * H + A * A) * (A * A - B * B) / (2 * H * H * A * A);
}

mp_real omega_doubly(int n, double a1, double a2, double h, int sign) {
    const mp_real u = upsilon(a1, a2, h);
    const mp_real g11 = gamma(n, a1, a1, h), g22 = gamma(n, a2, a2, h), g12 = gamma(n, a1, a2, h);
    const mp_real d = (u - g11 - g22) * (u - g11 - g22) - 4 * g12 * g12;
    return (u - g11 + g22 + sign * sqrt(d)) / 2;
}

std::vector<Entry> entries() {
    std::vector<Entry> out;
    auto bessel = [&](const char* op, int n, double z, bool is_i, bool prime) {
        out.push_back({op, {{"n", n}, {"z", z}}, prime ? kPrimeOracle : kSeriesOracle, [=] {
                           if (prime) return is_i ? ip(n, z) : kp(n, z);
                           const auto p = hk::refcheck::bessel_series_reference(n, z);
                           return is_i ? p.i : p.k;
                       }});
    };
    bessel("bessel_i", 2, 1.0, true, false);
    bessel("bessel_i", 10, 7.5, true, false);
    bessel("bessel_i", 49, 30.0, true, false);
    bessel("bessel_k", 0, 2.0, false, false);
    bessel("bessel_k", 5, 3.0, false, false);
    bessel("bessel_k", 40, 20.0, false, false);
    bessel("bessel_i_prime", 3, 2.0, true, true);
    bessel("bessel_k_prime", 3, 2.0, false, true);
    bessel("bessel_k_prime", 12, 0.5, false, true);
    // Orders past the crossover exercise the uniform expansion.
    bessel("bessel_i", 60, 40.0, true, false);
    bessel("bessel_k", 60, 40.0, false, false);
    bessel("bessel_i_prime", 55, 30.0, true, true);
    bessel("bessel_k_prime", 55, 30.0, false, true);

    out.push_back({"product_iprime_kprime", {{"n", 3}, {"z", 1.0}}, kPrimeOracle, [] { return ip(3, 3.0) * kp(3, 3.0); }});
    for (auto [n, a, h] : {std::tuple{3, 1.0, 1.0}, std::tuple{2, 1.0, 1.0}, std::tuple{3, 1.0, 5.0}, std::tuple{8, 1.0, 0.5}})
        out.push_back({"omega_simply", {{"n", n}, {"a", a}, {"h", h}}, kFormulaOracle, [=] { return omega_simply(n, a, h); }});
    out.push_back({"gamma", {{"n", 3}, {"a", 1.0}, {"b", 0.6}, {"h", 1.0}}, kFormulaOracle, [] { return gamma(3, 1.0, 0.6, 1.0); }});
    for (int sign : {1, -1})
        out.push_back({sign > 0 ? "omega_doubly_plus" : "omega_doubly_minus",
                       {{"n", 3}, {"a1", 1.0}, {"a2", 0.6}, {"h", 1.0}},
                       kFormulaOracle,
                       [=] { return omega_doubly(3, 1.0, 0.6, 1.0, sign); }});
    return out;
}

ordered_json build() {
    ordered_json doc;
    doc["schema"] = "helix-kelvin/v1";
    doc["generator"] = "make_golden";
    doc["entries"] = ordered_json::array();
    for (const auto& e : entries()) {
        doc["entries"].push_back(
            {{"op", e.op}, {"inputs", e.inputs}, {"value", text(e.compute())}, {"oracle", e.oracle}, {"digits", kDigits}});
    }
    return doc;
}

int check(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "make_golden: cannot read " << path << "\n";
        return 2;
    }
    const ordered_json stored = ordered_json::parse(in);
    const ordered_json fresh = build();
    if (stored.at("entries").size() != fresh.at("entries").size()) {
        std::cerr << "make_golden: entry count differs from the generator\n";
        return 1;
    }
    int bad = 0;
    for (std::size_t i = 0; i < fresh["entries"].size(); ++i) {
        const auto& s = stored["entries"][i];
        const auto& f = fresh["entries"][i];
        for (const char* key : {"op", "inputs", "value", "oracle", "digits"}) {
            if (!s.contains(key)) {
                std::cerr << "entry " << i << ": missing provenance field '" << key << "'\n";
                ++bad;
            }
        }
        if (s.value("op", "") != f["op"] || s.value("inputs", ordered_json{}) != f["inputs"]) {
            std::cerr << "entry " << i << ": op or inputs differ\n";
            ++bad;
            continue;
        }
        const mp_real sv(s.value("value", std::string("nan"))), fv(f["value"].get<std::string>());
        const mp_real rel = abs(sv - fv) / abs(fv);
        if (!(rel < mp_real("1e-22"))) {
            std::cerr << "entry " << i << " (" << f["op"].get<std::string>() << "): stored " << s["value"] << " fresh "
                      << f["value"] << "\n";
            ++bad;
        }
    }
    std::cout << (bad ? "golden check FAILED" : "golden check ok") << " (" << fresh["entries"].size() << " entries)\n";
    return bad ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        if (argc == 3 && std::string(argv[1]) == "--check") return check(argv[2]);
        if (argc != 2) {
            std::cerr << "usage: make_golden <out.json> | make_golden --check <in.json>\n";
            return 2;
        }
        std::ofstream out(argv[1]);
        out << build().dump(2) << "\n";
        return out ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "make_golden: " << e.what() << "\n";
        return 1;
    }
}
