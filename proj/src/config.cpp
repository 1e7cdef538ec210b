#include "imhom/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "imhom/presets.hpp"

namespace imhom {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(int line, const std::string& key, const std::string& what) {
    std::ostringstream os;
    os << "config error at line " << line;
    if (!key.empty()) os << " (key '" << key << "')";
    os << ": " << what;
    throw ConfigError(os.str());
}

double parse_positive(const std::string& v, int line, const std::string& key) {
    size_t pos = 0;
    double x = 0;
    try {
        x = std::stod(v, &pos);
    } catch (...) {
        fail(line, key, "not a number: '" + v + "'");
    }
    if (pos != v.size()) fail(line, key, "trailing characters in number '" + v + "'");
    if (!(x > 0.0)) fail(line, key, "must be positive");
    return x;
}

long parse_positive_int(const std::string& v, int line, const std::string& key) {
    double x = parse_positive(v, line, key);
    long n = static_cast<long>(x);
    if (static_cast<double>(n) != x) fail(line, key, "must be an integer");
    return n;
}

std::vector<double> parse_eps_list(const std::string& v, int line, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        size_t slash = item.find('/');
        if (slash != std::string::npos) {
            double num = parse_positive(trim(item.substr(0, slash)), line, key);
            double den = parse_positive(trim(item.substr(slash + 1)), line, key);
            out.push_back(num / den);
        } else {
            out.push_back(parse_positive(item, line, key));
        }
    }
    if (out.empty()) fail(line, key, "empty epsilon list");
    return out;
}

bool is_coefficient_entry(const std::string& key) {
    for (const char* side : {"plus.", "minus."}) {
        if (key.rfind(side, 0) == 0) {
            std::string rest = key.substr(std::string(side).size());
            if (rest.rfind("a[", 0) == 0 || rest.rfind("b[", 0) == 0 || rest == "mu" ||
                rest == "mu1")
                return true;
        }
    }
    return false;
}

}  // namespace

RunConfig parse_config(const std::filesystem::path& path, const std::string& command) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());

    RunConfig cfg;
    std::string section;
    std::string raw;
    int line = 0;
    std::vector<std::string> seen_sections;

    while (std::getline(in, raw)) {
        ++line;
        std::string s = trim(raw);
        size_t hash = s.find('#');
        if (hash != std::string::npos) s = trim(s.substr(0, hash));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') fail(line, "", "malformed section header '" + s + "'");
            section = trim(s.substr(1, s.size() - 2));
            static const std::vector<std::string> known = {"run", "coefficients", "cell",
                                                           "interface", "convergence", "budget"};
            if (std::find(known.begin(), known.end(), section) == known.end())
                fail(line, section, "unknown section");
            seen_sections.push_back(section);
            continue;
        }
        size_t eq = s.find('=');
        if (eq == std::string::npos) fail(line, "", "expected 'key = value', got '" + s + "'");
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        if (key.empty() || value.empty()) fail(line, key, "empty key or value");
        if (section.empty()) fail(line, key, "key outside any section");
        cfg.echo.emplace_back(section + "." + key, value);

        if (section == "run") {
            if (key == "dimension")
                cfg.dimension = static_cast<int>(parse_positive_int(value, line, key));
            else if (key == "seed")
                cfg.seed = static_cast<uint64_t>(parse_positive_int(value, line, key));
            else if (key == "output")
                cfg.output = value;
            else
                fail(line, key, "unknown key in [run]");
        } else if (section == "coefficients") {
            if (key == "preset") {
                if (!is_preset_field(value)) fail(line, key, "unknown preset '" + value + "'");
                cfg.preset = value;
            } else if (key == "q_plus") {
                cfg.q_plus = parse_positive(value, line, key);
            } else if (is_coefficient_entry(key)) {
                cfg.entries[key] = value;
            } else {
                fail(line, key, "unknown key in [coefficients]");
            }
        } else if (section == "cell") {
            if (key == "n")
                cfg.cell_n = static_cast<int>(parse_positive_int(value, line, key));
            else if (key == "tol")
                cfg.cell_tol = parse_positive(value, line, key);
            else
                fail(line, key, "unknown key in [cell]");
        } else if (section == "interface") {
            if (key == "R")
                cfg.R = static_cast<int>(parse_positive_int(value, line, key));
            else if (key == "n_transverse")
                cfg.n_transverse = static_cast<int>(parse_positive_int(value, line, key));
            else if (key == "tol")
                cfg.interface_tol = parse_positive(value, line, key);
            else if (key == "r_stability")
                cfg.r_stability = static_cast<int>(parse_positive_int(value, line, key));
            else
                fail(line, key, "unknown key in [interface]");
        } else if (section == "convergence") {
            if (key == "epsilons")
                cfg.epsilons = parse_eps_list(value, line, key);
            else if (key == "resolution")
                cfg.resolution = static_cast<int>(parse_positive_int(value, line, key));
            else if (key == "tol")
                cfg.convergence_tol = parse_positive(value, line, key);
            else
                fail(line, key, "unknown key in [convergence]");
        } else if (section == "budget") {
            if (key == "max_seconds")
                cfg.max_seconds = parse_positive(value, line, key);
            else if (key == "max_unknowns")
                cfg.max_unknowns = parse_positive_int(value, line, key);
            else
                fail(line, key, "unknown key in [budget]");
        }
    }

    auto has = [&](const std::string& sec) {
        return std::find(seen_sections.begin(), seen_sections.end(), sec) != seen_sections.end();
    };
    std::vector<std::string> required = {"run", "coefficients", "cell"};
    if (command == "interface" || command == "decay" || command == "convergence" ||
        command == "all")
        required.push_back("interface");
    if (command == "convergence" || command == "all") required.push_back("convergence");
    for (const auto& sec : required)
        if (!has(sec))
            throw ConfigError("config is missing the [" + sec + "] section required by command '" +
                              command + "'");

    if (!cfg.preset.empty() && !cfg.entries.empty())
        throw ConfigError("config gives both a preset and explicit coefficient entries");
    if (cfg.preset.empty() && cfg.entries.empty())
        throw ConfigError("config must give a coefficient preset or explicit entries");
    if (cfg.dimension < 2) throw ConfigError("dimension must be at least 2");
    if ((command == "convergence" || command == "all") && cfg.epsilons.empty())
        throw ConfigError("[convergence] must list epsilons");
    for (size_t i = 1; i < cfg.epsilons.size(); ++i)
        if (!(cfg.epsilons[i] < cfg.epsilons[i - 1]))
            throw ConfigError("epsilon list must be strictly decreasing");
    if (cfg.r_stability > 0 && cfg.r_stability <= cfg.R)
        throw ConfigError("r_stability must exceed R");
    if ((command == "decay" || command == "convergence" || command == "all") && cfg.R < 5)
        throw ConfigError("decay window [2, R-2] needs R >= 5");
    return cfg;
}

namespace {

PeriodicCoefficients side_from_entries(const RunConfig& cfg, const std::string& side) {
    PeriodicCoefficients pc;
    pc.d = cfg.dimension;
    pc.name = side;
    int d = pc.d;
    pc.a.resize(static_cast<size_t>(d * d));
    pc.b.reserve(static_cast<size_t>(d));
    std::vector<char> have(static_cast<size_t>(d * d), 0);
    for (int i = 1; i <= d; ++i)
        for (int j = 1; j <= d; ++j) {
            std::string key = side + ".a[" + std::to_string(i) + "][" + std::to_string(j) + "]";
            auto it = cfg.entries.find(key);
            if (it != cfg.entries.end()) {
                pc.a[static_cast<size_t>((i - 1) * d + (j - 1))] = Expr::parse(it->second, d);
                have[static_cast<size_t>((i - 1) * d + (j - 1))] = 1;
            }
        }
    // fill from the symmetric partner; a matrix entry must come from somewhere
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            if (have[static_cast<size_t>(i * d + j)]) continue;
            if (have[static_cast<size_t>(j * d + i)])
                pc.a[static_cast<size_t>(i * d + j)] = pc.a[static_cast<size_t>(j * d + i)];
            else if (i == j)
                throw ConfigError("missing coefficient entry " + side + ".a[" +
                                  std::to_string(i + 1) + "][" + std::to_string(j + 1) + "]");
            else
                pc.a[static_cast<size_t>(i * d + j)] = Expr::parse("0", d);
        }
    for (int i = 1; i <= d; ++i) {
        std::string key = side + ".b[" + std::to_string(i) + "]";
        auto it = cfg.entries.find(key);
        pc.b.push_back(Expr::parse(it != cfg.entries.end() ? it->second : "0", d));
    }
    auto mu_it = cfg.entries.find(side + ".mu");
    if (mu_it != cfg.entries.end()) pc.mu = std::stod(mu_it->second);
    auto mu1_it = cfg.entries.find(side + ".mu1");
    if (mu1_it != cfg.entries.end()) pc.mu1 = std::stod(mu1_it->second);
    return pc;
}

}  // namespace

CoefficientField build_field(const RunConfig& cfg) {
    if (!cfg.preset.empty()) return preset_field(cfg.preset, cfg.dimension);
    CoefficientField f;
    f.name = "custom";
    f.plus = side_from_entries(cfg, "plus");
    f.minus = side_from_entries(cfg, "minus");
    return f;
}

}  // namespace imhom
