#include "rmtlab/lab/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rmtlab/error.hpp"

namespace rmtlab::lab {

namespace {

double parse_double(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        const double value = std::stod(text, &used);
        if (used != text.size() || !std::isfinite(value)) throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        fail(ErrorKind::InvalidConfig, "cannot parse " + what + " from '" + text + "'");
    }
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, sep)) parts.push_back(item);
    if (!text.empty() && text.back() == sep) parts.emplace_back();
    return parts;
}

std::string format_number(double x) {
    std::ostringstream out;
    out.precision(17);
    out << x;
    return out.str();
}

}  // namespace

TSpec TSpec::parse(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.empty()) fail(ErrorKind::InvalidConfig, "empty t specification");
    TSpec spec;
    if (parts.size() == 1) {
        spec.kind = Kind::Single;
        spec.a = parse_double(parts[0], "t");
        return spec;
    }
    const std::string& head = parts[0];
    if (head == "mu_sqrt_n" || head == "mu_over_sqrt_n") {
        if (parts.size() != 2) fail(ErrorKind::InvalidConfig, "expected " + head + ":mu");
        spec.kind = head == "mu_sqrt_n" ? Kind::MuSqrtN : Kind::MuOverSqrtN;
        spec.a = parse_double(parts[1], "mu");
        return spec;
    }
    if (head == "n_pow") {
        if (parts.size() != 2 && parts.size() != 3) fail(ErrorKind::InvalidConfig, "expected n_pow:p[:c]");
        spec.kind = Kind::NPow;
        spec.a = parse_double(parts[1], "exponent");
        if (parts.size() == 3) spec.coefficient = parse_double(parts[2], "coefficient");
        return spec;
    }
    if (parts.size() == 3) {
        spec.kind = Kind::Range;
        spec.a = parse_double(parts[0], "range start");
        spec.b = parse_double(parts[1], "range end");
        const double steps = parse_double(parts[2], "step count");
        if (steps < 1 || steps != std::floor(steps) || steps > 1e7) {
            fail(ErrorKind::InvalidConfig, "range step count must be a positive integer");
        }
        spec.steps = static_cast<int>(steps);
        return spec;
    }
    fail(ErrorKind::InvalidConfig, "unrecognised t specification '" + text + "'");
}

std::vector<double> TSpec::resolve(Index n) const {
    const double nd = static_cast<double>(n);
    switch (kind) {
        case Kind::Single: return {a};
        case Kind::MuSqrtN: return {a * std::sqrt(nd)};
        case Kind::MuOverSqrtN: return {a / std::sqrt(nd)};
        case Kind::NPow: return {coefficient * std::pow(nd, a)};
        case Kind::Range: {
            std::vector<double> values(static_cast<std::size_t>(steps) + 1);
            for (int k = 0; k <= steps; ++k) values[static_cast<std::size_t>(k)] = k == steps ? b : a + (b - a) * k / steps;
            return values;
        }
    }
    return {};
}

std::string TSpec::to_string() const {
    switch (kind) {
        case Kind::Single: return format_number(a);
        case Kind::MuSqrtN: return "mu_sqrt_n:" + format_number(a);
        case Kind::MuOverSqrtN: return "mu_over_sqrt_n:" + format_number(a);
        case Kind::NPow: return "n_pow:" + format_number(a) + ":" + format_number(coefficient);
        case Kind::Range: return format_number(a) + ":" + format_number(b) + ":" + std::to_string(steps);
    }
    return {};
}

void ExperimentConfig::validate() const {
    if (n < 1) fail(ErrorKind::InvalidConfig, "n must be >= 1");
    if (trials < 1) fail(ErrorKind::InvalidConfig, "trials must be >= 1");
    if (rank < 1 || rank > n) fail(ErrorKind::InvalidConfig, "rank must lie in [1, n]");
    if (rank > 1 && model != ModelKind::Multiplicative) {
        fail(ErrorKind::InvalidConfig, "rank > 1 is only available for the multiplicative model");
    }
    if (!(radius > 0.0 && radius < 1.0)) fail(ErrorKind::InvalidConfig, "radius must lie in (0, 1)");
    if (!std::isfinite(epsilon) || !std::isfinite(level)) fail(ErrorKind::InvalidConfig, "non-finite parameter");
    if (out_dir.empty()) fail(ErrorKind::InvalidConfig, "output directory must not be empty");
    for (const double value : t.resolve(n)) {
        if (!std::isfinite(value)) fail(ErrorKind::InvalidConfig, "t resolves to a non-finite value");
        if (model == ModelKind::Multiplicative && (value < -1.0 || value > 1.0)) {
            fail(ErrorKind::InvalidConfig, "multiplicative model needs t in [-1, 1], got " + format_number(value));
        }
    }
}

ExperimentConfig config_from_json(const std::string& text, ExperimentConfig base) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::InvalidConfig, std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) fail(ErrorKind::InvalidConfig, "config must be a JSON object");
    try {
        for (const auto& [key, value] : doc.items()) {
            if (key == "model") {
                base.model = parse_model_kind(value.get<std::string>());
            } else if (key == "n") {
                base.n = value.get<Index>();
            } else if (key == "t") {
                base.t = value.is_number() ? TSpec::parse(format_number(value.get<double>()))
                                           : TSpec::parse(value.get<std::string>());
            } else if (key == "trials") {
                base.trials = value.get<int>();
            } else if (key == "seed") {
                base.seed = value.get<std::uint64_t>();
            } else if (key == "out") {
                base.out_dir = value.get<std::string>();
            } else if (key == "epsilon") {
                base.epsilon = value.get<double>();
            } else if (key == "svg") {
                base.svg = value.get<bool>();
            } else if (key == "w") {
                const auto mode = value.get<std::string>();
                if (mode != "v" && mode != "random") fail(ErrorKind::InvalidConfig, "w must be 'v' or 'random'");
                base.w = mode == "v" ? WMode::SameAsV : WMode::Random;
            } else if (key == "rank") {
                base.rank = value.get<Index>();
            } else if (key == "radius") {
                base.radius = value.get<double>();
            } else if (key == "level") {
                base.level = value.get<double>();
            } else {
                fail(ErrorKind::InvalidConfig, "unknown config key '" + key + "'");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::InvalidConfig, std::string("bad config value: ") + e.what());
    }
    return base;
}

ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::IoFailure, "cannot read config file " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return config_from_json(text.str(), std::move(base));
}

std::string config_to_json(const ExperimentConfig& config) {
    nlohmann::ordered_json doc;
    doc["model"] = to_string(config.model);
    doc["n"] = config.n;
    doc["t"] = config.t.to_string();
    doc["trials"] = config.trials;
    doc["seed"] = config.seed;
    doc["out"] = config.out_dir;
    doc["epsilon"] = config.epsilon;
    doc["svg"] = config.svg;
    doc["w"] = config.w == WMode::SameAsV ? "v" : "random";
    doc["rank"] = config.rank;
    doc["radius"] = config.radius;
    doc["level"] = config.level;
    return doc.dump(2);
}

std::optional<std::uint64_t> seed_from_env() {
    const char* env = std::getenv("RMT_LAB_SEED");
    if (env == nullptr || *env == '\0') return std::nullopt;
    char* end = nullptr;
    const unsigned long long value = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') fail(ErrorKind::InvalidConfig, std::string("RMT_LAB_SEED is not an integer: ") + env);
    return static_cast<std::uint64_t>(value);
}

}  // namespace rmtlab::lab
