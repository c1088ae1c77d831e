#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "stieltjes/cli.hpp"

namespace stieltjes::cli {

namespace {

const std::map<std::string, Experiment>& experiment_names() {
    static const std::map<std::string, Experiment> names{
        {"dos", Experiment::Dos},           {"idos", Experiment::Idos},         {"lyapunov", Experiment::Lyapunov},
        {"pade-error", Experiment::PadeError}, {"measure", Experiment::Measure}, {"invariant", Experiment::Invariant},
        {"baseline", Experiment::Baseline},
    };
    return names;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::optional<double> parse_plain_double(const std::string& s) {
    double v = 0.0;
    const char* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end || s.empty()) return std::nullopt;
    return v;
}

// Accepts a decimal or a fraction p/q.
std::optional<double> parse_number(const std::string& s) {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return parse_plain_double(s);
    const auto num = parse_plain_double(trim(s.substr(0, slash)));
    const auto den = parse_plain_double(trim(s.substr(slash + 1)));
    if (!num || !den || *den == 0.0) return std::nullopt;
    return *num / *den;
}

template <class Int>
std::optional<Int> parse_integer(const std::string& s) {
    Int v{};
    const char* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end || s.empty()) return std::nullopt;
    return v;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Line on which each key was set, for range errors after parsing.
using LineMap = std::map<std::string, int>;

int line_of(const LineMap& lines, const std::string& key) {
    const auto it = lines.find(key);
    return it == lines.end() ? 0 : it->second;
}

void check_ranges(const ExperimentConfig& c, const LineMap& lines) {
    auto fail = [&](const std::string& key, const std::string& why) {
        throw ConfigError(key + ": " + why, line_of(lines, key), key);
    };
    if (!(c.a > 0.0) || !std::isfinite(c.a)) fail("a", "must be a positive number");
    if (!(c.b > 0.0) || !std::isfinite(c.b)) fail("b", "must be a positive number");
    if (!std::isfinite(c.t_re)) fail("t_re", "must be finite");
    if (!std::isfinite(c.t_im)) fail("t_im", "must be finite");
    if (c.t_re == 0.0 && c.t_im == 0.0) fail("t_re", "t must be nonzero");
    if (!(c.lambda_min > 0.0)) fail("lambda_min", "must be positive");
    if (!(c.lambda_max > c.lambda_min) || !std::isfinite(c.lambda_max)) fail("lambda_max", "must exceed lambda_min");
    if (c.lambda_points < 2) fail("lambda_points", "must be >= 2");
    if (c.n < 1) fail("n", "must be >= 1");
    if (c.steps < 1) fail("steps", "must be >= 1");
    if (c.n_min < 1) fail("n_min", "must be >= 1");
    if (c.n_max <= c.n_min) fail("n_max", "must exceed n_min");
    if (c.samples < 10) fail("samples", "must be >= 10");
    if (c.seeds.empty()) fail("seeds", "must list at least one seed");
    if (c.tolerance && !(*c.tolerance > 0.0)) fail("tolerance", "must be positive");
    if (c.threads < 1) fail("threads", "must be >= 1");
    if (c.out.empty()) fail("out", "must name a directory");
}

}  // namespace

std::string to_string(Experiment e) {
    for (const auto& [name, value] : experiment_names()) {
        if (value == e) return name;
    }
    return "?";
}

Experiment parse_experiment(const std::string& name) {
    const auto it = experiment_names().find(name);
    if (it == experiment_names().end()) {
        throw ConfigError("unknown experiment '" + name +
                              "' (expected dos, idos, lyapunov, pade-error, measure, invariant or baseline)",
                          0, "experiment");
    }
    return it->second;
}

double default_tolerance(Experiment e) {
    switch (e) {
        case Experiment::Dos: return 0.06;
        case Experiment::Idos: return 1e-6;
        case Experiment::Lyapunov: return 3.0;
        case Experiment::PadeError: return 0.01;
        case Experiment::Measure: return 1e-10;
        case Experiment::Invariant: return 1e-5;
        case Experiment::Baseline: return 1e-10;
    }
    return 0.0;
}

double ExperimentConfig::resolved_tolerance() const { return tolerance.value_or(default_tolerance(experiment)); }

void validate(const ExperimentConfig& config) { check_ranges(config, {}); }

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig c;
    LineMap lines;
    std::istringstream in(text);
    std::string raw;
    int number = 0;
    bool saw_experiment = false;
    while (std::getline(in, raw)) {
        ++number;
        const std::string line = trim(raw.substr(0, raw.find('#')));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("expected 'key = value'", number, "");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (lines.count(key)) throw ConfigError("duplicate key '" + key + "'", number, key);
        lines[key] = number;

        auto number_value = [&]() {
            const auto v = parse_number(value);
            if (!v) throw ConfigError(key + ": expected a number, got '" + value + "'", number, key);
            return *v;
        };
        auto int_value = [&]() {
            const auto v = parse_integer<std::int64_t>(value);
            if (!v) throw ConfigError(key + ": expected an integer, got '" + value + "'", number, key);
            return *v;
        };
        auto int32_value = [&]() {
            const std::int64_t v = int_value();
            if (v < -2147483647 || v > 2147483647) throw ConfigError(key + ": integer out of range", number, key);
            return static_cast<int>(v);
        };

        if (key == "experiment") {
            try {
                c.experiment = parse_experiment(value);
            } catch (const ConfigError& e) {
                throw ConfigError(e.what(), number, key);
            }
            saw_experiment = true;
        } else if (key == "a") {
            c.a = number_value();
        } else if (key == "b") {
            c.b = number_value();
        } else if (key == "t_re") {
            c.t_re = number_value();
        } else if (key == "t_im") {
            c.t_im = number_value();
        } else if (key == "lambda_min") {
            c.lambda_min = number_value();
        } else if (key == "lambda_max") {
            c.lambda_max = number_value();
        } else if (key == "lambda_points") {
            c.lambda_points = int32_value();
        } else if (key == "n") {
            c.n = int32_value();
        } else if (key == "steps") {
            c.steps = int_value();
        } else if (key == "n_min") {
            c.n_min = int32_value();
        } else if (key == "n_max") {
            c.n_max = int32_value();
        } else if (key == "samples") {
            c.samples = int_value();
        } else if (key == "seeds") {
            c.seeds.clear();
            std::istringstream list(value);
            std::string item;
            while (std::getline(list, item, ',')) {
                const auto s = parse_integer<std::uint64_t>(trim(item));
                if (!s) throw ConfigError("seeds: expected non-negative integers, got '" + trim(item) + "'", number, key);
                c.seeds.push_back(*s);
            }
        } else if (key == "tolerance") {
            c.tolerance = number_value();
        } else if (key == "threads") {
            c.threads = int32_value();
        } else if (key == "out") {
            c.out = value;
        } else {
            throw ConfigError("unknown key '" + key + "'", number, key);
        }
    }
    if (!saw_experiment) throw ConfigError("missing required key 'experiment'", 0, "experiment");
    check_ranges(c, lines);
    return c;
}

std::string emit_config(const ExperimentConfig& c) {
    std::ostringstream os;
    os << "experiment = " << to_string(c.experiment) << '\n';
    os << "a = " << format_double(c.a) << '\n';
    os << "b = " << format_double(c.b) << '\n';
    os << "t_re = " << format_double(c.t_re) << '\n';
    os << "t_im = " << format_double(c.t_im) << '\n';
    os << "lambda_min = " << format_double(c.lambda_min) << '\n';
    os << "lambda_max = " << format_double(c.lambda_max) << '\n';
    os << "lambda_points = " << c.lambda_points << '\n';
    os << "n = " << c.n << '\n';
    os << "steps = " << c.steps << '\n';
    os << "n_min = " << c.n_min << '\n';
    os << "n_max = " << c.n_max << '\n';
    os << "samples = " << c.samples << '\n';
    os << "seeds = ";
    for (std::size_t i = 0; i < c.seeds.size(); ++i) os << (i ? "," : "") << c.seeds[i];
    os << '\n';
    os << "tolerance = " << format_double(c.resolved_tolerance()) << '\n';
    os << "threads = " << c.threads << '\n';
    os << "out = " << c.out << '\n';
    return os.str();
}

bool operator==(const ExperimentConfig& x, const ExperimentConfig& y) {
    return x.experiment == y.experiment && x.a == y.a && x.b == y.b && x.t_re == y.t_re && x.t_im == y.t_im &&
           x.lambda_min == y.lambda_min && x.lambda_max == y.lambda_max && x.lambda_points == y.lambda_points &&
           x.n == y.n && x.steps == y.steps && x.n_min == y.n_min && x.n_max == y.n_max && x.samples == y.samples &&
           x.seeds == y.seeds && x.resolved_tolerance() == y.resolved_tolerance() && x.threads == y.threads &&
           x.out == y.out;
}

}  // namespace stieltjes::cli
