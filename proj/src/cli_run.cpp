#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "stieltjes/cfrac.hpp"
#include "stieltjes/cli.hpp"
#include "stieltjes/coeffs.hpp"
#include "stieltjes/jacobi.hpp"
#include "stieltjes/quadrature.hpp"
#include "stieltjes/theory.hpp"
#include "stieltjes/version.hpp"

namespace stieltjes::cli {

namespace fs = std::filesystem;

namespace {

using cdouble = std::complex<double>;
using Clock = std::chrono::steady_clock;

// Column headers read "name [unit; provenance]".
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string format_exact(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(const fs::path& path, const Table& table) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw InputError("cannot write " + path.string());
    for (std::size_t i = 0; i < table.header.size(); ++i) os << (i ? "," : "") << table.header[i];
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_value(row[i]);
        os << '\n';
    }
}

// Runs task(i) for i in [0, count) on up to `threads` workers.  Tasks write
// only to their own slot, so results do not depend on scheduling.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& task) {
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(count);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    task(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return (v.size() % 2) ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::vector<double> linear_grid(double lo, double hi, int points) {
    std::vector<double> g(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
    return g;
}

Check check_at_most(std::string name, double observed, double threshold) {
    return {std::move(name), observed, threshold, "<=", observed <= threshold};
}

Check check_above(std::string name, double observed, double threshold) {
    return {std::move(name), observed, threshold, ">", observed > threshold};
}

cfrac::CutPoint cut_point(const ExperimentConfig& c) {
    if (c.t_im == 0.0 && c.t_re < 0.0) return cfrac::CutPoint::boundary(-c.t_re, cfrac::CutPoint::Side::Upper);
    return cfrac::CutPoint::interior({c.t_re, c.t_im});
}

coeffs::CoefficientStream gamma_stream(const ExperimentConfig& c, std::uint64_t seed) {
    return coeffs::make_stream(coeffs::GammaParams{c.a, c.b}, seed, 0);
}

std::string seed_file(std::uint64_t seed) { return "seed_" + std::to_string(seed) + ".csv"; }

// Everything an experiment hands back for writing.
struct Outcome {
    std::vector<std::pair<std::string, Table>> files;  // written in this order
    Table summary;
    std::vector<Check> checks;
    std::vector<std::pair<std::string, std::string>> stats;  // manifest lines
    std::vector<double> seed_seconds;
};

Outcome run_dos(const ExperimentConfig& c) {
    Outcome out;
    const coeffs::GammaParams params{c.a, c.b};
    const auto grid = linear_grid(c.lambda_min, c.lambda_max, c.lambda_points);
    std::vector<double> closed(grid.size());
    parallel_for(grid.size(), c.threads,
                 [&](std::size_t i) { closed[i] = theory::integrated_dos(params, grid[i]).value; });
    const Eigen::VectorXd grid_vec = Eigen::Map<const Eigen::VectorXd>(grid.data(), static_cast<Eigen::Index>(grid.size()));

    const std::size_t ns = c.seeds.size();
    std::vector<Eigen::VectorXd> counts(ns);
    std::vector<double> sup(ns);
    out.seed_seconds.resize(ns);
    parallel_for(ns, c.threads, [&](std::size_t k) {
        const auto start = Clock::now();
        const Eigen::VectorXd s = gamma_stream(c, c.seeds[k]).take(2 * c.n);
        const Eigen::VectorXd nodes = jacobi::eigenvalues(jacobi::build_jacobi(s));
        counts[k] = jacobi::counting_measure(nodes, grid_vec);
        double worst = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) worst = std::max(worst, std::abs(counts[k](i) - closed[i]));
        sup[k] = worst;
        out.seed_seconds[k] = std::chrono::duration<double>(Clock::now() - start).count();
    });

    const std::vector<std::string> header{"lambda [1; grid]", "N_n [fraction; empirical]", "N [fraction; closed-form]",
                                          "abs_diff [fraction; derived]"};
    for (std::size_t k = 0; k < ns; ++k) {
        Table t{header, {}};
        for (std::size_t i = 0; i < grid.size(); ++i) {
            t.rows.push_back({grid[i], counts[k](i), closed[i], std::abs(counts[k](i) - closed[i])});
        }
        out.files.emplace_back(seed_file(c.seeds[k]), std::move(t));
        out.stats.emplace_back("seed_" + std::to_string(c.seeds[k]) + ".sup_abs_diff", format_exact(sup[k]));
    }
    out.summary.header = {"lambda [1; grid]", "N_n_median [fraction; empirical median over seeds]",
                          "N [fraction; closed-form]", "abs_diff [fraction; derived]"};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::vector<double> v(ns);
        for (std::size_t k = 0; k < ns; ++k) v[k] = counts[k](i);
        const double med = median(v);
        out.summary.rows.push_back({grid[i], med, closed[i], std::abs(med - closed[i])});
    }
    out.checks.push_back(check_at_most("median_sup_abs_diff", median(sup), c.resolved_tolerance()));
    return out;
}

Outcome run_idos(const ExperimentConfig& c) {
    Outcome out;
    const coeffs::GammaParams params{c.a, c.b};
    const auto grid = linear_grid(c.lambda_min, c.lambda_max, c.lambda_points);
    std::vector<theory::DosValue> n(grid.size());
    std::vector<double> rho(grid.size());
    parallel_for(grid.size(), c.threads, [&](std::size_t i) {
        n[i] = theory::integrated_dos(params, grid[i]);
        rho[i] = theory::dos_density(params, grid[i]);
    });
    Table t{{"lambda [1; grid]", "N [fraction; closed-form Im-Lambda route]", "N_phase [fraction; closed-form phase route]",
             "route_diff [fraction; derived]", "rho [1/lambda; closed-form]", "N_inf [fraction; closed-form a->inf]",
             "rho_inf [1/lambda; closed-form a->inf]"},
            {}};
    double worst_route = 0.0;
    double min_rho = std::numeric_limits<double>::infinity();
    double worst_step = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto base = theory::baseline::dos_density(grid[i]);
        t.rows.push_back({grid[i], n[i].value, n[i].phase_route, n[i].discrepancy, rho[i],
                          theory::baseline::integrated_dos(grid[i]), base.band_edge ? NAN : base.value});
        worst_route = std::max(worst_route, n[i].discrepancy);
        min_rho = std::min(min_rho, rho[i]);
        if (i > 0) worst_step = std::max(worst_step, n[i - 1].value - n[i].value);
    }
    const auto integral = quadrature::integrate([&](double x) { return theory::dos_density(params, x); },
                                                quadrature::Interval{c.lambda_min, c.lambda_max}, {1e-10, 10});
    const double delta_n = n.back().value - n.front().value;
    const double fundamental = std::abs(integral.value - delta_n);

    out.files.emplace_back("closed_form.csv", t);
    out.summary = std::move(t);
    out.stats.emplace_back("integral_rho", format_exact(integral.value));
    out.stats.emplace_back("delta_N", format_exact(delta_n));
    out.checks.push_back(check_at_most("max_route_diff", worst_route, c.resolved_tolerance()));
    out.checks.push_back(check_at_most("abs_integral_rho_minus_delta_N", fundamental, c.resolved_tolerance()));
    out.checks.push_back(check_above("min_rho", min_rho, 0.0));
    out.checks.push_back(check_at_most("max_decrease_of_N", worst_step, c.resolved_tolerance()));
    return out;
}

Outcome run_lyapunov(const ExperimentConfig& c) {
    Outcome out;
    const coeffs::GammaParams params{c.a, c.b};
    const auto t = cut_point(c);
    const cdouble closed = theory::lyapunov(params, t).value;
    const std::size_t ns = c.seeds.size();
    std::vector<cfrac::GrowthEstimate> est(ns);
    out.seed_seconds.resize(ns);
    parallel_for(ns, c.threads, [&](std::size_t k) {
        const auto start = Clock::now();
        est[k] = cfrac::log_growth(gamma_stream(c, c.seeds[k]), t, static_cast<std::size_t>(c.steps));
        out.seed_seconds[k] = std::chrono::duration<double>(Clock::now() - start).count();
    });
    auto zscore = [](double diff, double se) {
        if (diff == 0.0) return 0.0;
        return se > 0.0 ? std::abs(diff) / se : std::numeric_limits<double>::infinity();
    };
    const std::vector<std::string> header{"seed [1; config]",
                                          "steps [1; config]",
                                          "re_Lambda [nepers/step; empirical]",
                                          "im_Lambda [rad/step; empirical]",
                                          "se_re [nepers/step; batch means]",
                                          "se_im [rad/step; batch means]",
                                          "re_Lambda_closed [nepers/step; closed-form]",
                                          "im_Lambda_closed [rad/step; closed-form]",
                                          "z_re [SE; derived]",
                                          "z_im [SE; derived]"};
    out.summary.header = header;
    for (std::size_t k = 0; k < ns; ++k) {
        const double zr = zscore(est[k].value.real() - closed.real(), est[k].se_real);
        const double zi = zscore(est[k].value.imag() - closed.imag(), est[k].se_imag);
        const std::vector<double> row{static_cast<double>(c.seeds[k]), static_cast<double>(c.steps),
                                      est[k].value.real(), est[k].value.imag(), est[k].se_real, est[k].se_imag,
                                      closed.real(), closed.imag(), zr, zi};
        out.files.emplace_back(seed_file(c.seeds[k]), Table{header, {row}});
        out.summary.rows.push_back(row);
        out.checks.push_back(check_at_most("seed_" + std::to_string(c.seeds[k]) + "_max_z", std::max(zr, zi),
                                           c.resolved_tolerance()));
    }
    return out;
}

Outcome run_pade(const ExperimentConfig& c) {
    Outcome out;
    const coeffs::GammaParams params{c.a, c.b};
    const auto t = cut_point(c);
    if (t.on_cut()) throw ConfigError("pade-error needs t off the negative axis", 0, "t_re");
    const double predicted = theory::pade_rate(params, t);
    const std::size_t ns = c.seeds.size();
    std::vector<std::vector<double>> gaps(ns);
    std::vector<cfrac::RateFit> fits(ns);
    out.seed_seconds.resize(ns);
    const auto n_min = static_cast<std::size_t>(c.n_min);
    const auto n_max = static_cast<std::size_t>(c.n_max);
    parallel_for(ns, c.threads, [&](std::size_t k) {
        const auto start = Clock::now();
        gaps[k] = cfrac::log_convergent_gaps(gamma_stream(c, c.seeds[k]), t, n_max);
        const std::size_t first = std::max(n_min, std::max<std::size_t>(50, n_max / 10));
        fits[k] = cfrac::fit_log_gaps(gaps[k], first, n_max);
        out.seed_seconds[k] = std::chrono::duration<double>(Clock::now() - start).count();
    });
    out.summary.header = {"seed [1; config]", "slope [nepers/n; empirical fit]", "slope_se [nepers/n; batch means]",
                          "rate [nepers/n; closed-form]", "rel_diff [1; derived]", "first_n [1; fit window]",
                          "last_n [1; fit window]"};
    double mean = 0.0;
    for (std::size_t k = 0; k < ns; ++k) {
        Table t_seed{{"n [1; index]", "log_abs_gap [nepers; empirical]", "fit [nepers; least squares]"}, {}};
        for (std::size_t n = 0; n <= n_max; ++n) {
            t_seed.rows.push_back({static_cast<double>(n), gaps[k][n], fits[k].intercept + fits[k].slope * n});
        }
        out.files.emplace_back(seed_file(c.seeds[k]), std::move(t_seed));
        out.summary.rows.push_back({static_cast<double>(c.seeds[k]), fits[k].slope, fits[k].slope_se, predicted,
                                    std::abs(fits[k].slope - predicted) / std::abs(predicted),
                                    static_cast<double>(fits[k].first), static_cast<double>(fits[k].last)});
        mean += fits[k].slope / static_cast<double>(ns);
        out.stats.emplace_back("seed_" + std::to_string(c.seeds[k]) + ".slope", format_exact(fits[k].slope));
    }
    out.stats.emplace_back("predicted_rate", format_exact(predicted));
    out.checks.push_back(
        check_at_most("rel_diff_mean_slope", std::abs(mean - predicted) / std::abs(predicted), c.resolved_tolerance()));
    return out;
}

Outcome run_measure(const ExperimentConfig& c) {
    Outcome out;
    const auto grid = linear_grid(c.lambda_min, c.lambda_max, c.lambda_points);
    const std::size_t ns = c.seeds.size();
    std::vector<jacobi::DiscreteMeasure> measures(ns);
    std::vector<double> s1(ns);
    out.seed_seconds.resize(ns);
    parallel_for(ns, c.threads, [&](std::size_t k) {
        const auto start = Clock::now();
        const Eigen::VectorXd s = gamma_stream(c, c.seeds[k]).take(2 * c.n);
        s1[k] = s(0);
        measures[k] = jacobi::quadrature_measure(jacobi::build_jacobi(s));
        out.seed_seconds[k] = std::chrono::duration<double>(Clock::now() - start).count();
    });
    const std::vector<std::string> header{"lambda [1; grid]", "sigma_n_cdf [mass; empirical]",
                                          "sigma_n_cdf_normalized [fraction; empirical]",
                                          "sigma_inf_cdf [fraction; closed-form]"};
    double worst_mass = 0.0;
    double min_weight = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> normalized(ns, std::vector<double>(grid.size()));
    for (std::size_t k = 0; k < ns; ++k) {
        Table t{header, {}};
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double cum = measures[k].cumulative(grid[i]);
            normalized[k][i] = cum * s1[k];
            t.rows.push_back({grid[i], cum, normalized[k][i], theory::baseline::measure_cdf(grid[i])});
        }
        out.files.emplace_back(seed_file(c.seeds[k]), std::move(t));
        const double mass_err = std::abs(measures[k].total_mass() * s1[k] - 1.0);
        worst_mass = std::max(worst_mass, mass_err);
        min_weight = std::min(min_weight, measures[k].weights.minCoeff());
        out.stats.emplace_back("seed_" + std::to_string(c.seeds[k]) + ".total_mass", format_exact(measures[k].total_mass()));
    }
    out.summary.header = {"lambda [1; grid]", "sigma_n_cdf_normalized_median [fraction; empirical median over seeds]",
                          "sigma_inf_cdf [fraction; closed-form]", "abs_diff [fraction; derived]"};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::vector<double> v(ns);
        for (std::size_t k = 0; k < ns; ++k) v[k] = normalized[k][i];
        const double med = median(v);
        const double base = theory::baseline::measure_cdf(grid[i]);
        out.summary.rows.push_back({grid[i], med, base, std::abs(med - base)});
    }
    out.checks.push_back(check_at_most("max_rel_mass_error", worst_mass, c.resolved_tolerance()));
    out.checks.push_back(check_above("min_weight", min_weight, 0.0));
    return out;
}

Outcome run_invariant(const ExperimentConfig& c) {
    Outcome out;
    const coeffs::GammaParams params{c.a, c.b};
    const auto t = cut_point(c);
    if (t.on_cut() || c.t_im == 0.0) throw ConfigError("invariant needs t off the real axis (t_im != 0)", 0, "t_im");
    const theory::InvariantDensity f(theory::invariant_params(params, t.value()));
    const double norm = f.normalization();
    const cdouble moment = f.log_moment();
    const cdouble closed = f.log_moment_closed_form();
    const std::size_t ns = c.seeds.size();
    const auto samples = static_cast<std::size_t>(c.samples);
    const double ks_threshold = 1.63 / std::sqrt(static_cast<double>(samples));
    std::vector<double> ks(ns);
    std::vector<Table> tables(ns);
    out.seed_seconds.resize(ns);
    parallel_for(ns, c.threads, [&](std::size_t k) {
        const auto start = Clock::now();
        const auto z = theory::forward_iterates(gamma_stream(c, c.seeds[k]), t, samples);
        std::vector<double> r(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) r[i] = std::abs(z[i]);
        std::sort(r.begin(), r.end());
        const auto model = f.radial_cdf(r);
        ks[k] = theory::ks_statistic(model);
        Table tab{{"r [1; empirical quantile of |Z|]", "empirical_cdf [fraction; empirical]",
                   "model_cdf [fraction; closed-form density with numerical marginal]"},
                  {}};
        for (int q = 1; q < 200; ++q) {
            const auto i = std::min(samples - 1, static_cast<std::size_t>(q * samples / 200));
            tab.rows.push_back({r[i], static_cast<double>(i + 1) / static_cast<double>(samples), model[i]});
        }
        tables[k] = std::move(tab);
        out.seed_seconds[k] = std::chrono::duration<double>(Clock::now() - start).count();
    });
    out.summary.header = {"seed [1; config]", "ks [fraction; empirical vs closed-form]",
                          "ks_threshold [fraction; 1% level]", "samples [1; config]"};
    for (std::size_t k = 0; k < ns; ++k) {
        out.files.emplace_back(seed_file(c.seeds[k]), std::move(tables[k]));
        out.summary.rows.push_back({static_cast<double>(c.seeds[k]), ks[k], ks_threshold, static_cast<double>(samples)});
        out.checks.push_back(check_at_most("seed_" + std::to_string(c.seeds[k]) + "_ks", ks[k], ks_threshold));
    }
    out.stats.emplace_back("normalization", format_exact(norm));
    out.stats.emplace_back("log_moment_re", format_exact(moment.real()));
    out.stats.emplace_back("log_moment_im", format_exact(moment.imag()));
    out.stats.emplace_back("closed_re", format_exact(closed.real()));
    out.stats.emplace_back("closed_im", format_exact(closed.imag()));
    out.checks.push_back(check_at_most("abs_normalization_error", std::abs(norm - 1.0), 1e-6));
    out.checks.push_back(check_at_most("abs_log_moment_re_error", std::abs(moment.real() - closed.real()),
                                       c.resolved_tolerance()));
    out.checks.push_back(check_at_most("abs_log_moment_im_error", std::abs(moment.imag() - closed.imag()),
                                       c.resolved_tolerance()));
    return out;
}

Outcome run_baseline(const ExperimentConfig& c) {
    Outcome out;
    const auto start = Clock::now();
    const Eigen::VectorXd s = coeffs::constant_stream().take(2 * c.n);
    const Eigen::VectorXd nodes = jacobi::eigenvalues(jacobi::build_jacobi(s), 1e-14, c.threads);
    Table eig{{"j [1; index]", "lambda [1; bisection]", "lambda_closed [1; closed-form 4cos^2(j pi/(2n+1))]",
               "rel_err [1; derived]"},
              {}};
    double worst = 0.0;
    for (int j = 1; j <= c.n; ++j) {
        const double cj = std::cos(j * std::numbers::pi / (2.0 * c.n + 1.0));
        const double closed = 4.0 * cj * cj;
        const double got = nodes(c.n - j);
        const double rel = std::abs(got - closed) / closed;
        worst = std::max(worst, rel);
        eig.rows.push_back({static_cast<double>(j), got, closed, rel});
    }
    const auto t = cut_point(c);
    const auto ref = cfrac::reference_value(coeffs::constant_stream(), t, 1e-12);
    const cdouble s_closed = theory::baseline::stieltjes(t.value());
    out.files.emplace_back("eigenvalues.csv", std::move(eig));
    out.summary.header = {"quantity [id; 0=Re S 1=Im S]", "numeric [1; continued fraction]",
                          "closed [1; closed-form 2/(1+sqrt(1+4t))]", "abs_diff [1; derived]"};
    out.summary.rows.push_back({0.0, ref.value.real(), s_closed.real(), std::abs(ref.value.real() - s_closed.real())});
    out.summary.rows.push_back({1.0, ref.value.imag(), s_closed.imag(), std::abs(ref.value.imag() - s_closed.imag())});
    out.checks.push_back(check_at_most("max_rel_eigenvalue_error", worst, c.resolved_tolerance()));
    out.checks.push_back(check_at_most("abs_stieltjes_error", std::abs(ref.value - s_closed), 1e-10));
    out.seed_seconds.push_back(std::chrono::duration<double>(Clock::now() - start).count());
    return out;
}

Outcome dispatch(const ExperimentConfig& c) {
    switch (c.experiment) {
        case Experiment::Dos: return run_dos(c);
        case Experiment::Idos: return run_idos(c);
        case Experiment::Lyapunov: return run_lyapunov(c);
        case Experiment::PadeError: return run_pade(c);
        case Experiment::Measure: return run_measure(c);
        case Experiment::Invariant: return run_invariant(c);
        case Experiment::Baseline: return run_baseline(c);
    }
    throw ConfigError("unknown experiment", 0, "experiment");
}

void write_checks(const fs::path& path, const std::vector<Check>& checks) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw InputError("cannot write " + path.string());
    os << "check,observed,threshold,relation,status\n";
    for (const auto& ch : checks) {
        os << ch.name << ',' << format_exact(ch.observed) << ',' << format_exact(ch.threshold) << ',' << ch.relation
           << ',' << (ch.pass ? "PASS" : "FAIL") << '\n';
    }
}

std::map<std::string, std::string> read_key_values(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("missing manifest: " + path.string());
    std::map<std::string, std::string> kv;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find(" = ");
        if (eq == std::string::npos) {
            throw InputError("corrupt manifest " + path.string() + " at line " + std::to_string(number));
        }
        kv[line.substr(0, eq)] = line.substr(eq + 3);
    }
    return kv;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, sep)) out.push_back(item);
    return out;
}

}  // namespace

bool RunReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

RunReport run(const ExperimentConfig& config) {
    validate(config);
    const auto start = Clock::now();
    Outcome outcome = dispatch(config);
    const double total = std::chrono::duration<double>(Clock::now() - start).count();

    const fs::path dir(config.out);
    fs::create_directories(dir);
    std::vector<std::string> written;
    for (const auto& [name, table] : outcome.files) {
        write_csv(dir / name, table);
        written.push_back(name);
    }
    write_csv(dir / "summary.csv", outcome.summary);
    write_checks(dir / "checks.csv", outcome.checks);
    {
        std::ofstream os(dir / "config.txt", std::ios::binary);
        os << emit_config(config);
    }

    std::ofstream m(dir / "manifest.txt", std::ios::binary);
    m << "# stieltjes-lab run manifest\n";
    m << "artifact_version = " << version << '\n';
    m << "experiment = " << to_string(config.experiment) << '\n';
    for (const auto& line : split(emit_config(config), '\n')) {
        if (!line.empty()) m << "config." << line << '\n';
    }
    m << "files = ";
    for (std::size_t i = 0; i < written.size(); ++i) m << (i ? "," : "") << written[i];
    m << '\n';
    for (const auto& [key, value] : outcome.stats) m << "stat." << key << " = " << value << '\n';
    for (std::size_t k = 0; k < outcome.seed_seconds.size(); ++k) {
        const std::string label = (config.experiment == Experiment::Baseline || config.experiment == Experiment::Idos)
                                      ? "run"
                                      : "seed_" + std::to_string(config.seeds[k]);
        m << "timing." << label << ".seconds = " << format_value(outcome.seed_seconds[k]) << '\n';
    }
    m << "timing.total_seconds = " << format_value(total) << '\n';
    m << "checks = " << outcome.checks.size() << '\n';
    m << "checks_passed = "
      << std::count_if(outcome.checks.begin(), outcome.checks.end(), [](const Check& c) { return c.pass; }) << '\n';
    return {dir, outcome.checks};
}

bool summarize(const fs::path& directory, std::ostream& os) {
    const auto kv = read_key_values(directory / "manifest.txt");
    for (const char* key : {"artifact_version", "experiment", "checks"}) {
        if (!kv.count(key)) throw InputError(std::string("corrupt manifest: missing '") + key + "'");
    }
    std::string config_text;
    for (const auto& [key, value] : kv) {
        if (key.rfind("config.", 0) == 0) config_text += key.substr(7) + " = " + value + "\n";
    }
    try {
        parse_config(config_text);
    } catch (const ConfigError& e) {
        throw InputError(std::string("corrupt manifest: config does not parse: ") + e.what());
    }

    std::ifstream in(directory / "checks.csv");
    if (!in) throw InputError("missing checks.csv in " + directory.string());
    std::string line;
    std::getline(in, line);
    if (line != "check,observed,threshold,relation,status") throw InputError("corrupt checks.csv header");
    std::vector<Check> checks;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 5 || (f[4] != "PASS" && f[4] != "FAIL")) throw InputError("corrupt checks.csv row: " + line);
        checks.push_back({f[0], std::stod(f[1]), std::stod(f[2]), f[3], f[4] == "PASS"});
    }
    if (std::to_string(checks.size()) != kv.at("checks")) throw InputError("checks.csv does not match the manifest");

    os << "experiment: " << kv.at("experiment") << "  (" << directory.string() << ")\n";
    os << std::left << std::setw(36) << "check" << std::setw(24) << "observed" << std::setw(4) << "" << std::setw(24)
       << "threshold"
       << "status\n";
    nlohmann::json doc;
    doc["experiment"] = kv.at("experiment");
    doc["artifact_version"] = kv.at("artifact_version");
    doc["directory"] = directory.string();
    doc["checks"] = nlohmann::json::array();
    bool all = true;
    for (const auto& ch : checks) {
        os << std::left << std::setw(36) << ch.name << std::setw(24) << format_exact(ch.observed) << std::setw(4)
           << ch.relation << std::setw(24) << format_exact(ch.threshold) << (ch.pass ? "PASS" : "FAIL") << '\n';
        doc["checks"].push_back({{"name", ch.name},
                                 {"observed", ch.observed},
                                 {"threshold", ch.threshold},
                                 {"relation", ch.relation},
                                 {"pass", ch.pass}});
        all = all && ch.pass;
    }
    doc["all_pass"] = all;
    std::ofstream js(directory / "summary.json", std::ios::binary);
    js << doc.dump(2) << '\n';
    return all;
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Random Stieltjes continued fractions: experiments and closed-form checks", "stieltjes-lab"};
    std::string command;
    std::string target;
    std::string config_path;
    std::vector<std::uint64_t> seeds;
    std::string out_dir;
    int threads = 0;
    app.add_option("command", command,
                   "dos | idos | lyapunov | pade-error | measure | invariant | baseline | summarize")
        ->required();
    app.add_option("dir", target, "run directory (summarize only)");
    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--seed", seeds, "seed (repeatable); replaces the config's seeds");
    app.add_option("--out", out_dir, "output directory; replaces the config's out");
    app.add_option("--threads", threads, "worker threads; replaces the config's threads")->check(CLI::PositiveNumber);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "usage error: " << e.what() << '\n' << app.help();
        return 1;
    }

    try {
        if (command == "summarize") {
            if (target.empty()) {
                err << "usage error: summarize needs a run directory\n";
                return 1;
            }
            return summarize(target, out) ? 0 : 2;
        }
        const Experiment experiment = parse_experiment(command);
        if (!target.empty()) {
            err << "usage error: unexpected argument '" << target << "'\n";
            return 1;
        }
        if (config_path.empty()) {
            err << "usage error: --config is required\n";
            return 1;
        }
        std::ifstream in(config_path);
        if (!in) {
            err << "usage error: cannot read config file '" << config_path << "'\n";
            return 1;
        }
        std::stringstream text;
        text << in.rdbuf();
        ExperimentConfig config = parse_config(text.str());
        if (config.experiment != experiment) {
            err << "usage error: config is for experiment '" << to_string(config.experiment) << "', not '" << command
                << "'\n";
            return 1;
        }
        if (!seeds.empty()) config.seeds = seeds;
        if (!out_dir.empty()) config.out = out_dir;
        if (threads > 0) config.threads = threads;
        validate(config);

        const RunReport report = run(config);
        const bool pass = summarize(report.directory, out);
        return pass ? 0 : 2;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 1;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace stieltjes::cli
