#include "mcfdm/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <sstream>

#include "mcfdm/analytic_oracle.hpp"
#include "mcfdm/cn_solver.hpp"

namespace mcfdm::harness {

void JobSpec::validate() const {
    contract.validate();
    market.validate();
    theta.validate();
    mc.validate();
    if (methods.empty()) throw std::invalid_argument("no pricing method selected");
    if (n_space < 4) throw std::invalid_argument("n_space must be >= 4");
    if (n_time < 1) throw std::invalid_argument("n_time must be >= 1");
    for (double t : maturities)
        if (!(t > 0.0)) throw std::invalid_argument("maturities must be > 0");
}

Discretization JobSpec::grid_for(const OptionContract& c) const {
    if (s_max) return build_grid(c, n_space, n_time, SMaxExplicit{*s_max});
    return build_grid(c, n_space, n_time, SMaxAuto{});
}

FailureKind TableReport::worst_failure() const {
    FailureKind worst = FailureKind::None;
    for (const auto& row : rows) {
        if (row.failure == FailureKind::Stability) return FailureKind::Stability;
        if (row.failure == FailureKind::Solver) worst = FailureKind::Solver;
    }
    return worst;
}

double oracle_price(const OptionContract& contract, const MarketParams& market) {
    return black_scholes_price(contract, market);
}

namespace {

std::string job_echo(const JobSpec& job, Method method) {
    std::ostringstream os;
    os.precision(10);
    os << " [job: method=" << to_string(method) << " kind=" << to_string(job.contract.kind)
       << " spot=" << job.contract.spot << " strike=" << job.contract.strike << " maturity=" << job.contract.maturity
       << " rate=" << job.market.rate << " vol=" << job.market.sigma << " n_space=" << job.n_space
       << " n_time=" << job.n_time << " theta_scale=" << job.theta.scaling << " paths=" << job.mc.n_paths
       << " seed=" << job.mc.seed << "]";
    return os.str();
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

PricingResult dispatch(const JobSpec& job, Method method) {
    switch (method) {
        case Method::Exact: {
            const auto start = std::chrono::steady_clock::now();
            const double price = black_scholes_price(job.contract, job.market);
            const auto stop = std::chrono::steady_clock::now();
            PricingResult r;
            r.method = Method::Exact;
            r.price = price;
            r.abs_error = 0.0;
            r.elapsed_seconds = std::chrono::duration<double>(stop - start).count();
            return r;
        }
        case Method::MCFDM: {
            McfdmOptions options;
            options.allow_unstable = job.allow_unstable;
            return solve_mcfdm(job.contract, job.market, job.grid_for(job.contract), job.theta, options).result;
        }
        case Method::CFDM:
            return solve_crank_nicolson(job.contract, job.market, job.grid_for(job.contract));
        case Method::MonteCarlo:
            return price_monte_carlo(job.contract, job.market, job.mc);
    }
    throw std::invalid_argument("unknown method");
}

JobSpec with_maturity(const JobSpec& job, double maturity) {
    JobSpec copy = job;
    copy.contract.maturity = maturity;
    return copy;
}

ReportRow failed_row(const JobSpec& job, Method method, const JobError& e) {
    ReportRow row;
    row.method = method;
    row.maturity = job.contract.maturity;
    row.failure = e.kind();
    row.error = e.what();
    if (method == Method::MCFDM) {
        row.theta_scale = job.theta.scaling;
        row.n_space = job.n_space;
        row.n_time = job.n_time;
    } else if (method == Method::CFDM) {
        row.n_space = job.n_space;
        row.n_time = job.n_time;
    } else if (method == Method::MonteCarlo) {
        row.paths = job.mc.n_paths;
        row.seed = job.mc.seed;
    }
    return row;
}

ReportRow run_row(const JobSpec& job, Method method) {
    try {
        return make_row(job, job.contract, run_price(job, method));
    } catch (const JobError& e) {
        return failed_row(job, method, e);
    }
}

double median(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

}  // namespace

PricingResult run_price(const JobSpec& job, Method method) {
    try {
        job.validate();
        return dispatch(job, method);
    } catch (const StabilityError& e) {
        throw JobError(FailureKind::Stability, std::string(e.what()) + job_echo(job, method));
    } catch (const std::exception& e) {
        throw JobError(FailureKind::Solver, std::string(e.what()) + job_echo(job, method));
    }
}

std::vector<PricingResult> run_price_all(const JobSpec& job) {
    std::vector<PricingResult> results;
    for (Method m : job.methods) results.push_back(run_price(job, m));
    return results;
}

ReportRow make_row(const JobSpec& job, const OptionContract& contract, const PricingResult& result) {
    ReportRow row;
    row.method = result.method;
    row.maturity = contract.maturity;
    row.price = result.price;
    row.abs_error = std::abs(result.price - oracle_price(contract, job.market));
    row.elapsed_seconds = result.elapsed_seconds;
    const auto get = [&](const char* key) -> std::optional<double> {
        auto it = result.extra.find(key);
        if (it == result.extra.end()) return std::nullopt;
        return it->second;
    };
    switch (result.method) {
        case Method::MCFDM:
            row.theta_scale = job.theta.scaling;
            row.n_space = job.n_space;
            row.n_time = job.n_time;
            row.cfl_margin = get("cfl_margin");
            if (auto osc = get("oscillation")) row.oscillation = *osc != 0.0;
            break;
        case Method::CFDM:
            row.n_space = job.n_space;
            row.n_time = job.n_time;
            break;
        case Method::MonteCarlo:
            row.se = get("se");
            row.paths = job.mc.n_paths;
            row.seed = job.mc.seed;
            break;
        case Method::Exact:
            break;
    }
    return row;
}

TableReport run_table(const std::vector<double>& maturities, const JobSpec& base) {
    if (maturities.empty()) throw std::invalid_argument("run_table: maturity list is empty");
    TableReport report;
    report.command = "table";
    report.job = base;
    report.job.maturities = maturities;
    report.generated_at = utc_timestamp();

    struct Task {
        Method method;
        double maturity;
    };
    std::vector<Task> tasks;
    for (Method m : base.methods)
        for (double t : maturities) tasks.push_back({m, t});

    report.rows.resize(tasks.size());
    const auto n_tasks = static_cast<std::int64_t>(tasks.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t k = 0; k < n_tasks; ++k) {
        const auto& task = tasks[static_cast<std::size_t>(k)];
        report.rows[static_cast<std::size_t>(k)] = run_row(with_maturity(base, task.maturity), task.method);
    }
    return report;
}

TableReport run_timing(const JobSpec& job, std::size_t repeats) {
    if (repeats < 3) throw std::invalid_argument("run_timing: repeats must be >= 3");
    TableReport report;
    report.command = "timing";
    report.job = job;
    report.job.repeats = repeats;
    report.job.methods = {Method::MCFDM, Method::CFDM, Method::MonteCarlo};
    report.generated_at = utc_timestamp();

    for (Method m : report.job.methods) {
        ReportRow row;
        try {
            (void)run_price(job, m);  // warm-up
            std::vector<double> elapsed;
            PricingResult last;
            for (std::size_t k = 0; k < repeats; ++k) {
                last = run_price(job, m);
                elapsed.push_back(last.elapsed_seconds);
            }
            row = make_row(job, job.contract, last);
            row.elapsed_seconds = median(elapsed);
        } catch (const JobError& e) {
            row = failed_row(job, m, e);
        }
        report.rows.push_back(row);
    }
    return report;
}

TableReport run_theta_study(const std::vector<double>& scalings, const JobSpec& base) {
    if (scalings.empty()) throw std::invalid_argument("run_theta_study: no scalings given");
    for (double k : scalings)
        if (!(k >= 0.0)) throw std::invalid_argument("run_theta_study: scalings must be >= 0");
    std::vector<double> sorted = scalings;
    std::sort(sorted.begin(), sorted.end());

    TableReport report;
    report.command = "theta-study";
    report.job = base;
    report.job.theta_scales = sorted;
    report.job.methods = {Method::MCFDM};
    report.generated_at = utc_timestamp();
    for (double k : sorted) {
        JobSpec job = base;
        job.theta.scaling = k;
        report.rows.push_back(run_row(job, Method::MCFDM));
    }
    return report;
}

TableReport run_convergence(const std::vector<std::pair<std::size_t, std::size_t>>& grids, const JobSpec& base,
                            Method method) {
    if (grids.empty()) throw std::invalid_argument("run_convergence: no grids given");
    TableReport report;
    report.command = "convergence";
    report.job = base;
    report.job.grids = grids;
    report.job.methods = {method};
    report.generated_at = utc_timestamp();
    for (const auto& [n_space, n_time] : grids) {
        JobSpec job = base;
        job.n_space = n_space;
        job.n_time = n_time;
        report.rows.push_back(run_row(job, method));
    }
    for (std::size_t k = 1; k < report.rows.size(); ++k) {
        const auto& coarse = report.rows[k - 1];
        auto& fine = report.rows[k];
        if (coarse.abs_error && fine.abs_error && *coarse.abs_error > 0.0 && *fine.abs_error > 0.0)
            fine.observed_order = std::log2(*coarse.abs_error / *fine.abs_error);
    }
    return report;
}

}  // namespace mcfdm::harness
