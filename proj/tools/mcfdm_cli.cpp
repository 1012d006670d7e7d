// mcfdm: price European options with the mean-convection explicit scheme,
// Crank-Nicolson, Monte Carlo and the closed form, and emit comparison reports.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mcfdm/harness.hpp"
#include "mcfdm/report_io.hpp"

namespace {

using namespace mcfdm;
using namespace mcfdm::harness;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitSolver = 2;
constexpr int kExitStability = 3;

struct CliArgs {
    std::string job_file;
    std::string kind = "call";
    double spot = 7.0;
    double strike = 7.5;
    double rate = 0.05;
    double vol = 0.25;
    std::vector<double> maturities;
    std::string method = "all";
    std::size_t n_space = 100;
    std::size_t n_time = 1000;
    std::string s_max = "auto";
    std::vector<double> theta_scales;
    std::string theta_mode = "normalized";
    std::string alpha = "constant";
    std::size_t paths = 100000;
    std::uint64_t seed = 42;
    std::string format = "table";
    std::string out;
    std::size_t repeats = 5;
    bool allow_unstable = false;
    std::vector<std::string> grids;
};

void add_common_options(CLI::App& cmd, CliArgs& a) {
    cmd.add_option("--job", a.job_file, "JSON job or report to start from; explicit flags override it");
    cmd.add_option("--kind", a.kind, "call|put")->check(CLI::IsMember({"call", "put"}));
    cmd.add_option("--spot", a.spot, "Spot price S0")->check(CLI::PositiveNumber);
    cmd.add_option("--strike", a.strike, "Strike K")->check(CLI::PositiveNumber);
    cmd.add_option("--rate", a.rate, "Risk-free rate r")->check(CLI::NonNegativeNumber);
    cmd.add_option("--vol", a.vol, "Volatility sigma")->check(CLI::PositiveNumber);
    cmd.add_option("--maturity", a.maturities, "Maturity in years (repeatable for table)");
    cmd.add_option("--method", a.method, "mcfdm|cfdm|mc|exact|all");
    cmd.add_option("--n-space", a.n_space, "Price intervals");
    cmd.add_option("--n-time", a.n_time, "Time steps");
    cmd.add_option("--s-max", a.s_max, "auto or an explicit truncation price");
    cmd.add_option("--theta-scale", a.theta_scales, "Convection scaling k (repeatable for theta-study)");
    cmd.add_option("--theta-mode", a.theta_mode, "normalized|literal")
        ->check(CLI::IsMember({"normalized", "literal"}));
    cmd.add_option("--alpha", a.alpha, "constant|proportional")->check(CLI::IsMember({"constant", "proportional"}));
    cmd.add_option("--paths", a.paths, "Monte Carlo paths");
    cmd.add_option("--seed", a.seed, "Monte Carlo seed");
    cmd.add_option("--format", a.format, "table|csv|json")->check(CLI::IsMember({"table", "csv", "json"}));
    cmd.add_option("--out", a.out, "Write the report here instead of stdout");
    cmd.add_option("--repeats", a.repeats, "Timed repeats (timing)");
    cmd.add_flag("--allow-unstable", a.allow_unstable, "Run explicit steps beyond the stability bound");
    cmd.add_option("--grid", a.grids, "NSxNT grid for convergence (repeatable), e.g. 100x2000");
}

std::vector<Method> parse_methods(const std::string& name) {
    if (name == "all" || name == "All") return {Method::MCFDM, Method::CFDM, Method::MonteCarlo, Method::Exact};
    auto m = parse_method(name);
    if (!m) throw std::invalid_argument("unknown method: " + name);
    return {*m};
}

std::pair<std::size_t, std::size_t> parse_grid(const std::string& text) {
    const auto x = text.find('x');
    if (x == std::string::npos) throw std::invalid_argument("grid must look like 100x1000: " + text);
    return {std::stoul(text.substr(0, x)), std::stoul(text.substr(x + 1))};
}

JobSpec build_job(const CLI::App& cmd, const CliArgs& a) {
    JobSpec job;
    if (!a.job_file.empty()) {
        std::ifstream in(a.job_file);
        if (!in) throw std::invalid_argument("cannot open job file " + a.job_file);
        job = job_from_json(nlohmann::json::parse(in));
    }
    const auto given = [&](const char* flag) { return cmd.count(flag) > 0 || a.job_file.empty(); };

    if (given("--kind")) job.contract.kind = a.kind == "call" ? OptionKind::Call : OptionKind::Put;
    if (given("--spot")) job.contract.spot = a.spot;
    if (given("--strike")) job.contract.strike = a.strike;
    if (given("--rate")) job.market.rate = a.rate;
    if (given("--vol")) job.market.sigma = a.vol;
    if (cmd.count("--maturity") > 0) {
        job.maturities = a.maturities;
        job.contract.maturity = a.maturities.front();
    } else if (a.job_file.empty()) {
        job.contract.maturity = 1.0;
    }
    if (given("--method")) job.methods = parse_methods(a.method);
    if (given("--n-space")) job.n_space = a.n_space;
    if (given("--n-time")) job.n_time = a.n_time;
    if (given("--s-max")) {
        if (a.s_max == "auto")
            job.s_max.reset();
        else
            job.s_max = std::stod(a.s_max);
    }
    if (cmd.count("--theta-scale") > 0) {
        job.theta.scaling = a.theta_scales.front();
        job.theta_scales = a.theta_scales;
    }
    if (given("--theta-mode")) job.theta.normalize = a.theta_mode == "normalized";
    if (given("--alpha"))
        job.market.alpha_profile = a.alpha == "constant" ? AlphaProfile::Constant : AlphaProfile::Proportional;
    if (given("--paths")) job.mc.n_paths = a.paths;
    if (given("--seed")) job.mc.seed = a.seed;
    if (given("--format"))
        job.format = a.format == "csv" ? OutputFormat::Csv : a.format == "json" ? OutputFormat::Json : OutputFormat::Table;
    if (cmd.count("--out") > 0) job.out_path = a.out;
    if (given("--repeats")) job.repeats = a.repeats;
    if (cmd.count("--allow-unstable") > 0) job.allow_unstable = a.allow_unstable;
    if (cmd.count("--grid") > 0) {
        job.grids.clear();
        for (const auto& g : a.grids) job.grids.push_back(parse_grid(g));
    }
    job.validate();
    return job;
}

int emit(const TableReport& report, const JobSpec& job) {
    const std::string text = render(report, job.format);
    if (job.out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(job.out_path, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write " << job.out_path << "\n";
            return kExitInvalid;
        }
        out << text;
    }
    for (const auto& row : report.rows)
        if (!row.error.empty()) std::cerr << "error: " << to_string(row.method) << ": " << row.error << "\n";
    switch (report.worst_failure()) {
        case FailureKind::None: return kExitOk;
        case FailureKind::Solver: return kExitSolver;
        case FailureKind::Stability: return kExitStability;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"European option pricing: mean-convection FDM, Crank-Nicolson, Monte Carlo, closed form"};
    app.require_subcommand(1);

    CliArgs args;
    auto* price = app.add_subcommand("price", "Price one contract with one or all methods");
    auto* table = app.add_subcommand("table", "Method x maturity comparison table");
    auto* timing = app.add_subcommand("timing", "Median solve time per method");
    auto* theta = app.add_subcommand("theta-study", "MCFDM error across convection scalings");
    auto* convergence = app.add_subcommand("convergence", "Error against grid refinement");
    for (auto* cmd : {price, table, timing, theta, convergence}) add_common_options(*cmd, args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    CLI::App* cmd = app.get_subcommands().front();
    JobSpec job;
    try {
        job = build_job(*cmd, args);
        if (cmd == timing && job.repeats < 3) throw std::invalid_argument("--repeats must be >= 3");
        if (cmd == theta && job.theta_scales.empty()) job.theta_scales = {0.5, 1.0, 2.0};
        if (cmd == convergence && job.grids.empty()) throw std::invalid_argument("convergence needs --grid");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    }

    try {
        if (cmd == price) {
            TableReport report = run_table({job.contract.maturity}, job);
            report.command = "price";
            return emit(report, job);
        }
        if (cmd == table) {
            const auto maturities = job.maturities.empty() ? std::vector<double>{0.25, 0.5, 1.0} : job.maturities;
            return emit(run_table(maturities, job), job);
        }
        if (cmd == timing) return emit(run_timing(job, job.repeats), job);
        if (cmd == theta) return emit(run_theta_study(job.theta_scales, job), job);
        if (cmd == convergence) {
            const Method method = job.methods.size() == 1 ? job.methods.front() : Method::CFDM;
            return emit(run_convergence(job.grids, job, method), job);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    }
    return kExitOk;
}
