#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mcfdm/core_model.hpp"
#include "mcfdm/mcfdm_solver.hpp"
#include "mcfdm/monte_carlo.hpp"

namespace mcfdm::harness {

inline constexpr const char* kToolVersion = "0.1.0";

enum class OutputFormat { Table, Csv, Json };

/// One pricing request plus everything needed to reproduce it.
struct JobSpec {
    std::vector<Method> methods{Method::MCFDM, Method::CFDM, Method::MonteCarlo, Method::Exact};
    OptionContract contract{OptionKind::Call, 7.5, 1.0, 7.0};
    std::vector<double> maturities;  // used by `table`; falls back to contract.maturity
    MarketParams market;
    std::size_t n_space = 100;
    std::size_t n_time = 1000;
    std::optional<double> s_max;  // nullopt = automatic truncation
    ThetaConfig theta;
    McConfig mc;
    bool allow_unstable = false;
    std::size_t repeats = 5;
    std::vector<double> theta_scales;
    std::vector<std::pair<std::size_t, std::size_t>> grids;
    OutputFormat format = OutputFormat::Table;
    std::string out_path;

    void validate() const;
    Discretization grid_for(const OptionContract& contract) const;
};

enum class FailureKind { None, Solver, Stability };

/// Thrown by run_price; carries the job echo in what().
class JobError : public std::runtime_error {
public:
    JobError(FailureKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    FailureKind kind() const { return kind_; }

private:
    FailureKind kind_;
};

struct ReportRow {
    Method method = Method::Exact;
    double maturity = 0.0;
    std::optional<double> price;
    std::optional<double> abs_error;
    double elapsed_seconds = 0.0;
    std::optional<double> se;
    std::optional<double> theta_scale;
    std::optional<std::size_t> n_space;
    std::optional<std::size_t> n_time;
    std::optional<std::size_t> paths;
    std::optional<std::uint64_t> seed;
    std::optional<bool> oscillation;
    std::optional<double> cfl_margin;
    std::optional<double> observed_order;
    FailureKind failure = FailureKind::None;
    std::string error;
};

struct TableReport {
    std::string command;
    JobSpec job;
    std::vector<ReportRow> rows;
    std::string generated_at;  // ISO-8601 UTC
    std::string tool_version = kToolVersion;

    FailureKind worst_failure() const;
};

/// Oracle price for the contract; the reference behind every abs_error.
double oracle_price(const OptionContract& contract, const MarketParams& market);

PricingResult run_price(const JobSpec& job, Method method);
std::vector<PricingResult> run_price_all(const JobSpec& job);

TableReport run_table(const std::vector<double>& maturities, const JobSpec& base);
TableReport run_timing(const JobSpec& job, std::size_t repeats);
TableReport run_theta_study(const std::vector<double>& scalings, const JobSpec& base);
TableReport run_convergence(const std::vector<std::pair<std::size_t, std::size_t>>& grids, const JobSpec& base,
                            Method method);

/// Row built from a successful solve; abs_error recomputed against the oracle.
ReportRow make_row(const JobSpec& job, const OptionContract& contract, const PricingResult& result);

}  // namespace mcfdm::harness
