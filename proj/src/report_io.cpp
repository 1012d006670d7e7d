#include "mcfdm/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

namespace mcfdm::harness {

namespace {

using nlohmann::json;

// Round-trippable decimal form.
std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt_fixed(double x, int digits) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << x;
    return os.str();
}

template <typename T>
std::string opt_field(const std::optional<T>& v) {
    if (!v) return "";
    if constexpr (std::is_floating_point_v<T>)
        return fmt_double(*v);
    else
        return std::to_string(*v);
}

std::string format_name(OutputFormat f) {
    switch (f) {
        case OutputFormat::Table: return "table";
        case OutputFormat::Csv: return "csv";
        case OutputFormat::Json: return "json";
    }
    return "table";
}

std::string failure_name(FailureKind k) {
    switch (k) {
        case FailureKind::None: return "none";
        case FailureKind::Solver: return "solver";
        case FailureKind::Stability: return "stability";
    }
    return "none";
}

std::string maturity_label(double t) {
    if (t == 0.25) return "3M";
    if (t == 0.5) return "6M";
    if (t == 1.0) return "1Y";
    std::ostringstream os;
    os << t << "Y";
    return os.str();
}

template <typename T>
void put_opt(json& j, const char* key, const std::optional<T>& v) {
    if (v)
        j[key] = *v;
    else
        j[key] = nullptr;
}

}  // namespace

std::string format_error_sci(double value) {
    if (value == 0.0) return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2E", value);
    std::string s(buf);
    const auto e = s.find('E');
    std::string mantissa = s.substr(0, e);
    std::string exponent = s.substr(e + 1);
    std::string sign;
    if (!exponent.empty() && (exponent[0] == '+' || exponent[0] == '-')) {
        if (exponent[0] == '-') sign = "-";
        exponent.erase(0, 1);
    }
    exponent.erase(0, std::min(exponent.find_first_not_of('0'), exponent.size() - 1));
    return mantissa + "E" + sign + exponent;
}

std::string to_csv(const TableReport& report) {
    std::ostringstream os;
    os << kCsvHeader << '\n';
    for (const auto& row : report.rows) {
        os << to_string(row.method) << ',' << fmt_double(row.maturity) << ',' << opt_field(row.price) << ','
           << opt_field(row.abs_error) << ',' << fmt_double(row.elapsed_seconds) << ',' << opt_field(row.se) << ','
           << opt_field(row.theta_scale) << ',' << opt_field(row.n_space) << ',' << opt_field(row.n_time) << ','
           << opt_field(row.paths) << ',' << opt_field(row.seed) << '\n';
    }
    return os.str();
}

json job_to_json(const JobSpec& job) {
    json j;
    std::vector<std::string> methods;
    for (Method m : job.methods) methods.push_back(to_string(m));
    j["methods"] = methods;
    j["kind"] = to_string(job.contract.kind);
    j["spot"] = job.contract.spot;
    j["strike"] = job.contract.strike;
    j["maturity"] = job.contract.maturity;
    j["maturities"] = job.maturities;
    j["rate"] = job.market.rate;
    j["vol"] = job.market.sigma;
    j["alpha"] = job.market.alpha_profile == AlphaProfile::Constant ? "constant" : "proportional";
    j["n_space"] = job.n_space;
    j["n_time"] = job.n_time;
    if (job.s_max)
        j["s_max"] = *job.s_max;
    else
        j["s_max"] = "auto";
    j["theta_scale"] = job.theta.scaling;
    j["theta_mode"] = job.theta.normalize ? "normalized" : "literal";
    j["theta_quadrature_points"] = job.theta.quadrature_points;
    j["paths"] = job.mc.n_paths;
    j["seed"] = job.mc.seed;
    j["mc_time_steps"] = job.mc.n_time_steps;
    j["antithetic"] = job.mc.antithetic;
    j["allow_unstable"] = job.allow_unstable;
    j["repeats"] = job.repeats;
    j["theta_scales"] = job.theta_scales;
    json grids = json::array();
    for (const auto& [ns, nt] : job.grids) grids.push_back({ns, nt});
    j["grids"] = grids;
    j["format"] = format_name(job.format);
    return j;
}

JobSpec job_from_json(const json& input) {
    const json& j = input.contains("job") && input["job"].is_object() ? input["job"] : input;
    JobSpec job;
    if (j.contains("methods")) {
        job.methods.clear();
        for (const auto& m : j["methods"]) {
            auto parsed = parse_method(m.get<std::string>());
            if (!parsed) throw std::invalid_argument("unknown method in job: " + m.get<std::string>());
            job.methods.push_back(*parsed);
        }
    }
    if (j.contains("kind")) {
        const auto k = j["kind"].get<std::string>();
        if (k != "call" && k != "put") throw std::invalid_argument("job kind must be call or put");
        job.contract.kind = k == "call" ? OptionKind::Call : OptionKind::Put;
    }
    auto read = [&](const char* key, auto& target) {
        if (j.contains(key) && !j[key].is_null()) target = j[key].get<std::decay_t<decltype(target)>>();
    };
    read("spot", job.contract.spot);
    read("strike", job.contract.strike);
    read("maturity", job.contract.maturity);
    read("maturities", job.maturities);
    read("rate", job.market.rate);
    read("vol", job.market.sigma);
    if (j.contains("alpha"))
        job.market.alpha_profile =
            j["alpha"].get<std::string>() == "proportional" ? AlphaProfile::Proportional : AlphaProfile::Constant;
    read("n_space", job.n_space);
    read("n_time", job.n_time);
    if (j.contains("s_max") && j["s_max"].is_number()) job.s_max = j["s_max"].get<double>();
    read("theta_scale", job.theta.scaling);
    if (j.contains("theta_mode")) job.theta.normalize = j["theta_mode"].get<std::string>() != "literal";
    read("theta_quadrature_points", job.theta.quadrature_points);
    read("paths", job.mc.n_paths);
    read("seed", job.mc.seed);
    read("mc_time_steps", job.mc.n_time_steps);
    read("antithetic", job.mc.antithetic);
    read("allow_unstable", job.allow_unstable);
    read("repeats", job.repeats);
    read("theta_scales", job.theta_scales);
    if (j.contains("grids")) {
        job.grids.clear();
        for (const auto& g : j["grids"]) job.grids.emplace_back(g.at(0).get<std::size_t>(), g.at(1).get<std::size_t>());
    }
    if (j.contains("format")) {
        const auto f = j["format"].get<std::string>();
        job.format = f == "csv" ? OutputFormat::Csv : f == "json" ? OutputFormat::Json : OutputFormat::Table;
    }
    return job;
}

std::string to_json(const TableReport& report) {
    json j;
    j["tool"] = "mcfdm";
    j["version"] = report.tool_version;
    j["command"] = report.command;
    j["generated_at"] = report.generated_at;
    j["job"] = job_to_json(report.job);
    json rows = json::array();
    for (const auto& row : report.rows) {
        json r;
        r["method"] = to_string(row.method);
        r["maturity_years"] = row.maturity;
        put_opt(r, "price", row.price);
        put_opt(r, "abs_error", row.abs_error);
        r["elapsed_seconds"] = row.elapsed_seconds;
        put_opt(r, "se", row.se);
        put_opt(r, "theta_scale", row.theta_scale);
        put_opt(r, "n_space", row.n_space);
        put_opt(r, "n_time", row.n_time);
        put_opt(r, "paths", row.paths);
        put_opt(r, "seed", row.seed);
        put_opt(r, "oscillation", row.oscillation);
        put_opt(r, "cfl_margin", row.cfl_margin);
        put_opt(r, "observed_order", row.observed_order);
        r["failure"] = failure_name(row.failure);
        r["error"] = row.error;
        rows.push_back(r);
    }
    j["rows"] = rows;
    // An unconstrained cfl_margin (+inf) is written as null.
    return j.dump(2) + "\n";
}

std::string to_human_table(const TableReport& report) {
    std::ostringstream os;
    const auto& job = report.job;
    os << "# mcfdm " << report.tool_version << " " << report.command << "  (" << report.generated_at << ")\n";
    os << "# " << to_string(job.contract.kind) << "  S0=" << job.contract.spot << "  K=" << job.contract.strike
       << "  r=" << job.market.rate << "  sigma=" << job.market.sigma << "  grid=" << job.n_space << "x"
       << job.n_time << "  theta_scale=" << job.theta.scaling << "  paths=" << job.mc.n_paths
       << "  seed=" << job.mc.seed << "\n";

    if (report.command == "table") {
        // Method x maturity grid, cells "price (error)".
        std::vector<double> maturities;
        for (const auto& row : report.rows)
            if (std::find(maturities.begin(), maturities.end(), row.maturity) == maturities.end())
                maturities.push_back(row.maturity);
        os << std::left << std::setw(14) << "";
        for (double t : maturities) os << std::setw(24) << ("T: " + maturity_label(t));
        os << "\n";
        for (Method m : job.methods) {
            os << std::setw(14) << to_string(m);
            for (double t : maturities) {
                std::string cell = "-";
                for (const auto& row : report.rows) {
                    if (row.method != m || row.maturity != t) continue;
                    if (!row.price)
                        cell = "failed";
                    else if (m == Method::Exact)
                        cell = fmt_fixed(*row.price, 5);
                    else
                        cell = fmt_fixed(*row.price, 5) + " (" + format_error_sci(row.abs_error.value_or(0.0)) + ")";
                }
                os << std::setw(24) << cell;
            }
            os << "\n";
        }
    } else {
        os << std::left << std::setw(12) << "method" << std::setw(8) << "T" << std::setw(11) << "grid"
           << std::setw(8) << "theta" << std::setw(12) << "price" << std::setw(10) << "error" << std::setw(14)
           << "elapsed(s)" << "notes\n";
        for (const auto& row : report.rows) {
            std::string grid = row.n_space ? std::to_string(*row.n_space) + "x" + std::to_string(*row.n_time) : "-";
            std::string theta = row.theta_scale ? fmt_fixed(*row.theta_scale, 2) : "-";
            os << std::setw(12) << to_string(row.method) << std::setw(8) << maturity_label(row.maturity)
               << std::setw(11) << grid << std::setw(8) << theta << std::setw(12)
               << (row.price ? fmt_fixed(*row.price, 5) : "failed") << std::setw(10)
               << (row.abs_error ? format_error_sci(*row.abs_error) : "-") << std::setw(14)
               << fmt_fixed(row.elapsed_seconds, 6);
            std::string notes;
            if (row.se) notes += "se=" + format_error_sci(*row.se) + " ";
            if (row.oscillation && *row.oscillation) notes += "oscillation ";
            if (row.observed_order) notes += "order=" + fmt_fixed(*row.observed_order, 2) + " ";
            if (!row.error.empty()) notes += row.error;
            os << notes << "\n";
        }
    }
    return os.str();
}

std::string render(const TableReport& report, OutputFormat format) {
    switch (format) {
        case OutputFormat::Csv: return to_csv(report);
        case OutputFormat::Json: return to_json(report);
        case OutputFormat::Table: return to_human_table(report);
    }
    return to_human_table(report);
}

}  // namespace mcfdm::harness
