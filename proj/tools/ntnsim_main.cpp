// ntnsim: run scenarios, sweeps, and the offline estimator from the command line.

#include "ntnsim/error.hpp"
#include "ntnsim/estimators.hpp"
#include "ntnsim/metrics.hpp"
#include "ntnsim/scenario.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace {

using namespace ntnsim;

// --seed beats NTNSIM_SEED beats the config file.
void apply_seed(ScenarioConfig& cfg, const std::optional<std::uint64_t>& cli_seed)
{
    if (const char* env = std::getenv("NTNSIM_SEED"); env != nullptr && *env != '\0') {
        std::uint64_t s = 0;
        const std::string_view v(env);
        auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), s);
        if (ec != std::errc{} || p != v.data() + v.size()) {
            throw Error(ErrorCode::ConfigError, "NTNSIM_SEED is not an unsigned integer: " + std::string(v));
        }
        cfg.seed = s;
    }
    if (cli_seed) cfg.seed = *cli_seed;
}

void print_summary(const RunMetrics& m)
{
    std::cout << m.scenario_id << ": seed=" << m.seed << " mu=" << m.mu << " n_hat=" << m.final_timers.n_hat
              << " m_hat=" << m.final_timers.m_hat << " t_d=" << format_fixed(m.final_timers.t_d_ms, 3)
              << " B*=" << m.b_star << " buffer=" << m.buffer_cells
              << " throughput=" << format_fixed(m.effective_rate_pkts_per_ms, 3) << " blocked=" << m.blocked_count
              << " ack_lost_samples=" << m.additional_delay_samples.size();
    if (!m.additional_delay_samples.empty()) std::cout << " avg_additional_delay=" << format_fixed(avg_additional_delay(m), 3);
    std::cout << '\n';
}

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f || !(f << text)) throw Error(ErrorCode::IoError, "cannot write " + path);
}

std::vector<RawSample> read_observations(const std::string& path)
{
    std::ifstream f(path);
    if (!f) throw Error(ErrorCode::IoError, "cannot open " + path);
    std::vector<RawSample> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(f, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto comma = line.find(',');
        const std::string first = line.substr(0, comma);
        RawSample s;
        auto [p, ec] = std::from_chars(first.data(), first.data() + first.size(), s.sojourn_ms);
        if (ec != std::errc{} || p != first.data() + first.size()) {
            if (line_no == 1) continue;  // header
            throw Error(ErrorCode::ParseError, path + " line " + std::to_string(line_no) + ": bad timestamp '" + first + "'");
        }
        if (comma != std::string::npos) {
            const std::string flag = line.substr(comma + 1);
            s.ack_lost = flag == "1" || flag == "true";
        }
        out.push_back(s);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"ntnsim - NTN Layer-2 timer and buffer simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string timers_path;
    std::optional<std::uint64_t> seed;
    bool quiet = false;
    unsigned jobs = 1;

    auto* run = app.add_subcommand("run", "Run a single scenario");
    run->add_option("--config", config_path, "Scenario config file")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out_path, "Write the metrics CSV here");
    run->add_option("--timers", timers_path, "Write the per-adaptation timer log here");
    run->add_option("--seed", seed, "Override the seed");
    run->add_flag("--quiet", quiet, "No summary on stdout");

    auto* sweep = app.add_subcommand("sweep", "Run every point of the config's sweep");
    sweep->add_option("--config", config_path, "Scenario config file")->required()->check(CLI::ExistingFile);
    sweep->add_option("--out", out_path, "Metrics CSV")->required();
    sweep->add_option("--seed", seed, "Override the base seed");
    sweep->add_option("--jobs", jobs, "Sweep points run in parallel")->check(CLI::PositiveNumber);
    sweep->add_flag("--quiet", quiet, "No summary on stdout");

    std::string obs_path;
    double rd = 20.0;
    double tpro = 0.5;
    double rp = 10.0;
    std::size_t capacity = 20;
    auto* estimate = app.add_subcommand("estimate", "Estimate N, t_d and B* from recorded sojourn times");
    estimate->add_option("--obs", obs_path, "CSV of sojourn times in ms (optional second column: ack_lost 0/1)")
        ->required()
        ->check(CLI::ExistingFile);
    estimate->add_option("--rd", rd, "Round-trip delay in ms")->required();
    estimate->add_option("--tpro", tpro, "Total processing delay in ms")->required();
    estimate->add_option("--rp", rp, "PDCP rate in packets per ms");
    estimate->add_option("--capacity", capacity, "Observation capacity O");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            ScenarioConfig cfg = load_config(config_path);
            apply_seed(cfg, seed);
            const std::vector<RunMetrics> runs{run_scenario(cfg)};
            if (!quiet) print_summary(runs.front());
            if (!out_path.empty()) emit_csv(runs, out_path);
            if (!timers_path.empty()) write_text(timers_path, format_timer_log(runs.front()));
        } else if (*sweep) {
            ScenarioConfig cfg = load_config(config_path);
            apply_seed(cfg, seed);
            const auto runs = run_sweep(cfg, jobs);
            if (!quiet) {
                for (const auto& m : runs) print_summary(m);
            }
            emit_csv(runs, out_path);
        } else if (*estimate) {
            const auto raw = read_observations(obs_path);
            const ObservationSet obs = filter_ack_lost(raw, capacity);
            const double t_star = solve_max_sojourn(obs);
            const std::int64_t n = estimate_n(t_star, rd, tpro);
            std::cout << "samples=" << obs.stamps.size() << '\n'
                      << "t_star=" << format_fixed(t_star, 3) << '\n'
                      << "n_hat=" << n << '\n'
                      << "t_d=" << format_fixed(optimal_discard_timer(n, rd, tpro), 3) << '\n'
                      << "b_star=" << optimal_buffer_size(n, rd, tpro, rp) << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "ntnsim: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
