#ifndef HALLWAY_BENCH_HPP_
#define HALLWAY_BENCH_HPP_

#include <string>
#include <vector>

#include "hallway/config.hpp"
#include "hallway/metrics.hpp"

namespace hallway::bench {

/// One sweep cell: a set of config overrides, run for `seeds` seeds each.
struct SweepCell {
    std::vector<std::pair<std::string, std::string>> overrides;  // (key, value) per axis
};

struct SweepSpec {
    cfg::Config base;
    std::vector<std::pair<std::string, std::vector<std::string>>> axes;  // key -> values
    int seeds{10};
    int workers{0};  // 0 = hardware concurrency

    /// Cartesian product of the axis values, last axis fastest.
    std::vector<SweepCell> cells() const;

    static SweepSpec from_config(const cfg::Config& c);
};

/// One row of the results table (schema fixed by results_csv_header()).
struct ResultRow {
    double corridor_len{0.0};
    double human_speed{0.0};
    double ratio{0.0};  // 1 / (c1 * c3)
    bool peek{true};
    std::uint64_t seed{0};
    EpisodeMetrics metrics{};
    bool error{false};
};

std::string results_csv_header();
std::string results_csv(const std::vector<ResultRow>& rows);
std::vector<ResultRow> parse_results_csv(const std::string& text);

/// Runs every (cell, seed) episode. Rows come back in deterministic cell
/// order regardless of worker count; failed episodes become error rows.
std::vector<ResultRow> run_sweep(const SweepSpec& spec);

/// Median and quartiles by the Tukey-hinge rule (each half includes the
/// median element when n is odd). Censored episodes (+inf time) sort above
/// every finite value.
struct Quartiles {
    double q1{0.0};
    double median{0.0};
    double q3{0.0};
};
Quartiles quartiles(std::vector<double> values);

struct SummaryRow {
    double corridor_len{0.0};
    double human_speed{0.0};
    double ratio{0.0};
    bool peek{true};
    int n{0};
    int goals{0};
    int collisions{0};
    int timeouts{0};
    Quartiles time_to_goal{};
    Quartiles avg_speed{};
};

/// Per-cell aggregates in first-appearance order of the cells.
std::vector<SummaryRow> aggregate(const std::vector<ResultRow>& rows);

std::string summary_csv(const std::vector<SummaryRow>& rows);

/// Writes `sweep_<axis>.svg` line charts (median with IQR band) under
/// out_dir and returns the written paths. Byte-identical on re-render.
std::vector<std::string> render_plots(const std::vector<SummaryRow>& summary,
                                      const std::string& out_dir);

}  // namespace hallway::bench

#endif  // HALLWAY_BENCH_HPP_
