#include "hallway/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "hallway/episode.hpp"
#include "hallway/util.hpp"

namespace hallway::bench {

const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::Goal: return "goal";
        case Outcome::Collision: return "collision";
        case Outcome::Timeout: return "timeout";
    }
    return "?";
}

std::vector<SweepCell> SweepSpec::cells() const {
    std::vector<SweepCell> out{SweepCell{}};
    for (const auto& [key, values] : axes) {
        std::vector<SweepCell> next;
        next.reserve(out.size() * values.size());
        for (const auto& cell : out) {
            for (const auto& v : values) {
                SweepCell c = cell;
                c.overrides.emplace_back(key, v);
                next.push_back(std::move(c));
            }
        }
        out = std::move(next);
    }
    return out;
}

SweepSpec SweepSpec::from_config(const cfg::Config& c) {
    SweepSpec spec;
    spec.base = c;
    spec.axes = c.sweep_axes();
    spec.seeds = c.get_int("sweep.seeds");
    spec.workers = c.get_int("sweep.workers");
    if (spec.axes.empty()) throw cfg::ConfigError("sweep: no sweep.axis.* keys configured");
    if (spec.seeds < 1) throw cfg::ConfigError("sweep: seeds must be >= 1");
    return spec;
}

std::string results_csv_header() {
    return "corridor_len,human_speed,ratio,peek,seed,time_to_goal,avg_speed,path_changes,"
           "ps_violations,collisions,outcome";
}

namespace {

std::string row_csv(const ResultRow& r) {
    std::string out;
    out += fmt_double(r.corridor_len);
    out += ',';
    out += fmt_double(r.human_speed);
    out += ',';
    out += fmt_double(r.ratio);
    out += ',';
    out += r.peek ? '1' : '0';
    out += ',';
    out += std::to_string(r.seed);
    out += ',';
    out += fmt_double(r.metrics.time_to_goal);
    out += ',';
    out += fmt_double(r.metrics.avg_speed);
    out += ',';
    out += std::to_string(r.metrics.path_changes);
    out += ',';
    out += std::to_string(r.metrics.ps_violations);
    out += ',';
    out += std::to_string(r.metrics.collisions);
    out += ',';
    out += r.error ? "error" : to_string(r.metrics.outcome);
    out += '\n';
    return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(line);
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

}  // namespace

std::string results_csv(const std::vector<ResultRow>& rows) {
    std::string out = results_csv_header();
    out += '\n';
    for (const auto& r : rows) out += row_csv(r);
    return out;
}

std::vector<ResultRow> parse_results_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != results_csv_header())
        throw std::invalid_argument("results csv: bad header");
    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 11) throw std::invalid_argument("results csv: bad row: " + line);
        ResultRow r;
        r.corridor_len = parse_double(f[0]);
        r.human_speed = parse_double(f[1]);
        r.ratio = parse_double(f[2]);
        r.peek = f[3] == "1";
        r.seed = std::stoull(f[4]);
        r.metrics.time_to_goal = f[5] == "inf" ? std::numeric_limits<double>::infinity()
                                               : parse_double(f[5]);
        r.metrics.avg_speed = parse_double(f[6]);
        r.metrics.path_changes = std::stoi(f[7]);
        r.metrics.ps_violations = std::stoi(f[8]);
        r.metrics.collisions = std::stoi(f[9]);
        if (f[10] == "error") {
            r.error = true;
        } else if (f[10] == "goal") {
            r.metrics.outcome = Outcome::Goal;
        } else if (f[10] == "collision") {
            r.metrics.outcome = Outcome::Collision;
        } else if (f[10] == "timeout") {
            r.metrics.outcome = Outcome::Timeout;
        } else {
            throw std::invalid_argument("results csv: bad outcome: " + f[10]);
        }
        rows.push_back(r);
    }
    return rows;
}

std::vector<ResultRow> run_sweep(const SweepSpec& spec) {
    const auto cells = spec.cells();
    struct Job {
        std::size_t cell;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (std::size_t c = 0; c < cells.size(); ++c)
        for (int s = 1; s <= spec.seeds; ++s)
            jobs.push_back({c, static_cast<std::uint64_t>(s)});

    std::vector<ResultRow> rows(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t j = next.fetch_add(1);
            if (j >= jobs.size()) return;
            const Job& job = jobs[j];
            cfg::Config c = spec.base;
            for (const auto& [key, value] : cells[job.cell].overrides) c.set(key, value);
            c.set("scenario.seed", std::to_string(job.seed));
            c.set("planner.seed", std::to_string(job.seed));
            ResultRow row;
            row.seed = job.seed;
            try {
                const auto scenario = cfg::make_scenario(c);
                const auto planner_cfg = cfg::make_planner(c);
                row.corridor_len = scenario.corridor_length;
                row.human_speed = scenario.human_speed;
                row.ratio = 1.0 / (planner_cfg.risk.c1 * planner_cfg.risk.c3);
                row.peek = planner_cfg.peek_enabled;
                row.metrics = sim::run_episode(scenario, planner_cfg).metrics;
            } catch (const std::exception&) {
                row.error = true;
            }
            rows[j] = row;
        }
    };

    int n_workers = spec.workers > 0
                        ? spec.workers
                        : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    n_workers = std::min<int>(n_workers, static_cast<int>(jobs.size()));
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return rows;
}

Quartiles quartiles(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("quartiles: empty input");
    std::sort(values.begin(), values.end());
    auto median_of = [&](std::size_t lo, std::size_t hi) {  // inclusive range
        const std::size_t n = hi - lo + 1;
        const std::size_t mid = lo + n / 2;
        return n % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
    };
    const std::size_t n = values.size();
    Quartiles q;
    q.median = median_of(0, n - 1);
    if (n == 1) {
        q.q1 = q.q3 = values[0];
        return q;
    }
    // Tukey hinges: odd n includes the median element in both halves.
    const std::size_t half_end = n % 2 == 1 ? n / 2 : n / 2 - 1;
    q.q1 = median_of(0, half_end);
    q.q3 = median_of(n % 2 == 1 ? n / 2 : n / 2, n - 1);
    return q;
}

std::vector<SummaryRow> aggregate(const std::vector<ResultRow>& rows) {
    if (rows.empty()) throw std::invalid_argument("aggregate: no rows");
    struct Key {
        double len, speed, ratio;
        bool peek;
        bool operator==(const Key&) const = default;
    };
    std::vector<Key> order;
    std::vector<std::vector<const ResultRow*>> groups;
    for (const auto& r : rows) {
        const Key k{r.corridor_len, r.human_speed, r.ratio, r.peek};
        std::size_t g = 0;
        for (; g < order.size(); ++g)
            if (order[g] == k) break;
        if (g == order.size()) {
            order.push_back(k);
            groups.emplace_back();
        }
        groups[g].push_back(&r);
    }

    std::vector<SummaryRow> out;
    for (std::size_t g = 0; g < order.size(); ++g) {
        SummaryRow s;
        s.corridor_len = order[g].len;
        s.human_speed = order[g].speed;
        s.ratio = order[g].ratio;
        s.peek = order[g].peek;
        std::vector<double> times, speeds;
        for (const ResultRow* r : groups[g]) {
            ++s.n;
            if (r->error) continue;
            switch (r->metrics.outcome) {
                case Outcome::Goal: ++s.goals; break;
                case Outcome::Collision: ++s.collisions; break;
                case Outcome::Timeout: ++s.timeouts; break;
            }
            // Censored episodes: +inf time, zero speed.
            times.push_back(r->metrics.outcome == Outcome::Goal
                                ? r->metrics.time_to_goal
                                : std::numeric_limits<double>::infinity());
            speeds.push_back(r->metrics.outcome == Outcome::Goal ? r->metrics.avg_speed : 0.0);
        }
        if (!times.empty()) {
            s.time_to_goal = quartiles(times);
            s.avg_speed = quartiles(speeds);
        }
        out.push_back(s);
    }
    return out;
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
    std::string out =
        "corridor_len,human_speed,ratio,peek,n,goals,collisions,timeouts,"
        "ttg_q1,ttg_median,ttg_q3,speed_q1,speed_median,speed_q3\n";
    for (const auto& r : rows) {
        out += fmt_double(r.corridor_len);
        out += ',';
        out += fmt_double(r.human_speed);
        out += ',';
        out += fmt_double(r.ratio);
        out += ',';
        out += r.peek ? '1' : '0';
        out += ',';
        out += std::to_string(r.n);
        out += ',';
        out += std::to_string(r.goals);
        out += ',';
        out += std::to_string(r.collisions);
        out += ',';
        out += std::to_string(r.timeouts);
        out += ',';
        out += fmt_double(r.time_to_goal.q1);
        out += ',';
        out += fmt_double(r.time_to_goal.median);
        out += ',';
        out += fmt_double(r.time_to_goal.q3);
        out += ',';
        out += fmt_double(r.avg_speed.q1);
        out += ',';
        out += fmt_double(r.avg_speed.median);
        out += ',';
        out += fmt_double(r.avg_speed.q3);
        out += '\n';
    }
    return out;
}

namespace {

struct Series {
    std::string label;
    std::vector<std::pair<double, Quartiles>> points;  // x -> quartiles
};

struct PanelSpec {
    std::string title;
    std::vector<Series> series;
    bool log_x{false};
};

std::string svg_panel(const PanelSpec& panel, double width, double height, double y_offset,
                      const std::string& x_label) {
    // Collect finite extents.
    double x_min = 1e300, x_max = -1e300, y_min = 0.0, y_max = -1e300;
    for (const auto& s : panel.series) {
        for (const auto& [x, q] : s.points) {
            const double xv = panel.log_x ? std::log10(x) : x;
            x_min = std::min(x_min, xv);
            x_max = std::max(x_max, xv);
            for (double v : {q.q1, q.median, q.q3})
                if (std::isfinite(v)) y_max = std::max(y_max, v);
        }
    }
    if (x_max <= x_min) x_max = x_min + 1.0;
    if (y_max <= y_min) y_max = y_min + 1.0;
    y_max *= 1.08;

    const double ml = 60, mr = 15, mt = 28, mb = 42;
    const double pw = width - ml - mr, ph = height - mt - mb;
    auto px = [&](double x) {
        const double xv = panel.log_x ? std::log10(x) : x;
        return ml + pw * (xv - x_min) / (x_max - x_min);
    };
    auto py = [&](double y) {
        if (!std::isfinite(y)) y = y_max;  // censored values clip to the top
        return y_offset + mt + ph * (1.0 - (y - y_min) / (y_max - y_min));
    };

    static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
    std::string out;
    out += "<g>\n";
    out += "<rect x=\"" + fmt_double(ml) + "\" y=\"" + fmt_double(y_offset + mt) + "\" width=\"" +
           fmt_double(pw) + "\" height=\"" + fmt_double(ph) +
           "\" fill=\"none\" stroke=\"#888\"/>\n";
    out += "<text x=\"" + fmt_double(ml) + "\" y=\"" + fmt_double(y_offset + mt - 8) +
           "\" font-size=\"13\" font-family=\"sans-serif\">" + panel.title + "</text>\n";
    // x ticks: 5 evenly spaced
    for (int i = 0; i <= 4; ++i) {
        const double xv = x_min + (x_max - x_min) * i / 4.0;
        const double raw = panel.log_x ? std::pow(10.0, xv) : xv;
        const double xp = ml + pw * i / 4.0;
        out += "<line x1=\"" + fmt_double(xp) + "\" y1=\"" + fmt_double(y_offset + mt + ph) +
               "\" x2=\"" + fmt_double(xp) + "\" y2=\"" + fmt_double(y_offset + mt + ph + 4) +
               "\" stroke=\"#888\"/>\n";
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.3g", raw);
        out += "<text x=\"" + fmt_double(xp) + "\" y=\"" + fmt_double(y_offset + mt + ph + 16) +
               "\" font-size=\"10\" font-family=\"sans-serif\" text-anchor=\"middle\">" + buf +
               "</text>\n";
    }
    out += "<text x=\"" + fmt_double(ml + pw / 2) + "\" y=\"" +
           fmt_double(y_offset + mt + ph + 32) +
           "\" font-size=\"11\" font-family=\"sans-serif\" text-anchor=\"middle\">" + x_label +
           "</text>\n";
    // y ticks
    for (int i = 0; i <= 4; ++i) {
        const double yv = y_min + (y_max - y_min) * i / 4.0;
        const double yp = py(yv);
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.3g", yv);
        out += "<line x1=\"" + fmt_double(ml - 4) + "\" y1=\"" + fmt_double(yp) + "\" x2=\"" +
               fmt_double(ml) + "\" y2=\"" + fmt_double(yp) + "\" stroke=\"#888\"/>\n";
        out += "<text x=\"" + fmt_double(ml - 7) + "\" y=\"" + fmt_double(yp + 3) +
               "\" font-size=\"10\" font-family=\"sans-serif\" text-anchor=\"end\">" + buf +
               "</text>\n";
    }

    for (std::size_t si = 0; si < panel.series.size(); ++si) {
        const auto& s = panel.series[si];
        const char* color = kColors[si % 4];
        // IQR band
        std::string band = "<path d=\"";
        for (std::size_t i = 0; i < s.points.size(); ++i)
            band += (i == 0 ? "M" : "L") + fmt_double(px(s.points[i].first)) + " " +
                    fmt_double(py(s.points[i].second.q3));
        for (std::size_t i = s.points.size(); i-- > 0;)
            band += "L" + fmt_double(px(s.points[i].first)) + " " +
                    fmt_double(py(s.points[i].second.q1));
        band += "Z\" fill=\"" + std::string(color) + "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
        out += band;
        // median line + markers
        std::string line = "<polyline fill=\"none\" stroke=\"" + std::string(color) +
                           "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [x, q] : s.points)
            line += fmt_double(px(x)) + "," + fmt_double(py(q.median)) + " ";
        line += "\"/>\n";
        out += line;
        for (const auto& [x, q] : s.points)
            out += "<circle cx=\"" + fmt_double(px(x)) + "\" cy=\"" + fmt_double(py(q.median)) +
                   "\" r=\"2.5\" fill=\"" + color + "\"/>\n";
        if (panel.series.size() > 1) {
            const double lx = ml + pw - 110, ly = y_offset + mt + 14 + 14 * si;
            out += "<line x1=\"" + fmt_double(lx) + "\" y1=\"" + fmt_double(ly) + "\" x2=\"" +
                   fmt_double(lx + 18) + "\" y2=\"" + fmt_double(ly) + "\" stroke=\"" + color +
                   "\" stroke-width=\"1.5\"/>\n";
            out += "<text x=\"" + fmt_double(lx + 22) + "\" y=\"" + fmt_double(ly + 3) +
                   "\" font-size=\"10\" font-family=\"sans-serif\">" + s.label + "</text>\n";
        }
    }
    out += "</g>\n";
    return out;
}

}  // namespace

std::vector<std::string> render_plots(const std::vector<SummaryRow>& summary,
                                      const std::string& out_dir) {
    if (summary.empty()) throw std::invalid_argument("render_plots: empty summary");

    // Pick the x axis: the cell key with the most distinct values; `peek`
    // becomes the series split when it varies.
    auto distinct = [&](auto getter) {
        std::vector<double> vals;
        for (const auto& r : summary) {
            const double v = getter(r);
            if (std::find(vals.begin(), vals.end(), v) == vals.end()) vals.push_back(v);
        }
        return vals;
    };
    const auto lens = distinct([](const SummaryRow& r) { return r.corridor_len; });
    const auto speeds = distinct([](const SummaryRow& r) { return r.human_speed; });
    const auto ratios = distinct([](const SummaryRow& r) { return r.ratio; });
    const auto peeks = distinct([](const SummaryRow& r) { return r.peek ? 1.0 : 0.0; });

    std::string axis = "ratio";
    auto x_of = [](const SummaryRow& r) { return r.ratio; };
    std::size_t n_axis = ratios.size();
    if (speeds.size() > n_axis) {
        axis = "human_speed";
        n_axis = speeds.size();
    }
    if (lens.size() > n_axis) {
        axis = "corridor_len";
        n_axis = lens.size();
    }
    std::function<double(const SummaryRow&)> getter;
    if (axis == "ratio") getter = [](const SummaryRow& r) { return r.ratio; };
    else if (axis == "human_speed") getter = [](const SummaryRow& r) { return r.human_speed; };
    else getter = [](const SummaryRow& r) { return r.corridor_len; };
    (void)x_of;

    const bool split_peek = peeks.size() > 1;
    auto build_series = [&](auto metric) {
        std::vector<Series> out;
        for (double pk : (split_peek ? peeks : std::vector<double>{-1.0})) {
            Series s;
            s.label = pk == 1.0 ? "peek on" : "peek off";
            for (const auto& r : summary) {
                if (split_peek && (r.peek ? 1.0 : 0.0) != pk) continue;
                s.points.emplace_back(getter(r), metric(r));
            }
            std::sort(s.points.begin(), s.points.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            out.push_back(std::move(s));
        }
        return out;
    };

    const double width = 760, panel_h = 300;
    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt_double(width) +
                      "\" height=\"" + fmt_double(2 * panel_h) + "\">\n";
    PanelSpec top{"time to goal [s] (median, IQR band)",
                  build_series([](const SummaryRow& r) { return r.time_to_goal; }),
                  axis == "ratio"};
    PanelSpec bottom{"average speed [m/s] (median, IQR band)",
                     build_series([](const SummaryRow& r) { return r.avg_speed; }),
                     axis == "ratio"};
    svg += svg_panel(top, width, panel_h, 0.0, axis);
    svg += svg_panel(bottom, width, panel_h, panel_h, axis);
    svg += "</svg>\n";

    std::filesystem::create_directories(out_dir);
    const std::string path = out_dir + "/sweep_" + axis + ".svg";
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("render_plots: cannot write " + path);
    f << svg;
    return {path};
}

}  // namespace hallway::bench
