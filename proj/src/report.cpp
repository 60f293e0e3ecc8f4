#include "hapsris/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace hapsris {

namespace {

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string preamble(const std::string& kind, const std::string& hash, const std::string& version,
                     std::uint64_t first_seed, std::uint64_t last_seed)
{
    return "# hapsris " + kind + " config_hash=" + hash + " seeds=" + std::to_string(first_seed) + "-" +
           std::to_string(last_seed) + " version=" + version + "\n";
}

nlohmann::ordered_json metrics_json(const RunMetrics& m)
{
    nlohmann::ordered_json j;
    j["num_ues"] = m.num_ues;
    j["num_within_cell"] = m.num_within_cell;
    j["num_beyond_cell"] = m.num_beyond_cell;
    j["pct_connected"] = m.pct_connected;
    j["total_cs_power_w"] = m.total_cs_power_w;
    j["total_ris_power_w"] = m.total_ris_power_w;
    j["total_units"] = m.total_units;
    j["avg_power_per_served_w"] = m.avg_power_per_served_w ? nlohmann::ordered_json(*m.avg_power_per_served_w) : nullptr;
    j["eta_per_w"] = m.eta ? nlohmann::ordered_json(*m.eta) : nullptr;
    j["eta_per_dbm"] = m.eta_dbm ? nlohmann::ordered_json(*m.eta_dbm) : nullptr;
    return j;
}

}  // namespace

std::string sweep_table_csv(const ExperimentReport& r)
{
    const auto seeds = r.spec.seeds();
    std::string out = preamble("sweep " + r.spec.name, r.config_hash, r.version, seeds.front(), seeds.back());
    out += kSweepCsvHeader;
    out += '\n';
    for (const auto& row : r.rows) {
        out += std::string(to_string(r.spec.parameter)) + "," + num(row.value) + "," +
               std::string(to_string(row.method)) + "," + std::to_string(row.num_seeds) + "," +
               std::to_string(row.failures) + "," + num(row.mean_pct_connected) + "," + num(row.ci_pct_connected) +
               "," + num(row.mean_within_cell) + "," + std::to_string(row.eta_count) + "," + num(row.mean_eta) + "," +
               num(row.ci_eta) + "," + num(row.mean_eta_normalized) + "," + num(row.ci_eta_normalized) + "\n";
    }
    return out;
}

std::string sweep_records_csv(const ExperimentReport& r)
{
    const auto seeds = r.spec.seeds();
    std::string out = preamble("records " + r.spec.name, r.config_hash, r.version, seeds.front(), seeds.back());
    out += "value,seed,method,ok,num_within_cell,num_beyond_cell,pct_connected,total_cs_power_w,total_units,eta_per_w,error\n";
    for (const auto& rec : r.records) {
        const auto& m = rec.metrics;
        std::string err = rec.error;
        std::replace(err.begin(), err.end(), ',', ';');
        std::replace(err.begin(), err.end(), '\n', ' ');
        out += num(rec.value) + "," + std::to_string(rec.seed) + "," + std::string(to_string(rec.method)) + "," +
               (rec.ok ? "1" : "0") + "," + std::to_string(m.num_within_cell) + "," +
               std::to_string(m.num_beyond_cell) + "," + num(m.pct_connected) + "," + num(m.total_cs_power_w) + "," +
               std::to_string(m.total_units) + "," + (m.eta ? num(*m.eta) : "") + "," + err + "\n";
    }
    return out;
}

std::string sweep_summary_json(const ExperimentReport& r, const std::string& timestamp)
{
    nlohmann::ordered_json j;
    j["format"] = "hapsris-sweep/1";
    j["name"] = r.spec.name;
    j["version"] = r.version;
    j["config_hash"] = r.config_hash;
    j["parameter"] = std::string(to_string(r.spec.parameter));
    j["grid"] = r.spec.grid;
    auto& methods = j["methods"] = nlohmann::ordered_json::array();
    for (Method m : r.spec.methods) methods.push_back(std::string(to_string(m)));
    j["seeds"] = r.spec.seeds();
    j["config"] = serialize_config(r.spec.base);
    auto& rows = j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : r.rows) {
        nlohmann::ordered_json o;
        o["value"] = row.value;
        o["method"] = std::string(to_string(row.method));
        o["num_seeds"] = row.num_seeds;
        o["failures"] = row.failures;
        o["mean_pct_connected"] = row.mean_pct_connected;
        o["ci_pct_connected"] = row.ci_pct_connected;
        o["mean_within_cell"] = row.mean_within_cell;
        o["eta_count"] = row.eta_count;
        o["mean_eta_per_w"] = row.mean_eta;
        o["ci_eta_per_w"] = row.ci_eta;
        o["mean_eta_normalized"] = row.mean_eta_normalized;
        o["ci_eta_normalized"] = row.ci_eta_normalized;
        if (!row.failure_reason.empty()) o["failure_reason"] = row.failure_reason;
        rows.push_back(std::move(o));
    }
    if (!timestamp.empty()) j["generated_at"] = timestamp;
    return j.dump(2) + "\n";
}

std::string sweep_plot_svg(const ExperimentReport& r, const std::string& metric)
{
    const bool pct = metric == "pct_connected";
    const double w = 640, h = 400, ml = 70, mr = 150, mt = 30, mb = 55;
    const auto& grid = r.spec.grid;
    double ymax = 0.0;
    for (const auto& row : r.rows) ymax = std::max(ymax, pct ? row.mean_pct_connected * 100.0 : row.mean_eta_normalized);
    ymax = ymax > 0.0 ? ymax * 1.05 : 1.0;
    const double x0 = grid.front(), x1 = grid.size() > 1 ? grid.back() : grid.front() + 1.0;
    auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * (w - ml - mr); };
    auto py = [&](double y) { return h - mb - y / ymax * (h - mt - mb); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\"" << h - mb
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << h - mb << "\" stroke=\"black\"/>\n";
    for (double v : grid)
        os << "<text x=\"" << px(v) << "\" y=\"" << h - mb + 18 << "\" font-size=\"11\" text-anchor=\"middle\">"
           << num(v) << "</text>\n";
    for (int i = 0; i <= 4; ++i) {
        const double v = ymax * i / 4.0;
        os << "<text x=\"" << ml - 6 << "\" y=\"" << py(v) + 4 << "\" font-size=\"11\" text-anchor=\"end\">"
           << num(std::round(v * 1000.0) / 1000.0) << "</text>\n";
    }
    os << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 12 << "\" font-size=\"13\" text-anchor=\"middle\">"
       << to_string(r.spec.parameter) << "</text>\n";
    os << "<text x=\"16\" y=\"" << (mt + h - mb) / 2 << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
       << (mt + h - mb) / 2 << ")\">" << (pct ? "connected UEs (%)" : "normalized RE") << "</text>\n";

    static const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
    for (std::size_t j = 0; j < r.spec.methods.size(); ++j) {
        const Method m = r.spec.methods[j];
        os << "<polyline fill=\"none\" stroke=\"" << colours[j % 4] << "\" stroke-width=\"2\" points=\"";
        for (std::size_t g = 0; g < grid.size(); ++g) {
            const auto& row = r.row(g, m);
            const double y = pct ? row.mean_pct_connected * 100.0 : row.mean_eta_normalized;
            os << px(grid[g]) << "," << py(y) << " ";
        }
        os << "\"/>\n";
        os << "<text x=\"" << w - mr + 10 << "\" y=\"" << mt + 20 * (j + 1) << "\" font-size=\"12\" fill=\""
           << colours[j % 4] << "\">" << to_string(m) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

RunOutput run_single(const Scenario& scenario, const std::vector<Method>& methods)
{
    RunOutput out;
    out.config = scenario.config;
    const ChannelState channels = effective_gain(scenario);
    out.association = associate(scenario, channels);
    out.association.check_invariants(channels, scenario.config);
    const auto k2 = stranded_candidates(channels, out.association);
    for (Method m : methods) {
        AllocationResult a = m == Method::algorithm1 ? run_algorithm1(scenario, channels, out.association)
                                                     : benchmark_allocate(k2, scenario.config);
        verify_allocation(a, scenario.config);
        out.metrics.push_back(resource_efficiency(a, out.association, scenario.config));
        out.allocations.push_back(std::move(a));
    }
    return out;
}

std::string run_table_csv(const RunOutput& run)
{
    std::string out = preamble("run", config_hash(run.config), library_version(), run.config.rng_seed,
                               run.config.rng_seed);
    out += kRunCsvHeader;
    out += '\n';
    for (const auto& a : run.allocations)
        for (const auto& s : a.served)
            out += std::to_string(s.ue) + "," + std::string(to_string(a.method)) + "," + num(s.h_sq) + "," +
                   num(s.p_w) + "," + std::to_string(s.n_units) + "," + num(s.rate_bps) + "\n";
    return out;
}

std::string run_summary_json(const RunOutput& run, const std::string& timestamp)
{
    nlohmann::ordered_json j;
    j["format"] = "hapsris-run/1";
    j["version"] = library_version();
    j["config_hash"] = config_hash(run.config);
    j["seed"] = run.config.rng_seed;
    j["objective_mask"] = std::string(to_string(run.config.objective_mask));
    auto& assoc = j["association"];
    assoc["num_ues"] = run.association.serving_bs.size();
    assoc["num_within_cell"] = run.association.num_within_cell();
    assoc["num_stranded"] = run.association.stranded.size();
    assoc["bs_capacity"] = run.association.bs_capacity;
    assoc["bs_load"] = run.association.bs_load;
    auto& methods = j["methods"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < run.allocations.size(); ++i) {
        nlohmann::ordered_json m;
        m["method"] = std::string(to_string(run.allocations[i].method));
        m["metrics"] = metrics_json(run.metrics[i]);
        m["kept_stage1_point"] = run.allocations[i].kept_stage1_point;
        m["dropped_after_rounding"] = run.allocations[i].dropped_after_rounding;
        methods.push_back(std::move(m));
    }
    j["config"] = serialize_config(run.config);
    if (!timestamp.empty()) j["generated_at"] = timestamp;
    return j.dump(2) + "\n";
}

}  // namespace hapsris
