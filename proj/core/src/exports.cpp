#include "crisisnet/exports.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "crisisnet/csv_io.hpp"

namespace crisisnet {

using nlohmann::json;

void write_results_csv(std::ostream& out, const std::map<std::string, AvalancheResult>& results) {
    out << "seed,size,duration,n_one_step_direct,n_multi_step_direct,n_indirect,n_residual\n";
    for (const auto& [seed, r] : results) {
        out << csv_escape(seed) << ',' << r.size << ',' << r.duration;
        for (int k = 0; k < 4; ++k) out << ',' << r.profile[static_cast<std::size_t>(k)];
        out << '\n';
    }
}

void write_events_csv(std::ostream& out, const std::map<std::string, AvalancheResult>& results) {
    out << "seed,country,step,side,cause,trigger,label\n";
    for (const auto& [seed, r] : results) {
        for (const CollapseEvent& ev : r.events) {
            out << csv_escape(seed) << ',' << csv_escape(ev.country) << ',' << ev.step << ','
                << to_string(ev.side) << ',' << to_string(ev.cause) << ','
                << (ev.trigger ? csv_escape(*ev.trigger) : "") << ',' << to_string(ev.label)
                << '\n';
        }
    }
}

std::vector<EventRow> read_events_csv(std::istream& in) {
    std::vector<EventRow> rows;
    std::string line;
    if (!std::getline(in, line)) throw Error("events csv: missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (split_csv_line(line) !=
        std::vector<std::string>{"seed", "country", "step", "side", "cause", "trigger", "label"})
        throw Error("events csv: unexpected header");
    int n = 1;
    while (std::getline(in, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 7)
            throw Error("events csv row " + std::to_string(n) + ": expected 7 fields");
        EventRow row;
        row.seed = f[0];
        row.event.country = f[1];
        try {
            row.event.step = std::stoi(f[2]);
        } catch (...) {
            throw Error("events csv row " + std::to_string(n) + ": bad step '" + f[2] + "'");
        }
        row.event.side = side_from_string(f[3]);
        row.event.cause = cause_from_string(f[4]);
        if (!f[5].empty()) row.event.trigger = f[5];
        row.event.label = label_from_string(f[6]);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::map<std::string, AvalancheResult> results_from_events(
    const std::vector<std::string>& all_codes, const std::vector<EventRow>& rows) {
    std::map<std::string, AvalancheResult> results;
    for (const std::string& code : all_codes) {
        AvalancheResult r;
        r.seed = code;
        results.emplace(code, std::move(r));
    }
    for (const EventRow& row : rows) {
        auto it = results.find(row.seed);
        if (it == results.end()) throw Error("events csv references unknown seed '" + row.seed + "'");
        it->second.events.push_back(row.event);
    }
    for (auto& [_, r] : results) {
        std::sort(r.events.begin(), r.events.end(), [](const CollapseEvent& a, const CollapseEvent& b) {
            if (a.step != b.step) return a.step < b.step;
            return a.country < b.country;
        });
        r.size = static_cast<int>(r.events.size());
        r.duration = 0;
        r.profile = {};
        for (const CollapseEvent& ev : r.events) {
            r.duration = std::max(r.duration, ev.step);
            r.profile[static_cast<std::size_t>(ev.label)]++;
        }
    }
    return results;
}

void write_distribution_csv(std::ostream& out, const CumulativeCurve& curve) {
    out << "avalanche_size,countries_ge\n";
    for (const auto& [a, count] : curve) out << a << ',' << count << '\n';
}

void write_tgp_csv(std::ostream& out, const std::vector<TgpPoint>& points) {
    out << "partner,partner_gdp_musd,trade_volume_musd,collapsed\n";
    for (const TgpPoint& p : points) {
        out << csv_escape(p.partner) << ',' << format_double(p.partner_gdp) << ','
            << format_double(p.trade_volume) << ',' << (p.collapsed_by_profiled ? "true" : "false")
            << '\n';
    }
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep) {
    out << "ratio,f,t,max_size,sum_sizes,tail_slope,decades\n";
    for (const SweepRow& r : sweep.rows) {
        out << format_double(r.ratio) << ',' << format_double(r.f) << ',' << format_double(r.t)
            << ',' << r.max_size << ',' << r.sum_sizes << ','
            << (r.tail_slope ? format_double(*r.tail_slope) : "") << ','
            << format_double(r.decades) << '\n';
    }
}

void write_durations_csv(std::ostream& out, const std::map<std::string, AvalancheResult>& results) {
    std::map<int, long> hist;
    for (const auto& [_, r] : results) hist[r.duration]++;
    out << "duration,count\n";
    for (const auto& [d, c] : hist) out << d << ',' << c << '\n';
}

void write_gdp_size_csv(std::ostream& out, const MacroNet& net,
                        const std::map<std::string, AvalancheResult>& results) {
    out << "code,continent,gdp_musd,capacity_musd,size\n";
    for (int i = 0; i < net.n(); ++i) {
        const Country& c = net.country(i);
        const auto it = results.find(c.code);
        const int size = it == results.end() ? 0 : it->second.size;
        out << csv_escape(c.code) << ',' << csv_escape(c.continent) << ','
            << format_double(c.gdp) << ',' << format_double(net.capacity(i)) << ',' << size
            << '\n';
    }
}

void write_profile_totals_csv(std::ostream& out,
                              const std::map<std::string, AvalancheResult>& results) {
    std::array<long, 4> totals{};
    for (const auto& [_, r] : results)
        for (int k = 0; k < 4; ++k) totals[static_cast<std::size_t>(k)] += r.profile[static_cast<std::size_t>(k)];
    out << "label,count\n";
    const Label order[4] = {Label::ONE_STEP_DIRECT, Label::MULTI_STEP_DIRECT, Label::INDIRECT,
                            Label::RESIDUAL};
    for (const Label l : order)
        out << to_string(l) << ',' << totals[static_cast<std::size_t>(l)] << '\n';
}

namespace {

std::string continent_of_checked(const std::map<std::string, std::string>& continent_of,
                                 const std::string& code) {
    const auto it = continent_of.find(code);
    if (it == continent_of.end()) throw Error("missing continent tag for '" + code + "'");
    return it->second;
}

} // namespace

void write_avalanche_dot(std::ostream& out, const AvalancheNetwork& avnet,
                         const std::map<std::string, std::string>& continent_of) {
    out << "digraph avalanche_network {\n";
    for (const std::string& code : avnet.nodes)
        out << "  \"" << code << "\" [continent=\"" << continent_of_checked(continent_of, code)
            << "\"];\n";
    for (const auto& [src, dst] : avnet.edges) {
        const bool intra =
            continent_of_checked(continent_of, src) == continent_of_checked(continent_of, dst);
        out << "  \"" << src << "\" -> \"" << dst << "\" [intra=" << (intra ? "true" : "false")
            << "];\n";
    }
    out << "}\n";
}

void write_forest_dot(std::ostream& out, const SpanningForest& forest,
                      const std::map<std::string, std::string>& continent_of) {
    out << "graph spanning_forest {\n";
    std::set<std::string> nodes;
    for (const ForestEdge& e : forest.edges) {
        nodes.insert(e.a);
        nodes.insert(e.b);
    }
    for (const std::string& code : nodes)
        out << "  \"" << code << "\" [continent=\"" << continent_of_checked(continent_of, code)
            << "\"];\n";
    for (const ForestEdge& e : forest.edges) {
        const bool intra =
            continent_of_checked(continent_of, e.a) == continent_of_checked(continent_of, e.b);
        out << "  \"" << e.a << "\" -- \"" << e.b << "\" [weight=" << format_double(e.weight)
            << ", intra=" << (intra ? "true" : "false") << "];\n";
    }
    out << "}\n";
}

namespace {

json p_to_json(const EmpiricalP& p) {
    return json{{"value", p.value}, {"bound", p.is_bound}, {"display", format_p(p)}};
}

} // namespace

std::string coarse_to_json(const std::vector<CoarseEdge>& edges) {
    std::set<std::string> continents;
    json flows = json::array();
    for (const CoarseEdge& e : edges) {
        continents.insert(e.from);
        continents.insert(e.to);
        flows.push_back(json{{"from", e.from}, {"to", e.to}, {"weight", e.weight}});
    }
    json doc;
    doc["continents"] = continents;
    doc["flows"] = flows;
    return doc.dump(2) + "\n";
}

std::string intra_to_json(const IntraFraction& forest, const IntraFraction& avalanche) {
    const auto one = [](const IntraFraction& f) {
        json j{{"intra", f.intra}, {"total", f.total}};
        if (f.fraction)
            j["fraction"] = *f.fraction;
        else
            j["fraction"] = nullptr;
        return j;
    };
    json doc;
    doc["spanning_forest"] = one(forest);
    doc["avalanche_network"] = one(avalanche);
    return doc.dump(2) + "\n";
}

std::string ensemble_to_json(const EnsembleSummary& summary) {
    json doc;
    doc["model"] = to_string(summary.model);
    doc["samples_requested"] = summary.samples_requested;
    doc["samples_ok"] = summary.samples_ok;
    doc["sample_errors"] = summary.sample_errors;
    json stats;
    for (const StatSeries& s : summary.stats) {
        json st;
        st["n_defined"] = s.n_defined;
        st["mean"] = s.mean;
        st["sd"] = s.sd;
        if (s.observed_defined)
            st["observed"] = s.observed;
        else
            st["observed"] = nullptr;
        if (s.observed_defined && s.n_defined > 0) {
            st["p_upper"] = p_to_json(s.p_upper);
            st["p_lower"] = p_to_json(s.p_lower);
        } else {
            st["p_upper"] = nullptr;
            st["p_lower"] = nullptr;
        }
        json vals = json::array();
        for (double v : s.values) {
            if (std::isnan(v))
                vals.push_back(nullptr);
            else
                vals.push_back(v);
        }
        st["values"] = vals;
        stats[s.name] = st;
    }
    doc["stats"] = stats;
    return doc.dump(2) + "\n";
}

void write_ensemble_samples_csv(std::ostream& out, const EnsembleSummary& summary) {
    out << "sample";
    for (const StatSeries& s : summary.stats) out << ',' << s.name;
    out << '\n';
    if (summary.stats.empty()) return;
    const std::size_t n = summary.stats.front().values.size();
    for (std::size_t i = 0; i < n; ++i) {
        out << i;
        for (const StatSeries& s : summary.stats) {
            out << ',';
            if (!std::isnan(s.values[i])) out << format_double(s.values[i]);
        }
        out << '\n';
    }
}

} // namespace crisisnet
