#include "crisisnet/macro_net.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace crisisnet {

const char* to_string(CapacityMode mode) {
    return mode == CapacityMode::GDP_ONLY ? "gdp" : "gdp-cab";
}

CapacityMode capacity_mode_from_string(const std::string& s) {
    if (s == "gdp") return CapacityMode::GDP_ONLY;
    if (s == "gdp-cab") return CapacityMode::GDP_PLUS_CAB;
    throw Error("unknown capacity mode '" + s + "' (expected gdp or gdp-cab)");
}

std::string format_issue(const Issue& issue) {
    std::ostringstream os;
    os << (issue.severity == Issue::Severity::ERROR ? "error" : "warning");
    if (issue.row > 0) os << " (row " << issue.row << ")";
    os << ": " << issue.message;
    return os.str();
}

int MacroNet::index_of(const std::string& code) const {
    auto it = std::lower_bound(countries_.begin(), countries_.end(), code,
                               [](const Country& c, const std::string& k) { return c.code < k; });
    if (it == countries_.end() || it->code != code) return -1;
    return static_cast<int>(it - countries_.begin());
}

int MacroNet::require_index(const std::string& code) const {
    const int i = index_of(code);
    if (i < 0) throw Error("unknown country code '" + code + "'");
    return i;
}

MacroNet MacroNet::build(std::vector<Country> countries,
                         const std::vector<TradeLink>& trades,
                         CapacityMode mode,
                         bool lenient,
                         std::vector<Issue>* issues) {
    MacroNet net;
    net.mode_ = mode;

    std::sort(countries.begin(), countries.end(),
              [](const Country& a, const Country& b) { return a.code < b.code; });
    for (std::size_t i = 0; i + 1 < countries.size(); ++i) {
        if (countries[i].code == countries[i + 1].code)
            throw Error("duplicate country code '" + countries[i].code + "'");
    }
    for (const Country& c : countries) {
        if (c.code.empty()) throw Error("empty country code");
        if (!(c.gdp > 0.0)) throw Error("country '" + c.code + "' has non-positive GDP");
        if (c.continent.empty()) throw Error("country '" + c.code + "' has empty continent");
    }
    if (mode == CapacityMode::GDP_PLUS_CAB) {
        std::string missing;
        for (const Country& c : countries) {
            if (!c.cab) missing += missing.empty() ? c.code : ", " + c.code;
        }
        if (!missing.empty())
            throw Error("capacity mode gdp-cab requires CAB for every country; missing: " + missing);
    }

    net.countries_ = std::move(countries);
    const int n = net.n();
    net.out_.assign(static_cast<std::size_t>(n), {});
    net.in_.assign(static_cast<std::size_t>(n), {});
    net.out_strength_.assign(static_cast<std::size_t>(n), 0.0);
    net.in_strength_.assign(static_cast<std::size_t>(n), 0.0);
    net.capacity_.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const Country& c = net.countries_[static_cast<std::size_t>(i)];
        net.capacity_[static_cast<std::size_t>(i)] =
            mode == CapacityMode::GDP_ONLY ? c.gdp : c.gdp + *c.cab;
    }

    std::set<std::pair<int, int>> seen;
    for (const TradeLink& l : trades) {
        if (!(l.volume > 0.0))
            throw Error("link " + l.exporter + "->" + l.importer + " has non-positive volume");
        if (l.exporter == l.importer)
            throw Error("self-loop link on '" + l.exporter + "'");
        const int s = net.index_of(l.exporter);
        const int d = net.index_of(l.importer);
        if (s < 0 || d < 0) {
            const std::string& bad = s < 0 ? l.exporter : l.importer;
            if (!lenient)
                throw Error("link " + l.exporter + "->" + l.importer +
                            " references unknown country '" + bad + "'");
            if (issues)
                issues->push_back({0, Issue::Severity::WARNING,
                                   "dropped link " + l.exporter + "->" + l.importer +
                                       ": unknown country '" + bad + "'"});
            continue;
        }
        if (!seen.insert({s, d}).second)
            throw Error("duplicate link " + l.exporter + "->" + l.importer);
        net.out_[static_cast<std::size_t>(s)].push_back({d, l.volume});
        net.in_[static_cast<std::size_t>(d)].push_back({s, l.volume});
        net.out_strength_[static_cast<std::size_t>(s)] += l.volume;
        net.in_strength_[static_cast<std::size_t>(d)] += l.volume;
        net.total_volume_ += l.volume;
        ++net.n_links_;
    }
    for (auto& arcs : net.out_)
        std::sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) { return a.node < b.node; });
    for (auto& arcs : net.in_)
        std::sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) { return a.node < b.node; });
    return net;
}

std::vector<TradeLink> MacroNet::links() const {
    std::vector<TradeLink> out;
    out.reserve(static_cast<std::size_t>(n_links_));
    for (int i = 0; i < n(); ++i) {
        for (const Arc& a : out_[static_cast<std::size_t>(i)]) {
            out.push_back({countries_[static_cast<std::size_t>(i)].code,
                           countries_[static_cast<std::size_t>(a.node)].code, a.w});
        }
    }
    return out;
}

} // namespace crisisnet
