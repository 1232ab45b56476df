#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crisisnet/errors.hpp"

namespace crisisnet {

struct Country {
    std::string code;      // 3-letter identifier (ISO 3166-1 alpha-3 style)
    std::string name;
    std::string continent; // free-form tag, e.g. AF/EA/EE/ME/NA/SA/OC/WE
    double gdp = 0.0;      // million US dollars, > 0
    std::optional<double> cab; // current account balance, M$, may be negative
};

struct TradeLink {
    std::string exporter;
    std::string importer;
    double volume = 0.0; // million US dollars, > 0
};

enum class CapacityMode { GDP_ONLY, GDP_PLUS_CAB };

const char* to_string(CapacityMode mode);
CapacityMode capacity_mode_from_string(const std::string& s); // "gdp" | "gdp-cab"

// Row-level problem found while loading or building. `row` is the 1-based
// line number in the source CSV (0 when not tied to a specific row).
struct Issue {
    enum class Severity { WARNING, ERROR };
    int row = 0;
    Severity severity = Severity::ERROR;
    std::string message;
};

std::string format_issue(const Issue& issue);

// Directed node- and link-weighted macroeconomic network. Immutable after
// construction; country order is canonical (lexicographic by code) so every
// downstream artifact is deterministic.
class MacroNet {
public:
    struct Arc {
        int node;  // neighbor index: target for out(), source for in()
        double w;  // link volume in M$
    };

    // `lenient` drops trade links with unknown endpoints (warning); strict
    // mode throws. All other integrity violations always throw.
    static MacroNet build(std::vector<Country> countries,
                          const std::vector<TradeLink>& trades,
                          CapacityMode mode,
                          bool lenient = false,
                          std::vector<Issue>* issues = nullptr);

    int n() const { return static_cast<int>(countries_.size()); }
    long link_count() const { return n_links_; }

    // index of a country code, -1 when absent
    int index_of(const std::string& code) const;
    int require_index(const std::string& code) const; // throws on unknown code

    const Country& country(int i) const { return countries_[static_cast<std::size_t>(i)]; }
    const std::vector<Country>& countries() const { return countries_; }

    CapacityMode capacity_mode() const { return mode_; }
    double capacity(int i) const { return capacity_[static_cast<std::size_t>(i)]; }
    double capacity_of(const std::string& code) const { return capacity(require_index(code)); }

    const std::vector<Arc>& out(int i) const { return out_[static_cast<std::size_t>(i)]; }
    const std::vector<Arc>& in(int i) const { return in_[static_cast<std::size_t>(i)]; }

    double out_strength(int i) const { return out_strength_[static_cast<std::size_t>(i)]; }
    double in_strength(int i) const { return in_strength_[static_cast<std::size_t>(i)]; }
    double total_volume() const { return total_volume_; }

    // links in canonical order (exporter code, then importer code)
    std::vector<TradeLink> links() const;

private:
    MacroNet() = default;

    std::vector<Country> countries_; // sorted by code
    std::vector<std::vector<Arc>> out_, in_; // arcs sorted by neighbor index
    std::vector<double> capacity_, out_strength_, in_strength_;
    CapacityMode mode_ = CapacityMode::GDP_ONLY;
    long n_links_ = 0;
    double total_volume_ = 0.0;
};

} // namespace crisisnet
