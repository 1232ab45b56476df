#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "crisisnet/macro_net.hpp"

namespace crisisnet {

// Loaders collect row-level problems instead of failing fast so `validate`
// can report everything at once; rows with errors are skipped. Callers that
// need all-or-nothing semantics check ok() / use the *_strict wrappers.
template <typename T>
struct LoadResult {
    std::vector<T> rows;
    std::vector<Issue> issues;
    bool ok() const {
        for (const Issue& i : issues)
            if (i.severity == Issue::Severity::ERROR) return false;
        return true;
    }
};

// countries.csv: header `code,name,continent,gdp_musd[,cab_musd]`
LoadResult<Country> load_countries(std::istream& in);
// trades.csv: header `exporter,importer,volume_musd`
LoadResult<TradeLink> load_trades(std::istream& in);

// Throwing wrappers: any error-severity issue aborts with a message listing
// every problem found.
std::vector<Country> load_countries_strict(std::istream& in);
std::vector<TradeLink> load_trades_strict(std::istream& in);

std::vector<Country> load_countries_file(const std::string& path);
std::vector<TradeLink> load_trades_file(const std::string& path);

void save_countries(std::ostream& out, const std::vector<Country>& countries);
void save_trades(std::ostream& out, const std::vector<TradeLink>& trades);

// Shortest round-trip decimal form (std::to_chars): CSV/DOT exports stay
// bit-exact under save/load.
std::string format_double(double v);

// Minimal RFC 4180 field splitting: quoted fields, "" escapes, no embedded
// newlines. Exposed for the event-CSV reader and tests.
std::vector<std::string> split_csv_line(const std::string& line);
std::string csv_escape(const std::string& field);

} // namespace crisisnet
