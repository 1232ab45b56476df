#include "crisisnet/csv_io.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>

namespace crisisnet {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"' && cur.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted) throw Error("unterminated quote in CSV line");
    fields.push_back(cur);
    return fields;
}

namespace {

// getline tolerating CRLF
bool next_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

bool parse_double(const std::string& s, double& out) {
    const char* b = s.data();
    const char* e = s.data() + s.size();
    const auto res = std::from_chars(b, e, out);
    return res.ec == std::errc() && res.ptr == e;
}

void push_error(std::vector<Issue>& issues, int row, const std::string& msg) {
    issues.push_back({row, Issue::Severity::ERROR, msg});
}

std::vector<std::string> read_header(std::istream& in, std::vector<Issue>& issues) {
    std::string line;
    if (!next_line(in, line)) {
        push_error(issues, 1, "missing header row");
        return {};
    }
    return split_csv_line(line);
}

} // namespace

LoadResult<Country> load_countries(std::istream& in) {
    LoadResult<Country> result;
    const auto header = read_header(in, result.issues);
    if (header.empty()) return result;

    const std::vector<std::string> required = {"code", "name", "continent", "gdp_musd"};
    for (std::size_t i = 0; i < required.size(); ++i) {
        if (header.size() <= i || header[i] != required[i]) {
            push_error(result.issues, 1, "missing or misplaced required column '" + required[i] +
                                             "' (header must start `code,name,continent,gdp_musd`)");
            return result;
        }
    }
    const bool has_cab = header.size() >= 5 && header[4] == "cab_musd";
    if (header.size() > (has_cab ? 5u : 4u)) {
        push_error(result.issues, 1, "unexpected extra columns in countries header");
        return result;
    }

    std::set<std::string> seen;
    std::string line;
    int row = 1;
    while (next_line(in, line)) {
        ++row;
        if (line.empty()) continue;
        std::vector<std::string> f;
        try {
            f = split_csv_line(line);
        } catch (const Error& e) {
            push_error(result.issues, row, e.what());
            continue;
        }
        if (f.size() != header.size()) {
            push_error(result.issues, row, "expected " + std::to_string(header.size()) +
                                               " fields, got " + std::to_string(f.size()));
            continue;
        }
        Country c;
        c.code = f[0];
        c.name = f[1];
        c.continent = f[2];
        if (c.code.empty()) {
            push_error(result.issues, row, "empty country code");
            continue;
        }
        if (c.continent.empty()) {
            push_error(result.issues, row, "empty continent for '" + c.code + "'");
            continue;
        }
        if (!parse_double(f[3], c.gdp)) {
            push_error(result.issues, row, "unparseable gdp_musd '" + f[3] + "'");
            continue;
        }
        if (!(c.gdp > 0.0)) {
            push_error(result.issues, row, "non-positive GDP for '" + c.code + "'");
            continue;
        }
        if (has_cab && !f[4].empty()) {
            double cab;
            if (!parse_double(f[4], cab)) {
                push_error(result.issues, row, "unparseable cab_musd '" + f[4] + "'");
                continue;
            }
            c.cab = cab;
        }
        if (!seen.insert(c.code).second) {
            push_error(result.issues, row, "duplicate country code '" + c.code + "'");
            continue;
        }
        result.rows.push_back(std::move(c));
    }
    return result;
}

LoadResult<TradeLink> load_trades(std::istream& in) {
    LoadResult<TradeLink> result;
    const auto header = read_header(in, result.issues);
    if (header.empty()) return result;

    if (header != std::vector<std::string>{"exporter", "importer", "volume_musd"}) {
        push_error(result.issues, 1, "trades header must be `exporter,importer,volume_musd`");
        return result;
    }

    std::set<std::pair<std::string, std::string>> seen;
    std::string line;
    int row = 1;
    while (next_line(in, line)) {
        ++row;
        if (line.empty()) continue;
        std::vector<std::string> f;
        try {
            f = split_csv_line(line);
        } catch (const Error& e) {
            push_error(result.issues, row, e.what());
            continue;
        }
        if (f.size() != 3) {
            push_error(result.issues, row, "expected 3 fields, got " + std::to_string(f.size()));
            continue;
        }
        TradeLink l;
        l.exporter = f[0];
        l.importer = f[1];
        if (l.exporter.empty() || l.importer.empty()) {
            push_error(result.issues, row, "empty endpoint code");
            continue;
        }
        if (l.exporter == l.importer) {
            push_error(result.issues, row, "self-loop link on '" + l.exporter + "'");
            continue;
        }
        if (!parse_double(f[2], l.volume)) {
            push_error(result.issues, row, "unparseable volume_musd '" + f[2] + "'");
            continue;
        }
        if (!(l.volume > 0.0)) {
            push_error(result.issues, row,
                       "non-positive volume on " + l.exporter + "->" + l.importer);
            continue;
        }
        if (!seen.insert({l.exporter, l.importer}).second) {
            push_error(result.issues, row, "duplicate link " + l.exporter + "->" + l.importer);
            continue;
        }
        result.rows.push_back(std::move(l));
    }
    return result;
}

namespace {

template <typename T>
std::vector<T> strict(LoadResult<T> res, const char* what) {
    if (!res.ok()) {
        std::ostringstream os;
        os << "invalid " << what << ":";
        for (const Issue& i : res.issues)
            if (i.severity == Issue::Severity::ERROR) os << "\n  " << format_issue(i);
        throw Error(os.str());
    }
    return std::move(res.rows);
}

} // namespace

std::vector<Country> load_countries_strict(std::istream& in) {
    return strict(load_countries(in), "countries table");
}

std::vector<TradeLink> load_trades_strict(std::istream& in) {
    return strict(load_trades(in), "trades table");
}

std::vector<Country> load_countries_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open countries file: " + path);
    return load_countries_strict(in);
}

std::vector<TradeLink> load_trades_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open trades file: " + path);
    return load_trades_strict(in);
}

void save_countries(std::ostream& out, const std::vector<Country>& countries) {
    out << "code,name,continent,gdp_musd,cab_musd\n";
    for (const Country& c : countries) {
        out << csv_escape(c.code) << ',' << csv_escape(c.name) << ',' << csv_escape(c.continent)
            << ',' << format_double(c.gdp) << ',' << (c.cab ? format_double(*c.cab) : "") << '\n';
    }
}

void save_trades(std::ostream& out, const std::vector<TradeLink>& trades) {
    out << "exporter,importer,volume_musd\n";
    for (const TradeLink& l : trades) {
        out << csv_escape(l.exporter) << ',' << csv_escape(l.importer) << ','
            << format_double(l.volume) << '\n';
    }
}

} // namespace crisisnet
