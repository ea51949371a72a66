#include "infoplan/environment.hpp"
#include "infoplan/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <string_view>

namespace infoplan {

namespace {

constexpr std::size_t kMaxCells = 200'000'000;

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::optional<double> parse_real(std::string_view text) {
    const std::string s(trim(text));
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

/// Round to 12 significant digits so that spacing inferred from serialized
/// coordinates reproduces the spacing they were written with.
double snap_spacing(double d) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", d);
    return std::strtod(buf, nullptr);
}

struct Row {
    double lat, lon, value;
    std::size_t line;
};

double min_positive_gap(const std::vector<double>& sorted_unique) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < sorted_unique.size(); ++i)
        best = std::min(best, sorted_unique[i] - sorted_unique[i - 1]);
    return best;
}

}  // namespace

void GridData::validate() const {
    if (!(dlat > 0.0) || !(dlon > 0.0)) throw InvalidInput("grid spacing must be positive");
    if (rows == 0 || cols == 0) throw InvalidInput("grid is empty");
    if (values.size() != rows * cols) throw InvalidInput("grid value count does not match its shape");
    if (std::all_of(values.begin(), values.end(), [](double v) { return std::isnan(v); }))
        throw InvalidInput("grid has no non-missing cells");
}

double GridData::sample_mean() const {
    double sum = 0.0;
    std::size_t n = 0;
    for (double v : values)
        if (!std::isnan(v)) {
            sum += v;
            ++n;
        }
    return n ? sum / static_cast<double>(n) : 0.0;
}

bool operator==(const GridData& a, const GridData& b) {
    if (a.lat0 != b.lat0 || a.lon0 != b.lon0 || a.dlat != b.dlat || a.dlon != b.dlon ||
        a.rows != b.rows || a.cols != b.cols || a.values.size() != b.values.size())
        return false;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const bool ma = std::isnan(a.values[i]);
        const bool mb = std::isnan(b.values[i]);
        if (ma != mb || (!ma && a.values[i] != b.values[i])) return false;
    }
    return true;
}

GridData parse_grid_csv(std::istream& in, const std::string& source) {
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    std::vector<Row> rows;

    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view t = trim(line);
        if (t.empty()) continue;
        if (!have_header) {
            std::string h;
            for (char c : t)
                if (c != ' ' && c != '\t') h.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
            if (h != "lat,lon,value") throw DataError(source, lineno, "expected header 'lat,lon,value'");
            have_header = true;
            continue;
        }
        const auto c1 = t.find(',');
        const auto c2 = c1 == std::string_view::npos ? c1 : t.find(',', c1 + 1);
        if (c2 == std::string_view::npos || t.find(',', c2 + 1) != std::string_view::npos)
            throw DataError(source, lineno, "expected 3 comma-separated fields");
        const auto lat = parse_real(t.substr(0, c1));
        const auto lon = parse_real(t.substr(c1 + 1, c2 - c1 - 1));
        if (!lat || !lon) throw DataError(source, lineno, "coordinates must be finite numbers");
        const std::string_view vtext = trim(t.substr(c2 + 1));
        double value = std::numeric_limits<double>::quiet_NaN();
        if (!vtext.empty() && vtext != "NA") {
            const auto v = parse_real(vtext);
            if (!v) throw DataError(source, lineno, "value must be a finite number or NA");
            value = *v;
        }
        rows.push_back({*lat, *lon, value, lineno});
    }
    if (!have_header) throw DataError(source, lineno, "missing header 'lat,lon,value'");
    if (rows.empty()) throw DataError(source, lineno, "no data rows");

    std::vector<double> lats, lons;
    for (const auto& r : rows) {
        lats.push_back(r.lat);
        lons.push_back(r.lon);
    }
    std::sort(lats.begin(), lats.end());
    lats.erase(std::unique(lats.begin(), lats.end()), lats.end());
    std::sort(lons.begin(), lons.end());
    lons.erase(std::unique(lons.begin(), lons.end()), lons.end());

    double dlat = min_positive_gap(lats);
    double dlon = min_positive_gap(lons);
    // A lone cell has no spacing to infer; give it a unit cell.
    if (!std::isfinite(dlat) && !std::isfinite(dlon)) dlat = dlon = 1.0;
    if (!std::isfinite(dlat)) dlat = dlon;
    if (!std::isfinite(dlon)) dlon = dlat;

    GridData g;
    g.lat0 = lats.front();
    g.lon0 = lons.front();
    g.dlat = snap_spacing(dlat);
    g.dlon = snap_spacing(dlon);

    auto index_of = [](double v, double origin, double step, std::size_t line, const std::string& src,
                       const char* axis) {
        const double r = (v - origin) / step;
        const double k = std::round(r);
        if (std::abs(r - k) > 1e-6)
            throw DataError(src, line, std::string("non-uniform ") + axis + " spacing");
        return static_cast<std::size_t>(k);
    };

    const double nr = std::round((lats.back() - g.lat0) / g.dlat) + 1.0;
    const double nc = std::round((lons.back() - g.lon0) / g.dlon) + 1.0;
    if (nr * nc > static_cast<double>(kMaxCells)) throw DataError(source, 0, "grid is too large");
    g.rows = static_cast<std::size_t>(nr);
    g.cols = static_cast<std::size_t>(nc);
    g.values.assign(g.rows * g.cols, std::numeric_limits<double>::quiet_NaN());

    std::vector<bool> seen(g.values.size(), false);
    for (const auto& r : rows) {
        const std::size_t i = index_of(r.lat, g.lat0, g.dlat, r.line, source, "latitude");
        const std::size_t j = index_of(r.lon, g.lon0, g.dlon, r.line, source, "longitude");
        const std::size_t k = i * g.cols + j;
        if (seen[k]) throw DataError(source, r.line, "duplicate cell");
        seen[k] = true;
        g.values[k] = r.value;
    }
    try {
        g.validate();
    } catch (const InvalidInput& e) {
        throw DataError(source, 0, e.what());
    }
    return g;
}

GridData read_grid_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError(path.string(), 0, "cannot open file");
    return parse_grid_csv(in, path.string());
}

void write_grid_csv(std::ostream& out, const GridData& g) {
    out << "lat,lon,value\n";
    char buf[128];
    for (std::size_t r = 0; r < g.rows; ++r) {
        for (std::size_t c = 0; c < g.cols; ++c) {
            const Location p = g.center(r, c);
            if (g.missing(r, c)) {
                std::snprintf(buf, sizeof buf, "%.17g,%.17g,NA\n", p.y, p.x);
            } else {
                std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", p.y, p.x, g.at(r, c));
            }
            out << buf;
        }
    }
}

}  // namespace infoplan
