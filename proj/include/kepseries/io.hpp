#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "kepseries/asymptotics.hpp"
#include "kepseries/errors.hpp"
#include "kepseries/fourier.hpp"
#include "kepseries/histmath.hpp"
#include "kepseries/perturb.hpp"
#include "kepseries/wkb.hpp"

namespace kepseries::io {

enum class Format { table, csv, json };

struct OutputSpec {
    Format format = Format::table;
    std::string path;  // empty: standard output
    int precision = 12;

    void validate() const { detail::require(precision >= 1 && precision <= 17, "precision must lie in [1, 17]"); }
};

/// Fixed notation with `precision` significant digits, or scientific when
/// |v| >= 1e6 or 0 < |v| < 1e-6. Trailing zeros are dropped.
inline std::string format_number(double v, int precision = 12) {
    detail::require(precision >= 1 && precision <= 17, "precision must lie in [1, 17]");
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    const double a = std::abs(v);
    char buf[64];
    if (a >= 1e6 || a < 1e-6) {
        std::snprintf(buf, sizeof buf, "%.*e", precision - 1, v);
        std::string s = buf;
        const auto e = s.find('e');
        std::string mant = s.substr(0, e);
        if (mant.find('.') != std::string::npos) {
            while (mant.back() == '0') mant.pop_back();
            if (mant.back() == '.') mant.pop_back();
        }
        return mant + s.substr(e);
    }
    const int exponent = static_cast<int>(std::floor(std::log10(a)));
    const int decimals = std::max(0, precision - 1 - exponent);
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    std::string s = buf;
    if (s.find('.') != std::string::npos) {
        while (s.back() == '0') s.pop_back();
        if (s.back() == '.') s.pop_back();
    }
    if (s == "-0") s = "0";
    return s;
}

using Cell = std::variant<double, long long, std::string>;

/// A header plus rows of cells, rendered as CSV, an aligned text table or
/// a JSON array of objects.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row) {
        detail::require(row.size() == header.size(), "Table: row width does not match header");
        rows.push_back(std::move(row));
    }
};

inline std::string render_cell(const Cell& c, int precision) {
    if (const auto* d = std::get_if<double>(&c)) return format_number(*d, precision);
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    return std::get<std::string>(c);
}

inline void write_csv(std::ostream& os, const Table& t, int precision = 12) {
    for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << render_cell(row[i], precision);
        os << '\n';
    }
}

inline void write_text_table(std::ostream& os, const Table& t, int precision = 12) {
    std::vector<std::vector<std::string>> cells;
    std::vector<std::size_t> width(t.header.size());
    for (std::size_t i = 0; i < t.header.size(); ++i) width[i] = t.header[i].size();
    for (const auto& row : t.rows) {
        auto& out = cells.emplace_back();
        for (std::size_t i = 0; i < row.size(); ++i) {
            out.push_back(render_cell(row[i], precision));
            width[i] = std::max(width[i], out.back().size());
        }
    }
    const auto line = [&](const std::vector<std::string>& r) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) os << "  ";
            os << std::string(width[i] - r[i].size(), ' ') << r[i];
        }
        os << '\n';
    };
    line(t.header);
    for (const auto& r : cells) line(r);
}

inline nlohmann::ordered_json to_json(const Table& t) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json obj;
        for (std::size_t i = 0; i < row.size(); ++i)
            std::visit([&](const auto& v) { obj[t.header[i]] = v; }, row[i]);
        arr.push_back(std::move(obj));
    }
    return arr;
}

inline void write(std::ostream& os, const Table& t, const OutputSpec& spec) {
    spec.validate();
    switch (spec.format) {
        case Format::csv: write_csv(os, t, spec.precision); break;
        case Format::table: write_text_table(os, t, spec.precision); break;
        case Format::json: os << to_json(t).dump(2) << '\n'; break;
    }
}

inline Table coefficient_table(const CoefficientTable& ct) {
    Table t{{"family", "c", "index", "value", "source"}, {}};
    for (int k = ct.first_index(); k <= ct.max_index(); ++k)
        t.add_row({std::string(to_string(ct.family())), ct.eccentricity(), static_cast<long long>(k), ct.at(k),
                   std::string(to_string(ct.source()))});
    return t;
}

inline Table asymptotic_table(const std::vector<AsymptoticSweepRow>& rows) {
    Table t{{"p", "exact", "asymptotic", "relative_error"}, {}};
    for (const auto& r : rows) t.add_row({static_cast<long long>(r.p), r.exact, r.asymptotic, r.relative_error});
    return t;
}

inline Table wkb_table(const std::vector<WkbSweepRow>& rows) {
    Table t{{"p", "x", "series", "ode", "wkb", "rel_error"}, {}};
    for (const auto& r : rows)
        t.add_row({r.p, r.x, r.series.value(), r.ode.value(), r.wkb.value(), r.rel_error});
    return t;
}

inline Table order_scaling_table(const OrderScalingReport& rep) {
    Table t{{"alpha", "N", "sup_error"}, {}};
    for (const auto& r : rep.rows) t.add_row({r.alpha, static_cast<long long>(r.order), r.sup_error});
    return t;
}

inline Table branch_root_table(const std::vector<BranchRoot>& roots) {
    Table t{{"re", "im", "k", "residual", "alpha"}, {}};
    for (const auto& r : roots)
        t.add_row({r.x.real(), r.x.imag(), static_cast<long long>(r.branch_index), r.residual, r.alpha});
    return t;
}

}  // namespace kepseries::io
