// SPDX-License-Identifier: Apache-2.0
//
// secia: secure interference alignment by rank minimization
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "experiment.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace secia {

/// 12 significant digits, C locale.
inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string csv_header(int K) {
    std::string h = "algorithm,trial,snr_db,ssr";
    for (int k = 1; k <= K; ++k)
        h += ",rate_user_" + std::to_string(k);
    for (int k = 1; k <= K; ++k)
        h += ",leak_user_" + std::to_string(k);
    return h + ",interf_power,wiretap_power,wall_ms";
}

/// Writes records sorted by (algorithm, snr_db, trial) with LF endings.
inline void emit_csv(std::vector<TrialRecord> records, const std::string &path) {
    if (records.empty())
        throw std::invalid_argument("emit_csv: no records");
    std::sort(records.begin(), records.end(), record_less);
    const std::size_t K = records.front().rates.size();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw io_error("cannot write " + path);
    out << csv_header(static_cast<int>(K)) << '\n';
    for (const auto &r : records) {
        if (r.rates.size() != K || r.leakages.size() != K)
            throw std::invalid_argument("emit_csv: inconsistent user count");
        out << r.algorithm << ',' << r.trial << ',' << format_number(r.snr_db) << ',' << format_number(r.ssr);
        for (double v : r.rates)
            out << ',' << format_number(v);
        for (double v : r.leakages)
            out << ',' << format_number(v);
        out << ',' << format_number(r.interference_power) << ',' << format_number(r.wiretap_power) << ','
            << format_number(r.wall_ms) << '\n';
    }
    if (!out.flush())
        throw io_error("write failed on " + path);
}

/// Parses a file written by emit_csv. Objective summaries are not in the CSV and stay zero.
inline std::vector<TrialRecord> read_csv(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw io_error("cannot read " + path);
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error(path + ": empty file");
    std::vector<std::string> cols = detail::split_list(line);
    auto idx = [&](const std::string &name) {
        const auto it = std::find(cols.begin(), cols.end(), name);
        if (it == cols.end())
            throw std::runtime_error(path + ": missing column " + name);
        return static_cast<std::size_t>(it - cols.begin());
    };
    const std::size_t ia = idx("algorithm"), it = idx("trial"), is = idx("snr_db"), iq = idx("ssr");
    std::vector<std::size_t> irate, ileak;
    for (int k = 1;; ++k) {
        const auto r = std::find(cols.begin(), cols.end(), "rate_user_" + std::to_string(k));
        if (r == cols.end())
            break;
        irate.push_back(r - cols.begin());
        ileak.push_back(idx("leak_user_" + std::to_string(k)));
    }
    const std::size_t ii = idx("interf_power"), iw = idx("wiretap_power"), im = idx("wall_ms");
    std::vector<TrialRecord> out;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            f.push_back(cell);
        if (f.size() != cols.size())
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected " +
                                     std::to_string(cols.size()) + " fields");
        auto num = [&](std::size_t i) { return detail::parse_number<double>(cols[i], f[i]); };
        TrialRecord r;
        r.algorithm = f[ia];
        r.trial = detail::parse_number<int>("trial", f[it]);
        r.snr_db = num(is);
        r.ssr = num(iq);
        for (std::size_t k = 0; k < irate.size(); ++k) {
            r.rates.push_back(num(irate[k]));
            r.leakages.push_back(num(ileak[k]));
        }
        r.interference_power = num(ii);
        r.wiretap_power = num(iw);
        r.wall_ms = num(im);
        out.push_back(std::move(r));
    }
    return out;
}

inline void emit_summary_csv(const std::vector<SummaryRow> &rows, const std::string &path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw io_error("cannot write " + path);
    out << "algorithm,snr_db,mean_ssr,std_error,count,failed\n";
    for (const auto &r : rows)
        out << r.algorithm << ',' << format_number(r.snr_db) << ',' << format_number(r.mean_ssr) << ','
            << format_number(r.std_error) << ',' << r.count << ',' << r.failed << '\n';
    if (!out.flush())
        throw io_error("write failed on " + path);
}

/// Reads externally produced curves: algorithm,snr_db,mean_ssr[,std_error].
inline std::vector<SummaryRow> read_summary_csv(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw io_error("cannot read " + path);
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error(path + ": empty file");
    const auto cols = detail::split_list(line);
    auto find = [&](const std::string &n) -> long {
        const auto it = std::find(cols.begin(), cols.end(), n);
        return it == cols.end() ? -1 : static_cast<long>(it - cols.begin());
    };
    const long ia = find("algorithm"), is = find("snr_db"), im = find("mean_ssr"), ie = find("std_error");
    if (ia < 0 || is < 0 || im < 0)
        throw std::runtime_error(path + ": need columns algorithm,snr_db,mean_ssr");
    std::vector<SummaryRow> out;
    while (std::getline(in, line)) {
        if (detail::trim(line).empty())
            continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            f.push_back(detail::trim(cell));
        if (f.size() < cols.size())
            throw std::runtime_error(path + ": short row '" + line + "'");
        SummaryRow r;
        r.algorithm = f[ia];
        r.snr_db = detail::parse_number<double>("snr_db", f[is]);
        r.mean_ssr = detail::parse_number<double>("mean_ssr", f[im]);
        r.std_error = ie >= 0 ? detail::parse_number<double>("std_error", f[ie]) : 0.0;
        out.push_back(r);
    }
    return out;
}

inline void emit_metadata(const ExperimentSpec &spec, const ExperimentResult &res, const std::string &path) {
    nlohmann::ordered_json j;
    j["system"] = spec.config.label();
    j["optimization_mode"] = spec.reoptimize_per_snr ? "per_snr" : "single_reference";
    j["reference_snr_db"] = spec.reoptimize_per_snr ? nlohmann::ordered_json() : nlohmann::ordered_json(spec.reference_snr_db());
    j["snr_grid_db"] = spec.snr_grid_db;
    j["trials"] = spec.trials;
    j["master_seed"] = spec.master_seed;
    j["fingerprint"] = detail::spec_fingerprint(spec);
    j["conventional_label"] = "minimum-interference-leakage alternating IA";
    j["records"] = res.records.size();
    j["resumed_units"] = res.resumed_units;
    j["failures"] = nlohmann::ordered_json::array();
    for (const auto &f : res.failures)
        j["failures"].push_back({{"algorithm", f.algorithm}, {"trial", f.trial}, {"error", f.message}});
    j["spec"] = render_spec(spec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw io_error("cannot write " + path);
    out << j.dump(2) << '\n';
    if (!out.flush())
        throw io_error("write failed on " + path);
}

/// Data-space rectangle of a plot: data extent padded by 5% per side.
struct PlotFrame {
    double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
};

inline PlotFrame plot_frame(const std::vector<SummaryRow> &rows) {
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto &r : rows) {
        if (!std::isfinite(r.mean_ssr))
            continue;
        x0 = std::min(x0, r.snr_db);
        x1 = std::max(x1, r.snr_db);
        y0 = std::min(y0, r.mean_ssr - r.std_error);
        y1 = std::max(y1, r.mean_ssr + r.std_error);
    }
    if (!std::isfinite(x0))
        throw std::invalid_argument("plot: no finite data");
    auto pad = [](double &lo, double &hi) {
        double span = hi - lo;
        if (span <= 0.0)
            span = std::max(1.0, std::abs(lo));
        lo -= 0.05 * span;
        hi += 0.05 * span;
    };
    pad(x0, x1);
    pad(y0, y1);
    return {x0, x1, y0, y1};
}

namespace detail {

inline std::string xml_escape(const std::string &s) {
    std::string o;
    for (char c : s) {
        switch (c) {
        case '&': o += "&amp;"; break;
        case '<': o += "&lt;"; break;
        case '>': o += "&gt;"; break;
        case '"': o += "&quot;"; break;
        default: o += c;
        }
    }
    return o;
}

inline std::vector<double> nice_ticks(double lo, double hi) {
    const double raw = (hi - lo) / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (m * mag >= raw) {
            step = m * mag;
            break;
        }
    std::vector<double> t;
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step)
        t.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
    return t;
}

} // namespace detail

/// SVG geometry; the plot area is [left, left+width] x [top, top+height].
struct PlotLayout {
    double width = 720, height = 480, left = 70, right = 170, top = 30, bottom = 55;
    double plot_w() const { return width - left - right; }
    double plot_h() const { return height - top - bottom; }
};

/// One polyline per algorithm with standard-error bars. Rows sharing an
/// algorithm name form one curve, ordered by SNR.
inline std::string render_plot(const std::vector<SummaryRow> &rows, const std::string &title = "") {
    if (rows.empty())
        throw std::invalid_argument("emit_plot: empty summary");
    const PlotFrame f = plot_frame(rows);
    const PlotLayout L;
    auto px = [&](double x) { return L.left + (x - f.x_min) / (f.x_max - f.x_min) * L.plot_w(); };
    auto py = [&](double y) { return L.top + (f.y_max - y) / (f.y_max - f.y_min) * L.plot_h(); };
    auto n = [](double v) {
        char b[32];
        std::snprintf(b, sizeof b, "%.3f", v);
        return std::string(b);
    };
    std::map<std::string, std::vector<SummaryRow>> curves;
    std::vector<std::string> order;
    for (const auto &r : rows) {
        if (!curves.count(r.algorithm))
            order.push_back(r.algorithm);
        if (std::isfinite(r.mean_ssr))
            curves[r.algorithm].push_back(r);
        else
            curves[r.algorithm];
    }
    static const char *palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

    std::ostringstream s;
    s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << L.width << "\" height=\"" << L.height
      << "\" viewBox=\"0 0 " << L.width << ' ' << L.height << "\" data-x-min=\"" << format_number(f.x_min)
      << "\" data-x-max=\"" << format_number(f.x_max) << "\" data-y-min=\"" << format_number(f.y_min)
      << "\" data-y-max=\"" << format_number(f.y_max) << "\" data-plot-left=\"" << L.left << "\" data-plot-top=\""
      << L.top << "\" data-plot-width=\"" << L.plot_w() << "\" data-plot-height=\"" << L.plot_h() << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << L.width << "\" height=\"" << L.height << "\" fill=\"white\"/>\n"
      << "<rect class=\"frame\" x=\"" << L.left << "\" y=\"" << L.top << "\" width=\"" << L.plot_w()
      << "\" height=\"" << L.plot_h() << "\" fill=\"none\" stroke=\"black\"/>\n";
    s << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    for (double t : detail::nice_ticks(f.x_min, f.x_max)) {
        const double x = px(t);
        s << "<line x1=\"" << n(x) << "\" y1=\"" << n(L.top + L.plot_h()) << "\" x2=\"" << n(x) << "\" y2=\""
          << n(L.top + L.plot_h() + 5) << "\" stroke=\"black\"/><text x=\"" << n(x) << "\" y=\""
          << n(L.top + L.plot_h() + 18) << "\" text-anchor=\"middle\">" << format_number(t) << "</text>\n";
    }
    for (double t : detail::nice_ticks(f.y_min, f.y_max)) {
        const double y = py(t);
        s << "<line x1=\"" << n(L.left - 5) << "\" y1=\"" << n(y) << "\" x2=\"" << n(L.left) << "\" y2=\"" << n(y)
          << "\" stroke=\"black\"/><text x=\"" << n(L.left - 8) << "\" y=\"" << n(y + 4)
          << "\" text-anchor=\"end\">" << format_number(t) << "</text>\n";
    }
    s << "<text x=\"" << n(L.left + L.plot_w() / 2) << "\" y=\"" << n(L.height - 12)
      << "\" text-anchor=\"middle\">SNR (dB)</text>\n"
      << "<text transform=\"translate(18," << n(L.top + L.plot_h() / 2)
      << ") rotate(-90)\" text-anchor=\"middle\">Average SSR (bits/s/Hz)</text>\n";
    if (!title.empty())
        s << "<text x=\"" << n(L.left + L.plot_w() / 2) << "\" y=\"18\" text-anchor=\"middle\">"
          << detail::xml_escape(title) << "</text>\n";
    s << "</g>\n";

    for (std::size_t c = 0; c < order.size(); ++c) {
        auto pts = curves[order[c]];
        std::sort(pts.begin(), pts.end(), [](const auto &a, const auto &b) { return a.snr_db < b.snr_db; });
        const char *color = palette[c % (sizeof palette / sizeof *palette)];
        s << "<g class=\"series\" data-algorithm=\"" << detail::xml_escape(order[c]) << "\">\n";
        s << "<polyline class=\"curve\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i)
            s << (i ? " " : "") << n(px(pts[i].snr_db)) << ',' << n(py(pts[i].mean_ssr));
        s << "\"/>\n";
        for (const auto &p : pts) {
            const double x = px(p.snr_db);
            s << "<circle cx=\"" << n(x) << "\" cy=\"" << n(py(p.mean_ssr)) << "\" r=\"2.5\" fill=\"" << color
              << "\"/>\n";
            if (p.std_error > 0.0)
                s << "<line class=\"errorbar\" x1=\"" << n(x) << "\" y1=\"" << n(py(p.mean_ssr - p.std_error))
                  << "\" x2=\"" << n(x) << "\" y2=\"" << n(py(p.mean_ssr + p.std_error)) << "\" stroke=\""
                  << color << "\"/>\n";
        }
        const double ly = L.top + 14 + 18 * static_cast<double>(c);
        const double lx = L.left + L.plot_w() + 12;
        s << "<line x1=\"" << n(lx) << "\" y1=\"" << n(ly) << "\" x2=\"" << n(lx + 22) << "\" y2=\"" << n(ly)
          << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"/><text x=\"" << n(lx + 28) << "\" y=\""
          << n(ly + 4) << "\" font-family=\"sans-serif\" font-size=\"11\">" << detail::xml_escape(order[c])
          << "</text>\n</g>\n";
    }
    s << "</svg>\n";
    return s.str();
}

inline void emit_plot(const std::vector<SummaryRow> &rows, const std::string &path, const std::string &title = "") {
    const std::string svg = render_plot(rows, title);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw io_error("cannot write " + path);
    out << svg;
    if (!out.flush())
        throw io_error("write failed on " + path);
}

/// Writes records.csv, summary.csv, failures.csv, metadata.json and ssr.svg.
inline void emit_all(const ExperimentSpec &spec, const ExperimentResult &res) {
    namespace fs = std::filesystem;
    const fs::path dir(spec.output_dir);
    if (!res.records.empty())
        emit_csv(res.records, (dir / "records.csv").string());
    emit_summary_csv(res.summary, (dir / "summary.csv").string());
    {
        std::ofstream out(dir / "failures.csv", std::ios::binary | std::ios::trunc);
        if (!out)
            throw io_error("cannot write failures.csv");
        out << "algorithm,trial,error\n";
        for (const auto &f : res.failures) {
            std::string m = f.message;
            std::replace(m.begin(), m.end(), '\n', ' ');
            std::replace(m.begin(), m.end(), '"', '\'');
            out << f.algorithm << ',' << f.trial << ",\"" << m << "\"\n";
        }
    }
    emit_metadata(spec, res, (dir / "metadata.json").string());
    bool any = false;
    for (const auto &r : res.summary)
        any = any || std::isfinite(r.mean_ssr);
    if (any)
        emit_plot(res.summary, (dir / "ssr.svg").string(), spec.config.label());
}

} // namespace secia
