#include <cstdio>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "vdba/experiment.hpp"
#include "vdba/instrumentation.hpp"

namespace vdba {

namespace {

// One chart per (load, scheduler): compliance over sla_share, one polyline
// per (burst class, SLA type). Plain SVG text, no plotting dependency.

constexpr int kWidth = 640;
constexpr int kHeight = 420;
constexpr int kLeft = 60;
constexpr int kRight = 160;
constexpr int kTop = 40;
constexpr int kBottom = 50;

const char* series_color(BurstClass burst) {
    switch (burst) {
        case BurstClass::Small: return "#1f77b4";
        case BurstClass::Medium: return "#ff7f0e";
        case BurstClass::Large: return "#2ca02c";
    }
    return "#000000";
}

double x_pos(double share) {
    return kLeft + share * (kWidth - kLeft - kRight);
}

double y_pos(double compliance) {
    return kTop + (1.0 - compliance) * (kHeight - kTop - kBottom);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", v);
    return buf;
}

} // namespace

std::string write_compliance_svgs(const std::string& dir,
                                  const std::vector<JobResult>& results,
                                  std::vector<std::string>& paths) {
    note_untimed_work();
    // (load, scheduler) -> (burst, type) -> share -> compliance
    std::map<std::pair<double, std::string>,
             std::map<std::pair<BurstClass, SlaId>, std::map<double, double>>>
        charts;
    for (const JobResult& r : results) {
        if (r.failed) {
            continue;
        }
        const ScenarioConfig& sc = r.sweep.scenario;
        auto& chart = charts[{sc.load_fraction, r.sweep.scheduler}];
        chart[{sc.burst_class, SlaId::Type1}][sc.sla_share] = r.sweep.type1.compliance();
        chart[{sc.burst_class, SlaId::Type2}][sc.sla_share] = r.sweep.type2.compliance();
    }

    for (const auto& [key, series] : charts) {
        const auto& [load, scheduler] = key;
        char name[128];
        std::snprintf(name, sizeof(name), "%s/compliance_load%02d_%s.svg", dir.c_str(),
                      static_cast<int>(load * 100.0 + 0.5), scheduler.c_str());
        std::ofstream out(name);
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
            << "\" height=\"" << kHeight << "\">\n";
        out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
            << "font-family=\"sans-serif\" font-size=\"15\">" << scheduler
            << " compliance, load " << fmt(load * 100.0) << "%</text>\n";

        // Axes and grid.
        out << "<line x1=\"" << kLeft << "\" y1=\"" << y_pos(0.0) << "\" x2=\""
            << kWidth - kRight << "\" y2=\"" << y_pos(0.0)
            << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
        out << "<line x1=\"" << kLeft << "\" y1=\"" << y_pos(0.0) << "\" x2=\"" << kLeft
            << "\" y2=\"" << kTop << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
        for (int pct = 0; pct <= 100; pct += 25) {
            const double y = y_pos(pct / 100.0);
            out << "<line x1=\"" << kLeft << "\" y1=\"" << y << "\" x2=\"" << kWidth - kRight
                << "\" y2=\"" << y << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
            out << "<text x=\"" << kLeft - 8 << "\" y=\"" << y + 4
                << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << pct
                << "%</text>\n";
        }
        for (int share10 = 0; share10 <= 10; share10 += 2) {
            const double x = x_pos(share10 / 10.0);
            out << "<text x=\"" << x << "\" y=\"" << kHeight - kBottom + 24
                << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
                << share10 * 10 << "%</text>\n";
        }
        out << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 10
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
            << "share of load that is SLA-bound</text>\n";

        int legend_row = 0;
        for (const auto& [series_key, points] : series) {
            const auto& [burst, type] = series_key;
            const char* color = series_color(burst);
            const char* dash = (type == SlaId::Type1) ? "" : " stroke-dasharray=\"6,4\"";
            out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\""
                << dash << " points=\"";
            for (const auto& [share, compliance] : points) {
                out << fmt(x_pos(share)) << ',' << fmt(y_pos(compliance)) << ' ';
            }
            out << "\"/>\n";
            for (const auto& [share, compliance] : points) {
                out << "<circle cx=\"" << fmt(x_pos(share)) << "\" cy=\""
                    << fmt(y_pos(compliance)) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
            }
            const double ly = kTop + 14 + legend_row * 18;
            out << "<line x1=\"" << kWidth - kRight + 12 << "\" y1=\"" << ly - 4 << "\" x2=\""
                << kWidth - kRight + 40 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color
                << "\" stroke-width=\"2\"" << dash << "/>\n";
            out << "<text x=\"" << kWidth - kRight + 46 << "\" y=\"" << ly
                << "\" font-family=\"sans-serif\" font-size=\"11\">" << to_string(burst) << " "
                << to_string(type) << "</text>\n";
            ++legend_row;
        }
        out << "</svg>\n";
        paths.emplace_back(name);
    }
    return "";
}

} // namespace vdba
