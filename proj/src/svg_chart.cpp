#include "chatdom/svg_chart.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace chatdom {

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

std::string render_share_chart(const DominanceReport& report, const ShareChartOptions& options) {
    /*
       Layout (SVG origin top-left, y grows down):
         left margin holds the percentage axis, bottom margin the group
         labels, one slot per participant plus a gap between groups.
    */
    const double left = 60, right = 20, top = 40, bottom = 60;
    const double plot_w = options.width - left - right;
    const double plot_h = options.height - top - bottom;

    double y_max = report.threshold;
    for (const auto& p : report.participants) y_max = std::max(y_max, p.share);
    y_max = std::max(0.1, std::ceil(y_max * 10.0) / 10.0);

    std::size_t groups = 0;
    for (std::size_t k = 0; k < report.participants.size(); ++k)
        if (k == 0 || report.participants[k].group_id != report.participants[k - 1].group_id) ++groups;
    const double slots = static_cast<double>(report.participants.size() + (groups ? groups - 1 : 0));
    const double slot_w = slots > 0 ? plot_w / slots : plot_w;
    auto y_of = [&](double v) { return top + plot_h * (1.0 - v / y_max); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width << "\" height=\""
        << options.height << "\" viewBox=\"0 0 " << options.width << ' ' << options.height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << px(options.width / 2.0) << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"14\">" << xml_escape(options.title) << "</text>\n";

    for (int tick = 0; tick <= 10; ++tick) {
        const double v = y_max * tick / 10.0;
        const double y = y_of(v);
        svg << "<line x1=\"" << px(left) << "\" y1=\"" << px(y) << "\" x2=\"" << px(left + plot_w) << "\" y2=\""
            << px(y) << "\" stroke=\"#e0e0e0\"/>\n";
        svg << "<text x=\"" << px(left - 6) << "\" y=\"" << px(y + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << px(v * 100.0)
            << "%</text>\n";
    }
    svg << "<line x1=\"" << px(left) << "\" y1=\"" << px(top) << "\" x2=\"" << px(left) << "\" y2=\""
        << px(top + plot_h) << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << px(left) << "\" y1=\"" << px(top + plot_h) << "\" x2=\"" << px(left + plot_w)
        << "\" y2=\"" << px(top + plot_h) << "\" stroke=\"black\"/>\n";

    double slot = 0;
    std::size_t group_start = 0;
    for (std::size_t k = 0; k < report.participants.size(); ++k) {
        const auto& p = report.participants[k];
        if (k > 0 && p.group_id != report.participants[k - 1].group_id) slot += 1;
        const double x = left + slot * slot_w + slot_w * 0.1;
        const double y = y_of(p.share);
        svg << "<rect x=\"" << px(x) << "\" y=\"" << px(y) << "\" width=\"" << px(slot_w * 0.8) << "\" height=\""
            << px(top + plot_h - y) << "\" fill=\"" << (p.dominant ? "#c0392b" : "#4a78b5") << "\">"
            << "<title>" << xml_escape(p.group_id + " / " + p.participant_id) << ": " << px(p.share * 100.0)
            << "%</title></rect>\n";
        slot += 1;

        const bool group_ends = k + 1 == report.participants.size() ||
                                report.participants[k + 1].group_id != p.group_id;
        if (group_ends) {
            const std::size_t members = k + 1 - group_start;
            const double mid = left + (slot - members / 2.0) * slot_w;
            svg << "<text x=\"" << px(mid) << "\" y=\"" << px(top + plot_h + 18)
                << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << xml_escape(p.group_id)
                << "</text>\n";
            group_start = k + 1;
        }
    }

    const double ty = y_of(report.threshold);
    svg << "<line x1=\"" << px(left) << "\" y1=\"" << px(ty) << "\" x2=\"" << px(left + plot_w) << "\" y2=\""
        << px(ty) << "\" stroke=\"#222\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\"/>\n";
    svg << "<text x=\"" << px(left + plot_w) << "\" y=\"" << px(ty - 5)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">threshold " << px(report.threshold * 100.0)
        << "%</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace chatdom
