#pragma once

#include <string>

#include "chatdom/dominance.hpp"

namespace chatdom {

struct ShareChartOptions {
    int width = 900;
    int height = 420;
    std::string title = "Share of group ED comments (threshold = mean + 1 SD)";
};

// Bar chart of participant shares, grouped by group, with a horizontal
// threshold line. Dominant participants are drawn in a contrasting colour.
std::string render_share_chart(const DominanceReport& report, const ShareChartOptions& options = {});

}  // namespace chatdom
