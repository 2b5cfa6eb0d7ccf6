#pragma once

#include <string>
#include <vector>

#include "core/od.hpp"

namespace samplan::fixtures {

// 20x20 regional interchange matrix for a greater-Toronto-and-beyond study
// area, with printed row/column margins. Cells under the publication
// threshold are suppressed ("." or blank in the CSV form).
const std::string& figure1_csv();

struct Figure1 {
    od::ODMatrix matrix;               // suppressed cells flagged, value 0
    std::vector<double> row_totals;    // printed margins, incl. suppressed mass
    std::vector<double> col_totals;
    double grand_total = 0.0;
};

const Figure1& figure1();

}  // namespace samplan::fixtures
