#include "core/fixture_figure1.hpp"

#include "core/csv.hpp"
#include "core/errors.hpp"

namespace samplan::fixtures {

const std::string& figure1_csv() {
    static const std::string csv =
        R"(from_region,City of Toronto,Region of Durham,Region of York,Region of Peel,Region of Halton,City of Hamilton,Region of Niagara,Region of Waterloo,City of Guelph,County of Wellington,Town of Orangeville,City of Barrie,County of Simcoe,City of Kawartha Lakes,City of Peterborough,County of Peterborough,City of Orillia,County of Dufferin,City of Brantford,County of Brant,region_total
City of Toronto,510000,7300,62600,47900,5000,900,400,600,200,.,.,300,400,.,100,.,.,.,100,.,635800
Region of Durham,51800,72800,15900,3200,300,100,.,200,100,,,,,400,800,100,,,,,145700
Region of York,123600,4300,127800,20500,1600,300,100,400,100,.,.,700,1800,100,100,.,100,.,.,.,281500
Region of Peel,92600,700,18200,188600,15900,1400,500,1200,600,200,600,100,700,.,.,.,100,200,100,.,321700
Region of Halton,28000,200,2800,37700,52300,7900,800,2000,700,400,.,100,100,,,,,,200,100,133300
City of Hamilton,4600,100,600,6100,21000,72700,2600,2000,,,,500,,,,,,,1600,400,112200
Region of Niagara,1300,100,100,1000,3800,6300,75900,,100,,100,,100,.,,,,,,,88800
Region of Waterloo,1300,100,200,3100,1800,1200,100,104400,7600,1300,.,.,100,,,,,,800,400,122400
City of Guelph,800,.,200,1400,1500,400,100,3400,21000,1700,,,,,,,100,,,,30600
County of Wellington,400,.,200,1900,1100,100,.,2100,4200,3600,300,,,,,,,,,,13900
Town of Orangeville,400,.,400,3400,200,.,.,.,100,100,2100,.,100,,,,,600,.,.,7400
City of Barrie,1600,100,2800,1000,100,,,,,100,.,17500,5400,.,.,.,600,.,.,.,29200
County of Simcoe,4000,400,8300,3000,200,100,.,100,.,100,300,10500,29300,.,.,.,3600,300,.,.,60200
City of Kawartha Lakes,300,2600,500,100,,,,100,,,,,200,8600,1500,300,,,100,.,14300
City of Peterborough,100,700,,,,,,,,,,,,500,12400,2100,,,,,15800
County of Peterborough,100,500,,,,,,,,,,,,400,5700,2000,,,,,8700
City of Orillia,.,.,100,,,,,,500,,,,1200,.,.,.,3400,.,.,.,5200
County of Dufferin,300,.,200,2000,200,.,.,100,100,200,1400,.,400,,,,,1700,.,.,6600
City of Brantford,200,.,100,300,600,2100,100,1200,200,,,,,,,,,,1200,2400,8400
County of Brant,100,.,.,100,300,900,.,1700,,,,100,,,,,,,2800,2400,8400
region_total,821500,89900,241000,321300,105900,94400,80600,119500,35500,7700,4800,29800,39800,10000,20600,4500,7900,2800,6900,5700,2050100
)";
    return csv;
}

const Figure1& figure1() {
    static const Figure1 fixture = [] {
        const auto table = io::parse_csv(figure1_csv());
        const std::size_t n = table.header.size() - 2;  // drop label + total columns
        Figure1 f;
        f.matrix.col_labels.assign(table.header.begin() + 1, table.header.end() - 1);
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            const auto& row = table.rows[r];
            if (row.size() != table.header.size()) {
                throw DataError("figure1: ragged row '" + row.front() + "'");
            }
            if (row.front() == "region_total") {
                for (std::size_t c = 1; c <= n; ++c) {
                    f.col_totals.push_back(std::stod(row[c]));
                }
                f.grand_total = std::stod(row.back());
                continue;
            }
            f.matrix.row_labels.push_back(row.front());
            std::vector<double> cells(n, 0.0);
            for (std::size_t c = 0; c < n; ++c) {
                const auto& tok = row[c + 1];
                if (tok.empty() || tok == ".") {
                    f.matrix.suppressed.insert({f.matrix.row_labels.size() - 1, c});
                } else {
                    cells[c] = std::stod(tok);
                }
            }
            f.matrix.cells.push_back(std::move(cells));
            f.row_totals.push_back(std::stod(row.back()));
        }
        return f;
    }();
    return fixture;
}

}  // namespace samplan::fixtures
