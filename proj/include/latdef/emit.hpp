#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "latdef/polygon.hpp"
#include "latdef/series.hpp"
#include "latdef/tropical.hpp"

namespace latdef {

using Json = nlohmann::ordered_json;

// Round through a %.Ng print so emitted numbers carry exactly the requested
// number of significant digits. Non-finite values pass through untouched and
// serialize as JSON null.
double round_to_sig(double x, int digits);

Json sum_report_json(const SumReport& r, int digits = 17);
Json polygon_summary_json(const Polygon& poly, const PolygonMetrics& m, int digits = 17);
Json polygon_file_json(const Polygon& poly, int digits = 17);
Json locus_json(const CornerLocusGraph& g, int digits = 17);
Json cube_json(const CubeCheck& c, int digits = 17);
Json envelope_json(const EnvelopeValue& e, int digits = 17);

std::string svg_polygon(const Polygon& poly);
std::string svg_locus(const CornerLocusGraph& g);

void write_vertex_csv(std::ostream& os, const Polygon& poly);
void write_grid_csv(std::ostream& os, const GridSpec& grid,
                    const std::function<double(const Vec2d&)>& fn);
void write_zeta_csv(std::ostream& os, const std::vector<ZetaRow>& rows, int digits = 17);
void write_extended_csv(std::ostream& os,
                        const std::vector<std::pair<std::int64_t, double>>& rows,
                        int digits = 17);

}  // namespace latdef
