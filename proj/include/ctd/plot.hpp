#pragma once

#include <string>

#include "ctd/csv.hpp"

namespace ctd {

// Renders a results CSV as a static SVG chart. The schema is detected from
// the header: sweep output becomes an error-vs-step-size chart with
// confidence bands and dashed minimum lines; variance-study output becomes
// a variance-vs-n chart with dashed model bound lines. Deterministic for a
// fixed input; throws on unknown schemas or empty data.
std::string render_chart(const CsvTable& table);

// Reads the CSV, renders, and writes the SVG. Nothing is written when
// validation fails.
void plot_csv_file(const std::string& csv_path, const std::string& out_path);

}  // namespace ctd
