#pragma once

#include <string>
#include <vector>

#include "quadcalc/quadgraph.hpp"

namespace quadcalc {

/// Strict graph JSON: {"vertices":[{"x":..,"y":..,"color":"b|w","boundary":bool}],
/// "quads":[[i,j,k,l]]} with quads in (b-, w-, b+, w+) order. Unknown keys are
/// rejected.
QuadGraph graph_from_json(const std::string& text);
std::string graph_to_json(const QuadGraph& g);

QuadGraph load_graph(const std::string& path);
void save_graph(const QuadGraph& g, const std::string& path);

/// Field CSV: header "id,re,im", one row per id in increasing order.
std::string field_to_csv(const std::vector<Complex>& values);
std::vector<Complex> field_from_csv(const std::string& text, int expectedSize);
std::vector<Complex> load_field_csv(const std::string& path, int expectedSize);
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

std::string format_double(double x);  // 17 significant digits

} // namespace quadcalc
