#include "quadcalc/graph_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace quadcalc {

using nlohmann::json;

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

QuadGraph graph_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        raise(ErrorCode::ParseError, e.what());
    }
    if (!j.is_object()) raise(ErrorCode::ParseError, "top level must be an object");
    for (auto& [k, _] : j.items())
        if (k != "vertices" && k != "quads")
            raise(ErrorCode::ParseError, "unknown key: " + k);
    if (!j.contains("vertices") || !j.contains("quads"))
        raise(ErrorCode::ParseError, "missing vertices or quads");

    std::vector<VertexInput> verts;
    for (const auto& jv : j["vertices"]) {
        if (!jv.is_object()) raise(ErrorCode::ParseError, "vertex must be an object");
        for (auto& [k, _] : jv.items())
            if (k != "x" && k != "y" && k != "color" && k != "boundary")
                raise(ErrorCode::ParseError, "unknown vertex key: " + k);
        if (!jv.contains("x") || !jv.contains("y") || !jv.contains("color") || !jv.contains("boundary"))
            raise(ErrorCode::ParseError, "vertex needs x, y, color, boundary");
        VertexInput v;
        v.pos = Complex(jv["x"].get<double>(), jv["y"].get<double>());
        std::string c = jv["color"].get<std::string>();
        if (c == "b") v.color = Color::Black;
        else if (c == "w") v.color = Color::White;
        else raise(ErrorCode::ParseError, "color must be \"b\" or \"w\"");
        v.boundary = jv["boundary"].get<bool>();
        verts.push_back(v);
    }
    std::vector<std::array<int, 4>> quads;
    for (const auto& jq : j["quads"]) {
        if (!jq.is_array() || jq.size() != 4)
            raise(ErrorCode::ParseError, "quad must be an array of four indices");
        quads.push_back({jq[0].get<int>(), jq[1].get<int>(), jq[2].get<int>(), jq[3].get<int>()});
    }
    return build_quadgraph(std::move(verts), std::move(quads));
}

std::string graph_to_json(const QuadGraph& g) {
    std::ostringstream out;
    out << "{\"vertices\":[";
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (v) out << ",";
        out << "{\"x\":" << format_double(g.pos(v).real())
            << ",\"y\":" << format_double(g.pos(v).imag())
            << ",\"color\":\"" << (g.color(v) == Color::Black ? 'b' : 'w')
            << "\",\"boundary\":" << (g.is_boundary(v) ? "true" : "false") << "}";
    }
    out << "],\"quads\":[";
    for (int q = 0; q < g.quad_count(); ++q) {
        if (q) out << ",";
        const auto& c = g.quad(q).v;
        out << "[" << c[0] << "," << c[1] << "," << c[2] << "," << c[3] << "]";
    }
    out << "]}";
    return out.str();
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorCode::ParseError, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(ErrorCode::ParseError, "cannot write " + path);
    out << text;
}

QuadGraph load_graph(const std::string& path) { return graph_from_json(read_text_file(path)); }

void save_graph(const QuadGraph& g, const std::string& path) {
    write_text_file(path, graph_to_json(g) + "\n");
}

std::string field_to_csv(const std::vector<Complex>& values) {
    std::ostringstream out;
    out << "id,re,im\n";
    for (size_t i = 0; i < values.size(); ++i)
        out << i << "," << format_double(values[i].real()) << ","
            << format_double(values[i].imag()) << "\n";
    return out.str();
}

std::vector<Complex> field_from_csv(const std::string& text, int expectedSize) {
    std::vector<Complex> out(expectedSize < 0 ? 0 : expectedSize, Complex(0, 0));
    std::vector<char> seen(expectedSize < 0 ? 0 : expectedSize, 0);
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first && line.rfind("id,", 0) == 0) { first = false; continue; }
        first = false;
        std::istringstream ls(line);
        std::string tok;
        long id;
        double re = 0, im = 0;
        if (!std::getline(ls, tok, ',')) raise(ErrorCode::ParseError, "bad csv row: " + line);
        try {
            id = std::stol(tok);
            if (!std::getline(ls, tok, ',')) raise(ErrorCode::ParseError, "bad csv row: " + line);
            re = std::stod(tok);
            if (std::getline(ls, tok, ',')) im = std::stod(tok);
        } catch (const std::exception&) {
            raise(ErrorCode::ParseError, "bad csv row: " + line);
        }
        if (expectedSize >= 0) {
            if (id < 0 || id >= expectedSize)
                raise(ErrorCode::ParseError, "csv id out of range: " + std::to_string(id));
            out[id] = Complex(re, im);
            seen[id] = 1;
        } else {
            if (id != static_cast<long>(out.size()))
                raise(ErrorCode::ParseError, "csv ids must be dense when size unknown");
            out.emplace_back(re, im);
        }
    }
    if (expectedSize >= 0)
        for (int i = 0; i < expectedSize; ++i)
            if (!seen[i]) raise(ErrorCode::ParseError, "csv missing id " + std::to_string(i));
    return out;
}

std::vector<Complex> load_field_csv(const std::string& path, int expectedSize) {
    return field_from_csv(read_text_file(path), expectedSize);
}

} // namespace quadcalc
