#include "flatnorm/complex/io.hpp"

#include <fstream>
#include <sstream>

namespace flatnorm {

namespace {

std::string next_data_line(std::istream& is, std::size_t& lineno) {
    std::string line;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") != std::string::npos) return line;
    }
    return {};
}

[[noreturn]] void fail(std::size_t lineno, const std::string& msg) {
    throw FormatError("line " + std::to_string(lineno) + ": " + msg);
}

}  // namespace

void write_complex(std::ostream& os, const Complex2& K) {
    os << K.num_vertices() << ' ' << K.num_edges() << ' ' << K.num_triangles() << '\n';
    for (std::size_t i = 0; i < K.num_vertices(); ++i)
        os << "v " << i << ' ' << to_string(K.vertices()[i].x()) << ' ' << to_string(K.vertices()[i].y()) << '\n';
    for (std::size_t i = 0; i < K.num_edges(); ++i) os << "e " << i << ' ' << K.edges()[i][0] << ' ' << K.edges()[i][1] << '\n';
    for (std::size_t i = 0; i < K.num_triangles(); ++i) {
        const auto& t = K.triangles()[i];
        os << "t " << i << ' ' << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    }
}

Complex2 read_complex(std::istream& is) {
    std::size_t lineno = 0;
    std::istringstream head(next_data_line(is, lineno));
    std::size_t nv, ne, nt;
    if (!(head >> nv >> ne >> nt)) fail(lineno, "expected 'V E T' header");
    std::vector<Point> verts(nv);
    std::vector<char> seen(nv, 0);
    std::vector<Edge> edges(ne);
    std::vector<char> eseen(ne, 0);
    std::vector<Tri> tris(nt);
    std::vector<char> tseen(nt, 0);
    for (std::size_t k = 0; k < nv + ne + nt; ++k) {
        std::string line = next_data_line(is, lineno);
        if (line.empty()) fail(lineno, "unexpected end of file");
        std::istringstream ls(line);
        std::string tag;
        std::size_t id;
        ls >> tag >> id;
        if (!ls) fail(lineno, "malformed record");
        if (tag == "v") {
            std::string x, y;
            if (!(ls >> x >> y) || id >= nv) fail(lineno, "bad vertex record");
            try {
                verts[id] = Point(parse_rational(x), parse_rational(y));
            } catch (const std::exception& e) {
                fail(lineno, e.what());
            }
            seen[id] = 1;
        } else if (tag == "e") {
            std::size_t a, b;
            if (!(ls >> a >> b) || id >= ne) fail(lineno, "bad edge record");
            edges[id] = {a, b};
            eseen[id] = 1;
        } else if (tag == "t") {
            std::size_t a, b, c;
            if (!(ls >> a >> b >> c) || id >= nt) fail(lineno, "bad triangle record");
            tris[id] = {a, b, c};
            tseen[id] = 1;
        } else {
            fail(lineno, "unknown record '" + tag + "'");
        }
    }
    for (std::size_t i = 0; i < nv; ++i)
        if (!seen[i]) throw FormatError("vertex " + std::to_string(i) + " missing");
    for (std::size_t i = 0; i < nt; ++i)
        if (!tseen[i]) throw FormatError("triangle " + std::to_string(i) + " missing");
    for (std::size_t i = 0; i < ne; ++i)
        if (!eseen[i]) throw FormatError("edge " + std::to_string(i) + " missing");
    return build_complex(std::move(verts), tris, true, edges);
}

void save_complex(const std::string& path, const Complex2& K) {
    std::ofstream os(path);
    if (!os) throw FormatError("cannot write " + path);
    write_complex(os, K);
}

Complex2 load_complex(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw FormatError("cannot read " + path);
    return read_complex(is);
}

void write_chain(std::ostream& os, const Chain& c) {
    os << "simplex_id,coefficient\n";
    for (auto [i, v] : c.coef) os << i << ',' << v << '\n';
}

Chain read_chain(std::istream& is, int dim) {
    Chain c(dim);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#' || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (line.rfind("simplex_id", 0) == 0) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) fail(lineno, "expected 'simplex_id,coefficient'");
        try {
            std::size_t id = std::stoull(line.substr(0, comma));
            Rational v = parse_rational(line.substr(comma + 1));
            if (v.get_den() != 1) fail(lineno, "non-integral coefficient " + to_string(v));
            c.add(id, to_int64(v.get_num()));
        } catch (const FormatError&) {
            throw;
        } catch (const std::exception&) {
            fail(lineno, "bad number");
        }
    }
    return c;
}

void save_chain(const std::string& path, const Chain& c) {
    std::ofstream os(path);
    if (!os) throw FormatError("cannot write " + path);
    write_chain(os, c);
}

Chain load_chain(const std::string& path, int dim) {
    std::ifstream is(path);
    if (!is) throw FormatError("cannot read " + path);
    return read_chain(is, dim);
}

}  // namespace flatnorm
