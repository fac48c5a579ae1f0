#include "flatnorm/pipeline/io.hpp"


#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace flatnorm {

namespace {

json chain_json(const Chain& c) {
    json a = json::array();
    for (auto [i, k] : c.coef) a.push_back({i, k});
    return a;
}

std::string num(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

std::vector<std::string> tokens(const std::string& line) {
    std::istringstream ls(line.substr(0, line.find('#')));
    std::vector<std::string> out;
    for (std::string w; ls >> w;) out.push_back(w);
    return out;
}

std::int64_t parse_mult(const std::string& w, std::size_t line) {
    try {
        std::size_t pos = 0;
        long long v = std::stoll(w, &pos);
        if (pos != w.size()) throw std::invalid_argument(w);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("line " + std::to_string(line) + ": bad multiplicity '" + w + "'");
    }
}

Rational coord(const std::string& w, std::size_t line) {
    try {
        return parse_rational(w);
    } catch (const std::exception&) {
        throw std::runtime_error("line " + std::to_string(line) + ": bad coordinate '" + w + "'");
    }
}

template <class F>
auto load_with(const std::string& path, F read) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    return read(is);
}

}  // namespace

void write_plc(std::ostream& os, const PLCurrent& c) {
    for (const auto& s : c.segments())
        os << to_string(s.a.x()) << ' ' << to_string(s.a.y()) << ' ' << to_string(s.b.x()) << ' '
           << to_string(s.b.y()) << ' ' << s.mult << '\n';
}

PLCurrent read_plc(std::istream& is) {
    PLCurrent c;
    std::size_t n = 0;
    for (std::string line; std::getline(is, line);) {
        ++n;
        auto w = tokens(line);
        if (w.empty()) continue;
        if (w.size() != 5) throw std::runtime_error("line " + std::to_string(n) + ": expected x1 y1 x2 y2 mult");
        c.add(Point(coord(w[0], n), coord(w[1], n)), Point(coord(w[2], n), coord(w[3], n)), parse_mult(w[4], n));
    }
    return c;
}

void save_plc(const std::string& path, const PLCurrent& c) {
    std::ostringstream os;
    write_plc(os, c);
    write_file_atomic(path, os.str());
}

PLCurrent load_plc(const std::string& path) { return load_with(path, [](std::istream& is) { return read_plc(is); }); }

void write_plr(std::ostream& os, const PLRegion& r) {
    for (const auto& p : r.polygons()) {
        os << p.mult;
        for (const auto& v : p.vertices) os << ' ' << to_string(v.x()) << ' ' << to_string(v.y());
        os << '\n';
    }
}

PLRegion read_plr(std::istream& is) {
    std::vector<Polygon> polys;
    std::size_t n = 0;
    for (std::string line; std::getline(is, line);) {
        ++n;
        auto w = tokens(line);
        if (w.empty()) continue;
        if (w.size() < 7 || w.size() % 2 == 0)
            throw std::runtime_error("line " + std::to_string(n) + ": expected mult and at least three points");
        Polygon p;
        p.mult = parse_mult(w[0], n);
        for (std::size_t i = 1; i < w.size(); i += 2) p.vertices.emplace_back(coord(w[i], n), coord(w[i + 1], n));
        polys.push_back(std::move(p));
    }
    return PLRegion(std::move(polys));
}

void save_plr(const std::string& path, const PLRegion& r) {
    std::ostringstream os;
    write_plr(os, r);
    write_file_atomic(path, os.str());
}

PLRegion load_plr(const std::string& path) { return load_with(path, [](std::istream& is) { return read_plr(is); }); }

void write_file_atomic(const std::string& path, const std::string& text) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary);
        if (!os) throw std::runtime_error("cannot write " + tmp);
        os << text;
        if (!os) throw std::runtime_error("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, p);
}

json to_json(const FlatNormResult& r, const Complex2& K) {
    json j;
    j["lambda"] = r.lambda.get_str();
    j["value"] = r.value;
    j["mass_x"] = r.mass_x;
    j["mass_s"] = r.mass_s;
    j["objective"] = r.objective.get_str();
    j["integral"] = r.integral;
    j["residual_ok"] = r.residual_ok;
    j["x"] = chain_json(r.x);
    j["s"] = chain_json(r.s);
    j["constraints"] = r.constraints;
    j["variables"] = r.variables;
    j["pivots"] = r.stats.pivots;
    j["triangles"] = K.num_triangles();
    j["edges"] = K.num_edges();
    return j;
}

json to_json(const SweepResult& s) {
    json j;
    j["rows"] = json::array();
    for (const auto& r : s.rows)
        j["rows"].push_back({{"lambda", r.lambda.get_d()},
                             {"value", r.value},
                             {"mass_x", r.mass_x},
                             {"mass_s", r.mass_s},
                             {"integral", r.integral && r.residual_ok}});
    j["thresholds"] = json::array();
    for (const auto& t : s.thresholds)
        j["thresholds"].push_back({{"lambda", t.lambda},
                                   {"lambda_exact", t.lambda_exact.get_str()},
                                   {"mass_s_below", t.mass_s_below},
                                   {"mass_s_above", t.mass_s_above}});
    j["value_nondecreasing"] = s.value_nondecreasing;
    j["mass_s_nonincreasing"] = s.mass_s_nonincreasing;
    j["concave"] = s.concave;
    return j;
}

json to_json(const ConvergenceRow& r) {
    json j{{"delta", r.delta},
           {"chords", r.chords},
           {"mass_P", r.mass_P},
           {"value", r.value},
           {"gap", r.gap},
           {"mass_x", r.mass_x},
           {"mass_s", r.mass_s},
           {"integral", r.integral},
           {"residual_ok", r.residual_ok},
           {"triangles", r.triangles},
           {"min_angle", r.min_angle},
           {"theta_K", r.theta_K},
           {"Delta", r.Delta},
           {"delta_cap", r.delta_cap},
           {"cap_met", r.cap_met},
           {"error_mass", r.error_mass},
           {"pushed_mass", r.pushed_mass},
           {"candidate", r.candidate},
           {"identity_ok", r.identity_ok},
           {"candidate_ok", r.candidate_ok},
           {"deform_ok", r.deform_ok},
           {"worst_ratio", r.worst_ratio},
           {"seconds", r.seconds}};
    if (!r.error.empty()) j["error"] = r.error;
    return j;
}

json to_json(const ConvergenceReport& r) {
    json j;
    j["rows"] = json::array();
    for (const auto& row : r.rows) j["rows"].push_back(to_json(row));
    j["mass_T"] = r.mass_T;
    j["reference"] = r.reference;
    j["reference_is_proxy"] = r.reference_is_proxy;
    j["L"] = r.L;
    j["C_theory"] = r.C_theory;
    j["C_measured"] = r.C_measured;
    j["gaps_nonincreasing"] = r.gaps_nonincreasing;
    j["within_bound"] = r.within_bound;
    j["cauchy"] = r.cauchy;
    j["bounded"] = r.bounded;
    j["all_integral"] = r.all_integral;
    j["final_gap_rel"] = r.final_gap_rel;
    j["verdict"] = r.verdict;
    return j;
}

json to_json(const SpanningReport& r) {
    json j;
    j["rows"] = json::array();
    for (const auto& row : r.rows)
        j["rows"].push_back({{"lambda", row.lambda},
                             {"value", row.value},
                             {"mass_x", row.mass_x},
                             {"mass_s", row.mass_s},
                             {"x_zero", row.x_zero},
                             {"x_is_t", row.x_is_t}});
    j["thresholds"] = json::array();
    for (const auto& t : r.thresholds)
        j["thresholds"].push_back({{"lambda", t.lambda}, {"lambda_exact", t.lambda_exact.get_str()}});
    j["lambda0"] = r.lambda0;
    j["verdict"] = r.verdict;
    return j;
}

std::string convergence_csv(const ConvergenceReport& r) {
    std::ostringstream os;
    os << "delta,mass_P,value,gap,integral,triangles,min_angle,theta_K,seconds\n";
    for (const auto& x : r.rows)
        os << num(x.delta) << ',' << num(x.mass_P) << ',' << num(x.value) << ',' << num(x.gap) << ','
           << (x.integral && x.residual_ok ? 1 : 0) << ',' << x.triangles << ',' << num(x.min_angle) << ','
           << num(x.theta_K) << ',' << num(x.seconds) << '\n';
    return os.str();
}

std::string spanning_csv(const SpanningReport& r) {
    std::ostringstream os;
    os << "lambda,value,mass_x,mass_s,x_zero,x_is_t\n";
    for (const auto& x : r.rows)
        os << num(x.lambda) << ',' << num(x.value) << ',' << num(x.mass_x) << ',' << num(x.mass_s) << ','
           << int(x.x_zero) << ',' << int(x.x_is_t) << '\n';
    return os.str();
}

std::string sweep_csv(const SweepResult& s) {
    std::ostringstream os;
    os << "lambda,value,mass_x,mass_s,integral\n";
    for (const auto& x : s.rows)
        os << num(x.lambda.get_d()) << ',' << num(x.value) << ',' << num(x.mass_x) << ',' << num(x.mass_s) << ','
           << int(x.integral && x.residual_ok) << '\n';
    return os.str();
}

void write_convergence(const std::string& dir, const ConvergenceReport& r) {
    std::filesystem::create_directories(dir);
    write_file_atomic(dir + "/converge.json", to_json(r).dump(2) + "\n");
    write_file_atomic(dir + "/converge.csv", convergence_csv(r));
}

}  // namespace flatnorm
