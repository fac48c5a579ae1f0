#include "flatnorm/approx/approx.hpp"

#include "flatnorm/geom/arrangement.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace flatnorm {
namespace {

constexpr std::size_t kReferenceFactor = 64;
constexpr std::size_t kMaxChords = std::size_t(1) << 20;

Rational json_number(const nlohmann::json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number()) return parse_rational(j.dump());
    throw std::invalid_argument("expected a number, got " + j.dump());
}

Point json_point(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2) throw std::invalid_argument("expected [x, y], got " + j.dump());
    return {json_number(j[0]), json_number(j[1])};
}

bool full_turn(const ArcSpec& a) { return std::fabs(std::fabs(a.end - a.start) - 2 * std::numbers::pi) < 1e-12; }

double segment_area(double r, double phi) { return r * r * (phi - std::sin(phi)) / 2; }

double boundary_mass(const PLCurrent& c) {
    double m = 0;
    for (auto [p, mu] : pl_boundary(c)) m += std::fabs(double(mu));
    return m;
}

PLCurrent chords(const ArcSpec& a, std::size_t k) {
    auto v = arc_vertices(a, k);
    PLCurrent c;
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
        if (v[i] != v[i + 1]) c.add(v[i], v[i + 1], a.mult);
    return c;
}

}  // namespace

CurveSpec CurveSpec::from_polyline(PLCurrent c) {
    CurveSpec s;
    s.kind = Kind::polyline;
    s.polyline = std::move(c);
    return s;
}

CurveSpec CurveSpec::from_arc(const ArcSpec& a) {
    CurveSpec s;
    s.kind = Kind::arc;
    s.arc = a;
    return s;
}

CurveSpec parse_curve_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("curve json: ") + e.what());
    }
    std::string type = j.value("type", "");
    std::int64_t mult = j.value("mult", std::int64_t(1));
    if (type == "polyline") {
        std::vector<Point> pts;
        for (const auto& p : j.at("points")) pts.push_back(json_point(p));
        if (pts.size() < 2) throw std::invalid_argument("polyline needs two points");
        return CurveSpec::from_polyline(PLCurrent::polyline(pts, mult, j.value("closed", false)));
    }
    if (type == "arc") {
        ArcSpec a;
        a.center = json_point(j.at("center"));
        a.radius = j.at("radius").get<double>();
        a.start = j.value("start", 0.0);
        a.end = j.value("end", 2 * std::numbers::pi);
        a.mult = mult;
        if (!(a.radius > 0)) throw std::invalid_argument("arc radius must be positive");
        if (a.start == a.end || std::fabs(a.end - a.start) > 2 * std::numbers::pi + 1e-12)
            throw std::invalid_argument("arc angle range must be nonzero and at most a full turn");
        return CurveSpec::from_arc(a);
    }
    throw std::invalid_argument("curve type must be \"polyline\" or \"arc\"");
}

CurveSpec load_curve(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_curve_json(ss.str());
}

std::vector<Point> arc_vertices(const ArcSpec& a, std::size_t k) {
    if (k == 0) throw std::invalid_argument("arc needs at least one chord");
    const int bits = 48 - std::ilogb(a.radius);
    const double sweep = a.end - a.start;
    std::vector<Point> v;
    for (std::size_t i = 0; i <= k; ++i) {
        if (i == k && full_turn(a)) {
            v.push_back(v.front());
            break;
        }
        double phi = a.start + sweep * (double(i) / double(k));
        v.emplace_back(a.center.x() + round_dyadic(a.radius * std::cos(phi), bits),
                       a.center.y() + round_dyadic(a.radius * std::sin(phi), bits));
    }
    return v;
}

Approximation approximate_curve(const CurveSpec& curve, double rho) {
    if (!(rho > 0)) throw std::invalid_argument("rho must be positive");
    Approximation out;
    auto& c = out.certificate;
    c.rho = rho;
    if (curve.kind == CurveSpec::Kind::polyline) {
        out.P = curve.polyline;
        out.reference = curve.polyline;
        c.chords = curve.polyline.size();
        c.mass = c.pushed_mass = c.reference_mass = curve.polyline.mass();
        c.boundary_mass = c.pushed_boundary_mass = boundary_mass(curve.polyline);
        c.certified = true;
        return out;
    }
    const ArcSpec& a = curve.arc;
    const double sweep = std::fabs(a.end - a.start);
    const double w = std::fabs(double(a.mult));
    std::size_t k = 1;
    while (sweep / double(k) > std::numbers::pi) k *= 2;
    auto area_for = [&](std::size_t n) { return w * double(n) * segment_area(a.radius, sweep / double(n)); };
    while (area_for(k) > rho * (1 + 1e-12)) {
        if (k >= kMaxChords) throw std::runtime_error("rho too small for the chord limit");
        k *= 2;
    }
    out.P = chords(a, k);
    out.reference = chords(a, k * kReferenceFactor);
    out.filler = filler_region(out.P, out.reference);
    c.chords = k;
    c.segment_area = area_for(k);
    c.mass = w * a.radius * sweep;
    c.pushed_mass = out.P.mass();
    c.reference_mass = out.reference.mass();
    c.boundary_mass = full_turn(a) ? 0 : 2 * w;
    c.pushed_boundary_mass = boundary_mass(out.P);
    c.filler_area = out.filler.mass_exact();
    c.certified = c.segment_area <= rho * (1 + 1e-12) && c.filler_area.get_d() <= rho &&
                  c.pushed_mass <= c.reference_mass + 1e-12 && pl_boundary(out.P) == pl_boundary(out.reference);
    return out;
}

}  // namespace flatnorm
