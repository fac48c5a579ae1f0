// fnorm: command line front end for meshing, deformation, flat norm LPs and
// the convergence experiments.

#include "flatnorm/complex/io.hpp"
#include "flatnorm/deform/deform.hpp"
#include "flatnorm/pipeline/converge.hpp"
#include "flatnorm/pipeline/examples.hpp"
#include "flatnorm/pipeline/io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <numbers>

using namespace flatnorm;

namespace {

std::vector<Rational> parse_list(const std::vector<std::string>& items) {
    std::vector<Rational> out;
    for (const auto& s : items) out.push_back(parse_rational(s));
    return out;
}

std::string join(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

void emit(const json& j, const std::string& path) {
    if (path.empty())
        std::cout << j.dump(2) << "\n";
    else
        write_file_atomic(path, j.dump(2) + "\n");
}

json report_json(const LocalizeReport& r) {
    return {{"eps", r.eps},
            {"delta", r.delta},
            {"tube_radius", r.tube_radius},
            {"tube_area_bound", r.tube_area_bound},
            {"rotation_deg", r.rotation_deg},
            {"crossing_angle_deg", r.crossing_angle_deg},
            {"grid_coarsened", r.grid_coarsened},
            {"theta_M", r.theta_M},
            {"theta_M_prime", r.theta_M_prime},
            {"beta", r.beta},
            {"min_angle_deg", r.min_angle_deg},
            {"min_angle_outside_deg", r.min_angle_outside_deg},
            {"triangles", r.triangles},
            {"outside_triangles", r.outside_triangles},
            {"small_angles", r.small_angles},
            {"small_angles_in_tube", r.small_angles_in_tube}};
}

// Input chain for sweep and spanning: a mesh and chain file, or a built-in example.
struct ChainInput {
    std::string mesh, chain, example = "square";
    std::size_t n = 64;
    double eps = 0.1;

    void add(CLI::App* app) {
        app->add_option("--mesh", mesh, "complex file");
        app->add_option("--chain", chain, "1-chain CSV on the complex");
        app->add_option("--example", example, "square or ngon when no mesh is given")
            ->check(CLI::IsMember({"square", "ngon"}));
        app->add_option("--n", n, "polygon sides for the ngon example")->check(CLI::Range(3, 1 << 20));
        app->add_option("--eps", eps, "tube area bound for the example mesh")->check(CLI::PositiveNumber);
    }

    std::pair<Complex2, Chain> load() const {
        if (!mesh.empty()) {
            if (chain.empty()) throw CLI::ValidationError("--chain is required with --mesh");
            return {load_complex(mesh), load_chain(chain, 1)};
        }
        if (example == "ngon") {
            auto d = gen_ngon_disk(n, 1, eps);
            return {d.embedding.complex(), d.t};
        }
        LocalizeOptions o;
        o.use_grid = false;
        Rational z(0), one(1);
        auto sq = PLCurrent::polyline({Point(z, z), Point(one, z), Point(one, one), Point(z, one)}, 1, true);
        auto E = embed_chains({sq}, {}, eps, o);
        return {E.complex(), E.curves[0]};
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multiscale flat norm via simplicial approximation"};
    app.require_subcommand(1);

    // triangulate
    auto* tri = app.add_subcommand("triangulate", "localized quality mesh of a PSLG");
    std::string tri_in, tri_out, tri_audit, tri_chain;
    double tri_eps = 0.01, tri_angle = 26, tri_edge = 0;
    bool tri_nogrid = false;
    tri->add_option("--in", tri_in, "PSLG file")->required()->check(CLI::ExistingFile);
    tri->add_option("--eps", tri_eps, "tube area bound")->check(CLI::PositiveNumber);
    tri->add_option("--min-angle", tri_angle, "angle target in the tube, degrees")->check(CLI::Range(1.0, 30.0));
    tri->add_option("--max-edge", tri_edge, "longest edge, 0 for none")->check(CLI::NonNegativeNumber);
    tri->add_flag("--no-grid", tri_nogrid, "skip the rotated grid");
    tri->add_option("--out", tri_out, "complex file")->required();
    tri->add_option("--audit", tri_audit, "audit JSON");
    tri->add_option("--chain-out", tri_chain, "1-chain of the segments with nonzero multiplicity");

    // deform
    auto* def = app.add_subcommand("deform", "push currents onto a complex");
    std::string def_mesh, def_out, def_cert;
    std::vector<std::string> def_curves, def_regions;
    double def_eps = 1;
    std::uint64_t def_seed = 0;
    def->add_option("--mesh", def_mesh, "complex file")->required()->check(CLI::ExistingFile);
    def->add_option("--curves", def_curves, ".plc files")->check(CLI::ExistingFile);
    def->add_option("--regions", def_regions, ".plr files")->check(CLI::ExistingFile);
    def->add_option("--eps", def_eps, "expansion slack")->check(CLI::PositiveNumber);
    def->add_option("--seed", def_seed, "center sequence offset");
    def->add_option("--out", def_out, "directory for the chains")->required();
    def->add_option("--cert", def_cert, "certificate JSON");

    // flatnorm
    auto* fn = app.add_subcommand("flatnorm", "simplicial flat norm of a 1-chain");
    std::string fn_mesh, fn_chain, fn_out, fn_lambda = "1";
    std::vector<std::string> fn_sweep;
    fn->add_option("--mesh", fn_mesh, "complex file")->required()->check(CLI::ExistingFile);
    fn->add_option("--chain", fn_chain, "1-chain CSV")->required()->check(CLI::ExistingFile);
    fn->add_option("--lambda", fn_lambda, "scale, decimal or p/q");
    fn->add_option("--sweep", fn_sweep, "λ list")->delimiter(',');
    fn->add_option("--out", fn_out, "result JSON (stdout if omitted)");

    // approx
    auto* ap = app.add_subcommand("approx", "polyline approximation of a curve");
    std::string ap_curve, ap_out, ap_cert;
    double ap_rho = 0.01;
    ap->add_option("--curve", ap_curve, "curve JSON")->required()->check(CLI::ExistingFile);
    ap->add_option("--rho", ap_rho, "filler area bound")->check(CLI::PositiveNumber);
    ap->add_option("--out", ap_out, ".plc file")->required();
    ap->add_option("--cert", ap_cert, "certificate JSON");

    // strip
    auto* st = app.add_subcommand("strip", "zigzag strip against its chord");
    std::size_t st_n = 2;
    std::string st_side = "2", st_lambda = "1", st_out;
    std::uint64_t st_seed = 0;
    st->add_option("--n", st_n, "diamonds")->check(CLI::Range(1, 1 << 20));
    st->add_option("--side", st_side, "triangle side");
    st->add_option("--lambda", st_lambda, "scale");
    st->add_option("--seed", st_seed, "unused, accepted for uniformity");
    st->add_option("--out", st_out, "output directory");

    // ngon
    auto* ng = app.add_subcommand("ngon", "inscribed polygon on a disk mesh");
    std::size_t ng_n = 8;
    double ng_r = 1, ng_eps = 0.1;
    std::string ng_lambda = "1", ng_out;
    std::uint64_t ng_seed = 0;
    ng->add_option("--n", ng_n, "sides")->check(CLI::Range(3, 1 << 20));
    ng->add_option("--radius", ng_r, "radius")->check(CLI::PositiveNumber);
    ng->add_option("--eps", ng_eps, "tube area bound")->check(CLI::PositiveNumber);
    ng->add_option("--lambda", ng_lambda, "scale");
    ng->add_option("--seed", ng_seed, "unused, accepted for uniformity");
    ng->add_option("--out", ng_out, "output directory");

    // converge
    auto* cv = app.add_subcommand("converge", "F_K(P_δ) against F(T) over a δ sequence");
    std::string cv_curve, cv_example = "circle", cv_known, cv_lambda = "1", cv_out;
    std::vector<double> cv_deltas{0.1, 0.05, 0.02, 0.01};
    std::optional<double> cv_ref;
    ExperimentConfig cv_cfg;
    cv->add_option("--curve", cv_curve, "curve JSON")->check(CLI::ExistingFile);
    cv->add_option("--example", cv_example, "circle or segment when no curve is given")
        ->check(CLI::IsMember({"circle", "segment"}));
    cv->add_option("--known", cv_known, "keep or fill")->check(CLI::IsMember({"keep", "fill"}));
    cv->add_option("--deltas", cv_deltas, "strictly decreasing δ list")->delimiter(',');
    cv->add_option("--lambda", cv_lambda, "scale");
    cv->add_option("--reference", cv_ref, "F(T) when known");
    cv->add_option("--seed", cv_cfg.seed, "center sequence offset");
    cv->add_option("--threads", cv_cfg.threads, "0 for all hardware threads");
    cv->add_option("--edge-floor", cv_cfg.edge_floor, "smallest mesh edge bound")->check(CLI::PositiveNumber);
    cv->add_option("--proxy-chords", cv_cfg.proxy_chords, "chords of the arc proxy")->check(CLI::Range(3, 1 << 20));
    cv->add_option("--out", cv_out, "output directory");

    // sweep
    auto* sw = app.add_subcommand("sweep", "λ sweep with threshold location");
    ChainInput sw_in;
    sw_in.add(sw);
    std::vector<std::string> sw_lambdas{"0.5", "1", "1.5", "2", "2.5", "3", "4", "5"};
    std::string sw_out;
    std::uint64_t sw_seed = 0;
    sw->add_option("--lambda,--lambdas", sw_lambdas, "λ list")->delimiter(',');
    sw->add_option("--seed", sw_seed, "unused, accepted for uniformity");
    sw->add_option("--out", sw_out, "output directory");

    // spanning
    auto* sp = app.add_subcommand("spanning", "is it better to span for small λ");
    ChainInput sp_in;
    sp_in.add(sp);
    std::vector<std::string> sp_lambdas{"0.1", "0.5", "1", "2", "3", "5", "10", "100"};
    std::string sp_out;
    std::uint64_t sp_seed = 0;
    sp->add_option("--lambda,--lambdas", sp_lambdas, "λ list")->delimiter(',');
    sp->add_option("--seed", sp_seed, "unused, accepted for uniformity");
    sp->add_option("--out", sp_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*tri) {
            LocalizeOptions o;
            o.target_angle_deg = tri_angle;
            o.use_grid = !tri_nogrid;
            o.max_edge = tri_edge;
            auto L = localize(load_pslg(tri_in), tri_eps, o);
            save_complex(tri_out, L.mesh.complex);
            if (!tri_chain.empty()) {
                Chain c(1);
                const auto& segs = L.mesh.pslg.segments;
                for (std::size_t i = 0; i < segs.size() && i < L.mesh.segment_edges.size(); ++i)
                    for (auto [e, sign] : L.mesh.segment_edges[i]) c.add(e, segs[i].mult * sign);
                save_chain(tri_chain, c);
            }
            json j = report_json(L.report);
            j["refine"] = {{"circumcenters", L.mesh.stats.circumcenters},
                           {"segment_splits", L.mesh.stats.segment_splits},
                           {"min_angle_deg", L.mesh.stats.min_angle_deg}};
            if (!tri_audit.empty()) write_file_atomic(tri_audit, j.dump(2) + "\n");
            std::cout << "triangles " << L.report.triangles << " min_angle " << L.report.min_angle_deg
                      << " theta_M " << L.report.theta_M << "\n";
        } else if (*def) {
            Complex2 K = load_complex(def_mesh);
            std::vector<PLCurrent> cs;
            std::vector<PLRegion> rs;
            for (const auto& f : def_curves) cs.push_back(load_plc(f));
            for (const auto& f : def_regions) rs.push_back(load_plr(f));
            auto D = deform_currents(cs, rs, K, def_eps, def_seed);
            std::filesystem::create_directories(def_out);
            for (std::size_t i = 0; i < D.P.size(); ++i) save_chain(join(def_out, "P" + std::to_string(i) + ".csv"), D.P[i]);
            for (std::size_t j = 0; j < D.O.size(); ++j) save_chain(join(def_out, "O" + std::to_string(j) + ".csv"), D.O[j]);
            const auto& c = D.certificate;
            json j{{"m", c.m}, {"n", c.n}, {"factor", c.factor}, {"delta", c.delta}, {"theta_K", c.theta_K},
                   {"worst_ratio", c.worst_ratio}, {"candidates", c.candidates}};
            j["curves"] = json::array();
            for (const auto& k : c.curves)
                j["curves"].push_back({{"mass", k.mass}, {"pushed_mass", k.pushed_mass}, {"q_mass", k.q_mass},
                                       {"r_mass", k.r_mass}, {"mass_bound", k.mass_bound},
                                       {"flat_bound", k.flat_bound}, {"bounds_hold", k.bounds_hold},
                                       {"boundary_commutes", k.boundary_commutes}});
            j["regions"] = json::array();
            for (const auto& k : c.regions)
                j["regions"].push_back({{"mass", k.mass}, {"pushed_mass", k.pushed_mass}, {"r_mass", k.r_mass},
                                        {"mass_bound", k.mass_bound}, {"bounds_hold", k.bounds_hold},
                                        {"boundary_commutes", k.boundary_commutes}});
            emit(j, def_cert);
        } else if (*fn) {
            Complex2 K = load_complex(fn_mesh);
            Chain t = load_chain(fn_chain, 1);
            if (!fn_sweep.empty()) {
                emit(to_json(sweep(t, K, parse_list(fn_sweep))), fn_out);
            } else {
                emit(to_json(flat_norm_decompose(t, K, parse_rational(fn_lambda)), K), fn_out);
            }
        } else if (*ap) {
            auto r = approximate_curve(load_curve(ap_curve), ap_rho);
            save_plc(ap_out, r.P);
            const auto& c = r.certificate;
            json j{{"rho", c.rho}, {"chords", c.chords}, {"mass", c.mass}, {"pushed_mass", c.pushed_mass},
                   {"segment_area", c.segment_area}, {"filler_area", c.filler_area.get_d()},
                   {"certified", c.certified}};
            emit(j, ap_cert);
        } else if (*st) {
            auto s = gen_strip(st_n, parse_rational(st_side));
            auto F = flat_norm_decompose(s.P, s.K, parse_rational(st_lambda));
            json j = to_json(F, s.K);
            j["mass_P"] = chain_mass(s.K, s.P);
            j["mass_T"] = s.T.mass();
            j["ratio"] = F.value / s.T.mass();
            j["x_is_P"] = F.x == s.P;
            if (!st_out.empty()) {
                std::filesystem::create_directories(st_out);
                save_complex(join(st_out, "strip.cx"), s.K);
                save_chain(join(st_out, "P.csv"), s.P);
                save_plc(join(st_out, "T.plc"), s.T);
            }
            emit(j, st_out.empty() ? "" : join(st_out, "strip.json"));
        } else if (*ng) {
            auto d = gen_ngon_disk(ng_n, ng_r, ng_eps);
            const auto& K = d.embedding.complex();
            auto F = flat_norm_decompose(d.t, K, parse_rational(ng_lambda));
            json j = to_json(F, K);
            j["mass_t"] = chain_mass(K, d.t);
            j["mesh"] = report_json(d.embedding.mesh.report);
            if (!ng_out.empty()) {
                std::filesystem::create_directories(ng_out);
                save_complex(join(ng_out, "ngon.cx"), K);
                save_chain(join(ng_out, "t.csv"), d.t);
            }
            emit(j, ng_out.empty() ? "" : join(ng_out, "ngon.json"));
        } else if (*cv) {
            cv_cfg.deltas = cv_deltas;
            cv_cfg.lambda = parse_rational(cv_lambda);
            cv_cfg.reference = cv_ref;
            if (!cv_curve.empty()) {
                cv_cfg.input = load_curve(cv_curve);
            } else if (cv_example == "segment") {
                Rational z(0), one(1);
                cv_cfg.input = CurveSpec::from_polyline(PLCurrent::polyline({Point(z, z), Point(one, z)}));
                if (!cv_ref && cv_cfg.lambda == 1) cv_cfg.reference = 1;
            } else {
                ArcSpec a;
                a.center = Point(Rational(0), Rational(0));
                a.end = 2 * std::numbers::pi;
                cv_cfg.input = CurveSpec::from_arc(a);
                cv_cfg.known = Decomposition::fill;
                // min(2π, λπ) for the unit circle
                if (!cv_ref) cv_cfg.reference = std::min(2 * std::numbers::pi, cv_cfg.lambda.get_d() * std::numbers::pi);
            }
            if (!cv_known.empty()) cv_cfg.known = cv_known == "fill" ? Decomposition::fill : Decomposition::keep;
            auto rep = converge_experiment(cv_cfg);
            if (!cv_out.empty()) write_convergence(cv_out, rep);
            std::cout << convergence_csv(rep);
            std::cout << "C_theory " << rep.C_theory << " C_measured " << rep.C_measured << " final_gap_rel "
                      << rep.final_gap_rel << " verdict " << (rep.verdict ? "pass" : "fail") << "\n";
            return rep.verdict ? 0 : 2;
        } else if (*sw) {
            auto [K, t] = sw_in.load();
            auto r = sweep(t, K, parse_list(sw_lambdas));
            if (!sw_out.empty()) {
                write_file_atomic(join(sw_out, "sweep.json"), to_json(r).dump(2) + "\n");
                write_file_atomic(join(sw_out, "sweep.csv"), sweep_csv(r));
            }
            std::cout << sweep_csv(r);
            for (const auto& th : r.thresholds) std::cout << "threshold " << th.lambda << " (" << th.lambda_exact.get_str() << ")\n";
        } else if (*sp) {
            auto [K, t] = sp_in.load();
            auto r = spanning_experiment(t, K, parse_list(sp_lambdas));
            if (!sp_out.empty()) {
                write_file_atomic(join(sp_out, "spanning.json"), to_json(r).dump(2) + "\n");
                write_file_atomic(join(sp_out, "spanning.csv"), spanning_csv(r));
            }
            std::cout << spanning_csv(r);
            std::cout << "lambda0 " << r.lambda0 << " verdict " << (r.verdict ? "pass" : "fail") << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "fnorm: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
