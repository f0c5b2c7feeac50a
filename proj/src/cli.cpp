#include "curveorbit/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <regex>
#include <sstream>

#include "curveorbit/io.hpp"
#include "curveorbit/log.hpp"
#include "curveorbit/orbitdeg.hpp"
#include "curveorbit/pnc.hpp"

namespace curveorbit {

using json = nlohmann::ordered_json;

namespace {

struct Common {
    std::string format = "text";
    unsigned seed = 1;
    int max_order = 24;
    bool allow_extension = true;
    bool timing = false;
};

struct Outcome {
    json payload;
    std::string text;
    std::vector<std::string> warnings;
    int code = 0;
};

std::string line_string(const Line& l) { return to_string(line_form(l)); }

json curve_json(const PlaneCurve& c) {
    json f = json::array();
    for (const auto& [form, m] : c.factors()) f.push_back({{"form", to_string(form)}, {"multiplicity", m}});
    return {{"degree", c.degree()}, {"factors", f}};
}

std::string curve_text(const PlaneCurve& c) {
    std::ostringstream os;
    os << "curve: degree " << c.degree() << "\n";
    for (const auto& [form, m] : c.factors()) os << "  factor " << to_string(form) << (m > 1 ? " ^ " + std::to_string(m) : "") << "\n";
    return os.str();
}

json terms_json(const SeriesTerms& s) {
    json out = json::array();
    for (const auto& [e, g] : s) out.push_back({{"exponent", e.get_str()}, {"coefficient", g.to_string()}});
    return out;
}

Line choose_tangent(const PlaneCurve& c, const Point& p, const std::optional<std::string>& tangent, TowerContext& ctx) {
    if (tangent) {
        Line l = parse_line(*tangent, ctx);
        if (!dot(l, p).is_zero()) throw DomainError("PointNotOnLine", "the tangent line does not pass through the point");
        return l;
    }
    TangentCone tc = tangent_cone(c, p, ctx);
    if (tc.lines.size() != 1) {
        std::string names;
        for (const auto& [l, m] : tc.lines) names += (names.empty() ? "" : ", ") + line_string(l);
        throw DomainError("TangentRequired", "the tangent cone has several lines (" + names + "); pass --tangent");
    }
    return tc.lines.front().first;
}

Outcome cmd_limit(const PlaneCurve& c, const MatrixGerm& g) {
    Outcome o;
    FlatLimit fl = flat_limit(c, g);
    KernelStar ks = detect_kernel_star(fl);
    std::string star = ks.multiple_line ? "multiple line" : ks.star ? "star centered at " + to_string(*ks.center) : "no";
    o.payload = {{"germ", to_string(g)},
                 {"weight", fl.weight},
                 {"limit", to_string(fl.limit)},
                 {"kernel", fl.kernel ? json(line_string(*fl.kernel)) : json(nullptr)},
                 {"kernel_star", {{"star", ks.star}, {"multiple_line", ks.multiple_line}, {"center", ks.center ? json(to_string(*ks.center)) : json(nullptr)}}}};
    std::ostringstream os;
    os << "germ: " << to_string(g) << "\n"
       << "weight: " << fl.weight << "\n"
       << "limit: " << to_string(fl.limit) << "\n"
       << "kernel line: " << (fl.kernel ? line_string(*fl.kernel) : "none (center has rank > 1)") << "\n"
       << "kernel star: " << star << "\n";
    o.text = os.str();
    return o;
}

Outcome cmd_classify(const PlaneCurve& c, const MatrixGerm& g, TowerContext& ctx) {
    Outcome o;
    GermClass gc = classify_germ(c, g, ctx);
    o.payload = {{"germ", to_string(g)},
                 {"verdict", to_string(gc.verdict)},
                 {"detail", gc.detail},
                 {"point", gc.point ? json(to_string(*gc.point)) : json(nullptr)},
                 {"line", gc.line ? json(line_string(*gc.line)) : json(nullptr)}};
    std::ostringstream os;
    os << "verdict: " << to_string(gc.verdict) << "\n" << "detail: " << gc.detail << "\n";
    if (gc.point) os << "point: " << to_string(*gc.point) << "\n";
    if (gc.line) os << "line: " << line_string(*gc.line) << "\n";
    if (gc.verdict == GermVerdict::Type1PS || gc.verdict == GermVerdict::TypeV) {
        o.payload["b"] = gc.b;
        o.payload["c"] = gc.c;
        o.payload["equal_weights"] = gc.equal_weights;
        os << "weights: b=" << gc.b << " c=" << gc.c << (gc.equal_weights ? " (equal)" : "") << "\n";
    }
    if (gc.verdict == GermVerdict::TypeV) {
        o.payload["characteristic"] = gc.characteristic.get_str();
        o.payload["truncation"] = to_string(gc.truncation);
        os << "characteristic: " << gc.characteristic << "\n" << "truncation: z = " << to_string(gc.truncation) << "\n";
    }
    o.text = os.str();
    return o;
}

Outcome cmd_newton(const PlaneCurve& c, const Point& p, const Line& l, TowerContext& ctx) {
    Outcome o;
    NewtonPolygonData np = newton_polygon(c, Flag{p, l});
    json sides = json::array();
    std::ostringstream os;
    os << "point: " << to_string(p) << "\n" << "line: " << line_string(l) << "\n" << ascii_polygon(np);
    for (const auto& s : np.sides) {
        json js = {{"start", {s.start.j, s.start.k}}, {"end", {s.end.j, s.end.k}}, {"b", s.b}, {"c", s.c}, {"segments", s.segments}, {"in_range", s.in_range()}};
        os << "side (" << s.start.j << "," << s.start.k << ")-(" << s.end.j << "," << s.end.k << ") slope " << s.slope()
           << " segments " << s.segments;
        if (s.in_range()) {
            SideLimit sl = side_limit(np, s, ctx);
            json rho = json::array();
            for (const auto& r : sl.parts.rho) rho.push_back(r.to_string());
            js["limit"] = to_string(sl.limit);
            js["qbar"] = sl.parts.qbar;
            js["r"] = sl.parts.r;
            js["q"] = sl.parts.q;
            js["rho"] = rho;
            os << "  limit " << to_string(sl.limit);
        }
        os << "\n";
        sides.push_back(js);
    }
    json vertices = json::array();
    for (const auto& v : np.vertices) vertices.push_back({v.j, v.k});
    o.payload = {{"point", to_string(p)}, {"line", line_string(l)}, {"vertices", vertices}, {"sides", sides}, {"picture", ascii_polygon(np)}};
    o.text = os.str();
    return o;
}

Outcome cmd_branches(const PlaneCurve& c, const Point& p, const Line& l, const Rational& precision, TowerContext& ctx) {
    Outcome o;
    auto branches = puiseux_branches(c, Flag{p, l}, precision, ctx);
    std::ostringstream os;
    os << "point: " << to_string(p) << "\n" << "line: " << line_string(l) << "\n";
    json jb = json::array();
    for (const auto& b : branches) {
        std::string lhs = b.swapped ? "y" : "z", var = b.swapped ? "z" : "y";
        std::string rhs = b.terms.empty() ? "0" : to_string(b.terms, var);
        if (!b.exact) rhs += " + O(" + var + "^" + b.precision.get_str() + ")";
        os << "branch " << lhs << " = " << rhs << "  [factor " << b.factor << (b.tangent() ? ", tangent" : "") << "]\n";
        jb.push_back({{"variable", lhs}, {"terms", terms_json(b.terms)}, {"exact", b.exact}, {"precision", b.precision.get_str()},
                      {"factor", b.factor}, {"tangent", b.tangent()}});
    }
    json jc = json::array();
    try {
        for (const auto& ch : characteristics(branches)) {
            for (const auto& g : ch.groups) {
                json gamma = json::array();
                std::string gs;
                for (const auto& x : g.gamma) {
                    gamma.push_back(x.to_string());
                    gs += (gs.empty() ? "" : ", ") + x.to_string();
                }
                os << "characteristic " << ch.value << ": truncation " << (g.truncation.empty() ? "0" : to_string(g.truncation))
                   << ", gamma {" << gs << "}\n";
                jc.push_back({{"value", ch.value.get_str()}, {"truncation", terms_json(g.truncation)}, {"gamma", gamma}});
            }
        }
    } catch (const DomainError& e) {
        if (e.kind() != "PrecisionExhausted") throw;
        o.warnings.push_back(std::string(e.what()) + "; raise --precision");
    }
    o.payload = {{"point", to_string(p)}, {"line", line_string(l)}, {"branches", jb}, {"characteristics", jc}};
    o.text = os.str();
    return o;
}

json component_json(const PncComponent& comp) {
    json mk = json::array();
    for (const auto& m : comp.markings) {
        json j = {{"germ", to_string(m.germ)},
                  {"limit", to_string(m.limit)},
                  {"frame_limit", to_string(m.frame_limit)},
                  {"weight", m.weight},
                  {"contribution", m.contribution.get_str()},
                  {"sibling", m.sibling}};
        if (m.line) j["line"] = line_string(*m.line);
        if (!m.truncation.empty()) j["truncation"] = to_string(m.truncation);
        mk.push_back(j);
    }
    const PncDetail& d = comp.detail;
    json detail = {{"m", d.m}};
    if (comp.type == PncType::III) detail["A"] = d.A;
    if (comp.type == PncType::IV) {
        json rho = json::array();
        for (const auto& r : d.side->rho) rho.push_back(r.to_string());
        detail.update({{"b", d.b}, {"c", d.c}, {"S", d.S}, {"A", d.A}, {"qbar", d.side->qbar}, {"r", d.side->r}, {"q", d.side->q}, {"rho", rho}});
    }
    if (comp.type == PncType::V) {
        json gamma = json::array();
        for (const auto& g : d.gamma) gamma.push_back(g.to_string());
        detail.update({{"characteristic", d.characteristic.get_str()}, {"a", d.a}, {"b", d.b}, {"c", d.c}, {"ell", d.ell},
                       {"W", d.W.get_str()}, {"A", d.A}, {"gamma", gamma}});
    }
    return {{"type", to_string(comp.type)},
            {"point", comp.point ? json(to_string(*comp.point)) : json(nullptr)},
            {"factor", comp.factor ? json(*comp.factor) : json(nullptr)},
            {"multiplicity", comp.multiplicity.get_str()},
            {"detail", detail},
            {"markings", mk}};
}

std::string component_summary(const PncComponent& comp) {
    const PncDetail& d = comp.detail;
    std::ostringstream os;
    switch (comp.type) {
        case PncType::I:
        case PncType::II: os << "m=" << d.m; break;
        case PncType::III: os << "m=" << d.m << " A=" << d.A; break;
        case PncType::IV: os << "b/c=" << d.b << "/" << d.c << " S=" << d.S << " A=" << d.A; break;
        case PncType::V:
            os << "C=" << d.characteristic << " (a,b,c)=(" << d.a << "," << d.b << "," << d.c << ") ell=" << d.ell << " W=" << d.W
               << " A=" << d.A;
            break;
    }
    return os.str();
}

Outcome cmd_pnc(const PlaneCurve& c, const PointsInput& pts, TowerContext& ctx, const Common& common) {
    Outcome o;
    PncOptions opt;
    opt.seed = common.seed;
    opt.max_order = common.max_order;
    for (const auto& w : pts.witnesses) {
        bool placed = false;
        for (std::size_t k = 0; k < c.factors().size() && !placed; ++k)
            if (!c.is_linear_factor(k) && c.factors()[k].first.eval(w).is_zero()) {
                opt.witnesses[static_cast<int>(k)] = w;
                placed = true;
            }
        if (!placed) throw DomainError("PointNotOnCurve", "witness " + to_string(w) + " lies on no nonlinear factor");
    }
    std::vector<Point> points;
    for (const auto& h : pts.points) points.push_back(h.point);
    PncReport rep = assemble_pnc(c, points, ctx, opt);
    std::ostringstream os;
    os << "points:\n";
    json jp = json::array();
    for (const auto& sp : rep.points) {
        os << "  " << to_string(sp.point) << " " << to_string(sp.kind) << "\n";
        jp.push_back({{"point", to_string(sp.point)}, {"kind", to_string(sp.kind)}});
    }
    os << "components:\n";
    json jc = json::array();
    for (const auto& comp : rep.components) {
        os << "  " << to_string(comp.type);
        if (comp.point) os << " at " << to_string(*comp.point);
        if (comp.factor) os << " factor " << *comp.factor;
        os << ": multiplicity " << comp.multiplicity << "  [" << component_summary(comp) << "]\n";
        for (const auto& m : comp.markings) {
            os << "    germ " << to_string(m.germ) << "\n"
               << "      weight " << m.weight << ", contribution " << m.contribution << (m.sibling ? " (sibling)" : "") << "\n"
               << "      limit " << to_string(m.limit) << "\n";
        }
        jc.push_back(component_json(comp));
    }
    os << "total: " << rep.total() << "\n";
    json je = json::array();
    for (const auto& e : rep.errors) {
        os << "error in " << e.where << ": " << e.kind << ": " << e.message << "\n";
        je.push_back({{"where", e.where}, {"kind", e.kind}, {"message", e.message}});
    }
    o.warnings = rep.warnings;
    o.payload = {{"points", jp}, {"components", jc}, {"total", rep.total().get_str()}, {"errors", je}};
    o.text = os.str();
    o.code = rep.errors.empty() ? 0 : 2;
    return o;
}

Outcome cmd_app(int n, const std::vector<ContributionSpec>& contribs, int dim, int stabilizer) {
    Outcome o;
    std::vector<TruncH> values;
    json jc = json::array();
    std::ostringstream os;
    for (const auto& c : contribs) {
        values.push_back(c.value);
        os << "contribution " << c.label << ": " << to_string(c.value) << "\n";
        jc.push_back({{"label", c.label}, {"value", to_string(c.value)}});
    }
    TruncH app = app_assemble(n, values);
    OrbitDegree od = predegree_and_degree(app, dim, stabilizer);
    os << "app: " << to_string(app) << "\n"
       << "predegree: " << od.predegree << "\n"
       << "degree: " << od.degree << "\n";
    o.payload = {{"n", n}, {"dim", dim}, {"stabilizer", stabilizer}, {"contributions", jc}, {"app", to_string(app)},
                 {"predegree", od.predegree.get_str()}, {"degree", od.degree.get_str()}};
    o.text = os.str();
    return o;
}

void emit(const std::string& command, const Outcome& o, const PlaneCurve* c, const Common& common, double ms, std::ostream& out,
          std::ostream& err) {
    if (common.format == "json") {
        json j = {{"schema", 1}, {"command", command}};
        if (c) j["curve"] = curve_json(*c);
        j["result"] = o.payload;
        j["warnings"] = o.warnings;
        if (common.timing) j["timing_ms"] = ms;
        out << j.dump(2) << "\n";
        return;
    }
    if (c) out << curve_text(*c);
    out << o.text;
    for (const auto& w : o.warnings) err << "warning: " << w << "\n";
    if (common.timing) out << "time: " << ms << " ms\n";
}

}  // namespace

std::string ascii_polygon(const NewtonPolygonData& np) {
    int jmax = 0, kmax = 0;
    for (const auto& p : np.support) {
        jmax = std::max(jmax, p.j);
        kmax = std::max(kmax, p.k);
    }
    std::vector<std::string> grid(kmax + 1, std::string(jmax + 1, '.'));
    for (const auto& p : np.support) grid[p.k][p.j] = '*';
    for (const auto& s : np.sides) {
        if (!s.in_range()) continue;
        int dj = (s.end.j - s.start.j) / s.segments, dk = (s.end.k - s.start.k) / s.segments;
        for (int t = 0; t <= s.segments; ++t) grid[s.start.k + t * dk][s.start.j + t * dj] = '+';
    }
    for (const auto& v : np.vertices) grid[v.k][v.j] = 'o';
    std::ostringstream os;
    int width = static_cast<int>(std::to_string(std::max(jmax, kmax)).size());
    for (int k = kmax; k >= 0; --k) {
        std::string label = std::to_string(k);
        os << std::string(width - label.size(), ' ') << label << " |";
        for (int j = 0; j <= jmax; ++j) os << std::string(width, ' ') << grid[k][j];
        os << "\n";
    }
    os << std::string(width, ' ') << " +" << std::string((jmax + 1) * (width + 1), '-') << "\n";
    os << std::string(width + 2, ' ');
    for (int j = 0; j <= jmax; ++j) {
        std::string label = std::to_string(j);
        os << std::string(width + 1 - label.size(), ' ') << label;
    }
    os << "\n";
    return os.str();
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Flat limits and normal cone components of plane curves"};
    app.require_subcommand(1);
    app.fallthrough();
    Common common;
    app.add_option("--format", common.format, "Output format")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--seed", common.seed, "Seed for randomized searches");
    app.add_option("--max-order", common.max_order, "Bound on root of unity orders")->check(CLI::PositiveNumber);
    app.add_flag("--allow-extension,!--no-allow-extension", common.allow_extension, "Adjoin radicals when roots are missing");
    app.add_flag("--timing", common.timing, "Report elapsed time");

    std::string curve_path, germ_path, points_path, contrib_path;
    std::optional<std::string> point_text, tangent_text;
    std::string precision_text = "4";
    std::optional<int> n_opt, dim_opt, stab_opt;
    std::vector<std::string> inline_contribs;

    auto* limit = app.add_subcommand("limit", "Flat limit of a curve along a germ");
    limit->add_option("--curve", curve_path)->required();
    limit->add_option("--germ", germ_path)->required();
    auto* classify = app.add_subcommand("classify", "Classify a germ against a curve");
    classify->add_option("--curve", curve_path)->required();
    classify->add_option("--germ", germ_path)->required();
    auto* pnc = app.add_subcommand("pnc", "Components of the projective normal cone");
    pnc->add_option("--curve", curve_path)->required();
    pnc->add_option("--points", points_path, "Points file; defaults to the automatic search");
    auto* newton = app.add_subcommand("newton", "Newton polygon at a flag");
    auto* branches = app.add_subcommand("branches", "Formal branches at a flag");
    for (auto* sc : {newton, branches}) {
        sc->add_option("--curve", curve_path)->required();
        sc->add_option("--point", point_text, "Point such as (1:0:0)");
        sc->add_option("--tangent", tangent_text, "Flag line such as z");
        sc->add_option("--points", points_path, "Points file; its first point and tangent are used");
    }
    branches->add_option("--precision", precision_text, "Exponent bound for the expansions");
    auto* appcmd = app.add_subcommand("app", "Adjusted predegree polynomial and orbit degree");
    appcmd->add_option("--contrib", contrib_path, "Contribution file");
    appcmd->add_option("--add", inline_contribs, "Extra contribution, e.g. 'flex(1)'");
    appcmd->add_option("-n,--n", n_opt, "Total weighted degree");
    appcmd->add_option("--dim", dim_opt, "Orbit dimension (default 8)");
    appcmd->add_option("--stabilizer", stab_opt, "Stabilizer order (default 1)");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 1;
    }

    auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count(); };
    try {
        TowerContext ctx(nullptr, common.allow_extension);
        std::string command = app.get_subcommands().front()->get_name();
        if (command == "app") {
            AppInput in;
            if (!contrib_path.empty()) in = parse_contributions(read_text_file(contrib_path));
            for (std::size_t k = 0; k < inline_contribs.size(); ++k)
                in.contributions.push_back(parse_contribution(inline_contribs[k], static_cast<int>(k) + 1, 1));
            if (n_opt) in.n = n_opt;
            if (dim_opt) in.dim = dim_opt;
            if (stab_opt) in.stabilizer = stab_opt;
            if (!in.n) {
                err << "usage error: the total degree n is required (--n or 'n:' in the contribution file)\n";
                return 1;
            }
            Outcome o = cmd_app(*in.n, in.contributions, in.dim.value_or(8), in.stabilizer.value_or(1));
            emit(command, o, nullptr, common, elapsed(), out, err);
            return o.code;
        }
        PlaneCurve curve = parse_curve(read_text_file(curve_path), ctx);
        Outcome o;
        if (command == "limit" || command == "classify") {
            MatrixGerm g = parse_germ(read_text_file(germ_path), ctx);
            o = command == "limit" ? cmd_limit(curve, g) : cmd_classify(curve, g, ctx);
        } else if (command == "pnc") {
            PointsInput pts;
            if (!points_path.empty()) pts = parse_points(read_text_file(points_path), ctx);
            o = cmd_pnc(curve, pts, ctx, common);
        } else {
            Point p;
            if (point_text) {
                p = parse_point(*point_text, ctx);
            } else if (!points_path.empty()) {
                PointsInput pts = parse_points(read_text_file(points_path), ctx);
                if (pts.points.empty()) throw ParseError("points file has no point", 1, 1);
                p = pts.points.front().point;
                if (!tangent_text && pts.points.front().tangent) tangent_text = line_string(*pts.points.front().tangent);
            } else {
                err << "usage error: --point or --points is required\n";
                return 1;
            }
            p = normalize_point(p);
            if (!curve.form().eval(p).is_zero()) throw DomainError("PointNotOnCurve", to_string(p) + " is not on the curve");
            Line l = choose_tangent(curve, p, tangent_text, ctx);
            if (command == "newton") {
                o = cmd_newton(curve, p, l, ctx);
            } else {
                static const std::regex rat(R"(^[0-9]+(/[1-9][0-9]*)?$)");
                if (!std::regex_match(precision_text, rat)) {
                    err << "usage error: --precision expects a positive rational such as 4 or 7/2\n";
                    return 1;
                }
                Rational prec(precision_text);
                prec.canonicalize();
                o = cmd_branches(curve, p, l, prec, ctx);
            }
        }
        emit(command, o, &curve, common, elapsed(), out, err);
        return o.code;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace curveorbit
