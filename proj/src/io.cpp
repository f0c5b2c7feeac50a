#include "curveorbit/io.hpp"

#include <cctype>
#include <fstream>
#include <regex>
#include <sstream>
#include <string_view>

namespace curveorbit {

namespace {

class Parser {
public:
    Parser(std::string_view text, int line, int column, TowerContext& ctx, std::string vars)
        : s_(text), line_(line), col0_(column), ctx_(ctx), vars_(std::move(vars)) {}

    Form expr() {
        skip();
        Form out;
        bool neg = accept('-');
        if (!neg) accept('+');
        out = term();
        if (neg) out = -out;
        while (true) {
            skip();
            if (accept('+'))
                out += term();
            else if (accept('-'))
                out -= term();
            else
                return out;
        }
    }

    ExactScalar constant() {
        std::size_t at = pos_;
        Form f = expr();
        if (f.is_zero()) return ExactScalar(0);
        if (f.degree() != 0) fail_at(at, "expected a constant");
        return f.coeff({0, 0, 0});
    }

    void expect(char c) {
        skip();
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    void finish() {
        skip();
        if (pos_ < s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    }

    [[noreturn]] void fail(const std::string& msg) const { fail_at(pos_, msg); }
    [[noreturn]] void fail_at(std::size_t at, const std::string& msg) const {
        throw ParseError(msg, line_, col0_ + static_cast<int>(at));
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;
    int line_;
    int col0_;
    TowerContext& ctx_;
    std::string vars_;

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    bool starts_primary() {
        skip();
        if (pos_ >= s_.size()) return false;
        char c = s_[pos_];
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '(';
    }

    Form term() {
        Form out = power();
        while (true) {
            skip();
            if (accept('*')) {
                out *= power();
            } else if (accept('/')) {
                std::size_t at = pos_;
                Form d = power();
                if (d.is_zero()) fail_at(at, "division by zero");
                if (d.degree() != 0) fail_at(at, "division by a non-constant");
                out = out.scaled(d.coeff({0, 0, 0}).inverse());
            } else if (starts_primary()) {
                out *= power();
            } else {
                return out;
            }
        }
    }

    Form power() {
        skip();
        if (accept('-')) return -power();
        Form base = primary();
        skip();
        if (accept('^')) {
            skip();
            std::size_t at = pos_;
            if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
                fail("expected a nonnegative integer exponent");
            Integer e = integer();
            if (e > 1000) fail_at(at, "exponent too large");
            return base.pow(static_cast<int>(e.get_si()));
        }
        return base;
    }

    Integer integer() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        return Integer(std::string(s_.substr(start, pos_ - start)));
    }

    Form primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (accept('(')) {
            Form f = expr();
            expect(')');
            return f;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return Form(ExactScalar(integer()));
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            std::string name(s_.substr(start, pos_ - start));
            if (name.size() == 1 && vars_.find(name[0]) != std::string::npos) return Form::var(static_cast<int>(vars_.find(name[0])));
            if (ctx_.tower())
                if (auto k = ctx_.tower()->find(name)) return Form(ExactScalar::generator(ctx_.tower(), *k));
            if (name == "i") return Form(ctx_.adjoin(2, ExactScalar(-1)));
            fail_at(start, "unknown identifier '" + name + "'");
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }
};

struct SourceLine {
    int number;
    std::string text;
};

std::vector<SourceLine> split_lines(const std::string& text) {
    std::vector<SourceLine> out;
    std::istringstream is(text);
    std::string line;
    int n = 0;
    while (std::getline(is, line)) {
        ++n;
        if (auto h = line.find('#'); h != std::string::npos) line = line.substr(0, h);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        out.push_back({n, line});
    }
    return out;
}

bool blank(const std::string& s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

std::size_t first_nonspace(const std::string& s, std::size_t from = 0) {
    while (from < s.size() && std::isspace(static_cast<unsigned char>(s[from]))) ++from;
    return from;
}

// "key: rest" -> key and the offset of rest.
std::optional<std::pair<std::string, std::size_t>> directive(const std::string& s) {
    static const std::regex re(R"(^\s*([A-Za-z_]+)\s*:)");
    std::smatch m;
    if (!std::regex_search(s, m, re)) return std::nullopt;
    return std::make_pair(m[1].str(), static_cast<std::size_t>(m.length(0)));
}

bool handle_radical(const SourceLine& l, TowerContext& ctx) {
    static const std::regex re(R"(^\s*radical\s+([A-Za-z_][A-Za-z0-9_]*)\s*\^\s*([0-9]+)\s*=\s*(.*)$)");
    std::size_t p = first_nonspace(l.text);
    if (l.text.compare(p, 7, "radical") != 0) return false;
    std::smatch m;
    if (!std::regex_match(l.text, m, re)) throw ParseError("expected 'radical <name>^<n> = <value>'", l.number, static_cast<int>(p) + 1);
    std::string name = m[1].str();
    int col = static_cast<int>(m.position(1)) + 1;
    if (name == "x" || name == "y" || name == "z" || name == "t" || name == "i") throw ParseError("reserved name '" + name + "'", l.number, col);
    if (ctx.tower() && ctx.tower()->find(name)) throw ParseError("radical '" + name + "' already declared", l.number, col);
    int degree = std::stoi(m[2].str());
    if (degree < 2) throw ParseError("radical degree must be at least 2", l.number, static_cast<int>(m.position(2)) + 1);
    Parser p2(m[3].str(), l.number, static_cast<int>(m.position(3)) + 1, ctx, "");
    ExactScalar value = p2.constant();
    p2.finish();
    if (value.is_zero()) throw ParseError("radical value must be nonzero", l.number, static_cast<int>(m.position(3)) + 1);
    ctx.absorb(value.tower());
    ctx.absorb(Tower::extend(ctx.tower(), name, degree, value.lifted(ctx.tower()).terms()));
    return true;
}

Point parse_point_at(const std::string& text, int line, int column, TowerContext& ctx) {
    Parser p(text, line, column, ctx, "");
    p.expect('(');
    Point pt;
    for (int k = 0; k < 3; ++k) {
        if (k > 0) p.expect(':');
        pt[k] = p.constant();
    }
    p.expect(')');
    p.finish();
    if (pt[0].is_zero() && pt[1].is_zero() && pt[2].is_zero()) throw ParseError("point (0 : 0 : 0)", line, column);
    return pt;
}

Form parse_form_at(const std::string& text, int line, int column, TowerContext& ctx, const std::string& vars) {
    Parser p(text, line, column, ctx, vars);
    Form f = p.expr();
    p.finish();
    return f;
}

Line parse_line_at(const std::string& text, int line, int column, TowerContext& ctx) {
    Form f = parse_form_at(text, line, column, ctx, "xyz");
    if (f.degree() != 1 || !f.is_homogeneous()) throw ParseError("expected a linear form in x, y, z", line, column);
    return Line{f.coeff({1, 0, 0}), f.coeff({0, 1, 0}), f.coeff({0, 0, 1})};
}

TPoly to_series(const Form& f) {
    TPoly out;
    for (const auto& [m, c] : f.terms()) out += TPoly::monomial(c, m[0]);
    return out;
}

}  // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'", 0, 0);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

PlaneCurve parse_curve(const std::string& text, TowerContext& ctx) {
    static const std::regex powered(R"(^\s*(\(.*\)|[A-Za-z_][A-Za-z0-9_]*)\s*\^\s*([0-9]+)\s*$)");
    std::vector<std::pair<Form, int>> factors;
    int last = 1;
    for (const auto& l : split_lines(text)) {
        last = l.number;
        if (blank(l.text) || handle_radical(l, ctx)) continue;
        auto d = directive(l.text);
        if (!d) throw ParseError("expected 'factor:' or 'radical'", l.number, static_cast<int>(first_nonspace(l.text)) + 1);
        if (d->first != "factor") throw ParseError("unknown directive '" + d->first + "'", l.number, static_cast<int>(first_nonspace(l.text)) + 1);
        std::string rest = l.text.substr(d->second);
        int col = static_cast<int>(d->second) + 1;
        std::smatch m;
        Form f;
        int mult = 1;
        bool whole_group = false;
        if (std::regex_match(rest, m, powered)) {
            std::string g = m[1].str();
            whole_group = g[0] != '(';
            if (!whole_group) {
                int depth = 0;
                whole_group = true;
                for (std::size_t k = 0; k < g.size(); ++k) {
                    depth += g[k] == '(' ? 1 : g[k] == ')' ? -1 : 0;
                    if (depth == 0 && k + 1 < g.size()) whole_group = false;
                }
            }
            if (whole_group) {
                f = parse_form_at(g, l.number, col + static_cast<int>(m.position(1)), ctx, "xyz");
                mult = std::stoi(m[2].str());
                if (mult < 1) throw ParseError("multiplicity must be positive", l.number, col + static_cast<int>(m.position(2)));
            }
        }
        if (!whole_group) f = parse_form_at(rest, l.number, col, ctx, "xyz");
        if (f.is_zero() || f.degree() < 1) throw ParseError("factor must have positive degree", l.number, col);
        if (!f.is_homogeneous()) throw ParseError("factor is not homogeneous", l.number, col);
        factors.emplace_back(f, mult);
    }
    if (factors.empty()) throw ParseError("no factors", last, 1);
    return PlaneCurve(factors, ctx.tower());
}

MatrixGerm parse_germ(const std::string& text, TowerContext& ctx) {
    struct Entry {
        std::string text;
        int line;
        int column;
    };
    std::vector<Entry> entries;
    int last_line = 1, last_col = 1;
    for (const auto& l : split_lines(text)) {
        if (blank(l.text) || handle_radical(l, ctx)) continue;
        std::size_t start = 0;
        int depth = 0;
        for (std::size_t k = 0; k <= l.text.size(); ++k) {
            char c = k < l.text.size() ? l.text[k] : ',';
            if (c == '(') ++depth;
            if (c == ')') --depth;
            if (c == ',' && depth == 0) {
                std::string piece = l.text.substr(start, k - start);
                bool trailing = k == l.text.size();
                if (!(trailing && blank(piece))) {
                    if (blank(piece)) throw ParseError("empty entry", l.number, static_cast<int>(k) + 1);
                    entries.push_back({piece, l.number, static_cast<int>(start) + 1});
                }
                start = k + 1;
            }
        }
        last_line = l.number;
        last_col = static_cast<int>(l.text.size()) + 1;
    }
    if (entries.size() != 9)
        throw ParseError("expected 9 entries, found " + std::to_string(entries.size()), last_line, last_col);
    Mat3t m;
    for (int k = 0; k < 9; ++k) {
        const Entry& e = entries[k];
        m(k / 3, k % 3) = to_series(parse_form_at(e.text, e.line, e.column, ctx, "t"));
    }
    return MatrixGerm(m);
}

PointsInput parse_points(const std::string& text, TowerContext& ctx) {
    PointsInput out;
    for (const auto& l : split_lines(text)) {
        if (blank(l.text) || handle_radical(l, ctx)) continue;
        auto d = directive(l.text);
        int col0 = static_cast<int>(first_nonspace(l.text)) + 1;
        if (!d) throw ParseError("expected 'point:', 'tangent:' or 'witness:'", l.number, col0);
        std::string rest = l.text.substr(d->second);
        int col = static_cast<int>(d->second) + 1;
        if (d->first == "point") {
            out.points.push_back({parse_point_at(rest, l.number, col, ctx), std::nullopt});
        } else if (d->first == "tangent") {
            if (out.points.empty()) throw ParseError("tangent before any point", l.number, col0);
            Line t = parse_line_at(rest, l.number, col, ctx);
            if (!dot(t, out.points.back().point).is_zero()) throw ParseError("tangent line does not contain the point", l.number, col);
            out.points.back().tangent = t;
        } else if (d->first == "witness") {
            out.witnesses.push_back(parse_point_at(rest, l.number, col, ctx));
        } else {
            throw ParseError("unknown directive '" + d->first + "'", l.number, col0);
        }
    }
    return out;
}

Point parse_point(const std::string& text, TowerContext& ctx) { return parse_point_at(text, 1, 1, ctx); }

Line parse_line(const std::string& text, TowerContext& ctx) { return parse_line_at(text, 1, 1, ctx); }

Form parse_form(const std::string& text, TowerContext& ctx) { return parse_form_at(text, 1, 1, ctx, "xyz"); }

TPoly parse_series(const std::string& text, TowerContext& ctx) { return to_series(parse_form_at(text, 1, 1, ctx, "t")); }

ContributionSpec parse_contribution(const std::string& text, int line, int column) {
    static const std::regex times(R"(^(.*?)\s*\*\s*([0-9]+)\s*$)");
    static const std::regex named(R"(^\s*([A-Za-z]+)\s*\(([^()]*)\)\s*$)");
    static const std::regex rational(R"(^[+-]?[0-9]+(/[0-9]+)?$)");
    std::string body = text;
    int count = 1;
    std::smatch m;
    if (std::regex_match(text, m, times)) {
        body = m[1].str();
        count = std::stoi(m[2].str());
    }
    ContributionSpec out;
    std::size_t p = first_nonspace(body);
    if (p < body.size() && std::isalpha(static_cast<unsigned char>(body[p]))) {
        if (!std::regex_match(body, m, named)) throw ParseError("expected name(arguments)", line, column + static_cast<int>(p));
        std::string name = m[1].str();
        std::vector<int> args;
        std::istringstream is(m[2].str());
        std::string tok;
        while (std::getline(is, tok, ',')) {
            std::size_t a = first_nonspace(tok), b = tok.find_last_not_of(" \t");
            std::string t = a < tok.size() ? tok.substr(a, b - a + 1) : "";
            if (!std::regex_match(t, std::regex(R"([0-9]+)")))
                throw ParseError("expected a nonnegative integer argument", line, column + static_cast<int>(m.position(2)));
            args.push_back(std::stoi(t));
        }
        auto need = [&](std::size_t k) {
            if (args.size() != k)
                throw ParseError(name + " takes " + std::to_string(k) + " arguments", line, column + static_cast<int>(p));
        };
        if (name == "typeI") {
            if (args.size() < 2) throw ParseError("typeI takes m, n and intersection multiplicities", line, column + static_cast<int>(p));
            out.value = contribution_type_I(args[0], std::vector<int>(args.begin() + 2, args.end()), args[1]);
        } else if (name == "typeII") {
            need(3);
            out.value = contribution_type_II(args[0], args[1], args[2]);
        } else if (name == "flex") {
            need(1);
            out.value = contribution_flex(args[0]);
        } else if (name == "node") {
            need(2);
            out.value = contribution_node(args[0], args[1]);
        } else if (name == "star") {
            need(1);
            out.value = contribution_star_typeIII(args[0]);
        } else {
            throw ParseError("unknown contribution '" + name + "'", line, column + static_cast<int>(p));
        }
        out.label = name + "(" + m[2].str() + ")";
    } else {
        std::vector<Rational> coeffs;
        std::istringstream is(body);
        std::string tok;
        while (is >> tok) {
            if (!std::regex_match(tok, rational)) throw ParseError("expected a rational, found '" + tok + "'", line, column);
            Rational r(tok);
            if (r.get_den() == 0) throw ParseError("zero denominator", line, column);
            r.canonicalize();
            coeffs.push_back(r);
        }
        if (coeffs.empty() || coeffs.size() > 6) throw ParseError("expected 1 to 6 coefficients (H^3 .. H^8)", line, column);
        out.value = contribution_raw(coeffs);
        out.label = "raw";
    }
    if (count != 1) {
        out.value = out.value.scaled(count);
        out.label += " * " + std::to_string(count);
    }
    return out;
}

AppInput parse_contributions(const std::string& text) {
    AppInput out;
    for (const auto& l : split_lines(text)) {
        if (blank(l.text)) continue;
        auto d = directive(l.text);
        int col0 = static_cast<int>(first_nonspace(l.text)) + 1;
        if (!d) throw ParseError("expected 'contrib:', 'n:', 'dim:' or 'stabilizer:'", l.number, col0);
        std::string rest = l.text.substr(d->second);
        int col = static_cast<int>(d->second) + 1;
        auto integer = [&]() {
            std::size_t a = first_nonspace(rest), b = rest.find_last_not_of(" \t");
            std::string t = a < rest.size() ? rest.substr(a, b - a + 1) : "";
            if (!std::regex_match(t, std::regex(R"([0-9]+)"))) throw ParseError("expected a nonnegative integer", l.number, col);
            return std::stoi(t);
        };
        if (d->first == "contrib")
            out.contributions.push_back(parse_contribution(rest, l.number, col));
        else if (d->first == "n")
            out.n = integer();
        else if (d->first == "dim")
            out.dim = integer();
        else if (d->first == "stabilizer")
            out.stabilizer = integer();
        else
            throw ParseError("unknown directive '" + d->first + "'", l.number, col0);
    }
    return out;
}

}  // namespace curveorbit
