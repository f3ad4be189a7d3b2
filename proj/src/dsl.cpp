#include "quon/dsl.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>

#include "quon/error.hpp"

namespace quon {

namespace {

const std::set<std::string> kReserved = {"dim",  "let",   "check", "eval", "scalar", "braid", "id",   "cap",
                                         "cup",  "bspider", "wspider", "F", "F2",   "G",     "X",    "Y",
                                         "Z",    "CNOT",  "ghz",   "max",  "bell"};

std::optional<GateName> gate_atom(const std::string &s) {
    static const std::map<std::string, GateName> table = {
        {"F", GateName::F}, {"F2", GateName::F2}, {"G", GateName::G},      {"X", GateName::X},
        {"Y", GateName::Y}, {"Z", GateName::Z},   {"CNOT", GateName::CNOT}};
    auto it = table.find(s);
    if (it == table.end()) {
        return std::nullopt;
    }
    return it->second;
}

class LineParser {
   public:
    LineParser(const std::string &text, int line, const std::set<std::string> &names)
        : s_(text), line_(line), names_(names) {
    }

    Statement statement() {
        Statement st;
        st.line = line_;
        skip();
        int kw_col = col();
        std::string kw = ident();
        if (kw == "dim") {
            st.kind = Statement::Kind::Dim;
            st.dim = integer("dimension");
            if (st.dim < 1) {
                fail(kw_col, "dimension must be positive");
            }
        } else if (kw == "let") {
            skip();
            int name_col = col();
            st.name = ident();
            if (st.name.empty()) {
                fail(name_col, "expected a name");
            }
            if (kReserved.count(st.name)) {
                fail(name_col, "'" + st.name + "' is a reserved word");
            }
            if (names_.count(st.name)) {
                fail(name_col, "'" + st.name + "' is already defined");
            }
            expect('=');
            skip();
            if (s_.compare(pos_, 6, "braid:") == 0) {
                pos_ += 6;
                st.kind = Statement::Kind::LetBraid;
                st.word = word();
            } else {
                st.kind = Statement::Kind::Let;
                st.lhs = expr();
            }
        } else if (kw == "check") {
            st.kind = Statement::Kind::Check;
            st.lhs = expr();
            skip();
            if (s_.compare(pos_, 2, "==") != 0) {
                fail(col(), "expected one of: '==', ';', '|'");
            }
            pos_ += 2;
            st.rhs = expr();
            skip();
            if (!at_end()) {
                int c = col();
                std::string kw2 = ident();
                if (kw2 != "scalar") {
                    fail(c, "expected one of: 'scalar', ';', '|', end of line");
                }
                st.scalar = scalar();
            }
        } else if (kw == "eval") {
            st.kind = Statement::Kind::Eval;
            st.lhs = expr();
        } else {
            fail(kw_col, "expected one of: 'dim', 'let', 'check', 'eval'");
        }
        skip();
        if (!at_end()) {
            fail(col(), "expected end of line");
        }
        return st;
    }

   private:
    const std::string &s_;
    std::size_t pos_ = 0;
    int line_;
    const std::set<std::string> &names_;

    int col() const {
        return static_cast<int>(pos_) + 1;
    }
    [[noreturn]] void fail(int column, const std::string &msg) const {
        throw ParseError(line_, column, msg);
    }
    bool at_end() const {
        return pos_ >= s_.size() || s_[pos_] == '#';
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
            pos_++;
        }
    }
    char peek() {
        skip();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    void expect(char c) {
        if (peek() != c) {
            fail(col(), std::string("expected '") + c + "'");
        }
        pos_++;
    }
    std::string ident() {
        skip();
        std::size_t start = pos_;
        if (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
                pos_++;
            }
        }
        return s_.substr(start, pos_ - start);
    }
    int integer(const std::string &what, bool allow_sign = false) {
        skip();
        std::size_t start = pos_;
        if (allow_sign && pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) {
            pos_++;
        }
        std::size_t digits = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            pos_++;
        }
        if (pos_ == digits || pos_ - digits > 6) {
            fail(static_cast<int>(start) + 1, "expected " + what);
        }
        return std::stoi(s_.substr(start, pos_ - start));
    }

    Expr expr() {
        Expr first = term();
        if (peek() != ';') {
            return first;
        }
        Expr seq;
        seq.kind = Expr::Kind::Seq;
        seq.parts.push_back(std::move(first));
        while (peek() == ';') {
            pos_++;
            seq.parts.push_back(term());
        }
        return seq;
    }

    Expr term() {
        Expr first = atom();
        if (peek() != '|') {
            return first;
        }
        Expr par;
        par.kind = Expr::Kind::Par;
        par.parts.push_back(std::move(first));
        while (peek() == '|') {
            pos_++;
            par.parts.push_back(atom());
        }
        return par;
    }

    Expr atom() {
        if (peek() == '(') {
            pos_++;
            Expr e = expr();
            expect(')');
            return e;
        }
        int c = col();
        std::string w = ident();
        Expr e;
        if (w.empty()) {
            fail(c, "expected a diagram: 'id(', 'cap', 'cup', 'bspider(', 'wspider(', a gate, 'ghz(', 'max(', "
                    "'bell+', 'bell-', a name or '('");
        }
        if (w == "id") {
            e.kind = Expr::Kind::Id;
            expect('(');
            e.a = integer("wire count");
            expect(')');
        } else if (w == "cap") {
            e.kind = Expr::Kind::Cap;
        } else if (w == "cup") {
            e.kind = Expr::Kind::Cup;
        } else if (w == "bspider" || w == "wspider") {
            e.kind = w == "bspider" ? Expr::Kind::BSpider : Expr::Kind::WSpider;
            expect('(');
            e.a = integer("input leg count");
            expect(',');
            e.b = integer("output leg count");
            expect(')');
        } else if (auto g = gate_atom(w)) {
            e.kind = Expr::Kind::Gate;
            e.gate = *g;
        } else if (w == "ghz" || w == "max") {
            e.kind = w == "ghz" ? Expr::Kind::Ghz : Expr::Kind::Max;
            expect('(');
            int nc = col();
            e.a = integer("party count");
            if (e.a < 1) {
                fail(nc, "party count must be positive");
            }
            expect(')');
        } else if (w == "bell") {
            if (pos_ < s_.size() && s_[pos_] == '+') {
                e.kind = Expr::Kind::BellPlus;
            } else if (pos_ < s_.size() && s_[pos_] == '-') {
                e.kind = Expr::Kind::BellMinus;
            } else {
                fail(col(), "expected '+' or '-'");
            }
            pos_++;
        } else if (kReserved.count(w)) {
            fail(c, "'" + w + "' cannot start a diagram");
        } else if (names_.count(w)) {
            e.kind = Expr::Kind::Ref;
            e.name = w;
        } else {
            fail(c, "undefined name '" + w + "'");
        }
        return e;
    }

    std::vector<StrandGen> word() {
        std::vector<StrandGen> gens;
        while (true) {
            skip();
            if (at_end()) {
                break;
            }
            int c = col();
            char head = s_[pos_];
            if (head == 'b') {
                pos_++;
                int p = integer("braid position");
                if (p < 1 || p > 3) {
                    fail(c, "braid position must be 1, 2 or 3");
                }
                int sign = 1;
                if (pos_ < s_.size() && s_[pos_] == '\'') {
                    sign = -1;
                    pos_++;
                }
                gens.push_back(StrandGen::braid(p, sign));
            } else if (head == 'c') {
                pos_++;
                int strand = integer("strand");
                if (strand < 1 || strand > 4) {
                    fail(c, "strand must be 1..4");
                }
                if (pos_ >= s_.size() || s_[pos_] != ':') {
                    fail(col(), "expected ':'");
                }
                pos_++;
                if (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
                    fail(col(), "expected charge");
                }
                int g = integer("charge", true);
                gens.push_back(StrandGen::charge(strand, g));
            } else {
                fail(c, "expected one of: 'bK', \"bK'\", 'cS:g'");
            }
            if (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != '#') {
                fail(col(), "expected whitespace between word tokens");
            }
        }
        if (gens.empty()) {
            fail(col(), "expected at least one word token");
        }
        return gens;
    }

    ScalarSpec scalar() {
        skip();
        ScalarSpec sp;
        if (s_.compare(pos_, 3, "d^(") == 0) {
            pos_ += 3;
            sp.power = true;
            sp.num = integer("exponent numerator", true);
            if (peek() == '/') {
                pos_++;
                int c = col();
                sp.den = integer("exponent denominator");
                if (sp.den == 0) {
                    fail(c, "zero denominator");
                }
            }
            expect(')');
            return sp;
        }
        sp.power = false;
        int c = col();
        double re = 0.0;
        double im = 0.0;
        // real part, optional signed imaginary part ending in 'i'
        auto number = [&](double &out) {
            const char *begin = s_.c_str() + pos_;
            char *end = nullptr;
            out = std::strtod(begin, &end);
            if (end == begin) {
                return false;
            }
            pos_ += static_cast<std::size_t>(end - begin);
            return true;
        };
        auto unit_i = [&](double sign) {
            if (pos_ < s_.size() && s_[pos_] == 'i') {
                pos_++;
                im = sign;
                return true;
            }
            return false;
        };
        std::size_t start = pos_;
        double sign = 1.0;
        if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) {
            sign = s_[pos_] == '-' ? -1.0 : 1.0;
            pos_++;
        }
        if (!unit_i(sign)) {
            pos_ = start;
            double x = 0.0;
            if (!number(x)) {
                fail(c, "expected one of: 'd^(', complex literal");
            }
            if (pos_ < s_.size() && s_[pos_] == 'i') {
                pos_++;
                im = x;
            } else {
                re = x;
                if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) {
                    double s2 = s_[pos_] == '-' ? -1.0 : 1.0;
                    std::size_t mark = pos_;
                    pos_++;
                    if (!unit_i(s2)) {
                        pos_ = mark;
                        double y = 0.0;
                        if (!number(y) || pos_ >= s_.size() || s_[pos_] != 'i') {
                            fail(static_cast<int>(mark) + 1, "expected imaginary part ending in 'i'");
                        }
                        pos_++;
                        im = y;
                    }
                }
            }
        }
        sp.value = cplx{re, im};
        return sp;
    }
};

std::string render_part(const Expr &e, bool in_par) {
    bool wrap = (e.kind == Expr::Kind::Seq) || (in_par && e.kind == Expr::Kind::Par);
    return wrap ? "(" + render(e) + ")" : render(e);
}

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

cplx ScalarSpec::eval(int d) const {
    if (power) {
        return std::pow(static_cast<double>(d), static_cast<double>(num) / den);
    }
    return value;
}

std::optional<int> Document::dim() const {
    for (const auto &s : statements) {
        if (s.kind == Statement::Kind::Dim) {
            return s.dim;
        }
    }
    return std::nullopt;
}

Document parse_document(const std::string &text) {
    Document doc;
    std::set<std::string> names;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool seen_dim = false;
    bool seen_other = false;
    while (std::getline(in, line)) {
        lineno++;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        std::size_t first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        LineParser p(line, lineno, names);
        Statement st = p.statement();
        if (st.kind == Statement::Kind::Dim) {
            if (seen_dim) {
                throw ParseError(lineno, static_cast<int>(first) + 1, "dimension declared twice");
            }
            if (seen_other) {
                throw ParseError(lineno, static_cast<int>(first) + 1, "'dim' must precede other statements");
            }
            seen_dim = true;
        } else {
            seen_other = true;
        }
        if (st.kind == Statement::Kind::Let || st.kind == Statement::Kind::LetBraid) {
            names.insert(st.name);
        }
        doc.statements.push_back(std::move(st));
    }
    return doc;
}

std::string render(const Expr &e) {
    switch (e.kind) {
        case Expr::Kind::Id:
            return "id(" + std::to_string(e.a) + ")";
        case Expr::Kind::Cap:
            return "cap";
        case Expr::Kind::Cup:
            return "cup";
        case Expr::Kind::BSpider:
            return "bspider(" + std::to_string(e.a) + "," + std::to_string(e.b) + ")";
        case Expr::Kind::WSpider:
            return "wspider(" + std::to_string(e.a) + "," + std::to_string(e.b) + ")";
        case Expr::Kind::Gate:
            return to_string(e.gate);
        case Expr::Kind::Ghz:
            return "ghz(" + std::to_string(e.a) + ")";
        case Expr::Kind::Max:
            return "max(" + std::to_string(e.a) + ")";
        case Expr::Kind::BellPlus:
            return "bell+";
        case Expr::Kind::BellMinus:
            return "bell-";
        case Expr::Kind::Ref:
            return e.name;
        case Expr::Kind::Seq:
        case Expr::Kind::Par: {
            bool par = e.kind == Expr::Kind::Par;
            std::string out;
            for (std::size_t i = 0; i < e.parts.size(); i++) {
                if (i > 0) {
                    out += par ? " | " : " ; ";
                }
                out += render_part(e.parts[i], par);
            }
            return out;
        }
    }
    return "";
}

std::string render(const ScalarSpec &s) {
    if (s.power) {
        std::string frac = std::to_string(s.num);
        if (s.den != 1) {
            frac += "/" + std::to_string(s.den);
        }
        return "d^(" + frac + ")";
    }
    std::string im = fmt_double(s.value.imag());
    if (im[0] != '-') {
        im = "+" + im;
    }
    return fmt_double(s.value.real()) + im + "i";
}

std::string render(const Statement &s) {
    switch (s.kind) {
        case Statement::Kind::Dim:
            return "dim " + std::to_string(s.dim);
        case Statement::Kind::Let:
            return "let " + s.name + " = " + render(s.lhs);
        case Statement::Kind::LetBraid: {
            std::string out = "let " + s.name + " = braid:";
            for (const auto &g : s.word) {
                if (g.kind == StrandGen::Kind::Braid) {
                    out += " b" + std::to_string(g.index) + (g.value < 0 ? "'" : "");
                } else {
                    out += " c" + std::to_string(g.index) + ":" + std::to_string(g.value);
                }
            }
            return out;
        }
        case Statement::Kind::Check: {
            std::string out = "check " + render(s.lhs) + " == " + render(s.rhs);
            if (s.scalar) {
                out += " scalar " + render(*s.scalar);
            }
            return out;
        }
        case Statement::Kind::Eval:
            return "eval " + render(s.lhs);
    }
    return "";
}

std::string render(const Document &doc) {
    std::string out;
    for (const auto &s : doc.statements) {
        out += render(s) + "\n";
    }
    return out;
}

DocumentEvaluator::DocumentEvaluator(const Document &doc, std::optional<int> fallback_dim) {
    auto d = doc.dim();
    if (!d) {
        d = fallback_dim;
    }
    if (!d || *d < 1) {
        throw InvalidDimension("document declares no dimension");
    }
    d_ = *d;
    for (const auto &s : doc.statements) {
        if (s.kind == Statement::Kind::Let || s.kind == Statement::Kind::LetBraid) {
            defs_[s.name] = &s;
        }
    }
}

SpiderDiagram DocumentEvaluator::lower(const Expr &e) const {
    const int d = d_;
    const double sd = std::sqrt(static_cast<double>(d));
    auto scaled = [](SpiderDiagram g, cplx s) {
        g.scalar *= s;
        return g;
    };
    switch (e.kind) {
        case Expr::Kind::Id:
            return diagram_identity(d, e.a);
        case Expr::Kind::Cap:
            return diagram_spider(d, SpiderColor::Black, 2, 0);
        case Expr::Kind::Cup:
            return diagram_spider(d, SpiderColor::Black, 0, 2);
        case Expr::Kind::BSpider:
            return diagram_spider(d, SpiderColor::Black, e.a, e.b);
        case Expr::Kind::WSpider:
            return diagram_spider(d, SpiderColor::White, e.a, e.b);
        case Expr::Kind::Gate:
            return diagram_gate(d, e.gate);
        case Expr::Kind::Ghz:
            return scaled(diagram_spider(d, SpiderColor::Black, 0, e.a), 1.0 / sd);
        case Expr::Kind::Max:
            return scaled(diagram_spider(d, SpiderColor::White, 0, e.a), std::pow(d, (1.0 - e.a) / 2.0));
        case Expr::Kind::BellPlus:
            return scaled(diagram_spider(d, SpiderColor::Black, 0, 2), 1.0 / sd);
        case Expr::Kind::BellMinus:
            return scaled(diagram_spider(d, SpiderColor::White, 0, 2), 1.0 / sd);
        case Expr::Kind::Ref: {
            auto hit = cache_.find(e.name);
            if (hit != cache_.end()) {
                return hit->second;
            }
            auto it = defs_.find(e.name);
            if (it == defs_.end()) {
                throw NotFound("undefined name '" + e.name + "'");
            }
            const Statement &s = *it->second;
            SpiderDiagram g(d);
            if (s.kind == Statement::Kind::LetBraid) {
                StrandWord w{d, s.word};
                for (auto &gen : w.gens) {
                    if (gen.kind == StrandGen::Kind::Charge) {
                        gen.value = mod(gen.value, d);
                    }
                }
                g = diagram_box(d, s.name, eval_word(w));
            } else {
                g = lower(s.lhs);
            }
            cache_.emplace(e.name, g);
            return g;
        }
        case Expr::Kind::Seq: {
            SpiderDiagram g = lower(e.parts.front());
            for (std::size_t i = 1; i < e.parts.size(); i++) {
                g = diagram_then(g, lower(e.parts[i]));
            }
            return g;
        }
        case Expr::Kind::Par: {
            SpiderDiagram g = lower(e.parts.front());
            for (std::size_t i = 1; i < e.parts.size(); i++) {
                g = diagram_beside(g, lower(e.parts[i]));
            }
            return g;
        }
    }
    throw std::logic_error("unhandled expression");
}

std::vector<CheckOutcome> run_document_checks(const Document &doc, Tolerance tol, std::optional<int> fallback_dim) {
    DocumentEvaluator ev(doc, fallback_dim);
    std::vector<CheckOutcome> out;
    for (const auto &s : doc.statements) {
        if (s.kind != Statement::Kind::Check) {
            continue;
        }
        CheckOutcome c{render(s), s.line, false, false, 0.0, std::nullopt, ""};
        try {
            Tensor lhs = eval_tensor(ev.lower(s.lhs));
            Tensor rhs = eval_tensor(ev.lower(s.rhs));
            if (!lhs.same_shape(rhs)) {
                throw ShapeError("sides have different shapes");
            }
            if (s.scalar) {
                c.scalar = s.scalar->eval(ev.dim());
                rhs = rhs * *c.scalar;
            }
            c.max_error = max_deviation(lhs, rhs);
            c.pass = c.max_error <= tol.eps;
        } catch (const Error &err) {
            c.error = true;
            c.max_error = std::numeric_limits<double>::infinity();
            c.message = err.what();
        }
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace quon
