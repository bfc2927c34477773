#include <cctype>
#include <cstdlib>
#include <regex>

#include "jetflow/cli.hpp"
#include "jetflow/error.hpp"

namespace jetflow::cli {

namespace {

constexpr unsigned kMaxExponent = 65535;

[[noreturn]] void fail(std::size_t offset, const std::string& what) {
    throw Error(ErrorKind::Parse, "offset " + std::to_string(offset) + ": " + what);
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

// Recursive descent over text[pos, end); offsets are into the full text.
class Parser {
public:
    Parser(std::string_view text, std::size_t begin, std::size_t end, const std::vector<std::string>& vars,
           ScalarMode mode)
        : text_(text), pos_(begin), end_(end), vars_(vars), mode_(mode) {}

    MultiPoly parse_all() {
        skip();
        if (pos_ == end_) fail(pos_, "empty expression");
        MultiPoly p = expr();
        skip();
        if (pos_ != end_) fail(pos_, std::string("unexpected '") + text_[pos_] + "'");
        return p;
    }

    // NUM at the current position; advances past it.
    Scalar number() {
        const std::size_t start = pos_;
        std::size_t digits = 0;
        for (; pos_ < end_ && digit(text_[pos_]); ++pos_) ++digits;
        bool decimal = false;
        if (pos_ < end_ && text_[pos_] == '.') {
            decimal = true;
            for (++pos_; pos_ < end_ && digit(text_[pos_]); ++pos_) ++digits;
        }
        if (digits == 0) fail(start, "expected a number");
        if (pos_ < end_ && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t q = pos_ + 1;
            if (q < end_ && (text_[q] == '+' || text_[q] == '-')) ++q;
            if (q < end_ && digit(text_[q])) {
                decimal = true;
                pos_ = q;
                while (pos_ < end_ && digit(text_[pos_])) ++pos_;
            }
        }
        const std::string lit(text_.substr(start, pos_ - start));
        if (decimal) return decimal_value(lit, start);
        if (pos_ < end_ && text_[pos_] == '/') {
            const std::size_t den_at = ++pos_;
            while (pos_ < end_ && digit(text_[pos_])) ++pos_;
            if (pos_ == den_at) fail(den_at, "expected a denominator");
            const std::string den(text_.substr(den_at, pos_ - den_at));
            const mpz_class n(lit, 10), d(den, 10);
            if (d == 0) fail(den_at, "zero denominator");
            mpq_class q(n, d);
            q.canonicalize();
            return mode_ == ScalarMode::exact ? Scalar(q) : Scalar(q.get_d());
        }
        return mode_ == ScalarMode::exact ? Scalar(mpq_class(mpz_class(lit, 10))) : Scalar(std::strtod(lit.c_str(), nullptr));
    }

    void skip() {
        while (pos_ < end_ && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

private:
    Scalar decimal_value(const std::string& lit, std::size_t at) {
        if (mode_ == ScalarMode::floating) return Scalar(std::strtod(lit.c_str(), nullptr));
        // Exact value of the decimal literal: mantissa * 10^exponent.
        std::string mantissa;
        long exponent = 0;
        std::size_t i = 0;
        for (; i < lit.size() && lit[i] != 'e' && lit[i] != 'E'; ++i) {
            if (lit[i] == '.') continue;
            mantissa += lit[i];
        }
        const auto dot = lit.find('.');
        if (dot != std::string::npos) {
            const std::size_t frac_end = std::min(i, lit.size());
            exponent -= static_cast<long>(frac_end - dot - 1);
        }
        if (i < lit.size()) {
            const long e = std::strtol(lit.c_str() + i + 1, nullptr, 10);
            if (e > 10000 || e < -10000) fail(at, "exponent out of range");
            exponent += e;
        }
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
        mpq_class q(mpz_class(mantissa.empty() ? "0" : mantissa, 10));
        if (exponent >= 0) q *= scale;
        else q /= scale;
        return Scalar(q);
    }

    bool peek(char c) {
        skip();
        return pos_ < end_ && text_[pos_] == c;
    }

    MultiPoly expr() {
        MultiPoly acc = term();
        while (true) {
            if (peek('+')) {
                ++pos_;
                acc += term();
            } else if (peek('-')) {
                ++pos_;
                acc -= term();
            } else {
                return acc;
            }
        }
    }

    MultiPoly term() {
        MultiPoly acc = factor();
        while (peek('*')) {
            ++pos_;
            acc = acc * factor();
        }
        return acc;
    }

    MultiPoly factor() {
        if (peek('-')) {
            ++pos_;
            return -factor();
        }
        MultiPoly b = base();
        if (peek('^')) {
            ++pos_;
            skip();
            const std::size_t at = pos_;
            while (pos_ < end_ && digit(text_[pos_])) ++pos_;
            if (pos_ == at) fail(at, "expected a natural-number exponent");
            const std::string e(text_.substr(at, pos_ - at));
            if (e.size() > 5 || std::stoul(e) > kMaxExponent) fail(at, "exponent too large");
            return b.pow(static_cast<unsigned>(std::stoul(e)));
        }
        return b;
    }

    MultiPoly base() {
        skip();
        if (pos_ == end_) fail(pos_, "unexpected end of expression");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            MultiPoly inner = expr();
            if (!peek(')')) fail(pos_, "expected ')'");
            ++pos_;
            return inner;
        }
        if (digit(c) || c == '.') return MultiPoly::constant(vars_.size(), number());
        if (ident_start(c)) {
            const std::size_t at = pos_;
            while (pos_ < end_ && ident_char(text_[pos_])) ++pos_;
            const std::string name(text_.substr(at, pos_ - at));
            for (std::size_t i = 0; i < vars_.size(); ++i)
                if (vars_[i] == name) return MultiPoly::variable(vars_.size(), i, mode_);
            fail(at, "unknown variable '" + name + "'");
        }
        fail(pos_, std::string("unexpected '") + c + "'");
    }

    std::string_view text_;
    std::size_t pos_, end_;
    const std::vector<std::string>& vars_;
    ScalarMode mode_;
};

// Top-level pieces of text[begin, end) separated by `sep`.
std::vector<std::pair<std::size_t, std::size_t>> split_top(std::string_view text, std::size_t begin, std::size_t end,
                                                           char sep) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    int depth = 0;
    std::size_t start = begin;
    for (std::size_t i = begin; i < end; ++i) {
        if (text[i] == '(') ++depth;
        else if (text[i] == ')') --depth;
        else if (text[i] == sep && depth == 0) {
            out.emplace_back(start, i);
            start = i + 1;
        }
    }
    out.emplace_back(start, end);
    return out;
}

// Strips one pair of parentheses enclosing the whole of text[begin, end)
// when they contain a top-level comma.
std::pair<std::size_t, std::size_t> strip_tuple(std::string_view text, std::size_t begin, std::size_t end) {
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    if (end - begin < 2 || text[begin] != '(' || text[end - 1] != ')') return {begin, end};
    int depth = 0;
    bool comma = false;
    for (std::size_t i = begin; i < end; ++i) {
        if (text[i] == '(') ++depth;
        else if (text[i] == ')') {
            if (--depth == 0 && i != end - 1) return {begin, end};
        } else if (text[i] == ',' && depth == 1) {
            comma = true;
        }
    }
    return comma ? std::pair{begin + 1, end - 1} : std::pair{begin, end};
}

} // namespace

MultiPoly parse_poly(std::string_view text, const std::vector<std::string>& vars, ScalarMode mode) {
    return Parser(text, 0, text.size(), vars, mode).parse_all();
}

PolyMap parse_map(std::string_view text, const std::vector<std::string>& vars, ScalarMode mode) {
    auto [b, e] = strip_tuple(text, 0, text.size());
    std::vector<MultiPoly> coords;
    for (auto [s, t] : split_top(text, b, e, ','))
        coords.push_back(Parser(text, s, t, vars, mode).parse_all());
    return PolyMap(std::move(coords));
}

std::vector<MultiPoly> parse_list(std::string_view text, const std::vector<std::string>& vars, char sep,
                                  ScalarMode mode) {
    std::vector<MultiPoly> out;
    for (auto [s, t] : split_top(text, 0, text.size(), sep)) out.push_back(Parser(text, s, t, vars, mode).parse_all());
    return out;
}

Matrix parse_matrix(std::string_view text, ScalarMode mode) {
    static const std::vector<std::string> no_vars;
    std::vector<std::vector<Scalar>> rows;
    for (auto [rs, re] : split_top(text, 0, text.size(), ';')) {
        std::vector<Scalar> row;
        for (auto [s, t] : split_top(text, rs, re, ',')) {
            auto p = Parser(text, s, t, no_vars, mode).parse_all();
            row.push_back(p.is_zero() ? Scalar::zero(mode) : p.constant_term());
        }
        if (!rows.empty() && row.size() != rows.front().size())
            fail(rs, "row has " + std::to_string(row.size()) + " entries, expected " + std::to_string(rows.front().size()));
        rows.push_back(std::move(row));
    }
    std::vector<Scalar> entries;
    for (auto& r : rows)
        for (auto& v : r) entries.push_back(std::move(v));
    return Matrix(rows.size(), rows.front().size(), std::move(entries));
}

Scalar parse_number(std::string_view text, ScalarMode mode) {
    static const std::vector<std::string> no_vars;
    auto p = Parser(text, 0, text.size(), no_vars, mode).parse_all();
    if (p.is_zero()) return Scalar::zero(mode);
    if (p.degree() != 0) fail(0, "expected a number");
    return p.constant_term();
}

std::vector<std::string> infer_vars(const std::vector<std::string>& texts, std::size_t minimum) {
    static const std::regex ident(R"([A-Za-z_][A-Za-z0-9_]*)");
    static const std::regex indexed(R"(x([1-9][0-9]*))");
    std::size_t plain = 0, max_index = 0;
    for (const auto& t : texts) {
        for (auto it = std::sregex_iterator(t.begin(), t.end(), ident); it != std::sregex_iterator(); ++it) {
            const auto at = static_cast<std::size_t>(it->position());
            // Exponent markers inside numbers such as 1e-5.
            if (at > 0 && (digit(t[at - 1]) || t[at - 1] == '.')) continue;
            const std::string name = it->str();
            std::smatch m;
            if (std::regex_match(name, m, indexed)) max_index = std::max<std::size_t>(max_index, std::stoul(m[1]));
            else if (name == "x") plain = std::max<std::size_t>(plain, 1);
            else if (name == "y") plain = std::max<std::size_t>(plain, 2);
            else if (name == "z") plain = std::max<std::size_t>(plain, 3);
        }
    }
    if (max_index > 0) {
        std::vector<std::string> v;
        for (std::size_t i = 1; i <= std::max(max_index, minimum); ++i) v.push_back("x" + std::to_string(i));
        return v;
    }
    return default_variable_names(std::max(plain, minimum));
}

} // namespace jetflow::cli
