#include "jetflow/poly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

namespace jetflow {

// --- Monomial ---------------------------------------------------------------------

Monomial::Monomial(std::initializer_list<unsigned> exps) {
    for (unsigned e : exps) {
        exps_.push_back(static_cast<Exponent>(e));
        degree_ += e;
    }
}

Monomial::Monomial(std::span<const unsigned> exps) {
    for (unsigned e : exps) {
        exps_.push_back(static_cast<Exponent>(e));
        degree_ += e;
    }
}

Monomial Monomial::unit(std::size_t nvars, std::size_t var) {
    Monomial m(nvars);
    m.set(var, 1);
    return m;
}

void Monomial::set(std::size_t i, unsigned e) {
    degree_ = degree_ - exps_[i] + e;
    exps_[i] = static_cast<Exponent>(e);
}

Monomial Monomial::operator*(const Monomial& o) const {
    Monomial r = *this;
    for (std::size_t i = 0; i < exps_.size(); ++i) r.exps_[i] = static_cast<Exponent>(r.exps_[i] + o.exps_[i]);
    r.degree_ = degree_ + o.degree_;
    return r;
}

bool Monomial::divides(const Monomial& o) const {
    for (std::size_t i = 0; i < exps_.size(); ++i)
        if (exps_[i] > o.exps_[i]) return false;
    return true;
}

Monomial Monomial::quotient_of(const Monomial& o) const {
    Monomial r = o;
    for (std::size_t i = 0; i < exps_.size(); ++i) r.exps_[i] = static_cast<Exponent>(o.exps_[i] - exps_[i]);
    r.degree_ = o.degree_ - degree_;
    return r;
}

std::size_t Monomial::hash() const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    for (Exponent e : exps_) h = (h ^ e) * 0x100000001b3ULL;
    return h ^ (h >> 29);
}

bool GradedLess::operator()(const Monomial& a, const Monomial& b) const noexcept {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return a[i] > b[i];
    return false;
}

// --- MultiPoly ----------------------------------------------------------------------

MultiPoly MultiPoly::constant(std::size_t nvars, const Scalar& c) {
    return term(Monomial(nvars), c);
}

MultiPoly MultiPoly::variable(std::size_t nvars, std::size_t var, ScalarMode mode) {
    if (var >= nvars) throw Error(ErrorKind::IndexOutOfRange, "variable index out of range");
    return term(Monomial::unit(nvars, var), Scalar::one(mode));
}

MultiPoly MultiPoly::term(const Monomial& m, const Scalar& c) {
    MultiPoly p(m.size());
    if (!c.is_zero()) p.terms_.push_back({m, c});
    return p;
}

MultiPoly MultiPoly::from_terms(std::size_t nvars, std::vector<Term> terms) {
    for (const auto& t : terms)
        if (t.monomial.size() != nvars)
            throw Error(ErrorKind::DimensionMismatch, "monomial length differs from variable count");
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return GradedLess{}(a.monomial, b.monomial); });
    MultiPoly p(nvars);
    for (auto& t : terms) {
        if (!p.terms_.empty() && p.terms_.back().monomial == t.monomial) {
            p.terms_.back().coef += t.coef;
            if (p.terms_.back().coef.is_zero()) p.terms_.pop_back();
        } else if (!t.coef.is_zero()) {
            p.terms_.push_back(std::move(t));
        }
    }
    return p;
}

std::optional<ScalarMode> MultiPoly::mode() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.front().coef.mode();
}

Scalar MultiPoly::coefficient(const Monomial& m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const Term& t, const Monomial& key) { return GradedLess{}(t.monomial, key); });
    if (it != terms_.end() && it->monomial == m) return it->coef;
    return Scalar::zero(mode().value_or(ScalarMode::exact));
}

Scalar MultiPoly::constant_term() const { return coefficient(Monomial(nvars_)); }

void MultiPoly::check_compatible(const MultiPoly& o) const {
    if (nvars_ != o.nvars_)
        throw Error(ErrorKind::DimensionMismatch,
                    "variable count mismatch (" + std::to_string(nvars_) + " vs " + std::to_string(o.nvars_) + ")");
    auto m1 = mode(), m2 = o.mode();
    if (m1 && m2 && *m1 != *m2) throw Error(ErrorKind::ModeMismatch, "exact and float polynomials mixed");
}

MultiPoly MultiPoly::operator-() const {
    MultiPoly r = *this;
    for (auto& t : r.terms_) t.coef = -t.coef;
    return r;
}

void MultiPoly::merge_in(const MultiPoly& o, bool subtract) {
    check_compatible(o);
    std::vector<Term> out;
    out.reserve(terms_.size() + o.terms_.size());
    std::size_t i = 0, j = 0;
    GradedLess less;
    while (i < terms_.size() || j < o.terms_.size()) {
        if (j == o.terms_.size() || (i < terms_.size() && less(terms_[i].monomial, o.terms_[j].monomial))) {
            out.push_back(std::move(terms_[i++]));
        } else if (i == terms_.size() || less(o.terms_[j].monomial, terms_[i].monomial)) {
            out.push_back({o.terms_[j].monomial, subtract ? -o.terms_[j].coef : o.terms_[j].coef});
            ++j;
        } else {
            Term t = std::move(terms_[i++]);
            if (subtract) t.coef -= o.terms_[j++].coef;
            else t.coef += o.terms_[j++].coef;
            if (!t.coef.is_zero()) out.push_back(std::move(t));
        }
    }
    terms_ = std::move(out);
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
    merge_in(o, false);
    return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
    merge_in(o, true);
    return *this;
}

MultiPoly& MultiPoly::operator*=(const Scalar& c) {
    if (auto m = mode(); m && *m != c.mode())
        throw Error(ErrorKind::ModeMismatch, "scalar mode differs from polynomial mode");
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& t : terms_) t.coef *= c;
    return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) { return mul_truncated(a, b, std::nullopt); }

MultiPoly MultiPoly::pow(unsigned e) const {
    MultiPoly result = constant(nvars_, Scalar::one(mode().value_or(ScalarMode::exact)));
    for (unsigned i = 0; i < e; ++i) result = result * *this;
    return result;
}

MultiPoly MultiPoly::to_mode(ScalarMode m) const {
    MultiPoly r(nvars_);
    for (const auto& t : terms_) {
        Scalar c = t.coef.to_mode(m);
        if (!c.is_zero()) r.terms_.push_back({t.monomial, std::move(c)});
    }
    return r;
}

// --- HomogPoly / PolyMap --------------------------------------------------------------

HomogPoly::HomogPoly(MultiPoly p, unsigned degree) : poly_(std::move(p)), degree_(degree) {
    for (const auto& t : poly_.terms())
        if (t.monomial.degree() != degree)
            throw Error(ErrorKind::InvalidArgument,
                        "term of degree " + std::to_string(t.monomial.degree()) + " in a form of degree " +
                            std::to_string(degree));
}

PolyMap::PolyMap(std::vector<MultiPoly> c, std::optional<unsigned> k) : coords(std::move(c)), trunc(k) {
    if (coords.empty()) throw Error(ErrorKind::InvalidArgument, "map with no coordinates");
    nvars = coords.front().nvars();
    for (const auto& p : coords)
        if (p.nvars() != nvars) throw Error(ErrorKind::DimensionMismatch, "coordinates disagree on variable count");
}

PolyMap PolyMap::identity(std::size_t n, ScalarMode mode, std::optional<unsigned> k) {
    std::vector<MultiPoly> c;
    for (std::size_t i = 0; i < n; ++i) c.push_back(MultiPoly::variable(n, i, mode));
    return PolyMap(std::move(c), k);
}

PolyMap PolyMap::zero(std::size_t nvars, std::size_t ncoords) {
    return PolyMap(std::vector<MultiPoly>(ncoords, MultiPoly(nvars)));
}

std::optional<ScalarMode> PolyMap::mode() const {
    for (const auto& p : coords)
        if (auto m = p.mode()) return m;
    return std::nullopt;
}

bool PolyMap::has_zero_constant_terms() const {
    return std::all_of(coords.begin(), coords.end(), [](const MultiPoly& p) { return p.constant_term().is_zero(); });
}

PolyMap PolyMap::operator-(const PolyMap& o) const {
    if (ncoords() != o.ncoords()) throw Error(ErrorKind::DimensionMismatch, "coordinate count mismatch");
    PolyMap r = *this;
    for (std::size_t i = 0; i < coords.size(); ++i) r.coords[i] -= o.coords[i];
    return r;
}

PolyMap PolyMap::operator+(const PolyMap& o) const {
    if (ncoords() != o.ncoords()) throw Error(ErrorKind::DimensionMismatch, "coordinate count mismatch");
    PolyMap r = *this;
    for (std::size_t i = 0; i < coords.size(); ++i) r.coords[i] += o.coords[i];
    return r;
}

// --- Operations ---------------------------------------------------------------------

MultiPoly partial_derivative(const MultiPoly& f, std::size_t var) {
    if (var >= f.nvars())
        throw Error(ErrorKind::IndexOutOfRange,
                    "derivative index " + std::to_string(var) + " with " + std::to_string(f.nvars()) + " variables");
    std::vector<Term> out;
    for (const auto& t : f.terms()) {
        unsigned e = t.monomial[var];
        if (e == 0) continue;
        Monomial m = t.monomial;
        m.set(var, e - 1);
        out.push_back({std::move(m), t.coef.times(e)});
    }
    return MultiPoly::from_terms(f.nvars(), std::move(out));
}

HomogPoly homogeneous_part(const MultiPoly& f, unsigned degree) {
    std::vector<Term> out;
    for (const auto& t : f.terms())
        if (t.monomial.degree() == degree) out.push_back(t);
    return HomogPoly(MultiPoly::from_terms(f.nvars(), std::move(out)), degree);
}

std::optional<unsigned> min_degree(const MultiPoly& f) {
    if (f.is_zero()) return std::nullopt;
    return f.terms().front().monomial.degree();
}

std::vector<Monomial> monomials_of_degree(std::size_t nvars, unsigned degree) {
    std::vector<Monomial> out;
    if (nvars == 0) return out;
    Monomial m(nvars);
    auto rec = [&](auto&& self, std::size_t i, unsigned left) -> void {
        if (i + 1 == nvars) {
            m.set(i, left);
            out.push_back(m);
            return;
        }
        for (unsigned k = left + 1; k-- > 0;) {
            m.set(i, k);
            self(self, i + 1, left - k);
        }
    };
    rec(rec, 0, degree);
    return out;
}

MultiPoly drop_small(const MultiPoly& f, double tol) {
    if (f.mode() != ScalarMode::floating) return f;
    std::vector<Term> out;
    for (const auto& t : f.terms())
        if (std::abs(t.coef.to_double()) > tol) out.push_back(t);
    return MultiPoly::from_terms(f.nvars(), std::move(out));
}

MultiPoly truncate(const MultiPoly& f, unsigned order, double drop_tol) {
    std::vector<Term> out;
    const bool flt = f.mode() == ScalarMode::floating;
    for (const auto& t : f.terms()) {
        if (t.monomial.degree() > order) break;
        if (flt && std::abs(t.coef.to_double()) <= drop_tol) continue;
        out.push_back(t);
    }
    MultiPoly r(f.nvars());
    return out.empty() ? r : MultiPoly::from_terms(f.nvars(), std::move(out));
}

PolyMap truncate(const PolyMap& F, unsigned order, double drop_tol) {
    PolyMap r = F;
    for (auto& c : r.coords) c = truncate(c, order, drop_tol);
    r.trunc = order;
    return r;
}

Substitution::Substitution(const PolyMap& G, unsigned order) : G_(G), order_(order), mode_(G.mode()) {
    if (!G_.has_zero_constant_terms())
        throw Error(ErrorKind::InvalidArgument, "substituted map must vanish at the origin");
}

const MultiPoly& Substitution::power(const Monomial& m) {
    if (auto it = cache_.find(m); it != cache_.end()) return it->second;
    MultiPoly value;
    if (m.degree() == 0) {
        value = MultiPoly::constant(G_.nvars, Scalar::one(mode_.value_or(ScalarMode::exact)));
    } else {
        std::size_t j = 0;
        while (m[j] == 0) ++j;
        Monomial prev = m;
        prev.set(j, m[j] - 1);
        MultiPoly base = power(prev);  // copy: the map may rehash
        value = mul_truncated(base, G_.coords[j], order_);
    }
    return cache_.emplace(m, std::move(value)).first->second;
}

MultiPoly Substitution::apply(const MultiPoly& f) { return apply(f, order_); }

MultiPoly Substitution::apply(const MultiPoly& f, unsigned order) {
    if (f.nvars() != G_.ncoords())
        throw Error(ErrorKind::DimensionMismatch, "composition: outer map has " + std::to_string(f.nvars()) +
                                                      " variables but inner map has " +
                                                      std::to_string(G_.ncoords()) + " coordinates");
    order = std::min(order, order_);
    std::unordered_map<Monomial, Scalar, MonomialHash> acc;
    for (const auto& t : f.terms()) {
        // ord(G) >= 1, so a monomial of degree d contributes only in degrees >= d.
        if (t.monomial.degree() > order) break;
        const MultiPoly& p = power(t.monomial);
        for (const auto& s : p.terms()) {
            if (s.monomial.degree() > order) break;
            auto [it, inserted] = acc.try_emplace(s.monomial, Scalar::zero(t.coef.mode()));
            it->second.add_product(t.coef, s.coef);
        }
    }
    std::vector<Term> out;
    out.reserve(acc.size());
    for (auto& [m, c] : acc) out.push_back({m, std::move(c)});
    return MultiPoly::from_terms(G_.nvars, std::move(out));
}

MultiPoly compose(const MultiPoly& f, const PolyMap& G, unsigned order) {
    Substitution sub(G, order);
    return sub.apply(f);
}

PolyMap compose(const PolyMap& F, const PolyMap& G, unsigned order) {
    if (F.nvars != G.ncoords()) throw Error(ErrorKind::DimensionMismatch, "composition dimension mismatch");
    Substitution sub(G, order);
    std::vector<MultiPoly> out;
    for (const auto& c : F.coords) out.push_back(sub.apply(c));
    PolyMap r(std::move(out), order);
    return r;
}

MultiPoly divide_exact(const MultiPoly& f, const MultiPoly& d) {
    if (d.is_zero()) throw Error(ErrorKind::InvalidArgument, "division by the zero polynomial");
    if (f.nvars() != d.nvars()) throw Error(ErrorKind::DimensionMismatch, "variable count mismatch");
    if (f.is_zero()) return MultiPoly(f.nvars());
    const bool flt = f.mode() == ScalarMode::floating;
    double scale = 0;
    if (flt)
        for (const auto& t : f.terms()) scale = std::max(scale, std::abs(t.coef.to_double()));
    const Term& lead = d.terms().back();
    MultiPoly rem = f;
    std::vector<Term> quotient;
    while (!rem.is_zero()) {
        if (flt) {
            rem = drop_small(rem, 1e-12 * scale);
            if (rem.is_zero()) break;
        }
        const Term& lt = rem.terms().back();
        if (!lead.monomial.divides(lt.monomial))
            throw Error(ErrorKind::NotDivisible, "divisor does not divide the dividend");
        Term q{lead.monomial.quotient_of(lt.monomial), lt.coef / lead.coef};
        rem -= d * MultiPoly::term(q.monomial, q.coef);
        quotient.push_back(std::move(q));
    }
    return MultiPoly::from_terms(f.nvars(), std::move(quotient));
}

Scalar evaluate(const MultiPoly& f, std::span<const Scalar> point) {
    if (point.size() != f.nvars())
        throw Error(ErrorKind::DimensionMismatch, "point has " + std::to_string(point.size()) +
                                                      " coordinates, polynomial has " +
                                                      std::to_string(f.nvars()) + " variables");
    ScalarMode mode = f.mode().value_or(point.empty() ? ScalarMode::exact : point.front().mode());
    for (const auto& c : point)
        if (c.mode() != mode) throw Error(ErrorKind::ModeMismatch, "evaluation point mode differs");
    Scalar sum = Scalar::zero(mode);
    for (const auto& t : f.terms()) {
        Scalar v = t.coef;
        for (std::size_t i = 0; i < point.size(); ++i)
            if (t.monomial[i]) v *= point[i].pow(t.monomial[i]);
        sum += v;
    }
    return sum;
}

const Term& lex_leading_term(const MultiPoly& f) {
    if (f.is_zero()) throw Error(ErrorKind::InvalidArgument, "zero polynomial has no leading term");
    const Term* best = &f.terms().front();
    for (const auto& t : f.terms()) {
        for (std::size_t i = 0; i < t.monomial.size(); ++i) {
            if (t.monomial[i] != best->monomial[i]) {
                if (t.monomial[i] > best->monomial[i]) best = &t;
                break;
            }
        }
    }
    return *best;
}

std::pair<MultiPoly, Scalar> primitive_normalize(const MultiPoly& f) {
    if (f.is_zero()) return {f, Scalar(1)};
    if (f.mode() != ScalarMode::exact) throw Error(ErrorKind::ModeMismatch, "normalization requires exact mode");
    mpz_class num_gcd = 0, den_lcm = 1;
    for (const auto& t : f.terms()) {
        const mpq_class& q = t.coef.rational_value();
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), q.get_num_mpz_t());
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), q.get_den_mpz_t());
    }
    mpq_class content(num_gcd, den_lcm);
    content.canonicalize();
    if (lex_leading_term(f).coef.sign() < 0) content = -content;
    Scalar c(content);
    MultiPoly r = f;
    r *= Scalar(mpq_class(1 / content));
    return {r, c};
}

// --- Printing ---------------------------------------------------------------------------

std::vector<std::string> default_variable_names(std::size_t n) {
    std::vector<std::string> v;
    if (n <= 3) {
        const char* names[] = {"x", "y", "z"};
        for (std::size_t i = 0; i < n; ++i) v.emplace_back(names[i]);
    } else {
        for (std::size_t i = 1; i <= n; ++i) v.push_back("x" + std::to_string(i));
    }
    return v;
}

std::string to_string(const MultiPoly& f, const std::vector<std::string>& vars_in) {
    if (f.is_zero()) return "0";
    const auto vars = vars_in.empty() ? default_variable_names(f.nvars()) : vars_in;
    std::ostringstream os;
    bool first = true;
    for (const auto& t : f.terms()) {
        Scalar c = t.coef;
        bool negative = c.sign() < 0;
        if (negative) c = -c;
        if (first) os << (negative ? "-" : "");
        else os << (negative ? " - " : " + ");
        first = false;
        bool coef_shown = !(c.is_one() && t.monomial.degree() > 0);
        if (coef_shown) os << c.str();
        bool need_star = coef_shown;
        for (std::size_t i = 0; i < t.monomial.size(); ++i) {
            unsigned e = t.monomial[i];
            if (!e) continue;
            if (need_star) os << '*';
            os << vars[i];
            if (e > 1) os << '^' << e;
            need_star = true;
        }
    }
    return os.str();
}

std::string to_string(const PolyMap& F, const std::vector<std::string>& vars) {
    std::string s = "(";
    for (std::size_t i = 0; i < F.coords.size(); ++i) {
        if (i) s += ", ";
        s += to_string(F.coords[i], vars);
    }
    return s + ")";
}

std::ostream& operator<<(std::ostream& os, const MultiPoly& f) { return os << to_string(f); }
std::ostream& operator<<(std::ostream& os, const PolyMap& F) { return os << to_string(F); }

} // namespace jetflow
