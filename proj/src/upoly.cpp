#include "jetflow/upoly.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "jetflow/error.hpp"

namespace jetflow {

UPoly::UPoly(std::vector<mpq_class> coeffs) : c_(std::move(coeffs)) {
    for (auto& c : c_) c.canonicalize();
    trim();
}

UPoly UPoly::monomial(unsigned degree, const mpq_class& c) {
    std::vector<mpq_class> v(degree + 1, mpq_class(0));
    v[degree] = c;
    return UPoly(std::move(v));
}

void UPoly::trim() {
    while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
}

UPoly UPoly::operator-() const {
    UPoly r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
}

UPoly operator+(const UPoly& a, const UPoly& b) {
    std::vector<mpq_class> v(std::max(a.c_.size(), b.c_.size()), mpq_class(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) v[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) v[i] += b.c_[i];
    return UPoly(std::move(v));
}

UPoly operator-(const UPoly& a, const UPoly& b) { return a + (-b); }

UPoly operator*(const UPoly& a, const UPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<mpq_class> v(a.c_.size() + b.c_.size() - 1, mpq_class(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
    return UPoly(std::move(v));
}

UPoly operator*(const UPoly& a, const mpq_class& c) {
    std::vector<mpq_class> v = a.c_;
    for (auto& x : v) x *= c;
    return UPoly(std::move(v));
}

mpq_class UPoly::operator()(const mpq_class& x) const {
    mpq_class acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

int UPoly::sign_at_pos_inf() const { return is_zero() ? 0 : sgn(leading()); }

int UPoly::sign_at_neg_inf() const {
    if (is_zero()) return 0;
    int s = sgn(leading());
    return (degree() % 2 == 0) ? s : -s;
}

UPoly UPoly::derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<mpq_class> v(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) v[i - 1] = c_[i] * static_cast<long>(i);
    return UPoly(std::move(v));
}

UPoly UPoly::monic() const {
    if (is_zero()) return *this;
    return *this * mpq_class(1 / leading());
}

UPoly UPoly::primitive() const {
    if (is_zero()) return *this;
    mpz_class g = 0, l = 1;
    for (const auto& c : c_) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num_mpz_t());
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    }
    mpq_class scale(l, g);
    scale.canonicalize();
    if (sgn(leading()) < 0) scale = -scale;
    return *this * scale;
}

std::string UPoly::str(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        const mpq_class& c = c_[static_cast<std::size_t>(i)];
        if (sgn(c) == 0) continue;
        if (!first) os << (sgn(c) < 0 ? " - " : " + ");
        else if (sgn(c) < 0) os << "-";
        first = false;
        mpq_class a = abs(c);
        if (i == 0 || a != 1) os << a.get_str() << (i ? "*" : "");
        if (i) os << var << (i > 1 ? "^" + std::to_string(i) : "");
    }
    return os.str();
}

DivMod divmod(const UPoly& a, const UPoly& b) {
    if (b.is_zero()) throw Error(ErrorKind::InvalidArgument, "polynomial division by zero");
    std::vector<mpq_class> rem = a.coeffs();
    const int db = b.degree();
    if (a.degree() < db) return {UPoly(), a};
    std::vector<mpq_class> q(static_cast<std::size_t>(a.degree() - db + 1), mpq_class(0));
    const mpq_class& lb = b.leading();
    for (int i = a.degree(); i >= db; --i) {
        mpq_class f = rem[static_cast<std::size_t>(i)] / lb;
        if (sgn(f) == 0) continue;
        q[static_cast<std::size_t>(i - db)] = f;
        for (int j = 0; j <= db; ++j) rem[static_cast<std::size_t>(i - db + j)] -= f * b.coeffs()[static_cast<std::size_t>(j)];
    }
    return {UPoly(std::move(q)), UPoly(std::move(rem))};
}

UPoly gcd(const UPoly& a, const UPoly& b) {
    UPoly x = a, y = b;
    while (!y.is_zero()) {
        UPoly r = divmod(x, y).remainder;
        x = std::move(y);
        y = r.primitive();  // keeps coefficient growth in check
    }
    return x.monic();
}

bool is_squarefree(const UPoly& p) { return gcd(p, p.derivative()).degree() <= 0; }

UPoly squarefree_part(const UPoly& p) {
    if (p.degree() <= 0) return p;
    UPoly g = gcd(p, p.derivative());
    return divmod(p, g).quotient;
}

std::vector<UPoly> squarefree_decomposition(const UPoly& p) {
    std::vector<UPoly> out;
    if (p.degree() <= 0) return out;
    UPoly a = gcd(p, p.derivative());
    UPoly b = divmod(p, a).quotient;
    UPoly c = divmod(p.derivative(), a).quotient;
    UPoly d = c - b.derivative();
    while (b.degree() > 0) {
        UPoly f = gcd(b, d);
        out.push_back(f.monic());
        b = divmod(b, f).quotient;
        c = divmod(d, f).quotient;
        d = c - b.derivative();
    }
    while (!out.empty() && out.back().degree() <= 0) out.pop_back();
    return out;
}

std::vector<UPoly> sturm_sequence(const UPoly& p) {
    std::vector<UPoly> seq;
    if (p.is_zero()) return seq;
    seq.push_back(p);
    UPoly d = p.derivative();
    while (!d.is_zero()) {
        seq.push_back(d);
        const UPoly& a = seq[seq.size() - 2];
        d = -divmod(a, d).remainder;
    }
    return seq;
}

namespace {

template <typename SignFn>
unsigned variations(const std::vector<UPoly>& seq, SignFn sign_of) {
    unsigned v = 0;
    int prev = 0;
    for (const auto& q : seq) {
        int s = sign_of(q);
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++v;
        prev = s;
    }
    return v;
}

} // namespace

unsigned count_real_roots(const UPoly& p, const std::optional<mpq_class>& lo, const std::optional<mpq_class>& hi) {
    if (p.is_zero()) throw Error(ErrorKind::InvalidArgument, "root count of the zero polynomial");
    const auto seq = sturm_sequence(squarefree_part(p));
    auto at = [&](const std::optional<mpq_class>& x, bool upper) {
        return variations(seq, [&](const UPoly& q) {
            if (!x) return upper ? q.sign_at_pos_inf() : q.sign_at_neg_inf();
            return sgn(q(*x));
        });
    };
    unsigned vl = at(lo, false), vh = at(hi, true);
    return vl >= vh ? vl - vh : 0;
}

namespace {

constexpr unsigned long kMaxEnumerable = 1000000000000UL;

std::optional<std::vector<mpz_class>> positive_divisors(const mpz_class& n_in) {
    mpz_class n = abs(n_in);
    if (n > kMaxEnumerable) return std::nullopt;
    unsigned long v = n.get_ui();
    std::vector<mpz_class> out;
    for (unsigned long d = 1; d * d <= v; ++d) {
        if (v % d) continue;
        out.emplace_back(d);
        if (d * d != v) out.emplace_back(v / d);
    }
    return out;
}

} // namespace

std::optional<std::vector<mpq_class>> rational_roots(const UPoly& p_in) {
    if (p_in.is_zero()) throw Error(ErrorKind::InvalidArgument, "roots of the zero polynomial");
    UPoly p = p_in.primitive();
    std::vector<mpq_class> roots;
    // Strip the factor t^k.
    std::size_t k = 0;
    while (sgn(p.coeffs()[k]) == 0) ++k;
    if (k > 0) {
        roots.emplace_back(0);
        p = UPoly(std::vector<mpq_class>(p.coeffs().begin() + static_cast<long>(k), p.coeffs().end()));
    }
    if (p.degree() <= 0) return roots;
    auto num_divs = positive_divisors(p.coeffs().front().get_num());
    auto den_divs = positive_divisors(p.leading().get_num());
    if (!num_divs || !den_divs) return std::nullopt;
    std::set<mpq_class> found;
    for (const auto& a : *num_divs)
        for (const auto& b : *den_divs)
            for (int s : {1, -1}) {
                mpq_class cand(a * s, b);
                cand.canonicalize();
                if (sgn(p(cand)) == 0) found.insert(cand);
            }
    roots.insert(roots.end(), found.begin(), found.end());
    std::sort(roots.begin(), roots.end());
    return roots;
}

bool is_rational_square(const mpq_class& q) {
    if (sgn(q) < 0) return false;
    return mpz_perfect_square_p(q.get_num_mpz_t()) && mpz_perfect_square_p(q.get_den_mpz_t());
}

} // namespace jetflow
