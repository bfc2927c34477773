#include "jetflow/cli.hpp"
#include "jetflow/error.hpp"

namespace jetflow::cli {

json to_json(const MultiPoly& p) {
    json terms = json::array();
    for (const auto& t : p.terms()) {
        terms.push_back({{"exps", t.monomial.exponents()},
                         {"num", t.coef.numerator_str()},
                         {"den", t.coef.denominator_str()}});
    }
    return terms;
}

json to_json(const PolyMap& F) {
    json coords = json::array();
    for (const auto& c : F.coords) coords.push_back(to_json(c));
    return coords;
}

json to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
        rows.push_back(row);
    }
    return rows;
}

MultiPoly poly_from_json(const json& j, std::size_t nvars, ScalarMode mode) {
    if (!j.is_array()) throw Error(ErrorKind::Parse, "polynomial must be a list of terms");
    std::vector<Term> terms;
    for (const auto& t : j) {
        if (!t.is_object() || !t.contains("exps") || !t.contains("num"))
            throw Error(ErrorKind::Parse, "term needs \"exps\" and \"num\"");
        auto exps = t.at("exps").get<std::vector<unsigned>>();
        if (exps.size() != nvars) {
            throw Error(ErrorKind::DimensionMismatch,
                        "term has " + std::to_string(exps.size()) + " exponents, expected " + std::to_string(nvars));
        }
        const std::string num = t.at("num").get<std::string>();
        const std::string den = t.contains("den") ? t.at("den").get<std::string>() : "1";
        Scalar c = parse_number(num, mode);
        if (den != "1") c = c / parse_number(den, mode);
        terms.push_back({Monomial(std::span<const unsigned>(exps)), c});
    }
    return MultiPoly::from_terms(nvars, std::move(terms));
}

PolyMap map_from_json(const json& j, std::size_t nvars, ScalarMode mode) {
    if (!j.is_array() || j.empty()) throw Error(ErrorKind::Parse, "map must be a nonempty list of polynomials");
    std::vector<MultiPoly> coords;
    for (const auto& c : j) coords.push_back(poly_from_json(c, nvars, mode));
    return PolyMap(std::move(coords));
}

} // namespace jetflow::cli
