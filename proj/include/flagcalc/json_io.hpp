#pragma once

#include <fstream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "flagcalc/degeneracy.hpp"
#include "flagcalc/fgl.hpp"
#include "flagcalc/poly.hpp"

namespace flagcalc {

using Json = nlohmann::json;

/// JSON form of a polynomial: a variable-registry header plus a list of
/// {coeff, exponents} records, exponents aligned with the header.
inline Json poly_to_json(const Poly& p) {
    std::vector<VarId> vars = p.variables();
    Json jvars = Json::array();
    for (VarId v : vars) jvars.push_back(varid::cls(v) == VarClass::Beta ? "beta" : varid::name(v));
    Json jterms = Json::array();
    for (const auto& [m, c] : p.terms()) {
        Json e = Json::array();
        for (VarId v : vars) {
            int exp = m.exponent(v);
            if (varid::cls(v) == VarClass::Beta) exp += p.beta_shift();
            e.push_back(exp);
        }
        jterms.push_back(Json{{"coeff", c.str()}, {"exponents", e}});
    }
    return Json{{"ring", p.ring().kind_name()}, {"vars", jvars}, {"terms", jterms}};
}

inline Poly poly_from_json(const Json& j) {
    std::vector<VarId> vars;
    for (const auto& name : j.at("vars")) vars.push_back(varid::parse_name(name.get<std::string>()));
    Poly acc;
    for (const auto& term : j.at("terms")) {
        Poly t(Int(term.at("coeff").get<std::string>()));
        const auto& exps = term.at("exponents");
        for (std::size_t k = 0; k < vars.size(); ++k) {
            int e = exps.at(k).get<int>();
            if (e == 0) continue;
            if (e < 0) {
                if (varid::cls(vars[k]) != VarClass::Beta)
                    throw ParseError("negative exponents are only supported on beta");
                Poly::Terms one;
                one.emplace(Monomial(), Int(1));
                t *= Poly::from_terms(std::move(one), CoeffRing::integers_beta_laurent(), e);
            } else {
                t *= Poly::var(vars[k], e);
            }
        }
        acc += t;
    }
    return acc;
}

/// FGL file format: {"i,j": "coeff", ..., "cap": D}; coefficients in the
/// polynomial text format.
inline FormalGroupLaw law_from_json(const Json& j) {
    if (!j.is_object()) throw ParseError("law file must be a JSON object");
    int cap = 0;
    std::map<std::pair<int, int>, Poly> table;
    for (const auto& [key, value] : j.items()) {
        if (key == "cap") {
            cap = value.get<int>();
            continue;
        }
        auto comma = key.find(',');
        if (comma == std::string::npos)
            throw ParseError("law keys look like \"i,j\"; got '" + key + "'");
        int i = std::stoi(key.substr(0, comma));
        int jj = std::stoi(key.substr(comma + 1));
        table[{i, jj}] = Poly::parse(value.get<std::string>());
    }
    if (cap <= 0) throw ParseError("law file needs a positive \"cap\"");
    return FormalGroupLaw::from_coeffs(table, cap);
}

inline FormalGroupLaw law_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open law file '" + path + "'");
    Json j;
    in >> j;
    return law_from_json(j);
}

/// Square/rectangular integer matrix as nested JSON arrays.
inline IntMatrix matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty() || !j.at(0).is_array())
        throw ParseError("matrix must be a non-empty array of arrays");
    int rows = static_cast<int>(j.size());
    int cols = static_cast<int>(j.at(0).size());
    IntMatrix m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        const auto& row = j.at(static_cast<std::size_t>(r));
        if (static_cast<int>(row.size()) != cols) throw ParseError("ragged matrix rows");
        for (int c = 0; c < cols; ++c) {
            const auto& cell = row.at(static_cast<std::size_t>(c));
            if (cell.is_number_integer())
                m.at(r, c) = Int(cell.get<long long>());
            else
                m.at(r, c) = Int(cell.get<std::string>());
        }
    }
    return m;
}

inline Json matrix_to_json(const IntMatrix& m) {
    Json rows = Json::array();
    for (int r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (int c = 0; c < m.cols(); ++c) {
            const Int& v = m.at(r, c);
            if (v >= std::numeric_limits<long long>::min() && v <= std::numeric_limits<long long>::max())
                row.push_back(static_cast<long long>(v));
            else
                row.push_back(v.str());
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace flagcalc
