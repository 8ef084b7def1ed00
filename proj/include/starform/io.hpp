#pragma once

// Text and JSON serialization: field specs ("p" or "p^k/c0,c1,..,ck"),
// elements as comma-joined base-p coordinates, matrix tuples with the
// "q n m sig" header, Cayley tables, and quadratic-form files.

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "apps.hpp"
#include "matrix.hpp"

namespace starform {

inline FieldCtx parse_field_spec(const std::string& spec) {
    std::size_t caret = spec.find('^');
    if (caret == std::string::npos) {
        unsigned long p = std::stoul(spec);
        return FieldCtx(static_cast<std::uint32_t>(p));
    }
    std::size_t slash = spec.find('/', caret);
    require(slash != std::string::npos, "field spec: extension needs /modulus-coeffs");
    std::uint32_t p = static_cast<std::uint32_t>(std::stoul(spec.substr(0, caret)));
    std::uint32_t k = static_cast<std::uint32_t>(std::stoul(spec.substr(caret + 1, slash - caret - 1)));
    std::vector<std::uint32_t> modulus;
    std::string rest = spec.substr(slash + 1);
    std::size_t pos = 0;
    while (pos <= rest.size()) {
        std::size_t next = rest.find(',', pos);
        std::string tok = rest.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        require(!tok.empty(), "field spec: empty modulus coefficient");
        modulus.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return FieldCtx(p, k, modulus);
}

inline std::string field_spec_string(const FieldCtx& F) {
    if (F.k() == 1) return std::to_string(F.p());
    std::ostringstream os;
    os << F.p() << '^' << F.k() << '/';
    for (std::size_t i = 0; i < F.modulus().size(); ++i) {
        if (i) os << ',';
        os << F.modulus()[i];
    }
    return os.str();
}

inline std::string sig_string(const std::optional<std::vector<int>>& sig) {
    if (!sig) return "-";
    std::ostringstream os;
    for (std::size_t i = 0; i < sig->size(); ++i) {
        if (i) os << ',';
        os << (*sig)[i];
    }
    return sig->empty() ? std::string("-") : os.str();
}

inline std::optional<std::vector<int>> parse_sig(const std::string& s, int m) {
    if (s == "-") return std::nullopt;
    std::vector<int> sig;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t next = s.find(',', pos);
        std::string tok = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        if (tok == "+1" || tok == "1")
            sig.push_back(1);
        else if (tok == "-1")
            sig.push_back(-1);
        else
            throw input_error("signature entries must be +1 or -1");
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    require(static_cast<int>(sig.size()) == m, "signature length does not match m");
    return sig;
}

// Owns the field context alongside the tuple so matrices never dangle.
struct TupleFile {
    FieldCtx field;
    MatTuple tuple;
};

inline void write_matrix(std::ostream& os, const FieldCtx& F, const Mat& M) {
    for (int i = 0; i < M.rows(); ++i) {
        for (int j = 0; j < M.cols(); ++j) {
            if (j) os << ' ';
            os << fel_to_string(F, M.at(i, j));
        }
        os << '\n';
    }
}

inline void write_tuple(std::ostream& os, const FieldCtx& F, const MatTuple& T) {
    os << field_spec_string(F) << ' ' << T.n() << ' ' << T.m() << ' ' << sig_string(T.sig) << '\n';
    for (const Mat& M : T.mats) write_matrix(os, F, M);
}

inline TupleFile read_tuple_text(std::istream& is) {
    std::string spec;
    int n = 0, m = 0;
    std::string sig;
    require(static_cast<bool>(is >> spec >> n >> m >> sig), "tuple: bad header line");
    TupleFile out{parse_field_spec(spec), {}};
    const FieldCtx& F = out.field;
    out.tuple.sig = parse_sig(sig, m);
    for (int s = 0; s < m; ++s) {
        Mat M(F, n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                std::string tok;
                require(static_cast<bool>(is >> tok), "tuple: unexpected end of matrix data");
                M.at(i, j) = fel_from_string(F, tok);
            }
        out.tuple.mats.push_back(std::move(M));
    }
    return out;
}

inline TupleFile read_tuple_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    TupleFile out{parse_field_spec(j.at("q").get<std::string>()), {}};
    const FieldCtx& F = out.field;
    int n = j.at("n").get<int>();
    int m = j.at("m").get<int>();
    if (j.contains("sig") && !j.at("sig").is_null()) {
        std::vector<int> sig = j.at("sig").get<std::vector<int>>();
        require(static_cast<int>(sig.size()) == m, "tuple json: signature length mismatch");
        out.tuple.sig = sig;
    }
    auto parse_entry = [&](const nlohmann::json& e) {
        if (e.is_number_integer()) return F.from_int(e.get<std::int64_t>());
        return fel_from_string(F, e.get<std::string>());
    };
    const auto& mats = j.at("mats");
    require(static_cast<int>(mats.size()) == m, "tuple json: mats count mismatch");
    for (const auto& mj : mats) {
        Mat M(F, n, n);
        require(static_cast<int>(mj.size()) == n, "tuple json: row count mismatch");
        for (int i = 0; i < n; ++i) {
            require(static_cast<int>(mj[i].size()) == n, "tuple json: column count mismatch");
            for (int jj = 0; jj < n; ++jj) M.at(i, jj) = parse_entry(mj[i][jj]);
        }
        out.tuple.mats.push_back(std::move(M));
    }
    return out;
}

inline TupleFile read_tuple(std::istream& is) {
    std::stringstream buffer;
    buffer << is.rdbuf();
    std::string text = buffer.str();
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        if (c == '{') return read_tuple_json(text);
        break;
    }
    std::istringstream ts(text);
    return read_tuple_text(ts);
}

// Cayley file: first line "N identity", then N lines of N 0-based indices.
inline CayleyTable read_cayley(std::istream& is) {
    CayleyTable G;
    require(static_cast<bool>(is >> G.order >> G.identity), "cayley: bad header");
    G.table.assign(G.order, std::vector<int>(G.order, 0));
    for (int i = 0; i < G.order; ++i)
        for (int j = 0; j < G.order; ++j)
            require(static_cast<bool>(is >> G.table[i][j]), "cayley: unexpected end of table");
    return G;
}

// One quadratic polynomial per non-empty line.
inline std::vector<QuadraticForm> read_polynomials(std::istream& is, const FieldCtx& F) {
    std::vector<QuadraticForm> out;
    std::string line;
    while (std::getline(is, line)) {
        bool blank = true;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
        if (blank) continue;
        out.push_back(parse_quadratic(line, F));
    }
    int n = 0;
    for (const auto& f : out) n = std::max(n, f.n);
    for (auto& f : out) f.n = n;
    return out;
}

}  // namespace starform
