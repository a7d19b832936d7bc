#pragma once

// JSON input documents and deterministic machine-readable serialization for
// the command-line front end. All rationals are exact (numerator/denominator
// pairs), never decimals.

#include "tvb/bundle_ops.hpp"
#include "tvb/cohomology.hpp"
#include "tvb/downgrade.hpp"

#include <json.hpp>

#include <fstream>
#include <memory>
#include <string>

namespace tvb::io {

using nlohmann::json;

inline long long to_ll(const Int& v) { return v.convert_to<long long>(); }

// ---- parsing --------------------------------------------------------------

struct InputDocument {
    int schema_version = 1;
    std::shared_ptr<const Fan> fan;
    json bundles;  ///< raw bundle table, materialized on demand
    std::optional<ZMat> projection;
};

inline ZVec parse_zvec(const json& j) {
    ZVec v;
    for (const auto& x : j) {
        if (!x.is_number_integer()) throw std::invalid_argument("expected integer entry");
        v.emplace_back(x.get<long long>());
    }
    return v;
}

inline ZMat parse_zmat(const json& j) {
    std::vector<ZVec> rows;
    for (const auto& r : j) rows.push_back(parse_zvec(r));
    if (rows.empty()) throw std::invalid_argument("empty matrix");
    return ZMat::from_rows(rows, rows[0].size());
}

inline InputDocument load_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open input file: " + path);
    json j;
    in >> j;
    InputDocument doc;
    if (j.contains("schema_version")) doc.schema_version = j["schema_version"].get<int>();
    if (doc.schema_version != 1) throw std::invalid_argument("unsupported schema_version");
    if (!j.contains("rays") || !j.contains("cones"))
        throw std::invalid_argument("document requires rays and cones");
    std::vector<ZVec> rays;
    for (const auto& r : j["rays"]) rays.push_back(parse_zvec(r));
    if (rays.empty()) throw std::invalid_argument("no rays");
    std::vector<std::vector<int>> cones;
    for (const auto& c : j["cones"]) {
        std::vector<int> idx;
        for (const auto& x : c) {
            const int i = x.get<int>();
            if (i < 0 || i >= static_cast<int>(rays.size()))
                throw std::invalid_argument("cone ray index out of range");
            idx.push_back(i);
        }
        cones.push_back(std::move(idx));
    }
    doc.fan = std::make_shared<Fan>(fans::from_rays_and_cones(rays[0].size(), rays, cones));
    if (j.contains("bundles")) doc.bundles = j["bundles"];
    if (j.contains("projection")) doc.projection = parse_zmat(j["projection"]);
    return doc;
}

inline Subspace parse_subspace(const json& j, std::size_t ambient) {
    std::vector<QVec> rows;
    for (const auto& r : j) {
        QVec v;
        for (const auto& e : r) {
            if (!e.is_array() || e.size() != 2)
                throw std::invalid_argument("basis entries must be [num, den] pairs");
            const long long num = e[0].get<long long>();
            const long long den = e[1].get<long long>();
            if (den == 0) throw std::invalid_argument("zero denominator");
            v.push_back(Rat(Int(num), Int(den)));
        }
        if (v.size() != ambient) throw std::invalid_argument("basis row length mismatch");
        rows.push_back(std::move(v));
    }
    return Subspace::span(rows, ambient);
}

/// Materialize a named bundle from the document, or the builtin
/// "tangent" / "canonical" / "trivial" bundles.
inline KlyachkoBundle make_bundle(const InputDocument& doc, const std::string& name) {
    if (name == "tangent") return tangent(doc.fan);
    if (name == "canonical") return canonical(doc.fan);
    if (name == "trivial") return trivial_bundle(doc.fan);
    if (!doc.bundles.contains(name)) throw std::invalid_argument("unknown bundle: " + name);
    const json& b = doc.bundles[name];
    const std::size_t rank = b.at("rank").get<std::size_t>();
    std::vector<Filtration> fs(doc.fan->rays().size(), Filtration::trivial(rank));
    for (const auto& [key, steps] : b.at("filtrations").items()) {
        const int ray = std::stoi(key);
        if (ray < 0 || ray >= static_cast<int>(fs.size()))
            throw std::invalid_argument("filtration ray index out of range");
        std::vector<std::pair<int, Subspace>> st;
        for (const auto& s : steps)
            st.emplace_back(s.at("level").get<int>(), parse_subspace(s.at("basis"), rank));
        fs[ray] = Filtration(rank, std::move(st));
    }
    return KlyachkoBundle(doc.fan, rank, std::move(fs));
}

inline ZMat parse_mu(const std::string& text, std::size_t cols) {
    std::vector<ZVec> rows;
    std::string row;
    std::stringstream ss(text);
    while (std::getline(ss, row, ';')) {
        ZVec v;
        std::stringstream rs(row);
        long long x;
        while (rs >> x) v.emplace_back(x);
        if (!v.empty()) rows.push_back(std::move(v));
    }
    if (rows.empty()) throw std::invalid_argument("empty projection matrix");
    for (const auto& r : rows)
        if (r.size() != cols) throw std::invalid_argument("projection row length mismatch");
    return ZMat::from_rows(rows, cols);
}

// ---- serialization --------------------------------------------------------

inline json dump_zvec(const ZVec& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(to_ll(x));
    return a;
}

inline json dump_subspace(const Subspace& s) {
    json rows = json::array();
    for (std::size_t i = 0; i < s.dim(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < s.ambient_dim(); ++j) {
            const Rat& x = s.basis()(i, j);
            row.push_back(json::array({to_ll(boost::multiprecision::numerator(x)),
                                       to_ll(boost::multiprecision::denominator(x))}));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline json dump_filtration(const Filtration& f) {
    json steps = json::array();
    for (const auto& [lvl, sp] : f.steps())
        steps.push_back({{"level", lvl}, {"basis", dump_subspace(sp)}});
    return steps;
}

inline json dump_bundle(const KlyachkoBundle& v) {
    json fs = json::object();
    for (std::size_t i = 0; i < v.nrays(); ++i)
        fs[std::to_string(i)] = dump_filtration(v.filtration(i));
    return {{"rank", v.rank()}, {"filtrations", std::move(fs)}};
}

inline json dump_graded(const GradedDims& g) {
    json entries = json::array();
    for (const auto& [u, d] : g.entries)
        entries.push_back({{"u", dump_zvec(u)}, {"dim", d}});
    return {{"entries", std::move(entries)}, {"total", g.total()}};
}

/// Human-readable jump table in the case-display style: one line per ray,
/// level ranges mapped to space descriptions.
inline std::string format_filtrations(const KlyachkoBundle& v) {
    std::string out;
    for (std::size_t i = 0; i < v.nrays(); ++i) {
        out += "ray " + std::to_string(i) + " = " + tvb::to_string(v.ray_vector(i)) + ":\n";
        const auto& steps = v.filtration(i).steps();
        for (std::size_t k = 0; k < steps.size(); ++k) {
            const auto& [lvl, sp] = steps[k];
            std::string range = k == 0 ? ("i <= " + std::to_string(lvl))
                                       : (std::to_string(steps[k - 1].first + 1) +
                                          (steps[k - 1].first + 1 == lvl
                                               ? ""
                                               : " <= i <= " + std::to_string(lvl)));
            std::string desc = sp.is_full() ? "E" : ("span of " + std::to_string(sp.dim()) +
                                                     " row(s)");
            out += "  " + range + " : " + desc + "\n";
        }
        out += "  i > " + std::to_string(steps.back().first) + " : 0\n";
    }
    return out;
}

}  // namespace tvb::io
