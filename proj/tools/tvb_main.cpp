// Command-line front end: parse fan/bundle/projection documents, dispatch to
// the computation engines, and emit human-readable or deterministic
// machine-readable (JSON) reports.
//
// Exit codes: 0 success, 1 mathematical negative (not split, incompatible,
// invalid fan), 2 input or precondition error.

#include <CLI11.hpp>

#include "tvb/complexity_one.hpp"
#include "tvb/deformation.hpp"
#include "tvb/io.hpp"
#include "tvb/splitting.hpp"

#include <iostream>
#include <string>

using namespace tvb;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kMathNegative = 1;
constexpr int kInputError = 2;

struct Options {
    std::string fan_file;
    std::string bundle = "tangent";
    std::string with_bundle;
    std::string emit = "text";
    std::string mu;
    std::string op;
    std::string coeffs;
    std::string degree;
    int i = 1;
    int k = 2;
    long long seed = 0;
};

void emit_json(const json& j) { std::cout << j.dump() << "\n"; }

DivisorData parse_coeffs(const std::string& text, std::size_t n) {
    DivisorData d;
    std::stringstream ss(text);
    long long x;
    while (ss >> x) d.emplace_back(x);
    if (d.size() != n)
        throw std::invalid_argument("expected one divisor coefficient per ray");
    return d;
}

int cmd_validate(const Options& opt) {
    const auto doc = io::load_document(opt.fan_file);
    const auto diag = doc.fan->validate();
    if (opt.emit == "json") {
        emit_json({{"valid", diag.valid},
                   {"smooth", diag.smooth},
                   {"simplicial", diag.simplicial},
                   {"complete", diag.complete},
                   {"detail", diag.detail}});
    } else {
        std::cout << "valid: " << (diag.valid ? "yes" : "no") << "\n"
                  << "smooth: " << (diag.smooth ? "yes" : "no") << "\n"
                  << "simplicial: " << (diag.simplicial ? "yes" : "no") << "\n"
                  << "complete: " << (diag.complete ? "yes" : "no") << "\n";
        if (!diag.detail.empty()) std::cout << "detail: " << diag.detail << "\n";
    }
    return diag.valid ? kOk : kMathNegative;
}

int cmd_compat(const Options& opt) {
    const auto doc = io::load_document(opt.fan_file);
    const auto v = io::make_bundle(doc, opt.bundle);
    const auto res = check_compatibility(v);
    if (opt.emit == "json") {
        json j = {{"compatible", res.compatible}};
        if (!res.compatible) {
            j["failing_cone"] = res.failing_cone;
            j["failure"] = {{"filtration", res.failure.filtration},
                            {"level", res.failure.level}};
        }
        emit_json(j);
    } else if (res.compatible) {
        std::cout << "compatible (" << res.per_cone.size() << " maximal cones)\n";
    } else {
        std::cout << "incompatible at cone " << res.failing_cone << ": filtration "
                  << res.failure.filtration << ", level " << res.failure.level << "\n";
    }
    return res.compatible ? kOk : kMathNegative;
}

int cmd_bundle_report(const Options& opt, const KlyachkoBundle& v) {
    if (opt.emit == "json")
        emit_json(io::dump_bundle(v));
    else
        std::cout << io::format_filtrations(v);
    return kOk;
}

int cmd_tangent(const Options& opt) {
    const auto doc = io::load_document(opt.fan_file);
    return cmd_bundle_report(opt, tangent(doc.fan));
}

int cmd_line_bundle(const Options& opt) {
    const auto doc = io::load_document(opt.fan_file);
    return cmd_bundle_report(
        opt, line_bundle(doc.fan, parse_coeffs(opt.coeffs, doc.fan->rays().size())));
}

int cmd_sections(const Options& opt) {
    const auto doc = io::load_document(opt.fan_file);
    const auto gs = global_sections(io::make_bundle(doc, opt.bundle));
    if (opt.emit == "json") {
        emit_json(io::dump_graded(gs));
    } else {
        for (const auto& [u, d] : gs.entries)
            std::cout << "u = " << to_string(u) << " : " << d << "\n";
        std::cout << "total: " << gs.total() << "\n";
    }
    return kOk;
}

int cmd_cohom(const Options& opt) {
    const auto doc = io::load_document(opt.fan_file);
    const auto h = cech_cohomology(io::make_bundle(doc, opt.bundle), opt.i);
    if (opt.emit == "json") {
        emit_json({{"i", opt.i}, {"cohomology", io::dump_graded(h)}});
    } else {
        for (const auto& [u, d] : h.entries)
            std::cout << "u = " << to_string(u) << " : " << d << "\n";
        std::cout << "total h^" << opt.i << ": " << h.total() << "\n";
    }
    return kOk;
}

int cmd_ext(const Options& opt) {
    const auto doc = io::load_document(opt.fan_file);
    const auto v = io::make_bundle(doc, opt.bundle);
    const auto w = opt.with_bundle.empty() ? v : io::make_bundle(doc, opt.with_bundle);
    const auto e = ext_graded(v, w, opt.i);
    if (opt.emit == "json") {
        emit_json({{"i", opt.i}, {"ext", io::dump_graded(e)}});
    } else {
        for (const auto& [u, d] : e.entries)
            std::cout << "u = " << to_string(u) << " : " << d << "\n";
        std::cout << "total Ext^" << opt.i << ": " << e.total() << "\n";
    }
    return kOk;
}

int cmd_ops(const Options& opt) {
    const auto doc = io::load_document(opt.fan_file);
    const auto v = io::make_bundle(doc, opt.bundle);
    KlyachkoBundle out = v;
    if (opt.op == "sum" || opt.op == "tensor") {
        if (opt.with_bundle.empty())
            throw std::invalid_argument("--with is required for sum/tensor");
        const auto w = io::make_bundle(doc, opt.with_bundle);
        out = opt.op == "sum" ? direct_sum(v, w) : tensor(v, w);
    } else if (opt.op == "wedge") {
        out = wedge(v, opt.k);
    } else if (opt.op == "sym") {
        out = sym(v, opt.k);
    } else if (opt.op == "dual") {
        out = dual(v);
    } else {
        throw std::invalid_argument("unknown op: " + opt.op);
    }
    return cmd_bundle_report(opt, out);
}

int cmd_downgrade(const Options& opt) {
    const auto doc = io::load_document(opt.fan_file);
    ZMat mu(0, 0);
    if (!opt.mu.empty())
        mu = io::parse_mu(opt.mu, doc.fan->lattice_rank());
    else if (doc.projection)
        mu = *doc.projection;
    else
        throw std::invalid_argument("downgrade requires --mu or a projection in the document");
    const auto proj = make_projection(mu);
    const auto geo = downgrade_fan(*doc.fan, proj);
    const auto& q = *geo.quotient;

    json j;
    j["sigma_prime"] = json::array();
    for (const auto& c : geo.sigma_prime) {
        json rays = json::array();
        for (const auto& r : c.rays()) rays.push_back(io::dump_zvec(r));
        j["sigma_prime"].push_back(std::move(rays));
    }
    j["contracted"] = json::array();
    for (const auto& g : geo.contracted) j["contracted"].push_back(io::dump_zvec(g));
    j["poset"] = json::array();
    for (std::size_t a = 0; a < q.size(); ++a)
        for (std::size_t b = 0; b < q.size(); ++b)
            if (a != b && q.prefan().leq(a, b))
                j["poset"].push_back(json::array({a, b}));
    j["quotient"] = json::array();
    for (std::size_t e = 0; e < q.size(); ++e) {
        json cone_rays = json::array();
        for (const auto& r : q.prefan().cone(e).rays()) cone_rays.push_back(io::dump_zvec(r));
        json sub = json::array();
        for (std::size_t i = 0; i < q.sublattice(e).rows(); ++i)
            sub.push_back(io::dump_zvec(q.sublattice(e).row(i)));
        json stab = json::array();
        for (const auto& f : geo.stabilizers[e]) stab.push_back(io::to_ll(f));
        j["quotient"].push_back(
            {{"cone", std::move(cone_rays)}, {"sublattice", std::move(sub)},
             {"stabilizer", std::move(stab)}});
    }
    if (!opt.bundle.empty()) {
        const auto d = downgrade_bundle(io::make_bundle(doc, opt.bundle), proj);
        json hf = json::array();
        for (const auto& fam : d.h_filtrations) {
            json levels = json::array();
            for (std::size_t k = 0; k < fam.levels.size(); ++k)
                levels.push_back({{"level", fam.levels[k]},
                                  {"space", io::dump_subspace(fam.spaces[k])}});
            hf.push_back({{"gamma", io::dump_zvec(fam.gamma)}, {"levels", std::move(levels)}});
        }
        j["h_filtrations"] = std::move(hf);
        try {
            json prof = json::array();
            for (const auto& s : line_summand_profile(d)) {
                json jumps = json::array();
                for (int x : s.jumps) jumps.push_back(x);
                prof.push_back({{"jumps", std::move(jumps)},
                                {"line", io::dump_subspace(s.line)}});
            }
            j["line_summands"] = std::move(prof);
        } catch (const std::invalid_argument&) {
            j["line_summands"] = nullptr;  // not a sum of line bundles
        }
    }
    if (opt.emit == "json") {
        emit_json(j);
    } else {
        std::cout << "surviving cones: " << geo.sigma_prime.size() << "\n";
        std::cout << "contracted rays:";
        for (const auto& g : geo.contracted) std::cout << " " << to_string(g);
        std::cout << "\nquotient elements: " << q.size() << "\n";
        for (std::size_t e = 0; e < q.size(); ++e) {
            std::cout << "  element " << e << ": dim " << q.prefan().cone(e).dim()
                      << ", stabilizer";
            if (geo.stabilizers[e].empty())
                std::cout << " trivial";
            else
                for (const auto& f : geo.stabilizers[e]) std::cout << " Z/" << f;
            std::cout << "\n";
        }
    }
    return kOk;
}

int cmd_split(const Options& opt) {
    const auto doc = io::load_document(opt.fan_file);
    const auto res = split_into_line_bundles(io::make_bundle(doc, opt.bundle));
    if (opt.emit == "json") {
        json j = {{"split", res.split()}};
        if (res.split()) {
            json ss = json::array();
            for (const auto& s : *res.summands) {
                json div = json::array();
                for (const auto& a : s.divisor) div.push_back(io::to_ll(a));
                ss.push_back({{"divisor", std::move(div)}, {"line", io::dump_subspace(s.line)}});
            }
            j["summands"] = std::move(ss);
        } else {
            j["witness"] = {{"filtration", res.witness.filtration},
                            {"level", res.witness.level}};
        }
        emit_json(j);
    } else if (res.split()) {
        std::cout << "splits into " << res.summands->size() << " line bundles\n";
        for (const auto& s : *res.summands) {
            std::cout << "  divisor";
            for (const auto& a : s.divisor) std::cout << " " << a;
            std::cout << "\n";
        }
    } else {
        std::cout << "not split (witness: filtration " << res.witness.filtration
                  << ", level " << res.witness.level << ")\n";
    }
    return res.split() ? kOk : kMathNegative;
}

int cmd_obstructions(const Options& opt) {
    const auto doc = io::load_document(opt.fan_file);
    const auto rep = obstruction_report(doc.fan, opt.i);
    if (opt.emit == "json") {
        json rhs = json::array();
        for (const auto& [key, d] : rep.rhs.entries)
            rhs.push_back({{"rho", key.first}, {"gamma", key.second}, {"dim", d}});
        emit_json({{"i", opt.i},
                   {"ext", io::dump_graded(rep.lhs)},
                   {"rhs", std::move(rhs)},
                   {"rhs_total", rep.rhs.total},
                   {"match", rep.match}});
    } else {
        std::cout << "Ext^" << opt.i << "(T,T) total: " << rep.lhs.total() << "\n"
                  << "divisor cohomology total: " << rep.rhs.total << "\n"
                  << "match: " << (rep.match ? "yes" : "no") << "\n";
    }
    return rep.match ? kOk : kMathNegative;
}

int cmd_c1_sections(const Options& opt) {
    const auto doc = io::load_document(opt.fan_file);
    ZMat mu(0, 0);
    if (!opt.mu.empty())
        mu = io::parse_mu(opt.mu, doc.fan->lattice_rank());
    else if (doc.projection)
        mu = *doc.projection;
    else
        throw std::invalid_argument("c1-sections requires --mu or a document projection");
    const auto proj = make_projection(mu);
    const auto data = c1_from_downgrade(downgrade_fan(*doc.fan, proj), proj);
    if (!opt.degree.empty()) {
        std::stringstream ss(opt.degree);
        ZVec u;
        long long x;
        while (ss >> x) u.emplace_back(x);
        const auto s = vf_sections_degree(data, u);
        if (opt.emit == "json")
            emit_json({{"u", io::dump_zvec(u)}, {"dim", s.dim}, {"case", s.case_id}});
        else
            std::cout << "u = " << to_string(u) << " : dim " << s.dim << " (case "
                      << s.case_id << ")\n";
        return kOk;
    }
    const auto total = total_vf(data);
    if (opt.emit == "json")
        emit_json(io::dump_graded(total));
    else {
        for (const auto& [u, d] : total.entries)
            std::cout << "u = " << to_string(u) << " : " << d << "\n";
        std::cout << "total: " << total.total() << "\n";
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact computations with equivariant vector bundles on toric varieties"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* sub, bool needs_bundle = false) {
        sub->add_option("--fan", opt.fan_file, "input JSON document")->required();
        sub->add_option("--emit", opt.emit, "output format: text|filtrations|graded|json");
        sub->add_option("--seed", opt.seed, "sampling seed");
        if (needs_bundle)
            sub->add_option("--bundle", opt.bundle,
                            "bundle name, or tangent|canonical|trivial");
    };

    auto* validate = app.add_subcommand("validate", "fan diagnostics");
    add_common(validate);
    auto* compat = app.add_subcommand("compat", "compatibility check");
    add_common(compat, true);
    auto* tangent_cmd = app.add_subcommand("tangent", "tangent bundle filtrations");
    add_common(tangent_cmd);
    auto* sections = app.add_subcommand("sections", "graded global sections");
    add_common(sections, true);
    auto* cohom = app.add_subcommand("cohom", "graded Cech cohomology");
    add_common(cohom, true);
    cohom->add_option("--i", opt.i, "cohomological degree");
    auto* ext = app.add_subcommand("ext", "graded Ext groups");
    add_common(ext, true);
    ext->add_option("--i", opt.i, "Ext degree");
    ext->add_option("--with", opt.with_bundle, "second bundle (defaults to the first)");
    auto* lb = app.add_subcommand("line-bundle", "line bundle from divisor coefficients");
    add_common(lb);
    lb->add_option("--coeffs", opt.coeffs, "divisor coefficients, one per ray")->required();
    auto* ops = app.add_subcommand("ops", "bundle operations");
    add_common(ops, true);
    ops->add_option("--op", opt.op, "sum|tensor|wedge|sym|dual")->required();
    ops->add_option("--with", opt.with_bundle, "second bundle for sum/tensor");
    ops->add_option("--k", opt.k, "exterior/symmetric power");
    auto* down = app.add_subcommand("downgrade", "toric downgrade");
    add_common(down, true);
    down->add_option("--mu", opt.mu, "projection matrix, rows separated by ';'");
    auto* split = app.add_subcommand("split", "equivariant splitting");
    add_common(split, true);
    auto* obs = app.add_subcommand("obstructions", "deformation obstruction comparison");
    add_common(obs);
    obs->add_option("--i", opt.i, "Ext degree (>= 2)");
    auto* c1 = app.add_subcommand("c1-sections", "complexity-one global vector fields");
    add_common(c1);
    c1->add_option("--mu", opt.mu, "rank-one projection matrix");
    c1->add_option("--u", opt.degree, "single degree to evaluate");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInputError;
    }

    try {
        if (*validate) return cmd_validate(opt);
        if (*compat) return cmd_compat(opt);
        if (*tangent_cmd) return cmd_tangent(opt);
        if (*sections) return cmd_sections(opt);
        if (*cohom) return cmd_cohom(opt);
        if (*ext) return cmd_ext(opt);
        if (*lb) return cmd_line_bundle(opt);
        if (*ops) return cmd_ops(opt);
        if (*down) return cmd_downgrade(opt);
        if (*split) return cmd_split(opt);
        if (*obs) return cmd_obstructions(opt);
        if (*c1) return cmd_c1_sections(opt);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error[precondition]: " << e.what() << "\n";
        return kInputError;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error[parse]: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "error[internal]: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}
