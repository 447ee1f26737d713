// Command-line front end: JSON in, JSON out.
//
// Exit codes: 0 success, 1 negative verdict of a decision query, 2 input error.

#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "ddg/ddg.hpp"
#include "ddg/io.hpp"
#include "ddg/reproduction.hpp"

namespace {

using nlohmann::json;
namespace io = ddg::io;

struct Options {
    std::optional<std::size_t> chain;
    std::optional<std::size_t> cycle;
    std::string family = "all";
    std::optional<std::size_t> depth;
    std::optional<long long> bound;
    std::string input;
    std::string inline_json;
    bool pretty = false;
};

struct Negative {
    json payload;
};

json read_input(const Options& o) {
    std::string text;
    if (!o.inline_json.empty()) {
        text = o.inline_json;
    } else if (o.input == "-") {
        text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
    } else if (!o.input.empty()) {
        std::ifstream in(o.input);
        if (!in) throw ddg::InputError("cannot open input file " + o.input);
        text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    } else {
        throw ddg::InputError("this subcommand needs --input FILE or --json TEXT");
    }
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ddg::InputError(std::string("malformed JSON: ") + e.what());
    }
}

bool has_input(const Options& o) { return !o.input.empty() || !o.inline_json.empty(); }

ddg::Digraph digraph_arg(const Options& o, const json* in = nullptr) {
    if (o.chain && o.cycle) throw ddg::InputError("give only one of --chain and --cycle");
    if (o.chain) return ddg::chain_digraph(*o.chain);
    if (o.cycle) {
        if (*o.cycle % 2 != 0) throw ddg::InputError("--cycle takes an even vertex count 2m");
        return ddg::cycle_digraph(*o.cycle / 2);
    }
    if (in) return io::digraph_from_json(in->contains("digraph") ? in->at("digraph") : *in);
    throw ddg::InputError("need --chain r, --cycle 2m or a digraph in the input");
}

ddg::FamilyPtr family_arg(const Options& o, const ddg::Digraph& h, const json* in = nullptr) {
    if (in && in->is_object() && in->contains("family")) return io::family_from_json(h, in->at("family"));
    if (o.family.find_first_of("0123456789") == 0) {
        json idx = json::array();
        std::stringstream ss(o.family);
        std::string tok;
        while (std::getline(ss, tok, ','))
            if (!tok.empty()) idx.push_back(std::stoul(tok));
        return io::family_from_json(h, idx);
    }
    return io::family_from_json(h, o.family);
}

/// Digraph and family from flags, falling back to the input document.
std::pair<ddg::Digraph, ddg::FamilyPtr> structure(const Options& o) {
    if (!o.chain && !o.cycle && has_input(o)) {
        const json in = read_input(o);
        ddg::Digraph h = digraph_arg(o, &in);
        return {h, family_arg(o, h, &in)};
    }
    ddg::Digraph h = digraph_arg(o);
    return {h, family_arg(o, h)};
}

void emit(const Options& o, const json& j) { std::cout << (o.pretty ? j.dump(2) : j.dump()) << "\n"; }

/// Matrix-valued results: JSON, or an aligned grid with --pretty.
void emit_matrix(const Options& o, const ddg::IntMatrix& m, json extra = json::object()) {
    if (o.pretty) {
        std::cout << m;
        return;
    }
    extra["matrix"] = io::to_json(m);
    emit(o, extra);
}

std::vector<ddg::DDElement> images_from_json(const json& j, const ddg::Digraph& h) {
    std::vector<ddg::DDElement> out;
    for (const auto& g : io::field(j, "images")) out.push_back(io::dd_from_json(g, &h));
    return out;
}

// ---- subcommands ------------------------------------------------------------

void cmd_enumerate(const Options& o) {
    auto [h, fam] = structure(o);
    emit(o, {{"digraph", io::to_json(h)}, {"family", io::family_to_json(*fam)}, {"count", fam->size()},
             {"classes", io::classes_to_json(*fam)}});
}

void cmd_coeff_matrix(const Options& o) {
    auto [h, fam] = structure(o);
    const ddg::IntMatrix x = ddg::coefficient_matrix(*fam);
    emit_matrix(o, x, {{"classes", fam->size()}, {"rank", ddg::rank(x)}});
}

void cmd_uniqueness(const Options& o) {
    auto [h, fam] = structure(o);
    const ddg::UniquenessReport r = ddg::uniqueness_property(*fam);
    const json j = io::to_json(r);
    if (!r.unique) throw Negative{j};
    emit(o, j);
}

void cmd_induced_map(const Options& o) {
    const json in = read_input(o);
    const ddg::Signature s = io::signature_from_json(in);
    const ddg::IntMatrix m = ddg::induced_dd_map(s);
    if (o.pretty) {
        std::cout << m;
        return;
    }
    json images = json::array();
    for (const auto& g : ddg::generator_images(s)) images.push_back(io::to_json(g));
    emit(o, {{"digraph", io::to_json(s.digraph())},
             {"family", io::family_to_json(*s.family)},
             {"matrix", io::to_json(m)},
             {"k0", io::to_json(ddg::k0_matrix(s))},
             {"images", std::move(images)}});
}

void cmd_recover(const Options& o) {
    const json in = read_input(o);
    const ddg::Digraph h = digraph_arg(o, &in);
    const ddg::FamilyPtr fam = family_arg(o, h, &in);
    try {
        emit(o, io::to_json(ddg::recover_signature(fam, images_from_json(in, h))));
    } catch (const ddg::NotLiftable& e) {
        throw Negative{{{"liftable", false}, {"reason", e.what()}}};
    }
}

void cmd_regular_map(const Options& o) {
    const json in = read_input(o);
    emit_matrix(o, ddg::induced_regular_map(io::signature_from_json(in)));
}

void cmd_scale(const Options& o) {
    const json in = read_input(o);
    const ddg::HAlgebra a = io::algebra_from_json(io::field(in, "algebra"));
    const ddg::ScaleReport r = ddg::scale_membership(a, io::dd_from_json(io::field(in, "element"), &a.digraph));
    if (!r.member) throw Negative{io::to_json(r)};
    emit(o, io::to_json(r));
}

void cmd_mu_scale(const Options& o) {
    const json in = read_input(o);
    const ddg::HAlgebra b = io::algebra_from_json(io::field(in, "algebra"));
    const ddg::FamilyPtr fam = family_arg(o, b.digraph, &in);
    auto w = ddg::matrix_unit_scale_membership(b, fam, images_from_json(in, b.digraph));
    if (!w) throw Negative{{{"member", false}}};
    emit(o, {{"member", true}, {"witness", io::to_json(*w)}});
}

void cmd_multicone(const Options& o) {
    const json in = read_input(o);
    const ddg::Digraph h = digraph_arg(o, &in);
    const ddg::FamilyPtr fam = family_arg(o, h, &in);
    std::vector<ddg::IntVector> tuple;
    for (const auto& v : io::field(in, "tuple")) tuple.push_back(io::vector_from_json(v));
    const bool stable = in.value("stable", true);
    std::optional<ddg::HAlgebra> target;
    if (in.contains("target")) target = io::algebra_from_json(in.at("target"));
    auto w = ddg::multicone_membership(fam, tuple, stable, target);
    if (!w) throw Negative{{{"member", false}, {"stable", stable}}};
    emit(o, {{"member", true}, {"stable", stable}, {"witness", io::to_json(*w)}});
}

void cmd_semigroup_table(const Options& o) {
    auto [h, fam] = structure(o);
    emit(o, {{"classes", io::classes_to_json(*fam)}, {"table", ddg::composition_table(*fam)}});
}

void cmd_cycles_k0(const Options& o) {
    const std::size_t n = o.cycle.value_or(4);
    if (n % 2 != 0 || n < 4) throw ddg::InputError("--cycle takes an even vertex count 2m >= 4");
    auto fam = ddg::rigid_family(n / 2);
    json mats = json::array();
    for (const auto& m : ddg::rigid_k0_matrices(n / 2)) mats.push_back(io::to_json(m));
    emit(o, {{"classes", io::classes_to_json(*fam)}, {"k0", std::move(mats)}});
}

void cmd_cycles_h1(const Options& o) {
    const json in = read_input(o);
    emit(o, {{"h1", io::integer_to_json(ddg::h1_of_signature(io::signature_from_json(in)))}});
}

void cmd_cycles_gphi(const Options& o) {
    const json in = read_input(o);
    emit_matrix(o, ddg::g_phi_matrix(io::signature_from_json(in)));
}

void cmd_cycles_groupring(const Options& o) {
    const json in = read_input(o);
    const ddg::GroupRingElement g = io::group_ring_from_json(in);
    emit_matrix(o, ddg::group_ring_left_mult_matrix(g.m, g.coefficients));
}

void cmd_system_query(const Options& o) {
    const json in = read_input(o);
    const ddg::DirectSystem sys = io::system_from_json(io::field(in, "system"));
    const ddg::Digraph& h = sys.digraph();
    const ddg::DDElement g = io::dd_from_json(io::field(in, "element"), &h);
    const std::size_t k = io::count_from_json(io::field(in, "stage"), "stage");
    const std::string mode = in.value("mode", "push");
    if (mode == "push") {
        const std::size_t n = io::count_from_json(io::field(in, "to"), "to");
        emit(o, {{"stage", n}, {"element", io::to_json(ddg::push_forward(sys, g, k, n))}});
        return;
    }
    if (!o.depth) throw ddg::InputError("equal and positive queries need --depth N");
    ddg::LimitVerdict v;
    json j;
    if (mode == "equal") {
        const ddg::DDElement other = io::dd_from_json(io::field(in, "other"), &h);
        const std::size_t l = io::count_from_json(io::field(in, "other_stage"), "other_stage");
        v = ddg::equal_in_limit(sys, g, k, other, l, *o.depth);
        j = {{"verdict", v.holds ? "equal-by-stage" : "distinct-through-stage"}, {"stage", v.stage}};
    } else if (mode == "positive") {
        v = ddg::positive_in_limit(sys, g, k, *o.depth);
        j = {{"verdict", v.holds ? "positive-by-stage" : "not-positive-through-stage"}, {"stage", v.stage}};
    } else {
        throw ddg::InputError("mode must be push, equal or positive");
    }
    if (!v.holds) throw Negative{j};
    emit(o, j);
}

void cmd_system_k0(const Options& o) {
    const json in = read_input(o);
    const ddg::DirectSystem sys = io::system_from_json(in.contains("system") ? in.at("system") : in);
    json mats = json::array();
    for (const auto& m : ddg::k0_subsystem(sys, o.depth)) mats.push_back(io::to_json(m));
    emit(o, {{"k0", std::move(mats)}});
}

void cmd_system_stationary(const Options& o) {
    const json in = read_input(o);
    const ddg::DirectSystem sys = io::system_from_json(in.contains("system") ? in.at("system") : in);
    emit(o, io::to_json(ddg::stationary_analysis(sys)));
}

void cmd_system_intertwine(const Options& o) {
    const json in = read_input(o);
    const ddg::DirectSystem a = io::system_from_json(io::field(in, "a"));
    const ddg::DirectSystem b = io::system_from_json(io::field(in, "b"));
    ddg::IntertwineOptions opt;
    if (o.depth) opt.depth = *o.depth;
    if (o.bound) {
        if (*o.bound < 0) throw ddg::InputError("--bound must be nonnegative");
        opt.multiplicity_bound = *o.bound;
    }
    const ddg::IntertwineResult r = ddg::intertwine_search(a, b, opt);
    if (!r.witness) throw Negative{io::to_json(r)};
    emit(o, io::to_json(r));
}

int cmd_paper_check() {
    const auto results = ddg::repro::run_all();
    ddg::repro::print_report(std::cout, results);
    bool all = true;
    for (const auto& c : results) all = all && c.pass();
    return all ? 0 : 1;
}

void add_common(CLI::App* app, Options& o) {
    app->add_option("--chain", o.chain, "chain digraph T_r");
    app->add_option("--cycle", o.cycle, "cycle digraph with 2m vertices");
    app->add_option("--family", o.family, "all | auto | nondeg | comma-separated class indices");
    app->add_option("--depth", o.depth, "search or query depth");
    app->add_option("--bound", o.bound, "multiplicity bound");
    app->add_option("--input", o.input, "JSON input file, - for stdin");
    app->add_option("--json", o.inline_json, "inline JSON input");
    app->add_flag("--pretty", o.pretty, "indented JSON, aligned matrix grids");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dimension distribution groups and regular embeddings of digraph algebras"};
    app.require_subcommand(1);
    Options o;
    int code = 0;

    auto sub = [&](CLI::App* parent, const std::string& name, const std::string& help, auto fn) {
        CLI::App* c = parent->add_subcommand(name, help);
        add_common(c, o);
        c->callback([&o, fn] { fn(o); });
        return c;
    };

    sub(&app, "enumerate", "multiplicity-one classes of a family", cmd_enumerate);
    sub(&app, "coeff-matrix", "signature-to-images coefficient matrix", cmd_coeff_matrix);
    sub(&app, "uniqueness", "decide the uniqueness property", cmd_uniqueness);
    sub(&app, "recover", "signatures from generator images", cmd_recover);
    sub(&app, "induced-map", "induced map on the dimension distribution group", cmd_induced_map);
    sub(&app, "regular-map", "induced map on the regular Grothendieck group", cmd_regular_map);
    sub(&app, "scale", "scale membership of a rank distribution", cmd_scale);
    sub(&app, "mu-scale", "matrix unit scale membership", cmd_mu_scale);
    sub(&app, "multicone", "multicone or multiscale membership", cmd_multicone);
    sub(&app, "semigroup-table", "composition table of a family", cmd_semigroup_table);

    CLI::App* cycles = app.add_subcommand("cycles", "cycle algebra computations");
    cycles->require_subcommand(1);
    sub(cycles, "k0", "K0 matrices of rigid classes", cmd_cycles_k0);
    sub(cycles, "h1", "induced map on H1", cmd_cycles_h1);
    sub(cycles, "gphi", "8x8 G(phi) of a rigid 4-cycle signature", cmd_cycles_gphi);
    sub(cycles, "groupring", "left multiplication matrix in the group ring", cmd_cycles_groupring);

    CLI::App* system = app.add_subcommand("system", "direct systems");
    system->require_subcommand(1);
    sub(system, "query", "push, equality or positivity of an element", cmd_system_query);
    sub(system, "k0", "K0 subsystem (loop blocks of the links)", cmd_system_k0);
    sub(system, "stationary", "eventual rank of a stationary system", cmd_system_stationary);
    sub(system, "intertwine", "bounded search for an intertwining diagram", cmd_system_intertwine);

    CLI::App* check = app.add_subcommand("paper-check", "run every reproduction check");
    check->callback([&code] { code = cmd_paper_check(); });

    if (argc > 1 && argv[1][0] != '-' && !app.get_subcommand_no_throw(argv[1])) {
        std::cerr << "error: unknown subcommand '" << argv[1] << "' (run with --help for the list)\n";
        return 2;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const Negative& n) {
        std::cout << (o.pretty ? n.payload.dump(2) : n.payload.dump()) << "\n";
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: bad input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return code;
}
