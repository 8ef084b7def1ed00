// Command-line front end. Exit codes: 0 = positive answer / witness written,
// 1 = negative answer, 2 = error (bad input, field too small, budget).

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "starform/starform.hpp"

namespace {

using namespace starform;

constexpr int kExitPositive = 0;
constexpr int kExitNegative = 1;
constexpr int kExitError = 2;

TupleFile load_tuple(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open " + path);
    return read_tuple(in);
}

CayleyTable load_cayley(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open " + path);
    return read_cayley(in);
}

void emit_matrix(const FieldCtx& F, const Mat& M, const std::string& out_path,
                 const std::string& label) {
    if (out_path.empty()) {
        std::cout << label << '\n';
        write_matrix(std::cout, F, M);
    } else {
        std::ofstream out(out_path);
        if (!out) throw input_error("cannot write " + out_path);
        write_matrix(out, F, M);
        std::cout << label << " -> " << out_path << '\n';
    }
}

struct CommonOpts {
    std::uint64_t seed = 0;
    std::uint64_t budget = 1024;
    std::string out;
};

int run_isometry(const std::string& a, const std::string& b, const CommonOpts& opt, bool general) {
    TupleFile B = load_tuple(a);
    TupleFile C = load_tuple(b);
    require(B.field.same_field(C.field), "isometry: the two tuples use different fields");
    Rng rng(opt.seed);
    IsometryOutcome r = general ? isometry_general(B.tuple, C.tuple, rng)
                                : isometry_test(B.tuple, C.tuple, rng);
    if (!r.witness) {
        std::cout << "not isometric: refuted at stage " << r.refutation_stage << '\n';
        return kExitNegative;
    }
    emit_matrix(B.field, r.witness->F, opt.out, "isometry witness F");
    return kExitPositive;
}

int run_symmetrize(const std::string& a, const std::string& eps, const CommonOpts& opt) {
    TupleFile B = load_tuple(a);
    if (!eps.empty()) B.tuple.sig = parse_sig(eps, B.tuple.m());
    require(B.tuple.sig.has_value(), "symmetrize: pass --eps or store a signature in the file");
    auto w = symmetrize(B.tuple);
    if (!w) {
        std::cout << "not epsilon-symmetrizable\n";
        return kExitNegative;
    }
    emit_matrix(B.field, w->E, opt.out, "symmetrizer E (A = E, D = I)");
    return kExitPositive;
}

int run_pit(const std::string& a, const CommonOpts& opt) {
    TupleFile B = load_tuple(a);
    PitReport r = pit_witness(B.tuple.mats);
    int exit_code = kExitNegative;
    if (r.skew_subspace) {
        std::cout << "skew-subspace witness: positive\n";
        emit_matrix(B.field, r.skew_subspace->E, "", "transform E with E*B_i skew");
        exit_code = kExitPositive;
    } else {
        std::cout << "skew-subspace witness: negative\n";
    }
    if (r.skew_induced) {
        std::cout << "skew-induced witness: positive\n";
        emit_matrix(B.field, r.skew_induced->E, "", "transform E on the flipped tuple");
        exit_code = kExitPositive;
    } else {
        std::cout << "skew-induced witness: negative";
        if (!r.note.empty()) std::cout << " (" << r.note << ')';
        std::cout << '\n';
    }
    (void)opt;
    return exit_code;
}

int run_iqf1s(const std::string& a, const std::string& b, const std::string& field,
              const CommonOpts& opt) {
    FieldCtx F = parse_field_spec(field);
    std::ifstream fa(a), fb(b);
    if (!fa) throw input_error("cannot open " + a);
    if (!fb) throw input_error("cannot open " + b);
    auto fs = read_polynomials(fa, F);
    auto gs = read_polynomials(fb, F);
    Rng rng(opt.seed);
    auto sol = iqf1s(fs, gs, F, rng);
    if (!sol) {
        std::cout << "no secret transformation exists\n";
        return kExitNegative;
    }
    emit_matrix(F, *sol, opt.out, "secret A");
    return kExitPositive;
}

int run_pseudo(const std::string& a, const std::string& b, const CommonOpts& opt) {
    TupleFile B = load_tuple(a);
    TupleFile C = load_tuple(b);
    require(B.field.same_field(C.field), "pseudo-isometry: fields differ");
    Rng rng(opt.seed);
    auto r = pseudo_isometry(B.tuple, C.tuple, rng, opt.budget);
    if (!r) {
        std::cout << "not pseudo-isometric\n";
        return kExitNegative;
    }
    emit_matrix(B.field, r->X, opt.out, "pseudo-isometry X");
    if (r->basis_change.rows() > 0) emit_matrix(B.field, r->basis_change, "", "basis change T");
    return kExitPositive;
}

int run_pgroup(const std::string& a, const std::string& b, std::uint32_t p, bool strict,
               const CommonOpts& opt) {
    CayleyTable G = load_cayley(a);
    CayleyTable H = load_cayley(b);
    FieldCtx F(p);
    Rng rng(opt.seed);
    bool iso = pgroup_iso(G, H, F, rng, opt.budget, strict);
    std::cout << (iso ? "isomorphic" : "not isomorphic") << '\n';
    return iso ? kExitPositive : kExitNegative;
}

int run_canon(const std::string& a, const std::string& type, const CommonOpts& opt) {
    TupleFile B = load_tuple(a);
    require(B.tuple.m() == 1, "canon: the input must contain exactly one form");
    Rng rng(opt.seed);
    FormType t;
    std::optional<SubfieldTower> tower;
    if (type == "orthogonal") {
        t = FormType::orthogonal;
    } else if (type == "symplectic") {
        t = FormType::symplectic;
    } else if (type == "hermitian") {
        t = FormType::hermitian;
        require(B.field.k() % 2 == 0, "canon: hermitian needs an even-degree extension field");
        tower = subfield_tower(B.field, B.field.k() / 2);
    } else {
        throw input_error("canon: type must be orthogonal, symplectic or hermitian");
    }
    FormInstance f(B.tuple.mats[0], t, tower);
    CanonicalForm c = canonicalize(f, rng);
    std::cout << "type " << form_type_name(c.type) << ", size " << c.n;
    if (c.type == FormType::orthogonal)
        std::cout << ", label diag(1..1" << (c.omega_count ? ",w" : "") << ") with w = "
                  << fel_to_string(B.field, c.omega);
    std::cout << '\n';
    emit_matrix(B.field, c.transform, opt.out, "transform T with T^t G T' canonical");
    return kExitPositive;
}

int run_algebra_info(const std::string& a, bool star, const CommonOpts& opt) {
    TupleFile B = load_tuple(a);
    Rng rng(opt.seed);
    require(B.tuple.sig.has_value(), "algebra-info: the tuple needs a signature");
    AdjointAlgebra adj = adjoint(B.tuple);
    Structure sd(adj.alg, rng);
    std::cout << "dim Adj = " << adj.alg.dim() << ", dim Rad = " << sd.radical_space().dim() << '\n';
    for (std::size_t i = 0; i < sd.summands().size(); ++i) {
        const auto& s = sd.summands()[i];
        std::cout << "summand " << i << ": M(" << s.ni << ", F_" << s.field.q() << ")\n";
    }
    if (star) {
        StarStructure ss = induced_star_structure(adj, sd, rng);
        for (int i = 0; i < ss.summand_count(); ++i) {
            if (ss.pairing[i] == i)
                std::cout << "summand " << i << ": fixed, "
                          << star_kind_name(ss.fixed[i]->kind) << " type\n";
            else
                std::cout << "summand " << i << ": exchanged with " << ss.pairing[i] << '\n';
        }
    }
    return kExitPositive;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact isometry and symmetrization of matrix tuples over odd finite fields"};
    app.require_subcommand(1);

    CommonOpts opt;
    app.add_option("--seed", opt.seed, "seed for all randomized searches");
    app.add_option("--budget", opt.budget, "enumeration budget for basis searches");

    std::string in_a, in_b, eps, field, type = "orthogonal";
    std::uint32_t prime = 3;
    bool strict = false, star = false;

    auto* iso = app.add_subcommand("isometry", "decide isometry of two epsilon-symmetric tuples");
    iso->add_option("B", in_a)->required();
    iso->add_option("C", in_b)->required();
    iso->add_option("--out", opt.out, "write the witness matrix to a file");

    auto* isog = app.add_subcommand("isometry-general", "isometry of arbitrary square tuples");
    isog->add_option("B", in_a)->required();
    isog->add_option("C", in_b)->required();
    isog->add_option("--out", opt.out);

    auto* sym = app.add_subcommand("symmetrize", "decide epsilon-symmetrizability");
    sym->add_option("B", in_a)->required();
    sym->add_option("--eps", eps, "signature list, e.g. 1,-1 (overrides the file)");
    sym->add_option("--out", opt.out);

    auto* pit = app.add_subcommand("pit-witness", "recognize the two skew singularity witnesses");
    pit->add_option("B", in_a)->required();

    auto* iq = app.add_subcommand("iqf1s", "isomorphism of quadratic forms with one secret");
    iq->add_option("f", in_a)->required();
    iq->add_option("g", in_b)->required();
    iq->add_option("--field", field, "field spec, e.g. 7 or 3^2/1,0,1")->required();
    iq->add_option("--out", opt.out);

    auto* ps = app.add_subcommand("pseudo-isometry", "span congruence by basis enumeration");
    ps->add_option("B", in_a)->required();
    ps->add_option("C", in_b)->required();
    ps->add_option("--out", opt.out);

    auto* pg = app.add_subcommand("pgroup-iso", "isomorphism of class-2 exponent-p groups");
    pg->add_option("G", in_a)->required();
    pg->add_option("H", in_b)->required();
    pg->add_option("--p", prime, "the odd prime")->required();
    pg->add_flag("--strict", strict, "full associativity verification");

    auto* cn = app.add_subcommand("canon", "canonical form of a single classical form");
    cn->add_option("F", in_a)->required();
    cn->add_option("--type", type, "orthogonal | symplectic | hermitian");
    cn->add_option("--out", opt.out);

    auto* ai = app.add_subcommand("algebra-info", "adjoint algebra structure dump");
    ai->add_option("B", in_a)->required();
    ai->add_flag("--star", star, "include pairing and involution types");

    for (CLI::App* sc : {iso, isog, sym, pit, iq, ps, pg, cn, ai}) sc->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (iso->parsed()) return run_isometry(in_a, in_b, opt, false);
        if (isog->parsed()) return run_isometry(in_a, in_b, opt, true);
        if (sym->parsed()) return run_symmetrize(in_a, eps, opt);
        if (pit->parsed()) return run_pit(in_a, opt);
        if (iq->parsed()) return run_iqf1s(in_a, in_b, field, opt);
        if (ps->parsed()) return run_pseudo(in_a, in_b, opt);
        if (pg->parsed()) return run_pgroup(in_a, in_b, prime, strict, opt);
        if (cn->parsed()) return run_canon(in_a, type, opt);
        if (ai->parsed()) return run_algebra_info(in_a, star, opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
