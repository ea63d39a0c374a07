#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <map>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "pva/catalog.hpp"
#include "pva/cftfile.hpp"
#include "pva/hierarchy.hpp"
#include "pva/independence.hpp"
#include "pva/parse.hpp"
#include "pva/transform.hpp"

using json = nlohmann::ordered_json;
using namespace pva;

namespace {

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kObstruction = 3, kTooBig = 4 };

struct Options {
    std::vector<std::string> symbols;
    std::vector<std::string> generators;
    std::string output = "json";
    std::size_t max_terms = 2000000;
};

Session make_session(const Options& o)
{
    set_term_limit(o.max_terms);
    Session s;
    for (const auto& g : o.generators)
        s.declare_generator(g);
    for (const auto& sym : o.symbols)
        s.declare_symbol(sym);
    return s;
}

void emit(const json& j, const Options& o)
{
    if (o.output == "json") {
        std::cout << j.dump() << "\n";
        return;
    }
    for (const auto& [k, v] : j.items())
        std::cout << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
}

std::string level_str(int m) { return m == kNegInfinity ? "-inf" : std::to_string(m); }

json residuals_json(const AxiomReport& r, std::size_t limit = 8)
{
    json a = json::array();
    for (const auto& [idx, p] : r.residuals) {
        if (a.size() >= limit)
            break;
        a.push_back({{"index", idx}, {"residual", to_string(p)}});
    }
    return a;
}

json hamiltonian_json(const HamiltonianReport& r)
{
    return {{"skew", r.skew}, {"jacobi", r.jacobi}, {"hamiltonian", r.pass()}};
}

// --bracket or --operator, as a bracket
LambdaPoly read_bracket(const Session& s, const std::string& bracket, const std::string& op)
{
    if (!bracket.empty() && !op.empty())
        throw CLI::ValidationError("give either --bracket or --operator");
    if (!bracket.empty())
        return s.parse_bracket(bracket);
    if (!op.empty())
        return to_bracket(s.parse_operator(op));
    throw CLI::ValidationError("one of --bracket or --operator is required");
}

DiffOp catalog_operator(const Session& s, const std::string& name, int N, const std::string& c,
                        const std::string& c1, const std::string& c2)
{
    RingPtr r = s.ring();
    DiffPoly pc = s.parse_function(c), p1 = s.parse_function(c1), p2 = s.parse_function(c2);
    std::string key = name;
    std::transform(key.begin(), key.end(), key.begin(), [](unsigned char ch) { return std::tolower(ch); });
    std::smatch m;
    if (std::regex_match(key, m, std::regex("h([0-9]+)_0")))
        return H_N0(r, std::stoi(m[1]));
    static const std::map<std::string, std::string> names = {
        {"h_n0", "H_N0"}, {"h_nc", "H_Nc"}, {"b_nc", "B_nc"}, {"b_pow", "B_pow"}, {"t_n", "T_N"},
        {"k_c", "K_c"},   {"h5", "H5"},     {"h5_gen", "H5"}, {"h5_0c", "H5_0c"}, {"b3", "B3"},
        {"h7", "H7"},     {"h9", "H9"},     {"b_sq", "B_sq"}, {"h_sq", "H_sq"}};
    auto it = names.find(key);
    if (it == names.end())
        throw CLI::ValidationError("unknown catalog entry '" + name + "'");
    const std::string& canon = it->second;
    if (canon == "H_N0")
        return H_N0(r, N);
    if (canon == "H_Nc")
        return H_Nc(r, N, pc);
    if (canon == "B_nc")
        return B_nc(r, N, pc);
    if (canon == "B_pow")
        return B_pow(r, N);
    if (canon == "T_N")
        return T_N(r, N);
    if (canon == "K_c")
        return K_c(r, pc);
    if (canon == "H5")
        return H5_c1c2(r, p1, p2);
    if (canon == "H5_0c")
        return H5_0c(r, pc);
    if (canon == "B3")
        return B3(r, pc);
    if (canon == "H7")
        return H7(r, pc);
    if (canon == "H9")
        return H9(r, pc);
    if (canon == "B_sq")
        return B_sq(r, N, pc);
    if (canon == "H_sq")
        return H_sq(r, N, pc);
    throw CLI::ValidationError("unknown catalog entry '" + name + "'");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Poisson lambda-brackets and Hamiltonian operators in one or more differential variables"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--symbol", o.symbols, "parameter symbol name[:d=name2][:sq=rational]");
    app.add_option("--generator", o.generators, "differential generator (default u)");
    app.add_option("--output", o.output, "json or text")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--max-degree", o.max_terms, "abort when an intermediate polynomial exceeds this many terms");

    std::string bracket, op, a, b;
    int rc = kPass;

    auto* skew = app.add_subcommand("check-skew", "skew-symmetry of a bracket");
    skew->add_option("--bracket", bracket);
    skew->add_option("--operator", op);
    skew->callback([&] {
        Session s = make_session(o);
        AxiomReport r = check_skew(scalar_table(read_bracket(s, bracket, op)));
        emit({{"skew", r.pass}, {"residuals", residuals_json(r)}}, o);
        rc = r.pass ? kPass : kFail;
    });

    auto* jac = app.add_subcommand("check-jacobi", "skew-symmetry and Jacobi identity of a bracket");
    jac->add_option("--bracket", bracket);
    jac->add_option("--operator", op);
    jac->callback([&] {
        Session s = make_session(o);
        BracketTable t = scalar_table(read_bracket(s, bracket, op));
        AxiomReport sk = check_skew(t), j = check_jacobi(t);
        emit({{"skew", sk.pass}, {"jacobi", j.pass}, {"residuals", residuals_json(j)}}, o);
        rc = sk.pass && j.pass ? kPass : kFail;
    });

    auto* ham = app.add_subcommand("check-hamiltonian", "skew-adjointness and Jacobi identity of an operator");
    ham->add_option("--operator", op)->required();
    ham->callback([&] {
        Session s = make_session(o);
        HamiltonianReport r = check_hamiltonian(s.parse_operator(op));
        json j = hamiltonian_json(r);
        j["residuals"] = residuals_json(r.jacobi_detail);
        emit(j, o);
        rc = r.pass() ? kPass : kFail;
    });

    auto* cmp = app.add_subcommand("check-compatible", "every linear combination of two operators is Hamiltonian");
    cmp->add_option("--a", a)->required();
    cmp->add_option("--b", b)->required();
    cmp->callback([&] {
        Session s = make_session(o);
        CompatibilityReport r = check_compatible(s.parse_operator(a), s.parse_operator(b));
        emit({{"a", hamiltonian_json(r.a)},
              {"b", hamiltonian_json(r.b)},
              {"sum", hamiltonian_json(r.sum)},
              {"compatible", r.pass()}},
             o);
        rc = r.pass() ? kPass : kFail;
    });

    auto* canon = app.add_subcommand("canonical-form", "coefficients f_j of sum (D + 2l)^j f_j");
    canon->add_option("--bracket", bracket);
    canon->add_option("--operator", op);
    canon->callback([&] {
        Session s = make_session(o);
        json coeffs = json::object();
        for (const auto& [j, f] : canonical_form(read_bracket(s, bracket, op)))
            coeffs[std::to_string(j)] = to_string(f);
        emit({{"coefficients", coeffs}}, o);
    });

    auto* ol = app.add_subcommand("order-level", "order and level of a bracket");
    ol->add_option("--bracket", bracket);
    ol->add_option("--operator", op);
    ol->callback([&] {
        Session s = make_session(o);
        OrderLevel r = order_and_level(read_bracket(s, bracket, op));
        bool ok = check_level_bounds(r.order, r.level);
        json j = {{"order", r.order}};
        if (r.level == kNegInfinity)
            j["level"] = "-inf";
        else
            j["level"] = r.level;
        j["bounds"] = ok;
        emit(j, o);
        rc = ok ? kPass : kFail;
    });

    std::string cat_name, cat_c = "0", cat_c1 = "0", cat_c2 = "0";
    int cat_N = 3;
    bool cat_check = false;
    auto* cat = app.add_subcommand("catalog", "build a named operator");
    cat->add_option("name", cat_name, "hN_0 (e.g. h3_0), h_Nc, b_nc, b_pow, t_N, k_c, h5_gen, h5_0c, b3, h7, h9, b_sq, h_sq; case-insensitive")->required();
    cat->add_option("--N", cat_N, "order, or number of factors for B_nc, B_pow, B_sq");
    cat->add_option("--c", cat_c);
    cat->add_option("--c1", cat_c1);
    cat->add_option("--c2", cat_c2);
    cat->add_flag("--check", cat_check, "also run check-hamiltonian");
    cat->callback([&] {
        Session s = make_session(o);
        DiffOp h = catalog_operator(s, cat_name, cat_N, cat_c, cat_c1, cat_c2);
        json j = {{"name", cat_name}, {"order", h.degree()}, {"operator", to_string(h)}};
        if (cat_check) {
            HamiltonianReport r = check_hamiltonian(h);
            j["hamiltonian"] = hamiltonian_json(r);
            rc = r.pass() ? kPass : kFail;
        }
        emit(j, o);
    });

    int fN = 1, fm = 2;
    bool ftrunc = false;
    auto* fnj = app.add_subcommand("fnj-rank", "rank of the level-equation polynomial family");
    fnj->add_option("--N", fN)->required();
    fnj->add_option("--m", fm)->required();
    fnj->add_flag("--truncate", ftrunc, "restrict j to j <= min(N, m)");
    fnj->callback([&] {
        set_term_limit(o.max_terms);
        RankResult r = rank_S(fN, fm, ftrunc);
        emit({{"rank", r.rank}, {"size", r.size}, {"independent", r.independent()}}, o);
        rc = r.independent() ? kPass : kFail;
    });

    std::string lk, lh, lc;
    std::vector<std::string> seeds;
    int steps = 1;
    auto* len = app.add_subcommand("lenard", "Lenard-Magri recursion K xi_{j+1} = H xi_j");
    len->add_option("--K", lk)->required();
    len->add_option("--H", lh)->required();
    len->add_option("--seed", seeds)->required();
    len->add_option("--steps", steps);
    len->add_option("--reduced-c", lc, "use the reduced order-five step with this c (K = D(D^2 - c^2))");
    len->callback([&] {
        Session s = make_session(o);
        std::vector<DiffPoly> xs;
        for (const auto& e : seeds)
            xs.push_back(s.parse_function(e));
        std::optional<DiffPoly> rc5;
        if (!lc.empty())
            rc5 = s.parse_function(lc);
        HierarchyState st = run_hierarchy(s.parse_operator(lk), s.parse_operator(lh), xs, steps, rc5);
        json jx = json::array(), je = json::array();
        for (const auto& x : st.xis)
            jx.push_back(to_string(x));
        for (const auto& e : st.equations)
            je.push_back(to_string(e));
        emit({{"xis", jx}, {"equations", je}, {"independent", st.independent}, {"conservation", verify_conservation(st)}},
             o);
    });

    std::string phi, psi, tf;
    auto* tr = app.add_subcommand("transform", "contact transformation x = phi, u = psi in terms of y, v, v'");
    tr->add_option("--phi", phi)->required();
    tr->add_option("--psi", psi)->required();
    tr->add_option("--operator", op);
    tr->add_option("--function", tf);
    tr->callback([&] {
        Session s = make_session(o);
        RingPtr target = contact_ring(s.ring());
        ContactMap m{s.parse_transform(phi, target), s.parse_transform(psi, target)};
        RatDiffFn rho = is_contact(m);
        json j = {{"contact", true}, {"rho", to_string(rho)}};
        if (!tf.empty())
            j["function"] = to_string(pullback_function(s.parse_function(tf), m));
        if (!op.empty()) {
            DiffOp h = s.parse_operator(op);
            RatDiffOp t = transform_operator(h, m);
            j["operator"] = to_string(t);
            j["order"] = t.degree();
            j["source_order"] = h.degree();
            rc = t.degree() == h.degree() ? kPass : kFail;
        }
        emit(j, o);
    });

    std::string file;
    auto* cft = app.add_subcommand("cft-check", "skew, Jacobi and weight checks for a CFT declaration file");
    cft->add_option("--file", file)->required()->check(CLI::ExistingFile);
    cft->callback([&] {
        std::ifstream in(file);
        std::stringstream buf;
        buf << in.rdbuf();
        CFTFile f = parse_cft_file(buf.str());
        WAlgebraReport r = check_w_algebra(f.structure);
        bool weights_ok = weight_violations(f.structure).empty();
        json j = {{"skew", r.skew.pass}, {"jacobi", r.jacobi.pass}, {"weights", weights_ok}};
        bool ok = r.pass() && weights_ok;
        if (f.data) {
            WeightRelationReport l = check_weight_relations(f.structure, f.data->delta, f.data->P);
            j["weight_relations"] = l.pass;
            j["weight_relation_failures"] = l.failures;
            ok = ok && l.pass;
        }
        j["residuals"] = residuals_json(r.jacobi);
        emit(j, o);
        rc = ok ? kPass : kFail;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kPass : kUsage;
    } catch (const TermLimitExceeded& e) {
        std::cerr << "term limit: " << e.what() << "\n";
        return kTooBig;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kUsage;
    } catch (const NotExact& e) {
        std::cerr << "obstruction: " << e.what() << "\n";
        return kObstruction;
    } catch (const Obstruction& e) {
        std::cerr << "obstruction: " << e.what() << "\n";
        return kObstruction;
    } catch (const NotContact& e) {
        std::cerr << "obstruction: " << e.what() << "\n";
        return kObstruction;
    } catch (const ConstraintViolated& e) {
        std::cerr << "obstruction: " << e.what() << "\n";
        return kObstruction;
    } catch (const NotSkewForm& e) {
        std::cerr << "not skew: " << e.what() << "\n";
        return kFail;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return rc;
}
