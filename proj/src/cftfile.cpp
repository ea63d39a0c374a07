#include "pva/cftfile.hpp"

#include <sstream>

namespace pva {

namespace {

std::string trim(const std::string& s)
{
    auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos)
        return "";
    auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> words(const std::string& s)
{
    std::istringstream is(s);
    std::vector<std::string> w;
    for (std::string t; is >> t;)
        w.push_back(t);
    return w;
}

} // namespace

CFTFile parse_cft_file(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool have_format = false;
    std::vector<std::string> gens;
    std::vector<Rational> weights;
    std::string central = "0";
    std::map<int, std::string> P;
    std::vector<std::pair<std::vector<std::string>, std::string>> entries;
    CFTFile out;
    auto fail = [&](const std::string& m) { throw ParseError("line " + std::to_string(lineno) + ": " + m, 0); };

    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#')
            continue;
        auto colon = t.find(':');
        if (colon == std::string::npos)
            fail("expected 'key: value'");
        std::string key = trim(t.substr(0, colon)), val = trim(t.substr(colon + 1));
        if (!have_format) {
            if (key != "format" || val != "1")
                fail("the first line must be 'format: 1'");
            have_format = true;
            continue;
        }
        if (key == "generators") {
            gens = words(val);
        } else if (key == "weights") {
            for (const auto& w : words(val))
                weights.push_back(Rational::parse(w));
        } else if (key == "symbol") {
            out.session.declare_symbol(val);
        } else if (key == "central") {
            central = val;
        } else if (key.size() > 1 && key[0] == 'P' && key.find_first_not_of("0123456789", 1) == std::string::npos) {
            P[std::stoi(key.substr(1))] = val;
        } else if (key.rfind("bracket", 0) == 0) {
            auto w = words(key);
            if (w.size() != 3)
                fail("expected 'bracket A B: expr'");
            entries.push_back({{w[1], w[2]}, val});
        } else {
            fail("unknown key '" + key + "'");
        }
    }
    if (!have_format)
        throw ParseError("missing 'format: 1' header", 0);
    if (gens.empty() || gens.size() != weights.size())
        throw ParseError("generators and weights must be given with equal length", 0);
    for (const auto& g : gens)
        out.session.declare_generator(g);
    RingPtr ring = out.session.ring();
    DiffPoly c = out.session.parse_function(central);
    if (!P.empty()) {
        if (gens.size() != 2)
            throw ParseError("P_j lines need exactly two generators", 0);
        std::map<int, DiffPoly> pj;
        for (const auto& [j, e] : P)
            pj.emplace(j, out.session.parse_function(e));
        out.data = w_algebra(ring, weights[1], c, std::move(pj));
        out.structure = out.data->structure;
    } else {
        out.structure = make_cft(ring, weights, c);
    }
    for (const auto& [names, e] : entries) {
        auto i = ring->generator_index(names[0]), j = ring->generator_index(names[1]);
        if (!i || !j)
            throw ParseError("unknown generator in bracket line", 0);
        set_entry(out.structure, *i, *j, out.session.parse_bracket(e));
    }
    return out;
}

} // namespace pva
