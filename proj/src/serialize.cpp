#include "slcs2/serialize.hpp"

#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace slcs2 {

namespace {

[[noreturn]] void bad(const std::string& msg) {
    throw std::runtime_error("solution text: " + msg);
}

std::string join_digits(const Genome& g) {
    std::string out;
    for (size_t i = 0; i < g.digits.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(g.digits[i]);
    }
    return out;
}

Genome parse_digits(const std::string& csv) {
    Genome g;
    if (csv.empty()) bad("empty genome");
    size_t pos = 0;
    while (pos <= csv.size()) {
        size_t comma = csv.find(',', pos);
        std::string tok = csv.substr(pos, comma == std::string::npos ? std::string::npos
                                                                     : comma - pos);
        if (tok.empty()) bad("empty genome digit");
        try {
            unsigned long v = std::stoul(tok);
            if (v > 0xffffffffUL) bad("genome digit out of range");
            g.digits.push_back((uint32_t)v);
        } catch (const std::logic_error&) {
            bad("genome digit \"" + tok + "\" is not a number");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return g;
}

} // namespace

std::string solution_to_text(const Solution& s, const GrammarConfig& gc) {
    std::ostringstream out;
    out << "slcs2-solution v1\n";
    out << "grammar " << to_string(gc.variant) << "\n";
    out << "agents " << s.ruleSets.size() << "\n";
    size_t rules = s.ruleSets.empty() ? 0 : s.ruleSets[0].size();
    out << "rules " << rules << "\n";
    out << "meta fitness " << std::setprecision(17) << s.fitness << " phi " << s.phi
        << " evals " << s.evaluationCount << "\n";
    for (size_t n = 0; n < s.ruleSets.size(); ++n) {
        if (s.ruleSets[n].size() != rules) bad("ragged rule-set sizes");
        out << "agent " << n << "\n";
        for (const Rule& r : s.ruleSets[n])
            out << "c " << join_digits(r.conditionGenome) << " a " << join_digits(r.actionGenome)
                << " | " << rule_text(r) << "\n";
    }
    return out.str();
}

Solution solution_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;

    auto next_line = [&](const char* what) {
        if (!std::getline(in, line)) bad(std::string("truncated before ") + what);
        return line;
    };

    if (next_line("header") != "slcs2-solution v1") bad("missing \"slcs2-solution v1\" header");

    std::istringstream gl(next_line("grammar"));
    std::string key, variantName;
    gl >> key >> variantName;
    if (key != "grammar") bad("expected grammar line");
    auto variant = parse_grammar_variant(variantName);
    if (!variant) bad("unknown grammar variant \"" + variantName + "\"");
    GrammarConfig gc;
    gc.variant = *variant;

    size_t agents = 0, rules = 0;
    {
        std::istringstream al(next_line("agents"));
        al >> key >> agents;
        if (key != "agents" || al.fail()) bad("expected agents line");
        std::istringstream rl(next_line("rules"));
        rl >> key >> rules;
        if (key != "rules" || rl.fail()) bad("expected rules line");
    }

    Solution s;
    {
        std::istringstream ml(next_line("meta"));
        std::string fitKey, phiKey, evalKey;
        ml >> key >> fitKey >> s.fitness >> phiKey >> s.phi >> evalKey >> s.evaluationCount;
        if (key != "meta" || fitKey != "fitness" || phiKey != "phi" || evalKey != "evals" ||
            ml.fail())
            bad("expected meta line");
        s.evaluated = s.evaluationCount > 0;
    }

    s.ruleSets.resize(agents);
    for (size_t n = 0; n < agents; ++n) {
        std::istringstream hl(next_line("agent header"));
        size_t idx = agents;
        hl >> key >> idx;
        if (key != "agent" || idx != n) bad("expected \"agent " + std::to_string(n) + "\"");
        for (size_t k = 0; k < rules; ++k) {
            std::istringstream rl(next_line("rule"));
            std::string ckey, akey, cdigits, adigits;
            rl >> ckey >> cdigits >> akey >> adigits;
            if (ckey != "c" || akey != "a" || rl.fail()) bad("malformed rule line");
            s.ruleSets[n].push_back(make_rule(parse_digits(cdigits), parse_digits(adigits), gc));
        }
    }
    return s;
}

} // namespace slcs2
