#include "fragtree/rule.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace fragtree {

namespace {

void validate_atoms(const FiniteDislocation& fd) {
    if (fd.erosion < 0.0) throw std::domain_error("RuleSpec: erosion must be >= 0");
    if (fd.erosion == 0.0 && fd.atoms.empty())
        throw std::domain_error("RuleSpec: dislocation measure is identically zero");
    for (const auto& atom : fd.atoms) {
        if (!(atom.weight > 0.0)) throw std::domain_error("RuleSpec: atom weights must be > 0");
        if (atom.fragments.empty()) throw std::domain_error("RuleSpec: empty fragment vector");
        double sum = 0.0, prev = 2.0;
        for (double s : atom.fragments) {
            if (s < 0.0) throw std::domain_error("RuleSpec: negative fragment mass");
            if (s > prev + 1e-12) throw std::domain_error("RuleSpec: fragments must be nonincreasing");
            prev = s;
            sum += s;
        }
        if (sum > 1.0 + 1e-12) throw std::domain_error("RuleSpec: fragment masses sum beyond 1");
        // nu({(1,0,...)}) = 0
        bool is_unit = std::fabs(atom.fragments[0] - 1.0) <= 1e-12;
        for (std::size_t i = 1; is_unit && i < atom.fragments.size(); ++i)
            if (atom.fragments[i] > 1e-12) is_unit = false;
        if (is_unit)
            throw std::domain_error("RuleSpec: atom (1,0,...) is excluded (it never splits)");
    }
}

} // namespace

RuleSpec::RuleSpec(Variant v) : v_(std::move(v)) {
    if (const auto* b = std::get_if<BetaSplit>(&v_)) {
        if (!(b->beta > -2.0)) throw std::domain_error("RuleSpec: beta must exceed -2");
    } else if (const auto* f = std::get_if<FordAlpha>(&v_)) {
        if (!(f->alpha >= 0.0) || !(f->alpha < 1.0))
            throw std::domain_error("RuleSpec: Ford alpha must lie in [0,1)");
    } else if (const auto* s = std::get_if<StableAlpha>(&v_)) {
        if (!(s->alpha > 1.0) || !(s->alpha < 2.0))
            throw std::domain_error("RuleSpec: stable alpha must lie in (1,2)");
    } else {
        validate_atoms(std::get<FiniteDislocation>(v_));
    }
}

bool RuleSpec::is_binary() const {
    if (std::holds_alternative<BetaSplit>(v_) || std::holds_alternative<FordAlpha>(v_)) return true;
    if (const auto* fd = std::get_if<FiniteDislocation>(&v_)) {
        for (const auto& atom : fd->atoms) {
            double sum = 0.0;
            int positive = 0;
            for (double s : atom.fragments) {
                sum += s;
                positive += (s > 0.0);
            }
            if (positive > 2 || sum < 1.0 - 1e-12) return false;
        }
        return true;
    }
    return false;
}

std::optional<double> RuleSpec::self_similarity_index() const {
    if (const auto* b = std::get_if<BetaSplit>(&v_)) {
        if (b->beta > -2.0 && b->beta < -1.0) return -b->beta - 1.0;
        return std::nullopt;
    }
    if (const auto* f = std::get_if<FordAlpha>(&v_)) {
        if (f->alpha > 0.0) return f->alpha;
        return std::nullopt;
    }
    if (const auto* s = std::get_if<StableAlpha>(&v_)) return 1.0 - 1.0 / s->alpha;
    return std::nullopt;
}

std::string RuleSpec::name() const {
    std::ostringstream out;
    out.precision(12);
    if (const auto* b = std::get_if<BetaSplit>(&v_)) {
        out << "beta:" << b->beta;
    } else if (const auto* f = std::get_if<FordAlpha>(&v_)) {
        out << "ford:" << f->alpha;
    } else if (const auto* s = std::get_if<StableAlpha>(&v_)) {
        out << "stable:" << s->alpha;
    } else {
        out << "paintbox";
    }
    return out.str();
}

RuleSpec RuleSpec::parse(const std::string& text) {
    if (!text.empty() && text.front() == '{') return from_json_text(text);
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("RuleSpec::parse: expected name:param or JSON");
    std::string kind = text.substr(0, colon);
    std::string arg = text.substr(colon + 1);
    if (kind == "paintbox") {
        if (arg.empty() || arg.front() != '@')
            throw std::invalid_argument("RuleSpec::parse: paintbox expects @file.json");
        std::ifstream in(arg.substr(1));
        if (!in) throw std::runtime_error("RuleSpec::parse: cannot open " + arg.substr(1));
        std::stringstream buf;
        buf << in.rdbuf();
        return from_json_text(buf.str());
    }
    double value = 0.0;
    try {
        value = std::stod(arg);
    } catch (const std::exception&) {
        throw std::invalid_argument("RuleSpec::parse: bad numeric parameter '" + arg + "'");
    }
    if (kind == "beta") return beta_split(value);
    if (kind == "ford") return ford(value);
    if (kind == "stable") return stable(value);
    throw std::invalid_argument("RuleSpec::parse: unknown model '" + kind + "'");
}

RuleSpec RuleSpec::from_json_text(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    std::string model = j.at("model").get<std::string>();
    if (model == "beta") return beta_split(j.at("param").get<double>());
    if (model == "ford") return ford(j.at("param").get<double>());
    if (model == "stable") return stable(j.at("param").get<double>());
    if (model == "paintbox") {
        FiniteDislocation fd;
        fd.erosion = j.value("c", 0.0);
        if (j.contains("atoms")) {
            for (const auto& a : j.at("atoms")) {
                DislocationAtom atom;
                atom.weight = a.at("w").get<double>();
                atom.fragments = a.at("s").get<std::vector<double>>();
                fd.atoms.push_back(std::move(atom));
            }
        }
        return finite_dislocation(std::move(fd));
    }
    throw std::invalid_argument("RuleSpec: unknown model '" + model + "'");
}

std::string RuleSpec::to_json_text() const {
    nlohmann::json j;
    if (const auto* b = std::get_if<BetaSplit>(&v_)) {
        j["model"] = "beta";
        j["param"] = b->beta;
    } else if (const auto* f = std::get_if<FordAlpha>(&v_)) {
        j["model"] = "ford";
        j["param"] = f->alpha;
    } else if (const auto* s = std::get_if<StableAlpha>(&v_)) {
        j["model"] = "stable";
        j["param"] = s->alpha;
    } else {
        const auto& fd = std::get<FiniteDislocation>(v_);
        j["model"] = "paintbox";
        j["c"] = fd.erosion;
        j["atoms"] = nlohmann::json::array();
        for (const auto& atom : fd.atoms)
            j["atoms"].push_back({{"w", atom.weight}, {"s", atom.fragments}});
    }
    return j.dump();
}

FiniteDislocation RationalDislocation::to_double() const {
    FiniteDislocation fd;
    fd.erosion = erosion.to_double();
    for (const auto& a : atoms) {
        DislocationAtom atom;
        atom.weight = a.weight.to_double();
        for (const auto& f : a.fragments) atom.fragments.push_back(f.to_double());
        fd.atoms.push_back(std::move(atom));
    }
    return fd;
}

} // namespace fragtree
