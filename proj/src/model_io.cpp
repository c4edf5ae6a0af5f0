#include "cak/model_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace cak {

Functor functor_from_json(const Json& j) {
    if (j.is_string()) {
        auto s = j.get<std::string>();
        if (s == "powerset") return powerset_functor();
        if (s == "bag") return bag_functor();
        if (s == "mon") return mon_functor();
        if (s == "monstar") return monstar_functor();
        if (s == "id") return id_functor();
        throw Error("unknown functor '" + s + "'");
    }
    if (!j.is_object() || j.empty()) throw Error("functor must be a string or object");
    if (j.contains("const")) return const_functor(j.at("const").get<std::vector<std::string>>());
    if (j.contains("product")) {
        auto& p = j.at("product");
        if (!p.is_array() || p.size() != 2) throw Error("product needs two factors");
        return product_functor(functor_from_json(p[0]), functor_from_json(p[1]));
    }
    if (j.contains("coproduct")) {
        std::vector<Functor> parts;
        for (auto& p : j.at("coproduct")) parts.push_back(functor_from_json(p));
        return coproduct_functor(std::move(parts));
    }
    if (j.contains("exp"))
        return exp_functor(functor_from_json(j.at("exp")), j.at("over").get<std::vector<std::string>>());
    throw Error("unknown functor object");
}

Json functor_to_json(const FunctorSpec& f) {
    switch (f.kind) {
        case FunctorKind::Powerset: return "powerset";
        case FunctorKind::Bag: return "bag";
        case FunctorKind::MonNbhd: return "mon";
        case FunctorKind::MonNbhdStar: return "monstar";
        case FunctorKind::Id: return "id";
        case FunctorKind::Const: return Json{{"const", f.constants}};
        case FunctorKind::Product:
            return Json{{"product", Json::array({functor_to_json(*f.parts[0]), functor_to_json(*f.parts[1])})}};
        case FunctorKind::Coproduct: {
            Json a = Json::array();
            for (auto& p : f.parts) a.push_back(functor_to_json(*p));
            return Json{{"coproduct", a}};
        }
        case FunctorKind::Exp: return Json{{"exp", functor_to_json(*f.parts[0])}, {"over", f.constants}};
    }
    return nullptr;
}

namespace {

ElemSet atoms_to_set(const Carrier& c, const Json& j) {
    if (!j.is_array()) throw Error("expected an array of atoms");
    ElemSet s;
    for (auto& a : j) s.push_back(c.index(a.get<std::string>()));
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

Json set_to_atoms(const Carrier& c, const ElemSet& s) {
    Json a = Json::array();
    for (auto x : s) a.push_back(c.atoms.at(x));
    return a;
}

}  // namespace

TValue value_from_json(const FunctorSpec& f, const Carrier& c, const Json& j) {
    TValue v;
    v.kind = f.kind;
    switch (f.kind) {
        case FunctorKind::Const: {
            auto s = j.get<std::string>();
            auto it = std::find(f.constants.begin(), f.constants.end(), s);
            if (it == f.constants.end()) throw Error("unknown constant '" + s + "'");
            v.index = static_cast<std::uint32_t>(it - f.constants.begin());
            return v;
        }
        case FunctorKind::Id: v.index = c.index(j.get<std::string>()); return v;
        case FunctorKind::Product:
            if (!j.is_array() || j.size() != 2) throw Error("product value must be a pair");
            v.parts = {value_from_json(*f.parts[0], c, j[0]), value_from_json(*f.parts[1], c, j[1])};
            return v;
        case FunctorKind::Coproduct: {
            v.index = j.at("in").get<std::uint32_t>();
            if (v.index >= f.parts.size()) throw Error("coproduct injection out of range");
            v.parts = {value_from_json(*f.parts[v.index], c, j.at("value"))};
            return v;
        }
        case FunctorKind::Exp:
            for (auto& k : f.constants) {
                if (!j.contains(k)) throw Error("exponential value misses constant '" + k + "'");
                v.parts.push_back(value_from_json(*f.parts[0], c, j.at(k)));
            }
            return v;
        case FunctorKind::Powerset: return pset_value(atoms_to_set(c, j));
        case FunctorKind::Bag: {
            if (!j.is_object()) throw Error("bag value must be an object of counts");
            std::vector<std::pair<std::uint32_t, std::uint64_t>> counts;
            for (auto& [k, n] : j.items()) counts.emplace_back(c.index(k), n.get<std::uint64_t>());
            return bag_value(std::move(counts));
        }
        case FunctorKind::MonNbhd: {
            std::vector<ElemSet> g;
            for (auto& s : j) g.push_back(atoms_to_set(c, s));
            return mon_value(std::move(g));
        }
        case FunctorKind::MonNbhdStar: {
            std::vector<ElemSet> g;
            for (auto& s : j.at("nbhd")) g.push_back(atoms_to_set(c, s));
            return monstar_value(std::move(g), atoms_to_set(c, j.at("support")));
        }
    }
    return v;
}

Json value_to_json(const FunctorSpec& f, const Carrier& c, const TValue& v) {
    switch (f.kind) {
        case FunctorKind::Const: return f.constants.at(v.index);
        case FunctorKind::Id: return c.atoms.at(v.index);
        case FunctorKind::Product:
            return Json::array({value_to_json(*f.parts[0], c, v.parts[0]), value_to_json(*f.parts[1], c, v.parts[1])});
        case FunctorKind::Coproduct:
            return Json{{"in", v.index}, {"value", value_to_json(*f.parts[v.index], c, v.parts[0])}};
        case FunctorKind::Exp: {
            Json o = Json::object();
            for (std::size_t i = 0; i < f.constants.size(); ++i)
                o[f.constants[i]] = value_to_json(*f.parts[0], c, v.parts[i]);
            return o;
        }
        case FunctorKind::Powerset: return set_to_atoms(c, v.set);
        case FunctorKind::Bag: {
            Json o = Json::object();
            for (auto [x, n] : v.counts) o[c.atoms.at(x)] = n;
            return o;
        }
        case FunctorKind::MonNbhd: {
            Json a = Json::array();
            for (auto& g : v.family) a.push_back(set_to_atoms(c, g));
            return a;
        }
        case FunctorKind::MonNbhdStar: {
            Json a = Json::array();
            for (auto& g : v.family) a.push_back(set_to_atoms(c, g));
            return Json{{"nbhd", a}, {"support", set_to_atoms(c, v.set)}};
        }
    }
    return nullptr;
}

TModel model_from_json(const Json& j) {
    try {
        TModel m;
        m.functor = functor_from_json(j.at("functor"));
        m.carrier = make_carrier(j.at("carrier").get<std::vector<std::string>>());
        auto& sig = j.at("sigma");
        for (auto& a : m.carrier->atoms) {
            if (!sig.contains(a)) throw Error("sigma undefined at '" + a + "'");
            m.sigma.push_back(value_from_json(*m.functor, *m.carrier, sig.at(a)));
        }
        if (j.contains("valuation"))
            for (auto& [p, s] : j.at("valuation").items()) m.valuation[p] = atoms_to_set(*m.carrier, s);
        if (j.contains("root")) m.root = m.carrier->index(j.at("root").get<std::string>());
        if (j.contains("frame")) {
            std::vector<ElemSet> r(m.size());
            for (auto& [a, s] : j.at("frame").items()) r[m.carrier->index(a)] = atoms_to_set(*m.carrier, s);
            m.frame = std::move(r);
        }
        validate_model(m);
        return m;
    } catch (const Json::exception& e) {
        throw Error(std::string("malformed model document: ") + e.what());
    }
}

Json model_to_json(const TModel& m) {
    Json j;
    j["functor"] = functor_to_json(*m.functor);
    j["carrier"] = m.carrier->atoms;
    Json sig = Json::object();
    for (std::size_t s = 0; s < m.size(); ++s) sig[m.carrier->atoms[s]] = value_to_json(*m.functor, *m.carrier, m.sigma[s]);
    j["sigma"] = sig;
    Json val = Json::object();
    for (auto& [p, s] : m.valuation) val[p] = set_to_atoms(*m.carrier, s);
    j["valuation"] = val;
    if (m.root) j["root"] = m.carrier->atoms[*m.root];
    if (m.frame) {
        Json fr = Json::object();
        for (std::size_t s = 0; s < m.size(); ++s) fr[m.carrier->atoms[s]] = set_to_atoms(*m.carrier, (*m.frame)[s]);
        j["frame"] = fr;
    }
    return j;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json load_json(const std::string& path) {
    try {
        return Json::parse(read_file(path));
    } catch (const Json::parse_error& e) {
        throw Error(path + ": " + e.what());
    }
}

TModel load_model(const std::string& path) { return model_from_json(load_json(path)); }

}  // namespace cak
