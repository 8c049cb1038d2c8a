#include "isotypy/json_io.hpp"

#include "isotypy/errors.hpp"

#include <fstream>

namespace isotypy {

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("missing-file", "cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error("malformed-json", path + ": " + e.what());
    }
}

void save_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw Error("unwritable-output", "cannot write " + path);
    out << j.dump(1) << '\n';
}

Int int_from_json(const json& j) {
    if (j.is_number_integer()) return Int(j.get<long>());
    if (j.is_string()) {
        Int v;
        if (v.set_str(j.get<std::string>(), 10) != 0) throw Error("schema", "not an integer: " + j.dump());
        return v;
    }
    throw Error("schema", "expected integer, got " + j.dump());
}

json to_json(const Int& v) { return v.get_str(); }

IntMatrix int_matrix_from_json(const json& j) {
    if (!j.is_array()) throw Error("schema", "matrix must be an array of rows");
    std::vector<std::vector<Int>> rows;
    std::size_t cols = 0;
    for (const auto& r : j) {
        if (!r.is_array()) throw Error("schema", "matrix row must be an array");
        std::vector<Int> row;
        for (const auto& e : r) row.push_back(int_from_json(e));
        if (!rows.empty() && row.size() != cols) throw Error("schema", "ragged matrix");
        cols = row.size();
        rows.push_back(std::move(row));
    }
    return IntMatrix::from_rows(rows, cols);
}

json to_json(const IntMatrix& m) {
    json a = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json r = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(m(i, j).get_str());
        a.push_back(std::move(r));
    }
    return a;
}

CycInt cyc_from_json(const json& j) {
    if (!j.is_object()) return CycInt(int_from_json(j));
    if (!j.contains("n") || !j.contains("c")) throw Error("schema", "cyclotomic entry needs n and c");
    long n = j.at("n").get<long>();
    if (n <= 0) throw Error("schema", "conductor must be positive");
    std::vector<Int> c;
    for (const auto& e : j.at("c")) c.push_back(int_from_json(e));
    return CycInt(static_cast<unsigned>(n), c);
}

json to_json(const CycInt& v) {
    if (v.is_rational()) return to_json(v.rational_value());
    json c = json::array();
    for (const auto& x : v.coords()) c.push_back(x.get_str());
    return json{{"n", v.conductor()}, {"c", c}};
}

CycMatrix cyc_matrix_from_json(const json& j) {
    if (!j.is_array()) throw Error("schema", "matrix must be an array of rows");
    std::vector<std::vector<CycInt>> rows;
    unsigned n = 1;
    for (const auto& r : j) {
        if (!r.is_array()) throw Error("schema", "matrix row must be an array");
        std::vector<CycInt> row;
        for (const auto& e : r) {
            row.push_back(cyc_from_json(e));
            n = lcm_conductor(n, row.back().conductor());
        }
        if (!rows.empty() && row.size() != rows.front().size()) throw Error("schema", "ragged matrix");
        rows.push_back(std::move(row));
    }
    CycMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size(), n);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t jj = 0; jj < rows[i].size(); ++jj) m.set(i, jj, rows[i][jj]);
    return m;
}

json to_json(const CycMatrix& m) {
    json a = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json r = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(to_json(m(i, j)));
        a.push_back(std::move(r));
    }
    return a;
}

BlockSpec block_spec_from_json(const json& j) {
    BlockSpec s;
    s.p = j.at("p").get<long>();
    s.k = j.at("k").get<long>();
    s.l = j.at("l").get<long>();
    for (const auto& o : j.value("orbits", json::array())) {
        OrbitSpec os;
        os.label = o.at("label").get<std::string>();
        os.e = o.at("e").get<long>();
        os.element_order = o.value("element_order", 0L);
        auto conj = o.find("conjugate_of");
        if (conj == o.end()) conj = o.find("algebraically_conjugate_to");
        if (conj != o.end() && !conj->is_null()) os.algebraically_conjugate_to = conj->get<std::string>();
        if (o.contains("size") && !o.at("size").is_null()) os.size = o.at("size").get<long>();
        s.orbits.push_back(std::move(os));
    }
    if (j.contains("q1") && !j.at("q1").is_null()) s.q1 = int_matrix_from_json(j.at("q1"));
    auto io = j.find("inertial_order");
    if (io == j.end()) io = j.find("order_I");
    if (io != j.end() && !io->is_null()) s.inertial_order = io->get<long>();
    return s;
}

json to_json(const BlockSpec& s) {
    json orbits = json::array();
    for (const auto& o : s.orbits) {
        json e{{"label", o.label}, {"e", o.e}};
        if (o.element_order) e["element_order"] = o.element_order;
        if (o.algebraically_conjugate_to) e["algebraically_conjugate_to"] = *o.algebraically_conjugate_to;
        if (o.size) e["size"] = *o.size;
        orbits.push_back(std::move(e));
    }
    json j{{"p", s.p}, {"k", s.k}, {"l", s.l}, {"orbits", orbits}};
    if (s.q1) j["q1"] = to_json(*s.q1);
    if (s.inertial_order) j["inertial_order"] = *s.inertial_order;
    return j;
}

FusionPartition partition_from_json(const json& j) {
    FusionPartition f;
    f.p = j.at("p").get<long>();
    std::string shape = j.value("shape", std::string("elementary"));
    if (shape == "elementary" || shape == "elementary_abelian") f.shape = DefectShape::ElementaryAbelian;
    else if (shape == "cyclic") f.shape = DefectShape::Cyclic;
    else throw Error("schema", "unknown defect shape " + shape);
    f.classes = j.at("classes").get<std::vector<std::vector<long>>>();
    if (!f.valid()) throw Error("invalid-partition", "classes do not partition D with {0} first");
    return f;
}

json to_json(const FusionPartition& f) {
    return json{{"p", f.p},
                {"shape", f.shape == DefectShape::Cyclic ? "cyclic" : "elementary"},
                {"classes", f.classes}};
}

std::vector<CatalogueEntry> catalogue_from_json(const json& j) {
    std::vector<CatalogueEntry> out;
    for (const auto& e : j) {
        CatalogueEntry c;
        c.name = e.at("name").get<std::string>();
        c.p = e.at("p").get<long>();
        for (const auto& g : e.at("gens")) {
            auto m = g.get<std::vector<std::vector<long>>>();
            if (m.size() != 2 || m[0].size() != 2 || m[1].size() != 2) throw Error("schema", "generator must be 2x2");
            c.gens.push_back(glp2(m[0][0], m[0][1], m[1][0], m[1][1], c.p));
        }
        out.push_back(std::move(c));
    }
    return out;
}

json to_json(const InertialCandidate& c) {
    json orbits = json::array();
    for (const auto& o : c.orbit_data)
        orbits.push_back(json{{"rep", o.rep}, {"size", o.size}, {"e", o.e}});
    return json{{"name", c.name}, {"p", c.p}, {"order", c.order}, {"orbits", orbits}};
}

json to_json(const EquivalenceWitness& w) {
    json t = json::object();
    for (const auto& [k, m] : w.transforms) t[k] = to_json(m);
    json j{{"perm", w.perm}, {"signs", w.signs}, {"transforms", t}};
    if (!w.label_map.empty()) j["label_map"] = w.label_map;
    return j;
}

EquivalenceWitness witness_from_json(const json& j) {
    EquivalenceWitness w;
    w.perm = j.at("perm").get<std::vector<std::size_t>>();
    w.signs = j.at("signs").get<std::vector<int>>();
    for (const auto& [k, m] : j.at("transforms").items()) w.transforms[k] = int_matrix_from_json(m);
    if (j.contains("label_map")) w.label_map = j.at("label_map").get<std::map<std::string, std::string>>();
    if (w.perm.size() != w.signs.size()) throw Error("schema", "perm and signs differ in length");
    return w;
}

EmbeddingProblem problem_from_json(const json& j) {
    EmbeddingProblem pr;
    pr.c = int_matrix_from_json(j.at("c"));
    pr.k = j.at("k").get<long>();
    pr.p = j.at("p").get<long>();
    pr.diag_bound = j.value("diag_bound", 0L);
    pr.diag_bounds = j.value("diag_bounds", std::vector<long>{});
    if (j.contains("diag_targets")) pr.diag_targets = j.at("diag_targets").get<std::vector<long>>();
    pr.forbid_zero_rows = j.value("forbid_zero_rows", true);
    pr.modulo_automorphisms = j.value("modulo_automorphisms", true);
    pr.validate();
    return pr;
}

}  // namespace isotypy
