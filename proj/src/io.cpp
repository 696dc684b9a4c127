#include "ujc/io.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

#include "ujc/errors.hpp"

namespace ujc {

Graph load_edge_list(const std::string& text) {
    std::unordered_map<std::string, int> id;
    std::vector<std::string> labels;
    std::vector<Edge> edges;
    auto intern = [&](const std::string& tok) {
        auto [it, fresh] = id.emplace(tok, static_cast<int>(labels.size()));
        if (fresh) labels.push_back(tok);
        return it->second;
    };
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string a, b, extra;
        if (!(ls >> a)) continue;
        if (!(ls >> b)) throw ParseError("expected two node tokens", lineno);
        if (ls >> extra) throw ParseError("unexpected token '" + extra + "'", lineno);
        int u = intern(a);
        int v = intern(b);
        edges.emplace_back(u, v);
    }
    Graph g = Graph::from_edges(static_cast<int>(labels.size()), edges);
    g.set_labels(std::move(labels));
    return g;
}

std::string save_edge_list(const Graph& g) {
    std::ostringstream out;
    int next = 0;
    auto declare_until = [&](int upto) {
        for (; next < upto; ++next) out << g.label(next) << ' ' << g.label(next) << '\n';
    };
    for (auto [u, v] : g.edges()) {
        declare_until(u);
        if (v >= next) {
            // u == next means this line introduces u; nodes between u and v go first.
            if (u == next && v > u + 1) declare_until(u + 1);
            if (u < next) declare_until(v);
            next = v + 1;
        }
        out << g.label(u) << ' ' << g.label(v) << '\n';
    }
    declare_until(g.node_count());
    return out.str();
}

json graph_to_json(const Graph& g) {
    json j;
    j["n"] = g.node_count();
    json es = json::array();
    for (auto [u, v] : g.edges()) es.push_back({u, v});
    j["edges"] = std::move(es);
    if (!g.labels().empty()) j["labels"] = g.labels();
    return j;
}

Graph graph_from_json(const json& j) {
    try {
        int n = j.at("n").get<int>();
        if (n < 0) throw ParseError("n must be non-negative");
        std::vector<Edge> es;
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 2) throw ParseError("edge must be a pair");
            es.emplace_back(e[0].get<int>(), e[1].get<int>());
        }
        Graph g = Graph::from_edges(n, es);
        if (j.contains("labels")) {
            std::vector<std::string> ls;
            for (const auto& l : j["labels"]) ls.push_back(l.is_string() ? l.get<std::string>() : l.dump());
            g.set_labels(std::move(ls));
        }
        return g;
    } catch (const json::exception& e) {
        throw ParseError(std::string("graph JSON: ") + e.what());
    }
}

json placement_to_json(const Placement& p) {
    json j;
    j["Lx"] = p.lattice.width;
    j["Ly"] = p.lattice.height;
    j["a"] = p.lattice.spacing_um;
    j["r"] = p.lattice.radius_ratio;
    json ss = json::array();
    for (Site s : p.sites) ss.push_back({s.x, s.y});
    j["sites"] = std::move(ss);
    return j;
}

Placement placement_from_json(const json& j) {
    try {
        Placement p;
        p.lattice.width = j.at("Lx").get<int>();
        p.lattice.height = j.at("Ly").get<int>();
        p.lattice.spacing_um = j.value("a", 4.5);
        p.lattice.radius_ratio = j.value("r", 1.5);
        for (const auto& s : j.at("sites")) p.sites.push_back({s.at(0).get<int>(), s.at(1).get<int>()});
        p.lattice.filling = p.lattice.site_count() > 0
                                ? std::max(1e-12, static_cast<double>(p.sites.size()) / p.lattice.site_count())
                                : 1.0;
        p.validate();
        return p;
    } catch (const json::exception& e) {
        throw ParseError(std::string("placement JSON: ") + e.what());
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write " + path.string());
    out << text;
}

Graph load_graph_file(const std::filesystem::path& path) {
    std::string text = read_file(path);
    if (path.extension() == ".json") {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ParseError(e.what());
        }
        // Accept a bare graph or a reduction trace (its kernel).
        if (j.contains("kernel") && !j.contains("n")) return graph_from_json(j["kernel"]);
        return graph_from_json(j);
    }
    return load_edge_list(text);
}

}  // namespace ujc
