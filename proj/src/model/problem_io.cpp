#include "mifdcop/model/problem_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mifdcop/error.hpp"

namespace mifdcop {

using nlohmann::json;

namespace {

std::string describe_components(const std::vector<std::vector<VariableId>>& components) {
    std::string out;
    for (const auto& comp : components) {
        out += out.empty() ? "{" : ", {";
        for (std::size_t i = 0; i < comp.size(); ++i) {
            out += (i ? "," : "") + std::to_string(comp[i]);
        }
        out += "}";
    }
    return out;
}

Domain parse_domain(const json& var) {
    std::string kind = var.at("kind").get<std::string>();
    const json& dom = var.at("domain");
    if (kind == "discrete") {
        return Domain::discrete(dom.get<std::vector<double>>());
    }
    if (kind == "continuous") {
        if (!dom.is_array() || dom.size() != 2) {
            throw ValidationError("continuous domain must be [LB, UB]");
        }
        return Domain::continuous(dom[0].get<double>(), dom[1].get<double>());
    }
    throw ValidationError("unknown variable kind '" + kind + "'");
}

}  // namespace

Problem parse_problem(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("problem file: ") + e.what());
    }
    try {
        std::string sense = doc.value("sense", std::string("minimize"));
        if (sense != "minimize" && sense != "maximize") {
            throw ValidationError("sense must be minimize or maximize");
        }
        const bool negate = sense == "maximize";

        const json& vars = doc.at("variables");
        std::vector<std::optional<Domain>> slots(vars.size());
        for (const json& var : vars) {
            auto id = var.at("id").get<std::int64_t>();
            if (id < 0 || static_cast<std::size_t>(id) >= vars.size()) {
                throw ValidationError("variable ids must be 0..n-1, got " + std::to_string(id));
            }
            if (slots[static_cast<std::size_t>(id)]) {
                throw ValidationError("duplicate variable id " + std::to_string(id));
            }
            slots[static_cast<std::size_t>(id)] = parse_domain(var);
        }
        std::vector<Domain> domains;
        domains.reserve(slots.size());
        for (auto& d : slots) domains.push_back(std::move(*d));

        std::vector<Constraint> constraints;
        for (const json& c : doc.value("constraints", json::array())) {
            auto scope = c.at("scope").get<std::vector<VariableId>>();
            if (c.contains("table") == c.contains("expr")) {
                throw ValidationError("constraint needs exactly one of 'table' or 'expr'");
            }
            if (c.contains("table")) {
                auto costs = c.at("table").get<std::vector<double>>();
                if (negate) {
                    for (double& x : costs) x = -x;
                }
                constraints.push_back(Constraint::table(std::move(scope), std::move(costs)));
            } else {
                Expression expr = Expression::parse(c.at("expr").get<std::string>());
                if (negate) expr = -std::move(expr);
                constraints.push_back(Constraint::function(std::move(scope), std::move(expr)));
            }
        }
        Problem problem(std::move(domains), std::move(constraints));
        auto components = problem.connected_components();
        if (components.size() > 1) {
            throw ValidationError("constraint graph is disconnected: components " +
                                  describe_components(components));
        }
        return problem;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("problem file: ") + e.what());
    }
}

std::string serialize_problem(const Problem& problem) {
    std::ostringstream out;
    out << "{\n  \"sense\": \"minimize\",\n  \"variables\": [";
    for (VariableId v = 0; v < problem.num_variables(); ++v) {
        const Domain& d = problem.domain(v);
        json var;
        var["id"] = v;
        if (d.is_discrete()) {
            var["kind"] = "discrete";
            var["domain"] = std::vector<double>(d.values().begin(), d.values().end());
        } else {
            var["kind"] = "continuous";
            var["domain"] = {d.lower(), d.upper()};
        }
        out << (v ? ",\n    " : "\n    ") << var.dump();
    }
    out << "\n  ],\n  \"constraints\": [";
    bool first = true;
    for (const Constraint& c : problem.constraints()) {
        json entry;
        entry["scope"] = std::vector<VariableId>(c.scope().begin(), c.scope().end());
        if (const auto* table = std::get_if<CostTable>(&c.payload())) {
            entry["table"] = table->costs;
        } else {
            entry["expr"] = std::get<CostFunction>(c.payload()).expr.to_string();
        }
        out << (first ? "\n    " : ",\n    ") << entry.dump();
        first = false;
    }
    out << "\n  ]\n}\n";
    return out.str();
}

Problem load_problem(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot open problem file " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_problem(buf.str());
}

void save_problem(const Problem& problem, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ValidationError("cannot write problem file " + path.string());
    }
    out << serialize_problem(problem);
}

}  // namespace mifdcop
