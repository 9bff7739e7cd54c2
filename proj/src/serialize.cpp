#include "qrlab/serialize.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace qrlab {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    return out;
}

double parse_double(const std::string& s, const std::string& key) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("E_CONFIG", "cannot parse number '" + s + "' for key " + key);
    }
}

int parse_int(const std::string& s, const std::string& key) {
    try {
        std::size_t pos = 0;
        int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("E_CONFIG", "cannot parse integer '" + s + "' for key " + key);
    }
}

std::vector<double> parse_list(const std::string& s, const std::string& key) {
    std::vector<double> out;
    if (trim(s).empty()) return out;
    for (const auto& piece : split(s, ',')) out.push_back(parse_double(piece, key));
    return out;
}

// edges look like "(1,2,0.005) (1,3,0.0025)"; ';' separators also accepted
std::vector<IsingEdge> parse_edges(std::string s) {
    std::vector<IsingEdge> edges;
    for (char& c : s)
        if (c == ';') c = ' ';
    std::istringstream in(s);
    std::string tok;
    std::string group;
    while (in >> tok) {
        group += tok;
        if (group.find(')') == std::string::npos) continue;
        std::string inner = group;
        inner.erase(std::remove(inner.begin(), inner.end(), '('), inner.end());
        inner.erase(std::remove(inner.begin(), inner.end(), ')'), inner.end());
        auto parts = split(inner, ',');
        if (parts.size() != 3)
            throw ValidationError("E_CONFIG", "ising edge needs (i,j,eps): " + group);
        edges.push_back({parse_int(parts[0], "ising_edges"), parse_int(parts[1], "ising_edges"),
                         parse_double(parts[2], "ising_edges")});
        group.clear();
    }
    if (!trim(group).empty())
        throw ValidationError("E_CONFIG", "unterminated ising edge: " + group);
    return edges;
}

} // namespace

ModelDocument read_model_document(std::istream& in) {
    ModelDocument doc;
    std::vector<double> tunneling, bias;
    bool saw_tunneling = false, saw_bias = false;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("E_CONFIG",
                                  "line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key == "n_spins") {
            doc.spec.n_spins = parse_int(value, key);
        } else if (key == "tunneling") {
            tunneling = parse_list(value, key);
            saw_tunneling = true;
        } else if (key == "boson_freq") {
            doc.spec.boson_freq = parse_double(value, key);
        } else if (key == "coupling") {
            doc.spec.coupling = parse_double(value, key);
        } else if (key == "ising_edges") {
            doc.spec.ising_edges = parse_edges(value);
        } else if (key == "bias") {
            bias = parse_list(value, key);
            saw_bias = true;
        } else if (key == "ising_axis") {
            if (value == "zz" || value == "ZZ")
                doc.spec.ising_axis = IsingAxis::ZZ;
            else if (value == "xx" || value == "XX")
                doc.spec.ising_axis = IsingAxis::XX;
            else
                throw ValidationError("E_CONFIG", "ising_axis must be zz or xx, got " + value);
        } else if (key == "cutoff") {
            doc.cutoff = (value == "auto") ? -1 : parse_int(value, key);
        } else {
            throw ValidationError("E_CONFIG", "unknown key '" + key + "'");
        }
    }
    auto fit = [&](std::vector<double> v, bool saw) {
        if (!saw || v.empty()) return std::vector<double>(doc.spec.n_spins, 0.0);
        if (v.size() == 1) return std::vector<double>(doc.spec.n_spins, v[0]); // broadcast
        if (int(v.size()) != doc.spec.n_spins)
            throw ValidationError("E_CONFIG", "per-spin list length does not match n_spins");
        return v;
    };
    doc.spec.tunneling = fit(tunneling, saw_tunneling);
    doc.spec.bias = fit(bias, saw_bias);
    doc.spec.validate();
    return doc;
}

ModelDocument read_model_document_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("E_IO", "cannot open config file " + path);
    return read_model_document(in);
}

void write_model_document(std::ostream& out, const ModelDocument& doc) {
    const ModelSpec& s = doc.spec;
    auto list = [](const std::vector<double>& v) {
        std::string r;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) r += ", ";
            r += fmt17(v[i]);
        }
        return r;
    };
    out << "n_spins = " << s.n_spins << "\n";
    out << "tunneling = " << list(s.tunneling) << "\n";
    out << "boson_freq = " << fmt17(s.boson_freq) << "\n";
    out << "coupling = " << fmt17(s.coupling) << "\n";
    out << "ising_edges =";
    for (const auto& e : s.ising_edges)
        out << " (" << e.i << "," << e.j << "," << fmt17(e.strength) << ")";
    out << "\n";
    out << "bias = " << list(s.bias) << "\n";
    out << "ising_axis = " << (s.ising_axis == IsingAxis::ZZ ? "zz" : "xx") << "\n";
    if (doc.cutoff < 0)
        out << "cutoff = auto\n";
    else
        out << "cutoff = " << doc.cutoff << "\n";
}

void write_csv(std::ostream& out, const Table& t) {
    if (!t.digest.empty()) out << "# " << t.digest << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        out << (i ? "," : "") << t.columns[i];
    out << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << fmt17(row[i]);
        out << "\n";
    }
}

void write_json(std::ostream& out, const Table& t) {
    nlohmann::ordered_json j;
    j["digest"] = t.digest;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json obj;
        for (std::size_t i = 0; i < row.size() && i < t.columns.size(); ++i)
            obj[t.columns[i]] = row[i];
        j["rows"].push_back(obj);
    }
    out << j.dump(2) << "\n";
}

Table to_table(const ScalingCurve& curve) {
    Table t;
    t.digest = curve.model_digest;
    t.columns = {"kappa", "beta", "beta_over_beta_c", "alpha",
                 "sigma_z_analytic", "sigma_z_numeric", "cutoff"};
    for (const auto& r : curve.rows)
        t.rows.push_back({curve.kappa, r.beta, r.beta_over_beta_c, r.alpha, r.sigma_z_analytic,
                          r.sigma_z_numeric, double(r.cutoff)});
    return t;
}

} // namespace qrlab
