#include "krein/io.hpp"

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include "json.hpp"

#include "krein/errors.hpp"

namespace krein {

using nlohmann::json;

namespace {

json parse_document(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidInput(std::string("malformed JSON: ") + e.what());
    }
}

void check_keys(const json& o, std::initializer_list<const char*> allowed,
                const std::string& ctx) {
    for (auto it = o.begin(); it != o.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) { ok = true; break; }
        if (!ok)
            throw InvalidInput("unknown key \"" + it.key() + "\" in " + ctx);
    }
}

const json& need(const json& o, const char* key, const std::string& ctx) {
    auto it = o.find(key);
    if (it == o.end())
        throw InvalidInput("missing key \"" + std::string(key) + "\" in " + ctx);
    return *it;
}

double need_number(const json& o, const char* key, const std::string& ctx) {
    const json& v = need(o, key, ctx);
    if (!v.is_number())
        throw InvalidInput("key \"" + std::string(key) + "\" in " + ctx +
                           " must be a number");
    return v.get<double>();
}

const json& need_object(const json& v, const std::string& ctx) {
    if (!v.is_object()) throw InvalidInput(ctx + " must be a JSON object");
    return v;
}

const json& need_array(const json& o, const char* key, const std::string& ctx) {
    const json& v = need(o, key, ctx);
    if (!v.is_array())
        throw InvalidInput("key \"" + std::string(key) + "\" in " + ctx +
                           " must be an array");
    return v;
}

std::vector<double> number_array(const json& a, const char* key,
                                 const std::string& ctx) {
    std::vector<double> out;
    out.reserve(a.size());
    for (const json& v : a) {
        if (!v.is_number())
            throw InvalidInput("array \"" + std::string(key) + "\" in " + ctx +
                               " must hold numbers only");
        out.push_back(v.get<double>());
    }
    return out;
}

std::string escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            } else {
                out += c;
            }
        }
    }
    return out;
}

void append_number_list(std::string& out, const std::vector<double>& v) {
    out += '[';
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += format_double(v[i]);
    }
    out += ']';
}

} // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw InvalidInput("cannot read file: " + path);
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot open file for writing: " + path);
    out << content;
    out.flush();
    if (!out) throw InvalidInput("cannot write file: " + path);
}

MassDistribution parse_mass_json(const std::string& text) {
    const json j = parse_document(text);
    need_object(j, "mass description");
    check_keys(j, {"length", "segments", "point_masses", "singular"},
               "mass description");
    const double L = need_number(j, "length", "mass description");

    std::vector<DensitySegment> segments;
    if (j.contains("segments")) {
        const json& arr = need_array(j, "segments", "mass description");
        for (const json& e : arr) {
            need_object(e, "segment entry");
            check_keys(e, {"x0", "x1", "poly"}, "segment entry");
            DensitySegment s;
            s.x0 = need_number(e, "x0", "segment entry");
            s.x1 = need_number(e, "x1", "segment entry");
            const json& p = need_array(e, "poly", "segment entry");
            if (p.empty() || p.size() > 4)
                throw InvalidInput("segment \"poly\" needs 1 to 4 coefficients, got " +
                                   std::to_string(p.size()));
            const std::vector<double> c = number_array(p, "poly", "segment entry");
            for (std::size_t i = 0; i < c.size(); ++i) s.poly[i] = c[i];
            segments.push_back(s);
        }
    }

    std::vector<PointMass> atoms;
    if (j.contains("point_masses")) {
        const json& arr = need_array(j, "point_masses", "mass description");
        for (const json& e : arr) {
            need_object(e, "point mass entry");
            check_keys(e, {"x", "m"}, "point mass entry");
            atoms.push_back({need_number(e, "x", "point mass entry"),
                             need_number(e, "m", "point mass entry")});
        }
    }

    std::vector<CantorComponent> singular;
    if (j.contains("singular")) {
        const json& arr = need_array(j, "singular", "mass description");
        for (const json& e : arr) {
            need_object(e, "singular entry");
            check_keys(e, {"x0", "x1", "mass", "depth", "ratio"}, "singular entry");
            CantorComponent c;
            c.x0 = need_number(e, "x0", "singular entry");
            c.x1 = need_number(e, "x1", "singular entry");
            c.mass = need_number(e, "mass", "singular entry");
            const json& d = need(e, "depth", "singular entry");
            if (!d.is_number_integer())
                throw InvalidInput("key \"depth\" in singular entry must be an integer");
            c.depth = d.get<int>();
            c.ratio = need_number(e, "ratio", "singular entry");
            singular.push_back(c);
        }
    }

    return MassDistribution(L, std::move(segments), std::move(atoms),
                            std::move(singular));
}

TwoSpectra parse_spectra_json(const std::string& text) {
    const json j = parse_document(text);
    need_object(j, "spectra description");
    check_keys(j, {"L", "mu", "lambda", "tail", "truncated", "residuals"},
               "spectra description");

    TwoSpectra S;
    S.L = need_number(j, "L", "spectra description");
    S.mu = number_array(need_array(j, "mu", "spectra description"), "mu",
                        "spectra description");
    S.lambda = number_array(need_array(j, "lambda", "spectra description"),
                            "lambda", "spectra description");

    if (j.contains("tail")) {
        const json& t = need_object(j.at("tail"), "tail model");
        check_keys(t, {"class", "b", "beta"}, "tail model");
        const json& cls = need(t, "class", "tail model");
        if (!cls.is_string())
            throw InvalidInput("key \"class\" in tail model must be a string");
        S.tail.cls = tail_class_from_string(cls.get<std::string>());
        if (t.contains("b")) S.tail.b = need_number(t, "b", "tail model");
        if (t.contains("beta")) S.tail.beta = need_number(t, "beta", "tail model");
        if (S.tail.cls != TailClass::none) {
            if (!(S.tail.b > 0.0))
                throw InvalidInput("tail model needs b > 0 for class " +
                                   std::string(to_string(S.tail.cls)));
            const double limit = S.tail.cls == TailClass::quadratic ? 1.0 : 3.0;
            if (!(S.tail.beta >= 0.0 && S.tail.beta < limit))
                throw InvalidInput("tail model beta out of range [0, " +
                                   format_double(limit) + ") for class " +
                                   std::string(to_string(S.tail.cls)));
        }
    }

    if (j.contains("truncated")) {
        const json& tr = j.at("truncated");
        if (!tr.is_boolean())
            throw InvalidInput("key \"truncated\" in spectra description must be "
                               "a boolean");
        S.complete = !tr.get<bool>();
    } else {
        S.complete = S.tail.cls == TailClass::none;
    }
    return S;
}

InputKind sniff_input_kind(const std::string& text) {
    const json j = parse_document(text);
    need_object(j, "input document");
    const bool mass = j.contains("length") || j.contains("segments") ||
                      j.contains("point_masses") || j.contains("singular");
    const bool spec = j.contains("mu") || j.contains("lambda") || j.contains("L");
    if (mass && !spec) return InputKind::mass;
    if (spec && !mass) return InputKind::spectra;
    if (mass)
        throw InvalidInput("cannot tell mass from spectra input: top-level keys "
                           "match both shapes");
    throw InvalidInput("cannot tell mass from spectra input: need \"length\" "
                       "(mass) or \"L\"/\"mu\" (spectra) among the top-level keys");
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string to_json(const TwoSpectra& S) {
    std::string out = "{\n";
    out += "  \"L\": " + format_double(S.L) + ",\n";
    out += "  \"mu\": ";
    append_number_list(out, S.mu);
    out += ",\n  \"lambda\": ";
    append_number_list(out, S.lambda);
    out += ",\n  \"tail\": {\"class\": \"";
    out += to_string(S.tail.cls);
    out += "\", \"b\": " + format_double(S.tail.b) +
           ", \"beta\": " + format_double(S.tail.beta) + "},\n";
    out += std::string("  \"truncated\": ") + (S.complete ? "false" : "true") + "\n";
    out += "}\n";
    return out;
}

std::string to_json(const AsymptoticReport& r) {
    std::string out = "{\n";
    out += "  \"estimate\": " + format_double(r.estimate) + ",\n";
    out += "  \"verdict\": \"" + std::string(to_string(r.verdict)) + "\",\n";
    out += "  \"method\": \"" + escape(r.method) + "\",\n";
    out += "  \"tolerance\": " + format_double(r.tolerance) + ",\n";
    out += "  \"note\": \"" + escape(r.note) + "\",\n";
    out += "  \"table\": [";
    for (std::size_t i = 0; i < r.table.size(); ++i) {
        if (i) out += ", ";
        out += '[' + format_double(r.table[i].first) + ", " +
               format_double(r.table[i].second) + ']';
    }
    out += "]\n}\n";
    return out;
}

std::string to_csv(const TwoSpectra& S) {
    std::string out = "index,mu,lambda\n";
    for (std::size_t i = 0; i < S.mu.size(); ++i) {
        out += std::to_string(i + 1) + ',' + format_double(S.mu[i]) + ',';
        if (i < S.lambda.size()) out += format_double(S.lambda[i]);
        out += '\n';
    }
    return out;
}

std::string to_csv(const AsymptoticReport& r) {
    std::string out = "parameter,value\n";
    for (const auto& [p, v] : r.table)
        out += format_double(p) + ',' + format_double(v) + '\n';
    return out;
}

} // namespace krein
