#include "betalike/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace betalike {

std::string fmt17(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::string json_number(double v) {
    if (!std::isfinite(v)) return "null";
    return fmt17(v);
}

std::string json_quote(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += ch;
        }
    }
    out += "\"";
    return out;
}

}  // namespace

JsonObject& JsonObject::field(const std::string& key, double value) {
    entries_.emplace_back(key, json_number(value));
    return *this;
}

JsonObject& JsonObject::field(const std::string& key, long long value) {
    entries_.emplace_back(key, std::to_string(value));
    return *this;
}

JsonObject& JsonObject::field(const std::string& key, const std::string& value) {
    entries_.emplace_back(key, json_quote(value));
    return *this;
}

JsonObject& JsonObject::raw(const std::string& key, const std::string& json) {
    entries_.emplace_back(key, json);
    return *this;
}

std::string JsonObject::str() const {
    std::string out = "{";
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (i) out += ",";
        out += json_quote(entries_[i].first) + ":" + entries_[i].second;
    }
    out += "}";
    return out;
}

std::string json_array(const std::vector<double>& values) {
    std::string out = "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ",";
        out += json_number(values[i]);
    }
    out += "]";
    return out;
}

std::string theta_density_tsv(const ThetaDensity& d) {
    std::ostringstream out;
    out << "# model=" << theta_model_name(d.model) << "\n";
    if (d.query.tau) out << "# tau=" << fmt17(*d.query.tau) << "\n";
    if (d.query.z) out << "# z=" << fmt17(*d.query.z) << "\n";
    if (d.query.m) out << "# m=" << *d.query.m << "\n";
    out << "# normalizer=" << fmt17(d.normalizer) << "\n";
    if (!d.support_notes.empty()) out << "# support: " << d.support_notes << "\n";
    for (const auto& w : d.warnings) out << "# warning: " << w << "\n";
    out << "theta\tdensity\n";
    for (std::size_t i = 0; i < d.grid.points.size(); ++i)
        out << fmt17(d.grid.points[i]) << "\t" << fmt17(d.grid.values[i]) << "\n";
    return out.str();
}

std::string density_summary_json(const ThetaDensity& d, const MomentSet& m, const CumulantSet& c) {
    JsonObject obj;
    obj.field("model", std::string(theta_model_name(d.model)));
    if (d.query.tau) obj.field("tau", *d.query.tau);
    if (d.query.z) obj.field("z", *d.query.z);
    if (d.query.m) obj.field("m", static_cast<long long>(*d.query.m));
    obj.field("mean", c.mu)
        .field("sd", c.sigma)
        .field("gamma", c.gamma)
        .field("kappa", c.kappa)
        .raw("moments", json_array({m.m1, m.m2, m.m3, m.m4}))
        .field("normalizer", d.normalizer)
        .field("support_notes", d.support_notes);
    if (!d.warnings.empty()) {
        std::string warn = "[";
        for (std::size_t i = 0; i < d.warnings.size(); ++i) {
            if (i) warn += ",";
            warn += json_quote(d.warnings[i]);
        }
        warn += "]";
        obj.raw("warnings", warn);
    }
    return obj.str();
}

std::string moments_json(const std::string& model, const MomentSet& m, const CumulantSet& c) {
    JsonObject mom;
    mom.field("m1", m.m1).field("m2", m.m2).field("m3", m.m3).field("m4", m.m4);
    JsonObject cum;
    cum.field("mu", c.mu).field("sigma", c.sigma).field("gamma", c.gamma).field("kappa", c.kappa);
    JsonObject obj;
    obj.field("model", model).raw("moments", mom.str()).raw("cumulants", cum.str());
    return obj.str();
}

std::string maxent_json(const std::string& model, const MaxEntDensity& sol) {
    JsonObject cum;
    cum.field("mu", sol.cumulants.mu)
        .field("sigma", sol.cumulants.sigma)
        .field("gamma", sol.cumulants.gamma)
        .field("kappa", sol.cumulants.kappa);
    JsonObject obj;
    obj.field("model", model)
        .raw("cumulants", cum.str())
        .raw("phi", json_array({sol.phi[0], sol.phi[1], sol.phi[2], sol.phi[3]}))
        .raw("support_std", json_array({sol.support_lo, sol.support_hi}))
        .field("normalizer", sol.normalizer)
        .field("iterations", static_cast<long long>(sol.iterations));
    return obj.str();
}

std::string evidence_json(const EvidenceReport& report) {
    std::string models = "[";
    for (std::size_t i = 0; i < report.models.size(); ++i) {
        if (i) models += ",";
        JsonObject m;
        m.field("name", report.models[i].name)
            .field("log_core", report.models[i].log_core)
            .field("posterior", report.models[i].posterior);
        models += m.str();
    }
    models += "]";
    JsonObject obj;
    obj.raw("models", models)
        .raw("k_range", json_array({report.k_range.lo, report.k_range.hi}))
        .field("cancelled", report.shared_constants_note);
    return obj.str();
}

void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("rename failed: " + path);
}

}  // namespace betalike
