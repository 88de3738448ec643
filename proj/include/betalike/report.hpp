#pragma once

#include <string>
#include <utility>
#include <vector>

#include "betalike/cumulants.hpp"
#include "betalike/evidence.hpp"
#include "betalike/maxent.hpp"
#include "betalike/theta_density.hpp"

namespace betalike {

/// Fixed 17-significant-digit rendering; all emitted numbers go through this
/// so identical runs produce byte-identical output.
std::string fmt17(double v);

/// Flat JSON object writer with insertion-ordered keys. Non-finite numbers
/// render as null.
class JsonObject {
public:
    JsonObject& field(const std::string& key, double value);
    JsonObject& field(const std::string& key, long long value);
    JsonObject& field(const std::string& key, const std::string& value);
    JsonObject& raw(const std::string& key, const std::string& json);
    std::string str() const;

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

std::string json_array(const std::vector<double>& values);

std::string theta_density_tsv(const ThetaDensity& d);
std::string density_summary_json(const ThetaDensity& d, const MomentSet& m, const CumulantSet& c);
std::string moments_json(const std::string& model, const MomentSet& m, const CumulantSet& c);
std::string maxent_json(const std::string& model, const MaxEntDensity& sol);
std::string evidence_json(const EvidenceReport& report);

/// Writes through a temp file + rename so readers never see partial output.
void atomic_write(const std::string& path, const std::string& content);

}  // namespace betalike
