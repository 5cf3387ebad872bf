#pragma once

#include <filesystem>
#include <json.hpp>

#include "lpvstab/bench.hpp"
#include "lpvstab/derivset.hpp"
#include "lpvstab/lmi.hpp"
#include "lpvstab/lpvmodel.hpp"
#include "lpvstab/sdp.hpp"

namespace lpvstab {

// nlohmann ADL hooks. Matrices are stored row-major.

void to_json(nlohmann::json& j, const VertexMatrix& v);
void from_json(const nlohmann::json& j, VertexMatrix& v);

void to_json(nlohmann::json& j, const DerivativeBounds& b);
void from_json(const nlohmann::json& j, DerivativeBounds& b);

void to_json(nlohmann::json& j, const PolytopicSystem& s);
void from_json(const nlohmann::json& j, PolytopicSystem& s);

void to_json(nlohmann::json& j, const MdofConfig& c);
void from_json(const nlohmann::json& j, MdofConfig& c);

void to_json(nlohmann::json& j, const SolveOptions& o);
void from_json(const nlohmann::json& j, SolveOptions& o);

void to_json(nlohmann::json& j, const Outcome& o);
void to_json(nlohmann::json& j, const MarginReport& r);

void to_json(nlohmann::json& j, const ConstraintSet& cs);  // debug dump

void to_json(nlohmann::json& j, const ExperimentSpec& s);
void from_json(const nlohmann::json& j, ExperimentSpec& s);
void to_json(nlohmann::json& j, const TrialResult& t);
void from_json(const nlohmann::json& j, TrialResult& t);
void to_json(nlohmann::json& j, const CellStats& c);
void from_json(const nlohmann::json& j, CellStats& c);
void to_json(nlohmann::json& j, const ExperimentReport& r);
void from_json(const nlohmann::json& j, ExperimentReport& r);

nlohmann::json load_json_file(const std::filesystem::path& path);
void save_json_file(const nlohmann::json& j, const std::filesystem::path& path);

}  // namespace lpvstab
