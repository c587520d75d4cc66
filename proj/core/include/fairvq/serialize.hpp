#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "fairvq/codebook.hpp"
#include "fairvq/decorrelate.hpp"
#include "fairvq/joint.hpp"
#include "fairvq/normalize.hpp"
#include "fairvq/schema.hpp"
#include "fairvq/tradeoff.hpp"

namespace fairvq {

// JSON-shaped text documents with explicit field names. Doubles are written
// with shortest round-trip precision, so write/read cycles are bit-exact.

std::string schema_to_json(const FeatureSchema& schema);
FeatureSchema schema_from_json(const std::string& text);

std::string codebook_to_json(const Codebook& codebook, const NormalizationParams& norm);
std::pair<Codebook, NormalizationParams> codebook_from_json(const std::string& text);

std::string joint_to_json(const DiscreteJoint& joint);
DiscreteJoint joint_from_json(const std::string& text);

struct FairSolutionRecord {
  std::string label;
  bool aware = false;
  FairnessBudget budget;
  FairLpResult result;
  Vec s_star;
};

std::string fair_solutions_to_json(const std::vector<FairSolutionRecord>& records,
                                   const std::string& config_hash);
std::vector<FairSolutionRecord> fair_solutions_from_json(const std::string& text);

std::string transform_to_json(const TransformSolution& solution,
                              const std::string& config_hash);
TransformSolution transform_from_json(const std::string& text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

FeatureSchema load_schema(const std::filesystem::path& path);

}  // namespace fairvq
