#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "maple/core/grid.hpp"

namespace maple::core {

// Diagnostic findings named in reports. "dilated" counts as present for the
// aorta/pulmonary-trunk finding; every task is binary.
enum class Finding : int {
  calcification = 0,
  stenosis = 1,
  myocardium_anomaly = 2,
  dilated_aorta_tp = 3,
};

enum class State : int { absent = 0, present = 1 };

// Anatomical regions that condition the patch encoders.
enum class Region : int { arteries = 0, myocardium = 1, aorta_tp = 2 };

inline constexpr int kNumFindings = 4;
inline constexpr int kNumRegions = 3;

const std::vector<Finding>& all_findings();
const std::vector<Region>& all_regions();

std::string to_string(Finding f);
std::string to_string(State s);
std::string to_string(Region r);
Finding finding_from_string(const std::string& name);
State state_from_string(const std::string& name);
Region region_from_string(const std::string& name);

// Each finding is probed on the patches of exactly one anatomical region:
// calcification and stenosis on the coronary arteries, myocardium anomalies on
// the myocardium, dilation on the aorta/pulmonary trunk.
Region region_of_finding(Finding f);
std::vector<Finding> findings_of_region(Region r);

struct Volume {
  Grid3<float> data;                        // intensities in [0,1]
  std::array<double, 3> spacing{1.0, 1.0, 1.0};

  void validate() const;
};

struct RegionMask {
  Grid3<int32_t> labels;                    // 0 = background, i+1 = region_names[i]
  std::vector<std::string> region_names;

  void validate(const Volume& paired) const;
  int32_t label_of(Region r) const;
  std::size_t voxel_count(Region r) const;
};

struct Patch {
  Grid3<float> data;                        // cubic, edge length p_size
  Region region = Region::arteries;
  std::array<int, 3> center{0, 0, 0};       // voxel coordinate in the source volume

  int edge() const { return static_cast<int>(data.d0); }
};

struct Sentence {
  std::string text;
  std::string report_id;
};

struct FindingLabel {
  Finding finding = Finding::calcification;
  State state = State::absent;

  bool operator==(const FindingLabel&) const = default;
};

enum class EmbedSource : int { sentence = 0, pooled_image = 1, patch = 2 };

struct EmbeddingVec {
  std::vector<double> values;
  EmbedSource source = EmbedSource::sentence;

  std::size_t dim() const { return values.size(); }
};

// Voxels of one planted finding manifestation, kept by the generator so that
// localization can be checked against ground truth.
struct LesionRecord {
  Finding finding = Finding::calcification;
  Region affected_region = Region::arteries;
  std::vector<std::array<int, 3>> voxels;
};

struct PairedSample {
  std::string id;
  Volume volume;
  RegionMask mask;
  std::vector<Sentence> report;
  std::map<Finding, State> ground_truth;
  std::vector<LesionRecord> lesions;
};

// cosine_sim(u, v) = <u,v> / (|u| |v|). Zero vectors are rejected: a zero
// embedding always indicates a pipeline bug upstream.
double cosine_sim(const std::vector<double>& u, const std::vector<double>& v);
double cosine_sim(const EmbeddingVec& u, const EmbeddingVec& v);

// Squared euclidean distance, sum_i (u_i - v_i)^2.
double sq_l2(const std::vector<double>& u, const std::vector<double>& v);
double sq_l2(const EmbeddingVec& u, const EmbeddingVec& v);

}  // namespace maple::core
