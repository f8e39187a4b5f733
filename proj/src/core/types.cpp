#include "maple/core/types.hpp"

#include <cmath>

namespace maple::core {

const std::vector<Finding>& all_findings() {
  static const std::vector<Finding> v = {Finding::calcification, Finding::stenosis,
                                         Finding::myocardium_anomaly, Finding::dilated_aorta_tp};
  return v;
}

const std::vector<Region>& all_regions() {
  static const std::vector<Region> v = {Region::arteries, Region::myocardium, Region::aorta_tp};
  return v;
}

std::string to_string(Finding f) {
  switch (f) {
    case Finding::calcification: return "calcification";
    case Finding::stenosis: return "stenosis";
    case Finding::myocardium_anomaly: return "myocardium_anomaly";
    case Finding::dilated_aorta_tp: return "dilated_aorta_tp";
  }
  throw std::invalid_argument("unknown finding");
}

std::string to_string(State s) { return s == State::present ? "present" : "absent"; }

std::string to_string(Region r) {
  switch (r) {
    case Region::arteries: return "arteries";
    case Region::myocardium: return "myocardium";
    case Region::aorta_tp: return "aorta_tp";
  }
  throw std::invalid_argument("unknown region");
}

Finding finding_from_string(const std::string& name) {
  for (Finding f : all_findings())
    if (to_string(f) == name) return f;
  throw std::invalid_argument("unknown finding: " + name);
}

State state_from_string(const std::string& name) {
  if (name == "present") return State::present;
  if (name == "absent") return State::absent;
  throw std::invalid_argument("unknown state: " + name);
}

Region region_from_string(const std::string& name) {
  for (Region r : all_regions())
    if (to_string(r) == name) return r;
  throw std::invalid_argument("unknown region: " + name);
}

Region region_of_finding(Finding f) {
  switch (f) {
    case Finding::calcification:
    case Finding::stenosis: return Region::arteries;
    case Finding::myocardium_anomaly: return Region::myocardium;
    case Finding::dilated_aorta_tp: return Region::aorta_tp;
  }
  throw std::invalid_argument("unknown finding");
}

std::vector<Finding> findings_of_region(Region r) {
  std::vector<Finding> out;
  for (Finding f : all_findings())
    if (region_of_finding(f) == r) out.push_back(f);
  return out;
}

void Volume::validate() const {
  if (data.d0 < 1 || data.d1 < 1 || data.d2 < 1)
    throw std::invalid_argument("volume must have at least one voxel per axis");
  for (double s : spacing)
    if (!(s > 0)) throw std::invalid_argument("voxel spacing must be positive");
  for (float v : data.data)
    if (!(v >= 0.0f && v <= 1.0f))
      throw std::invalid_argument("volume intensity outside [0,1]");
}

void RegionMask::validate(const Volume& paired) const {
  if (!labels.same_shape(paired.data))
    throw std::invalid_argument("mask shape does not match volume");
  std::vector<std::size_t> counts(region_names.size() + 1, 0);
  for (int32_t l : labels.data) {
    if (l < 0 || l > static_cast<int32_t>(region_names.size()))
      throw std::invalid_argument("mask label without a declared region name");
    counts[static_cast<std::size_t>(l)]++;
  }
  for (std::size_t i = 1; i < counts.size(); ++i)
    if (counts[i] == 0)
      throw std::invalid_argument("declared region has no voxels: " + region_names[i - 1]);
}

int32_t RegionMask::label_of(Region r) const {
  const std::string name = core::to_string(r);
  for (std::size_t i = 0; i < region_names.size(); ++i)
    if (region_names[i] == name) return static_cast<int32_t>(i + 1);
  throw std::invalid_argument("region not declared in mask: " + name);
}

std::size_t RegionMask::voxel_count(Region r) const {
  int32_t want = label_of(r);
  std::size_t n = 0;
  for (int32_t l : labels.data)
    if (l == want) ++n;
  return n;
}

double cosine_sim(const std::vector<double>& u, const std::vector<double>& v) {
  if (u.size() != v.size())
    throw std::invalid_argument("cosine_sim: dimension mismatch");
  double uu = 0, vv = 0, uv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    uu += u[i] * u[i];
    vv += v[i] * v[i];
    uv += u[i] * v[i];
  }
  if (uu == 0.0 || vv == 0.0)
    throw std::domain_error("cosine_sim: zero vector");
  double s = uv / (std::sqrt(uu) * std::sqrt(vv));
  if (s > 1.0) s = 1.0;
  if (s < -1.0) s = -1.0;
  return s;
}

double cosine_sim(const EmbeddingVec& u, const EmbeddingVec& v) {
  return cosine_sim(u.values, v.values);
}

double sq_l2(const std::vector<double>& u, const std::vector<double>& v) {
  if (u.size() != v.size())
    throw std::invalid_argument("sq_l2: dimension mismatch");
  double s = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    double d = u[i] - v[i];
    s += d * d;
  }
  return s;
}

double sq_l2(const EmbeddingVec& u, const EmbeddingVec& v) { return sq_l2(u.values, v.values); }

}  // namespace maple::core
