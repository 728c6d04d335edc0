#pragma once

// The acceptance suite over the built-in preset corpus.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "h2xr/classifier.hpp"

namespace h2xr {

struct CheckEntry {
  std::string id;  // PROP1, PROP2, LEMMA2, PROP3, GEO_LEMMA, FOLIATION, THEOREM1, DIVERGENCE
  int criterion{0};
  std::string name;
  double measured{0.0};
  double threshold{0.0};
  std::string relation;  // "<", ">=" or "=="
  bool pass{false};
};

struct CorpusEntry {
  std::string label;
  Verdict expect{Verdict::kCylinder};
  Surface surface;
};

struct VerifyOptions {
  ClassifierConfig classifier;
  std::uint64_t seed{20240601};
  std::vector<CorpusEntry> extra;  // appended to the classification corpus
};

struct VerificationReport {
  std::vector<CheckEntry> entries;

  bool pass() const;
  bool criterion_pass(int criterion) const;
  std::vector<const CheckEntry*> criterion_entries(int criterion) const;
};

constexpr int kCriterionCount = 10;
std::string_view criterion_title(int criterion);

VerificationReport run_verification(const VerifyOptions& opt = {});

}  // namespace h2xr
