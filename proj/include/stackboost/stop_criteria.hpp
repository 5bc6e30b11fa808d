#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "stackboost/core.hpp"

namespace stackboost {

enum class CriterionKind { AIC, AICc, BIC, HQIC, gMDL };

inline constexpr CriterionKind kAllCriteria[] = {CriterionKind::AIC, CriterionKind::AICc,
                                                 CriterionKind::BIC, CriterionKind::HQIC,
                                                 CriterionKind::gMDL};

/// Stop rule for the stagewise learners: one of the five criteria or ICM.
enum class StopKind { AIC, AICc, BIC, HQIC, gMDL, ICM };

std::string_view to_string(CriterionKind kind);
std::string_view to_string(StopKind kind);
/// Lower-case registered names: aic, aicc, bic, hqic, gmdl, icm.
std::optional<StopKind> parse_stop(std::string_view name);
std::optional<CriterionKind> to_criterion(StopKind kind);
StopKind to_stop(CriterionKind kind);

struct CriterionScore {
  double value = 0.0;  // lower is better; +inf when undefined
  CriterionKind kind = CriterionKind::AIC;
  int k = 0;
  int n = 0;

  bool defined() const;
};

// ssr is floored at this fraction of sst before any logarithm.
inline constexpr double kSsrFloorRel = 1e-12;

/// Information criterion for a least-squares model with k features:
///   AIC  = n ln(SSR/n) + 2k
///   AICc = AIC + 2k(k+1)/(n-k-1)             (+inf when n-k-1 <= 0)
///   BIC  = n ln(SSR/n) + k ln n
///   HQIC = n ln(SSR/n) + 2k ln ln n
///   gMDL = (n/2) ln S + (k/2) ln F + ln n    when k > 0 and R^2 >= k/n,
///          (n/2) ln(SST/n) + (1/2) ln n      otherwise,
/// with S = SSR/(n-k), F = (SST-SSR)/(k S)  (Hansen & Yu 2001).
CriterionScore score(CriterionKind kind, int n, int k, double ssr, double sst);

/// Increasing Coefficient Magnitude: stop when the candidate stage's
/// |alpha| * sigma strictly exceeds that of the previous stage. Never fires
/// on the first stage.
bool icm_should_stop(const StageRecord& current, const StageRecord* previous);

struct StageSummary {
  int n = 0;
  int k_distinct = 0;
  double ssr = 0.0;
};

/// The last entry of history is the candidate stage. Fires when its score is
/// strictly worse than the score of the entry before it; a single-entry
/// history never fires. When both entries have the same n and k the score
/// change is evaluated in ratio form, so its sign follows the ssr change
/// exactly (within one gMDL branch).
bool classical_should_stop(CriterionKind kind, std::span<const StageSummary> history, double sst);

}  // namespace stackboost
