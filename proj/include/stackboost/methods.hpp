#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "stackboost/aggregators.hpp"
#include "stackboost/boosting.hpp"
#include "stackboost/stacking.hpp"

namespace stackboost {

enum class Method { Best, Bem, Iew, Gem, Ols, Fsr, Pcr, Pls, Caruana, Boost, Rboost };

inline constexpr std::array<Method, 11> kAllMethods = {
    Method::Best, Method::Bem,  Method::Iew,     Method::Gem,   Method::Ols,   Method::Fsr,
    Method::Pcr,  Method::Pls,  Method::Caruana, Method::Boost, Method::Rboost};

std::string_view to_string(Method method);
std::optional<Method> parse_method(std::string_view name);

/// FSR, PCR, PLS, BOOST and RBOOST need a stop rule; the rest take none.
bool takes_stop(Method method);
/// ICM only applies to the stagewise learners.
bool accepts_stop(Method method, StopKind stop);

/// A method together with its stop rule, written "method" or "method-stop"
/// (e.g. "gem", "rboost-icm", "pcr-aicc").
struct MethodSpec {
  Method method = Method::Bem;
  std::optional<StopKind> stop;

  std::string label() const;
};

/// Throws Error{kInvalidArgument} for a missing, superfluous or inapplicable
/// stop rule.
MethodSpec make_method_spec(Method method, std::optional<StopKind> stop);
MethodSpec parse_method_spec(std::string_view label);

struct MethodOptions {
  int max_stages = 10000;
  CaruanaConfig caruana;
  GemOptions gem;
};

/// Fits the method on a prediction matrix. Best and IEW use each column's
/// mean squared error against y as its expected error.
EnsembleModel fit_method(const MethodSpec& spec, const PredictionMatrix& X, const TargetVector& y,
                         const MethodOptions& opts = {});

}  // namespace stackboost
