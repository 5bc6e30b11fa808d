#include "stackboost/methods.hpp"

namespace stackboost {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::Best: return "best";
    case Method::Bem: return "bem";
    case Method::Iew: return "iew";
    case Method::Gem: return "gem";
    case Method::Ols: return "ols";
    case Method::Fsr: return "fsr";
    case Method::Pcr: return "pcr";
    case Method::Pls: return "pls";
    case Method::Caruana: return "caruana";
    case Method::Boost: return "boost";
    case Method::Rboost: return "rboost";
  }
  return "bem";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : kAllMethods) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

bool takes_stop(Method method) {
  switch (method) {
    case Method::Fsr:
    case Method::Pcr:
    case Method::Pls:
    case Method::Boost:
    case Method::Rboost:
      return true;
    default:
      return false;
  }
}

bool accepts_stop(Method method, StopKind stop) {
  if (!takes_stop(method)) return false;
  if (stop == StopKind::ICM) return method == Method::Boost || method == Method::Rboost;
  return true;
}

std::string MethodSpec::label() const {
  std::string out(to_string(method));
  if (stop) {
    out += '-';
    out += to_string(*stop);
  }
  return out;
}

MethodSpec make_method_spec(Method method, std::optional<StopKind> stop) {
  const std::string name(to_string(method));
  if (takes_stop(method) && !stop) {
    throw Error(ErrorKind::kInvalidArgument, "method '" + name + "' needs a stop criterion");
  }
  if (!takes_stop(method) && stop) {
    throw Error(ErrorKind::kInvalidArgument, "method '" + name + "' takes no stop criterion");
  }
  if (stop && !accepts_stop(method, *stop)) {
    throw Error(ErrorKind::kInvalidArgument, "stop criterion '" + std::string(to_string(*stop)) +
                                                 "' is not valid with method '" + name + "'");
  }
  return MethodSpec{method, stop};
}

MethodSpec parse_method_spec(std::string_view label) {
  const auto dash = label.find('-');
  const auto method_name = label.substr(0, dash);
  const auto method = parse_method(method_name);
  if (!method) throw Error(ErrorKind::kInvalidArgument, "unknown method '" + std::string(method_name) + "'");
  std::optional<StopKind> stop;
  if (dash != std::string_view::npos) {
    const auto stop_name = label.substr(dash + 1);
    stop = parse_stop(stop_name);
    if (!stop) throw Error(ErrorKind::kInvalidArgument, "unknown stop criterion '" + std::string(stop_name) + "'");
  }
  return make_method_spec(*method, stop);
}

EnsembleModel fit_method(const MethodSpec& spec, const PredictionMatrix& X, const TargetVector& y,
                         const MethodOptions& opts) {
  make_method_spec(spec.method, spec.stop);
  auto criterion = [&] {
    const auto c = spec.stop ? to_criterion(*spec.stop) : std::nullopt;
    if (!c) throw Error(ErrorKind::kInvalidArgument, "method '" + spec.label() + "' needs a classical criterion");
    return *c;
  };
  switch (spec.method) {
    case Method::Best: return fit_best(X, y, column_mse(X, y));
    case Method::Bem: return fit_bem(X, y);
    case Method::Iew: return fit_iew(X, y, column_mse(X, y));
    case Method::Gem: return fit_gem(X, y, opts.gem);
    case Method::Ols: return fit_ols_meta(X, y);
    case Method::Fsr: return fit_fsr(X, y, criterion()).model;
    case Method::Pcr: return fit_pcr(X, y, criterion()).model;
    case Method::Pls: return fit_pls(X, y, criterion()).model;
    case Method::Caruana: return fit_caruana(X, y, opts.caruana);
    case Method::Boost: return fit_boost(X, y, BoostConfig{*spec.stop, opts.max_stages});
    case Method::Rboost: return fit_rboost(X, y, BoostConfig{*spec.stop, opts.max_stages});
  }
  throw Error(ErrorKind::kInvalidArgument, "unhandled method");
}

}  // namespace stackboost
