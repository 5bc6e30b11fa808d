#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "stackboost/core.hpp"
#include "stackboost/methods.hpp"

namespace stackboost {

/// A fitted model together with how it was produced.
struct ModelDocument {
  MethodSpec spec;
  std::string version;
  EnsembleModel model;
};

/// Indented JSON with keys in a fixed order; doubles are written in shortest
/// round-trip form so load(save(doc)) reproduces every value exactly.
std::string to_json(const ModelDocument& doc);
ModelDocument model_from_json(const std::string& text);

void save_model(std::ostream& out, const ModelDocument& doc);
ModelDocument load_model(std::istream& in);

}  // namespace stackboost
