#include "stackboost/model_io.hpp"

#include <istream>
#include <iterator>
#include <ostream>

#include <json.hpp>

namespace stackboost {

namespace {

using Json = nlohmann::ordered_json;

template <typename T>
T field(const Json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw Error(ErrorKind::kParse, std::string("model document: missing field '") + key + "'");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorKind::kParse, std::string("model document: field '") + key + "' has the wrong type");
  }
}

}  // namespace

std::string to_json(const ModelDocument& doc) {
  Json out;
  out["format"] = "stackboost-model";
  out["version"] = doc.version;
  out["method"] = std::string(to_string(doc.spec.method));
  out["stop"] = doc.spec.stop ? Json(std::string(to_string(*doc.spec.stop))) : Json(nullptr);
  out["stop_reason"] = std::string(to_string(doc.model.stop_reason));
  out["bias"] = doc.model.bias;
  Json weights = Json::object();
  for (const auto& [id, w] : doc.model.weights) weights[id] = w;
  out["weights"] = std::move(weights);
  Json trace = Json::array();
  for (const auto& rec : doc.model.trace) {
    trace.push_back(Json{{"stage", rec.stage},
                         {"selected", rec.selected},
                         {"column", rec.column},
                         {"alpha", rec.alpha},
                         {"applied_alpha", rec.applied_alpha},
                         {"beta", rec.beta},
                         {"loss", rec.loss},
                         {"magnitude", rec.magnitude},
                         {"accepted", rec.accepted}});
  }
  out["trace"] = std::move(trace);
  return out.dump(2) + "\n";
}

ModelDocument model_from_json(const std::string& text) {
  Json in;
  try {
    in = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::kParse, std::string("model document: ") + e.what());
  }
  if (field<std::string>(in, "format") != "stackboost-model") {
    throw Error(ErrorKind::kParse, "model document: unexpected format tag");
  }
  const auto method = parse_method(field<std::string>(in, "method"));
  if (!method) throw Error(ErrorKind::kParse, "model document: unknown method");
  std::optional<StopKind> stop;
  if (!in.contains("stop")) throw Error(ErrorKind::kParse, "model document: missing field 'stop'");
  if (!in["stop"].is_null()) {
    stop = parse_stop(field<std::string>(in, "stop"));
    if (!stop) throw Error(ErrorKind::kParse, "model document: unknown stop criterion");
  }
  ModelDocument doc;
  try {
    doc.spec = make_method_spec(*method, stop);
  } catch (const Error& e) {
    throw Error(ErrorKind::kParse, std::string("model document: ") + e.what());
  }
  doc.version = field<std::string>(in, "version");
  const auto reason = parse_stop_reason(field<std::string>(in, "stop_reason"));
  if (!reason) throw Error(ErrorKind::kParse, "model document: unknown stop reason");
  doc.model.stop_reason = *reason;
  doc.model.bias = field<double>(in, "bias");
  const Json& weights = in["weights"];
  if (!weights.is_object()) throw Error(ErrorKind::kParse, "model document: 'weights' must be an object");
  for (const auto& [id, w] : weights.items()) {
    if (!w.is_number()) throw Error(ErrorKind::kParse, "model document: weight '" + id + "' is not a number");
    doc.model.weights[id] = w.get<double>();
  }
  const Json& trace = in["trace"];
  if (!trace.is_array()) throw Error(ErrorKind::kParse, "model document: 'trace' must be an array");
  for (const auto& item : trace) {
    StageRecord rec;
    rec.stage = field<int>(item, "stage");
    rec.selected = field<std::string>(item, "selected");
    rec.column = field<Eigen::Index>(item, "column");
    rec.alpha = field<double>(item, "alpha");
    rec.applied_alpha = field<double>(item, "applied_alpha");
    rec.beta = field<double>(item, "beta");
    rec.loss = field<double>(item, "loss");
    rec.magnitude = field<double>(item, "magnitude");
    rec.accepted = field<bool>(item, "accepted");
    doc.model.trace.push_back(std::move(rec));
  }
  return doc;
}

void save_model(std::ostream& out, const ModelDocument& doc) { out << to_json(doc); }

ModelDocument load_model(std::istream& in) {
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return model_from_json(text);
}

}  // namespace stackboost
