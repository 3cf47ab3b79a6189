#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "invlift/oracle.hpp"

namespace invlift {

using Json = nlohmann::ordered_json;

/// Structural problem in an input document (wrong JSON type, missing field,
/// unknown tag). Distinct from ValidationError, which covers value-level
/// violations inside a structurally well-formed record.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Vec vec_from_json(const Json& j, const std::string& what) {
  if (!j.is_array()) throw ParseError(what + ": expected an array of numbers");
  Vec v(static_cast<int>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ParseError(what + ": expected an array of numbers");
    v(static_cast<int>(i)) = j[i].get<double>();
  }
  return v;
}

inline const Json& require_field(const Json& j, const char* field, const std::string& what) {
  if (!j.is_object() || !j.contains(field))
    throw ParseError(what + ": missing field '" + field + "'");
  return j.at(field);
}

inline Pose pose_from_json(const Json& j, const PoseSpace& space) {
  const Json& kind_json = require_field(j, "kind", "pose");
  if (!kind_json.is_string()) throw ParseError("pose: 'kind' must be a string");
  const std::string kind = kind_json.get<std::string>();
  if (kind != pose_kind_name(space.kind))
    throw ValidationError("pose kind '" + kind + "' does not match configuration pose '" +
                          pose_kind_name(space.kind) + "'");
  auto vec = [&](const char* f) { return vec_from_json(require_field(j, f, "pose"), std::string("pose.") + f); };
  auto unit = [&](const char* f) { return UnitVec(vec(f)); };
  // Multi-field poses are built from named locals so that a validation
  // throw on a later field cleans up the earlier ones.
  Pose pose = [&]() -> Pose {
    switch (space.kind) {
      case PoseKind::EuclPoint: return EuclPointPose{vec("p")};
      case PoseKind::PosOri2:
      case PoseKind::PosOri3: {
        Vec t = vec("t");
        UnitVec a = unit("alpha");
        return PosOriPose{std::move(t), std::move(a)};
      }
      case PoseKind::AffStiefel23: {
        Vec t = vec("t");
        UnitVec a = unit("alpha");
        UnitVec b = unit("beta");
        return AffStiefelPose{std::move(t), std::move(a), std::move(b)};
      }
      case PoseKind::Stiefel23: {
        UnitVec a = unit("alpha");
        UnitVec b = unit("beta");
        return StiefelPose{std::move(a), std::move(b)};
      }
      case PoseKind::Sphere2: return SpherePose{unit("p")};
      case PoseKind::FullGroup: {
        const Vec rflat = vec("R");
        const int n = space.dim;
        if (rflat.size() != n * n)
          throw ValidationError("pose.R: expected " + std::to_string(n * n) +
                                " row-major entries");
        Mat R(n, n);
        for (int i = 0; i < n; ++i)
          for (int c = 0; c < n; ++c) R(i, c) = rflat(i * n + c);
        Vec t = Vec::Zero(n);
        if (j.contains("t")) t = vec_from_json(j.at("t"), "pose.t");
        if (!has_translation(space.family)) {
          if (t.size() != n || t.cwiseAbs().maxCoeff() != 0.0)
            throw ValidationError("pose.t: must be absent or zero for a linear group");
        } else if (t.size() != n) {
          throw ValidationError("pose.t: expected " + std::to_string(n) + " coordinates");
        }
        return GroupPose{GroupElement(space.family, R, t)};
      }
    }
    throw ParseError("pose: unknown kind");
  }();
  validate_pose(space, pose);
  return pose;
}

struct EvalRecord {
  Vec s;
  Vec r;
  Pose pose;
  Json context;  // echoed through untouched; null when absent
};

struct EvalRequest {
  std::optional<std::string> config_key;
  std::vector<EvalRecord> records;
};

inline EvalRequest parse_eval_request(const Json& j, const Configuration& config) {
  if (!j.is_object()) throw ParseError("request: expected a JSON object");
  EvalRequest req;
  if (j.contains("config")) {
    if (!j.at("config").is_string()) throw ParseError("request.config: expected a string");
    req.config_key = j.at("config").get<std::string>();
  }
  const Json& records = require_field(j, "records", "request");
  if (!records.is_array()) throw ParseError("request.records: expected an array");
  const PoseSpace space = config.pose_space();
  for (size_t i = 0; i < records.size(); ++i) {
    const std::string where = "record " + std::to_string(i);
    try {
      const Json& rec = records[i];
      if (!rec.is_object()) throw ParseError("expected an object");
      Vec s = vec_from_json(require_field(rec, "s", "s"), "s");
      Vec r = vec_from_json(require_field(rec, "r", "r"), "r");
      Pose pose = pose_from_json(require_field(rec, "pose", "pose"), space);
      EvalRecord out{std::move(s), std::move(r), std::move(pose), Json()};
      validate_ambient_input(config, out.s, "s");
      validate_ambient_input(config, out.r, "r");
      if (rec.contains("context")) {
        if (!rec.at("context").is_array()) throw ParseError("context: expected an array");
        for (const auto& c : rec.at("context"))
          if (!c.is_number()) throw ParseError("context: expected an array of numbers");
        out.context = rec.at("context");
      }
      req.records.push_back(std::move(out));
    } catch (const ParseError& e) {
      throw ParseError(where + ": " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
  }
  return req;
}

inline std::string group_display(const Configuration& c) {
  return family_name(c.family) + "(" + std::to_string(c.dim) + ")";
}

inline Json catalog_entry_metadata(const CatalogEntry& e) {
  return Json{{"key", e.config.key()},
              {"group", group_display(e.config)},
              {"ambient", e.config.ambient_key()},
              {"pose", pose_kind_name(e.config.pose_kind)},
              {"stabilizer", e.stabilizer},
              {"feature_count", e.labels.size()},
              {"labels", e.labels},
              {"invariants", e.invariants}};
}

inline Json catalog_listing() {
  Json entries = Json::array();
  for (const CatalogEntry& e : catalog()) entries.push_back(catalog_entry_metadata(e));
  return Json{{"count", entries.size()}, {"entries", entries}};
}

inline Json eval_response(const CatalogEntry& entry, const std::vector<EvalRecord>& records) {
  Json recs = Json::array();
  for (const EvalRecord& rec : records) {
    const FeatureVector fv = catalog_eval(entry.config, rec.s, rec.r, rec.pose);
    Json one{{"features", std::vector<double>(fv.values.data(), fv.values.data() + fv.values.size())},
             {"labels", fv.labels}};
    if (!rec.context.is_null()) one["context"] = rec.context;
    recs.push_back(std::move(one));
  }
  return Json{{"config", entry.config.key()},
              {"metadata", catalog_entry_metadata(entry)},
              {"records", recs}};
}

/// CSV with one quoted header row of feature labels and one row per record.
inline std::string eval_csv(const CatalogEntry& entry, const std::vector<EvalRecord>& records) {
  std::string out;
  for (size_t i = 0; i < entry.labels.size(); ++i) {
    if (i) out += ",";
    out += "\"" + entry.labels[i] + "\"";
  }
  out += "\n";
  char buf[64];
  for (const EvalRecord& rec : records) {
    const FeatureVector fv = catalog_eval(entry.config, rec.s, rec.r, rec.pose);
    for (int i = 0; i < fv.values.size(); ++i) {
      if (i) out += ",";
      std::snprintf(buf, sizeof(buf), "%.17g", fv.values(i));
      out += buf;
    }
    out += "\n";
  }
  return out;
}

}  // namespace invlift
