#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "json.hpp"
#include "srwalk/error.hpp"
#include "srwalk/model.hpp"

namespace srw {

using json = nlohmann::json;

constexpr std::string_view face_key(Face face) noexcept {
  switch (face) {
    case Face::Origin: return "p_origin";
    case Face::Horizontal: return "p_face1";
    case Face::Vertical: return "p_face2";
    case Face::Interior: return "p_plus";
  }
  return "?";
}

/// Parses "i,j" with i, j in {-1, 0, 1}. No whitespace is accepted.
inline Step parse_step_key(std::string_view key) {
  const auto comma = key.find(',');
  auto bad = [&] {
    return Error(ErrorKind::UnknownStepKey, "unknown step key \"" + std::string(key) + "\"");
  };
  if (comma == std::string_view::npos) throw bad();
  auto parse_int = [&](std::string_view part) {
    int value = 0;
    const auto* first = part.data();
    const auto* last = part.data() + part.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (part.empty() || ec != std::errc{} || ptr != last) throw bad();
    return value;
  };
  const Step s{parse_int(key.substr(0, comma)), parse_int(key.substr(comma + 1))};
  if (!is_valid_step(s)) throw bad();
  return s;
}

namespace detail {

inline FaceDistribution parse_face(const json& node, Face face) {
  const std::string name(face_key(face));
  if (!node.is_object()) {
    throw Error(ErrorKind::MalformedDocument, "\"" + name + "\" must be an object");
  }
  FaceDistribution dist(face);
  for (const auto& [key, value] : node.items()) {
    const Step s = parse_step_key(key);
    if (!value.is_number()) {
      throw Error(ErrorKind::MalformedDocument,
                  "\"" + name + "\"[\"" + key + "\"] is not a number");
    }
    const double p = value.get<double>();
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
      throw Error(ErrorKind::ProbabilityOutOfRange,
                  name + "[" + key + "] = " + format_number(p) + " is outside [0,1]");
    }
    if (p > 0.0 && !step_allowed(face, s)) {
      throw Error(ErrorKind::SupportViolation, "step " + key + " leaves the quadrant from face " +
                                                   std::string(face_name(face)));
    }
    dist.set(s, p);
  }
  const double total = dist.sum();
  if (!(std::abs(total - 1.0) <= kSumTolerance)) {
    throw Error(ErrorKind::FaceSumMismatch,
                "face " + std::string(face_name(face)) + " sums to " + format_number(total));
  }
  return dist;
}

}  // namespace detail

inline ReflectingWalkModel parse_model(const json& doc) {
  if (!doc.is_object()) {
    throw Error(ErrorKind::MalformedDocument, "model document must be a JSON object");
  }
  for (const auto& [key, value] : doc.items()) {
    if (key == "label" || key == "note") {
      if (!value.is_string()) {
        throw Error(ErrorKind::MalformedDocument, "\"" + key + "\" must be a string");
      }
      continue;
    }
    bool known = false;
    for (Face f : kFaces) known = known || key == face_key(f);
    if (!known) throw Error(ErrorKind::MalformedDocument, "unexpected key \"" + key + "\"");
  }
  ReflectingWalkModel model;
  for (Face f : kFaces) {
    const std::string name(face_key(f));
    if (!doc.contains(name)) {
      throw Error(ErrorKind::MalformedDocument, "missing face \"" + name + "\"");
    }
    model.face(f) = detail::parse_face(doc.at(name), f);
  }
  if (doc.contains("label")) model.label = doc.at("label").get<std::string>();
  return model;
}

inline ReflectingWalkModel parse_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::MalformedDocument, e.what());
  }
  return parse_model(doc);
}

inline ReflectingWalkModel parse_model(const std::string& text) {
  return parse_model(std::string_view(text));
}
inline ReflectingWalkModel parse_model(const char* text) { return parse_model(std::string_view(text)); }

/// Omits zero entries; doubles are written in shortest round-trip form.
inline json to_json(const ReflectingWalkModel& model, std::string_view note = {}) {
  json doc = json::object();
  if (!model.label.empty()) doc["label"] = model.label;
  if (!note.empty()) doc["note"] = std::string(note);
  for (Face f : kFaces) {
    json face = json::object();
    for (Step s : kSteps) {
      const double p = model.face(f).at(s);
      if (p != 0.0) face[step_key(s)] = p;
    }
    doc[std::string(face_key(f))] = face;
  }
  return doc;
}

inline std::string serialize(const ReflectingWalkModel& model, std::string_view note = {}) {
  return to_json(model, note).dump(2) + "\n";
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
  out << text;
}

inline ReflectingWalkModel load_model(const std::string& path) {
  return parse_model(std::string_view(read_text_file(path)));
}

}  // namespace srw
