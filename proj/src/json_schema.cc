// src/json_schema.cc

// Copyright 2026  The speechdist Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "speechdist/json_schema.h"

#include <algorithm>

#include "speechdist/io.h"

namespace speechdist {

namespace {

using nlohmann::json;

bool MatchesType(const json& v, const std::string& type) {
  if (type == "null") return v.is_null();
  if (type == "boolean") return v.is_boolean();
  if (type == "object") return v.is_object();
  if (type == "array") return v.is_array();
  if (type == "string") return v.is_string();
  if (type == "number") return v.is_number();
  if (type == "integer")
    return v.is_number_integer() || (v.is_number_float() && v.get<double>() == static_cast<double>(static_cast<long long>(v.get<double>())));
  return false;
}

void Validate(const json& v, const json& schema, const std::string& ptr, std::vector<std::string>& errors) {
  if (schema.is_boolean()) {
    if (!schema.get<bool>()) errors.push_back(ptr + ": not allowed");
    return;
  }
  if (!schema.is_object()) return;
  const std::string where = ptr.empty() ? "/" : ptr;

  if (auto t = schema.find("type"); t != schema.end()) {
    std::vector<std::string> types;
    if (t->is_string()) types.push_back(t->get<std::string>());
    else for (const auto& x : *t) types.push_back(x.get<std::string>());
    if (std::none_of(types.begin(), types.end(), [&](const auto& ty) { return MatchesType(v, ty); })) {
      errors.push_back(where + ": expected type " + t->dump() + ", got " + v.type_name());
      return;
    }
  }
  if (auto e = schema.find("enum"); e != schema.end()) {
    if (std::find(e->begin(), e->end(), v) == e->end()) errors.push_back(where + ": value not in enum");
  }
  if (auto c = schema.find("const"); c != schema.end()) {
    if (v != *c) errors.push_back(where + ": expected constant " + c->dump());
  }
  if (v.is_number()) {
    const double x = v.get<double>();
    if (auto m = schema.find("minimum"); m != schema.end() && x < m->get<double>())
      errors.push_back(where + ": " + FormatG(x, 10) + " below minimum " + m->dump());
    if (auto m = schema.find("maximum"); m != schema.end() && x > m->get<double>())
      errors.push_back(where + ": " + FormatG(x, 10) + " above maximum " + m->dump());
  }
  if (v.is_string()) {
    if (auto m = schema.find("minLength"); m != schema.end() && v.get<std::string>().size() < m->get<size_t>())
      errors.push_back(where + ": string shorter than " + m->dump());
  }
  if (v.is_object()) {
    if (auto r = schema.find("required"); r != schema.end())
      for (const auto& key : *r)
        if (!v.contains(key.get<std::string>())) errors.push_back(where + ": missing required property '" + key.get<std::string>() + "'");
    const json* props = nullptr;
    if (auto p = schema.find("properties"); p != schema.end()) props = &*p;
    auto additional = schema.find("additionalProperties");
    for (const auto& [key, value] : v.items()) {
      const std::string child = ptr + "/" + key;
      if (props && props->contains(key)) {
        Validate(value, props->at(key), child, errors);
      } else if (additional != schema.end()) {
        Validate(value, *additional, child, errors);
      }
    }
  }
  if (v.is_array()) {
    if (auto m = schema.find("minItems"); m != schema.end() && v.size() < m->get<size_t>())
      errors.push_back(where + ": fewer than " + m->dump() + " items");
    if (auto m = schema.find("maxItems"); m != schema.end() && v.size() > m->get<size_t>())
      errors.push_back(where + ": more than " + m->dump() + " items");
    if (auto items = schema.find("items"); items != schema.end())
      for (size_t i = 0; i < v.size(); ++i) Validate(v[i], *items, ptr + "/" + std::to_string(i), errors);
  }
}

}  // namespace

std::vector<std::string> ValidateJsonSchema(const json& instance, const json& schema) {
  std::vector<std::string> errors;
  Validate(instance, schema, "", errors);
  return errors;
}

}  // namespace speechdist
