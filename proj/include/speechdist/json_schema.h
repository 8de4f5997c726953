// include/speechdist/json_schema.h

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

#ifndef SPEECHDIST_JSON_SCHEMA_H_
#define SPEECHDIST_JSON_SCHEMA_H_

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace speechdist {

// Validates against the subset of JSON Schema used by the shipped schemas:
// type, enum, const, properties, required, additionalProperties, items,
// minItems, maxItems, minimum, maximum, minLength. Returns one message per
// violation, each prefixed with a JSON pointer.
std::vector<std::string> ValidateJsonSchema(const nlohmann::json& instance, const nlohmann::json& schema);

}  // namespace speechdist

#endif  // SPEECHDIST_JSON_SCHEMA_H_
