//
// Copyright 2026 The Privchan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef PRIVCHAN_IO_H_
#define PRIVCHAN_IO_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "privchan/channel.h"
#include "privchan/mechanisms.h"

namespace privchan {

// Channel file:
//   {"universes": [3, 2], "output_size": 2,
//    "matrix": [[row y = 0 over joint x], ...], "name": "...", "unit": "nats"}
// "name" and "unit" are optional metadata.
struct ChannelFile {
  ChannelMatrix channel;
  std::optional<std::string> name;
  std::optional<std::string> unit;
};

// Query file:
//   {"universes": [3, 2], "output_size": 2, "table": [f(x) per joint x],
//    "distortion": [[d(y, y')]], "values": [real f(x) per joint x]}
// "distortion" and "values" are optional.
struct QueryFile {
  QueryTable query;
  std::optional<DistortionTable> distortion;
  std::optional<std::vector<double>> values;
};

// Parsers throw SchemaError carrying a JSON pointer to the offending field,
// or the library's own validation errors rethrown as SchemaError.
ChannelFile ParseChannel(const nlohmann::json& doc);
QueryFile ParseQuery(const nlohmann::json& doc);

// Reads and parses a JSON file; unreadable or malformed files raise
// SchemaError with an empty pointer.
nlohmann::json ReadJsonFile(const std::filesystem::path& path);
ChannelFile LoadChannel(const std::filesystem::path& path);
QueryFile LoadQuery(const std::filesystem::path& path);

nlohmann::json ChannelToJson(const ChannelFile& file);

// Deterministic text form: object keys sorted, two-space indentation, arrays
// of scalars on one line, doubles with 17 significant digits (locale
// independent), and +/-infinity as the strings "+inf" / "-inf".
std::string CanonicalDump(const nlohmann::json& doc);

}  // namespace privchan

#endif  // PRIVCHAN_IO_H_
