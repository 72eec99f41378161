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

#include "privchan/io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "privchan/errors.h"

namespace privchan {
namespace {

using nlohmann::json;

std::string Pointer(const std::string& base, const std::string& key) {
  return base + "/" + key;
}
std::string Pointer(const std::string& base, std::size_t index) {
  return base + "/" + std::to_string(index);
}

void RejectUnknownKeys(const json& doc, const std::set<std::string>& allowed) {
  if (!doc.is_object()) throw SchemaError("", "document must be an object");
  for (const auto& [key, value] : doc.items()) {
    if (!allowed.contains(key)) {
      throw SchemaError(Pointer("", key), "unknown field");
    }
  }
}

const json& Required(const json& doc, const std::string& key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw SchemaError(Pointer("", key), "missing field");
  return *it;
}

std::size_t AsCount(const json& v, const std::string& where, bool positive) {
  if (!v.is_number_integer()) throw SchemaError(where, "expected an integer");
  if (v.is_number_unsigned()) {
    const auto u = v.get<std::uint64_t>();
    if (positive && u == 0) throw SchemaError(where, "must be positive");
    return static_cast<std::size_t>(u);
  }
  const auto s = v.get<std::int64_t>();
  if (s < 0 || (positive && s == 0)) {
    throw SchemaError(where, positive ? "must be positive" : "must be >= 0");
  }
  return static_cast<std::size_t>(s);
}

double AsReal(const json& v, const std::string& where) {
  if (!v.is_number()) throw SchemaError(where, "expected a number");
  return v.get<double>();
}

RecordUniverse ParseUniverse(const json& doc) {
  const json& u = Required(doc, "universes");
  if (!u.is_array()) throw SchemaError("/universes", "expected an array");
  if (u.empty()) throw SchemaError("/universes", "must not be empty");
  std::vector<std::size_t> sizes;
  for (std::size_t i = 0; i < u.size(); ++i) {
    sizes.push_back(AsCount(u[i], Pointer("/universes", i), true));
  }
  try {
    return RecordUniverse(std::move(sizes));
  } catch (const ValidationError& e) {
    throw SchemaError("/universes", e.what());
  }
}

Matrix ParseMatrix(const json& v, const std::string& where, std::size_t rows,
                   std::size_t cols) {
  if (!v.is_array()) throw SchemaError(where, "expected an array of rows");
  if (v.size() != rows) {
    throw SchemaError(where, "expected " + std::to_string(rows) +
                                 " rows, got " + std::to_string(v.size()));
  }
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string row_ptr = Pointer(where, r);
    if (!v[r].is_array()) throw SchemaError(row_ptr, "expected an array");
    if (v[r].size() != cols) {
      throw SchemaError(row_ptr, "expected " + std::to_string(cols) +
                                     " entries, got " +
                                     std::to_string(v[r].size()));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(r, c) = AsReal(v[r][c], Pointer(row_ptr, c));
    }
  }
  return m;
}

std::optional<std::string> OptionalString(const json& doc,
                                          const std::string& key) {
  auto it = doc.find(key);
  if (it == doc.end()) return std::nullopt;
  if (!it->is_string()) throw SchemaError(Pointer("", key), "expected a string");
  return it->get<std::string>();
}

void FormatDouble(std::string& out, double v) {
  if (std::isnan(v)) {
    out += "null";
    return;
  }
  if (std::isinf(v)) {
    out += v > 0 ? "\"+inf\"" : "\"-inf\"";
    return;
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v,
                           std::chars_format::general, 17);
  out.append(buf, res.ptr);
}

bool IsScalar(const json& v) { return !v.is_array() && !v.is_object(); }

void Emit(std::string& out, const json& v, int depth) {
  const std::string indent(2 * (depth + 1), ' ');
  const std::string close(2 * depth, ' ');
  switch (v.type()) {
    case json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : v.items()) {
        if (!first) out += ",\n";
        first = false;
        out += indent;
        out += json(key).dump();
        out += ": ";
        Emit(out, value, depth + 1);
      }
      out += "\n" + close + "}";
      return;
    }
    case json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      if (std::all_of(v.begin(), v.end(), IsScalar)) {
        out += "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (i) out += ", ";
          Emit(out, v[i], depth + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",\n";
        out += indent;
        Emit(out, v[i], depth + 1);
      }
      out += "\n" + close + "]";
      return;
    }
    case json::value_t::number_float:
      FormatDouble(out, v.get<double>());
      return;
    default:
      out += v.dump();
      return;
  }
}

}  // namespace

ChannelFile ParseChannel(const json& doc) {
  RejectUnknownKeys(doc, {"universes", "output_size", "matrix", "name", "unit"});
  RecordUniverse universe = ParseUniverse(doc);
  const std::size_t outputs =
      AsCount(Required(doc, "output_size"), "/output_size", true);
  Matrix m = ParseMatrix(Required(doc, "matrix"), "/matrix", outputs,
                         universe.size());
  const ValidationReport report = InspectColumns(m);
  if (!report.ok) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      for (std::size_t r = 0; r < m.rows(); ++r) {
        if (!(m(r, c) >= 0.0)) {
          throw SchemaError("/matrix/" + std::to_string(r) + "/" +
                                std::to_string(c),
                            "column " + std::to_string(c) +
                                " has a negative entry");
        }
      }
      if (report.column_sum_deviation[c] > kStochasticTolerance) {
        double total = 0.0;
        for (std::size_t r = 0; r < m.rows(); ++r) total += m(r, c);
        std::ostringstream msg;
        msg << "column " << c << " sums to " << total << ", not 1";
        throw SchemaError("/matrix", msg.str());
      }
    }
  }
  ChannelFile out{ChannelMatrix(std::move(universe), std::move(m)),
                  OptionalString(doc, "name"), OptionalString(doc, "unit")};
  if (out.unit && *out.unit != "nats" && *out.unit != "bits") {
    throw SchemaError("/unit", "expected \"nats\" or \"bits\"");
  }
  return out;
}

QueryFile ParseQuery(const json& doc) {
  RejectUnknownKeys(doc, {"universes", "output_size", "table", "distortion",
                          "values"});
  RecordUniverse universe = ParseUniverse(doc);
  const std::size_t outputs =
      AsCount(Required(doc, "output_size"), "/output_size", true);
  const json& t = Required(doc, "table");
  if (!t.is_array()) throw SchemaError("/table", "expected an array");
  if (t.size() != universe.size()) {
    throw SchemaError("/table", "expected " + std::to_string(universe.size()) +
                                    " entries, got " + std::to_string(t.size()));
  }
  std::vector<std::size_t> table;
  for (std::size_t x = 0; x < t.size(); ++x) {
    const std::size_t y = AsCount(t[x], Pointer("/table", x), false);
    if (y >= outputs) {
      throw SchemaError(Pointer("/table", x), "output index out of range");
    }
    table.push_back(y);
  }
  QueryFile out{QueryTable(universe, outputs, std::move(table)), std::nullopt,
                std::nullopt};
  if (auto it = doc.find("distortion"); it != doc.end()) {
    Matrix d = ParseMatrix(*it, "/distortion", outputs, outputs);
    try {
      out.distortion = DistortionTable(std::move(d));
    } catch (const ValidationError& e) {
      throw SchemaError("/distortion", e.what());
    }
  }
  if (auto it = doc.find("values"); it != doc.end()) {
    if (!it->is_array() || it->size() != universe.size()) {
      throw SchemaError("/values", "expected " +
                                       std::to_string(universe.size()) +
                                       " numbers");
    }
    std::vector<double> values;
    for (std::size_t x = 0; x < it->size(); ++x) {
      values.push_back(AsReal((*it)[x], Pointer("/values", x)));
    }
    out.values = std::move(values);
  }
  return out;
}

json ReadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("", "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError("", "malformed JSON in " + path.string() + ": " +
                              e.what());
  }
}

ChannelFile LoadChannel(const std::filesystem::path& path) {
  return ParseChannel(ReadJsonFile(path));
}

QueryFile LoadQuery(const std::filesystem::path& path) {
  return ParseQuery(ReadJsonFile(path));
}

json ChannelToJson(const ChannelFile& file) {
  const ChannelMatrix& ch = file.channel;
  json doc;
  doc["universes"] = ch.universe().sizes();
  doc["output_size"] = ch.output_size();
  json rows = json::array();
  for (std::size_t y = 0; y < ch.output_size(); ++y) {
    const auto row = ch.entries().row(y);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  doc["matrix"] = std::move(rows);
  if (file.name) doc["name"] = *file.name;
  if (file.unit) doc["unit"] = *file.unit;
  return doc;
}

std::string CanonicalDump(const json& doc) {
  std::string out;
  Emit(out, doc, 0);
  out += "\n";
  return out;
}

}  // namespace privchan
