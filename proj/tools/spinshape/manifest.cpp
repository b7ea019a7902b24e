// Copyright 2026 The Spinshape Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "spinshape/manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "spinshape/errors.hpp"

namespace spinshape::cli {

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::ostringstream hex;
  hex << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < length; ++i) hex << std::setw(2) << static_cast<int>(digest[i]);
  return hex.str();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("write failed for '" + path.string() + "'");
}

Json manifest_to_json(const RunManifest& m) {
  Json inputs = Json::array();
  for (const InputDigest& in : m.inputs) inputs.push_back({{"path", in.path}, {"sha256", in.sha256}});
  Json doc{{"command_line", m.command_line},
           {"config_sha256", m.config_sha256},
           {"seed", m.seed},
           {"version", m.version},
           {"wall_clock", m.wall_clock},
           {"inputs", inputs},
           {"payload_sha256", m.payload_sha256}};
  if (!m.output_path.empty()) doc["output_path"] = m.output_path;
  return doc;
}

RunManifest manifest_from_json(const Json& doc) {
  try {
    RunManifest m;
    m.command_line = doc.at("command_line").get<std::vector<std::string>>();
    m.config_sha256 = doc.at("config_sha256").get<std::string>();
    m.seed = doc.at("seed").get<std::uint64_t>();
    m.version = doc.at("version").get<std::string>();
    m.wall_clock = doc.at("wall_clock").get<std::string>();
    for (const Json& in : doc.at("inputs")) {
      m.inputs.push_back({in.at("path").get<std::string>(), in.at("sha256").get<std::string>()});
    }
    m.payload_sha256 = doc.at("payload_sha256").get<std::string>();
    m.output_path = doc.value("output_path", std::string());
    return m;
  } catch (const Json::exception& e) {
    throw DataError(std::string("malformed manifest: ") + e.what());
  }
}

std::string payload_digest(const Json& doc) {
  if (doc.is_object() && doc.contains("manifest")) {
    Json copy = doc;
    copy.erase("manifest");
    return sha256_hex(copy.dump());
  }
  return sha256_hex(doc.dump());
}

Json seal(Json payload, RunManifest manifest) {
  manifest.payload_sha256 = payload_digest(payload);
  payload["manifest"] = manifest_to_json(manifest);
  return payload;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::ostringstream out;
  out << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

namespace {

void check_inputs(const RunManifest& m, VerifyOutcome& outcome) {
  for (const InputDigest& in : m.inputs) {
    std::string bytes;
    try {
      bytes = read_file(in.path);
    } catch (const DataError&) {
      outcome.ok = false;
      outcome.problems.push_back("input '" + in.path + "' is missing");
      continue;
    }
    if (sha256_hex(bytes) != in.sha256) {
      outcome.ok = false;
      outcome.problems.push_back("input '" + in.path + "' digest mismatch");
    }
  }
}

}  // namespace

VerifyOutcome verify_document(const Json& doc) {
  VerifyOutcome outcome;
  if (!doc.is_object() || !doc.contains("manifest")) {
    return {false, {"no manifest"}};
  }
  const RunManifest m = manifest_from_json(doc.at("manifest"));
  if (payload_digest(doc) != m.payload_sha256) {
    outcome.ok = false;
    outcome.problems.push_back("payload digest mismatch");
  }
  check_inputs(m, outcome);
  return outcome;
}

std::filesystem::path sidecar_path(const std::filesystem::path& data_file) {
  return std::filesystem::path(data_file.string() + ".manifest.json");
}

VerifyOutcome verify_sidecar(const std::filesystem::path& data_file) {
  const std::filesystem::path side = sidecar_path(data_file);
  Json doc;
  try {
    doc = Json::parse(read_file(side));
  } catch (const Json::exception& e) {
    return {false, {"unreadable sidecar: " + std::string(e.what())}};
  } catch (const DataError&) {
    return {false, {"no sidecar manifest '" + side.string() + "'"}};
  }
  VerifyOutcome outcome;
  const RunManifest m = manifest_from_json(doc.contains("manifest") ? doc.at("manifest") : doc);
  if (sha256_hex(read_file(data_file)) != m.payload_sha256) {
    outcome.ok = false;
    outcome.problems.push_back("file digest mismatch");
  }
  check_inputs(m, outcome);
  return outcome;
}

Json load_document(const std::filesystem::path& path) {
  Json doc;
  try {
    doc = Json::parse(read_file(path));
  } catch (const Json::exception& e) {
    throw DataError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
  if (doc.is_object() && doc.contains("manifest")) {
    const RunManifest m = manifest_from_json(doc.at("manifest"));
    if (payload_digest(doc) != m.payload_sha256) {
      throw DataError("'" + path.string() + "' payload digest does not match its manifest");
    }
    doc.erase("manifest");
  }
  return doc;
}

}  // namespace spinshape::cli
