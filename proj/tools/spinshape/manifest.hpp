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

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "spinshape/io.hpp"

namespace spinshape::cli {

std::string sha256_hex(std::string_view bytes);

// Whole file as bytes; DataError when it cannot be read.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

struct InputDigest {
  std::string path;
  std::string sha256;
};

struct RunManifest {
  std::vector<std::string> command_line;
  std::string config_sha256;
  std::uint64_t seed = 0;
  std::string version;
  std::string wall_clock;
  std::vector<InputDigest> inputs;
  // Digest of the payload (JSON outputs) or of the file bytes (CSV sidecars).
  std::string payload_sha256;
  // Set only for sidecar manifests.
  std::string output_path;
};

Json manifest_to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const Json& doc);

// Canonical digest of a document with any "manifest" member removed.
std::string payload_digest(const Json& doc);

// Payload plus a "manifest" member whose payload digest is filled in.
Json seal(Json payload, RunManifest manifest);

std::string utc_timestamp();

struct VerifyOutcome {
  bool ok = true;
  std::vector<std::string> problems;
};

// Checks the embedded payload digest and every recorded input digest.
VerifyOutcome verify_document(const Json& doc);
// Checks a CSV file against its "<file>.manifest.json" sidecar.
VerifyOutcome verify_sidecar(const std::filesystem::path& data_file);

// Parses a JSON file and checks the embedded payload digest when a manifest
// is present. Returns the payload without the manifest.
Json load_document(const std::filesystem::path& path);

std::filesystem::path sidecar_path(const std::filesystem::path& data_file);

}  // namespace spinshape::cli
