// Copyright 2026 The Claims Validation Authors.
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

// File-backed claims knowledge base: benchmarks and a hash-chained audit log.
//
// On-disk layout under the root directory:
//
//   MANIFEST                          committed files and their digests
//   benchmarks/<type>/<subtype>.json
//   audit/<8-digit seq>.json
//   LOCK                              flock target for writers
//
// A file is visible only once MANIFEST lists it. Writes go to `<file>.new`,
// then MANIFEST is replaced by rename (the commit point), then `<file>.new`
// is renamed into place. Opening the store finishes or discards any write
// that was interrupted.

#ifndef CLAIMS_KNOWLEDGE_STORE_H_
#define CLAIMS_KNOWLEDGE_STORE_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "claims/clause.h"
#include "claims/rational.h"
#include "json.hpp"

namespace claims {

class StoreError : public std::runtime_error {
 public:
  enum class Kind { kDuplicate, kNotFound, kInvalid, kIo, kCorrupt };

  StoreError(Kind kind, const std::string &message)
      : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Lowercase hex SHA-256.
std::string Sha256Hex(std::string_view data);

struct BenchmarkLine {
  std::string text;
  DeltaSet delta;
  Rational max_quantity;
  int64_t max_unit_price = 0;  // minor units
  // Excerpt of the standard document that covers this line.
  std::string source;

  bool operator==(const BenchmarkLine &) const = default;
};

struct Benchmark {
  std::string doc_type;
  std::string subtype;
  // Title of the standard document the benchmark is taken from.
  std::string source_doc;
  std::vector<BenchmarkLine> lines;

  // "<doc_type>/<subtype>".
  std::string id() const { return doc_type + "/" + subtype; }

  // Throws StoreError(kInvalid) for empty or path-unsafe keys, no lines,
  // negative limits or a line without clauses.
  void Validate() const;

  nlohmann::ordered_json ToJson() const;
  static Benchmark FromJson(const nlohmann::json &j);

  bool operator==(const Benchmark &) const = default;
};

struct AuditRecord {
  uint64_t seq = 0;
  std::string prev;    // digest of the previous record, or 64 zeros
  std::string digest;  // SHA-256 over prev and the serialized payload
  nlohmann::ordered_json payload;
};

// Genesis value of the audit chain.
inline const std::string kGenesisDigest(64, '0');

// Points at which a write can be interrupted by a fault hook.
enum class WritePoint {
  kAfterTempWrite,      // <file>.new is durable, MANIFEST untouched
  kAfterManifestTemp,   // MANIFEST.tmp is durable, not yet renamed
  kAfterCommit,         // MANIFEST renamed, <file>.new not yet renamed
  kAfterRename,         // write complete
};

class KnowledgeStore {
 public:
  // Opens (creating if needed) the store at `root` and recovers any
  // interrupted write.
  explicit KnowledgeStore(std::filesystem::path root);

  KnowledgeStore(const KnowledgeStore &) = delete;
  KnowledgeStore &operator=(const KnowledgeStore &) = delete;

  const std::filesystem::path &root() const { return root_; }

  // Throws StoreError(kDuplicate) if the key exists.
  void PutBenchmark(const Benchmark &b);
  // Inserts or overwrites.
  void ReplaceBenchmark(const Benchmark &b);
  std::optional<Benchmark> GetBenchmark(const std::string &doc_type,
                                        const std::string &subtype) const;
  // All committed benchmarks ordered by id.
  std::vector<Benchmark> Benchmarks() const;

  // Appends a record chained to the current head; returns its seq (from 1).
  uint64_t AppendAudit(const nlohmann::ordered_json &payload);
  std::vector<AuditRecord> AuditLog() const;
  // Checks every committed audit file against its manifest digest, its
  // canonical serialization and the hash chain. An empty log passes.
  bool VerifyChain() const;

  // Test hook called at each write point; throwing from it simulates a crash.
  void SetFaultHook(std::function<void(WritePoint)> hook) { fault_hook_ = std::move(hook); }

 private:
  // relative path -> digest of the committed bytes
  using Manifest = std::map<std::string, std::string>;

  Manifest ReadManifest() const;
  void WriteManifest(const Manifest &m);
  void Recover();
  void CommitFile(const std::string &relative, const std::string &bytes);
  std::optional<std::string> ReadCommitted(const Manifest &m, const std::string &relative) const;
  void Fault(WritePoint point) const;

  std::filesystem::path root_;
  std::function<void(WritePoint)> fault_hook_;
  // Guards this process's view; the LOCK file serializes writers across
  // processes.
  mutable std::shared_mutex mu_;
};

// Canonical text of a JSON document: two-space indentation and a trailing
// newline.
std::string CanonicalJson(const nlohmann::ordered_json &j);

}  // namespace claims

#endif  // CLAIMS_KNOWLEDGE_STORE_H_
