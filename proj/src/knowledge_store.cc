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

#include "claims/knowledge_store.h"

#include <fcntl.h>
#include <openssl/evp.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace claims {
namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr char kManifest[] = "MANIFEST";
constexpr char kManifestTemp[] = "MANIFEST.tmp";
constexpr char kNewSuffix[] = ".new";

StoreError IoError(const std::string &what, const fs::path &path) {
  return StoreError(StoreError::Kind::kIo,
                    what + " " + path.string() + ": " + std::strerror(errno));
}

void FsyncPath(const fs::path &path, int flags) {
  int fd = ::open(path.c_str(), flags);
  if (fd < 0) throw IoError("open", path);
  int rc = ::fsync(fd);
  ::close(fd);
  if (rc != 0) throw IoError("fsync", path);
}

void WriteDurable(const fs::path &path, const std::string &bytes) {
  int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  if (fd < 0) throw IoError("open", path);
  size_t done = 0;
  while (done < bytes.size()) {
    ssize_t n = ::write(fd, bytes.data() + done, bytes.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      ::close(fd);
      throw IoError("write", path);
    }
    done += static_cast<size_t>(n);
  }
  if (::fsync(fd) != 0) {
    ::close(fd);
    throw IoError("fsync", path);
  }
  ::close(fd);
}

void RenameDurable(const fs::path &from, const fs::path &to) {
  if (std::rename(from.c_str(), to.c_str()) != 0) throw IoError("rename", from);
  FsyncPath(to.parent_path(), O_RDONLY | O_DIRECTORY);
}

std::optional<std::string> ReadFile(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

bool SafeKey(const std::string &s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' || c == '_';
  });
}

std::string BenchmarkPath(const std::string &doc_type, const std::string &subtype) {
  return "benchmarks/" + doc_type + "/" + subtype + ".json";
}

std::string AuditPath(uint64_t seq) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "audit/%08llu.json", static_cast<unsigned long long>(seq));
  return buf;
}

std::string ChainDigest(const std::string &prev, const ordered_json &payload) {
  return Sha256Hex(prev + "\n" + CanonicalJson(payload));
}

ordered_json RecordJson(const AuditRecord &r) {
  ordered_json j;
  j["seq"] = r.seq;
  j["prev"] = r.prev;
  j["digest"] = r.digest;
  j["payload"] = r.payload;
  return j;
}

// Exclusive or shared flock on the store's LOCK file, held for the object's
// lifetime.
class FileLock {
 public:
  FileLock(const fs::path &path, int op) {
    fd_ = ::open(path.c_str(), O_RDWR | O_CREAT, 0644);
    if (fd_ < 0) throw IoError("open", path);
    while (::flock(fd_, op) != 0) {
      if (errno != EINTR) {
        ::close(fd_);
        throw IoError("flock", path);
      }
    }
  }
  ~FileLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  FileLock(const FileLock &) = delete;
  FileLock &operator=(const FileLock &) = delete;

 private:
  int fd_ = -1;
};

}  // namespace

std::string Sha256Hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 15]);
  }
  return out;
}

std::string CanonicalJson(const ordered_json &j) { return j.dump(2) + "\n"; }

void Benchmark::Validate() const {
  auto fail = [&](const std::string &why) {
    return StoreError(StoreError::Kind::kInvalid, "benchmark " + id() + ": " + why);
  };
  if (!SafeKey(doc_type) || !SafeKey(subtype)) throw fail("keys must match [a-z0-9_-]+");
  if (lines.empty()) throw fail("no lines");
  for (size_t i = 0; i < lines.size(); ++i) {
    const BenchmarkLine &l = lines[i];
    std::string at = "line " + std::to_string(i + 1) + ": ";
    if (l.delta.fol.empty()) throw fail(at + "no clauses");
    if (l.max_quantity < Rational(0)) throw fail(at + "negative max_quantity");
    if (l.max_unit_price < 0) throw fail(at + "negative max_unit_price_minor");
  }
}

ordered_json Benchmark::ToJson() const {
  ordered_json j;
  j["doc_type"] = doc_type;
  j["subtype"] = subtype;
  j["source_doc"] = source_doc;
  j["lines"] = ordered_json::array();
  for (const BenchmarkLine &l : lines) {
    ordered_json lj;
    lj["text"] = l.text;
    lj["delta"] = l.delta.Serialize();
    lj["max_quantity"] = l.max_quantity.ToDecimalString();
    lj["max_unit_price_minor"] = l.max_unit_price;
    lj["source"] = l.source;
    j["lines"].push_back(std::move(lj));
  }
  return j;
}

Benchmark Benchmark::FromJson(const nlohmann::json &j) {
  try {
    Benchmark b;
    b.doc_type = j.at("doc_type").get<std::string>();
    b.subtype = j.at("subtype").get<std::string>();
    b.source_doc = j.value("source_doc", "");
    for (const auto &lj : j.at("lines")) {
      BenchmarkLine l;
      l.text = lj.at("text").get<std::string>();
      l.delta = DeltaSet::Parse(lj.at("delta").get<std::string>());
      l.max_quantity = Rational::Parse(lj.at("max_quantity").get<std::string>());
      l.max_unit_price = lj.at("max_unit_price_minor").get<int64_t>();
      l.source = lj.value("source", "");
      b.lines.push_back(std::move(l));
    }
    return b;
  } catch (const nlohmann::json::exception &e) {
    throw StoreError(StoreError::Kind::kInvalid, std::string("benchmark json: ") + e.what());
  } catch (const std::invalid_argument &e) {
    throw StoreError(StoreError::Kind::kInvalid, std::string("benchmark json: ") + e.what());
  }
}

KnowledgeStore::KnowledgeStore(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(root_ / "benchmarks", ec);
  fs::create_directories(root_ / "audit", ec);
  if (ec) throw StoreError(StoreError::Kind::kIo, "cannot create " + root_.string());
  Recover();
}

void KnowledgeStore::Fault(WritePoint point) const {
  if (fault_hook_) fault_hook_(point);
}

KnowledgeStore::Manifest KnowledgeStore::ReadManifest() const {
  Manifest m;
  std::optional<std::string> text = ReadFile(root_ / kManifest);
  if (!text) return m;
  std::istringstream in(*text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    size_t sep = line.find("  ");
    if (sep != 64 || line.size() <= sep + 2) {
      throw StoreError(StoreError::Kind::kCorrupt, "bad MANIFEST line: " + line);
    }
    m[line.substr(sep + 2)] = line.substr(0, sep);
  }
  return m;
}

void KnowledgeStore::WriteManifest(const Manifest &m) {
  std::string text;
  for (const auto &[path, digest] : m) text += digest + "  " + path + "\n";
  WriteDurable(root_ / kManifestTemp, text);
  Fault(WritePoint::kAfterManifestTemp);
  RenameDurable(root_ / kManifestTemp, root_ / kManifest);
}

void KnowledgeStore::Recover() {
  std::unique_lock guard(mu_);
  FileLock lock(root_ / "LOCK", LOCK_EX);
  std::error_code ec;
  fs::remove(root_ / kManifestTemp, ec);
  Manifest m = ReadManifest();
  for (const auto &[relative, digest] : m) {
    fs::path target = root_ / relative;
    fs::path pending = target;
    pending += kNewSuffix;
    std::optional<std::string> current = ReadFile(target);
    if (current && Sha256Hex(*current) == digest) continue;
    std::optional<std::string> staged = ReadFile(pending);
    if (staged && Sha256Hex(*staged) == digest) RenameDurable(pending, target);
  }
  // Anything still staged was never committed.
  for (const auto &entry : fs::recursive_directory_iterator(root_)) {
    if (entry.is_regular_file() && entry.path().extension() == kNewSuffix) {
      fs::remove(entry.path(), ec);
    }
  }
}

void KnowledgeStore::CommitFile(const std::string &relative, const std::string &bytes) {
  fs::path target = root_ / relative;
  fs::create_directories(target.parent_path());
  fs::path pending = target;
  pending += kNewSuffix;
  WriteDurable(pending, bytes);
  Fault(WritePoint::kAfterTempWrite);
  Manifest m = ReadManifest();
  m[relative] = Sha256Hex(bytes);
  WriteManifest(m);
  Fault(WritePoint::kAfterCommit);
  RenameDurable(pending, target);
  Fault(WritePoint::kAfterRename);
}

std::optional<std::string> KnowledgeStore::ReadCommitted(const Manifest &m,
                                                         const std::string &relative) const {
  auto it = m.find(relative);
  if (it == m.end()) return std::nullopt;
  fs::path target = root_ / relative;
  std::optional<std::string> bytes = ReadFile(target);
  if (bytes && Sha256Hex(*bytes) == it->second) return bytes;
  // A writer may sit between commit and the final rename.
  fs::path pending = target;
  pending += kNewSuffix;
  std::optional<std::string> staged = ReadFile(pending);
  if (staged && Sha256Hex(*staged) == it->second) return staged;
  throw StoreError(StoreError::Kind::kCorrupt, "digest mismatch for " + relative);
}

void KnowledgeStore::PutBenchmark(const Benchmark &b) {
  b.Validate();
  std::unique_lock guard(mu_);
  FileLock lock(root_ / "LOCK", LOCK_EX);
  std::string relative = BenchmarkPath(b.doc_type, b.subtype);
  if (ReadManifest().count(relative) != 0) {
    throw StoreError(StoreError::Kind::kDuplicate, "benchmark " + b.id() + " exists");
  }
  CommitFile(relative, CanonicalJson(b.ToJson()));
}

void KnowledgeStore::ReplaceBenchmark(const Benchmark &b) {
  b.Validate();
  std::unique_lock guard(mu_);
  FileLock lock(root_ / "LOCK", LOCK_EX);
  CommitFile(BenchmarkPath(b.doc_type, b.subtype), CanonicalJson(b.ToJson()));
}

std::optional<Benchmark> KnowledgeStore::GetBenchmark(const std::string &doc_type,
                                                      const std::string &subtype) const {
  if (!SafeKey(doc_type) || !SafeKey(subtype)) return std::nullopt;
  std::shared_lock guard(mu_);
  std::optional<std::string> bytes = ReadCommitted(ReadManifest(), BenchmarkPath(doc_type, subtype));
  if (!bytes) return std::nullopt;
  return Benchmark::FromJson(nlohmann::json::parse(*bytes));
}

std::vector<Benchmark> KnowledgeStore::Benchmarks() const {
  std::shared_lock guard(mu_);
  Manifest m = ReadManifest();
  std::vector<Benchmark> out;
  for (const auto &[relative, digest] : m) {
    if (relative.rfind("benchmarks/", 0) != 0) continue;
    std::optional<std::string> bytes = ReadCommitted(m, relative);
    if (bytes) out.push_back(Benchmark::FromJson(nlohmann::json::parse(*bytes)));
  }
  std::sort(out.begin(), out.end(),
            [](const Benchmark &a, const Benchmark &b) { return a.id() < b.id(); });
  return out;
}

uint64_t KnowledgeStore::AppendAudit(const ordered_json &payload) {
  std::unique_lock guard(mu_);
  FileLock lock(root_ / "LOCK", LOCK_EX);
  Manifest m = ReadManifest();
  uint64_t seq = 1;
  std::string prev = kGenesisDigest;
  // Manifest keys sort by zero-padded seq, so the last audit key is the head.
  for (auto it = m.rbegin(); it != m.rend(); ++it) {
    if (it->first.rfind("audit/", 0) != 0) continue;
    std::optional<std::string> bytes = ReadCommitted(m, it->first);
    ordered_json head = ordered_json::parse(*bytes);
    seq = head.at("seq").get<uint64_t>() + 1;
    prev = head.at("digest").get<std::string>();
    break;
  }
  AuditRecord r{seq, prev, ChainDigest(prev, payload), payload};
  CommitFile(AuditPath(seq), CanonicalJson(RecordJson(r)));
  return seq;
}

std::vector<AuditRecord> KnowledgeStore::AuditLog() const {
  std::shared_lock guard(mu_);
  Manifest m = ReadManifest();
  std::vector<AuditRecord> out;
  for (const auto &[relative, digest] : m) {
    if (relative.rfind("audit/", 0) != 0) continue;
    ordered_json j = ordered_json::parse(*ReadCommitted(m, relative));
    out.push_back({j.at("seq").get<uint64_t>(), j.at("prev").get<std::string>(),
                   j.at("digest").get<std::string>(), j.at("payload")});
  }
  return out;
}

bool KnowledgeStore::VerifyChain() const {
  std::shared_lock guard(mu_);
  try {
    Manifest m = ReadManifest();
    std::string prev = kGenesisDigest;
    uint64_t expected = 1;
    for (const auto &[relative, digest] : m) {
      if (relative.rfind("audit/", 0) != 0) continue;
      if (relative != AuditPath(expected)) return false;
      std::optional<std::string> bytes = ReadFile(root_ / relative);
      if (!bytes || Sha256Hex(*bytes) != digest) return false;
      ordered_json j = ordered_json::parse(*bytes);
      AuditRecord r{j.at("seq").get<uint64_t>(), j.at("prev").get<std::string>(),
                    j.at("digest").get<std::string>(), j.at("payload")};
      if (CanonicalJson(RecordJson(r)) != *bytes) return false;
      if (r.seq != expected || r.prev != prev) return false;
      if (ChainDigest(r.prev, r.payload) != r.digest) return false;
      prev = r.digest;
      ++expected;
    }
    // Audit files on disk that the manifest does not know about.
    size_t on_disk = 0;
    for (const auto &entry : fs::directory_iterator(root_ / "audit")) {
      if (entry.path().extension() == ".json") ++on_disk;
    }
    return on_disk == expected - 1;
  } catch (const std::exception &) {
    return false;
  }
}

}  // namespace claims
