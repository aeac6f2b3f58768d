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

#include "claims/lexicon.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace claims {

struct Lexicon::Data {
  std::vector<Lexeme> lexemes;
  // Lowercased surface form -> (lexeme index, features).
  std::unordered_map<std::string, std::vector<std::pair<size_t, FeatureSet>>>
      forms;
  // Multi-word forms split into words, keyed by first word.
  std::unordered_map<std::string, std::vector<std::vector<std::string>>>
      multiword;
  // Single-word surface keys and words of multi-word forms, sorted.
  std::vector<std::string> correction_keys;
};

namespace {

std::string Trim(std::string_view s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> Split(std::string_view s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(std::string(s.substr(start)));
      return out;
    }
    out.push_back(std::string(s.substr(start, pos - start)));
    start = pos + 1;
  }
}

std::vector<std::string> Words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

WordClass ParseWordClass(const std::string &s, int line) {
  static const std::map<std::string, WordClass> kClasses = {
      {"NOUN", WordClass::kNoun}, {"PROPER_NOUN", WordClass::kProperNoun},
      {"VERB", WordClass::kVerb}, {"ADJ", WordClass::kAdj},
      {"DET", WordClass::kDet},   {"PREP", WordClass::kPrep},
      {"PRON", WordClass::kPron}, {"NEG", WordClass::kNeg},
      {"ADV", WordClass::kAdv},   {"AUX", WordClass::kAux},
      {"CONJ", WordClass::kConj}, {"POSS", WordClass::kPoss},
  };
  auto it = kClasses.find(s);
  if (it == kClasses.end()) throw LexiconError("unknown word class '" + s + "'", line);
  return it->second;
}

bool ParseBool(const std::string &v, int line) {
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw LexiconError("bad boolean '" + v + "'", line);
}

FeatureSet ParseFeatures(const std::string &spec, int line) {
  FeatureSet fs;
  if (Trim(spec).empty()) return fs;
  for (const std::string &item : Split(spec, ',')) {
    std::string kv = Trim(item);
    if (kv.empty()) continue;
    size_t eq = kv.find('=');
    if (eq == std::string::npos) throw LexiconError("feature without '=': " + kv, line);
    std::string key = kv.substr(0, eq);
    std::string value = kv.substr(eq + 1);
    if (key == "tense") {
      if (value == "PRESENT") {
        fs.tense = Tense::kPresent;
      } else if (value == "PAST") {
        fs.tense = Tense::kPast;
      } else if (value == "FUTURE") {
        fs.tense = Tense::kFuture;
      } else if (value == "NONE") {
        fs.tense = Tense::kNone;
      } else {
        throw LexiconError("bad tense '" + value + "'", line);
      }
    } else if (key == "number") {
      if (value == "SG") {
        fs.number = Number::kSingular;
      } else if (value == "PL") {
        fs.number = Number::kPlural;
      } else if (value == "NONE") {
        fs.number = Number::kNone;
      } else {
        throw LexiconError("bad number '" + value + "'", line);
      }
    } else if (key == "person") {
      if (value != "1" && value != "2" && value != "3") {
        throw LexiconError("bad person '" + value + "'", line);
      }
      fs.person = value[0] - '0';
    } else if (key == "aspect") {
      if (value == "PROG") {
        fs.aspect = Aspect::kProgressive;
      } else if (value == "SIMPLE") {
        fs.aspect = Aspect::kSimple;
      } else {
        throw LexiconError("bad aspect '" + value + "'", line);
      }
    } else {
      throw LexiconError("unknown form feature '" + key + "'", line);
    }
  }
  return fs;
}

Lexeme ParseLine(const std::string &raw, int line) {
  std::vector<std::string> fields = Split(raw, '|');
  if (fields.size() != 4) {
    throw LexiconError("expected 4 '|'-separated fields, got " +
                           std::to_string(fields.size()),
                       line);
  }
  Lexeme lx;
  lx.lemma = Trim(fields[0]);
  if (lx.lemma.empty()) throw LexiconError("empty lemma", line);
  lx.word_class = ParseWordClass(Trim(fields[1]), line);
  if (lx.word_class != WordClass::kProperNoun && ToLower(lx.lemma) != lx.lemma) {
    throw LexiconError("lemma of a common word must be lowercase: " + lx.lemma,
                       line);
  }

  VerbFeatures vf;
  bool has_verb_keys = false;
  for (const std::string &item : Split(fields[2], ',')) {
    std::string kv = Trim(item);
    if (kv.empty()) continue;
    size_t eq = kv.find('=');
    if (eq == std::string::npos) throw LexiconError("feature without '=': " + kv, line);
    std::string key = kv.substr(0, eq);
    std::string value = kv.substr(eq + 1);
    if (key == "trans") {
      has_verb_keys = true;
      if (value == "INTRANSITIVE") {
        vf.transitivity = Transitivity::kIntransitive;
      } else if (value == "TRANSITIVE") {
        vf.transitivity = Transitivity::kTransitive;
      } else if (value == "DITRANSITIVE") {
        vf.transitivity = Transitivity::kDitransitive;
      } else {
        throw LexiconError("bad transitivity '" + value + "'", line);
      }
    } else if (key == "intensional") {
      has_verb_keys = true;
      vf.intensional_capable = ParseBool(value, line);
    } else if (key == "presence") {
      has_verb_keys = true;
      vf.presence_inducing = ParseBool(value, line);
    } else if (key == "prep") {
      has_verb_keys = true;
      vf.preposition = value;
    } else if (key == "pred") {
      lx.attributes["pred"] = value;
      vf.predicate = value;
    } else {
      lx.attributes[key] = value;
    }
  }
  if (lx.word_class == WordClass::kVerb) {
    if (vf.predicate.empty()) vf.predicate = lx.lemma;
    if (vf.intensional_capable && vf.transitivity == Transitivity::kIntransitive) {
      throw LexiconError("intensional verb must be transitive: " + lx.lemma, line);
    }
    lx.verb_features = vf;
  } else if (has_verb_keys) {
    throw LexiconError("verb features on non-verb " + lx.lemma, line);
  }

  for (const std::string &item : Split(fields[3], ';')) {
    std::string spec = Trim(item);
    if (spec.empty()) continue;
    size_t colon = spec.find(':');
    std::string form = Trim(spec.substr(0, colon));
    FeatureSet fs;
    if (colon != std::string::npos) fs = ParseFeatures(spec.substr(colon + 1), line);
    if (form.empty()) throw LexiconError("empty surface form", line);
    if (fs.tense != Tense::kNone && lx.word_class != WordClass::kVerb &&
        lx.word_class != WordClass::kAux) {
      throw LexiconError("tense on non-verb form '" + form + "'", line);
    }
    if (lx.verb_features && fs.tense != Tense::kNone) {
      lx.verb_features->tense_forms.emplace(fs.tense, form);
    }
    lx.surface_forms.push_back({form, fs});
  }
  if (lx.surface_forms.empty()) throw LexiconError("no surface forms for " + lx.lemma, line);
  return lx;
}

}  // namespace

std::string ToLower(std::string_view s) {
  std::string out(s);
  for (char &c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

const char *WordClassName(WordClass c) {
  switch (c) {
    case WordClass::kNoun: return "NOUN";
    case WordClass::kProperNoun: return "PROPER_NOUN";
    case WordClass::kVerb: return "VERB";
    case WordClass::kAdj: return "ADJ";
    case WordClass::kDet: return "DET";
    case WordClass::kPrep: return "PREP";
    case WordClass::kPron: return "PRON";
    case WordClass::kNeg: return "NEG";
    case WordClass::kAdv: return "ADV";
    case WordClass::kAux: return "AUX";
    case WordClass::kConj: return "CONJ";
    case WordClass::kPoss: return "POSS";
  }
  return "?";
}

const char *TenseName(Tense t) {
  switch (t) {
    case Tense::kNone: return "NONE";
    case Tense::kPresent: return "PRESENT";
    case Tense::kPast: return "PAST";
    case Tense::kFuture: return "FUTURE";
  }
  return "?";
}

const std::string &Lexeme::Attribute(const std::string &key) const {
  static const std::string kEmpty;
  auto it = attributes.find(key);
  return it == attributes.end() ? kEmpty : it->second;
}

std::string Lexeme::PredicateName() const {
  if (verb_features) return verb_features->predicate;
  const std::string &pred = Attribute("pred");
  if (!pred.empty()) return pred;
  return ToLower(lemma);
}

int EditDistance(std::string_view a, std::string_view b) {
  std::vector<int> prev(b.size() + 1);
  std::vector<int> cur(b.size() + 1);
  for (size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
  for (size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (size_t j = 1; j <= b.size(); ++j) {
      int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

Lexicon::Lexicon() : data_(std::make_shared<const Data>()) {}

Lexicon Lexicon::Load(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw LexiconError("cannot open lexicon file " + path, 0);
  std::stringstream buf;
  buf << in.rdbuf();
  return Parse(buf.str());
}

Lexicon Lexicon::Parse(std::string_view text) {
  auto data = std::make_shared<Data>();
  std::map<std::pair<std::string, WordClass>, int> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.resize(hash);
    if (Trim(raw).empty()) continue;
    Lexeme lx = ParseLine(raw, line);
    auto key = std::make_pair(lx.lemma, lx.word_class);
    if (seen.count(key)) {
      throw LexiconError("duplicate entry " + lx.lemma + "|" +
                             WordClassName(lx.word_class) + " (first on line " +
                             std::to_string(seen[key]) + ")",
                         line);
    }
    seen[key] = line;
    data->lexemes.push_back(std::move(lx));
  }

  std::set<std::string> keys;
  for (size_t i = 0; i < data->lexemes.size(); ++i) {
    for (const SurfaceForm &sf : data->lexemes[i].surface_forms) {
      std::string key = ToLower(sf.form);
      data->forms[key].emplace_back(i, sf.features);
      std::vector<std::string> words = Words(key);
      if (words.size() > 1) {
        keys.insert(words.begin(), words.end());
        auto &list = data->multiword[words[0]];
        if (std::find(list.begin(), list.end(), words) == list.end()) {
          list.push_back(words);
        }
      } else {
        keys.insert(key);
      }
    }
  }
  data->correction_keys.assign(keys.begin(), keys.end());
  return Lexicon(std::move(data));
}

std::vector<MorphAnalysis> Lexicon::Analyze(std::string_view surface) const {
  std::vector<MorphAnalysis> out;
  auto it = data_->forms.find(ToLower(surface));
  if (it == data_->forms.end()) return out;
  for (const auto &[index, features] : it->second) {
    out.push_back({&data_->lexemes[index], features});
  }
  return out;
}

CorrectionResult Lexicon::Correct(std::string_view token, int max_edit) const {
  if (max_edit < 0) throw std::invalid_argument("max_edit must be >= 0");
  std::string key = ToLower(token);
  if (data_->forms.count(key) || std::binary_search(data_->correction_keys.begin(),
                                                    data_->correction_keys.end(), key)) {
    return CorrectionResult::Original(std::string(token));
  }
  int best = max_edit + 1;
  const std::string *best_form = nullptr;
  bool tie = false;
  for (const std::string &candidate : data_->correction_keys) {
    int length_gap = std::abs(static_cast<int>(candidate.size()) -
                              static_cast<int>(key.size()));
    if (length_gap > best) continue;
    int d = EditDistance(key, candidate);
    if (d < best) {
      best = d;
      best_form = &candidate;
      tie = false;
    } else if (d == best && best_form != nullptr) {
      tie = true;
    }
  }
  if (best_form == nullptr || tie || best > max_edit) return CorrectionResult::Unknown();
  return CorrectionResult::Corrected(*best_form, best);
}

size_t Lexicon::MatchMultiword(std::span<const std::string> tokens) const {
  if (tokens.empty()) return 0;
  auto it = data_->multiword.find(ToLower(tokens[0]));
  if (it == data_->multiword.end()) return 0;
  size_t best = 0;
  for (const auto &words : it->second) {
    if (words.size() > tokens.size() || words.size() <= best) continue;
    bool match = true;
    for (size_t i = 1; i < words.size(); ++i) {
      if (ToLower(tokens[i]) != words[i]) {
        match = false;
        break;
      }
    }
    if (match) best = words.size();
  }
  return best;
}

const Lexeme *Lexicon::Find(std::string_view lemma, WordClass word_class) const {
  for (const Lexeme &lx : data_->lexemes) {
    if (lx.lemma == lemma && lx.word_class == word_class) return &lx;
  }
  return nullptr;
}

size_t Lexicon::size() const { return data_->lexemes.size(); }

const std::vector<Lexeme> &Lexicon::lexemes() const { return data_->lexemes; }

}  // namespace claims
