#include <cmath>
#include <fstream>

#include "dw/tagger.hpp"
#include "dw/viterbi.hpp"

namespace dw::tagger {

namespace {

constexpr std::string_view kFormat = "dw-linear-chain-tagger";
constexpr int kFormatVersion = 1;

}  // namespace

TaggerModel::TaggerModel(TagSet tags) : tags_(std::move(tags)), transitions_(tags_.size() * tags_.size(), 0.0) {}

std::span<const double> TaggerModel::feature_weights(std::string_view feature) const {
  // heterogeneous lookup on unordered_map needs C++20 transparent hashing,
  // which libstdc++ 11 does not ship; copy the key instead
  auto it = index_.find(std::string(feature));
  if (it == index_.end()) return {};
  return {weights_.data() + static_cast<std::size_t>(it->second) * tags_.size(), tags_.size()};
}

void TaggerModel::set_feature_weights(const std::string& feature, std::span<const double> weights) {
  if (weights.size() != tags_.size()) throw TaggerError("feature '" + feature + "' has the wrong number of weights");
  auto [it, inserted] = index_.try_emplace(feature, static_cast<std::uint32_t>(names_.size()));
  if (inserted) {
    names_.push_back(feature);
    weights_.insert(weights_.end(), weights.begin(), weights.end());
  } else {
    std::copy(weights.begin(), weights.end(), weights_.begin() + static_cast<long>(it->second * tags_.size()));
  }
}

std::vector<double> TaggerModel::emissions(std::span<const std::string> tokens) const {
  const std::size_t nt = tags_.size();
  std::vector<double> em(tokens.size() * nt, 0.0);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    for (const auto& f : extract_features(tokens, i)) {
      auto w = feature_weights(f);
      for (std::size_t t = 0; t < w.size(); ++t) em[i * nt + t] += w[t];
    }
  }
  return em;
}

TagSequence TaggerModel::predict(std::span<const std::string> tokens) const {
  TagSequence out;
  out.tokens.assign(tokens.begin(), tokens.end());
  if (tokens.empty()) return out;
  const auto path = viterbi(emissions(tokens), transitions_, tags_.size());
  out.tags.reserve(path.size());
  for (auto t : path) out.tags.push_back(tags_.at(t));
  return out;
}

double TaggerModel::score(std::span<const std::string> tokens, std::span<const Tag> tags) const {
  if (tokens.size() != tags.size()) throw TaggerError("score: tokens and tags differ in length");
  std::vector<std::size_t> path;
  path.reserve(tags.size());
  for (Tag t : tags) {
    auto idx = tags_.index_of(t);
    if (!idx) throw TaggerError("score: tag " + std::string(to_string(t)) + " is not in the model's tag set");
    path.push_back(*idx);
  }
  return path_score(emissions(tokens), transitions_, tags_.size(), path);
}

nlohmann::json TaggerModel::to_json() const {
  nlohmann::json doc;
  doc["format"] = kFormat;
  doc["version"] = kFormatVersion;
  auto tags = nlohmann::json::array();
  for (Tag t : tags_.tags()) tags.push_back(to_string(t));
  doc["tags"] = tags;
  doc["meta"] = {{"seed", meta_.seed},
                 {"epochs", meta_.epochs},
                 {"feature_version", meta_.feature_version},
                 {"train_size", meta_.train_size},
                 {"epoch_accuracy", meta_.epoch_accuracy}};
  auto trans = nlohmann::json::array();
  for (std::size_t a = 0; a < tags_.size(); ++a) {
    auto row = nlohmann::json::array();
    for (std::size_t b = 0; b < tags_.size(); ++b) row.push_back(transition(a, b));
    trans.push_back(std::move(row));
  }
  doc["transitions"] = std::move(trans);
  // ordered object keeps the file stable across runs
  std::map<std::string, std::vector<double>> features;
  for (std::size_t f = 0; f < names_.size(); ++f) {
    features.emplace(names_[f], std::vector<double>(weights_.begin() + static_cast<long>(f * tags_.size()),
                                                    weights_.begin() + static_cast<long>((f + 1) * tags_.size())));
  }
  doc["features"] = features;
  return doc;
}

TaggerModel TaggerModel::from_json(const nlohmann::json& doc) {
  try {
    if (doc.at("format").get<std::string>() != kFormat) throw TaggerError("not a tagger model document");
    const int version = doc.at("version").get<int>();
    if (version != kFormatVersion) throw TaggerError("unsupported model version " + std::to_string(version));
    std::vector<Tag> tags;
    for (const auto& name : doc.at("tags")) {
      auto t = tag_from_string(name.get<std::string>());
      if (!t) throw TaggerError("model uses unknown tag '" + name.get<std::string>() + "'");
      tags.push_back(*t);
    }
    TaggerModel model{TagSet(tags)};
    if (model.tags_.size() != tags.size()) throw TaggerError("model tag list has duplicates");
    // tags are stored in TagSet order, so indices line up
    const auto& trans = doc.at("transitions");
    if (trans.size() != tags.size()) throw TaggerError("transition matrix has the wrong shape");
    for (std::size_t a = 0; a < tags.size(); ++a) {
      if (trans[a].size() != tags.size()) throw TaggerError("transition matrix has the wrong shape");
      for (std::size_t b = 0; b < tags.size(); ++b) model.set_transition(a, b, trans[a][b].get<double>());
    }
    for (const auto& [key, w] : doc.at("features").items()) {
      model.set_feature_weights(key, w.get<std::vector<double>>());
    }
    const auto& m = doc.at("meta");
    TrainingMeta meta;
    meta.seed = m.at("seed").get<std::uint64_t>();
    meta.epochs = m.at("epochs").get<int>();
    meta.feature_version = m.at("feature_version").get<int>();
    meta.train_size = m.value("train_size", std::size_t{0});
    meta.epoch_accuracy = m.value("epoch_accuracy", std::vector<double>{});
    if (meta.feature_version != kFeatureTemplateVersion) {
      throw TaggerError("model was trained with feature templates v" + std::to_string(meta.feature_version) +
                        ", this build extracts v" + std::to_string(kFeatureTemplateVersion));
    }
    model.meta_ = std::move(meta);
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw TaggerError(std::string("malformed model document: ") + e.what());
  }
}

void TaggerModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw TaggerError("cannot write model to " + path.string());
  out << to_json().dump() << '\n';
  if (!out) throw TaggerError("failed writing model to " + path.string());
}

TaggerModel TaggerModel::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw TaggerError("cannot open model " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw TaggerError("model " + path.string() + " is not valid JSON: " + e.what());
  }
  return from_json(doc);
}

bool TaggerModel::operator==(const TaggerModel& o) const {
  if (!(tags_ == o.tags_) || transitions_ != o.transitions_ || names_.size() != o.names_.size() ||
      !(meta_ == o.meta_)) {
    return false;
  }
  for (std::size_t f = 0; f < names_.size(); ++f) {
    auto other = o.feature_weights(names_[f]);
    if (other.size() != tags_.size()) return false;
    for (std::size_t t = 0; t < tags_.size(); ++t) {
      if (weights_[f * tags_.size() + t] != other[t]) return false;
    }
  }
  return true;
}

}  // namespace dw::tagger
