#include "imblab/model_io.hpp"

#include <fstream>
#include <ostream>

#include "imblab/errors.hpp"
#include "json.hpp"

namespace imblab {

namespace {

using nlohmann::json;

json model_envelope(const Classifier& model) {
  return {{"format", "imblab-model"},
          {"version", 1},
          {"kind", model.kind()},
          {"payload", model.to_json()}};
}

std::unique_ptr<Classifier> model_from_envelope(const json& j) {
  if (j.value("format", "") != "imblab-model" || j.value("version", 0) != 1) {
    throw DataError("not an imblab-model v1 artifact");
  }
  const std::string kind = j.at("kind").get<std::string>();
  const json& payload = j.at("payload");
  if (kind == "decision_tree") return DecisionTree::from_json(payload);
  if (kind == "knn") return KnnClassifier::from_json(payload);
  if (kind == "bernoulli_nb") return BernoulliNb::from_json(payload);
  if (kind == "pool") return PoolClassifier::from_json(payload);
  throw DataError("unknown model kind: " + kind);
}

}  // namespace

// defined here rather than pool.cpp so the envelope dispatch stays in one
// place
nlohmann::json PoolClassifier::to_json() const {
  json members = json::array();
  for (const auto& member : pool_.members) {
    members.push_back(model_envelope(*member));
  }
  return {{"base_kind", base_kind_name(pool_.base_kind)},
          {"balance", balance_mode_name(pool_.balance)},
          {"members", std::move(members)}};
}

std::unique_ptr<PoolClassifier> PoolClassifier::from_json(
    const nlohmann::json& j) {
  ClassifierPool pool;
  pool.base_kind = base_kind_from_name(j.at("base_kind").get<std::string>());
  pool.balance = balance_mode_from_name(j.at("balance").get<std::string>());
  for (const auto& m : j.at("members")) {
    pool.members.push_back(model_from_envelope(m));
  }
  pool.provenance.resize(pool.members.size());
  return std::make_unique<PoolClassifier>(std::move(pool));
}

void save_classifier(const Classifier& model, std::ostream& out) {
  out << model_envelope(model).dump(2) << "\n";
}

void save_classifier(const Classifier& model,
                     const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  save_classifier(model, out);
}

std::unique_ptr<Classifier> load_classifier(std::istream& in) {
  json j;
  in >> j;
  return model_from_envelope(j);
}

std::unique_ptr<Classifier> load_classifier(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return load_classifier(in);
}

void save_pool(const ClassifierPool& pool, const std::filesystem::path& path) {
  json members = json::array();
  json provenance = json::array();
  for (std::size_t i = 0; i < pool.members.size(); ++i) {
    members.push_back(model_envelope(*pool.members[i]));
    provenance.push_back({{"bootstrap_seed", pool.provenance[i].bootstrap_seed},
                          {"balanced", pool.provenance[i].balanced}});
  }
  const json j = {{"format", "imblab-pool"},
                  {"version", 1},
                  {"base_kind", base_kind_name(pool.base_kind)},
                  {"balance", balance_mode_name(pool.balance)},
                  {"n", pool.n()},
                  {"provenance", std::move(provenance)},
                  {"members", std::move(members)}};
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

ClassifierPool load_pool(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  json j;
  in >> j;
  if (j.value("format", "") != "imblab-pool" || j.value("version", 0) != 1) {
    throw DataError("not an imblab-pool v1 artifact: " + path.string());
  }
  ClassifierPool pool;
  pool.base_kind = base_kind_from_name(j.at("base_kind").get<std::string>());
  pool.balance = balance_mode_from_name(j.at("balance").get<std::string>());
  for (const auto& m : j.at("members")) {
    pool.members.push_back(model_from_envelope(m));
  }
  for (const auto& p : j.at("provenance")) {
    pool.provenance.push_back({p.at("bootstrap_seed").get<std::uint64_t>(),
                               p.at("balanced").get<bool>()});
  }
  if (pool.members.size() != pool.provenance.size() ||
      pool.n() != j.at("n").get<int>()) {
    throw DataError("inconsistent pool artifact: " + path.string());
  }
  return pool;
}

}  // namespace imblab
