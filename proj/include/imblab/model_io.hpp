#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>

#include "imblab/classifiers.hpp"
#include "imblab/pool.hpp"

namespace imblab {

/// Model artifact: a self-describing JSON envelope
/// {"format":"imblab-model","version":1,"kind":...,"payload":...}.
void save_classifier(const Classifier& model, std::ostream& out);
void save_classifier(const Classifier& model,
                     const std::filesystem::path& path);
std::unique_ptr<Classifier> load_classifier(std::istream& in);
std::unique_ptr<Classifier> load_classifier(const std::filesystem::path& path);

/// Pool artifact: header (base kind, size, seeds, balance mode) plus the
/// serialized members.
void save_pool(const ClassifierPool& pool, const std::filesystem::path& path);
ClassifierPool load_pool(const std::filesystem::path& path);

}  // namespace imblab
