#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace semsearch {

struct KbRow {
  std::string subject;
  std::string relation;
  std::string object;
  std::string sentence_id;

  friend bool operator==(const KbRow&, const KbRow&) = default;
};

/// (subject, relation, object, source sentence) facts, loaded from
/// `subject<TAB>relation<TAB>object<TAB>sentence_id` TSV. Text fields are
/// normalized on load.
class KnowledgeBase {
 public:
  KnowledgeBase() = default;
  explicit KnowledgeBase(std::vector<KbRow> rows) : rows_(std::move(rows)) {}

  static KnowledgeBase load(const std::filesystem::path& path);
  static KnowledgeBase parse(std::string_view contents, const std::string& source);

  /// Throws Error(kData) naming the first row whose sentence id is not in
  /// `sorted_ids`.
  void validate(const std::vector<std::string>& sorted_ids) const;

  const std::vector<KbRow>& rows() const noexcept { return rows_; }
  bool empty() const noexcept { return rows_.empty(); }
  std::string to_tsv() const;

 private:
  std::vector<KbRow> rows_;
};

}  // namespace semsearch
