#include "semsearch/knowledge_base.hpp"

#include <algorithm>

#include "io_util.hpp"
#include "semsearch/error.hpp"
#include "semsearch/text.hpp"

namespace semsearch {

KnowledgeBase KnowledgeBase::load(const std::filesystem::path& path) {
  return parse(detail::read_file(path), path.string());
}

KnowledgeBase KnowledgeBase::parse(std::string_view contents, const std::string& source) {
  std::vector<KbRow> rows;
  detail::for_each_line(contents, [&](std::size_t line_no, std::string_view line) {
    if (detail::is_comment_or_blank(line)) return;
    const auto fields = detail::split(line, '\t');
    const std::string where = source + ":" + std::to_string(line_no) + ": ";
    if (fields.size() != 4) {
      throw Error(ErrorCode::kParse,
                  where + "expected subject<TAB>relation<TAB>object<TAB>sentence_id");
    }
    KbRow row{normalize(fields[0]), normalize(fields[1]), normalize(fields[2]),
              std::string(detail::trim(fields[3]))};
    if (row.subject.empty() || row.relation.empty() || row.object.empty() ||
        row.sentence_id.empty()) {
      throw Error(ErrorCode::kParse, where + "empty field");
    }
    rows.push_back(std::move(row));
  });
  return KnowledgeBase(std::move(rows));
}

void KnowledgeBase::validate(const std::vector<std::string>& sorted_ids) const {
  for (const auto& row : rows_) {
    if (!std::binary_search(sorted_ids.begin(), sorted_ids.end(), row.sentence_id)) {
      throw Error(ErrorCode::kData, "knowledge base row (" + row.subject + ", " + row.relation +
                                        ") cites unknown sentence '" + row.sentence_id + "'");
    }
  }
}

std::string KnowledgeBase::to_tsv() const {
  std::string out;
  for (const auto& r : rows_) {
    out += r.subject + '\t' + r.relation + '\t' + r.object + '\t' + r.sentence_id + '\n';
  }
  return out;
}

}  // namespace semsearch
