#include "semsearch/corpus.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "io_util.hpp"
#include "json.hpp"
#include "semsearch/error.hpp"

namespace semsearch {

using nlohmann::json;

std::vector<CorpusRecord> parse_corpus_jsonl(std::string_view contents, const std::string& source) {
  std::vector<CorpusRecord> out;
  detail::for_each_line(contents, [&](std::size_t line_no, std::string_view line) {
    if (detail::trim(line).empty()) return;
    const std::string where = source + ":" + std::to_string(line_no) + ": ";
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::kParse, where + "invalid JSON (" + e.what() + ")");
    }
    if (!obj.is_object()) throw Error(ErrorCode::kParse, where + "record is not an object");
    auto field = [&](const char* name) -> const json& {
      const auto it = obj.find(name);
      if (it == obj.end()) throw Error(ErrorCode::kParse, where + "missing \"" + name + "\"");
      return *it;
    };
    CorpusRecord rec;
    const json& id = field("id");
    if (id.is_string()) {
      rec.id = id.get<std::string>();
    } else if (id.is_number_integer()) {
      rec.id = std::to_string(id.get<long long>());
    } else {
      throw Error(ErrorCode::kParse, where + "\"id\" must be a string or integer");
    }
    if (rec.id.empty()) throw Error(ErrorCode::kParse, where + "empty \"id\"");
    const json& path = field("category_path");
    if (!path.is_array() || path.empty()) {
      throw Error(ErrorCode::kParse, where + "\"category_path\" must be a non-empty array");
    }
    for (const json& seg : path) {
      if (!seg.is_string() || seg.get<std::string>().empty()) {
        throw Error(ErrorCode::kParse, where + "\"category_path\" entries must be non-empty strings");
      }
      rec.category_path.push_back(seg.get<std::string>());
    }
    const json& text = field("text");
    if (!text.is_string()) throw Error(ErrorCode::kParse, where + "\"text\" must be a string");
    rec.text = text.get<std::string>();
    if (detail::trim(rec.text).empty()) throw Error(ErrorCode::kParse, where + "empty \"text\"");
    out.push_back(std::move(rec));
  });
  return out;
}

std::vector<CorpusRecord> read_corpus_directory(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) throw Error(ErrorCode::kIo, root.string() + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<CorpusRecord> out;
  for (const auto& file : files) {
    const fs::path rel = fs::relative(file, root);
    CategoryPath path;
    for (const auto& part : rel.parent_path()) path.push_back(part.string());
    if (path.empty()) {
      throw Error(ErrorCode::kData, file.string() + ": sentence files must sit inside a category directory");
    }
    const std::string contents = detail::read_file(file);
    detail::for_each_line(contents, [&](std::size_t line_no, std::string_view line) {
      if (detail::trim(line).empty()) return;
      char num[16];
      std::snprintf(num, sizeof num, "%06zu", line_no);
      out.push_back({rel.generic_string() + ":" + num, path, std::string(line)});
    });
  }
  return out;
}

std::vector<CorpusRecord> read_corpus(const std::filesystem::path& source) {
  if (std::filesystem::is_directory(source)) return read_corpus_directory(source);
  return parse_corpus_jsonl(detail::read_file(source), source.string());
}

std::string to_jsonl(const std::vector<CorpusRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    json obj = json::object();
    obj["id"] = r.id;
    obj["category_path"] = r.category_path;
    obj["text"] = r.text;
    out += obj.dump();
    out += '\n';
  }
  return out;
}

CategoryTree build_category_tree(std::vector<CorpusRecord>& records) {
  if (records.empty()) throw Error(ErrorCode::kData, "empty corpus");
  std::sort(records.begin(), records.end(),
            [](const CorpusRecord& a, const CorpusRecord& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i - 1].id == records[i].id) {
      throw Error(ErrorCode::kData, "duplicate sentence id '" + records[i].id + "'");
    }
  }
  CategoryTree tree;
  for (const auto& r : records) tree.add_path(r.category_path);
  for (const auto& r : records) tree.add_sentence(r.category_path, r.id);
  return tree;
}

}  // namespace semsearch
