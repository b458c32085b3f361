#include <fstream>
#include <sstream>
#include <unordered_set>

#include "outfit/dataset.hpp"
#include "outfit/error.hpp"

namespace fs = std::filesystem;

namespace outfit {
namespace {

constexpr std::string_view kHeaderPrefix = "# outfit-manifest role=";

std::vector<std::string_view> split_tabs(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find('\t', start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string at(const fs::path& file, std::size_t line) {
  return file.string() + ":" + std::to_string(line) + ": ";
}

}  // namespace

std::string_view to_string(ManifestRole role) {
  switch (role) {
    case ManifestRole::Tuples: return "tuples";
    case ManifestRole::Inventory: return "inventory";
    case ManifestRole::Queries: return "queries";
  }
  return "?";
}

ManifestRole parse_manifest_role(std::string_view text) {
  if (text == "tuples") return ManifestRole::Tuples;
  if (text == "inventory") return ManifestRole::Inventory;
  if (text == "queries") return ManifestRole::Queries;
  throw Error(ErrorCode::ParseError, "unknown manifest role: " + std::string(text));
}

DatasetManifest load_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open manifest: " + path.string());

  DatasetManifest m;
  m.source = path;
  const fs::path base = path.parent_path();
  bool have_header = false;
  std::unordered_set<std::string> ids;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!have_header) {
      if (!line.starts_with(kHeaderPrefix))
        throw Error(ErrorCode::ParseError, at(path, line_no) + "missing '# outfit-manifest role=...' header");
      m.role = parse_manifest_role(line.substr(kHeaderPrefix.size()));
      have_header = true;
      continue;
    }
    if (line.front() == '#') continue;

    const auto cols = split_tabs(line);
    const std::size_t fixed_cols = m.role == ManifestRole::Tuples ? 4 : 3;
    if (cols.size() < fixed_cols || cols.size() > fixed_cols + 1)
      throw Error(ErrorCode::ParseError, at(path, line_no) + "expected " + std::to_string(fixed_cols) + " or " +
                                             std::to_string(fixed_cols + 1) + " fields, got " +
                                             std::to_string(cols.size()));
    ManifestRecord rec;
    rec.line = line_no;
    rec.id = cols[0];
    rec.path = cols[1];
    if (rec.id.empty() || rec.path.empty())
      throw Error(ErrorCode::ParseError, at(path, line_no) + "empty id or path");
    if (cols[2] != "-") {
      try {
        rec.label = parse_pattern_label(cols[2]);
      } catch (const Error& e) {
        throw Error(ErrorCode::ParseError, at(path, line_no) + "record " + rec.id + ": " + e.what());
      }
    }
    if (m.role == ManifestRole::Tuples) {
      rec.top_item_id = cols[3];
      if (rec.top_item_id.empty() || rec.top_item_id == "-")
        throw Error(ErrorCode::ParseError, at(path, line_no) + "tuple " + rec.id + " has no top_item_id");
    }
    if (cols.size() == fixed_cols + 1 && cols.back() != "-") {
      try {
        rec.feature = histogram_from_text(cols.back());
      } catch (const Error& e) {
        throw Error(ErrorCode::ParseError, at(path, line_no) + "record " + rec.id + ": " + e.what());
      }
    }
    if (!ids.insert(rec.id).second)
      throw Error(ErrorCode::DuplicateId, at(path, line_no) + "duplicate id " + rec.id);
    const fs::path p(rec.path);
    rec.resolved_path = (p.is_absolute() ? p : base / p).string();
    if (!fs::exists(rec.resolved_path))
      throw Error(ErrorCode::MissingImage,
                  at(path, line_no) + "record " + rec.id + " references missing image " + rec.resolved_path);
    m.records.push_back(std::move(rec));
  }
  if (!have_header) throw Error(ErrorCode::ParseError, path.string() + ": empty manifest");
  return m;
}

DatasetManifest load_manifest(const fs::path& path, ManifestRole role) {
  // Check the declared role before touching any referenced file.
  {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open manifest: " + path.string());
    std::string line;
    while (std::getline(in, line) && (line.empty() || line == "\r")) {
    }
    if (line.starts_with(kHeaderPrefix)) {
      std::string_view declared = std::string_view(line).substr(kHeaderPrefix.size());
      if (!declared.empty() && declared.back() == '\r') declared.remove_suffix(1);
      if (declared != to_string(role))
        throw Error(ErrorCode::RoleMismatch, path.string() + ": declared role '" + std::string(declared) +
                                                 "', expected '" + std::string(to_string(role)) + "'");
    }
  }
  return load_manifest(path);
}

std::string format_manifest(const DatasetManifest& m) {
  std::ostringstream out;
  out << kHeaderPrefix << to_string(m.role) << "\n";
  out << (m.role == ManifestRole::Tuples ? "# id\tpath\tlabel\ttop_item_id\tfeature\n"
                                         : "# id\tpath\tlabel\tfeature\n");
  for (const auto& r : m.records) {
    out << r.id << '\t' << r.path << '\t' << (r.label ? to_string(*r.label) : "-");
    if (m.role == ManifestRole::Tuples) out << '\t' << r.top_item_id;
    out << '\t' << (r.feature ? to_text(*r.feature) : "-") << '\n';
  }
  return out.str();
}

void save_manifest(const DatasetManifest& m, const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write manifest: " + path.string());
  out << format_manifest(m);
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

void check_references(const DatasetManifest& tuples, const DatasetManifest& inventory) {
  std::unordered_set<std::string_view> items;
  for (const auto& r : inventory.records) items.insert(r.id);
  for (const auto& t : tuples.records)
    if (!items.contains(t.top_item_id))
      throw Error(ErrorCode::DanglingReference, at(tuples.source, t.line) + "tuple " + t.id +
                                                    " references unknown top " + t.top_item_id);
}

}  // namespace outfit
