#include <charconv>
#include <fstream>
#include <istream>

#include "outfit/aggregation.hpp"
#include "outfit/error.hpp"

namespace outfit {
namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

template <typename Int>
bool parse_int(std::string_view s, Int& out) {
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

std::string where(std::size_t line_no) {
  return line_no ? "ratings line " + std::to_string(line_no) + ": " : "rating record: ";
}

}  // namespace

std::string format_rating(const RatingRecord& r) {
  std::string line;
  line += r.query_id;
  line += '\t';
  line += r.rater_id;
  line += '\t';
  line += to_string(r.model);
  line += '\t';
  line += std::to_string(r.value);
  line += '\t';
  line += std::to_string(r.elapsed_ms);
  line += '\t';
  line += r.timestamp.empty() ? "-" : r.timestamp;
  line += '\t';
  line += r.flags.empty() ? "-" : r.flags;
  line += '\t';
  if (r.item_values.empty()) {
    line += '-';
  } else {
    for (std::size_t i = 0; i < r.item_values.size(); ++i) {
      if (i) line += ',';
      line += std::to_string(r.item_values[i]);
    }
  }
  return line;
}

RatingRecord parse_rating(std::string_view line, std::size_t line_no) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  const auto cols = split(line, '\t');
  if (cols.size() < 6 || cols.size() > 8)
    throw Error(ErrorCode::ParseError,
                where(line_no) + "expected 6 to 8 tab-separated fields, got " + std::to_string(cols.size()));
  RatingRecord r;
  r.query_id = cols[0];
  r.rater_id = cols[1];
  if (r.query_id.empty() || r.rater_id.empty())
    throw Error(ErrorCode::ParseError, where(line_no) + "empty query_id or rater_id");
  try {
    r.model = parse_model(cols[2]);
  } catch (const Error&) {
    throw Error(ErrorCode::ParseError, where(line_no) + "unknown model '" + std::string(cols[2]) + "'");
  }
  if (!parse_int(cols[3], r.value))
    throw Error(ErrorCode::ParseError, where(line_no) + "bad rating value '" + std::string(cols[3]) + "'");
  if (!valid_rating(r.value))
    throw Error(ErrorCode::ValueOutOfRange, where(line_no) + "rating " + std::to_string(r.value) +
                                                " outside {-1,0,1,2}");
  if (!parse_int(cols[4], r.elapsed_ms) || r.elapsed_ms < 0)
    throw Error(ErrorCode::ParseError, where(line_no) + "bad elapsed_ms '" + std::string(cols[4]) + "'");
  if (cols[5] != "-") r.timestamp = cols[5];
  if (cols.size() > 6 && cols[6] != "-" && !cols[6].empty()) r.flags = cols[6];
  if (cols.size() > 7 && cols[7] != "-" && !cols[7].empty()) {
    for (auto v : split(cols[7], ',')) {
      int x;
      if (!parse_int(v, x))
        throw Error(ErrorCode::ParseError, where(line_no) + "bad item value '" + std::string(v) + "'");
      if (!valid_rating(x))
        throw Error(ErrorCode::ValueOutOfRange, where(line_no) + "item rating outside {-1,0,1,2}");
      r.item_values.push_back(x);
    }
  }
  return r;
}

std::vector<RatingRecord> read_ratings(std::istream& in) {
  std::vector<RatingRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r" || line.front() == '#') continue;
    out.push_back(parse_rating(line, line_no));
  }
  return out;
}

std::vector<RatingRecord> read_ratings_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open ratings file: " + path);
  return read_ratings(in);
}

}  // namespace outfit
