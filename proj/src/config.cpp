#include "outfit/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "outfit/error.hpp"

namespace outfit {

std::string_view to_string(RatingProtocol p) { return p == RatingProtocol::PerItem ? "per_item" : "per_list"; }

RatingProtocol parse_rating_protocol(std::string_view text) {
  if (text == "per_item") return RatingProtocol::PerItem;
  if (text == "per_list") return RatingProtocol::PerList;
  throw Error(ErrorCode::InvalidConfig, "unknown rating protocol: " + std::string(text));
}

void validate(const Settings& s) {
  if (!(s.solidness_threshold > 0.0 && s.solidness_threshold <= 1.0))
    throw Error(ErrorCode::InvalidConfig, "solidness_threshold must be in (0, 1]");
  if (s.list_size == 0) throw Error(ErrorCode::InvalidConfig, "list_size must be at least 1");
  if (s.elapsed_min_ms < 0 || s.elapsed_max_ms < s.elapsed_min_ms)
    throw Error(ErrorCode::InvalidConfig, "elapsed bounds must satisfy 0 <= min <= max");
}

Settings settings_from_json(std::string_view text) {
  Settings s;
  try {
    const auto doc = nlohmann::json::parse(text);
    if (!doc.is_object()) throw Error(ErrorCode::InvalidConfig, "settings must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
      if (key == "solidness_threshold") s.solidness_threshold = value.get<double>();
      else if (key == "sfr_solid_query") {
        const auto v = value.get<std::string>();
        if (v == "sample_patterned") s.sfr_solid_query = SolidQueryPolicy::SamplePatterned;
        else if (v == "reject") s.sfr_solid_query = SolidQueryPolicy::Reject;
        else throw Error(ErrorCode::InvalidConfig, "sfr_solid_query must be sample_patterned or reject");
      } else if (key == "rating_protocol") s.rating_protocol = parse_rating_protocol(value.get<std::string>());
      else if (key == "list_size") s.list_size = value.get<std::size_t>();
      else if (key == "elapsed_min_ms") s.elapsed_min_ms = value.get<std::int64_t>();
      else if (key == "elapsed_max_ms") s.elapsed_max_ms = value.get<std::int64_t>();
      else throw Error(ErrorCode::InvalidConfig, "unknown settings key: " + key);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("bad settings: ") + e.what());
  }
  validate(s);
  return s;
}

Settings load_settings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open settings: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return settings_from_json(buf.str());
}

}  // namespace outfit
