#include "outfit/http_api.hpp"

#include <httplib.h>

#include <json.hpp>

#include "outfit/error.hpp"

namespace outfit::service {
namespace {

using nlohmann::json;

void send_error(httplib::Response& res, ErrorCode code, const std::string& message) {
  res.status = http_status(code);
  res.set_content(json{{"error", to_string(code)}, {"message", message}}.dump(), "application/json");
}

json session_json(const Session& s) {
  return {{"session_id", s.session_id},
          {"rater_id", s.rater_id},
          {"query_set", s.query_set},
          {"cursor", s.cursor},
          {"units", s.queue.size()},
          {"status", s.complete() ? "complete" : "open"}};
}

/// Runs a handler, translating library errors and malformed JSON into error replies.
template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const Error& e) {
      send_error(res, e.code(), e.what());
    } catch (const json::exception& e) {
      send_error(res, ErrorCode::ParseError, std::string("bad request body: ") + e.what());
    }
  };
}

}  // namespace

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownSession:
    case ErrorCode::UnknownQuerySet:
    case ErrorCode::NoRatings:
      return 404;
    case ErrorCode::OutOfOrderSubmission:
      return 409;
    case ErrorCode::SessionComplete:
      return 410;
    case ErrorCode::ValueOutOfRange:
      return 422;
    case ErrorCode::InvalidArgument:
    case ErrorCode::ParseError:
    case ErrorCode::UnknownModel:
      return 400;
    default:
      return 500;
  }
}

void register_routes(httplib::Server& server, RatingService& service) {
  server.Post("/api/sessions", guarded([&service](const httplib::Request& req, httplib::Response& res) {
                const auto body = json::parse(req.body.empty() ? "{}" : req.body);
                const auto rater = body.value("rater_id", std::string{});
                const auto set = body.value("query_set", std::string(kDefaultQuerySet));
                const Session s = service.create_session(rater, set);
                res.status = 201;
                res.set_content(session_json(s).dump(), "application/json");
              }));

  server.Get("/api/sessions/:id", guarded([&service](const httplib::Request& req, httplib::Response& res) {
               res.set_content(session_json(service.session(req.path_params.at("id"))).dump(), "application/json");
             }));

  server.Get("/api/sessions/:id/next", guarded([&service](const httplib::Request& req, httplib::Response& res) {
               const UnitView unit = service.next_unit(req.path_params.at("id"));
               json items = json::array();
               std::size_t rank = 0;
               for (const auto& e : unit.list.entries) {
                 std::string url;
                 for (const auto& item : service.corpus().inventory)
                   if (item.item_id == e.item_id) url = service.image_url(item.image_path);
                 items.push_back({{"rank", ++rank}, {"item_id", e.item_id}, {"image_url", url}, {"score", e.score}});
               }
               json body = {{"session_id", unit.session_id},
                            {"position", unit.position},
                            {"total", unit.total},
                            {"query_id", unit.query->query_id},
                            {"query_image_url", service.image_url(unit.query->image_path)},
                            {"model", to_string(unit.list.model)},
                            {"protocol", to_string(service.settings().rating_protocol)},
                            {"items", items}};
               res.set_content(body.dump(), "application/json");
             }));

  server.Post("/api/sessions/:id/ratings", guarded([&service](const httplib::Request& req, httplib::Response& res) {
                const auto body = json::parse(req.body);
                RatingSubmission sub;
                sub.session_id = req.path_params.at("id");
                sub.query_id = body.at("query_id").get<std::string>();
                sub.model = parse_model(body.at("model").get<std::string>());
                if (body.contains("values")) sub.values = body.at("values").get<std::vector<int>>();
                else sub.values = {body.at("value").get<int>()};
                sub.elapsed_ms = body.at("elapsed_ms").get<std::int64_t>();
                sub.client_timestamp = body.value("client_timestamp", std::string{});
                const Acknowledgment ack = service.submit_rating(sub);
                json out = {{"ack", true},
                            {"cursor", ack.cursor},
                            {"complete", ack.complete},
                            {"value", ack.record.value},
                            {"flagged", !ack.record.flags.empty()},
                            {"received_at", ack.record.timestamp}};
                res.set_content(out.dump(), "application/json");
              }));

  server.Get("/api/report", guarded([&service](const httplib::Request& req, httplib::Response& res) {
               const auto report = service.report();
               const auto format = req.has_param("format") ? req.get_param_value("format") : "json";
               if (format == "json") res.set_content(to_json(report), "application/json");
               else if (format == "text") res.set_content(render_text(report), "text/plain");
               else if (format == "table") res.set_content(render_tables(report), "text/tab-separated-values");
               else throw Error(ErrorCode::InvalidArgument, "format must be json, text or table");
             }));

  server.Get("/api/ratings/export", guarded([&service](const httplib::Request&, httplib::Response& res) {
               res.set_content(service.export_ratings(), "text/tab-separated-values");
             }));

  server.set_mount_point("/images", service.image_root().string());
}

}  // namespace outfit::service
