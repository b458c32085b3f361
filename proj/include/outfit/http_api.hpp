#pragma once

#include <string>

#include "outfit/error.hpp"
#include "outfit/service.hpp"

namespace httplib {
class Server;
}

namespace outfit::service {

/// Routes served to the rating workbench and headless clients:
///
///   POST /api/sessions                      {"rater_id", "query_set"?}  -> 201 session
///   GET  /api/sessions/:id                                               -> session status
///   GET  /api/sessions/:id/next                                          -> unit (410 when complete)
///   POST /api/sessions/:id/ratings          {"query_id","model","values","elapsed_ms","client_timestamp"?}
///   GET  /api/report?format=json|text|table                              -> aggregate report
///   GET  /api/ratings/export                                             -> ratings log (TSV)
///   GET  /images/...                                                     -> corpus images
///
/// Errors are JSON bodies {"error": "<ErrorCode>", "message": "..."}.
void register_routes(httplib::Server& server, RatingService& service);

/// HTTP status for an error code.
int http_status(ErrorCode code);

}  // namespace outfit::service
