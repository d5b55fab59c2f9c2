#include "alarms/service.hpp"

#include <algorithm>
#include <set>

#include "httplib.h"

#include "alarms/error.hpp"
#include "json_util.hpp"

namespace alarms {

namespace {

ServiceResponse json_response(int status, const Json& body) {
  return {status, body.dump()};
}

ServiceResponse error_response(int status, const std::string& message) {
  Json body{{"error", message}};
  // Messages are "<field>: <detail>"; surface the field separately.
  auto colon = message.find(':');
  if (colon != std::string::npos && message.find(' ') > colon) {
    body["field"] = message.substr(0, colon);
  }
  return json_response(status, body);
}

template <typename F>
ServiceResponse guarded(F&& f) {
  try {
    return f();
  } catch (const ParseError& e) {
    return error_response(400, std::string("malformed JSON: ") + e.what());
  } catch (const ValidationError& e) {
    return error_response(422, e.what());
  } catch (const std::exception& e) {
    return error_response(500, e.what());
  }
}

Json parse_request(std::string_view body) {
  Json doc = detail::parse_json_text(body.empty() ? std::string_view("{}") : body);
  if (!doc.is_object()) throw ValidationError("body: expected a JSON object");
  if (doc.contains("matrix")) {
    throw ValidationError("matrix: per-request matrices are not accepted");
  }
  return doc;
}

Json sample(const Eigen::VectorXd& v, const std::vector<int>& idx) {
  Json out = Json::array();
  for (int i : idx) out.push_back(v[i]);
  return out;
}

}  // namespace

std::vector<int> downsample_indices(const std::vector<int>& choice, int max_points) {
  const int n = static_cast<int>(choice.size());
  if (n <= max_points) {
    std::vector<int> all(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
    return all;
  }
  std::set<int> keep{0, n - 1};
  for (int i = 1; i < n; ++i) {
    if (choice[static_cast<std::size_t>(i)] != choice[static_cast<std::size_t>(i - 1)]) {
      keep.insert(i - 1);
      keep.insert(i);
    }
  }
  int budget = std::max(1, max_points - static_cast<int>(keep.size()));
  int stride = (n + budget - 1) / budget;
  for (int i = 0; i < n; i += stride) {
    if (static_cast<int>(keep.size()) >= max_points) break;
    keep.insert(i);
  }
  return {keep.begin(), keep.end()};
}

Json solve_response_json(const RunResult& result, int max_points) {
  Json active = Json::array();
  for (const auto& h : result.hazards) {
    if (h.level == AlertLevel::kNominal) continue;
    active.push_back({{"id", h.id},
                      {"level", std::string(1, alert_code(h.level))},
                      {"reward", h.reward}});
  }
  Json j{{"posteriors", posteriors_to_json(result.belief)},
         {"active_hazards", std::move(active)},
         {"no_active_hazard", result.no_active_hazard}};
  if (!result.no_active_hazard) {
    const TmdpModel& model = *result.model;
    const SolveResult& solved = *result.solution;
    Json states = Json::array();
    for (int mask : solved.order) {
      const auto& sol = solved.states[static_cast<std::size_t>(mask)];
      auto idx = downsample_indices(sol.policy.choice, max_points);
      Json t = Json::array();
      for (int i : idx) t.push_back(model.time_at(i));
      Json q = Json::object();
      for (std::size_t a = 0; a < sol.curves.actions.size(); ++a) {
        q[model.action_name(sol.curves.actions[a])] =
            sample(sol.curves.q.col(static_cast<Eigen::Index>(a)), idx);
      }
      Json crossovers = Json::array();
      for (double c : sol.policy.crossovers()) crossovers.push_back(detail::round6(c));
      states.push_back({{"state", model.state_name(sol.state)},
                        {"t", std::move(t)},
                        {"q", std::move(q)},
                        {"V", sample(sol.value, idx)},
                        {"segments", segments_to_json(model, sol.policy, true)},
                        {"crossovers", std::move(crossovers)}});
    }
    j["initial_state"] = model.state_name(solved.initial_solution().state);
    j["value_at_start"] = solved.initial_value();
    j["states"] = std::move(states);
  } else {
    j["notice"] = "no active hazard after thresholding; planner skipped";
  }
  j["timings"] = {{"inference_seconds", result.inference_seconds},
                  {"solve_seconds", result.solve_seconds}};
  return j;
}

AlarmsService::AlarmsService(HazardMatrix matrix, std::string matrix_path)
    : matrix_(std::move(matrix)), matrix_path_(std::move(matrix_path)) {}

ServiceResponse AlarmsService::get_matrix() const {
  return {200, serialize_matrix(matrix_)};
}

ServiceResponse AlarmsService::get_defaults() const {
  return json_response(200, defaults_json());
}

ServiceResponse AlarmsService::infer(std::string_view body) const {
  return guarded([&] {
    Json doc = parse_request(body);
    for (const auto& [key, value] : doc.items()) {
      if (key != "evidence" && key != "noise" && key != "tau" && key != "unobserved") {
        throw ValidationError(key + ": not an inference parameter");
      }
    }
    Scenario sc = parse_scenario(doc, {}, true);
    sc.validate_against(matrix_);
    BeliefNetwork network = build_network(matrix_, sc.noise);
    HazardBelief belief = posterior(network, sc.evidence, {sc.unobserved, sc.tau});
    return json_response(200, Json{{"posteriors", posteriors_to_json(belief)}});
  });
}

ServiceResponse AlarmsService::solve(std::string_view body) const {
  return guarded([&] {
    Scenario sc = parse_scenario(parse_request(body), {}, true);
    sc.matrix_path = matrix_path_;
    return json_response(200, solve_response_json(run(sc, matrix_)));
  });
}

ServiceResponse AlarmsService::handle(std::string_view method, std::string_view path,
                                      std::string_view body) const {
  if (method == "GET" && path == "/api/matrix") return get_matrix();
  if (method == "GET" && path == "/api/defaults") return get_defaults();
  if (method == "POST" && path == "/api/infer") return infer(body);
  if (method == "POST" && path == "/api/solve") return solve(body);
  return error_response(404, "no route for " + std::string(method) + " " +
                                 std::string(path));
}

struct HttpServer::Impl {
  Impl(const AlarmsService& s, ServerOptions o) : service(s), options(std::move(o)) {}

  const AlarmsService& service;
  ServerOptions options;
  httplib::Server server;
};

HttpServer::HttpServer(const AlarmsService& service, ServerOptions options)
    : impl_(std::make_unique<Impl>(service, std::move(options))) {
  auto& srv = impl_->server;
  const AlarmsService& svc = impl_->service;
  auto reply = [](httplib::Response& res, const ServiceResponse& r) {
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  srv.Get("/api/matrix", [&svc, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, svc.get_matrix());
  });
  srv.Get("/api/defaults", [&svc, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, svc.get_defaults());
  });
  srv.Post("/api/infer", [&svc, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, svc.infer(req.body));
  });
  srv.Post("/api/solve", [&svc, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, svc.solve(req.body));
  });
  srv.set_error_handler([&svc, reply](const httplib::Request& req, httplib::Response& res) {
    if (res.status == 404) reply(res, svc.handle(req.method, req.path, req.body));
  });
  if (!impl_->options.cors_origin.empty()) {
    srv.set_default_headers(
        {{"Access-Control-Allow-Origin", impl_->options.cors_origin},
         {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
         {"Access-Control-Allow-Headers", "Content-Type"}});
    srv.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
      res.status = 204;
    });
  }
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
  const auto& o = impl_->options;
  int port = o.port;
  if (port == 0) {
    port = impl_->server.bind_to_any_port(o.host);
  } else if (!impl_->server.bind_to_port(o.host, port)) {
    port = -1;
  }
  if (port < 0) {
    throw IoError("cannot listen on " + o.host + ":" + std::to_string(o.port));
  }
  return port;
}

void HttpServer::serve() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace alarms
