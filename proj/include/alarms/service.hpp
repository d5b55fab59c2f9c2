#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "alarms/hazard_matrix.hpp"
#include "alarms/json_io.hpp"
#include "alarms/pipeline.hpp"

namespace alarms {

struct ServiceResponse {
  int status = 200;
  std::string body;
};

inline constexpr int kMaxCurvePoints = 500;

// Grid indices kept when a curve of num_points samples is thinned to at most
// max_points: both ends, both sides of every policy switch, then an even
// stride over the remainder.
std::vector<int> downsample_indices(const std::vector<int>& choice,
                                    int max_points = kMaxCurvePoints);

// Request handling for the HTTP endpoints, usable without a socket. The
// matrix is fixed at construction; handlers are const and reentrant.
class AlarmsService {
 public:
  explicit AlarmsService(HazardMatrix matrix, std::string matrix_path = {});

  const HazardMatrix& matrix() const { return matrix_; }

  ServiceResponse get_matrix() const;
  ServiceResponse get_defaults() const;
  // Body: {evidence, noise?, tau?, unobserved?}
  ServiceResponse infer(std::string_view body) const;
  // Body mirrors a scenario file without the matrix reference.
  ServiceResponse solve(std::string_view body) const;

  // Dispatch by method and path; unknown routes give 404.
  ServiceResponse handle(std::string_view method, std::string_view path,
                         std::string_view body) const;

 private:
  HazardMatrix matrix_;
  std::string matrix_path_;
};

// Full SolveResponse document for a pipeline result.
Json solve_response_json(const RunResult& result, int max_points = kMaxCurvePoints);

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::string cors_origin;  // empty disables CORS headers
};

class HttpServer {
 public:
  HttpServer(const AlarmsService& service, ServerOptions options);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds the socket; returns the bound port. Throws IoError on failure.
  int bind();
  // Blocks serving requests until stop().
  void serve();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace alarms
