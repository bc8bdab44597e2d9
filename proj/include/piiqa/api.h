// Copyright 2026 The piiqa Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PIIQA_API_H_
#define PIIQA_API_H_

#include <map>
#include <string>
#include <string_view>

#include "json.hpp"
#include "piiqa/config.h"
#include "piiqa/store.h"

namespace httplib {
class Server;
}

namespace piiqa {

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

// The /v1 HTTP API over a store. See docs/http-api.md.
class ApiService {
 public:
  ApiService(Store& store, Config config)
      : store_(&store), config_(std::move(config)) {}

  ApiResponse handle(std::string_view method, std::string_view path,
                     const std::map<std::string, std::string>& query,
                     std::string_view body);

  // Routes every /v1 request of `server` to handle().
  void bind(httplib::Server& server);

 private:
  ApiResponse queue(const std::map<std::string, std::string>& query);
  ApiResponse task(const std::string& id);
  ApiResponse review(const std::string& id, std::string_view body);
  ApiResponse quality(const std::map<std::string, std::string>& query);
  ApiResponse errors(const std::map<std::string, std::string>& query);
  ApiResponse metrics(const std::map<std::string, std::string>& query);
  ApiResponse agreement();
  ApiResponse rca(const std::map<std::string, std::string>& query);
  ApiResponse distributions(const std::map<std::string, std::string>& query);

  Store* store_;
  Config config_;
};

}  // namespace piiqa

#endif  // PIIQA_API_H_
