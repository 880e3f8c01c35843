#pragma once

#include <memory>
#include <string>

#include "semsearch/pipeline.hpp"

namespace httplib {
class Server;
}

namespace semsearch {

// Read-only query endpoint over loaded artifacts:
//   GET /search?q=...&k=...  -> JSON array of result objects
//   GET /health              -> build manifest JSON
std::unique_ptr<httplib::Server> make_query_server(const LoadedEngine& engine);

}  // namespace semsearch
