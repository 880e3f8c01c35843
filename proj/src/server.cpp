#include "semsearch/server.hpp"

#include <httplib.h>

#include <json.hpp>

#include "semsearch/errors.hpp"

namespace semsearch {

std::unique_ptr<httplib::Server> make_query_server(const LoadedEngine& engine) {
    auto server = std::make_unique<httplib::Server>();

    server->Get("/search", [&engine](const httplib::Request& req, httplib::Response& res) {
        auto fail = [&res](int status, const std::string& message) {
            res.status = status;
            res.set_content(nlohmann::json{{"error", message}}.dump(), "application/json");
        };
        if (!req.has_param("q")) return fail(400, "missing query parameter q");
        SearchConfig cfg = engine.engine.defaults();
        if (req.has_param("k")) {
            try {
                std::size_t used = 0;
                const std::string raw = req.get_param_value("k");
                int k = std::stoi(raw, &used);
                if (used != raw.size() || k < 1) throw std::invalid_argument(raw);
                cfg.k = k;
            } catch (const std::exception&) {
                return fail(400, "k must be a positive integer");
            }
        }
        try {
            auto results = engine.engine.search(req.get_param_value("q"), cfg);
            auto payload = nlohmann::json::array();
            for (const ResultEntry& entry : results)
                payload.push_back(nlohmann::json::parse(result_to_json(entry)));
            res.set_content(payload.dump(), "application/json");
        } catch (const QueryError& e) {
            fail(400, e.what());
        }
    });

    server->Get("/health", [&engine](const httplib::Request&, httplib::Response& res) {
        res.set_content(engine.manifest_json, "application/json");
    });

    return server;
}

}  // namespace semsearch
