#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>

#include "json.hpp"

#include "hypoteq/db/instance.hpp"

namespace httplib {
class Server;
}

namespace hypoteq::service {

struct ApiResponse {
    int status = 200;
    nlohmann::json body;
};

/// JSON API over one database. Reads work on an immutable snapshot; writes
/// build a new instance under a single writer lock and publish it with a
/// bumped version. A write carrying `expectedVersion` that is no longer
/// current is refused with 409, as are writes that clash with existing
/// relations or labels. Other failures are 400 with
/// {"error": {"kind", "message", "line"?, "column"?}}.
class Api {
public:
    explicit Api(db::DatabaseInstance db = {});

    ApiResponse query(const std::string& body) const;      // POST /query {sql}
    ApiResponse datalog(const std::string& body);          // POST /datalog {program, query?}
    ApiResponse catalog() const;                           // GET /catalog
    ApiResponse ddl(const std::string& body);              // POST /ddl {stmt}
    ApiResponse compile(const std::string& sql) const;     // GET /compile?sql=

    std::shared_ptr<const db::DatabaseInstance> snapshot() const;
    std::uint64_t version() const;

    void mount(httplib::Server& server);

private:
    template <class F>
    ApiResponse write(const nlohmann::json& request, F&& mutate);

    mutable std::mutex snapshot_mutex_;
    std::shared_ptr<const db::DatabaseInstance> db_;
    std::uint64_t version_ = 1;
    std::mutex writer_;
};

}  // namespace hypoteq::service
