#pragma once

#include "migsat/io/document.hpp"
#include "migsat/io/json.hpp"
#include "migsat/reasoner.hpp"

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <thread>

namespace migsat::server
{

struct Request
{
    std::string method;
    std::string path; // without query string
    std::string content_type;
    std::string body;
};

struct Response
{
    int status = 200;
    io::json body;
};

struct ServiceOptions
{
    ReasonerOptions reasoner;
    std::chrono::milliseconds update_budget{ 120'000 };
    std::size_t max_horizon = 1000;
};

// In-memory session store behind the HTTP endpoints:
//   POST  /graphs                      native, GPML or JSON graph  -> 201 {id, version, graph, ...}
//   GET   /graphs/{id}
//   PATCH /graphs/{id}/atoms/{name}    {kind?, init?, version?}
//   POST  /graphs/{id}/simulate        {init?, horizon?, version?}
//   POST  /graphs/{id}/query           {query, mode?, horizon?, version?}
//   POST  /graphs/{id}/update          {query, mode?, horizon?, time_budget_ms?, version?}
//   POST  /graphs/{id}/apply           {proposal, version?}
// A request naming a version other than the current one gets 409. Requests on one session
// run one at a time; distinct sessions run in parallel.
class Service
{
public:
    explicit Service( ServiceOptions opts = {} );

    Response handle( const Request& req );

private:
    struct Session
    {
        std::string id;
        io::MigDocument doc;
        std::uint64_t version = 1;
        std::mutex mutex;
        // Task results for the current version, keyed by endpoint and normalized request.
        std::map<std::string, io::json> cache;
        std::optional<UpdateResult> last_update;
    };

    Response create( const Request& req );
    Response get( Session& s );
    Response patch_atom( Session& s, const std::string& atom, const io::json& body );
    Response simulate( Session& s, const io::json& body );
    Response run_query( Session& s, const io::json& body );
    Response run_update( Session& s, const io::json& body );
    Response apply( Session& s, const io::json& body );

    std::size_t horizon_of( const io::json& body ) const;
    io::json describe( const Session& s ) const;
    std::shared_ptr<Session> find( const std::string& id ) const;

    ServiceOptions _opts;
    mutable std::shared_mutex _sessions_mutex;
    std::map<std::string, std::shared_ptr<Session>> _sessions;
    std::uint64_t _next_id = 1;
};

// Blocking HTTP front end; returns when stop() is called from another thread.
class HttpServer
{
public:
    explicit HttpServer( Service& service );
    ~HttpServer();
    HttpServer( const HttpServer& ) = delete;
    HttpServer& operator=( const HttpServer& ) = delete;

    // Binds and serves; port 0 picks a free port (see port()). Returns false if binding fails.
    bool listen( const std::string& host, int port );
    // Binds, then serves on a background thread.
    bool start( const std::string& host, int port );
    void stop();
    [[nodiscard]] int port() const { return _port; }

private:
    struct Impl;
    std::unique_ptr<Impl> _impl;
    std::thread _thread;
    int _port = 0;
};

} // namespace migsat::server
