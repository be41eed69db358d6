#include "migsat/server.hpp"

#include <httplib.h>

namespace migsat::server
{

struct HttpServer::Impl
{
    httplib::Server http;
};

HttpServer::HttpServer( Service& service ) : _impl( std::make_unique<Impl>() )
{
    const auto forward = [&service]( const httplib::Request& req, httplib::Response& res ) {
        const Response r = service.handle( { req.method, req.path, req.get_header_value( "Content-Type" ), req.body } );
        res.status = r.status;
        res.set_content( r.body.dump( 2 ) + "\n", "application/json" );
    };
    _impl->http.Get( ".*", forward );
    _impl->http.Post( ".*", forward );
    _impl->http.Patch( ".*", forward );
}

HttpServer::~HttpServer() { stop(); }

bool HttpServer::listen( const std::string& host, int port )
{
    _port = port == 0 ? _impl->http.bind_to_any_port( host ) : ( _impl->http.bind_to_port( host, port ) ? port : -1 );
    return _port > 0 && _impl->http.listen_after_bind();
}

bool HttpServer::start( const std::string& host, int port )
{
    _port = port == 0 ? _impl->http.bind_to_any_port( host ) : ( _impl->http.bind_to_port( host, port ) ? port : -1 );
    if ( _port <= 0 )
        return false;
    _thread = std::thread( [this] { _impl->http.listen_after_bind(); } );
    _impl->http.wait_until_ready();
    return true;
}

void HttpServer::stop()
{
    _impl->http.stop();
    if ( _thread.joinable() )
        _thread.join();
}

} // namespace migsat::server
