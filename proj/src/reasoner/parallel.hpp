#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace migsat::detail
{

// Runs work(worker, i) for every i in [0, n) on up to `threads` threads. Each worker pulls
// indices from a shared counter; the first exception is rethrown after all workers stop.
template <class MakeWorker>
void parallel_for( std::size_t n, unsigned threads, MakeWorker make_worker )
{
    const std::size_t count = std::max<std::size_t>( 1, std::min<std::size_t>( threads, n ) );
    std::atomic<std::size_t> next{ 0 };
    std::exception_ptr error;
    std::mutex error_mutex;

    auto run = [&]() {
        try
        {
            auto work = make_worker();
            for ( std::size_t i = next++; i < n; i = next++ )
                work( i );
        }
        catch ( ... )
        {
            std::lock_guard lock( error_mutex );
            if ( !error )
                error = std::current_exception();
            next = n;
        }
    };

    if ( count == 1 )
        run();
    else
    {
        std::vector<std::thread> pool;
        for ( std::size_t t = 0; t < count; ++t )
            pool.emplace_back( run );
        for ( auto& th : pool )
            th.join();
    }
    if ( error )
        std::rethrow_exception( error );
}

} // namespace migsat::detail
