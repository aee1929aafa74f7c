#ifndef SOURCESEEK_ERRORS_HPP
#define SOURCESEEK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace seeker {

/// Base class for every recoverable error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidPolygon : Error { using Error::Error; };
struct NegativeDistance : Error { using Error::Error; };
struct AtSource : Error { using Error::Error; };
struct TimeBeforeRelease : Error { using Error::Error; };
struct OutOfArena : Error { using Error::Error; };
struct PhiOutOfRange : Error { using Error::Error; };
struct InvalidConfig : Error { using Error::Error; };
struct NoPath : Error { using Error::Error; };
struct StartInsideObstacle : Error { using Error::Error; };
struct GoalInsideObstacle : Error { using Error::Error; };
struct EmptyRecords : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

/// A whole run aborted; carries the run index and iteration for diagnostics.
struct RunFailed : Error {
    RunFailed(int run_index_, int iteration_, const std::string& what_)
        : Error("run " + std::to_string(run_index_) + " failed at iteration " +
                std::to_string(iteration_) + ": " + what_),
          run_index(run_index_), iteration(iteration_) {}
    int run_index;
    int iteration;
};

} // namespace seeker

#endif
