#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace rllfb {

/// start:stop:step, inclusive of stop up to a 1e-9 step fraction.
struct EpsGrid {
    double start = 0.0;
    double stop = 1.0;
    double step = 0.01;

    /// Throws std::invalid_argument on malformed text, step <= 0, stop < start or values outside [0,1].
    static EpsGrid parse(std::string_view text);
    /// start + i * step, with the last point clamped to stop.
    std::vector<double> values() const;
};

/// Header "eps,capacity,regime,delta_0,...,delta_d".
std::string capacity_csv_header(int d);
/// One row per grid point, numbers with 9 significant digits. Points are solved concurrently
/// and written in grid order.
std::string capacity_csv(int d, const EpsGrid& grid, int workers = 0);

/// Entry point of the command-line tool. Exit codes: 0 ok, 1 verification failure, 2 bad flags.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rllfb
