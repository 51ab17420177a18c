#ifndef HALLWAY_CLI_HPP_
#define HALLWAY_CLI_HPP_

namespace hallway::cli {

/// Entry point behind main(). Exit codes: 0 success, 2 configuration error,
/// 3 collision outcome under `run --strict`, 1 unexpected failure.
int run_main(int argc, const char* const* argv);

}  // namespace hallway::cli

#endif  // HALLWAY_CLI_HPP_
