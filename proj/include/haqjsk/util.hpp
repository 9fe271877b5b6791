#ifndef HAQJSK_UTIL_HPP
#define HAQJSK_UTIL_HPP

#include <cstdint>
#include <string>
#include <string_view>

namespace haqjsk {

/// Serial runs the single-threaded reference schedule; Parallel enables the
/// OpenMP loops. Both produce bit-identical results.
enum class Execution { Serial, Parallel };

/// Sink for non-fatal diagnostics (k-means clamps, self-loop strips, ...).
/// Writes "haqjsk: warning: <message>" to stderr unless a handler is set.
void warn(const std::string& message);
using WarnHandler = void (*)(const std::string&);
WarnHandler set_warn_handler(WarnHandler handler);  // returns previous handler

std::uint64_t fnv1a64(std::string_view bytes,
                      std::uint64_t seed = 1469598103934665603ull);

/// Named sub-stream derivation: every stochastic stage draws its seed from
/// (base seed, stage name, index) so stages can be re-run independently.
std::uint64_t substream_seed(std::uint64_t base, std::string_view stage,
                             std::uint64_t index = 0);

}  // namespace haqjsk

#endif
