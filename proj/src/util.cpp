#include "haqjsk/util.hpp"

#include <iostream>

namespace haqjsk {

namespace {

void default_warn(const std::string& message) {
  std::cerr << "haqjsk: warning: " << message << "\n";
}

WarnHandler g_handler = &default_warn;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

void warn(const std::string& message) { g_handler(message); }

WarnHandler set_warn_handler(WarnHandler handler) {
  WarnHandler previous = g_handler;
  g_handler = handler ? handler : &default_warn;
  return previous;
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t substream_seed(std::uint64_t base, std::string_view stage,
                             std::uint64_t index) {
  return splitmix64(base ^ splitmix64(fnv1a64(stage) + index));
}

}  // namespace haqjsk
