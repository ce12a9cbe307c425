#pragma once

#include <cstddef>
#include <string>

namespace tiermem::testing {

/// Writes a deterministic 2000-line log in the BGL record layout: recurring
/// FATAL storms per rack (one late repeat each), unique INFO link reports,
/// and location-less chatter lines. Returns the number of lines written.
/// The mix is tuned so importance-aware retention and plain recency behave
/// very differently while nothing is ever permanently deleted.
std::size_t write_bgl_fixture(const std::string& path, std::size_t lines = 2000);

}  // namespace tiermem::testing
