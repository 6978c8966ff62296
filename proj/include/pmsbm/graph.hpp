#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pmsbm {

// Undirected simple graph on vertices 0..n-1. Edges are stored as a bit set
// over the upper triangle, pair (i, j) with i < j at bit pair_index(n, i, j).
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n);

  std::size_t n() const noexcept { return n_; }
  std::size_t pair_count() const noexcept { return n_ * (n_ - 1) / 2; }

  bool has_edge(std::size_t i, std::size_t j) const;
  void set_edge(std::size_t i, std::size_t j, bool present = true);

  std::size_t edge_count() const noexcept;
  // Edges (i, j) with i < j in lexicographic order.
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;

  const std::vector<std::uint64_t>& words() const noexcept { return bits_; }

  // Builds the graph whose pair bit k is bit k of `pair_bits` (n <= 11).
  static Graph from_pair_bits(std::size_t n, std::uint64_t pair_bits);

  static std::size_t pair_index(std::size_t n, std::size_t i, std::size_t j) noexcept {
    return i * (2 * n - i - 1) / 2 + (j - i - 1);
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> bits_;
};

// Edge-list text format: "n=<int>" on the first line, then one "i j" line per
// edge, 1-based with i < j, every line newline-terminated.
void write_graph(std::ostream& out, const Graph& graph);
Graph read_graph(std::istream& in);
std::string format_graph(const Graph& graph);
Graph parse_graph(std::string_view text);

}  // namespace pmsbm
