#include "pmsbm/graph.hpp"

#include <bit>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "pmsbm/error.hpp"

namespace pmsbm {

Graph::Graph(std::size_t n) : n_(n), bits_((n * (n > 0 ? n - 1 : 0) / 2 + 63) / 64, 0) {
  if (n == 0) throw InvalidArgument("graph needs at least one vertex");
}

bool Graph::has_edge(std::size_t i, std::size_t j) const {
  if (i == j || i >= n_ || j >= n_) throw InvalidArgument("vertex pair out of range");
  if (i > j) std::swap(i, j);
  const std::size_t k = pair_index(n_, i, j);
  return (bits_[k / 64] >> (k % 64)) & 1U;
}

void Graph::set_edge(std::size_t i, std::size_t j, bool present) {
  if (i == j) throw InvalidArgument("self-loops are not allowed");
  if (i >= n_ || j >= n_) throw InvalidArgument("vertex index out of range");
  if (i > j) std::swap(i, j);
  const std::size_t k = pair_index(n_, i, j);
  const std::uint64_t bit = std::uint64_t{1} << (k % 64);
  if (present) {
    bits_[k / 64] |= bit;
  } else {
    bits_[k / 64] &= ~bit;
  }
}

std::size_t Graph::edge_count() const noexcept {
  std::size_t count = 0;
  for (auto w : bits_) count += static_cast<std::size_t>(std::popcount(w));
  return count;
}

std::vector<std::pair<std::size_t, std::size_t>> Graph::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t k = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j, ++k) {
      if ((bits_[k / 64] >> (k % 64)) & 1U) out.emplace_back(i, j);
    }
  }
  return out;
}

Graph Graph::from_pair_bits(std::size_t n, std::uint64_t pair_bits) {
  Graph g(n);
  if (g.pair_count() > 64) throw InvalidArgument("from_pair_bits supports at most 64 pairs");
  if (!g.bits_.empty()) {
    const std::size_t pc = g.pair_count();
    g.bits_[0] = pc == 64 ? pair_bits : (pair_bits & ((std::uint64_t{1} << pc) - 1));
  }
  return g;
}

void write_graph(std::ostream& out, const Graph& graph) {
  out << "n=" << graph.n() << '\n';
  for (const auto& [i, j] : graph.edges()) out << (i + 1) << ' ' << (j + 1) << '\n';
}

std::string format_graph(const Graph& graph) {
  std::ostringstream os;
  write_graph(os, graph);
  return os.str();
}

namespace {

std::size_t parse_index(std::string_view token, std::size_t line_no) {
  std::size_t value = 0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError("line " + std::to_string(line_no) + ": expected an integer, got '" +
                     std::string(token) + "'");
  }
  return value;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
    std::size_t start = pos;
    while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t' && line[pos] != '\r') ++pos;
    if (pos > start) tokens.push_back(line.substr(start, pos - start));
  }
  return tokens;
}

}  // namespace

Graph parse_graph(std::string_view text) {
  std::size_t pos = 0;
  std::size_t line_no = 0;
  auto next_line = [&](std::string_view& line) {
    if (pos >= text.size()) return false;
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    return true;
  };

  std::string_view line;
  if (!next_line(line)) throw ParseError("empty graph file");
  auto header = split_ws(line);
  if (header.size() != 1 || header[0].substr(0, 2) != "n=") {
    throw ParseError("line 1: expected header 'n=<int>'");
  }
  const std::size_t n = parse_index(header[0].substr(2), 1);
  if (n == 0) throw ParseError("line 1: n must be positive");
  Graph g(n);
  while (next_line(line)) {
    auto tokens = split_ws(line);
    if (tokens.empty()) {
      if (pos >= text.size()) break;
      throw ParseError("line " + std::to_string(line_no) + ": empty line");
    }
    if (tokens.size() != 2) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 'i j'");
    }
    const std::size_t i = parse_index(tokens[0], line_no);
    const std::size_t j = parse_index(tokens[1], line_no);
    if (i < 1 || j > n || i >= j) {
      throw ParseError("line " + std::to_string(line_no) + ": need 1 <= i < j <= n");
    }
    if (g.has_edge(i - 1, j - 1)) {
      throw ParseError("line " + std::to_string(line_no) + ": duplicate edge");
    }
    g.set_edge(i - 1, j - 1);
  }
  return g;
}

Graph read_graph(std::istream& in) {
  std::ostringstream os;
  os << in.rdbuf();
  return parse_graph(os.str());
}

}  // namespace pmsbm
