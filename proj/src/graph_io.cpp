#include <string>

#include "csv.hpp"
#include "pgl/graph.hpp"

namespace pgl {

void write_edge_list(const Graph& g, const std::filesystem::path& path) {
  auto out = csv::open_out(path);
  out << "# n=" << g.size() << '\n';
  for (Index i = 0; i < g.size(); ++i)
    for (Index j = i + 1; j < g.size(); ++j)
      if (g.adj()(i, j) != 0.0)
        out << i + 1 << ',' << j + 1 << ',' << csv::format_double(g.adj()(i, j)) << '\n';
}

Graph read_edge_list(const std::filesystem::path& path) {
  auto in = csv::open_in(path);
  struct Edge {
    Index i, j;
    double w;
  };
  std::vector<Edge> edges;
  Index declared = -1;
  Index max_id = 0;
  std::string text;
  for (std::size_t line = 1; std::getline(in, text); ++line) {
    const auto t = csv::trim(text);
    if (t.empty()) continue;
    if (t.front() == '#') {
      const auto pos = t.find("n=");
      if (pos != std::string_view::npos)
        declared = static_cast<Index>(csv::parse_double(t.substr(pos + 2), path, line));
      continue;
    }
    const auto row = csv::parse_row(t, path, line);
    if (row.size() != 3)
      throw Error(ErrorKind::Parse, csv::where(path, line) + "expected i,j,weight");
    const auto i = static_cast<Index>(row[0]);
    const auto j = static_cast<Index>(row[1]);
    if (i < 1 || j < 1 || static_cast<double>(i) != row[0] || static_cast<double>(j) != row[1])
      throw Error(ErrorKind::Parse, csv::where(path, line) + "node ids must be positive integers");
    edges.push_back({i - 1, j - 1, row[2]});
    max_id = std::max({max_id, i, j});
  }
  const Index n = declared > 0 ? declared : max_id;
  if (n < 1 || max_id > n) throw Error(ErrorKind::Parse, path.string() + ": inconsistent node count");
  MatrixXd a = MatrixXd::Zero(n, n);
  for (const auto& e : edges) a(e.i, e.j) = a(e.j, e.i) = e.w;
  return Graph(a);
}

void write_matrix_csv(const MatrixXd& m, const std::filesystem::path& path) {
  auto out = csv::open_out(path);
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << csv::format_double(m(r, c));
    }
    out << '\n';
  }
}

MatrixXd read_matrix_csv(const std::filesystem::path& path) {
  auto in = csv::open_in(path);
  std::vector<std::vector<double>> rows;
  std::string text;
  for (std::size_t line = 1; std::getline(in, text); ++line) {
    const auto t = csv::trim(text);
    if (t.empty() || t.front() == '#') continue;
    rows.push_back(csv::parse_row(t, path, line));
    if (rows.back().size() != rows.front().size())
      throw Error(ErrorKind::Parse, csv::where(path, line) + "ragged row");
  }
  if (rows.empty()) throw Error(ErrorKind::Parse, path.string() + ": empty matrix file");
  MatrixXd m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) m(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  return m;
}

}  // namespace pgl
