#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "pgl/graph.hpp"

using namespace pgl;

namespace {

MatrixXd m22(double a, double b, double c, double d) {
  MatrixXd m(2, 2);
  m << a, b, c, d;
  return m;
}

bool throws_kind(ErrorKind kind, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind() == kind;
  }
  return false;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("pgl_test_graph_" + name);
}

}  // namespace

TEST_CASE("graph rejects asymmetric and non-finite input") {
  CHECK(throws_kind(ErrorKind::InvalidArgument, [] { Graph(m22(0, 1, 0, 0)); }));
  CHECK(throws_kind(ErrorKind::Numeric, [] { Graph(m22(0, NAN, NAN, 0)); }));
  CHECK(throws_kind(ErrorKind::Shape, [] { Graph(MatrixXd::Zero(2, 3)); }));
  const Graph g(m22(0, 1, 1 + 1e-14, 0));
  CHECK(g.adj()(0, 1) == g.adj()(1, 0));
}

TEST_CASE("erdos-renyi extremes and edge count") {
  Rng rng(1);
  CHECK(gen_erdos_renyi(3, 0.0, rng).adj().isZero());
  CHECK(gen_erdos_renyi(3, 1.0, rng).adj() == gen_complete(3).adj());
  CHECK(throws_kind(ErrorKind::InvalidSize, [&] { gen_erdos_renyi(1, 0.5, rng); }));

  double total = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const Graph g = gen_erdos_renyi(10, 0.4, rng);
    CHECK(g.adj().diagonal().isZero());
    total += static_cast<double>(g.edge_count());
  }
  CHECK(total / 1000.0 == doctest::Approx(18.0).epsilon(1.0 / 18.0));
}

TEST_CASE("generators are deterministic under a fixed seed") {
  Rng a(derive_seed(3, "g")), b(derive_seed(3, "g"));
  CHECK(gen_erdos_renyi(12, 0.3, a).adj() == gen_erdos_renyi(12, 0.3, b).adj());
  CHECK(gen_core_periphery(20, 5, 0.2, 0.05, a).graph.adj() ==
        gen_core_periphery(20, 5, 0.2, 0.05, b).graph.adj());
}

TEST_CASE("core-periphery structure") {
  Rng rng(7);
  const auto cp = gen_core_periphery(12, 10, 0.3, 0.4, rng);
  CHECK(cp.graph.adj().topLeftCorner(10, 10) == gen_complete(10).adj());
  CHECK(cp.core.size() == 10);
  CHECK(cp.core.front() == 0);
  CHECK(cp.core.back() == 9);

  CHECK(gen_core_periphery(3, 1, 0.0, 0.0, rng).graph.adj().isZero());
  CHECK(throws_kind(ErrorKind::InvalidPartition, [&] { gen_core_periphery(5, 5, 0.2, 0.05, rng); }));

  double pp = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const auto g = gen_core_periphery(80, 10, 0.2, 0.05, rng);
    pp += g.graph.adj().bottomRightCorner(70, 70).sum() / 2.0;
  }
  CHECK(std::abs(pp / 1000.0 - 120.75) < 15.0);
}

TEST_CASE("path graphs") {
  CHECK(gen_path(2).edge_count() == 1);
  MatrixXd p3(3, 3);
  p3 << 0, 1, 0, 1, 0, 1, 0, 1, 0;
  CHECK(gen_path(3).adj() == p3);
  const Graph p4 = gen_path(4);
  CHECK(p4.edge_count() == 3);
  CHECK(p4.degrees() == (VectorXd(4) << 1, 2, 2, 1).finished());
}

TEST_CASE("interaction graph construction") {
  const MatrixXd x = m22(0, 1, 1, 0);
  const Graph k2(x);

  SUBCASE("pure Kronecker") {
    const Graph ai = build_interaction({k2, k2, {0, 0, 1}});
    MatrixXd expect = MatrixXd::Zero(4, 4);
    expect.block(0, 2, 2, 2) = x;
    expect.block(2, 0, 2, 2) = x;
    CHECK(ai.adj() == expect);
  }
  SUBCASE("supra-adjacency") {
    const Graph ai = build_interaction({k2, k2, {0.5, 0.5, 0}});
    const MatrixXd i2 = MatrixXd::Identity(2, 2);
    const MatrixXd expect = 0.5 * (oracle::kron_loops(i2, x) + oracle::kron_loops(x, i2));
    CHECK((ai.adj() - expect).norm() < 1e-15);
  }
  SUBCASE("equal weights against the triple loop") {
    Rng rng(11);
    const Graph gc = gen_erdos_renyi(3, 0.7, rng);
    const Graph gg = gen_erdos_renyi(4, 0.5, rng);
    const double t = 1.0 / 3.0;
    const MatrixXd ai = build_interaction({gc, gg, {t, t, 1.0 - 2.0 * t}}).adj();
    const MatrixXd expect =
        t * oracle::kron_loops(MatrixXd::Identity(3, 3), gg.adj()) +
        t * oracle::kron_loops(gc.adj(), MatrixXd::Identity(4, 4)) +
        (1.0 - 2.0 * t) * oracle::kron_loops(gc.adj(), gg.adj());
    CHECK((ai - expect).norm() < 1e-14);
  }
  SUBCASE("gamma outside the simplex") {
    CHECK(throws_kind(ErrorKind::InvalidGamma, [&] { build_interaction({k2, k2, {0.5, 0.6, 0}}); }));
    CHECK(throws_kind(ErrorKind::InvalidGamma, [&] { build_interaction({k2, k2, {-0.1, 0.1, 1}}); }));
  }
}

TEST_CASE("interaction spectrum and eigenvectors") {
  Rng rng(5);
  for (int t = 0; t < 10; ++t) {
    const MatrixXd ac = oracle::random_symmetric(3, rng);
    const MatrixXd ag = oracle::random_symmetric(2, rng);
    const Gamma g{0.2, 0.3, 0.5};
    const MatrixXd ai = interaction_matrix(ac, ag, g);
    CHECK((ai - ai.transpose()).norm() == 0.0);

    const EigDecomp ec = sym_evd(ac), eg = sym_evd(ag), ei = sym_evd(ai);
    std::vector<double> expect;
    for (Index i = 0; i < 3; ++i)
      for (Index j = 0; j < 2; ++j)
        expect.push_back(g.g1 * eg.values(j) + g.g2 * ec.values(i) + g.g3 * ec.values(i) * eg.values(j));
    std::sort(expect.begin(), expect.end(), std::greater<>());
    for (Index k = 0; k < 6; ++k) CHECK(std::abs(ei.values(k) - expect[static_cast<std::size_t>(k)]) < 1e-8);

    if (ei.min_gap > 1e-6) {
      const MatrixXd kv = oracle::kron_loops(ec.vectors, eg.vectors);
      for (Index c = 0; c < 6; ++c)
        CHECK((kv.transpose() * ei.vectors.col(c)).cwiseAbs().maxCoeff() > 1 - 1e-8);
    }
  }
}

TEST_CASE("symmetric eigendecomposition") {
  SUBCASE("identity") {
    const EigDecomp e = sym_evd(MatrixXd::Identity(3, 3));
    CHECK(e.values == VectorXd::Ones(3));
    CHECK((e.vectors.transpose() * e.vectors - MatrixXd::Identity(3, 3)).norm() < 1e-10);
    CHECK(e.nearly_degenerate());
  }
  SUBCASE("2x2 swap") {
    const EigDecomp e = sym_evd(m22(0, 1, 1, 0));
    CHECK(e.values(0) == doctest::Approx(1.0));
    CHECK(e.values(1) == doctest::Approx(-1.0));
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(e.vectors(0, 0) - r) < 1e-12);
    CHECK(std::abs(e.vectors(1, 0) - r) < 1e-12);
    // Tie on magnitude: the lowest index carries the positive sign.
    CHECK(std::abs(e.vectors(0, 1) - r) < 1e-12);
    CHECK(std::abs(e.vectors(1, 1) + r) < 1e-12);
  }
  SUBCASE("random 5x5 reconstruction and ordering") {
    Rng rng(2);
    const MatrixXd a = oracle::random_symmetric(5, rng);
    const EigDecomp e = sym_evd(a);
    const MatrixXd rec = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
    CHECK((rec - a).norm() / a.norm() < 1e-10);
    for (Index i = 0; i + 1 < 5; ++i) CHECK(e.values(i) >= e.values(i + 1));
    for (Index c = 0; c < 5; ++c) {
      Index arg;
      e.vectors.col(c).cwiseAbs().maxCoeff(&arg);
      CHECK(e.vectors(arg, c) > 0.0);
    }
    CHECK(sym_evd(a).vectors == e.vectors);
  }
  SUBCASE("non-finite input") {
    CHECK(throws_kind(ErrorKind::Numeric, [] { sym_evd(m22(0, INFINITY, INFINITY, 0)); }));
  }
}

TEST_CASE("max degree scale") {
  CHECK(max_degree_scale(gen_complete(3)) == 0.5);
  CHECK(max_degree_scale(gen_path(3)) == 0.5);
  CHECK(max_degree_scale(Graph::empty(4)) == 1.0);
}

TEST_CASE("edge list and dense csv round trip") {
  Rng rng(9);
  MatrixXd w = gen_erdos_renyi(7, 0.5, rng).adj();
  for (Index i = 0; i < 7; ++i)
    for (Index j = 0; j < i; ++j)
      if (w(i, j) != 0.0) w(i, j) = w(j, i) = 0.1 + 1.0 / static_cast<double>(i + 3 * j + 1);
  const Graph g(w);

  const auto el = temp_file("edges.csv");
  write_edge_list(g, el);
  CHECK(read_edge_list(el).adj() == g.adj());

  const auto dense = temp_file("dense.csv");
  write_matrix_csv(w, dense);
  CHECK(read_matrix_csv(dense) == w);

  {
    std::ofstream out(dense);
    out << "1,2,3\n4,5\n";
  }
  try {
    read_matrix_csv(dense);
    FAIL("ragged matrix accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }
  std::filesystem::remove(el);
  std::filesystem::remove(dense);
}
