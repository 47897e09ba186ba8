#include <doctest.h>

#include "oracles.hpp"
#include "pgl/serialize.hpp"

using namespace pgl;

namespace {

MatrixXd exact_template(const Graph& g) { return sym_evd(g.adj()).vectors; }

void check_feasible(const SpecTempProblem& p, const SolveReport& r) {
  CHECK((r.a_hat - r.a_hat.transpose()).norm() < 1e-8);
  CHECK(r.a_hat.diagonal().cwiseAbs().maxCoeff() <= p.eps + 1e-6);
  CHECK(r.a_hat.rowwise().sum().minCoeff() >= 1.0 - 1e-6);
}

// Connected ER draw, so the truth satisfies A·1 >= 1.
Graph connected_er(Index n, double p, Rng& rng) {
  for (;;) {
    Graph g = gen_erdos_renyi(n, p, rng);
    if (g.degrees().minCoeff() >= 1.0) return g;
  }
}

}  // namespace

TEST_CASE("problem validation") {
  CHECK_THROWS_AS(SpecTempProblem({MatrixXd::Ones(3, 3), 40, 1e-6}).validate(), Error);
  CHECK_THROWS_AS(SpecTempProblem({MatrixXd::Identity(3, 3), 0.0, 1e-6}).validate(), Error);
  CHECK_THROWS_AS(SpecTempProblem({MatrixXd::Identity(1, 1), 40, 1e-6}).validate(), Error);
  CHECK_THROWS_AS(solve_spectemp({MatrixXd::Ones(3, 3), 40, 1e-6}), Error);
}

TEST_CASE("complete graph template") {
  const SpecTempProblem p{exact_template(gen_complete(3)), 40.0, 1e-6};
  const SolveReport r = solve_spectemp(p);
  CHECK(r.converged);
  check_feasible(p, r);
  const double w = r.a_hat(0, 1);
  CHECK(w >= 0.5 - 1e-6);
  CHECK(std::abs(r.a_hat(0, 2) - w) < 1e-5);
  CHECK(std::abs(r.a_hat(1, 2) - w) < 1e-5);
  CHECK(binarize(r.a_hat, 0.9) == gen_complete(3).adj());
  CHECK(binarize(r.a_hat, 0.1) == gen_complete(3).adj());

  const auto ref = oracle::condat_vu(p.v, p.rho, p.eps, 200000);
  CHECK(ref.max_violation < 1e-9);
  CHECK(std::abs(r.objective - ref.objective) < 1e-6 * ref.objective + 1e-6);
  CHECK(r.objective == doctest::Approx(oracle::spectemp_value(p.v, r.a_hat, p.rho)));
}

TEST_CASE("identity template") {
  const SpecTempProblem p{MatrixXd::Identity(4, 4), 40.0, 1e-6};
  const SolveReport r = solve_spectemp(p);
  CHECK(r.converged);
  check_feasible(p, r);
  const auto ref = oracle::condat_vu(p.v, p.rho, p.eps, 200000);
  CHECK(std::abs(r.objective - ref.objective) <= 1e-5 * ref.objective);
}

TEST_CASE("agreement with the primal-dual reference on random templates") {
  Rng rng(derive_seed(1, "solver"));
  for (int t = 0; t < 5; ++t) {
    const SpecTempProblem p{exact_template(gen_erdos_renyi(6, 0.5, rng)), 40.0, 1e-6};
    const SolveReport r = solve_spectemp(p);
    CHECK(r.converged);
    check_feasible(p, r);
    CHECK(spectemp_violation(p, r.a_hat) < 1e-6);
    const auto ref = oracle::condat_vu(p.v, p.rho, p.eps, 200000);
    CHECK(std::abs(r.objective - ref.objective) / ref.objective < 1e-4);
  }
}

TEST_CASE("converged objective is no worse than the ground truth") {
  Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    const Graph g = connected_er(8, 0.4, rng);
    const SpecTempProblem p{exact_template(g), 40.0, 1e-6};
    const SolveReport r = solve_spectemp(p);
    REQUIRE(r.converged);
    check_feasible(p, r);
    const double truth = spectemp_objective(p, g.adj());
    CHECK(r.objective <= truth * (1.0 + 1e-5));
  }
}

TEST_CASE("template column signs do not matter") {
  Rng rng(4);
  const Graph g = connected_er(7, 0.5, rng);
  const MatrixXd v = exact_template(g);
  MatrixXd flipped = v;
  flipped.col(1) *= -1.0;
  flipped.col(4) *= -1.0;
  const SolveReport a = solve_spectemp({v, 40.0, 1e-6});
  const SolveReport b = solve_spectemp({flipped, 40.0, 1e-6});
  CHECK((a.a_hat - b.a_hat).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("iteration cap is reported, not thrown") {
  Rng rng(5);
  SolverOptions o;
  o.max_iter = 3;
  const SolveReport r = solve_spectemp({exact_template(connected_er(8, 0.4, rng)), 40.0, 1e-6}, o);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 3);
}

TEST_CASE("exact templates with a strong fit weight recover the interaction graph") {
  // The default fit weight of 40 leaves many exact-template instances with a
  // sparser optimum than the truth; a large weight pins Â to the template
  // span. Graphs whose span holds another sparse zero-diagonal matrix (e.g.
  // regular ones) stay ambiguous, hence the 9 of 10 bar.
  Rng rng(6);
  const Gamma gamma = Gamma::from_gamma1(0.01);
  const Graph gc = gen_path(3);
  const SolveReport rc = solve_spectemp({exact_template(gc), 1e4, 1e-6});
  CHECK(binarize(rc.a_hat) == gc.adj());
  int perfect = 0;
  for (int t = 0; t < 10; ++t) {
    const Graph gg = connected_er(10, 0.4, rng);
    const SolveReport rg = solve_spectemp({exact_template(gg), 1e4, 1e-6});
    const MatrixXd truth = edge_support(build_interaction({gc, gg, gamma}).adj());
    const Graph est = reconstruct_interaction(binarize(rc.a_hat), binarize(rg.a_hat), gamma);
    if (f1_score(edge_support(est.adj()), truth) == 1.0) ++perfect;
  }
  CHECK(perfect >= 9);
}

TEST_CASE("interaction reassembly") {
  Rng rng(7);
  const Graph gc = gen_path(3), gg = gen_erdos_renyi(5, 0.5, rng);
  const Gamma g{0.2, 0.3, 0.5};
  CHECK(reconstruct_interaction(gc.adj(), gg.adj(), g).adj() == build_interaction({gc, gg, g}).adj());
  CHECK(reconstruct_interaction(MatrixXd::Zero(3, 3), MatrixXd::Zero(5, 5), g).adj().isZero(0.0));
  CHECK_THROWS_AS(reconstruct_interaction(gc.adj(), gg.adj(), {0.5, 0.5, 0.5}), Error);
}

TEST_CASE("binarization") {
  MatrixXd a = MatrixXd::Zero(3, 3);
  a(0, 1) = a(1, 0) = 1.0;
  a(0, 2) = a(2, 0) = 0.9;
  a(1, 2) = a(2, 1) = 0.1;
  a(0, 0) = 5.0;  // diagonal never counts
  MatrixXd expect = MatrixXd::Zero(3, 3);
  expect(0, 1) = expect(1, 0) = expect(0, 2) = expect(2, 0) = 1.0;
  CHECK(binarize(a, 0.3) == expect);
  CHECK(binarize(MatrixXd::Zero(4, 4)).isZero(0.0));
  CHECK(binarize(0.7 * gen_complete(3).adj(), 0.99) == gen_complete(3).adj());
  CHECK(binarize(-a, 0.3) == expect);
  CHECK_THROWS_AS(binarize(a, 1.5), Error);
}

TEST_CASE("f1 score") {
  const MatrixXd k4 = gen_complete(4).adj();
  CHECK(f1_score(k4, k4) == 1.0);

  MatrixXd a = MatrixXd::Zero(4, 4), b = MatrixXd::Zero(4, 4);
  a(0, 1) = a(1, 0) = 1;
  b(2, 3) = b(3, 2) = 1;
  CHECK(f1_score(a, b) == 0.0);
  CHECK(f1_score(MatrixXd::Zero(4, 4), MatrixXd::Zero(4, 4)) == 0.0);

  // Truth: 4 edges; estimate keeps 3 of them plus one false edge.
  MatrixXd truth = MatrixXd::Zero(5, 5), est = MatrixXd::Zero(5, 5);
  auto set = [](MatrixXd& m, int i, int j) { m(i, j) = m(j, i) = 1; };
  set(truth, 0, 1); set(truth, 1, 2); set(truth, 2, 3); set(truth, 3, 4);
  set(est, 0, 1); set(est, 1, 2); set(est, 2, 3); set(est, 0, 4);
  CHECK(f1_score(est, truth) == doctest::Approx(0.75));
  CHECK_THROWS_AS(f1_score(est, k4), Error);
}

TEST_CASE("threshold sweep") {
  MatrixXd a = MatrixXd::Zero(3, 3);
  a(0, 1) = a(1, 0) = 1.0;
  a(1, 2) = a(2, 1) = 0.2;
  MatrixXd truth = MatrixXd::Zero(3, 3);
  truth(0, 1) = truth(1, 0) = 1.0;
  const auto pts = f1_threshold_sweep(a, truth, {0.1, 0.5});
  REQUIRE(pts.size() == 2);
  CHECK(pts[0].f1 == doctest::Approx(2.0 / 3.0));
  CHECK(pts[1].f1 == 1.0);
}

TEST_CASE("solve report json") {
  const SolveReport r = solve_spectemp({exact_template(gen_complete(3)), 40.0, 1e-6});
  const json j = r;
  CHECK(j.at("converged") == true);
  CHECK(j.at("iterations") == r.iterations);
  CHECK(j.at("lambda_hat").size() == 3);
  CHECK(j.at("objective").get<double>() == r.objective);
}
