#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support/oracles.hpp"
#include "uh/embedding.hpp"

#include <algorithm>
#include <cmath>

using namespace uh;

namespace {

const Signature kQ21{2, 1, -1.0};

TrainingConfig small_config(std::uint64_t seed = 0) {
    TrainingConfig cfg;
    cfg.signature = kQ21;
    cfg.tau = 1.0;
    cfg.seed = seed;
    return cfg;
}

EmbeddingSet random_embeddings(int n, std::uint64_t seed, const Signature& sig = kQ21,
                               double spread = 1.0) {
    oracles::Sampler s(seed);
    EmbeddingSet emb;
    emb.signature = sig;
    for (int i = 0; i < n; ++i) emb.points.push_back(s.point(sig, spread));
    return emb;
}

}  // namespace

TEST_CASE("init_embeddings lands near the pole, deterministically") {
    TrainingConfig cfg = small_config(42);
    cfg.epsilon = 0.1;
    const EmbeddingSet a = init_embeddings(25, cfg);
    const EmbeddingSet b = init_embeddings(25, cfg);
    REQUIRE(a.size() == 25);
    for (int i = 0; i < 25; ++i) {
        CHECK(a.points[i].vec() == b.points[i].vec());
        CHECK(manifold_defect(a.points[i].vec(), kQ21) <= 1e-9);
        CHECK((a.points[i].vec() - Vec::Unit(4, 0)).norm() < 0.5);
    }

    cfg.epsilon = 1e-9;
    for (const ManifoldPoint& p : init_embeddings(5, cfg).points)
        CHECK((p.vec() - Vec::Unit(4, 0)).norm() < 1e-6);

    cfg.seed = 43;
    cfg.epsilon = 0.1;
    CHECK(init_embeddings(25, cfg).points[0].vec() != a.points[0].vec());
}

TEST_CASE("loss on a single edge with an empty weaker set is zero") {
    const WeightedGraph g = load_graph(std::string("0 1 1\n"));
    const EmbeddingSet emb = random_embeddings(2, 1);
    CHECK(loss(emb, g, 1e-2, {{}}) == doctest::Approx(0.0));
}

TEST_CASE("uniform softmax over two equal distances gives log 2") {
    const WeightedGraph g = load_graph(std::string("0 1 2\n2 3 1\n"));
    EmbeddingSet emb;
    emb.signature = kQ21;
    oracles::Sampler s(5);
    const ManifoldPoint a = s.point(kQ21);
    const ManifoldPoint b = s.point(kQ21);
    emb.points = {a, b, a, b};  // d(0,1) == d(2,3)
    // hand-made weaker sets: the higher-capacity edge ranks above the lower one
    const WeakerSets sets = {{{2, 3}}, {}};
    CHECK(loss(emb, g, 0.7, sets) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("log-sum-exp loss equals naive summation on small fixtures") {
    const WeightedGraph g = load_graph(std::string("0 1 3\n1 2 2\n2 3 1\n"));
    const WeakerSets sets = materialize_weaker_sets(g);
    for (double tau : {0.1, 1.0}) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const EmbeddingSet emb = random_embeddings(4, seed);
            const double lse = loss(emb, g, tau, sets);
            const double naive = oracles::naive_loss(emb, g, tau, sets);
            CHECK(lse == doctest::Approx(naive).epsilon(1e-10));
            CHECK(lse >= 0.0);
        }
    }
}

TEST_CASE("loss stays finite at tau = 1e-5 where the naive form does not") {
    const WeightedGraph g = load_graph(std::string("0 1 3\n1 2 2\n2 3 1\n"));
    const WeakerSets sets = materialize_weaker_sets(g);
    const EmbeddingSet emb = random_embeddings(4, 9, kQ21, 2.0);
    const double naive = oracles::naive_loss(emb, g, 1e-5, sets);
    CHECK(!std::isfinite(naive));  // exp(-d/tau) underflows to 0/0
    const double lse = loss(emb, g, 1e-5, sets);
    CHECK(std::isfinite(lse));
    CHECK(lse >= 0.0);
}

TEST_CASE("loss is invariant under node relabeling") {
    oracles::Sampler s(17);
    const WeightedGraph g = oracles::synthetic_hierarchy(12, 3);
    const EmbeddingSet emb = random_embeddings(12, 21);
    const double base = loss(emb, g, 0.5, materialize_weaker_sets(g));

    std::vector<int> perm(12);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = 11; i > 0; --i)
        std::swap(perm[i], perm[s.rng.below(i + 1)]);

    std::string text = "n=12\n";
    for (const Edge& e : g.edges)
        text += std::to_string(std::min(perm[e.i], perm[e.j])) + " " +
                std::to_string(std::max(perm[e.i], perm[e.j])) + " " +
                std::to_string(e.capacity) + "\n";
    const WeightedGraph gp = load_graph(text);
    EmbeddingSet embp;
    embp.signature = kQ21;
    embp.points.assign(12, emb.points[0]);
    for (int i = 0; i < 12; ++i) embp.points[perm[i]] = emb.points[i];

    const double permuted = loss(embp, gp, 0.5, materialize_weaker_sets(gp));
    CHECK(permuted == doctest::Approx(base).epsilon(1e-10));
}

TEST_CASE("gradients vanish on a singleton-edge instance and mirror symmetric ones") {
    // two nodes, one edge, empty weaker set: the loss is constantly zero
    const WeightedGraph g2 = load_graph(std::string("0 1 1\n"));
    const EmbeddingSet emb2 = random_embeddings(2, 31);
    for (const Vec& g : loss_gradients(emb2, g2, 1e-2, {{}}))
        CHECK(g.norm() == doctest::Approx(0.0));

    // mirrored pair with a node at the pole: gradients reflect across the mirror
    const WeightedGraph g3 = load_graph(std::string("n=3\n0 1 1\n"));
    EmbeddingSet emb3;
    emb3.signature = kQ21;
    Vec a(4), b(4), pole(4);
    a << std::cosh(0.7), 0, std::sinh(0.7), 0;
    b << std::cosh(0.7), 0, -std::sinh(0.7), 0;
    pole << 1, 0, 0, 0;
    emb3.points = {ManifoldPoint::checked(a, kQ21), ManifoldPoint::checked(b, kQ21),
                   ManifoldPoint::checked(pole, kQ21)};
    const auto grads = loss_gradients(emb3, g3, 1.0, materialize_weaker_sets(g3));
    Vec mirrored = grads[1];
    mirrored[2] = -mirrored[2];
    CHECK((grads[0] - mirrored).norm() <= 1e-12 * std::max(1.0, grads[0].norm()));
    CHECK(grads[0].norm() == doctest::Approx(mirrored.norm()));
}

TEST_CASE("analytic loss gradients match central finite differences") {
    oracles::Sampler s(37);
    int instances = 0;
    std::uint64_t seed = 100;
    while (instances < 20) {
        const int n = 3 + static_cast<int>(s.rng.below(4));  // 3..6 nodes
        std::string text = "n=" + std::to_string(n) + "\n";
        int edge_count = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (s.rng.unit() < 0.55) {
                    text += std::to_string(i) + " " + std::to_string(j) + " " +
                            std::to_string(1 + s.rng.below(3)) + "\n";
                    ++edge_count;
                }
        if (edge_count == 0) continue;
        const WeightedGraph g = load_graph(text);
        const WeakerSets sets = materialize_weaker_sets(g);
        const EmbeddingSet emb = random_embeddings(n, seed++);
        const double tau = 0.5;

        const auto analytic = loss_gradients(emb, g, tau, sets);
        bool usable = true;
        for (int i = 0; i < n && usable; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double r =
                    scalar_product(emb.points[i].vec(), emb.points[j].vec(), kQ21);
                // keep clear of the guarded zero-distance singularity where the
                // loss is analytically non-differentiable
                if (std::abs(r / kQ21.beta - 1.0) < 1e-4) {
                    usable = false;
                    break;
                }
            }
        if (!usable) continue;

        for (int node = 0; node < n; ++node) {
            auto f = [&](const Vec& z) {
                EmbeddingSet moved = emb;
                moved.points[node] = ManifoldPoint::trusted(z, kQ21);
                return loss(moved, g, tau, sets);
            };
            const Vec numeric =
                oracles::finite_difference_gradient(f, emb.points[node].vec());
            CHECK((analytic[node] - numeric).norm() <=
                  1e-4 * std::max(1.0, numeric.norm()));
        }
        ++instances;
    }
}

TEST_CASE("first training iteration agrees with the reference loss path") {
    const WeightedGraph g = oracles::synthetic_hierarchy(15, 2);
    TrainingConfig cfg = small_config(11);
    cfg.tau = 0.5;
    cfg.eta = 1e-3;
    cfg.max_iterations = 1;
    cfg.stop_at_full_satisfaction = false;

    const EmbeddingSet trained = train(g, cfg);
    const EmbeddingSet init = init_embeddings(g.n, cfg);
    const double expected = loss(init, g, cfg.tau, materialize_weaker_sets(g));
    REQUIRE(trained.trace.size() == 1);
    CHECK(trained.trace[0].loss == doctest::Approx(expected).epsilon(1e-12));

    // one manual descent step from the same gradients lands on the same points
    const auto grads = loss_gradients(init, g, cfg.tau, materialize_weaker_sets(g));
    for (int i = 0; i < g.n; ++i) {
        const ManifoldPoint manual = step(init.points[i], grads[i], cfg.eta);
        CHECK((trained.points[i].vec() - manual.vec()).norm() <=
              1e-12 * std::max(1.0, manual.vec().norm()));
    }
}

TEST_CASE("trivial two-node graph stops immediately at zero loss") {
    const WeightedGraph g = load_graph(std::string("0 1 1\n"));
    TrainingConfig cfg = small_config(3);
    cfg.max_iterations = 500;
    const EmbeddingSet emb = train(g, cfg);
    CHECK(emb.iterations == 1);
    CHECK(emb.final_loss == doctest::Approx(0.0));
}

TEST_CASE("training is reproducible for a fixed seed") {
    const WeightedGraph g = oracles::synthetic_hierarchy(15, 2);
    TrainingConfig cfg = small_config(123);
    cfg.tau = 1.0;
    cfg.epsilon = 0.5;
    cfg.eta = 1e-3;
    cfg.max_iterations = 40;
    const EmbeddingSet a = train(g, cfg);
    const EmbeddingSet b = train(g, cfg);
    REQUIRE(a.size() == b.size());
    for (int i = 0; i < a.size(); ++i) CHECK(a.points[i].vec() == b.points[i].vec());
}

TEST_CASE("training in sampled-negative mode runs and decreases the loss") {
    const WeightedGraph g = oracles::synthetic_hierarchy(30, 4);
    TrainingConfig cfg = small_config(7);
    cfg.tau = 1.0;
    cfg.epsilon = 0.5;
    cfg.eta = 1e-3;
    cfg.max_iterations = 120;
    cfg.negative_samples = 10;
    const EmbeddingSet emb = train(g, cfg);
    double first = 0, last = 0;
    const int window = 20;
    for (int i = 0; i < window; ++i) {
        first += emb.trace[i].loss;
        last += emb.trace[emb.trace.size() - 1 - i].loss;
    }
    CHECK(last < first);
}

TEST_CASE("phi-mode training decreases the loss") {
    const WeightedGraph g = oracles::synthetic_hierarchy(15, 2);
    TrainingConfig cfg = small_config(19);
    cfg.tau = 1.0;
    cfg.epsilon = 0.5;
    cfg.eta = 1e-3;
    cfg.max_iterations = 150;
    cfg.mode = OptimizerMode::EuclideanViaPhi;
    cfg.stop_at_full_satisfaction = false;
    const EmbeddingSet emb = train(g, cfg);
    CHECK(emb.trace.back().loss < emb.trace.front().loss);
    for (const ManifoldPoint& p : emb.points)
        CHECK(manifold_defect(p.vec(), kQ21) <= 1e-8);
}

TEST_CASE("constraint satisfaction") {
    const WeightedGraph g = load_graph(std::string("0 1 1\n1 2 1\n"));

    EmbeddingSet collapsed;
    collapsed.signature = kQ21;
    const ManifoldPoint p = random_embeddings(1, 5).points[0];
    collapsed.points = {p, p, p};
    CHECK(constraint_satisfaction(collapsed, g) == doctest::Approx(0.0));

    // 3-node path embedded so the non-edge pair (0,2) is farthest
    EmbeddingSet good;
    good.signature = kQ21;
    Vec a(4), b(4), c(4);
    a << std::cosh(0.8), 0, -std::sinh(0.8), 0;
    b << 1, 0, 0, 0;
    c << std::cosh(0.8), 0, std::sinh(0.8), 0;
    good.points = {ManifoldPoint::checked(a, kQ21), ManifoldPoint::checked(b, kQ21),
                   ManifoldPoint::checked(c, kQ21)};
    CHECK(constraint_satisfaction(good, g) == doctest::Approx(1.0));
}

TEST_CASE("constraint satisfaction equals the brute-force ordering count") {
    oracles::Sampler s(41);
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const WeightedGraph g = oracles::synthetic_hierarchy(10, seed);
        const EmbeddingSet emb = random_embeddings(10, seed + 50);
        const Eigen::MatrixXd D = dissimilarity_matrix(emb);

        long long total = 0, sat = 0;
        for (std::size_t k = 0; k < g.edges.size(); ++k) {
            const double dk = D(g.edges[k].i, g.edges[k].j);
            for (const auto& [a, b] : weaker_set(g, static_cast<int>(k))) {
                ++total;
                sat += dk < D(a, b) ? 1 : 0;
            }
        }
        const double expected =
            total == 0 ? 1.0 : static_cast<double>(sat) / static_cast<double>(total);
        CHECK(constraint_satisfaction(D, g) == doctest::Approx(expected).epsilon(1e-15));
    }
}

TEST_CASE("delta scores") {
    EmbeddingSet collapsed;
    collapsed.signature = kQ21;
    const ManifoldPoint p = random_embeddings(1, 5).points[0];
    collapsed.points = {p, p, p};
    for (double d : delta_scores(collapsed)) CHECK(d == doctest::Approx(0.0));

    const EmbeddingSet two = random_embeddings(2, 6);
    const double c = dissimilarity(two.points[0], two.points[1]);
    const auto deltas = delta_scores(two);
    CHECK(deltas[0] == doctest::Approx(c));
    CHECK(deltas[1] == doctest::Approx(c));

    const EmbeddingSet many = random_embeddings(9, 7);
    const auto fast = delta_scores(many);
    for (int i = 0; i < 9; ++i) {
        double direct = 0.0;
        for (int j = 0; j < 9; ++j)
            direct += dissimilarity(many.points[i], many.points[j]);
        CHECK(fast[i] == doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("leader ranks") {
    CHECK(leader_ranks({0.5, 2.0, 3.0}, {0}) == std::vector<int>{1});
    CHECK(leader_ranks({2.0, 0.5, 0.7}, {1, 2}) == std::vector<int>{1, 2});
    // ties break by node index
    CHECK(leader_ranks({1.0, 1.0, 1.0}, {2}) == std::vector<int>{3});
    CHECK_THROWS_AS(leader_ranks({1.0, 2.0}, {5}), std::out_of_range);
}

TEST_CASE("spearman rho") {
    CHECK(spearman_rho({1, 2, 3, 4}, {10, 20, 30, 40}) == doctest::Approx(1.0));
    CHECK(spearman_rho({1, 2, 3, 4}, {4, 3, 2, 1}) == doctest::Approx(-1.0));
    CHECK(spearman_rho({1, 2, 3, 4}, {1, 3, 2, 4}) == doctest::Approx(0.8));
    CHECK_THROWS_AS(spearman_rho({1, 2}, {1, 2, 3}), DimensionError);
    CHECK_THROWS_AS(spearman_rho({2, 2, 2}, {1, 2, 3}), UndefinedCorrelationError);
    // average ranks for ties
    CHECK(spearman_rho({1, 1, 2, 3}, {1, 1, 2, 3}) == doctest::Approx(1.0));
}

TEST_CASE("hierarchy correlation orients importance against delta") {
    // perfect hierarchy recovery: strongest node has the smallest delta
    CHECK(hierarchy_correlation({9, 5, 1}, {0.1, 0.5, 0.9}) == doctest::Approx(1.0));
    CHECK(hierarchy_correlation({9, 5, 1}, {0.9, 0.5, 0.1}) == doctest::Approx(-1.0));
}

TEST_CASE("recall at 1") {
    const WeightedGraph complete = load_graph(std::string("0 1 1\n0 2 1\n1 2 1\n"));
    const EmbeddingSet emb3 = random_embeddings(3, 8);
    CHECK(recall_at_1(emb3, complete) == doctest::Approx(1.0));

    const WeightedGraph empty = load_graph(std::string("n=3\n"));
    CHECK(recall_at_1(emb3, empty) == doctest::Approx(0.0));

    // 4-node fixture with a known nearest-neighbor structure
    const WeightedGraph path = load_graph(std::string("0 1 1\n1 2 1\n2 3 1\n"));
    EmbeddingSet emb4;
    emb4.signature = kQ21;
    auto on_sheet = [](double t) {
        Vec v(4);
        v << std::cosh(t), 0, std::sinh(t), 0;
        return ManifoldPoint::checked(v, Signature{2, 1, -1.0});
    };
    emb4.points = {on_sheet(0.0), on_sheet(0.4), on_sheet(1.4), on_sheet(1.5)};
    // nearest neighbors: 0->1 (edge), 1->0 (edge), 2->3 (edge), 3->2 (edge)
    CHECK(recall_at_1(emb4, path) == doctest::Approx(1.0));
    // sheet coordinates 0, 1.0, 1.1, 0.05: nodes 0 and 3 are mutually nearest
    // but not adjacent, nodes 1 and 2 still find their edge
    emb4.points = {on_sheet(0.0), on_sheet(1.0), on_sheet(1.1), on_sheet(0.05)};
    CHECK(recall_at_1(emb4, path) == doctest::Approx(2.0 / 4.0));
}

TEST_CASE("euclidean baseline trains deterministically") {
    const WeightedGraph g = oracles::synthetic_hierarchy(15, 2);
    EuclideanTrainingConfig cfg;
    cfg.dim = 4;
    cfg.tau = 1e-1;
    cfg.eta = 1e-2;
    cfg.max_iterations = 60;
    cfg.seed = 5;
    const EuclideanEmbeddingSet a = train_euclidean(g, cfg);
    const EuclideanEmbeddingSet b = train_euclidean(g, cfg);
    CHECK(a.trace.back().loss < a.trace.front().loss);
    for (std::size_t i = 0; i < a.points.size(); ++i)
        CHECK(a.points[i] == b.points[i]);

    const Eigen::MatrixXd D = euclidean_distance_matrix(a.points);
    CHECK(D(0, 1) == doctest::Approx((a.points[0] - a.points[1]).norm()));
    CHECK(constraint_satisfaction(D, g) >= 0.0);
}
