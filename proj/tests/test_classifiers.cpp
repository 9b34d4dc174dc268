#include "mammo/classifiers/model.hpp"
#include "mammo/classifiers/pseudoinverse.hpp"
#include "mammo/evaluation/protocol.hpp"
#include "mammo/random.hpp"

#include <doctest.h>

#include <numeric>
#include <set>

using namespace mammo;

namespace {

struct Blobs {
  FeatureRows X;
  ClassIds y;
};

/// Isotropic Gaussian blobs with centres `separation` standard deviations apart.
Blobs gaussian_blobs(int per_class, int dims, double separation, std::uint64_t seed) {
  Rng rng(seed);
  Blobs b;
  b.X.resize(3 * per_class, dims);
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < per_class; ++i) {
      const Eigen::Index row = c * per_class + i;
      for (int d = 0; d < dims; ++d)
        b.X(row, d) = rng.normal() + (d % 3 == c ? separation : 0.0);
      b.y.push_back(c);
    }
  return b;
}

Eigen::MatrixXd random_matrix(Eigen::Index r, Eigen::Index c, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i)
      m(i, j) = rng.uniform(-1.0, 1.0);
  return m;
}

Blobs xor_data() {
  Blobs b;
  b.X.resize(4, 2);
  b.X << 0, 0, 0, 1, 1, 0, 1, 1;
  b.y = {0, 1, 1, 0};
  return b;
}

/// Hardcoded overlapping three-class set; the reference values below are the
/// libsvm (shrinking off) solutions for it, with the offsets solved to a
/// 1e-10 KKT tolerance so they pin down the optimum itself.
Blobs libsvm_toy() {
  const double rows[][4] = {
      {-0.481, -0.795, -0.149, 0}, {0.252, 0.682, 0.066, 0},  {-0.332, -0.471, 0.449, 0},
      {0.981, 0.164, -0.740, 0},   {-0.575, 0.960, 0.122, 0}, {-1.039, -0.050, -0.698, 0},
      {-0.378, -0.293, -0.428, 0}, {0.332, -0.038, -0.354, 0}, {1.446, 1.298, -0.986, 1},
      {1.046, 0.212, -0.104, 1},   {0.426, 0.812, -0.023, 1},  {1.017, 0.171, -0.238, 1},
      {0.545, -0.013, 0.135, 1},   {0.534, 1.502, 0.430, 1},   {0.001, 0.963, -0.661, 1},
      {1.220, 0.826, -1.193, 1},   {0.260, 1.347, 1.577, 2},   {-0.309, 1.943, 0.341, 2},
      {0.201, 0.996, 1.869, 2},    {0.741, 2.959, 1.385, 2},   {0.907, 2.004, 0.636, 2},
      {0.358, 2.310, 0.762, 2},    {0.513, 1.487, 1.366, 2},   {0.181, 1.409, 1.145, 2},
  };
  Blobs b;
  b.X.resize(24, 3);
  for (int i = 0; i < 24; ++i) {
    b.X.row(i) << rows[i][0], rows[i][1], rows[i][2];
    b.y.push_back(static_cast<int>(rows[i][3]));
  }
  return b;
}

ClassIds labels_from(const std::string &digits) {
  ClassIds y;
  for (char c : digits)
    y.push_back(c - '0');
  return y;
}

FeatureMatrix as_matrix(const Blobs &b) {
  FeatureMatrix m;
  m.extractor_id = "toy";
  m.values = b.X;
  for (int label : b.y) {
    m.labels.push_back(static_cast<ClassLabel>(label));
    m.synthetic.push_back(0);
  }
  return m;
}

double mean_test_accuracy(const std::vector<RunRecord> &runs) {
  double s = 0.0;
  for (const auto &r : runs)
    s += r.test_accuracy;
  return s / static_cast<double>(runs.size());
}

} // namespace

// ---------------------------------------------------------------------------
// Pseudoinverse and ELM

TEST_CASE("pseudoinverse satisfies the Penrose conditions") {
  CHECK(pseudoinverse(Eigen::MatrixXd::Identity(6, 6)).isApprox(Eigen::MatrixXd::Identity(6, 6)));
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Eigen::MatrixXd A = random_matrix(20, 5, seed);
    if (seed % 2 == 0)
      A.col(4) = A.col(0) + 2.0 * A.col(1); // rank deficient
    for (const Eigen::MatrixXd &M : {A, Eigen::MatrixXd(A.transpose())}) {
      const Eigen::MatrixXd P = pseudoinverse(M);
      CHECK((M * P * M - M).cwiseAbs().maxCoeff() < 1e-8);
      CHECK((P * M * P - P).cwiseAbs().maxCoeff() < 1e-8);
      CHECK(((M * P).transpose() - M * P).cwiseAbs().maxCoeff() < 1e-8);
      CHECK(((P * M).transpose() - P * M).cwiseAbs().maxCoeff() < 1e-8);
    }
  }
  CHECK(pseudoinverse(Eigen::MatrixXd(0, 3)).rows() == 3);
}

TEST_CASE("ELM output weights are the least-squares solution") {
  const Blobs b = gaussian_blobs(60, 8, 2.0, 3);
  for (ElmKernel k : {ElmKernel::Sigmoid, ElmKernel::Linear, ElmKernel::Rbf, ElmKernel::Sine}) {
    const ElmConfig cfg{40, k, 7};
    const ElmModel m = ElmModel::train(b.X, b.y, cfg);
    const Eigen::MatrixXd H = m.hidden(b.X);
    const Eigen::MatrixXd T = one_hot(b.y, m.classes());
    const Eigen::Index rank = H.colPivHouseholderQr().rank();
    // A full-rank H has a unique minimiser; otherwise compare the minimum-norm one.
    const Eigen::MatrixXd reference = rank == H.cols()
                                          ? Eigen::MatrixXd(H.colPivHouseholderQr().solve(T))
                                          : Eigen::MatrixXd(H.completeOrthogonalDecomposition().solve(T));
    if (rank == H.cols())
      CHECK((m.output_weights() - reference).cwiseAbs().maxCoeff() < 1e-6);
    CHECK(std::abs((H * m.output_weights() - T).norm() - (H * reference - T).norm()) < 1e-6);
    CHECK((m.outputs(b.X) - H * m.output_weights()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("ELM kernel names and activations") {
  for (std::string_view name : {"rbf", "linear", "polynomial", "wavelet", "sigmoid", "sine", "hardlim", "tribas"}) {
    const auto k = parse_elm_kernel(name);
    REQUIRE(k.has_value());
    CHECK(to_string(*k) == name);
  }
  CHECK_FALSE(parse_elm_kernel("gaussian").has_value());

  // One input, one hidden unit: recover z = w x + b from the linear kernel and
  // check each activation against its formula.
  FeatureRows X(5, 1);
  X << -2.0, -0.5, 0.0, 0.3, 1.7;
  const ClassIds y{0, 0, 1, 1, 1};
  const Eigen::VectorXd z = ElmModel::train(X, y, {1, ElmKernel::Linear, 5}).hidden(X).col(0);
  const auto expect = [&](ElmKernel k, auto formula) {
    const Eigen::VectorXd h = ElmModel::train(X, y, {1, k, 5}).hidden(X).col(0);
    for (Eigen::Index i = 0; i < z.size(); ++i)
      CHECK(h[i] == doctest::Approx(formula(z[i])).epsilon(1e-12));
  };
  expect(ElmKernel::Sigmoid, [](double v) { return 1.0 / (1.0 + std::exp(-v)); });
  expect(ElmKernel::Sine, [](double v) { return std::sin(v); });
  expect(ElmKernel::Hardlim, [](double v) { return v >= 0.0 ? 1.0 : 0.0; });
  expect(ElmKernel::Tribas, [](double v) { return std::max(0.0, 1.0 - std::abs(v)); });
  expect(ElmKernel::Polynomial, [](double v) { return (v + 1.0) * (v + 1.0); });
  expect(ElmKernel::Wavelet, [](double v) { return std::cos(1.75 * v) * std::exp(-v * v / 2.0); });
  const Eigen::VectorXd rbf = ElmModel::train(X, y, {1, ElmKernel::Rbf, 5}).hidden(X).col(0);
  CHECK((rbf.array() > 0.0).all());
  CHECK((rbf.array() <= 1.0).all());
}

TEST_CASE("ELM fits XOR and is deterministic") {
  const Blobs x = xor_data();
  const ElmModel m = ElmModel::train(x.X, x.y, {100, ElmKernel::Sigmoid, 1});
  CHECK(m.predict(x.X) == x.y);
  const ElmModel again = ElmModel::train(x.X, x.y, {100, ElmKernel::Sigmoid, 1});
  const FeatureRows probe = random_matrix(30, 2, 9);
  CHECK(m.predict(probe) == again.predict(probe));
  FeatureRows dup(2, 2);
  dup << 0.3, 0.7, 0.3, 0.7;
  const auto p = m.predict(dup);
  CHECK(p[0] == p[1]);
  CHECK_THROWS_AS(m.predict(FeatureRows::Zero(1, 3)), ClassifierError);
  CHECK_THROWS_AS(ElmModel::train(x.X, x.y, {0, ElmKernel::Sigmoid, 1}), std::invalid_argument);
}

TEST_CASE("linear ELM separates distant blobs under cross-validation") {
  const FeatureMatrix m = as_matrix(gaussian_blobs(40, 6, 10.0, 11));
  const auto runs = run_cv(m, ElmConfig{100, ElmKernel::Linear, 1}, make_fold_plan(m.rows(), 10, 1));
  REQUIRE(runs.size() == 10);
  CHECK(mean_test_accuracy(runs) >= 99.0);
}

// ---------------------------------------------------------------------------
// SVM

TEST_CASE("two-point SVM matches the closed-form maximum margin") {
  FeatureRows X(2, 1);
  X << -1.0, 1.0;
  const Eigen::Vector2d y(1.0, -1.0);
  SvmConfig cfg;
  cfg.C = 1000.0;
  const BinarySvm svm = train_binary_svm(X, y, cfg, 1.0);
  CHECK(svm.alpha[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(svm.alpha[1] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(std::abs(svm.rho) < 1e-9);
  CHECK(svm.support_vectors.rows() == 2);
  FeatureRows zero(1, 1);
  zero << 0.0;
  CHECK(std::abs(svm.decision(zero.row(0))) < 1e-9);
  CHECK(svm.decision(X.row(0)) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(svm.decision(X.row(1)) == doctest::Approx(-1.0).epsilon(1e-9));

  const ClassIds labels{4, 7};
  const SvmModel multi = SvmModel::train(X, labels, cfg);
  FeatureRows q(4, 1);
  q << -3.0, -0.1, 0.1, 3.0;
  CHECK(multi.predict(q) == ClassIds{4, 4, 7, 7});
}

TEST_CASE("SMO meets the KKT conditions and increases the dual objective") {
  const Blobs b = libsvm_toy();
  for (SvmKernel k : {SvmKernel::Linear, SvmKernel::Polynomial, SvmKernel::Rbf, SvmKernel::Sigmoid}) {
    SvmConfig cfg;
    cfg.kernel = k;
    cfg.C = 2.0;
    cfg.record_objective = true;
    const SvmModel m = SvmModel::train(b.X, b.y, cfg);
    REQUIRE(m.machines().size() == 3);
    for (const auto &pair : m.machines()) {
      std::vector<Eigen::Index> rows;
      for (Eigen::Index i = 0; i < b.X.rows(); ++i)
        if (b.y[static_cast<std::size_t>(i)] == pair.first || b.y[static_cast<std::size_t>(i)] == pair.second)
          rows.push_back(i);
      const FeatureRows sub = b.X(rows, Eigen::all);
      CHECK(kkt_violation(pair.machine, sub) <= cfg.tolerance);
      const auto &trace = pair.machine.objective_trace;
      REQUIRE_FALSE(trace.empty());
      for (std::size_t i = 1; i < trace.size(); ++i)
        CHECK(trace[i] >= trace[i - 1] - 1e-12);
      CHECK((pair.machine.alpha.array() >= 0.0).all());
      CHECK((pair.machine.alpha.array() <= cfg.C).all());
      CHECK(std::abs(pair.machine.alpha.dot(pair.machine.y)) < 1e-9);
    }
  }
}

TEST_CASE("SVM reproduces the libsvm solution on a toy set") {
  const Blobs b = libsvm_toy();
  struct Reference {
    SvmKernel kernel;
    double gamma, coef0;
    double rho[3];
    int support[3]; // support vectors per class
    const char *predictions;
  };
  const Reference refs[] = {
      {SvmKernel::Linear, 1.0 / 3.0, 0.0, {-0.6330291580, -2.3578161641, -1.8541788067}, {4, 5, 4},
       "010100001111120122222222"},
      {SvmKernel::Polynomial, 0.5, 1.0, {-0.8812754467, -1.4256272371, -3.0823833530}, {5, 6, 3},
       "010000001111111122222222"},
      {SvmKernel::Rbf, 0.8, 0.0, {0.1346141785, -0.0147845293, 0.1344439174}, {7, 8, 5},
       "010100001111121122222222"},
      {SvmKernel::Sigmoid, 0.2, -0.5, {-0.4781468009, -0.9047004733, -1.1738545393}, {6, 6, 4},
       "010100001111121122222222"},
  };
  for (const auto &ref : refs) {
    SvmConfig cfg;
    cfg.kernel = ref.kernel;
    cfg.C = 2.0;
    cfg.gamma = ref.gamma;
    cfg.coef0 = ref.coef0;
    const SvmModel m = SvmModel::train(b.X, b.y, cfg);
    SvmConfig tight = cfg;
    tight.tolerance = 1e-10;
    const SvmModel exact = SvmModel::train(b.X, b.y, tight);
    INFO("kernel " << to_string(ref.kernel));
    std::vector<std::set<Eigen::Index>> sv(3);
    for (std::size_t p = 0; p < 3; ++p) {
      const BinarySvm &machine = m.machines()[p].machine;
      CHECK(std::abs(exact.machines()[p].machine.rho - ref.rho[p]) < 1e-6);
      CHECK(std::abs(machine.rho - ref.rho[p]) < cfg.tolerance);
      // Collect support-vector rows by class, pooled over the pairwise machines.
      for (Eigen::Index s = 0; s < machine.support_vectors.rows(); ++s)
        for (Eigen::Index i = 0; i < b.X.rows(); ++i)
          if (b.X.row(i) == machine.support_vectors.row(s))
            sv[static_cast<std::size_t>(b.y[static_cast<std::size_t>(i)])].insert(i);
    }
    for (std::size_t c = 0; c < 3; ++c)
      CHECK(static_cast<int>(sv[c].size()) == ref.support[c]);
    CHECK(m.predict(b.X) == labels_from(ref.predictions));
  }
}

TEST_CASE("SVM on separated blobs and input errors") {
  const Blobs b = gaussian_blobs(30, 4, 8.0, 2);
  const SvmModel m = SvmModel::train(b.X, b.y, SvmConfig{});
  CHECK(accuracy(b.y, m.predict(b.X)) == 100.0);
  CHECK(m.gamma() == 0.25);
  const ClassIds one(static_cast<std::size_t>(b.X.rows()), 1);
  CHECK_THROWS_AS(SvmModel::train(b.X, one, SvmConfig{}), ClassifierError);
  FeatureRows bad = b.X;
  bad(3, 1) = std::nan("");
  CHECK_THROWS_AS(SvmModel::train(bad, b.y, SvmConfig{}), ClassifierError);
  CHECK_THROWS_AS(m.predict(FeatureRows::Zero(2, 5)), ClassifierError);
  CHECK(parse_svm_kernel("polynomial") == SvmKernel::Polynomial);
  CHECK_FALSE(parse_svm_kernel("poly").has_value());
}

// ---------------------------------------------------------------------------
// k-NN

TEST_CASE("kd-tree search equals a linear scan") {
  const auto linear_scan = [](const FeatureRows &P, const Eigen::RowVectorXd &q) {
    Eigen::Index best = 0;
    double best_d2 = squared_distance(P.row(0), q);
    for (Eigen::Index i = 1; i < P.rows(); ++i) {
      const double d2 = squared_distance(P.row(i), q);
      if (d2 < best_d2) {
        best_d2 = d2;
        best = i;
      }
    }
    return best;
  };
  for (int dims : {2, 5, 16}) {
    const FeatureRows P = random_matrix(500, dims, 40 + static_cast<std::uint64_t>(dims));
    const KdTree tree(P);
    CHECK(tree.max_leaf_size() <= kKnnLeafCapacity);
    CHECK(tree.node_count() > 1);
    const FeatureRows Q = random_matrix(300, dims, 80 + static_cast<std::uint64_t>(dims));
    for (Eigen::Index i = 0; i < Q.rows(); ++i)
      CHECK(tree.nearest(Q.row(i)) == linear_scan(P, Q.row(i)));
    for (Eigen::Index i = 0; i < P.rows(); ++i)
      CHECK(tree.nearest(P.row(i)) == i);
  }
  // Integer lattice points with duplicates: many exact ties.
  Rng rng(3);
  FeatureRows lattice(500, 3);
  for (Eigen::Index i = 0; i < lattice.size(); ++i)
    lattice(i) = static_cast<double>(rng.below(5));
  const KdTree tree(lattice, 7);
  CHECK(tree.max_leaf_size() <= 7);
  for (int a = -1; a <= 5; ++a)
    for (int b = -1; b <= 5; ++b)
      for (int c = -1; c <= 5; ++c) {
        const Eigen::RowVector3d q(a + 0.5 * (a % 2), b, c - 0.5);
        CHECK(tree.nearest(q) == linear_scan(lattice, q));
      }
}

TEST_CASE("1-NN classification rules") {
  FeatureRows X(2, 1);
  X << -1.0, 1.0;
  const KnnModel m = KnnModel::train(X, ClassIds{2, 0});
  FeatureRows mid(1, 1);
  mid << 0.0;
  CHECK(m.predict(mid) == ClassIds{2});

  const Blobs b = gaussian_blobs(100, 6, 1.0, 5);
  const KnnModel full = KnnModel::train(b.X, b.y);
  CHECK(accuracy(b.y, full.predict(b.X)) == 100.0);
  CHECK_THROWS_AS(full.predict(FeatureRows::Zero(1, 2)), ClassifierError);
  CHECK_THROWS_AS(KnnModel::train(FeatureRows(0, 2), ClassIds{}), ClassifierError);
}

// ---------------------------------------------------------------------------
// Decision tree

TEST_CASE("Gini impurity") {
  CHECK(gini(std::vector<int>{5, 0, 0}) == 0.0);
  CHECK(gini(std::vector<int>{2, 1}) == doctest::Approx(4.0 / 9.0).epsilon(1e-15));
  CHECK(gini(std::vector<int>{1, 1, 1}) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("a three-point tree splits once between the classes") {
  FeatureRows X(3, 1);
  X << 0.0, 1.0, 2.0;
  const TreeModel t = TreeModel::train(X, ClassIds{0, 0, 1});
  CHECK(t.split_count() == 1);
  const auto &root = t.nodes().front();
  CHECK(root.feature == 0);
  CHECK(root.threshold > 1.0);
  CHECK(root.threshold < 2.0);
  CHECK(t.predict(X) == ClassIds{0, 0, 1});
}

TEST_CASE("pure input gives a single leaf") {
  const Blobs b = gaussian_blobs(5, 3, 1.0, 1);
  const ClassIds same(static_cast<std::size_t>(b.X.rows()), 2);
  const TreeModel t = TreeModel::train(b.X, same);
  CHECK(t.split_count() == 0);
  CHECK(t.nodes().size() == 1);
  CHECK(t.depth() == 0);
  CHECK(t.predict(b.X.topRows(3)) == ClassIds{2, 2, 2});
}

TEST_CASE("trees fit distinct points exactly within the split budget") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Blobs b = gaussian_blobs(40, 5, 0.5, seed);
    const TreeModel t = TreeModel::train(b.X, b.y);
    CHECK(accuracy(b.y, t.predict(b.X)) == 100.0);
    CHECK(t.split_count() <= b.X.rows() - 1);
    for (const auto &n : t.nodes())
      if (n.feature >= 0) {
        CHECK(n.left > 0);
        CHECK(n.right > 0);
      }
    TreeConfig capped;
    capped.max_splits = 3;
    CHECK(TreeModel::train(b.X, b.y, capped).split_count() <= 3);
  }
  // A label pattern that needs a zero-gain first split (XOR on a grid).
  const Blobs x = xor_data();
  CHECK(TreeModel::train(x.X, x.y).predict(x.X) == x.y);
}

TEST_CASE("tree leaves break majority ties toward the lowest class") {
  FeatureRows X(4, 1);
  X << 1.0, 1.0, 1.0, 1.0; // no split can separate identical points
  const TreeModel t = TreeModel::train(X, ClassIds{2, 1, 2, 1});
  CHECK(t.split_count() == 0);
  CHECK(t.predict(X.topRows(1)) == ClassIds{1});
}

// ---------------------------------------------------------------------------
// MLP

TEST_CASE("MLP gradient matches central finite differences") {
  const FeatureRows X = random_matrix(5, 3, 21);
  const ClassIds y{0, 1, 2, 1, 0};
  const std::vector<int> classes{0, 1, 2};
  const Eigen::MatrixXd T = one_hot(y, classes);
  for (const std::vector<int> &sizes : {std::vector<int>{3, 4, 3}, std::vector<int>{3, 6, 5, 3}}) {
    const MlpLayout layout{sizes};
    Eigen::VectorXd theta = mlp_initial_parameters(layout, 4);
    Eigen::VectorXd grad;
    mlp_loss(layout, theta, X, T, &grad);
    REQUIRE(grad.size() == layout.parameter_count());
    const double h = 1e-6;
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
      Eigen::VectorXd up = theta, down = theta;
      up[i] += h;
      down[i] -= h;
      const double fd = (mlp_loss(layout, up, X, T) - mlp_loss(layout, down, X, T)) / (2 * h);
      CHECK(std::abs(grad[i] - fd) <= 1e-4 * std::max(std::abs(grad[i]), std::abs(fd)) + 1e-10);
    }
  }
}

TEST_CASE("MLP layout and loss definition") {
  const MlpLayout layout{{3, 4, 2}};
  CHECK(layout.parameter_count() == 4 * 3 + 4 + 2 * 4 + 2);
  CHECK(layout.weight_offset(0) == 0);
  CHECK(layout.bias_offset(0) == 12);
  CHECK(layout.weight_offset(1) == 16);
  CHECK(layout.bias_offset(1) == 24);
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(layout.parameter_count());
  theta[layout.bias_offset(1)] = 0.5; // output 0 constant 0.5, output 1 constant 0
  const FeatureRows X = random_matrix(6, 3, 2);
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(6, 2);
  T.col(1).setOnes();
  // Mean over 12 entries of (0.5)² and 1².
  CHECK(mlp_loss(layout, theta, X, T) == doctest::Approx((6 * 0.25 + 6 * 1.0) / 12.0));
  const Eigen::VectorXd init = mlp_initial_parameters(layout, 9);
  CHECK(init.head(12).cwiseAbs().maxCoeff() <= 1.0 / std::sqrt(3.0));
  CHECK(init.segment(16, 8).cwiseAbs().maxCoeff() <= 0.5);
}

TEST_CASE("Rprop learns XOR for most seeds") {
  const Blobs x = xor_data();
  int solved = 0;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    MlpConfig cfg;
    cfg.architecture = {100};
    cfg.trainer = MlpTrainer::Rprop;
    cfg.weight_seed = seed;
    const MlpModel m = MlpModel::fit(x.X, x.y, cfg);
    CHECK(m.history().epochs <= 100);
    solved += accuracy(x.y, m.predict(x.X)) == 100.0;
  }
  CHECK(solved >= 25);
}

TEST_CASE("gradient descent with a zero learning rate leaves the weights unchanged") {
  const Blobs b = gaussian_blobs(10, 3, 2.0, 6);
  MlpConfig cfg;
  cfg.architecture = {7};
  cfg.trainer = MlpTrainer::Gd;
  cfg.learning_rate = 0.0;
  cfg.max_epochs = 12;
  const MlpModel m = MlpModel::fit(b.X, b.y, cfg);
  const MlpLayout layout{{3, 7, 3}};
  CHECK(m.parameters() == mlp_initial_parameters(layout, cfg.weight_seed));
  const auto &err = m.history().train_error;
  REQUIRE(err.size() == 13);
  for (double e : err)
    CHECK(e == err.front());
}

TEST_CASE("early stopping after five failures") {
  EarlyStopping stop(5);
  const double errors[] = {1.0, 0.8, 0.85, 0.9, 0.95, 1.0, 1.05, 1.1, 1.15, 1.2};
  int halted = -1;
  for (int epoch = 0; epoch < 10; ++epoch) {
    stop.update(errors[epoch]);
    if (stop.should_stop()) {
      halted = epoch;
      break;
    }
  }
  CHECK(halted >= 0);
  CHECK(halted <= 7);
  CHECK(stop.best() == 0.8);
  CHECK(stop.failures() == 5);

  EarlyStopping reset(2);
  CHECK(reset.update(1.0));
  CHECK_FALSE(reset.update(1.5));
  CHECK(reset.update(0.5));
  CHECK(reset.failures() == 0);
}

TEST_CASE("MLP training halts on a diverging validation set and keeps the best epoch") {
  const Blobs b = gaussian_blobs(20, 3, 3.0, 8);
  ClassIds flipped = b.y;
  for (int &v : flipped)
    v = (v + 1) % 3;
  MlpConfig cfg;
  cfg.architecture = {10};
  cfg.trainer = MlpTrainer::Rprop;
  const MlpModel m = MlpModel::fit(b.X, b.y, b.X, flipped, cfg);
  const MlpHistory &h = m.history();
  CHECK(h.epochs < cfg.max_epochs);
  CHECK(h.epochs - h.best_epoch == cfg.patience);
  const auto best = std::min_element(h.validation_error.begin(), h.validation_error.end());
  CHECK(best - h.validation_error.begin() == h.best_epoch);
}

TEST_CASE("every MLP trainer reduces the training error") {
  const Blobs b = gaussian_blobs(30, 4, 3.0, 12);
  for (MlpTrainer t : {MlpTrainer::Batch, MlpTrainer::Gd, MlpTrainer::Gdm, MlpTrainer::Gda,
                       MlpTrainer::Gdx, MlpTrainer::Rprop}) {
    MlpConfig cfg;
    cfg.architecture = {12};
    cfg.trainer = t;
    cfg.max_epochs = 60;
    const MlpModel m = MlpModel::fit(b.X, b.y, cfg);
    INFO("trainer " << to_string(t));
    CHECK(m.history().train_error.back() < m.history().train_error.front());
    CHECK(parse_mlp_trainer(to_string(t)) == t);
  }
}

TEST_CASE("MLP split and configuration checks") {
  MlpConfig cfg;
  const MlpSplit s = mlp_split(100, cfg, 3);
  CHECK(s.train.size() == 70);
  CHECK(s.validation.size() == 15);
  CHECK(s.test.size() == 15);
  std::set<Eigen::Index> all(s.train.begin(), s.train.end());
  all.insert(s.validation.begin(), s.validation.end());
  all.insert(s.test.begin(), s.test.end());
  CHECK(all.size() == 100);
  CHECK(mlp_split(100, cfg, 3).train == s.train);
  CHECK_THROWS_AS(mlp_split(3, cfg, 1), ClassifierError);

  MlpConfig bad;
  bad.train_fraction = 0.8;
  CHECK_THROWS(validate(bad));
  bad = MlpConfig{};
  bad.architecture = {};
  CHECK_THROWS(validate(bad));
  CHECK(architecture_name({100, 100}) == "100-100");
}

// ---------------------------------------------------------------------------
// Shared surface

TEST_CASE("train_classifier dispatches every family") {
  const Blobs b = gaussian_blobs(15, 4, 6.0, 13);
  MlpConfig mlp;
  mlp.architecture = {8};
  const ClassifierConfig configs[] = {ElmConfig{}, SvmConfig{}, KnnConfig{}, TreeConfig{}, mlp};
  const char *kinds[] = {"elm:sigmoid", "svm:linear", "knn:none", "tree:none", "mlp:rprop:8"};
  for (std::size_t i = 0; i < std::size(configs); ++i) {
    const TrainedModel m = train_classifier(configs[i], b.X, b.y);
    CHECK(m.kind() == kinds[i]);
    CHECK(m.train_seconds() >= 0.0);
    CHECK(m.dims() == 4);
    CHECK(m.predict(b.X).size() == b.y.size());
    CHECK_THROWS_AS(m.predict(FeatureRows::Zero(1, 5)), ClassifierError);
    CHECK(static_cast<std::size_t>(family_of(configs[i])) == i);
  }
  CHECK(parse_classifier_family("knn") == ClassifierFamily::Knn);
  CHECK_FALSE(parse_classifier_family("forest").has_value());
}

TEST_CASE("timing and tie-break helpers") {
  const double idle = timeit([] {});
  CHECK(idle >= 0.0);
  CHECK(idle < 0.01);
  const auto t = timed([] { return 42; });
  CHECK(t.value == 42);
  CHECK(t.seconds >= 0.0);
  CHECK(argmax_lowest(Eigen::Vector3d(0.2, 0.7, 0.7)) == 1);
  CHECK(argmax_lowest(Eigen::Vector3d(1.0, 1.0, 1.0)) == 0);
  CHECK(accuracy(std::vector<int>{0, 1, 2, 2}, std::vector<int>{0, 1, 1, 2}) == 75.0);
  CHECK_THROWS_AS(distinct_classes(std::vector<int>{0, -1}), ClassifierError);
}

TEST_CASE("repeated training reproduces predictions while timings vary") {
  const Blobs b = gaussian_blobs(40, 10, 2.0, 14);
  SvmConfig rbf;
  rbf.kernel = SvmKernel::Rbf;
  std::set<double> seconds;
  std::vector<int> first;
  for (int rep = 0; rep < 5; ++rep) {
    const TrainedModel m = train_classifier(rbf, b.X, b.y);
    seconds.insert(m.train_seconds());
    const auto p = m.predict(b.X);
    if (rep == 0)
      first = p;
    CHECK(p == first);
  }
  CHECK(seconds.size() > 1);
}
